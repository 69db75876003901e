"""
Tests for reading ring, module and diagram files.
"""
import pytest

from conftest import DATA_DIR
from exceptions import ModuleAxiomError, NotAModuleMapError, SpecParseError
from fpmod import iso_probe
from spec_loader import SpecLoader, module_to_spec_text, parse_diagram, parse_module


@pytest.fixture
def loader():
    return SpecLoader()


@pytest.fixture
def ring(loader):
    return loader.load_ring(str(DATA_DIR / "dual2.ring"))


class TestModules:
    """Module blocks."""

    def test_presentation(self, loader, ring):
        k = loader.load_module(str(DATA_DIR / "k.mod"), ring)
        assert k.name == "k"
        assert k.dim == 1

    def test_representation(self, loader, ring):
        a = loader.load_module(str(DATA_DIR / "gp_testset" / "free.mod"), ring)
        assert a.dim == 2
        assert a.num_relations == 0

    def test_over_local3(self, loader):
        local3 = loader.load_ring(str(DATA_DIR / "local3.ring"))
        m = loader.load_module(str(DATA_DIR / "local3_m.mod"), local3)
        assert m.dim == 2

    def test_right_side(self, ring):
        m = parse_module("module k over dual2 side=right\npresentation gens=1\nrel 0 1\n", ring)
        assert m.side == "right"

    def test_presentation_text_round_trip(self, loader, ring):
        k = loader.load_module(str(DATA_DIR / "k.mod"), ring)
        again = parse_module(module_to_spec_text(k), ring)
        assert iso_probe(k, again).isomorphic

    def test_wrong_ring(self, ring):
        with pytest.raises(SpecParseError, match="local3"):
            parse_module("module k over local3 side=left\npresentation gens=1\nrel 0 1\n", ring)

    def test_bad_relation_length(self, ring):
        with pytest.raises(SpecParseError) as info:
            parse_module("module k over dual2 side=left\npresentation gens=1\nrel 0 1 1\n", ring, source="k.mod")
        assert info.value.line == 3

    def test_incomplete_action(self, ring):
        text = "module k over dual2 side=left\nrepresentation dim=1\naction 0\n1\n"
        with pytest.raises(SpecParseError):
            parse_module(text, ring)

    def test_axiom_failure_is_not_a_parse_error(self, ring):
        text = "module k over dual2 side=left\nrepresentation dim=1\naction 0\n1\naction 1\n1\n"
        with pytest.raises(ModuleAxiomError):
            parse_module(text, ring)


class TestDiagrams:
    """Maps and sequences."""

    def test_thm24_diagram(self, loader, ring):
        diagram = loader.load_diagram(str(DATA_DIR / "thm24_dual2.dia"), ring)
        assert set(diagram.modules) == {"k", "A"}
        assert [f.name for f in diagram.sequence(0)] == ["incl", "times_x", "proj"]

    def test_missing_sequence(self, loader, ring):
        diagram = loader.load_diagram(str(DATA_DIR / "thm24_dual2.dia"), ring)
        with pytest.raises(SpecParseError):
            diagram.sequence(1)

    def test_undeclared_module(self, ring):
        with pytest.raises(SpecParseError, match="undeclared"):
            parse_diagram("module k over dual2 side=left\npresentation gens=1\nrel 0 1\nmap f k B\n0\n", ring)

    def test_non_linear_map(self, ring):
        text = (DATA_DIR / "ses_k.dia").read_text().replace("map incl k A\n0\n1", "map incl k A\n1\n0")
        with pytest.raises(NotAModuleMapError):
            parse_diagram(text, ring)


class TestLoader:
    """File handling."""

    def test_missing_file(self, loader):
        with pytest.raises(FileNotFoundError):
            loader.load_ring(str(DATA_DIR / "nope.ring"))

    def test_directory(self, loader, ring):
        modules = loader.load_directory(str(DATA_DIR / "gp_testset"), ring)
        assert sorted(m.dim for m in modules) == [1, 2]
        assert loader.get_statistics()["total_files_processed"] == 3

    def test_missing_directory(self, loader, ring):
        with pytest.raises(FileNotFoundError):
            loader.load_directory(str(DATA_DIR / "nowhere"), ring)
