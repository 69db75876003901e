"""
Configuration settings for the gtrans homological algebra engine.
"""
from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Engine settings loaded from environment variables."""

    # Logging
    log_level: str = "INFO"

    # Bounds used by every "up to bound" verdict
    ext_bound: int = Field(6, ge=0)
    sweep_count: int = Field(200, ge=1)
    default_seed: int = 0

    # Linear algebra guard: triple products of residues summed over a table must stay inside int64
    max_prime: int = 2 ** 15

    # Radical maximality is only verified through the computed path up to this dimension
    radical_verify_max_dim: int = 32

    # Isomorphism probing
    iso_exhaustive_limit: int = 2 ** 16
    iso_random_trials: int = 64

    # Randomized search for minimal generating sets
    generator_search_trials: int = 64

    # Small-instance enumeration
    enumeration_max_dim: int = Field(5, ge=0, le=5)
    enumeration_budget: int = 2_000_000

    # Default Gorenstein-projectivity mode for the CLI: "bounded" or "ring"
    gp_mode: str = "bounded"

    class Config:
        env_file = ".env"
        env_prefix = "GTRANS_"
        case_sensitive = False
        extra = "ignore"


# Global settings instance
settings = Settings()
