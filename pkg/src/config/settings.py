"""
Application configuration module
"""
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings"""

    # Oracle truncation
    # Highest Fock level kept per bosonic mode (levels 0..FOCK_CUTOFF)
    FOCK_CUTOFF: int = 30
    # Largest thermal weight that may be discarded by the truncation
    THERMAL_TAIL_TOLERANCE: float = 1e-9

    # Oracle time stepping
    ORACLE_STEP_COUNT: int = 10000
    ORACLE_MAX_STEP_COUNT: int = 160000
    ORACLE_CONVERGENCE_TOLERANCE: float = 1e-8

    # Phase-space grids
    PHASE_GRID_POINTS: int = 257
    PHASE_GRID_HALF_WIDTHS: float = 6.0

    # Crossover threshold for the sigma=0 / psi=0 limit branches
    LIMIT_THRESHOLD: float = 1e-12

    # Driven-mode quadrature: step = fraction * min(1/gamma, 2*pi/omega0)
    QUADRATURE_STEP_FRACTION: float = 0.01

    # Verification
    VERIFY_MAX_WORKERS: int = 4

    # Output
    LOG_LEVEL: str = "WARNING"
    OUTPUT_DIGITS: int = 17

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"


# Singleton instance
settings = Settings()
