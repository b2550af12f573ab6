"""
Exception hierarchy shared by the dynamics, phase-space, oracle and CLI layers
"""
from typing import Any, Optional


class DynamicsError(Exception):
    """Base error, carrying a short error type and optional details for reports"""
    error_type = "dynamics"

    def __init__(self, message: str, details: str = "", error_type: Optional[str] = None):
        if error_type is not None:
            self.error_type = error_type
        self.details = details
        super().__init__(message)

    def to_error_message(self) -> str:
        """Format as a single-line message for stderr and verification reports"""
        msg = f"[{self.error_type}] {str(self)}"
        if self.details:
            msg += f" | {self.details[:300]}"
        return msg


class DomainError(DynamicsError):
    """Argument outside the domain of a formula (negative time, theta <= 0, ...)"""
    error_type = "domain"


class SingularityError(DynamicsError):
    """Quantity diverges at the requested point"""
    error_type = "singularity"


class DegenerateBathError(DynamicsError):
    """Reservoir set with vanishing total coupling"""
    error_type = "degenerate_bath"


class SingularDistributionError(DynamicsError):
    """Distribution is a delta function; `location` is where it sits"""
    error_type = "singular_distribution"

    def __init__(self, message: str, location: complex):
        self.location = location
        super().__init__(message, details=f"location={location!r}")


class NormalizationError(DynamicsError):
    """State vector or density matrix is not normalized"""
    error_type = "normalization"


class QuadratureError(DynamicsError):
    """Sampled data insufficient for the requested quadrature"""
    error_type = "quadrature"


class TruncationError(DynamicsError):
    """Fock-space truncation discards more weight than allowed"""
    error_type = "truncation"

    def __init__(self, message: str, discarded_weight: float, required_cutoff: int):
        self.discarded_weight = discarded_weight
        self.required_cutoff = required_cutoff
        super().__init__(
            message,
            details=f"discarded_weight={discarded_weight:.3e}, required_cutoff>={required_cutoff}",
        )


class ConvergenceError(DynamicsError):
    """Time stepping did not converge within the allowed step count"""
    error_type = "convergence"


class ConfigError(DynamicsError):
    """Invalid run configuration; `field_path` points at the offending field"""
    error_type = "config"

    def __init__(self, message: str, field_path: str = ""):
        self.field_path = field_path
        super().__init__(message, details=f"at {field_path}" if field_path else "")


class UnknownQuantityError(DynamicsError):
    """Verification suite names a quantity with no registered check"""
    error_type = "unknown_quantity"

    def __init__(self, name: Any):
        super().__init__(f"No verification check registered for quantity '{name}'")
