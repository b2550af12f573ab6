"""
Quasi-probability distributions of the reduced mode state

For a coherent initial state |alpha0> the reduced state at time t is a displaced
thermal state with centre mu alpha0 and thermal spread sigma = nbar sin^2 G~.
The three distributions are Gaussians in the measure d^2alpha = d(Re) d(Im):

    Q  width 1 + sigma      P  width sigma      W  width 1/2 + sigma

Fock initial states give the Laguerre-weighted Wigner function and binomial
(zero temperature) populations. Grid helpers evaluate and integrate fields with
composite Simpson quadrature.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np
from scipy.integrate import simpson
from scipy.signal import fftconvolve
from scipy.special import gammaln
from scipy.stats import binom

from .bath import EffectiveBath
from .config.settings import settings
from .exceptions import DomainError, SingularDistributionError
from .mode_dynamics import default_schedule
from .schedules import CouplingSchedule, mixing_angles
from .special import laguerre, scaled_laguerre

logger = logging.getLogger(__name__)

ComplexLike = Union[complex, np.ndarray]


class DistributionKind(str, Enum):
    HUSIMI = "husimi"
    GLAUBER_P = "glauber_p"
    WIGNER = "wigner"


class CharacteristicKind(str, Enum):
    ANTINORMAL = "antinormal"
    NORMAL = "normal"
    WIGNER = "wigner"


# width offset over the thermal spread sigma
_WIDTH_OFFSET = {
    DistributionKind.HUSIMI: 1.0,
    DistributionKind.GLAUBER_P: 0.0,
    DistributionKind.WIGNER: 0.5,
}


@dataclass(frozen=True)
class PhaseGrid:
    """Rectangular grid in the complex plane, axis 0 = Re(alpha), axis 1 = Im(alpha)"""
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    n_re: int
    n_im: int

    def __post_init__(self):
        if not self.re_max > self.re_min or not self.im_max > self.im_min:
            raise DomainError("phase grid bounds must satisfy max > min on both axes")
        if self.n_re < 2 or self.n_im < 2:
            raise DomainError(f"phase grid needs >= 2 points per axis, got {self.n_re}x{self.n_im}")

    @property
    def re_axis(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.n_re)

    @property
    def im_axis(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.n_im)

    @property
    def cell_area(self) -> float:
        return ((self.re_max - self.re_min) / (self.n_re - 1)
                * (self.im_max - self.im_min) / (self.n_im - 1))

    def points(self) -> np.ndarray:
        """Complex grid points, shape (n_re, n_im)"""
        re, im = np.meshgrid(self.re_axis, self.im_axis, indexing="ij")
        return re + 1j * im

    def to_dict(self) -> dict:
        return {"re_min": self.re_min, "re_max": self.re_max, "im_min": self.im_min,
                "im_max": self.im_max, "n_re": self.n_re, "n_im": self.n_im}


@dataclass
class DistributionField:
    grid: PhaseGrid
    values: np.ndarray
    kind: DistributionKind


@dataclass(frozen=True)
class GaussianSummary:
    kind: DistributionKind
    t: float
    center: complex
    width: float

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "t": self.t,
                "center": [self.center.real, self.center.imag], "width": self.width}


def _angles(t: float, eff: EffectiveBath, sched: Optional[CouplingSchedule]):
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    return mixing_angles(t, default_schedule(eff.gamma, sched))


def thermal_spread(t: float, eff: EffectiveBath,
                   sched: Optional[CouplingSchedule] = None) -> float:
    """sigma = nbar sin^2 G~ (= nbar (1 - e^{-gamma t}) for the exponential schedule)"""
    _, sin_g = _angles(t, eff, sched)
    return eff.nbar * sin_g ** 2


def coherent_center(t: float, alpha0: complex, eff: EffectiveBath, omega0: float,
                    sched: Optional[CouplingSchedule] = None) -> complex:
    """mu(t) alpha0"""
    cos_g, _ = _angles(t, eff, sched)
    return complex(np.exp(-1j * omega0 * t) * cos_g * alpha0)


def gaussian_summary(kind: DistributionKind, t: float, alpha0: complex, eff: EffectiveBath,
                     omega0: float, sched: Optional[CouplingSchedule] = None) -> GaussianSummary:
    kind = DistributionKind(kind)
    width = thermal_spread(t, eff, sched) + _WIDTH_OFFSET[kind]
    center = coherent_center(t, alpha0, eff, omega0, sched)
    return GaussianSummary(kind=kind, t=t, center=center, width=width)


def _gaussian_density(alpha: ComplexLike, center: complex, width: float) -> np.ndarray:
    return np.exp(-np.abs(np.asarray(alpha) - center) ** 2 / width) / (np.pi * width)


def husimi_q(alpha: ComplexLike, t: float, alpha0: complex, eff: EffectiveBath, omega0: float,
             sched: Optional[CouplingSchedule] = None):
    """Q(alpha) = exp(-|alpha - mu alpha0|^2 / (1 + sigma)) / (pi (1 + sigma))"""
    s = gaussian_summary(DistributionKind.HUSIMI, t, alpha0, eff, omega0, sched)
    return _gaussian_density(alpha, s.center, s.width)


def husimi_peak_path(t: float, alpha0: complex, gamma: float, omega0: float) -> complex:
    """Location of the Q maximum under exponential coupling: e^{-i w0 t} e^{-gamma t/2} alpha0"""
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    return complex(np.exp(-1j * omega0 * t) * np.exp(-gamma * t / 2) * alpha0)


def glauber_p(alpha: ComplexLike, t: float, alpha0: complex, eff: EffectiveBath, omega0: float,
              sched: Optional[CouplingSchedule] = None):
    """Regular Gaussian P-function; a delta distribution when sigma = 0"""
    s = gaussian_summary(DistributionKind.GLAUBER_P, t, alpha0, eff, omega0, sched)
    if s.width < settings.LIMIT_THRESHOLD:
        raise SingularDistributionError(
            "P-function is a delta distribution (t = 0 or nbar = 0)", location=s.center
        )
    return _gaussian_density(alpha, s.center, s.width)


def wigner_coherent(alpha: ComplexLike, t: float, alpha0: complex, eff: EffectiveBath,
                    omega0: float, sched: Optional[CouplingSchedule] = None):
    s = gaussian_summary(DistributionKind.WIGNER, t, alpha0, eff, omega0, sched)
    return _gaussian_density(alpha, s.center, s.width)


def characteristic_fn(lam: ComplexLike, t: float, alpha0: complex, eff: EffectiveBath,
                      omega0: float, kind: CharacteristicKind,
                      sched: Optional[CouplingSchedule] = None):
    """Antinormal, normal and symmetric (Wigner) characteristic functions

        C_A = exp(-(1 + sigma)|l|^2) exp(l conj(mu alpha0) - conj(l) mu alpha0)
        C_N = C_A e^{|l|^2},   C_W = C_N e^{-|l|^2/2}
    """
    kind = CharacteristicKind(kind)
    lam = np.asarray(lam, dtype=complex)
    sigma = thermal_spread(t, eff, sched)
    beta = coherent_center(t, alpha0, eff, omega0, sched)
    r2 = np.abs(lam) ** 2
    shift = np.exp(lam * np.conj(beta) - np.conj(lam) * beta)
    c_antinormal = np.exp(-(1 + sigma) * r2) * shift
    if kind is CharacteristicKind.ANTINORMAL:
        return c_antinormal
    c_normal = c_antinormal * np.exp(r2)
    if kind is CharacteristicKind.NORMAL:
        return c_normal
    return c_normal * np.exp(-r2 / 2)


def fock_characteristic_normal(lam: ComplexLike, t: float, n: int, eff: EffectiveBath,
                               sched: Optional[CouplingSchedule] = None):
    """C_N(l) = L_N(cos^2 G~ |l|^2) exp(-sigma |l|^2) for an initial Fock state |N>"""
    cos_g, _ = _angles(t, eff, sched)
    r2 = np.abs(np.asarray(lam)) ** 2
    return laguerre(n, cos_g ** 2 * r2) * np.exp(-thermal_spread(t, eff, sched) * r2)


def pn_coherent(n: int, t: float, alpha0: complex, eff: EffectiveBath,
                sched: Optional[CouplingSchedule] = None) -> float:
    """Fock population of the displaced thermal state

        P_n = sigma^n / (1+sigma)^{n+1} e^{-|d|^2/(1+sigma)} L_n(-|d|^2 / (sigma (1+sigma)))

    with |d|^2 = cos^2 G~ |alpha0|^2; the Poisson law at sigma = 0.
    """
    if n < 0:
        return 0.0
    cos_g, _ = _angles(t, eff, sched)
    sigma = thermal_spread(t, eff, sched)
    d2 = cos_g ** 2 * abs(alpha0) ** 2
    if sigma < settings.LIMIT_THRESHOLD:
        if d2 == 0:
            return 1.0 if n == 0 else 0.0
        return float(np.exp(-d2 + n * np.log(d2) - gammaln(n + 1)))
    x = d2 / (1 + sigma)
    # sigma^n L_n(-x/sigma) without forming the large argument
    poly = scaled_laguerre(n, -x, sigma)
    return float(np.exp(-x - (n + 1) * np.log1p(sigma)) * poly)


def pn_coherent_distribution(t: float, alpha0: complex, eff: EffectiveBath,
                             sched: Optional[CouplingSchedule] = None,
                             tolerance: float = 1e-12, max_n: int = 100000) -> np.ndarray:
    """P_0, P_1, ... up to the adaptive cutoff where the remaining mass is below `tolerance`"""
    probs = []
    total = 0.0
    mean = abs(alpha0) ** 2 + eff.nbar
    n = 0
    while n < max_n:
        p = pn_coherent(n, t, alpha0, eff, sched)
        probs.append(p)
        total += p
        if n > mean and 1.0 - total < tolerance:
            break
        n += 1
    return np.array(probs)


def pn_thermal_stationary(n: int, nbar: float) -> float:
    """Geometric law nbar^n / (1 + nbar)^{n+1}"""
    if n < 0:
        return 0.0
    if nbar == 0:
        return 1.0 if n == 0 else 0.0
    return float(np.exp(n * np.log(nbar) - (n + 1) * np.log1p(nbar)))


def pn_fock_zero_temp(n: int, t: float, n_initial: int, sched: CouplingSchedule) -> float:
    """Binomial law C(N, n) cos^{2n} G~ sin^{2(N-n)} G~ for |N> and zero-temperature baths"""
    if n_initial < 0:
        raise DomainError(f"Fock index must be >= 0, got {n_initial}")
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    cos_g, _ = mixing_angles(t, sched)
    return float(binom.pmf(n, n_initial, cos_g ** 2))


def wigner_fock(alpha: ComplexLike, t: float, n: int, eff: EffectiveBath,
                sched: Optional[CouplingSchedule] = None):
    """Wigner function of the reduced state for an initial Fock state |N>

        W = (-1)^N / pi * psi^N / phi^{N+1} * e^{-|a|^2/phi} * L_N((phi+psi)|a|^2/(phi psi))
        phi = nbar sin^2 G~ + 1/2,   psi = cos^2 G~ - phi
    """
    if n < 0:
        raise DomainError(f"Fock index must be >= 0, got {n}")
    cos_g, _ = _angles(t, eff, sched)
    phi = thermal_spread(t, eff, sched) + 0.5
    psi = cos_g ** 2 - phi
    r2 = np.abs(np.asarray(alpha)) ** 2
    arg = cos_g ** 2 * r2 / phi
    if abs(psi) < settings.LIMIT_THRESHOLD:
        psi = 0.0
    poly = scaled_laguerre(n, arg, psi)
    return (-1) ** n / np.pi * poly / phi ** (n + 1) * np.exp(-r2 / phi)


def antinormal_second_moment(t: float, alpha0: complex, eff: EffectiveBath,
                             sched: Optional[CouplingSchedule] = None) -> float:
    """<a a^dag> = 1 + |alpha0|^2 cos^2 G~ + nbar sin^2 G~"""
    cos_g, _ = _angles(t, eff, sched)
    return 1.0 + abs(alpha0) ** 2 * cos_g ** 2 + thermal_spread(t, eff, sched)


def default_grid(summary: GaussianSummary, points: Optional[int] = None,
                 half_widths: Optional[float] = None) -> PhaseGrid:
    """Square grid centred on the Gaussian centre, half-width k * sqrt(width)

    Spacing scales with sqrt(width) for every kind, Glauber P included.
    """
    points = points or settings.PHASE_GRID_POINTS
    half_widths = half_widths or settings.PHASE_GRID_HALF_WIDTHS
    c = summary.center
    if summary.width < settings.LIMIT_THRESHOLD:
        raise SingularDistributionError(
            f"{summary.kind.value} at t={summary.t} is a delta function; no grid resolves it",
            location=c)
    half = half_widths * np.sqrt(summary.width)
    return PhaseGrid(re_min=c.real - half, re_max=c.real + half,
                     im_min=c.imag - half, im_max=c.imag + half,
                     n_re=points, n_im=points)


def evaluate_field(kind: DistributionKind, grid: PhaseGrid, t: float, alpha0: complex,
                   eff: EffectiveBath, omega0: float,
                   sched: Optional[CouplingSchedule] = None) -> DistributionField:
    """Sample a coherent-initial-state distribution on the grid"""
    kind = DistributionKind(kind)
    evaluators = {
        DistributionKind.HUSIMI: husimi_q,
        DistributionKind.GLAUBER_P: glauber_p,
        DistributionKind.WIGNER: wigner_coherent,
    }
    values = evaluators[kind](grid.points(), t, alpha0, eff, omega0, sched)
    return DistributionField(grid=grid, values=np.asarray(values, dtype=float), kind=kind)


def quadrature_integrate(field: DistributionField, moment: int = 0) -> float:
    """Composite Simpson integral of |alpha|^{2m} f(alpha) over the grid"""
    if moment < 0:
        raise DomainError(f"moment order must be >= 0, got {moment}")
    values = np.asarray(field.values, dtype=float)
    peak = np.max(np.abs(values)) if values.size else 0.0
    if peak > 0:
        edge = max(np.max(np.abs(values[0, :])), np.max(np.abs(values[-1, :])),
                   np.max(np.abs(values[:, 0])), np.max(np.abs(values[:, -1])))
        if edge > 1e-8 * peak:
            logger.warning("grid too small: boundary value %.3e exceeds 1e-8 of peak %.3e",
                           edge, peak)
    weight = np.abs(field.grid.points()) ** (2 * moment)
    inner = simpson(values * weight, x=field.grid.im_axis, axis=1)
    return float(simpson(inner, x=field.grid.re_axis))


def smooth_wigner_to_husimi(field: DistributionField) -> DistributionField:
    """Q = W convolved with the vacuum Wigner kernel (2/pi) e^{-2|alpha-beta|^2}"""
    if field.kind is not DistributionKind.WIGNER:
        raise DomainError(f"smoothing expects a Wigner field, got {field.kind.value}")
    grid = field.grid
    d_re = (grid.re_max - grid.re_min) / (grid.n_re - 1)
    d_im = (grid.im_max - grid.im_min) / (grid.n_im - 1)
    h_re, h_im = grid.n_re // 2, grid.n_im // 2
    off_re = np.arange(-h_re, h_re + 1) * d_re
    off_im = np.arange(-h_im, h_im + 1) * d_im
    kre, kim = np.meshgrid(off_re, off_im, indexing="ij")
    kernel = (2 / np.pi) * np.exp(-2 * (kre ** 2 + kim ** 2))
    smoothed = fftconvolve(field.values, kernel, mode="same") * grid.cell_area
    return DistributionField(grid=grid, values=smoothed, kind=DistributionKind.HUSIMI)
