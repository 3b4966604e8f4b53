"""Erlang loss formula, traffic intensity, and Little's-law estimation.

The production path for the blocking probability is the classic
recurrence

    B(0) = 1,   B(j) = rho * B(j-1) / (j + rho * B(j-1)),

which never forms a factorial and is stable for any ``c``. An exact
integer evaluation of the direct sum is provided separately as an oracle.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._validation import check_count, check_real
from .exceptions import DomainError, UnsupportedScaleError

#: Largest server count accepted by :func:`erlang_b_reference`.
REFERENCE_MAX_SERVERS = 500


@dataclass(frozen=True)
class LossStation:
    """A finite-capacity station with no waiting room.

    Attributes:
        servers: number of servers (beds).
        mean_service: mean service time in days.
        traffic_intensity: offered load in erlangs.
    """

    servers: int
    mean_service: float
    traffic_intensity: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "servers", check_count(self.servers, "servers"))
        object.__setattr__(
            self, "mean_service", check_real(self.mean_service, "mean_service", minimum=0.0, strict=True)
        )
        object.__setattr__(
            self,
            "traffic_intensity",
            check_real(self.traffic_intensity, "traffic_intensity", minimum=0.0),
        )

    @classmethod
    def from_rate(cls, servers, arrival_rate, mean_service):
        return cls(servers, mean_service, traffic_intensity(arrival_rate, mean_service))

    @property
    def blocking(self):
        return erlang_b(self.servers, self.traffic_intensity)


@dataclass(frozen=True)
class StandardIntensity:
    """Standard traffic intensity estimated from a loss-free observation window.

    ``alpha_s`` and ``alpha_s_valid`` stay ``None`` until a server count has
    been supplied through :func:`losscap.planner.standardize`.
    """

    rho_s: float
    source_days: int
    source_hospital_days: float
    alpha_s: Optional[float] = None
    alpha_s_valid: Optional[bool] = None

    @property
    def is_standardized(self):
        return self.alpha_s is not None


def erlang_b(servers, rho):
    """Blocking probability of an Erlang loss system.

    Args:
        servers: number of servers ``c`` (>= 0).
        rho: offered load in erlangs (>= 0).

    Returns:
        float in [0, 1], the probability that an arrival finds all servers
        busy.

    Raises:
        DomainError: if ``servers`` or ``rho`` is negative.
    """
    c = check_count(servers, "servers")
    rho = check_real(rho, "rho", minimum=0.0)
    b = 1.0
    for j in range(1, c + 1):
        rb = rho * b
        b = rb / (j + rb)
    return b


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(float(value))


def erlang_b_reference(servers, rho):
    """Exact Erlang loss formula by direct summation in integer arithmetic.

    ``rho`` is taken at its exact binary value p/q. Multiplying numerator and
    denominator of the formula by ``q**c * c!`` leaves

        alpha = p**c / sum_j p**j * q**(c-j) * c!/j!

    with every term an integer; the final integer division is correctly
    rounded. Intended as an independent check of :func:`erlang_b`.

    Raises:
        UnsupportedScaleError: if ``servers`` exceeds ``REFERENCE_MAX_SERVERS``.
    """
    c = check_count(servers, "servers")
    if c > REFERENCE_MAX_SERVERS:
        raise UnsupportedScaleError(
            f"erlang_b_reference supports at most {REFERENCE_MAX_SERVERS} servers, got {c}"
        )
    if not isinstance(rho, Fraction):
        rho = check_real(rho, "rho", minimum=0.0)
    elif rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    frac = _as_fraction(rho)
    if c == 0:
        return 1.0
    if frac == 0:
        return 0.0
    p, q = frac.numerator, frac.denominator
    # S(c) = sum_{j<=c} p^j q^(c-j) c!/j!  satisfies  S(m) = m*q*S(m-1) + p^m.
    total = 1
    p_pow = 1
    for m in range(1, c + 1):
        p_pow *= p
        total = m * q * total + p_pow
    return p_pow / total


def traffic_intensity(gamma, mean_service):
    """Offered load ``gamma / mu = gamma * mean_service``.

    Raises:
        DomainError: if ``mean_service`` is not positive or ``gamma`` is negative.
    """
    gamma = check_real(gamma, "gamma", minimum=0.0)
    mean_service = check_real(mean_service, "mean_service", minimum=0.0, strict=True)
    return gamma * mean_service


def estimate_rho_standard(total_hospital_days, window_days):
    """Estimate the standard intensity from occupied bed-days.

    In a loss-free period the station behaves as an infinite-server queue,
    so the mean number present equals the offered load; the mean number
    present is the occupied bed-days divided by the window length.
    """
    total = check_real(total_hospital_days, "total_hospital_days", minimum=0.0)
    days = check_count(window_days, "window_days", minimum=1)
    return StandardIntensity(rho_s=total / days, source_days=days, source_hospital_days=total)
