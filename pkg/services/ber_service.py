"""
Transmitter-side bit error rate under the normal approximation.

A bit-0 release draws N_m molecules from the low reservoir and is read
correctly when its k1 count exceeds N_m (1 - c); a bit-1 release draws from
the high reservoir and is read correctly when its k2 count exceeds N_m c.
Counts are approximated as normal with binomial moments.
"""

import logging
import math

import numpy as np
from scipy.special import erfc

from models.ber_report import BerReport
from models.environment import Environment
from models.reservoir_fractions import ReservoirFractions
from models.selection_stats import SelectionStats
from models.transmitter_config import TransmitterConfig
from services import thermo_service
from services.exceptions import DegenerateDistributionError, ThermodynamicDomainError

logger = logging.getLogger(__name__)

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def std_normal_cdf(x):
    """Phi(x) through the complementary error function; accurate in the lower tail."""
    return 0.5 * erfc(-x / _SQRT2)


def std_normal_sf(x):
    """1 - Phi(x) without cancellation in the upper tail."""
    return 0.5 * erfc(x / _SQRT2)


def std_normal_pdf(x):
    """phi(x) = exp(-x^2 / 2) / sqrt(2 pi)."""
    return _INV_SQRT_2PI * np.exp(-0.5 * np.square(x))


def selection_stats(cfg: TransmitterConfig, fr: ReservoirFractions) -> SelectionStats:
    """Binomial moments of the k1 count (bit 0) and k2 count (bit 1)."""
    n_release = cfg.get_n_release()
    c_low = fr.get_c_low()
    c_high = fr.get_c_high()
    return SelectionStats(
        mu0=n_release * (1.0 - c_low),
        sigma0=math.sqrt(n_release * c_low * (1.0 - c_low)),
        mu1=n_release * c_high,
        sigma1=math.sqrt(n_release * c_high * (1.0 - c_high))
    )


def _bit0_bounds(cfg: TransmitterConfig, fr: ReservoirFractions, exact_threshold: bool):
    c_low = fr.get_c_low()
    if not 0 < c_low < 1:
        raise DegenerateDistributionError(
            f"Low reservoir is pure (c_low={c_low}); use the exact oracle"
        )
    stats = selection_stats(cfg, fr)
    n_release = cfg.get_n_release()
    threshold = n_release * (1.0 - cfg.get_c_init())
    if exact_threshold:
        threshold = math.floor(threshold) + 1
    upper = (n_release - stats.get_mu0()) / stats.get_sigma0()
    lower = (threshold - stats.get_mu0()) / stats.get_sigma0()
    return upper, lower


def _bit1_bounds(cfg: TransmitterConfig, fr: ReservoirFractions, exact_threshold: bool):
    c_high = fr.get_c_high()
    if not 0 < c_high < 1:
        raise DegenerateDistributionError(
            f"High reservoir is pure (c_high={c_high}); use the exact oracle"
        )
    stats = selection_stats(cfg, fr)
    n_release = cfg.get_n_release()
    threshold = n_release * cfg.get_c_init()
    if exact_threshold:
        threshold = math.floor(threshold) + 1
    upper = (n_release - stats.get_mu1()) / stats.get_sigma1()
    lower = (threshold - stats.get_mu1()) / stats.get_sigma1()
    return upper, lower


def p_correct_bit0(cfg: TransmitterConfig, fr: ReservoirFractions,
                   exact_threshold: bool = False) -> float:
    """
    P(Y=0 | X=0) = Phi((N_m - mu0)/sigma0) - Phi((N_m (1 - c) - mu0)/sigma0).

    Args:
        cfg: Transmitter configuration
        fr: Reservoir fractions after purification
        exact_threshold: Use floor(N_m (1 - c)) + 1 instead of N_m (1 - c)

    Raises:
        DegenerateDistributionError: if c_low is 0 or 1
    """
    upper, lower = _bit0_bounds(cfg, fr, exact_threshold)
    return float(max(std_normal_cdf(upper) - std_normal_cdf(lower), 0.0))


def p_correct_bit1(cfg: TransmitterConfig, fr: ReservoirFractions,
                   exact_threshold: bool = False) -> float:
    """
    P(Y=1 | X=1) = Phi((N_m - mu1)/sigma1) - Phi((N_m c - mu1)/sigma1).

    Raises:
        DegenerateDistributionError: if c_high is 0 or 1
    """
    upper, lower = _bit1_bounds(cfg, fr, exact_threshold)
    return float(max(std_normal_cdf(upper) - std_normal_cdf(lower), 0.0))


def _error_given_bounds(upper: float, lower: float) -> float:
    # 1 - (Phi(upper) - Phi(lower)) with both tails kept small
    return float(std_normal_sf(upper) + std_normal_cdf(lower))


def ber_from_fractions(cfg: TransmitterConfig, fr: ReservoirFractions,
                       exact_threshold: bool = False) -> BerReport:
    """
    Per-user BER for already computed reservoir fractions (equiprobable bits).

    The error probabilities are summed in complement form so BER values far
    below machine epsilon relative to 1 keep their precision.
    """
    upper0, lower0 = _bit0_bounds(cfg, fr, exact_threshold)
    upper1, lower1 = _bit1_bounds(cfg, fr, exact_threshold)
    p0 = float(max(std_normal_cdf(upper0) - std_normal_cdf(lower0), 0.0))
    p1 = float(max(std_normal_cdf(upper1) - std_normal_cdf(lower1), 0.0))
    ber = 0.5 * (_error_given_bounds(upper0, lower0) + _error_given_bounds(upper1, lower1))
    return BerReport(p_correct_0=p0, p_correct_1=p1, ber=ber)


def transmitter_ber(cfg: TransmitterConfig, env: Environment, e: float) -> BerReport:
    """
    BER of one transmitter that spent e joules on purification.

    Args:
        cfg: Transmitter configuration
        env: Physical constants
        e: Energy allocated to this transmitter (J)

    Returns:
        BerReport: conditional correct probabilities and BER

    Raises:
        ThermodynamicDomainError: if e is outside the valid energy domain
    """
    fractions = thermo_service.fractions_after_energy(cfg, env, e)
    return ber_from_fractions(cfg, fractions)


def symmetric_user_ber(n_release: int, psi: float, energy: float) -> float:
    """
    Closed-form BER of a c = 1/2, n_low = n_high user:
    1 - Phi(sqrt(N (1/2 - s) / (1/2 + s))) + Phi(-sqrt(N s^2 / (1/4 - s^2))),
    with s = sqrt(psi * energy).
    """
    s_sq = psi * energy
    if s_sq >= 0.25:
        raise ThermodynamicDomainError("psi * E must stay below 1/4")
    s = math.sqrt(s_sq)
    upper = math.sqrt(n_release * (0.5 - s) / (0.5 + s))
    lower = -math.sqrt(n_release * s_sq / (0.25 - s_sq))
    return float(std_normal_sf(upper) + std_normal_cdf(lower))


def two_user_total_ber(rho: float, e_total: float, cfg1: TransmitterConfig,
                       cfg2: TransmitterConfig, env: Environment) -> float:
    """
    f(rho) = P_e,u1(rho E) + P_e,u2((1 - rho) E).

    Raises:
        ThermodynamicDomainError: if rho is outside (0, 1) or either share is
            outside its user's energy domain
    """
    if not 0 < rho < 1:
        raise ThermodynamicDomainError(f"Allocation coefficient must lie in (0, 1), got {rho}")
    ber1 = transmitter_ber(cfg1, env, rho * e_total).get_ber()
    ber2 = transmitter_ber(cfg2, env, (1.0 - rho) * e_total).get_ber()
    return ber1 + ber2


def _derivative_terms(n_release: int, psi: float, share: float, e_total: float):
    """The phi-weighted pair (A, B) of one user at energy share * e_total."""
    s_sq = psi * share * e_total
    gap = 0.25 - s_sq
    if not gap > 0:
        raise ThermodynamicDomainError(
            f"1/4 - psi*rho*E must be positive, got {gap:.6g}"
        )
    s = math.sqrt(s_sq)
    scale = math.sqrt(n_release * psi * e_total)
    upper = math.sqrt(n_release * (0.5 - s) / (0.5 + s))
    lower = -math.sqrt(n_release * s_sq / gap)
    a_term = 0.25 * std_normal_pdf(upper) * scale / (math.sqrt(share * gap) * (0.5 + s))
    b_term = 0.125 * std_normal_pdf(lower) * scale / (math.sqrt(share) * gap ** 1.5)
    return float(a_term), float(b_term)


def _require_symmetric_regime(cfg: TransmitterConfig) -> None:
    if not cfg.is_symmetric():
        raise ThermodynamicDomainError("g(rho) needs n_low = n_high")
    if abs(cfg.get_c_init() - 0.5) > 1e-12:
        raise ThermodynamicDomainError("g(rho) needs c_init = 1/2")


def is_symmetric_regime(cfg: TransmitterConfig) -> bool:
    """True when the closed-form derivative applies to this user."""
    return cfg.is_symmetric() and abs(cfg.get_c_init() - 0.5) <= 1e-12


def two_user_ber_derivative(rho: float, e_total: float, cfg1: TransmitterConfig,
                            cfg2: TransmitterConfig, env: Environment) -> float:
    """
    g(rho) = f'(rho) for two users with c = 1/2 and equal reservoirs:

        g = A1(rho) - B1(rho) - A2(1 - rho) + B2(1 - rho)

    where, for a user with share r, s = sqrt(psi r E) and d = 1/4 - psi r E,
        A(r) = 1/4 phi(sqrt(N (1/2 - s)/(1/2 + s))) sqrt(N psi E) / (sqrt(r d) (1/2 + s))
        B(r) = 1/8 phi(-sqrt(N psi r E / d)) sqrt(N psi E) / (sqrt(r) d^(3/2)).
    Users may differ in psi and N_m.

    Raises:
        ThermodynamicDomainError: outside the symmetric regime, for rho not in
            (0, 1), or where the variance terms vanish
    """
    if not 0 < rho < 1:
        raise ThermodynamicDomainError(f"Allocation coefficient must lie in (0, 1), got {rho}")
    _require_symmetric_regime(cfg1)
    _require_symmetric_regime(cfg2)

    a1, b1 = _derivative_terms(cfg1.get_n_release(), thermo_service.psi(cfg1, env), rho, e_total)
    a2, b2 = _derivative_terms(cfg2.get_n_release(), thermo_service.psi(cfg2, env), 1.0 - rho, e_total)
    return a1 - b1 - a2 + b2
