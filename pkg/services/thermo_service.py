"""
Two-reservoir transmitter thermodynamics.

Moving m molecules of species k2 from the low reservoir to the high one
costs free energy; inverting that cost tells how far a given energy budget
purifies the two reservoirs.
"""

import logging
import math

from scipy.special import xlog1py

from models.environment import Environment
from models.reservoir_fractions import ReservoirFractions
from models.transmitter_config import TransmitterConfig
from services.exceptions import ThermodynamicDomainError

logger = logging.getLogger(__name__)

# beta above this and the second-order inversion is no longer trustworthy
TAYLOR_BETA_LIMIT = 0.1


def _require_physics(cfg: TransmitterConfig, env: Environment) -> None:
    is_valid, error_msg = env.validate()
    if not is_valid:
        raise ThermodynamicDomainError(error_msg)
    if cfg.get_n_low() < 1 or cfg.get_n_high() < 1:
        raise ThermodynamicDomainError("Reservoirs must hold at least one molecule")
    if not 0 < cfg.get_c_init() < 1:
        raise ThermodynamicDomainError("Initial mole fraction must lie strictly between 0 and 1")


def psi(cfg: TransmitterConfig, env: Environment) -> float:
    """
    Energy sensitivity of the low reservoir, c / (k_B T n_low), per joule.

    With n_low = n_high the low fraction after spending e joules is
    c - sqrt(psi * e).
    """
    return cfg.get_c_init() / (env.thermal_energy() * cfg.get_n_low())


def fractions_after_move(cfg: TransmitterConfig, env: Environment, m: float) -> ReservoirFractions:
    """
    Mole fractions after moving m molecules of k2 from low to high.

    Args:
        cfg: Transmitter configuration
        env: Physical constants
        m: Molecules moved (real valued, >= 0)

    Returns:
        ReservoirFractions: c_low = c - m/n_low, c_high = c + m/n_high

    Raises:
        ThermodynamicDomainError: if m is negative, drains the low reservoir
            of k2 or overfills the high one
    """
    _require_physics(cfg, env)
    if m < 0:
        raise ThermodynamicDomainError(f"Moved molecule count must be non-negative, got {m}")

    c = cfg.get_c_init()
    c_low = c - m / cfg.get_n_low()
    c_high = c + m / cfg.get_n_high()
    if c_low < 0:
        raise ThermodynamicDomainError(
            f"Moving {m:.6g} molecules drains k2 from the low reservoir (c_low={c_low:.6g})"
        )
    if c_high > 1:
        raise ThermodynamicDomainError(
            f"Moving {m:.6g} molecules overfills the high reservoir (c_high={c_high:.6g})"
        )

    alpha = 2.0 * m / cfg.get_n_total()
    return ReservoirFractions(
        c_low=c_low,
        c_high=c_high,
        moved=m,
        alpha=alpha,
        beta=alpha / c,
        psi=psi(cfg, env)
    )


def energy_cost_exact(cfg: TransmitterConfig, env: Environment, m: float) -> float:
    """
    Free energy needed to move m molecules of k2, without the Taylor step.

    Symmetric reservoirs use the alpha/beta form
        E = n_high k T [(c + alpha) log(1 + beta) + (c - alpha) log(1 - beta)];
    otherwise the general mixing-entropy form is used with its c log c terms
    cancelled through conservation (n_high * dH = n_low * dL = m):
        E = k T [n_high (c + dH) log(1 + dH/c) + n_low (c - dL) log(1 - dL/c)].

    Args:
        cfg: Transmitter configuration
        env: Physical constants
        m: Molecules moved

    Returns:
        float: Energy in joules, >= 0

    Raises:
        ThermodynamicDomainError: as fractions_after_move
    """
    fractions = fractions_after_move(cfg, env, m)
    if m == 0:
        return 0.0

    c = cfg.get_c_init()
    kt = env.thermal_energy()
    if cfg.is_symmetric():
        alpha = fractions.get_alpha()
        beta = fractions.get_beta()
        bracket = xlog1py(c + alpha, beta) + xlog1py(c - alpha, -beta)
        energy = cfg.get_n_high() * kt * bracket
    else:
        d_high = fractions.get_c_high() - c
        d_low = c - fractions.get_c_low()
        energy = kt * (cfg.get_n_high() * xlog1py(c + d_high, d_high / c)
                       + cfg.get_n_low() * xlog1py(c - d_low, -d_low / c))
    return max(float(energy), 0.0)


def moved_from_energy(cfg: TransmitterConfig, env: Environment, e: float) -> float:
    """
    Invert the second-order energy cost: molecules moved for e joules.

    m = sqrt(2 c e n_low n_high / (k T n_k)), which is sqrt(c n_k e / (2 k T))
    when the reservoirs are equal.

    Args:
        cfg: Transmitter configuration
        env: Physical constants
        e: Energy in joules

    Returns:
        float: Real-valued molecule count

    Raises:
        ThermodynamicDomainError: if e < 0, if psi * e >= c^2 (low reservoir
            emptied of k2) or if the high reservoir would reach purity
    """
    _require_physics(cfg, env)
    if e < 0:
        raise ThermodynamicDomainError(f"Energy must be non-negative, got {e}")

    c = cfg.get_c_init()
    n_low = cfg.get_n_low()
    n_high = cfg.get_n_high()
    m = math.sqrt(2.0 * c * e * n_low * n_high / (env.thermal_energy() * cfg.get_n_total()))

    if (m / n_low) ** 2 >= c ** 2:
        raise ThermodynamicDomainError(
            f"Energy {e:.6g} J leaves no k2 in the low reservoir (psi*e >= c^2)"
        )
    if m / n_high >= 1 - c:
        raise ThermodynamicDomainError(
            f"Energy {e:.6g} J leaves no k1 in the high reservoir"
        )

    beta = 2.0 * m / (c * cfg.get_n_total())
    if beta > TAYLOR_BETA_LIMIT:
        logger.warning(
            "beta=%.4f exceeds %.2f for %s at e=%.4g J; second-order inversion is inaccurate",
            beta, TAYLOR_BETA_LIMIT, cfg, e
        )
    return m


def fractions_after_energy(cfg: TransmitterConfig, env: Environment, e: float) -> ReservoirFractions:
    """
    Reservoir mole fractions after spending e joules on purification.

    With n_low = n_high this is c -/+ sqrt(psi * e).

    Raises:
        ThermodynamicDomainError: as moved_from_energy
    """
    return fractions_after_move(cfg, env, moved_from_energy(cfg, env, e))
