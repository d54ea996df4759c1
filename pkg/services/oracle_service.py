"""
Ground-truth engines for the normal approximation: exact hypergeometric
tails of the released sample, and a seeded Monte Carlo of release-and-decide
trials.

Random streams: trials are processed in blocks of TRIAL_BLOCK_SIZE; trial i
belongs to block i // TRIAL_BLOCK_SIZE and block b draws from
SeedSequence(seed, spawn_key=(b,)). Results do not depend on how blocks are
scheduled.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple

import numpy as np
from scipy.special import logsumexp, ndtri

from models.ber_report import BerReport
from models.environment import Environment
from models.reservoir_state import IntegerReservoirState
from models.transmitter_config import TransmitterConfig
from models.trial_outcome import TrialOutcome
from services import thermo_service
from services.exceptions import ThermodynamicDomainError

logger = logging.getLogger(__name__)

EXACT_SAMPLER_LIMIT = 10_000
TRIAL_BLOCK_SIZE = 1 << 16
CONFIDENCE_Z = float(ndtri(0.995))  # two-sided 99%
# a bit that was never sent carries no evidence: coin flip over all of [0, 1]
UNSENT_ESTIMATE = 0.5
UNSENT_HALFWIDTH = 0.5


def hypergeom_log_pmf(good: int, bad: int, n_draw: int) -> Tuple[int, np.ndarray]:
    """
    Log pmf of the number of "good" items in n_draw draws without replacement.

    Terms come from the ratio recurrence
        p(i+1) / p(i) = (good - i)(n - i) / ((i + 1)(bad - n + i + 1)),
    accumulated outward from the mode and normalised with logsumexp. Each
    ratio is a quotient of exactly representable products, so there is no
    cancellation between huge log-factorials.

    Args:
        good: Items of the counted species in the population
        bad: Items of the other species
        n_draw: Sample size

    Returns:
        tuple: (first support value, log pmf over the support)
    """
    total = good + bad
    if n_draw > total:
        raise ThermodynamicDomainError(
            f"Cannot draw {n_draw} molecules from a reservoir of {total}"
        )
    lo = max(0, n_draw - bad)
    hi = min(n_draw, good)
    if lo == hi:
        return lo, np.zeros(1)

    i = np.arange(lo, hi, dtype=np.float64)
    numerator = (good - i) * (n_draw - i)
    denominator = (i + 1.0) * (bad - n_draw + i + 1.0)
    log_ratio = np.log(numerator / denominator)

    mode = (n_draw + 1) * (good + 1) // (total + 2)
    k = min(max(mode, lo), hi) - lo
    log_weight = np.empty(hi - lo + 1)
    log_weight[k] = 0.0
    log_weight[k + 1:] = np.cumsum(log_ratio[k:])
    log_weight[:k] = -np.cumsum(log_ratio[:k][::-1])[::-1]

    return lo, log_weight - logsumexp(log_weight)


def hypergeom_tail(good: int, bad: int, n_draw: int, threshold: int) -> float:
    """P(count of good in the sample >= threshold), exact."""
    lo, log_pmf = hypergeom_log_pmf(good, bad, n_draw)
    start = max(threshold - lo, 0)
    if start >= len(log_pmf):
        return 0.0
    tail = math.fsum(np.exp(log_pmf[start:]))
    return min(max(tail, 0.0), 1.0)


def bit0_threshold(cfg: TransmitterConfig) -> int:
    """Smallest k1 count read as a correct bit 0: floor(N_m (1 - c)) + 1."""
    return math.floor(cfg.get_n_release() * (1.0 - cfg.get_c_init())) + 1


def bit1_threshold(cfg: TransmitterConfig) -> int:
    """Smallest k2 count read as a correct bit 1: floor(N_m c) + 1."""
    return math.floor(cfg.get_n_release() * cfg.get_c_init()) + 1


def _require_state(state: IntegerReservoirState) -> None:
    is_valid, error_msg = state.validate()
    if not is_valid:
        raise ThermodynamicDomainError(error_msg)


def hypergeom_tail_bit0(state: IntegerReservoirState, cfg: TransmitterConfig) -> float:
    """
    Exact P(Y=0 | X=0): the k1 count of N_m molecules drawn from the low
    reservoir reaches floor(N_m (1 - c)) + 1.

    Raises:
        ThermodynamicDomainError: if N_m exceeds the low reservoir
    """
    _require_state(state)
    if cfg.get_n_release() > state.get_n_low():
        raise ThermodynamicDomainError("Release size exceeds the low reservoir")
    return hypergeom_tail(state.get_k1_low(), state.get_k2_low(),
                          cfg.get_n_release(), bit0_threshold(cfg))


def hypergeom_tail_bit1(state: IntegerReservoirState, cfg: TransmitterConfig) -> float:
    """
    Exact P(Y=1 | X=1): the k2 count of N_m molecules drawn from the high
    reservoir reaches floor(N_m c) + 1.

    Raises:
        ThermodynamicDomainError: if N_m exceeds the high reservoir
    """
    _require_state(state)
    if cfg.get_n_release() > state.get_n_high():
        raise ThermodynamicDomainError("Release size exceeds the high reservoir")
    return hypergeom_tail(state.get_k2_high(), state.get_k1_high(),
                          cfg.get_n_release(), bit1_threshold(cfg))


def state_after_move(cfg: TransmitterConfig, m_int: int) -> IntegerReservoirState:
    """Integer reservoir counts after moving m_int molecules of k2."""
    k2_low = round(cfg.get_c_init() * cfg.get_n_low()) - m_int
    k2_high = round(cfg.get_c_init() * cfg.get_n_high()) + m_int
    state = IntegerReservoirState(
        k2_low=k2_low,
        k1_low=cfg.get_n_low() - k2_low,
        k2_high=k2_high,
        k1_high=cfg.get_n_high() - k2_high
    )
    is_valid, error_msg = state.validate(cfg)
    if not is_valid:
        raise ThermodynamicDomainError(f"Moving {m_int} molecules: {error_msg}")
    return state


def build_state(cfg: TransmitterConfig, env: Environment, e: float) -> IntegerReservoirState:
    """
    Integer reservoir state after spending e joules.

    The real-valued moved count is rounded to the nearest integer, ties to
    even, as are the initial k2 counts.

    Raises:
        ThermodynamicDomainError: if e is outside the energy domain or a count
            goes negative
    """
    m_int = round(thermo_service.moved_from_energy(cfg, env, e))
    return state_after_move(cfg, m_int)


def sample_release_counts(rng: np.random.Generator, good: int, bad: int,
                          n_draw: int, size: int) -> np.ndarray:
    """
    Draw `size` counts of good items in samples of n_draw without replacement.

    Up to EXACT_SAMPLER_LIMIT draws the exact pmf is inverted; beyond it a
    binomial with p = good / (good + bad) stands in.
    """
    if size == 0:
        return np.zeros(0, dtype=np.int64)
    if n_draw <= EXACT_SAMPLER_LIMIT:
        lo, log_pmf = hypergeom_log_pmf(good, bad, n_draw)
        cdf = np.cumsum(np.exp(log_pmf))
        index = np.searchsorted(cdf, rng.random(size), side="right")
        return lo + np.minimum(index, len(cdf) - 1).astype(np.int64)
    return rng.binomial(n_draw, good / (good + bad), size=size).astype(np.int64)


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Generator of trial block `block` under root seed `seed`."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def decode(k1_in_sample: np.ndarray, n_release: int, c_init: float) -> np.ndarray:
    """
    Decision rule on the released sample: bit 0 iff k1/k2 >= 1/c - 1,
    i.e. k1 c >= k2 (1 - c); ties read as bit 0.
    """
    k2_in_sample = n_release - k1_in_sample
    return np.where(k1_in_sample * c_init >= k2_in_sample * (1.0 - c_init), 0, 1)


def _simulate_block(state: IntegerReservoirState, cfg: TransmitterConfig,
                    seed: int, block: int, size: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = block_generator(seed, block)
    n_release = cfg.get_n_release()
    sent = rng.integers(0, 2, size=size)
    k1 = np.empty(size, dtype=np.int64)

    zeros = sent == 0
    k1[zeros] = sample_release_counts(rng, state.get_k1_low(), state.get_k2_low(),
                                      n_release, int(zeros.sum()))
    ones = ~zeros
    k1[ones] = n_release - sample_release_counts(rng, state.get_k2_high(), state.get_k1_high(),
                                                 n_release, int(ones.sum()))
    return sent, k1


def _block_sizes(n_trials: int) -> List[int]:
    full, rest = divmod(n_trials, TRIAL_BLOCK_SIZE)
    return [TRIAL_BLOCK_SIZE] * full + ([rest] if rest else [])


def _check_trials(state: IntegerReservoirState, cfg: TransmitterConfig, n_trials: int) -> None:
    if n_trials < 1:
        raise ValueError("At least one trial is required")
    _require_state(state)
    if cfg.get_n_release() > min(state.get_n_low(), state.get_n_high()):
        raise ThermodynamicDomainError("Release size exceeds a reservoir")
    if cfg.get_n_release() > EXACT_SAMPLER_LIMIT:
        logger.info(
            "N_m=%d above %d: sampling releases from the binomial approximation",
            cfg.get_n_release(), EXACT_SAMPLER_LIMIT
        )


def _halfwidth(p: float, n: int) -> float:
    if n == 0:
        return UNSENT_HALFWIDTH
    return CONFIDENCE_Z * math.sqrt(p * (1.0 - p) / n)


def _conditional_estimate(correct: int, sent: int, bit: int) -> float:
    if sent == 0:
        logger.warning("Bit %d was never sent; reporting the coin-flip estimate", bit)
        return UNSENT_ESTIMATE
    return correct / sent


def run_trials(state: IntegerReservoirState, cfg: TransmitterConfig, n_trials: int,
               seed: int, workers: int = 1) -> BerReport:
    """
    Monte Carlo estimate of the transmitter BER.

    Each trial sends an equiprobable bit, releases N_m molecules from the
    matching reservoir and decodes the sample composition.

    Args:
        state: Integer reservoir counts
        cfg: Transmitter configuration (N_m and c)
        n_trials: Number of trials (>= 1)
        seed: Root seed; equal seeds give identical reports
        workers: Threads used to simulate blocks

    Returns:
        BerReport: empirical probabilities with 99% confidence half-widths.
            A bit that was never sent is reported as a coin flip, 0.5 +/- 0.5.
    """
    _check_trials(state, cfg, n_trials)
    sizes = _block_sizes(n_trials)

    def count_block(block: int) -> Tuple[int, int, int, int]:
        sent, k1 = _simulate_block(state, cfg, seed, block, sizes[block])
        decoded = decode(k1, cfg.get_n_release(), cfg.get_c_init())
        zeros = sent == 0
        return (int(zeros.sum()), int((decoded[zeros] == 0).sum()),
                int((~zeros).sum()), int((decoded[~zeros] == 1).sum()))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(count_block, range(len(sizes))))
    else:
        counts = [count_block(block) for block in range(len(sizes))]

    sent0 = sum(c[0] for c in counts)
    correct0 = sum(c[1] for c in counts)
    sent1 = sum(c[2] for c in counts)
    correct1 = sum(c[3] for c in counts)

    p0 = _conditional_estimate(correct0, sent0, 0)
    p1 = _conditional_estimate(correct1, sent1, 1)
    # both bits weigh 1/2 regardless of how often each was drawn
    ber = 1.0 - (p0 + p1) / 2.0
    halfwidth_0 = _halfwidth(p0, sent0)
    halfwidth_1 = _halfwidth(p1, sent1)
    logger.debug("Simulated %d trials for %s: ber=%.6g", n_trials, cfg, ber)

    return BerReport(
        p_correct_0=p0,
        p_correct_1=p1,
        ber=ber,
        halfwidth_0=halfwidth_0,
        halfwidth_1=halfwidth_1,
        halfwidth_ber=0.5 * math.hypot(halfwidth_0, halfwidth_1),
        n_trials=n_trials
    )


def simulate_outcomes(state: IntegerReservoirState, cfg: TransmitterConfig,
                      n_trials: int, seed: int) -> List[TrialOutcome]:
    """Per-trial records drawn from the same streams as run_trials."""
    _check_trials(state, cfg, n_trials)
    n_release = cfg.get_n_release()
    outcomes = []
    for block, size in enumerate(_block_sizes(n_trials)):
        sent, k1 = _simulate_block(state, cfg, seed, block, size)
        decoded = decode(k1, n_release, cfg.get_c_init())
        for bit, guess, count in zip(sent, decoded, k1):
            outcomes.append(TrialOutcome(bit, guess, count, n_release - count))
    return outcomes
