"""Ensemble inputs and the derived observables of the detection scheme.

Covers Poisson-weighted coherent radiation, uniform mixtures of collective
atomic excitations, the conditional intensity gain after a successful
ground projection, and the timing observables: time of maximum detection
probability, first epsilon-crossing (threshold) time, peak widths, and
nearest-peak photon-number discrimination.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc

from .hp_model import ground_projection_probabilities, ground_projection_probability
from .numerics import log_factorial
from .traces import ProbabilityTrace

__all__ = [
    "CoherentInput",
    "AtomicMixture",
    "DiscriminationReport",
    "coherent_projection_probability",
    "mixed_projection_probability",
    "intensity_gain",
    "perception_time",
    "threshold_time",
    "discriminate_photon_number",
    "fwhm",
]

POISSON_TAIL_BOUND = 1e-12


def _poisson_tail(nmax: int, intensity: float) -> float:
    """P[X > nmax] for X ~ Poisson(intensity)."""
    return float(gammainc(nmax + 1, intensity))


def _auto_truncation(intensity: float) -> int:
    nmax = max(0, int(intensity))
    while _poisson_tail(nmax, intensity) >= POISSON_TAIL_BOUND:
        nmax += 1
    return nmax


@dataclass(frozen=True)
class CoherentInput:
    """Coherent radiation of mean photon number `intensity` = |alpha|^2.

    The Poisson photon-number series is truncated at truncation_nmax,
    auto-chosen (or validated) so the discarded tail is below 1e-12. The
    scheme is formulated for weak light; intensities >= 1 are allowed but
    flagged via in_design_regime.
    """

    intensity: float
    truncation_nmax: int | None = None

    def __post_init__(self) -> None:
        if not (self.intensity >= 0.0 and math.isfinite(self.intensity)):
            raise ValueError(f"intensity must be a finite non-negative real: {self.intensity!r}")
        if self.truncation_nmax is None:
            object.__setattr__(self, "truncation_nmax", _auto_truncation(self.intensity))
        elif self.truncation_nmax < 0 or _poisson_tail(
            self.truncation_nmax, self.intensity
        ) >= POISSON_TAIL_BOUND:
            raise ValueError(
                f"truncation_nmax={self.truncation_nmax} leaves a Poisson tail "
                f">= {POISSON_TAIL_BOUND} at intensity {self.intensity}"
            )

    @property
    def in_design_regime(self) -> bool:
        """True when the input is in the weak-light regime |alpha|^2 < 1."""
        return self.intensity < 1.0

    def photon_weights(self) -> np.ndarray:
        """Poisson weights exp(-intensity) * intensity^n / n! for n <= nmax."""
        ns = np.arange(self.truncation_nmax + 1)
        if self.intensity == 0.0:
            w = np.zeros(ns.size)
            w[0] = 1.0
            return w
        log_w = -self.intensity + ns * math.log(self.intensity)
        log_w -= np.array([log_factorial(int(k)) for k in ns])
        return np.exp(log_w)


@dataclass(frozen=True)
class AtomicMixture:
    """Uniform mixture of collective excitations m = 0..n_e_max, each with
    weight 1/(n_e_max + 1)."""

    n_e_max: int

    def __post_init__(self) -> None:
        if self.n_e_max < 0:
            raise ValueError(f"n_e_max must be >= 0, got {self.n_e_max}")

    def weights(self) -> np.ndarray:
        return np.full(self.n_e_max + 1, 1.0 / (self.n_e_max + 1))


@dataclass(frozen=True)
class DiscriminationReport:
    """Nearest-peak classification of an observed detection maximum."""

    inferred_n: int
    candidate_peak_times: np.ndarray
    distances: np.ndarray


def coherent_projection_probability(
    n_e: int, input: CoherentInput, tau_grid: np.ndarray
) -> ProbabilityTrace:
    """Detection probability for n_e excited atoms and coherent radiation:
    the Poisson-weighted sum of the pure Fock-input probabilities."""
    tau = np.asarray(tau_grid, dtype=float)
    weights = input.photon_weights()
    values = np.zeros(tau.shape)
    for n, w in enumerate(weights):
        values += w * ground_projection_probabilities(n_e, n, tau)
    return ProbabilityTrace(
        tau_grid=tau,
        values=np.minimum(values, 1.0),
        meta={
            "model": "coherent",
            "n_e": n_e,
            "intensity": input.intensity,
            "truncation_nmax": input.truncation_nmax,
            "in_design_regime": input.in_design_regime,
        },
    )


def mixed_projection_probability(
    mix: AtomicMixture, input: CoherentInput, tau_grid: np.ndarray
) -> ProbabilityTrace:
    """Detection probability for the uniform atomic mixture with coherent
    radiation: Poisson sum averaged over the excitation components."""
    tau = np.asarray(tau_grid, dtype=float)
    photon_w = input.photon_weights()
    values = np.zeros(tau.shape)
    for m in range(mix.n_e_max + 1):
        for n, w in enumerate(photon_w):
            values += w * ground_projection_probabilities(m, n, tau)
    values /= mix.n_e_max + 1
    return ProbabilityTrace(
        tau_grid=tau,
        values=np.minimum(values, 1.0),
        meta={
            "model": "mixed",
            "n_e_max": mix.n_e_max,
            "intensity": input.intensity,
            "truncation_nmax": input.truncation_nmax,
            "in_design_regime": input.in_design_regime,
        },
    )


def intensity_gain(
    atoms: int | AtomicMixture, input: CoherentInput, tau: float
) -> float:
    """Conditional intensity amplification I(tau)/I(0) after a successful
    ground projection at scaled time tau.

    Every surviving component started as (m excited atoms, n photons) and
    leaves n + m photons behind; the expectation runs over the projection-
    renormalized weights Poisson(n) * P(m, n, tau). Approaches n_e/intensity
    for the pure state and n_e/(2*intensity) for the uniform mixture as
    tau -> pi/2.
    """
    if input.intensity <= 0.0:
        raise ValueError("intensity gain requires a nonzero input intensity")
    photon_w = input.photon_weights()
    if isinstance(atoms, AtomicMixture):
        m_values = range(atoms.n_e_max + 1)
    else:
        if atoms < 0:
            raise ValueError(f"n_e must be >= 0, got {atoms}")
        m_values = (atoms,)
    total_weight = 0.0
    total_photons = 0.0
    for m in m_values:
        for n, w in enumerate(photon_w):
            p = w * ground_projection_probability(m, n, tau)
            total_weight += p
            total_photons += p * (n + m)
    if total_weight <= 0.0:
        raise ValueError(
            f"projection probability vanishes at tau={tau}; "
            "conditional gain is undefined"
        )
    return total_photons / (total_weight * input.intensity)


def perception_time(n_e: int, n: int) -> float:
    """Scaled time at which P(n_e, n, tau) is maximal:
    arccos(sqrt(n / (n + n_e))), in (0, pi/2] for n_e >= 1.

    The all-vacuum case n_e = n = 0 has a flat unit probability; pi/2 is
    returned by convention. With n_e = 0 and photons present the maximum
    degenerates to tau = 0.
    """
    if n_e < 0 or n < 0:
        raise ValueError(f"occupation numbers must be non-negative: n_e={n_e}, n={n}")
    if n_e == 0 and n == 0:
        return math.pi / 2.0
    return math.acos(math.sqrt(n / (n + n_e)))


def threshold_time(n_e: int, n: int, epsilon: float = 0.01) -> float:
    """Earliest scaled time at which the detection probability reaches
    epsilon, located by bisection on the rising flank (the probability
    increases monotonically up to the perception time)."""
    if not 0.0 < epsilon:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    tau_peak = perception_time(n_e, n)
    peak = ground_projection_probability(n_e, n, tau_peak)
    if epsilon >= peak:
        raise ValueError(
            f"no threshold: epsilon={epsilon} is not below the peak "
            f"probability {peak} of (n_e={n_e}, n={n})"
        )
    if n_e == 0:
        return 0.0  # instant response: probability starts at 1 and falls
    # bracket the first crossing on a coarse grid of the rising flank
    grid = np.linspace(0.0, tau_peak, 257)
    values = ground_projection_probabilities(n_e, n, grid)
    hit = int(np.argmax(values >= epsilon))
    lo, hi = grid[hit - 1], grid[hit]
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if ground_projection_probability(n_e, n, mid) >= epsilon:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def discriminate_photon_number(
    n_e: int, observed_peak_time: float, n_max: int
) -> DiscriminationReport:
    """Infer the input photon number from an observed detection maximum.

    The candidate peak times arccos(sqrt(n / (n + n_e))) for n = 0..n_max
    are well separated for n_e a few times larger than n; the nearest one
    wins, with ties resolved toward smaller n.
    """
    if not 0.0 < observed_peak_time <= math.pi / 2.0 + 1e-12:
        raise ValueError(
            f"observed peak time must lie in (0, pi/2], got {observed_peak_time}"
        )
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    candidates = np.array(
        [math.acos(math.sqrt(n / (n + n_e))) if n + n_e else math.pi / 2.0
         for n in range(n_max + 1)]
    )
    distances = np.abs(candidates - observed_peak_time)
    inferred = int(np.argmin(distances))  # argmin takes the first, i.e. smallest n
    return DiscriminationReport(
        inferred_n=inferred,
        candidate_peak_times=candidates,
        distances=distances,
    )


def fwhm(trace: ProbabilityTrace) -> float:
    """Full width at half maximum of a single-peaked trace, with the two
    half-maximum crossings located by linear interpolation between grid
    points."""
    v = trace.values
    tau = trace.tau_grid
    i_peak = trace.peak_index
    half = trace.peak_value / 2.0
    below_left = np.nonzero(v[:i_peak] < half)[0]
    below_right = np.nonzero(v[i_peak:] < half)[0]
    if below_left.size == 0 or below_right.size == 0:
        raise ValueError("trace does not fall below half maximum on both sides of the peak")
    li = int(below_left[-1])
    t_left = tau[li] + (half - v[li]) * (tau[li + 1] - tau[li]) / (v[li + 1] - v[li])
    ri = i_peak + int(below_right[0])
    t_right = tau[ri - 1] + (half - v[ri - 1]) * (tau[ri] - tau[ri - 1]) / (v[ri] - v[ri - 1])
    return float(t_right - t_left)
