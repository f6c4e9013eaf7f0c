"""Generalization-gap bounds and their empirical verification.

The bound calculators evaluate the closed-form high-probability bounds on
``|C - C_hat|`` for each training scheme exactly as displayed, with the
absolute constant ``C1 = 1 / (9 pi^3 ln 2)`` of the sphere-concentration
inequality.  The experiment helpers measure the actual gaps at empirically
minimized circuits and check the Lipschitz implications by direct sampling;
full risks are Monte-Carlo estimates, so comparisons carry a 3-stderr margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    _matrix,
    _realify_raw,
    complexify,
    random_linear_optical,
    spectral_distance,
    substream,
)
from .errors import InvalidParameter
from .optimize import OptimConfig, minimize
from .risk import empirical_risk, full_risk_mc
from .training import Scheme, sample_sphere, sample_training_set

C1 = 1.0 / (9.0 * math.pi**3 * math.log(2.0))
"""Absolute constant of the sphere-concentration inequality."""


@dataclass(frozen=True)
class BoundParams:
    """Arguments of the gap bounds: modes M, size T, energy E, confidence delta."""

    modes: int
    size: int | float
    energy: float
    delta: float
    c1: float = C1

    def __post_init__(self):
        if self.modes < 1 or self.size < 1:
            raise InvalidParameter("modes and size must be >= 1")
        if self.energy < 0:
            raise InvalidParameter("energy must be nonnegative")
        if not 0.0 < self.delta < 1.0:
            raise InvalidParameter("delta must lie in (0, 1)")

    # Internal proof parameters, exposed for diagnostics only.
    @property
    def epsilon_erm1(self) -> float:
        return math.sqrt(self.energy / self.size)

    @property
    def epsilon_erm2(self) -> float:
        return math.sqrt(self.energy / (self.c1 * self.modes * self.size**3))


def gap_bound_erm2(params: BoundParams) -> float:
    """High-probability bound on the ERM2 generalization gap."""
    m, t, e, c1 = params.modes, params.size, params.energy, params.c1
    log_cover = math.log(6.0 * math.sqrt(c1 * m * t**3))
    radicand = 16.0 * e * m * log_cover / (c1 * t**3) + 16.0 * e * math.log(
        2.0 / params.delta
    ) / (c1 * m * t**3)
    if radicand < 0:
        raise InvalidParameter("bound undefined: negative radicand at these parameters")
    return math.sqrt(radicand) + 2.0 * math.sqrt(e / (c1 * m * t**3))


def gap_bound_erm1(params: BoundParams) -> float:
    """High-probability bound on the ERM1 generalization gap."""
    m, t, e = params.modes, params.size, params.energy
    radicand = 32.0 * e * m**2 * math.log(6.0 * math.sqrt(t)) / t + 32.0 * e * math.log(
        2.0 / params.delta
    ) / t
    return math.sqrt(radicand) + 2.0 * math.sqrt(e / t)


def gap_bound_erm1_prime(params: BoundParams) -> float:
    """ERM1 bound with the per-state energy lowered to E/T (total budget E).

    The concentration increments shrink by 1/T, which replaces 32E by 32E/T
    in both radicand terms and E/T by E/T^2 under the trailing square root.
    """
    m, t, e = params.modes, params.size, params.energy
    e_eff = e / t
    radicand = 32.0 * e_eff * m**2 * math.log(6.0 * math.sqrt(t)) / t + 32.0 * e_eff * math.log(
        2.0 / params.delta
    ) / t
    return math.sqrt(radicand) + 2.0 * math.sqrt(e) / t


_BOUNDS = {
    Scheme.ERM1: gap_bound_erm1,
    Scheme.ERM1P: gap_bound_erm1_prime,
    Scheme.ERM2: gap_bound_erm2,
}


def gap_bound(scheme, params: BoundParams) -> float:
    """Dispatch to the bound matching the training scheme."""
    return _BOUNDS[Scheme.coerce(scheme)](params)


def minimal_sufficient_size(scheme, modes: int, energy: float, delta: float, level: float = 1.0) -> float:
    """Smallest (real-valued) training size whose gap bound drops to ``level``."""
    scheme = Scheme.coerce(scheme)
    lo, hi = 1.0, 2.0
    for _ in range(80):
        if gap_bound(scheme, BoundParams(modes, hi, energy, delta)) <= level:
            break
        hi *= 2.0
    else:
        raise InvalidParameter("bound does not reach the requested level")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap_bound(scheme, BoundParams(modes, mid, energy, delta)) <= level:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True, eq=False)
class LipschitzReport:
    """Observed risk gaps of a circuit pair against the Lipschitz budgets."""

    epsilon_erm1: float
    epsilon_erm2: float
    empirical_gap_max: float
    empirical_violations: int
    full_gap_erm1: float
    full_gap_erm1_stderr: float
    full_gap_erm2: float
    full_gap_erm2_stderr: float
    full_violations: int
    worst_ratio: float
    trials: int


def lipschitz_check(
    first,
    second,
    energy: float,
    trials: int,
    seed=None,
    size: int = 3,
    mc_samples: int = 20000,
) -> LipschitzReport:
    """Sample training sets and verify the risk-continuity implications.

    With ``d = ||O_W - O_V||`` (spectral), every empirical risk gap and the
    ERM1 full-risk gap must stay below ``eps1 = d sqrt(E)``, and the ERM2
    full-risk gap below ``eps2 = d sqrt(E (2M+1) / (2MT-1))``.  Full risks are
    estimated with common random numbers and compared with a 3-stderr margin.
    """
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    o_w = np.asarray(_matrix(first), dtype=float)
    o_v = np.asarray(_matrix(second), dtype=float)
    modes = o_w.shape[0] // 2
    distance = spectral_distance(o_w, o_v)
    eps1 = distance * math.sqrt(energy)
    eps2 = distance * math.sqrt(energy * (2 * modes + 1) / (2 * modes * size - 1))
    g_w, g_v = complexify(o_w), complexify(o_v)
    worst = 0.0
    gap_max = 0.0
    violations = 0
    for trial in range(trials):
        rng = substream(seed, trial)
        for scheme in (Scheme.ERM1, Scheme.ERM2):
            training = sample_training_set(scheme, modes, size, energy, seed=rng)
            gap = abs(
                empirical_risk(training, o_w, g_w).value
                - empirical_risk(training, o_w, g_v).value
            )
            gap_max = max(gap_max, gap)
            if eps1 > 0:
                worst = max(worst, gap / eps1)
            if gap > eps1 + 1e-12:
                violations += 1

    def full_gap(scheme, eps):
        values = []
        for hyp in (o_w, o_v):
            values.append(
                full_risk_mc(
                    scheme, o_w, hyp, modes, size, energy, mc_samples, seed=(0 if seed is None else seed, 1)
                )
            )
        gap = abs(values[0][0] - values[1][0])
        stderr = values[0][1] + values[1][1]
        return gap, stderr, int(gap - 3.0 * stderr > eps)

    gap1, se1, v1 = full_gap(Scheme.ERM1, eps1)
    gap2, se2, v2 = full_gap(Scheme.ERM2, eps2)
    if eps1 > 0:
        worst = max(worst, gap1 / eps1)
    if eps2 > 0:
        worst = max(worst, gap2 / eps2)
    return LipschitzReport(
        epsilon_erm1=eps1,
        epsilon_erm2=eps2,
        empirical_gap_max=gap_max,
        empirical_violations=violations,
        full_gap_erm1=gap1,
        full_gap_erm1_stderr=se1,
        full_gap_erm2=gap2,
        full_gap_erm2_stderr=se2,
        full_violations=v1 + v2,
        worst_ratio=worst,
        trials=trials,
    )


@dataclass(frozen=True, eq=False)
class BoundReport:
    """Measured gaps against the bound at one training size."""

    scheme: Scheme
    modes: int
    size: int
    energy: float
    delta: float
    bound_value: float
    empirical_gaps: tuple
    violation_fraction: float
    failures: int

    @property
    def median_gap(self) -> float:
        return float(np.median(self.empirical_gaps)) if self.empirical_gaps else math.nan

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "M": self.modes,
            "T": self.size,
            "E": self.energy,
            "delta": self.delta,
            "bound": self.bound_value,
            "gaps": list(self.empirical_gaps),
            "violation_fraction": self.violation_fraction,
            "failures": self.failures,
        }


def generalization_experiment(
    scheme,
    modes: int,
    energy: float,
    size_grid,
    delta: float,
    sets_per_size: int,
    seed=None,
    optim: OptimConfig | None = None,
    mc_samples: int = 200000,
    optimizer_replicas: int = 1,
) -> list:
    """Measure ``|C - C_hat|`` at empirically minimized circuits per size.

    For every size in the grid: draw training sets, minimize the empirical
    risk, Monte-Carlo the matching full risk at the minimizer, and compare the
    gap with the scheme's bound.  ``optimizer_replicas`` independent
    minimizations per set average out the algorithm's direction-of-approach
    noise.  Sets where no replica converges are excluded and counted in
    ``failures``.
    """
    scheme = Scheme.coerce(scheme)
    base = optim or OptimConfig(restarts=4, max_iters=3000)
    reports = []
    for size in size_grid:
        bound_value = gap_bound(scheme, BoundParams(modes, size, energy, delta))
        gaps = []
        failures = 0
        violations = 0
        for index in range(sets_per_size):
            run_seed = (0 if seed is None else seed, size, index)
            target = random_linear_optical(modes, substream(run_seed, 0))
            training = sample_training_set(scheme, modes, size, energy, seed=substream(run_seed, 1))
            replica_gaps = []
            margin_ok = True
            for replica in range(optimizer_replicas):
                result = minimize(training, target, replace(base, seed=(*run_seed, 2, replica)))
                if not result.converged:
                    continue
                estimate, stderr = full_risk_mc(
                    scheme,
                    target,
                    _realify_raw(result.transfer.entries),
                    modes,
                    size,
                    energy,
                    mc_samples,
                    seed=(*run_seed, 3, replica),
                )
                gap = abs(estimate - result.risk_final)
                replica_gaps.append(gap)
                if gap - 3.0 * stderr > bound_value:
                    margin_ok = False
            if not replica_gaps:
                failures += 1
                continue
            gaps.append(float(np.mean(replica_gaps)))
            if not margin_ok:
                violations += 1
        reports.append(
            BoundReport(
                scheme=scheme,
                modes=modes,
                size=int(size),
                energy=energy,
                delta=delta,
                bound_value=bound_value,
                empirical_gaps=tuple(gaps),
                violation_fraction=violations / max(1, len(gaps)),
                failures=failures,
            )
        )
    return reports


def sphere_gradient_bound_check(
    target, hypothesis, modes: int, size: int, energy: float, samples: int, seed=None
):
    """Max sampled gradient norms of the risk against the proof budgets.

    Returns ``(max_parent_grad, parent_budget, max_product_grad, product_budget)``
    where the parent parameterization (ERM2) must stay below ``4 sqrt(2E) / T``
    and the per-state product parameterization (ERM1) below ``4 sqrt(2E)``.
    """
    o_u = np.asarray(_matrix(target), dtype=float)
    o_v = np.asarray(_matrix(hypothesis), dtype=float)
    delta = o_u - o_v
    ell = delta.T @ delta
    rng = substream(seed, 0)

    parent = sample_sphere(2 * modes * size, math.sqrt(2.0 * energy), samples, rng)
    blocks = parent.reshape(samples, size, 2 * modes)
    y = np.einsum("tsj,ij->tsi", blocks, ell)
    d = np.einsum("tsj,ij->tsi", blocks, delta)
    w = np.exp(-0.5 * np.einsum("tsi,tsi->ts", d, d))
    grad_parent = (w[:, :, None] * y) / size
    max_parent = float(np.sqrt(np.sum(grad_parent**2, axis=(1, 2))).max())

    states = sample_sphere(2 * modes, math.sqrt(2.0 * energy), samples * size, rng).reshape(
        samples, size, 2 * modes
    )
    y1 = np.einsum("tsj,ij->tsi", states, ell)
    d1 = np.einsum("tsj,ij->tsi", states, delta)
    w1 = np.exp(-0.5 * np.einsum("tsi,tsi->ts", d1, d1))
    grad_product = (w1[:, :, None] * y1) / size
    max_product = float(np.sqrt(np.sum(grad_product**2, axis=(1, 2))).max())

    budget_parent = 4.0 * math.sqrt(2.0 * energy) / size
    budget_product = 4.0 * math.sqrt(2.0 * energy)
    return max_parent, budget_parent, max_product, budget_product


def concentration_tail_report(
    target, hypothesis, modes: int, size: int, energy: float, etas, samples: int, seed=None
):
    """Empirical tail probabilities of the overlap on the parent sphere.

    Returns a list of ``(eta, empirical_tail, bound)`` rows with the bound
    ``2 exp(-C1 (D+1) eta^2 / kappa^2)``, ``D + 1 = 2MT`` and the loose
    Lipschitz constant ``kappa = R ||L||``.
    """
    o_u = np.asarray(_matrix(target), dtype=float)
    o_v = np.asarray(_matrix(hypothesis), dtype=float)
    delta = o_u - o_v
    ell = delta.T @ delta
    radius = math.sqrt(2.0 * energy)
    kappa = radius * float(np.linalg.norm(ell, 2))
    dim = 2 * modes * size
    rng = substream(seed, 0)
    parent = sample_sphere(dim, radius, samples, rng)
    block = parent[:, : 2 * modes]
    y = block @ delta.T
    values = np.exp(-0.5 * np.einsum("ti,ti->t", y, y))
    mean = values.mean()
    rows = []
    for eta in etas:
        tail = float(np.mean(np.abs(values - mean) >= eta))
        bound = 2.0 * math.exp(-C1 * dim * eta**2 / kappa**2) if kappa > 0 else 0.0
        rows.append((float(eta), tail, bound))
    return rows
