"""Trade-off curve computation by scalarized minimization over classifier channels.

Both curves minimize the conditional entropy of the quantum register given
the channel output, under a mutual-information budget:

    qubit curve  (kind "XC"):   value(R) = min S(B|C)  s.t.  S(X:C)  <= R
    ebit  curve  (kind "XBC"):  value(R) = min S(B|C)  s.t.  S(X:BC) <= R

Each curve is convex and non-increasing in R, so every point is exposed by a
supporting slope: sweeping the weight mu in the scalarized objective
S(B|C) + mu * constraint and taking the lower convex envelope of the
resulting (constraint, objective) support points recovers the curve.  The
"XBC" constraint equals S(X:C) + S(B|C) - Sbar, so both kinds reduce to
weighted combinations of S(B|C) and S(X:C).

The mu ladder is geometric, which undersamples curves whose slope range is
narrow, so the sweep is followed by a sandwich refinement pass: the point
produced at weight mu carries the global lower-bound line of slope -mu
through itself (scalarization duality), the gap between each envelope chord
and the two supporting lines of its endpoints bounds the interpolation
error, and segments whose bound exceeds a small target are re-solved at the
chord slope until the bound closes or the budget runs out.

The inner problem is nonconvex in the channel.  It is solved by the
multiplicative fixed-point iteration familiar from Blahut-Arimoto and
information-bottleneck solvers: writing the stationarity condition of

    alpha * S(B|C) + beta * S(X:C)

over row-stochastic channels gives the self-consistent update

    p(j|i)  proportional to  q_j * 2^(-(alpha/beta) * d(i, j)),
    d(i, j) = -Tr[rho_i log2 rho_j],

where rho_j is the posterior mixture at output j.  Each update solves one
block of an exact alternating minimization, so the objective is
non-increasing; many seeded random starts guard against local minima.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .profiles import ClassicalChannel, EntropicProfile, entropic_profile
from .states import Ensemble, EnsembleStats, ensemble_stats

MU_MIN = 1e-3
MU_MAX = 1e3
MU_CAP = 1e5
DEFAULT_RESOLUTION = 40
DEFAULT_MULTISTARTS = 32
DEFAULT_MAX_ITER = 500
CONVERGENCE_TOL = 1e-10
DOMAIN_TOL = 1e-9
ZERO_MASS = 1e-14
# Sandwich refinement: per-segment interpolation-error target and caps.
REFINE_TARGET = 2e-3
REFINE_PASSES = 8
# Fraction of starts allowed to hit the iteration cap before a sweep is
# reported as diagnostically suspect.
NONCONVERGED_DIAGNOSTIC = 0.5

_KIND_TO_CODE = {"XC": 0, "XBC": 1}
_CURVE_KIND_TO_CONSTRAINT = {"QCT": "XC", "RSP": "XBC"}


def _softmax_rows(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    p = np.exp2(z)
    p /= p.sum(axis=1, keepdims=True)
    return p


def _fixed_point(reduced_b: np.ndarray, probs: np.ndarray, ratio: float,
                 channel0: np.ndarray, max_iter: int) -> tuple[np.ndarray, bool]:
    """Run the multiplicative fixed-point update from one starting channel.

    ratio is alpha/beta, the weight of the entropy distortion relative to the
    classical mutual information.  Returns the final channel matrix and
    whether the iteration converged before the cap.
    """
    channel = channel0
    for _ in range(max_iter):
        joint = probs[:, None] * channel
        q = joint.sum(axis=0)
        live = q > ZERO_MASS
        mixtures = np.einsum("ij,iab->jab", joint[:, live], reduced_b)
        mixtures /= q[live, None, None]
        lam, vec = np.linalg.eigh(mixtures)
        log_lam = np.log2(np.clip(lam, 1e-300, None))
        # log2(rho_j) reassembled in the eigenbasis, then d(i,j) = -Tr[rho_i log2 rho_j]
        log_mix = np.einsum("jak,jk,jbk->jab", vec, log_lam, vec.conj())
        distortion = -np.einsum("iab,jba->ij", reduced_b, log_mix).real
        scores = np.full_like(channel, -np.inf)
        scores[:, live] = np.log2(q[live])[None, :] - ratio * distortion
        updated = _softmax_rows(scores)
        if np.abs(updated - channel).max() < CONVERGENCE_TOL:
            return updated, True
        channel = updated
    return channel, False


def _start_points(m: int, k: int, count: int, seed_key) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed_key))
    return _softmax_rows(rng.normal(0.0, 2.0, size=(count, m, k))
                         .reshape(count * m, k)).reshape(count, m, k)


def _sweep_one_mu(args):
    """Optimize all starts at one mu; used as a process-pool task."""
    (ensemble, kind, mu, mu_index, multistarts, seed, max_iter) = args
    stats = ensemble_stats(ensemble)
    alpha = 1.0 if kind == "XC" else 1.0 + mu
    ratio = alpha / mu
    m, k = ensemble.m, ensemble.m + 1
    starts = _start_points(m, k, multistarts,
                           [seed, _KIND_TO_CODE[kind], mu_index])
    outcomes = []
    for channel0 in starts:
        channel, converged = _fixed_point(ensemble.reduced_b, ensemble.probs,
                                          ratio, channel0, max_iter)
        profile = entropic_profile(ensemble, ClassicalChannel(channel), stats)
        constraint = profile.SXC if kind == "XC" else profile.SXBC
        outcomes.append((constraint, profile.SBgC, channel, converged))
    return mu_index, outcomes


def minimize_profile(ensemble: Ensemble, mu: float, kind: str = "XC", *,
                     multistarts: int = DEFAULT_MULTISTARTS, seed: int = 0,
                     max_iter: int = DEFAULT_MAX_ITER,
                     ) -> tuple[ClassicalChannel, EntropicProfile]:
    """Minimize SBgC + mu * constraint over channels with m+1 outputs.

    kind selects the constraint: "XC" uses S(X:C), "XBC" uses S(X:BC).
    Returns the best channel found over the multi-starts and its profile.
    At mu = 0 the objective is S(B|C) alone, whose unconstrained minimum Sbar
    is attained by the identity channel; that case is answered analytically.
    """
    if kind not in _KIND_TO_CODE:
        raise ValueError(f"kind must be 'XC' or 'XBC', got {kind!r}")
    if not (math.isfinite(mu) and mu >= 0.0):
        raise ValueError(f"mu must be finite and nonnegative, got {mu}")
    if multistarts < 1:
        raise ValueError("multistarts must be positive")
    stats = ensemble_stats(ensemble)
    if mu == 0.0:
        channel = ClassicalChannel.identity(ensemble.m)
        return channel, entropic_profile(ensemble, channel, stats)
    _, outcomes = _sweep_one_mu(
        (ensemble, kind, float(mu), 0, multistarts, seed, max_iter))
    best = min(outcomes, key=lambda item: item[1] + mu * item[0])
    channel = ClassicalChannel(best[2])
    return channel, entropic_profile(ensemble, channel, stats)


def _lower_envelope(points):
    """Lower convex envelope of (x, y, *payload) support points.

    Points are deduplicated on x (keeping the smallest y) and swept with the
    monotone-chain rule; collinear interior points are dropped.
    """
    points = sorted(points, key=lambda p: (p[0], p[1]))
    merged = []
    for p in points:
        if merged and p[0] - merged[-1][0] <= 1e-12:
            continue  # same abscissa: the earlier point has the smaller y
        merged.append(p)
    hull = []
    for p in merged:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            if cross <= 1e-12:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _segment_bound(rec0, rec1) -> float:
    """Upper bound on (chord - true curve) over one envelope segment.

    Each record is (x, y, channel, mu); a point produced at weight mu lies on
    the global lower-bound line of slope -mu through itself, so the curve sits
    between the chord and the upper envelope of the two lines.  mu of None
    means no valid line at that endpoint (a vertical wall), leaving the other
    line alone to certify the segment.
    """
    x0, y0, _, mu0 = rec0
    x1, y1, _, mu1 = rec1
    w = x1 - x0
    if w <= 1e-9:
        return 0.0
    s = (y1 - y0) / w
    a = max(s + mu0, 0.0) if mu0 is not None else None
    b = max(-(s + mu1), 0.0) if mu1 is not None else None
    if a is None and b is None:
        return math.inf
    if a is None:
        return b * w
    if b is None:
        return a * w
    if a + b <= 1e-15:
        return 0.0
    return a * b * w / (a + b)


@dataclass(frozen=True, eq=False)
class TradeoffCurve:
    """Piecewise-linear convex trade-off curve.

    samples are the convex-envelope support vertices as (R, value) pairs in
    increasing R; channels[i] is a channel achieving samples[i].  The curve
    extends flat at `floor` (= Sbar) for R beyond the last vertex.  Queries
    left of the domain return None: those rates are unachievable.
    """

    kind: str
    samples: tuple
    domain: tuple
    floor: float
    channels: tuple
    diagnostics: tuple = ()

    def __post_init__(self):
        xs = np.array([s[0] for s in self.samples], dtype=float)
        ys = np.array([s[1] for s in self.samples], dtype=float)
        if xs.size == 0:
            raise ValueError("curve needs at least one sample")
        if np.any(np.diff(xs) <= 0.0):
            raise ValueError("curve samples must have strictly increasing R")
        if np.any(np.diff(ys) > 1e-6):
            raise ValueError("curve values must be non-increasing")
        if xs.size >= 3:
            slopes = np.diff(ys) / np.diff(xs)
            if np.any(np.diff(slopes) < -1e-6):
                raise ValueError("curve must be convex")
        xs.flags.writeable = False
        ys.flags.writeable = False
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_ys", ys)

    @property
    def rates(self) -> np.ndarray:
        return self._xs

    @property
    def values(self) -> np.ndarray:
        return self._ys

    def value(self, R: float) -> float | None:
        """Curve value at rate R, or None where the rate is unachievable."""
        if R < self.domain[0] - DOMAIN_TOL:
            return None
        xs, ys = self._xs, self._ys
        if R <= xs[0]:
            return float(ys[0])
        if R >= xs[-1]:
            return float(ys[-1])
        return float(np.interp(R, xs, ys))


@dataclass(frozen=True)
class CriticalRate:
    """Largest rate at which the qubit curve still has unit trade-off slope."""

    Hc: float
    found: bool


@dataclass(frozen=True)
class CurveSet:
    """Both trade-off curves of one ensemble plus its entropic summary."""

    stats: EnsembleStats
    qct: TradeoffCurve
    rsp: TradeoffCurve
    critical: CriticalRate


def _curve(ensemble: Ensemble, curve_kind: str, resolution: int,
           multistarts: int, seed: int, workers: int,
           max_iter: int) -> TradeoffCurve:
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if multistarts < 1:
        raise ValueError("multistarts must be positive")
    constraint_kind = _CURVE_KIND_TO_CONSTRAINT[curve_kind]
    stats = ensemble_stats(ensemble)
    lo = 0.0 if curve_kind == "QCT" else stats.chi

    def run_tasks(tasks):
        if workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_sweep_one_mu, tasks))
        else:
            results = [_sweep_one_mu(task) for task in tasks]
        results.sort(key=lambda item: item[0])
        return results

    points = []
    total = nonconverged = 0

    def collect(results, mus_by_index):
        # All outcomes are achievable points, but only the per-mu winner of
        # the scalarized objective sits on a certified slope -mu lower-bound
        # line; local optima get no line (mu tag None).
        nonlocal total, nonconverged
        for index, outcomes in results:
            mu = mus_by_index[index]
            best = min(value + mu * constraint
                       for constraint, value, _, _ in outcomes)
            for constraint, value, channel, converged in outcomes:
                x = min(max(constraint, lo), stats.H)
                y = max(value, stats.Sbar)
                tag = mu if value + mu * constraint <= best + 1e-9 else None
                points.append((x, y, channel, tag))
                total += 1
                nonconverged += not converged

    # Analytic endpoints, listed first so exact ties keep their tags: the
    # constant channel reveals nothing (on the QCT curve it wins the mu = 1
    # scalarization, so it carries the slope -1 line; the RSP wall is
    # vertical and carries none), the identity channel reveals everything
    # (the mu = 0 solution, horizontal line at the floor).
    constant = ClassicalChannel.constant(ensemble.m)
    identity = ClassicalChannel.identity(ensemble.m)
    points.append((lo, stats.S, constant.matrix,
                   1.0 if curve_kind == "QCT" else None))
    points.append((stats.H, stats.Sbar, identity.matrix, 0.0))

    mus = np.geomspace(MU_MIN, MU_MAX, int(resolution))
    ladder = {i: float(mu) for i, mu in enumerate(mus)}
    collect(run_tasks([(ensemble, constraint_kind, mu, i, multistarts, seed,
                        max_iter) for i, mu in ladder.items()]), ladder)

    hull = _lower_envelope(points)
    used = {round(math.log(mu), 6) for mu in mus.tolist()}
    budget = int(resolution)
    next_index = len(mus)
    for _ in range(REFINE_PASSES):
        if budget <= 0:
            break
        requests = []
        for rec0, rec1 in zip(hull[:-1], hull[1:]):
            if _segment_bound(rec0, rec1) <= REFINE_TARGET:
                continue
            slope = (rec1[1] - rec0[1]) / (rec1[0] - rec0[0])
            mu_new = min(max(-slope, MU_MIN), MU_CAP)
            key = round(math.log(mu_new), 6)
            if key in used:
                continue
            used.add(key)
            requests.append(mu_new)
        requests = requests[:budget]
        if not requests:
            break
        budget -= len(requests)
        batch = {next_index + i: mu for i, mu in enumerate(requests)}
        next_index += len(requests)
        collect(run_tasks([(ensemble, constraint_kind, mu, i, multistarts,
                            seed, max_iter) for i, mu in batch.items()]), batch)
        hull = _lower_envelope(points)

    diagnostics = []
    if nonconverged > NONCONVERGED_DIAGNOSTIC * max(total, 1):
        diagnostics.append(
            f"{curve_kind}: {nonconverged}/{total} starts hit the "
            f"{max_iter}-iteration cap")
    return TradeoffCurve(
        kind=curve_kind,
        samples=tuple((float(x), float(y)) for x, y, _, _ in hull),
        domain=(lo, stats.H),
        floor=stats.Sbar,
        channels=tuple(ClassicalChannel(c) for _, _, c, _ in hull),
        diagnostics=tuple(diagnostics),
    )


def qct_curve(ensemble: Ensemble, resolution: int = DEFAULT_RESOLUTION, *,
              multistarts: int = DEFAULT_MULTISTARTS, seed: int = 0,
              workers: int = 1, max_iter: int = DEFAULT_MAX_ITER) -> TradeoffCurve:
    """Optimal qubit rate versus classical rate, Q*(R), for R in [0, H]."""
    return _curve(ensemble, "QCT", resolution, multistarts, seed, workers, max_iter)


def rsp_curve(ensemble: Ensemble, resolution: int = DEFAULT_RESOLUTION, *,
              multistarts: int = DEFAULT_MULTISTARTS, seed: int = 0,
              workers: int = 1, max_iter: int = DEFAULT_MAX_ITER) -> TradeoffCurve:
    """Optimal ebit rate versus classical rate, E*(R), for R in [chi, H]."""
    return _curve(ensemble, "RSP", resolution, multistarts, seed, workers, max_iter)


def critical_rate(curve: TradeoffCurve, S: float, *,
                  tol: float = 5e-3) -> CriticalRate:
    """Largest rate R with R + Q*(R) = S, located on the qubit curve.

    Scans the curve vertices for the largest R whose excess R + Q*(R) - S
    stays within tol, then refines by bisection on the interpolated curve.
    A missing plateau (no qualifying vertex) is flagged via found = False.
    """
    if curve.kind != "QCT":
        raise ValueError("the critical rate is defined on the QCT curve")

    def excess(r: float) -> float:
        return r + curve.value(r) - S

    qualifying = [float(x) for x in curve.rates if abs(excess(float(x))) <= tol]
    if not qualifying:
        return CriticalRate(Hc=0.0, found=False)
    r_lo = max(qualifying)
    later = curve.rates[curve.rates > r_lo + 1e-15]
    if later.size == 0:
        return CriticalRate(Hc=r_lo, found=True)
    r_hi = float(later[0])
    for _ in range(60):
        mid = 0.5 * (r_lo + r_hi)
        if excess(mid) <= tol:
            r_lo = mid
        else:
            r_hi = mid
    return CriticalRate(Hc=r_lo, found=True)


def compute_curves(ensemble: Ensemble, resolution: int = DEFAULT_RESOLUTION, *,
                   multistarts: int = DEFAULT_MULTISTARTS, seed: int = 0,
                   workers: int = 1, max_iter: int = DEFAULT_MAX_ITER) -> CurveSet:
    """Both curves, the critical rate and the entropic summary of an ensemble."""
    stats = ensemble_stats(ensemble)
    qct = qct_curve(ensemble, resolution, multistarts=multistarts, seed=seed,
                    workers=workers, max_iter=max_iter)
    rsp = rsp_curve(ensemble, resolution, multistarts=multistarts, seed=seed,
                    workers=workers, max_iter=max_iter)
    return CurveSet(stats=stats, qct=qct, rsp=rsp,
                    critical=critical_rate(qct, stats.S))
