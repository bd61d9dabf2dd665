"""Projection-free solvers for smooth convex minimization over polytopes.

Provides vanilla Frank-Wolfe and blended pairwise conditional gradients
(BPCG), an active-set representation of iterates as convex combinations of
vertices, and the step-size rules shared by both solvers.  Objectives are any
objects exposing ``value(x)`` and ``grad(x)``.
"""

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

# weight drift beyond this triggers renormalization of an active set
_WEIGHT_DRIFT_TOL = 1e-12


def fw_gap(grad, x, v):
    """Frank-Wolfe gap <grad, x - v> for a vertex v minimizing <grad, .>."""
    return float(np.dot(grad, x - v))


class ActiveSet:
    """Convex combination of polytope vertices with a cached iterate.

    Atoms are deduplicated by exact coordinate equality; weights stay
    positive and sum to one.  The cached iterate is updated incrementally by
    the step routines and recomputed from scratch whenever the weights are
    renormalized.
    """

    def __init__(self, vertices, weights):
        if len(vertices) != len(weights):
            raise ValueError("vertices and weights differ in length")
        if not len(vertices):
            raise ValueError("active set needs at least one atom")
        self.vertices = []
        self.weights = []
        self._index = {}
        for v, w in zip(vertices, weights):
            w = float(w)
            if w <= 0:
                raise ValueError(f"weights must be positive, got {w}")
            self._add(np.array(v, dtype=float), w)
        self._x = self.recombine()
        self._renormalize_if_drifted()

    @classmethod
    def from_vertex(cls, v):
        return cls([v], [1.0])

    def __len__(self):
        return len(self.vertices)

    @property
    def iterate(self):
        """Cached convex combination; treat as read-only."""
        return self._x

    def copy(self):
        out = ActiveSet.__new__(ActiveSet)
        out.vertices = [v.copy() for v in self.vertices]
        out.weights = list(self.weights)
        out._index = dict(self._index)
        out._x = self._x.copy()
        return out

    def recombine(self):
        """Recompute the iterate directly from atoms and weights."""
        x = np.zeros_like(self.vertices[0])
        for v, w in zip(self.vertices, self.weights):
            x += w * v
        return x

    def _add(self, v, w):
        key = v.tobytes()
        i = self._index.get(key)
        if i is None:
            self._index[key] = len(self.vertices)
            self.vertices.append(v)
            self.weights.append(w)
        else:
            self.weights[i] += w

    def _drop(self, i):
        del self.vertices[i]
        del self.weights[i]
        self._index = {v.tobytes(): j for j, v in enumerate(self.vertices)}

    def _renormalize_if_drifted(self):
        total = sum(self.weights)
        if abs(total - 1.0) > _WEIGHT_DRIFT_TOL:
            self.weights = [w / total for w in self.weights]
            self._x = self.recombine()

    def extremes(self, grad):
        """Indices of the away atom (max <grad, v>) and the local forward
        atom (min <grad, v>), ties resolved to the lowest index."""
        scores = np.array([float(np.dot(grad, v)) for v in self.vertices])
        return int(np.argmax(scores)), int(np.argmin(scores))

    def fw_update(self, v, gamma):
        """Move the iterate toward vertex v: weights scale by (1 - gamma) and
        v absorbs gamma.  gamma = 1 collapses the set to {v}."""
        if not 0.0 <= gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
        if gamma == 0.0:
            return
        v = np.array(v, dtype=float)
        if gamma == 1.0:
            self.vertices = [v]
            self.weights = [1.0]
            self._index = {v.tobytes(): 0}
            self._x = v.copy()
            return
        self.weights = [(1.0 - gamma) * w for w in self.weights]
        self._add(v, gamma)
        self._x = (1.0 - gamma) * self._x + gamma * v
        self._renormalize_if_drifted()

    def pairwise_update(self, to_idx, from_idx, gamma):
        """Transfer gamma of weight from one atom to another; a full transfer
        drops the source atom.  Returns True when a drop happened."""
        if to_idx == from_idx:
            raise ValueError("pairwise transfer needs two distinct atoms")
        w_from = self.weights[from_idx]
        if not 0.0 <= gamma <= w_from:
            raise ValueError(f"gamma={gamma} outside [0, {w_from}]")
        self.weights[to_idx] += gamma
        self._x = self._x + gamma * (self.vertices[to_idx] - self.vertices[from_idx])
        dropped = gamma >= w_from
        if dropped:
            self._drop(from_idx)
        else:
            self.weights[from_idx] = w_from - gamma
        self._renormalize_if_drifted()
        return dropped

    @classmethod
    def convex_combination(cls, first, second, lam):
        """Active set for (1 - lam) * first.iterate + lam * second.iterate."""
        if not 0.0 < lam < 1.0:
            raise ValueError(f"lam must lie strictly in (0, 1), got {lam}")
        vertices = first.vertices + second.vertices
        weights = [(1.0 - lam) * w for w in first.weights] + [
            lam * w for w in second.weights
        ]
        return cls(vertices, weights)


@dataclass
class FwStats:
    """Counters and outcome of one inner solve."""

    iterations: int = 0
    lmo_calls: int = 0
    final_fw_gap: float = np.inf
    termination: str = ""  # gap_tol | stop_rule | iter_cap | stagnation
    fw_steps: int = 0
    pairwise_descent_steps: int = 0
    pairwise_drop_steps: int = 0


def _last_argmin(values):
    # prefer the largest index among ties
    v = np.where(np.isfinite(values), values, np.inf)
    return len(v) - 1 - int(np.argmin(v[::-1]))


def grid_two_level(value_fn, x, d, gamma_max, points=11):
    """Two-level grid search for min of value(x + gamma * d) on [0, gamma_max].

    A coarse equispaced grid locates the best cell, a second grid of the same
    size refines between that point's neighbors.  Ties prefer larger gamma, so
    a flat objective returns gamma_max.
    """
    if gamma_max <= 0:
        return 0.0
    coarse = np.linspace(0.0, gamma_max, points)
    vals = np.array([float(value_fn(x + g * d)) for g in coarse])
    i = _last_argmin(vals)
    lo = coarse[max(i - 1, 0)]
    hi = coarse[min(i + 1, points - 1)]
    fine = np.linspace(lo, hi, points)
    fine_vals = np.array([float(value_fn(x + g * d)) for g in fine])
    candidates = np.concatenate([coarse, fine])
    all_vals = np.concatenate([vals, fine_vals])
    return float(candidates[_last_argmin(all_vals)])


def secant_line_search(
    value_fn, grad_fn, x, d, gamma_max, tol=1e-10, max_eval=40, dphi0=None
):
    """Approximately minimize phi(gamma) = value(x + gamma * d) on [0, gamma_max].

    Runs a bracketing secant iteration on phi'(gamma) = <grad(x + gamma*d), d>
    seeded at gamma = 0 and gamma = gamma_max.  Stops once |phi'| <= tol *
    ||d|| or after max_eval gradient evaluations; a final value comparison
    guarantees value(x + gamma*d) <= value(x).  Pass dphi0 = <grad(x), d> when
    the gradient at x is already available so it is not evaluated again.  On a
    quadratic the first secant step is exact, so the interior minimizer is
    found with two gradient evaluations.
    """
    if gamma_max <= 0:
        return 0.0
    d_scale = tol * float(np.linalg.norm(d))
    if dphi0 is None:
        dphi0 = float(np.dot(grad_fn(x), d))
    if not np.isfinite(dphi0):
        logger.warning("non-finite directional derivative, falling back to grid search")
        return grid_two_level(value_fn, x, d, gamma_max)
    if dphi0 >= 0:
        return 0.0

    evals = 0

    def dphi(g):
        nonlocal evals
        evals += 1
        return float(np.dot(grad_fn(x + g * d), d))

    d_hi = dphi(gamma_max)
    if not np.isfinite(d_hi):
        logger.warning("non-finite directional derivative, falling back to grid search")
        return grid_two_level(value_fn, x, d, gamma_max)
    if d_hi <= 0:
        return float(gamma_max)  # still descending at the cap

    lo, d_lo = 0.0, dphi0
    hi = float(gamma_max)
    gamma = hi - d_hi * (hi - lo) / (d_hi - d_lo)
    converged = False
    while evals < max_eval:
        gamma = min(max(gamma, lo), hi)
        dg = dphi(gamma)
        if not np.isfinite(dg):
            logger.warning(
                "non-finite directional derivative, falling back to grid search"
            )
            return grid_two_level(value_fn, x, d, gamma_max)
        if abs(dg) <= d_scale:
            converged = True
            break
        if dg > 0:
            hi, d_hi = gamma, dg
        else:
            lo, d_lo = gamma, dg
        if hi - lo <= 1e-17 * gamma_max:
            break
        nxt = hi - d_hi * (hi - lo) / (d_hi - d_lo)
        if nxt == gamma:
            break
        gamma = nxt

    # a converged exit cannot ascend by more than (tol*||d||)^2 / curvature,
    # far below roundoff for the objectives here; otherwise check values
    if converged:
        return float(gamma)
    phi0 = float(value_fn(x))
    g = float(gamma)
    for _ in range(60):
        if float(value_fn(x + g * d)) <= phi0:
            return g
        g *= 0.5
    return 0.0


@dataclass(frozen=True)
class Agnostic:
    """Open-loop step size 2 / (k + 2)."""

    def step(self, objective, x, d, gamma_max, k, dphi0=None):
        return min(2.0 / (k + 2.0), gamma_max)


@dataclass(frozen=True)
class Secant:
    """Secant line search on the directional derivative."""

    tol: float = 1e-10
    max_eval: int = 40

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_eval < 1:
            raise ValueError("max_eval must be at least 1")

    def step(self, objective, x, d, gamma_max, k, dphi0=None):
        return secant_line_search(
            objective.value,
            objective.grad,
            x,
            d,
            gamma_max,
            tol=self.tol,
            max_eval=self.max_eval,
            dphi0=dphi0,
        )


@dataclass(frozen=True)
class GridTwoLevel:
    """Derivative-free two-level grid search."""

    points: int = 11

    def step(self, objective, x, d, gamma_max, k, dphi0=None):
        return grid_two_level(objective.value, x, d, gamma_max, self.points)


def _check_stop(stats, gap, fw_gap_tol, stop_rule, objective, x):
    """Shared termination test run before each step; returns True to stop."""
    if gap <= fw_gap_tol:
        stats.termination = "gap_tol"
        return True
    if stop_rule is not None:
        value = objective.value(x) if stop_rule.needs_value else None
        if stop_rule.fires(gap, value):
            stats.termination = "stop_rule"
            return True
    return False


def vanilla_fw(
    objective,
    lmo,
    x0,
    line_search,
    *,
    fw_gap_tol=1e-7,
    max_iters=10000,
    stop_rule=None,
    active_set=None,
    callback=None,
):
    """Frank-Wolfe with a single LMO call per iteration.

    Parameters
    ----------
    objective : object with value(x) and grad(x)
    lmo : callable mapping a gradient to a vertex
    x0 : feasible starting point
    line_search : Agnostic, Secant, or GridTwoLevel
    fw_gap_tol : stop once the Frank-Wolfe gap falls below this
    stop_rule : optional object with needs_value and fires(gap, value)
    active_set : optional ActiveSet kept in sync with the iterate; its
        iterate must equal x0 on entry
    callback : optional, called with a dict after every step

    Returns (x, FwStats).  The reported gap is always evaluated at the
    returned iterate, and lmo_calls <= iterations + 1.
    """
    x = np.array(x0, dtype=float)
    stats = FwStats()
    for k in range(max_iters + 1):
        grad = objective.grad(x)
        v = lmo(grad)
        stats.lmo_calls += 1
        gap = fw_gap(grad, x, v)
        stats.final_fw_gap = gap
        if _check_stop(stats, gap, fw_gap_tol, stop_rule, objective, x):
            break
        if k == max_iters:
            stats.termination = "iter_cap"
            break
        d = v - x
        gamma = line_search.step(objective, x, d, 1.0, k, dphi0=-gap)
        if gamma == 0.0:
            stats.termination = "stagnation"
            break
        x = x + gamma * d
        if active_set is not None:
            active_set.fw_update(v, gamma)
            x = active_set.iterate.copy()
        stats.iterations += 1
        stats.fw_steps += 1
        if callback is not None:
            callback(
                {"k": k, "x": x, "gap": gap, "gamma": gamma, "step_type": "fw"}
            )
    return x, stats


def bpcg(
    objective,
    lmo,
    active_set,
    line_search,
    *,
    fw_gap_tol=1e-7,
    max_iters=10000,
    stop_rule=None,
    callback=None,
):
    """Blended pairwise conditional gradients over a polytope.

    Each iteration computes the global Frank-Wolfe vertex w = LMO(grad) and
    compares the local pairwise gap <grad, a - s> over the active set (a the
    away atom, s the local forward atom) against the global gap
    <grad, x - w>.  The larger one decides between a weight transfer from a
    to s and a classic step toward w; either way the iteration consumes the
    single LMO call already made.  The active set is updated in place and
    returned alongside the final iterate.

    Returns (x, active_set, FwStats).
    """
    if active_set is None or len(active_set) == 0:
        raise ValueError("bpcg needs a nonempty starting active set")
    x = active_set.iterate.copy()
    stats = FwStats()
    for k in range(max_iters + 1):
        grad = objective.grad(x)
        w = lmo(grad)
        stats.lmo_calls += 1
        gap = fw_gap(grad, x, w)
        stats.final_fw_gap = gap
        if _check_stop(stats, gap, fw_gap_tol, stop_rule, objective, x):
            break
        if k == max_iters:
            stats.termination = "iter_cap"
            break
        away_idx, local_idx = active_set.extremes(grad)
        away = active_set.vertices[away_idx]
        local = active_set.vertices[local_idx]
        local_gap = float(np.dot(grad, away - local))
        if local_gap >= gap and away_idx != local_idx:
            # transfer weight from the away atom toward the local atom
            d = local - away
            gamma_max = active_set.weights[away_idx]
            gamma = line_search.step(
                objective, x, d, gamma_max, k, dphi0=-local_gap
            )
            if gamma == 0.0:
                stats.termination = "stagnation"
                break
            dropped = active_set.pairwise_update(local_idx, away_idx, gamma)
            if dropped:
                stats.pairwise_drop_steps += 1
                step_type = "pairwise_drop"
            else:
                stats.pairwise_descent_steps += 1
                step_type = "pairwise_descent"
        else:
            d = w - x
            gamma = line_search.step(objective, x, d, 1.0, k, dphi0=-gap)
            if gamma == 0.0:
                stats.termination = "stagnation"
                break
            active_set.fw_update(w, gamma)
            stats.fw_steps += 1
            step_type = "fw"
        x = active_set.iterate.copy()
        stats.iterations += 1
        if callback is not None:
            callback(
                {
                    "k": k,
                    "x": x,
                    "gap": gap,
                    "gamma": gamma,
                    "step_type": step_type,
                    "active_set": active_set,
                }
            )
    return x, active_set, stats
