"""Linear minimization oracles over the feasible regions used by the solvers.

Each oracle returns an exact vertex of its polytope minimizing <c, v> and
counts how many times it has been called.
"""

import numpy as np
from scipy.optimize import linear_sum_assignment


class LinearMinimizationOracle:
    """Base oracle: argmin of <c, v> over the vertices of a polytope."""

    def __init__(self, dimension):
        if dimension < 1:
            raise ValueError(f"dimension must be positive, got {dimension}")
        self.dimension = int(dimension)
        self.call_count = 0

    def __call__(self, c):
        c = np.asarray(c, dtype=float)
        if c.shape != (self.dimension,):
            raise ValueError(
                f"cost vector has shape {c.shape}, expected ({self.dimension},)"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("cost vector has non-finite entries")
        self.call_count += 1
        return self._minimize(c)

    def _minimize(self, c):
        raise NotImplementedError

    def contains(self, x, tol=1e-9):
        raise NotImplementedError


class ProbabilitySimplex(LinearMinimizationOracle):
    """Unit probability simplex in R^n; vertices are coordinate basis vectors."""

    def _minimize(self, c):
        v = np.zeros(self.dimension)
        v[int(np.argmin(c))] = 1.0  # ties resolve to the lowest index
        return v

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        return bool(x.min() >= -tol and abs(x.sum() - 1.0) <= tol)


class L1Ball(LinearMinimizationOracle):
    """Scaled cross-polytope {x : ||x||_1 <= radius}."""

    def __init__(self, dimension, radius=1.0):
        if radius < 0:
            raise ValueError(f"radius must be nonnegative, got {radius}")
        super().__init__(dimension)
        self.radius = float(radius)

    def _minimize(self, c):
        v = np.zeros(self.dimension)
        i = int(np.argmax(np.abs(c)))  # ties resolve to the lowest index
        # sign convention: zero entries count as positive
        v[i] = -self.radius if c[i] >= 0 else self.radius
        return v

    def contains(self, x, tol=1e-9):
        return bool(np.abs(np.asarray(x, dtype=float)).sum() <= self.radius + tol)


class KSparsePolytope(LinearMinimizationOracle):
    """Intersection of the l1 ball of radius k*tau with the box ||x||_inf <= tau.

    Vertices have exactly k entries of magnitude tau.
    """

    def __init__(self, dimension, tau, k):
        super().__init__(dimension)
        if not 1 <= k <= dimension:
            raise ValueError(f"need 1 <= k <= {dimension}, got k={k}")
        if tau <= 0:
            raise ValueError(f"tau must be positive, got {tau}")
        self.tau = float(tau)
        self.k = int(k)

    def _minimize(self, c):
        # stable sort keeps lower indices first among tied magnitudes
        top = np.argsort(-np.abs(c), kind="stable")[: self.k]
        v = np.zeros(self.dimension)
        v[top] = np.where(c[top] >= 0, -self.tau, self.tau)
        return v

    def contains(self, x, tol=1e-9):
        a = np.abs(np.asarray(x, dtype=float))
        return bool(a.max() <= self.tau + tol and a.sum() <= self.k * self.tau + tol)


class BirkhoffPolytope(LinearMinimizationOracle):
    """Doubly stochastic matrices of order n, handled as flattened n^2 vectors."""

    def __init__(self, n):
        if n < 1:
            raise ValueError(f"order must be positive, got {n}")
        self.n = int(n)
        super().__init__(n * n)

    def _minimize(self, c):
        return birkhoff_lmo(c.reshape(self.n, self.n)).ravel()

    def contains(self, x, tol=1e-9):
        X = np.asarray(x, dtype=float).reshape(self.n, self.n)
        return bool(
            X.min() >= -tol
            and np.abs(X.sum(axis=0) - 1.0).max() <= tol
            and np.abs(X.sum(axis=1) - 1.0).max() <= tol
        )


def birkhoff_lmo(C):
    """Exact permutation matrix minimizing <C, X> over doubly stochastic X.

    Solves the linear assignment problem for the n x n cost matrix C and
    returns the optimal permutation as a 0/1 matrix.
    """
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {C.shape}")
    rows, cols = linear_sum_assignment(C)
    X = np.zeros_like(C)
    X[rows, cols] = 1.0
    return X
