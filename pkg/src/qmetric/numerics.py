"""Dense linear-programming and spectral-norm routines.

Everything here is plain float64 linear algebra on small, dense problems
(at most a few thousand constraint rows).  The simplex solver uses Bland's
pivoting rule throughout, so a fixed input always takes the same pivot
path and returns the same optimizer.
"""

from dataclasses import dataclass

import numpy as np

#: Feasibility slack allowed on constraint rows of an "optimal" solution.
FEASIBILITY_TOL = 1e-9

#: Threshold below which a residual counts as exactly zero.
EXACT_TOL = 1e-12

_PIVOT_TOL = 1e-10
_MAX_PIVOTS = 200_000


class NumericalFailure(RuntimeError):
    """Raised when an iterative routine exhausts its iteration budget."""


@dataclass(frozen=True)
class LpProblem:
    """maximize objective @ x  subject to  constraints @ x <= bounds, x free.

    Nonnegativity, if wanted, must be spelled out as explicit rows.
    """

    objective: np.ndarray
    constraints: np.ndarray
    bounds: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        a = np.asarray(self.constraints, dtype=float)
        b = np.asarray(self.bounds, dtype=float)
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "constraints", a)
        object.__setattr__(self, "bounds", b)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("objective must be a nonempty vector")
        if a.ndim != 2 or a.shape[1] != c.size:
            raise ValueError("constraint matrix shape does not match objective")
        if b.shape != (a.shape[0],):
            raise ValueError("bounds length does not match constraint rows")
        if not (np.isfinite(c).all() and np.isfinite(a).all() and np.isfinite(b).all()):
            raise ValueError("LP data must be finite")


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: float
    argmax: np.ndarray | None


def _pivot(tableau, basis, row, col):
    tableau[row] /= tableau[row, col]
    factor = tableau[:, col].copy()
    factor[row] = 0.0
    tableau -= np.outer(factor, tableau[row])
    # kill roundoff in the pivot column so Bland's rule sees clean zeros
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0
    basis[row] = col


def _bland_iterate(tableau, basis, ncols):
    """Run simplex pivots on a tableau whose last row is the (maximization)
    reduced-cost row and last column the rhs.  Returns "optimal" or
    "unbounded"."""
    m = tableau.shape[0] - 1
    for _ in range(_MAX_PIVOTS):
        reduced = tableau[-1, :ncols]
        entering = -1
        for j in range(ncols):
            if reduced[j] > _PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return "optimal"
        col = tableau[:m, entering]
        rhs = tableau[:m, -1]
        leaving = -1
        best_ratio = np.inf
        for i in range(m):
            if col[i] > _PIVOT_TOL:
                ratio = rhs[i] / col[i]
                if ratio < best_ratio - _PIVOT_TOL or (
                    abs(ratio - best_ratio) <= _PIVOT_TOL
                    and (leaving < 0 or basis[i] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            return "unbounded"
        _pivot(tableau, basis, leaving, entering)
    raise NumericalFailure("simplex exceeded its pivot budget")


def solve_lp(problem: LpProblem) -> LpSolution:
    """Two-phase dense simplex for a free-variable LP.

    Free variables are split internally as x = u - v; infeasibility and
    unboundedness come back in the status field, never as an exception.
    """
    c0, a0, b0 = problem.objective, problem.constraints, problem.bounds
    m, p = a0.shape

    # split free vars, append slack columns
    a = np.hstack([a0, -a0, np.eye(m)])
    c = np.concatenate([c0, -c0, np.zeros(m)])
    b = b0.copy()
    neg = b < 0
    a[neg] *= -1.0
    b[neg] *= -1.0
    nstruct = a.shape[1]

    basis = np.empty(m, dtype=int)
    basis[~neg] = 2 * p + np.flatnonzero(~neg)
    n_art = int(neg.sum())
    if n_art:
        art = np.zeros((m, n_art))
        art[np.flatnonzero(neg), np.arange(n_art)] = 1.0
        a = np.hstack([a, art])
        basis[neg] = nstruct + np.arange(n_art)

    ncols = a.shape[1]
    tableau = np.zeros((m + 1, ncols + 1))
    tableau[:m, :ncols] = a
    tableau[:m, -1] = b

    if n_art:
        # phase 1: maximize -(sum of artificials)
        cost = np.zeros(ncols)
        cost[nstruct:] = -1.0
        tableau[-1, :ncols] = cost
        for i in range(m):
            tableau[-1] -= cost[basis[i]] * tableau[i]
        status = _bland_iterate(tableau, basis, ncols)
        # the cost-row rhs carries minus the phase-1 objective, i.e. the
        # leftover artificial mass
        if status != "optimal" or tableau[-1, -1] > 1e-7:
            return LpSolution("infeasible", float("nan"), None)
        # pivot any lingering artificials out of the basis
        for i in range(m):
            if basis[i] >= nstruct:
                for j in range(nstruct):
                    if abs(tableau[i, j]) > _PIVOT_TOL:
                        _pivot(tableau, basis, i, j)
                        break
        # rows still carrying an artificial are redundant; drop them along
        # with the artificial columns
        keep = basis < nstruct
        basis = basis[keep]
        tableau = tableau[np.append(keep, True)]
        tableau = np.hstack([tableau[:, :nstruct], tableau[:, -1:]])
        ncols = nstruct
        m = len(basis)

    # phase 2
    cost = c.copy()
    tableau[-1, :ncols] = cost
    tableau[-1, -1] = 0.0
    for i in range(m):
        if basis[i] < ncols:
            tableau[-1] -= cost[basis[i]] * tableau[i]
    status = _bland_iterate(tableau, basis, ncols)
    if status == "unbounded":
        return LpSolution("unbounded", float("nan"), None)

    x_full = np.zeros(ncols)
    x_full[basis] = tableau[:-1, -1]
    x = x_full[:p] - x_full[p : 2 * p]
    return LpSolution("optimal", float(c0 @ x), x)


def spectral_norm(m: np.ndarray, rel_tol: float = 1e-11, max_iter: int = 10_000) -> float:
    """Largest singular value via power iteration on the Gram matrix.

    The start vector is fixed (all-ones, with standard basis vectors as a
    fallback when that lands in the kernel), so the result is deterministic.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("spectral_norm requires a square matrix")
    n = m.shape[0]
    gram = m.conj().T @ m
    scale = np.abs(gram).max()
    if scale == 0.0:
        return 0.0

    if n == 1:
        return float(np.abs(m[0, 0]))

    # Subspace (block power) iteration with Rayleigh-Ritz extraction.  A
    # single power vector stalls whenever the Gram matrix has a tight top
    # cluster, which happens systematically here: a +-symmetric spectrum
    # squares to a near-degenerate pair, and conditional expectations emit
    # b (x) 1 whose Gram eigenvalues all carry the trailing-factor
    # multiplicity.  The block starts at 2 columns and doubles whenever the
    # certificate makes no progress, so the convergence rate is always set
    # by the first eigenvalue *outside* the captured cluster; at full width
    # the Ritz problem is exact.
    def fresh_column(i):
        if i == 0:
            return np.ones(n)
        if i == 1:
            return np.resize([1.0, -1.0], n)
        return np.eye(n)[:, (i - 2) % n]

    next_col = 2
    block = np.stack([fresh_column(0), fresh_column(1)], axis=1).astype(gram.dtype)
    q, _ = np.linalg.qr(block)
    stalled = 0
    for _ in range(max_iter):
        z = gram @ q
        h = q.conj().T @ z
        h = (h + h.conj().T) / 2.0
        vals, vecs = np.linalg.eigh(h)
        lam = float(vals[-1])
        x = q @ vecs[:, -1]
        gx = z @ vecs[:, -1]
        # for Hermitian gram, |lam - lam_max| is at most the residual norm
        if np.linalg.norm(gx - lam * x) <= rel_tol * max(lam, scale * EXACT_TOL):
            return float(np.sqrt(max(lam, 0.0)))
        stalled += 1
        if stalled >= 50 and q.shape[1] < n:
            width = min(n, 2 * q.shape[1])
            extra = []
            while q.shape[1] + len(extra) < width:
                extra.append(fresh_column(next_col))
                next_col += 1
            q, _ = np.linalg.qr(np.hstack([q, np.stack(extra, axis=1)]))
            stalled = 0
            continue
        if np.linalg.norm(z) <= EXACT_TOL * scale:
            # block sits in the kernel; reseed deterministically
            q, _ = np.linalg.qr(
                np.stack([fresh_column(next_col + i) for i in range(q.shape[1])], axis=1).astype(gram.dtype)
            )
            next_col += q.shape[1]
            continue
        q, r = np.linalg.qr(z)
        diag = np.abs(np.diag(r))
        bad = diag <= 1e-15 * max(diag.max(), scale * EXACT_TOL)
        if bad.any():
            # collapsed directions: replace them with deterministic fillers
            cols = [q[:, i] for i in range(q.shape[1]) if not bad[i]]
            while len(cols) < q.shape[1]:
                cols.append(fresh_column(next_col))
                next_col += 1
            q, _ = np.linalg.qr(np.stack(cols, axis=1))
    raise NumericalFailure("power iteration did not converge")
