"""States on truncated algebras and the Monge-Kantorovich distance as a
linear program over the unit ball of the scaled Lip seminorm.

The LP maximizes (mu - nu) . a over gauge-fixed vectors a subject to
|a_i - (E_n a)_i| <= beta(n) for every point and every level below the top.
The scalar direction is removed by pinning the value at one reference point
to zero, which leaves the objective unchanged and keeps the program bounded.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import BetaSequence, Element, FilteredAlgebra, lip_seminorm
from .numerics import EXACT_TOL, LpProblem, NumericalFailure, solve_lp

AGREEMENT_TOL = 1e-10
WITNESS_TOL = 1e-9


class MatrixKindUnsupported(ValueError):
    """The seminorm ball of the matrix instance is not polyhedral, so no LP
    distance is offered there."""


class AgreementViolated(ValueError):
    pass


class WitnessMismatch(ValueError):
    pass


@dataclass(frozen=True)
class StateFunctional:
    algebra: FilteredAlgebra
    data: np.ndarray  # probability weights, or a density matrix

    def __post_init__(self):
        data = np.asarray(self.data)
        if self.algebra.kind == "commutative":
            data = np.asarray(data, dtype=float)
            if data.shape != (self.algebra.dim,):
                raise ValueError("state length does not match point count")
            if (data < -EXACT_TOL).any():
                raise ValueError("state weights must be nonnegative")
            if abs(math.fsum(data) - 1.0) > EXACT_TOL:
                raise ValueError("state weights must sum to 1")
        else:
            d = self.algebra.dim
            if data.shape != (d, d):
                raise ValueError("density shape does not match algebra")
            if np.abs(data - data.conj().T).max() > EXACT_TOL:
                raise ValueError("density must be Hermitian")
            if abs(np.trace(data).real - 1.0) > EXACT_TOL:
                raise ValueError("density must have unit trace")
            if np.linalg.eigvalsh(data).min() < -1e-10:
                raise ValueError("density must be positive")
        object.__setattr__(self, "data", data)
        data.setflags(write=False)

    def __call__(self, a: Element) -> float:
        if self.algebra.kind == "commutative":
            return float(self.data @ a.data)
        return float(np.real(np.trace(self.data @ a.data)))


@dataclass(frozen=True)
class DistanceReport:
    value: float
    witness: Element
    lower: float | None = None
    upper: float | None = None
    agreement_level: int | None = None


def pure_state(alg: FilteredAlgebra, point) -> StateFunctional:
    """Unit mass at a labelled point."""
    if alg.kind != "commutative":
        raise MatrixKindUnsupported("pure states by point label need the commutative kind")
    try:
        idx = alg.points.index(point)
    except ValueError:
        raise ValueError(f"unknown point {point!r}") from None
    w = np.zeros(alg.dim)
    w[idx] = 1.0
    return StateFunctional(alg, w)


def random_state(alg: FilteredAlgebra, seed: int) -> StateFunctional:
    """Strictly positive normalized weights (or a full-rank density), fixed
    by the seed."""
    rng = np.random.default_rng(seed)
    if alg.kind == "commutative":
        w = rng.uniform(0.1, 1.0, size=alg.dim)
        w /= math.fsum(w)
        return StateFunctional(alg, w)
    d = alg.dim
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T + 0.1 * np.eye(d)
    rho /= np.trace(rho).real
    return StateFunctional(alg, rho)


def _block_masses(alg, weights, n):
    return [math.fsum(weights[i] for i in block) for block in alg.partitions[n - 1]]


def check_agreement(alg: FilteredAlgebra, mu: StateFunctional, nu: StateFunctional, n: int, tol=AGREEMENT_TOL) -> float:
    """Max deviation of mu and nu over a basis of the level-n subalgebra
    (block indicators, or matrix units of the leading factor)."""
    if alg.kind == "commutative":
        mm = _block_masses(alg, mu.data, n)
        nn = _block_masses(alg, nu.data, n)
        return max(abs(a - b) for a, b in zip(mm, nn))
    # states agree on level n iff the (unnormalized) partial traces of the
    # densities over the trailing factors coincide
    d1 = 2 ** (n - 1)
    d2 = 2 ** (alg.sites - n + 1)
    pm = np.einsum("ijkj->ik", mu.data.reshape(d1, d2, d1, d2))
    pn = np.einsum("ijkj->ik", nu.data.reshape(d1, d2, d1, d2))
    return float(np.abs(pm - pn).max())


def push_agreement(alg: FilteredAlgebra, mu: StateFunctional, nu: StateFunctional, n: int):
    """Rescale nu inside each level-n block so block masses match mu's;
    within-block conditional distributions of nu are preserved."""
    if alg.kind != "commutative":
        raise MatrixKindUnsupported("push_agreement operates on partition blocks")
    alg.check_level(n)
    out = np.array(nu.data, dtype=float)
    for block in alg.partitions[n - 1]:
        idx = list(block)
        m_mu = math.fsum(mu.data[i] for i in idx)
        m_nu = math.fsum(out[i] for i in idx)
        if m_nu > 0:
            out[idx] = out[idx] * (m_mu / m_nu)
        else:
            out[idx] = m_mu / len(idx)
    out /= math.fsum(out)
    return mu, StateFunctional(alg, out)


def _ball_constraints(alg: FilteredAlgebra, beta: BetaSequence, gauge: int):
    """Rows of the polyhedral description of {L_beta <= 1} inside the
    truncation, with the gauge column removed."""
    npts = alg.dim
    keep = [i for i in range(npts) if i != gauge]
    rows = []
    rhs = []
    for n in range(1, alg.levels):
        b = beta(n)
        proj = np.zeros((npts, npts))
        for block in alg.partitions[n - 1]:
            idx = list(block)
            mass = math.fsum(alg.weights[i] for i in idx)
            for i in idx:
                proj[i, idx] = alg.weights[idx] / mass
        r = (np.eye(npts) - proj)[:, keep]
        # drop rows that are identically zero (singleton blocks)
        live = np.abs(r).max(axis=1) > 0
        rows.append(r[live])
        rows.append(-r[live])
        rhs.extend([b] * int(live.sum()) * 2)
    return keep, np.vstack(rows), np.array(rhs)


def mk_distance(
    alg: FilteredAlgebra,
    beta: BetaSequence,
    mu: StateFunctional,
    nu: StateFunctional,
    gauge: int = 0,
) -> DistanceReport:
    """Exact Monge-Kantorovich distance between two states by LP.

    The absolute value in the defining sup is dropped: the feasible set is
    symmetric under a -> -a, so maximizing the signed pairing suffices.
    """
    if alg.kind != "commutative":
        raise MatrixKindUnsupported("LP distances are only defined for the commutative kind")
    keep, rows, rhs = _ball_constraints(alg, beta, gauge)
    diff = mu.data - nu.data
    problem = LpProblem(objective=diff[keep], constraints=rows, bounds=rhs)
    sol = solve_lp(problem)
    if sol.status != "optimal":
        raise NumericalFailure(f"mk LP ended with status {sol.status}")
    full = np.zeros(alg.dim)
    full[keep] = sol.argmax
    witness = Element(alg, full)
    return DistanceReport(value=sol.value, witness=witness)


def sandwich_bounds(
    alg: FilteredAlgebra,
    beta: BetaSequence,
    mu: StateFunctional,
    nu: StateFunctional,
    witness: Element,
    n: int,
) -> tuple:
    """Bounds beta(n)|mu(w) - nu(w)| <= mk <= 2 beta(n), valid when the
    states agree on level n and the witness has seminorm exactly 1/beta(n)."""
    dev = check_agreement(alg, mu, nu, n)
    if dev > AGREEMENT_TOL:
        raise AgreementViolated(f"states deviate by {dev:.3e} on level {n}")
    target = 1.0 / beta(n)
    lval = lip_seminorm(alg, beta, witness).value
    if abs(lval - target) > WITNESS_TOL * max(1.0, target):
        raise WitnessMismatch(f"witness seminorm {lval} != 1/beta({n}) = {target}")
    lower = beta(n) * abs(mu(witness) - nu(witness))
    upper = 2.0 * beta(n)
    return lower, upper


def with_bounds(report: DistanceReport, lower: float, upper: float, level: int) -> DistanceReport:
    return replace(report, lower=lower, upper=upper, agreement_level=level)
