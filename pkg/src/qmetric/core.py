"""Truncated filtered algebras, tracial conditional expectations, and the
scaled Lip seminorm with its domain diagnostics.

A commutative algebra is a finite point set with strictly positive weights
(the faithful trace) and a refining chain of partitions; the matrix kind is
a full matrix algebra M_{2^K} filtered by leading tensor factors.  All
values are immutable after construction and every operation is pure.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import EXACT_TOL, spectral_norm


class LevelOutOfRange(ValueError):
    pass


class ZeroResidual(ValueError):
    """An element landed inside a filtration level where a nonzero residual
    was required."""

    def __init__(self, level, residual):
        super().__init__(f"residual at level {level} is {residual:.3e} (element lies in the level)")
        self.level = level
        self.residual = residual


@dataclass(frozen=True)
class FilteredAlgebra:
    kind: str  # "commutative" | "matrix"
    points: tuple = ()          # commutative: point labels
    weights: np.ndarray = None  # commutative: faithful trace weights
    partitions: tuple = ()      # commutative: P_1..P_N, each a tuple of index tuples
    sites: int = 0              # matrix: K, algebra M_{2^K}

    @staticmethod
    def commutative(points, weights, partitions):
        weights = np.asarray(weights, dtype=float)
        if len(points) != len(weights):
            raise ValueError("points/weights length mismatch")
        if (weights <= 0).any():
            raise ValueError("trace weights must be strictly positive")
        if abs(math.fsum(weights) - 1.0) > EXACT_TOL:
            raise ValueError("trace weights must sum to 1")
        parts = tuple(tuple(tuple(block) for block in p) for p in partitions)
        npts = len(points)
        if sorted(parts[0][0]) != list(range(npts)) or len(parts[0]) != 1:
            raise ValueError("level 1 must be the single all-points block")
        if sorted(len(b) for b in parts[-1]) != [1] * npts:
            raise ValueError("top level must be singletons")
        for coarse, fine in zip(parts, parts[1:]):
            owner = {}
            for bi, block in enumerate(coarse):
                for i in block:
                    owner[i] = bi
            for block in fine:
                if len({owner[i] for i in block}) != 1:
                    raise ValueError("partitions must refine the previous level")
        alg = FilteredAlgebra("commutative", tuple(points), weights, parts)
        weights.setflags(write=False)
        return alg

    @staticmethod
    def matrix(sites):
        if sites < 1:
            raise ValueError("need at least one site")
        return FilteredAlgebra("matrix", sites=sites)

    @property
    def levels(self):
        """Number of filtration levels N (level 1 = scalars)."""
        if self.kind == "commutative":
            return len(self.partitions)
        return self.sites + 1

    @property
    def dim(self):
        if self.kind == "commutative":
            return len(self.points)
        return 2 ** self.sites

    def check_level(self, n):
        if not 1 <= n <= self.levels:
            raise LevelOutOfRange(f"level {n} outside 1..{self.levels}")


@dataclass(frozen=True)
class Tail:
    """Descriptor for an element of the full algebra outside every filtration
    level: sampled values at points k = 1..cutoff plus the limit at 0.

    `affine` marks elements of the form l + s*x on the dyadic interval,
    unlocking exact geometric-series tail sums.
    """

    limit: float
    cutoff: int
    affine: bool = False


@dataclass(frozen=True)
class Element:
    algebra: FilteredAlgebra
    data: np.ndarray
    tail: Tail | None = None

    def __post_init__(self):
        data = np.asarray(self.data)
        if self.tail is None and self.algebra.kind == "commutative":
            data = np.asarray(data, dtype=float)
            if data.shape != (self.algebra.dim,):
                raise ValueError("element length does not match point count")
        elif self.tail is not None:
            data = np.asarray(data, dtype=float)
            if data.shape != (self.tail.cutoff,):
                raise ValueError("tail element needs one sample per k = 1..cutoff")
        else:
            d = self.algebra.dim
            if data.shape != (d, d):
                raise ValueError("element shape does not match algebra")
            if np.abs(data - data.conj().T).max() > EXACT_TOL:
                raise ValueError("matrix element must be Hermitian")
        object.__setattr__(self, "data", data)
        data.setflags(write=False)


@dataclass(frozen=True)
class BetaSequence:
    """A positive scaling sequence n >= 1 -> beta(n)."""

    fn: Callable[[int], float]
    monotone: bool = False
    name: str = ""

    def __call__(self, n):
        v = float(self.fn(n))
        if not v > 0:
            raise ValueError(f"beta({n}) = {v} must be positive")
        return v

    def validate(self, upto):
        """Positivity up to the working level, non-increase when flagged, and
        a crude decay check."""
        vals = [self(n) for n in range(1, upto + 1)]
        if self.monotone:
            for n in range(1, upto):
                if vals[n] > vals[n - 1] + EXACT_TOL:
                    raise ValueError(f"beta not non-increasing at n={n + 1}")
        if upto >= 2 and vals[-1] > vals[0]:
            raise ValueError("beta does not decay up to the working level")
        return vals

    @staticmethod
    def geometric(ratio):
        if not 0 < ratio < 1:
            raise ValueError("geometric ratio must lie in (0,1)")
        return BetaSequence(lambda n: ratio ** n, monotone=True, name=f"geom:{ratio}")

    @staticmethod
    def harmonic():
        return BetaSequence(lambda n: 1.0 / n, monotone=True, name="harmonic")

    @staticmethod
    def from_values(values, name=""):
        values = tuple(float(v) for v in values)
        if any(v <= 0 for v in values):
            raise ValueError("beta values must be positive")
        monotone = all(b <= a + EXACT_TOL for a, b in zip(values, values[1:]))

        def fn(n, _v=values):
            if not 1 <= n <= len(_v):
                raise LevelOutOfRange(f"beta only tabulated up to {len(_v)}")
            return _v[n - 1]

        return BetaSequence(fn, monotone=monotone, name=name)


@dataclass(frozen=True)
class SeminormReport:
    value: float
    terms: tuple
    exact: bool


@dataclass(frozen=True)
class DomainSeparationReport:
    beta_values: tuple            # ||a - E_n(a)||
    beta_sq_values: tuple         # squares of the above
    l_beta_running: tuple         # running sup of residual/beta_a -> constantly 1
    l_beta_sq_running: tuple      # running sup of residual/beta_a^2 -> grows without bound


# ---------------------------------------------------------------------------
# raw conditional expectations (work on bare arrays; Tomiyama tests use these
# on non-self-adjoint arguments too)

def expect_vector(alg: FilteredAlgebra, n: int, values: np.ndarray) -> np.ndarray:
    """Weight-conditional average over the blocks of P_n."""
    out = np.empty(len(values), dtype=np.result_type(values, float))
    w = alg.weights
    for block in alg.partitions[n - 1]:
        idx = list(block)
        # accumulate small weights first to limit cancellation
        order = sorted(idx, key=lambda i: w[i])
        mass = math.fsum(w[i] for i in order)
        if np.iscomplexobj(values):
            mean = (
                math.fsum(w[i] * values[i].real for i in order)
                + 1j * math.fsum(w[i] * values[i].imag for i in order)
            ) / mass
        else:
            mean = math.fsum(w[i] * values[i] for i in order) / mass
        out[idx] = mean
    return out


def expect_matrix(sites: int, n: int, mat: np.ndarray) -> np.ndarray:
    """Normalized partial trace over trailing tensor factors, re-embedded as
    a' (x) 1."""
    d1 = 2 ** (n - 1)
    d2 = 2 ** (sites - n + 1)
    t = mat.reshape(d1, d2, d1, d2)
    leading = np.einsum("ijkj->ik", t) / d2
    return np.kron(leading, np.eye(d2))


# ---------------------------------------------------------------------------
# tail-element helpers (dyadic interval weighting: point k carries mass 2^-k)

def _tail_slope(a: Element) -> float:
    # f(x) = limit + s*x with f(1) stored at k = 1
    return a.data[0] - a.tail.limit


def _tail_block_mean(a: Element, n: int) -> float:
    """Trace-conditional mean of a over the level-n tail block {x <= 2^(1-n)}."""
    t = a.tail
    if t.affine:
        # E[x | k >= n] = (4/3) 2^-n under weights 2^-k
        return t.limit + _tail_slope(a) * (4.0 / 3.0) * 2.0 ** (-n)
    k = np.arange(n, t.cutoff + 1)
    mass = 2.0 ** (1 - n)
    acc = math.fsum((2.0 ** (-kk)) * a.data[kk - 1] for kk in reversed(k))
    acc += t.limit * 2.0 ** (-t.cutoff)  # everything beyond the cutoff sits at the limit
    return acc / mass


def _tail_residual(a: Element, n: int) -> float:
    """||a - E_n(a)|| for a tail element: sup deviation over the level-n
    tail block (singleton blocks contribute nothing)."""
    t = a.tail
    if n > t.cutoff:
        raise LevelOutOfRange(f"level {n} beyond tail cutoff {t.cutoff}")
    mean = _tail_block_mean(a, n)
    if t.affine:
        # |s| * sup |x - (4/3)2^-n| over {0} u {2^(1-k): k >= n}, attained at x = 0
        return abs(_tail_slope(a)) * (4.0 / 3.0) * 2.0 ** (-n)
    dev = max(abs(a.data[kk - 1] - mean) for kk in range(n, t.cutoff + 1))
    return max(dev, abs(t.limit - mean))


# ---------------------------------------------------------------------------
# public operations

def conditional_expectation(alg: FilteredAlgebra, level: int, a: Element) -> Element:
    """The unique trace-preserving conditional expectation onto filtration
    level `level`, realized as the orthogonal projection for the trace inner
    product."""
    if a.tail is not None:
        if not 1 <= level <= a.tail.cutoff:
            raise LevelOutOfRange(f"level {level} beyond tail cutoff {a.tail.cutoff}")
        mean = _tail_block_mean(a, level)
        data = a.data.copy()
        data[level - 1 :] = mean
        return Element(alg, data, Tail(mean, a.tail.cutoff, affine=False))
    alg.check_level(level)
    if alg.kind == "commutative":
        return Element(alg, expect_vector(alg, level, a.data))
    return Element(alg, expect_matrix(alg.sites, level, a.data))


def trace(alg: FilteredAlgebra, a: Element) -> float:
    if a.tail is not None:
        t = a.tail
        acc = math.fsum((2.0 ** (-k)) * a.data[k - 1] for k in reversed(range(1, t.cutoff + 1)))
        return acc + t.limit * 2.0 ** (-t.cutoff)
    if alg.kind == "commutative":
        return math.fsum(alg.weights * a.data)
    return float(np.real(np.trace(a.data))) / alg.dim


def sup_norm(a: Element) -> float:
    if a.tail is not None:
        return max(float(np.abs(a.data).max()), abs(a.tail.limit))
    if a.algebra.kind == "commutative":
        return float(np.abs(a.data).max())
    return spectral_norm(a.data)


def residual(alg: FilteredAlgebra, a: Element, n: int) -> float:
    """||a - E_n(a)|| in the algebra norm."""
    if a.tail is not None:
        return _tail_residual(a, n)
    alg.check_level(n)
    if alg.kind == "commutative":
        return float(np.abs(a.data - expect_vector(alg, n, a.data)).max())
    return spectral_norm(a.data - expect_matrix(alg.sites, n, a.data))


def residual_decay(alg: FilteredAlgebra, a: Element, levels: int) -> list:
    """The sequence ||a - E_n(a)|| for n = 1..levels."""
    return [residual(alg, a, n) for n in range(1, levels + 1)]


def lip_seminorm(alg: FilteredAlgebra, beta: BetaSequence, a: Element) -> SeminormReport:
    """sup over levels of ||a - E_n(a)|| / beta(n), truncated at the working
    level N; exact when a lies inside the top level."""
    n_levels = alg.levels
    terms = tuple(residual(alg, a, n) / beta(n) for n in range(1, n_levels + 1))
    last_res = residual(alg, a, n_levels)
    return SeminormReport(value=max(terms), terms=terms, exact=last_res <= EXACT_TOL)


def beta_from_element(alg: FilteredAlgebra, a: Element, levels: int, zero_tol: float = EXACT_TOL) -> BetaSequence:
    """The residual sequence n -> ||a - E_n(a)||, valid only when a escapes
    every filtration level up to `levels`."""
    vals = []
    for n in range(1, levels + 1):
        r = residual(alg, a, n)
        if r <= zero_tol:
            raise ZeroResidual(n, r)
        vals.append(r)
    return BetaSequence.from_values(vals, name="from-element")


def beta_squared_from_element(alg: FilteredAlgebra, a: Element, levels: int, zero_tol: float = EXACT_TOL) -> BetaSequence:
    base = beta_from_element(alg, a, levels, zero_tol)
    vals = [base(n) ** 2 for n in range(1, levels + 1)]
    return BetaSequence.from_values(vals, name="from-element-squared")


def domain_separation_report(alg: FilteredAlgebra, a: Element, levels: int) -> DomainSeparationReport:
    """Per-level running values of the seminorm built from the element's own
    residual sequence (constantly 1) versus the squared one (grows without
    bound; the truncation certifies growth, never infinity)."""
    beta_a = beta_from_element(alg, a, levels)
    bvals = tuple(beta_a(n) for n in range(1, levels + 1))
    bsq = tuple(v * v for v in bvals)
    run1, run2 = [], []
    m1 = m2 = 0.0
    for n in range(1, levels + 1):
        r = residual(alg, a, n)
        m1 = max(m1, r / bvals[n - 1])
        m2 = max(m2, r / bsq[n - 1])
        run1.append(m1)
        run2.append(m2)
    return DomainSeparationReport(bvals, bsq, tuple(run1), tuple(run2))
