"""The three worked instances: the quantized interval {1/2^(n-1)} u {0},
the Cantor space of binary words, and the 2^infinity matrix filtration.

Interval points carry the dyadic trace weights v_k = 2^-k; the truncation at
level N keeps the points 1, 1/2, ..., 1/2^(N-2) plus a single tail label for
the class {x <= 1/2^(N-1)} (which holds 0 and all discarded points, total
mass 2^-(N-1)).  Identity checks on the step-function basis run in exact
dyadic rationals.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Element, FilteredAlgebra, Tail


# ---------------------------------------------------------------------------
# quantized interval

@dataclass(frozen=True)
class IntervalModel:
    level: int
    algebra: FilteredAlgebra

    TAIL_LABEL = "tail"

    @staticmethod
    def build(level: int) -> "IntervalModel":
        if level < 2:
            raise ValueError("interval truncation needs level >= 2")
        n = level
        labels = ["1"] + [f"1/{2 ** k}" for k in range(1, n - 1)] + [IntervalModel.TAIL_LABEL]
        weights = [2.0 ** (-k) for k in range(1, n)] + [2.0 ** (-(n - 1))]
        partitions = [
            [[i] for i in range(m - 1)] + [list(range(m - 1, n))]
            for m in range(1, n + 1)
        ]
        alg = FilteredAlgebra.commutative(labels, weights, partitions)
        return IntervalModel(level, alg)

    def point_value(self, index: int) -> Fraction:
        """x-coordinate of a point index; the tail label stands for 0."""
        if index == self.level - 1:
            return Fraction(0)
        return Fraction(1, 2 ** index)

    def point_index(self, x) -> int:
        """Index of the point with coordinate x (0 lands on the tail label)."""
        x = Fraction(x)
        if x == 0:
            return self.level - 1
        k = 1 - _exact_log2(x)
        if not 1 <= k <= self.level - 1:
            raise ValueError(f"{x} is not representable at level {self.level}")
        return k - 1

    def element(self, values) -> Element:
        return Element(self.algebra, np.asarray(values, dtype=float))


def _exact_log2(x: Fraction) -> int:
    num, den = x.numerator, x.denominator
    if num == 1 and den & (den - 1) == 0:
        return -den.bit_length() + 1
    if den == 1 and num & (num - 1) == 0:
        return num.bit_length() - 1
    raise ValueError(f"{x} is not a power of two")


def chi(model: IntervalModel, n: int) -> Element:
    """Indicator of the single point 1/2^(n-1); n = 0 gives the zero element."""
    if n == 0:
        return model.element(np.zeros(model.algebra.dim))
    if not 1 <= n <= model.level - 1:
        raise ValueError(f"chi_{n} needs a singleton point, so 1 <= n <= {model.level - 1}")
    data = np.zeros(model.algebra.dim)
    data[n - 1] = 1.0
    return model.element(data)


def chi_tail(model: IntervalModel, n: int) -> Element:
    """Indicator of the class {x <= 1/2^(n-1)}."""
    if not 1 <= n <= model.level - 1:
        raise ValueError(f"chi_tail({n}) needs 1 <= n <= {model.level - 1}")
    data = np.zeros(model.algebra.dim)
    data[n - 1 :] = 1.0
    return model.element(data)


def phi(model: IntervalModel, n: int) -> Element:
    """The step function that is 0 above 1/2^(n-1), -1 at it, +1 below; the
    n = 0 member is the unit."""
    if n == 0:
        return model.element(np.ones(model.algebra.dim))
    e = chi_tail(model, n).data - 2.0 * chi(model, n).data
    return model.element(e)


def p1(model: IntervalModel, cutoff: int = 30) -> Element:
    """The coordinate function x itself, which escapes every filtration
    level; sampled at k = 1..cutoff with exact affine tail handling."""
    data = np.array([2.0 ** (1 - k) for k in range(1, cutoff + 1)])
    return Element(model.algebra, data, Tail(limit=0.0, cutoff=cutoff, affine=True))


# exact dyadic evaluation on the full space; k >= 1 indexes the point
# 1/2^(k-1) and k = 0 stands for the point 0

def _phi_exact(n: int, k: int) -> Fraction:
    if n == 0:
        return Fraction(1)
    if k == 0:
        return Fraction(1)   # 0 < 1/2^(n-1)
    if k < n:
        return Fraction(0)
    if k == n:
        return Fraction(-1)
    return Fraction(1)


def _chi_exact(n: int, k: int) -> Fraction:
    return Fraction(1) if (n >= 1 and k == n) else Fraction(0)


def _chi_tail_exact(n: int, k: int) -> Fraction:
    if k == 0 or k >= n:
        return Fraction(1)
    return Fraction(0)


def chi_expansion_check(model: IntervalModel, n: int) -> bool:
    """Pointwise exact check of the expansion of chi_n over the step basis:
    chi_n = 2^-(n+1) (phi_0 - 2^(n+1) phi_n) + sum_k 2^-(k+1) phi_(n-k)."""
    sample = range(0, n + 3)  # all functions involved are constant beyond n+2
    for k in sample:
        rhs = Fraction(1, 2 ** (n + 1)) * (_phi_exact(0, k) - 2 ** (n + 1) * _phi_exact(n, k))
        for j in range(0, n + 1):
            rhs += Fraction(1, 2 ** (j + 1)) * _phi_exact(n - j, k)
        if rhs != _chi_exact(n, k):
            return False
    return True


def product_table_check(model: IntervalModel, n: int, m: int) -> bool:
    """phi_n phi_m = phi_max(n,m) off the diagonal, and the tail indicator on
    it; checked pointwise in exact arithmetic."""
    top = max(n, m)
    for k in range(0, top + 3):
        prod = _phi_exact(n, k) * _phi_exact(m, k)
        if n == m:
            want = _phi_exact(0, k) if n == 0 else _chi_tail_exact(n, k)
        else:
            want = _phi_exact(top, k)
        if prod != want:
            return False
    return True


def orthogonality_check(model: IntervalModel, n: int, m: int) -> float:
    """tau_v(phi_n phi_m) in the truncated model; 0 for n != m."""
    if n == m:
        raise ValueError("orthogonality check needs distinct indices")
    prod = phi(model, n).data * phi(model, m).data
    return math.fsum(model.algebra.weights * prod)


def closed_form_mk(model: IntervalModel, beta, x, y) -> float:
    """Pure-state distance 2 beta(1 - log2(max(x, y))) between evaluations at
    two dyadic points (0 allowed, via the tail label)."""
    x, y = Fraction(x), Fraction(y)
    if x == y:
        raise ValueError("closed form needs distinct points")
    if not beta.monotone:
        raise ValueError("closed form requires a non-increasing beta")
    n = 1 - _exact_log2(max(x, y))
    return 2.0 * beta(n)


# ---------------------------------------------------------------------------
# Cantor space

@dataclass(frozen=True)
class CantorModel:
    depth: int
    algebra: FilteredAlgebra

    @staticmethod
    def build(depth: int) -> "CantorModel":
        if depth < 1:
            raise ValueError("depth must be >= 1")
        words = ["".join(f"{i >> (depth - 1 - b) & 1}" for b in range(depth)) for i in range(2 ** depth)]
        npts = len(words)
        weights = [1.0 / npts] * npts
        partitions = []
        for n in range(1, depth + 2):
            block_size = 2 ** (depth - n + 1)
            partitions.append(
                [list(range(s, s + block_size)) for s in range(0, npts, block_size)]
            )
        alg = FilteredAlgebra.commutative(words, weights, partitions)
        return CantorModel(depth, alg)

    def word_index(self, word: str) -> int:
        try:
            return self.algebra.points.index(word)
        except ValueError:
            raise ValueError(f"unknown word {word!r}") from None

    def prefix_length(self, w1: str, w2: str) -> int:
        k = 0
        while k < len(w1) and w1[k] == w2[k]:
            k += 1
        return k


def rademacher(model: CantorModel, k: int) -> Element:
    """r_k(w) = 1 - 2 w_k: the +-1 coordinate function at letter k."""
    if not 1 <= k <= model.depth:
        raise ValueError(f"rademacher index must lie in 1..{model.depth}")
    data = np.array([1.0 - 2.0 * int(w[k - 1]) for w in model.algebra.points])
    return Element(model.algebra, data)


def cantor_closed_form_mk(model: CantorModel, beta, w1: str, w2: str) -> float:
    """Pure-state distance 2 beta(prefixlen + 1) between distinct leaves."""
    if w1 == w2:
        raise ValueError("closed form needs distinct words")
    if not beta.monotone:
        raise ValueError("closed form requires a non-increasing beta")
    return 2.0 * beta(model.prefix_length(w1, w2) + 1)


# ---------------------------------------------------------------------------
# 2^infinity matrix filtration

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class UhfModel:
    sites: int
    algebra: FilteredAlgebra

    @staticmethod
    def build(sites: int) -> "UhfModel":
        return UhfModel(sites, FilteredAlgebra.matrix(sites))


def pauli_site(model: UhfModel, k: int) -> Element:
    """1 (x) ... (x) sigma_x (x) ... (x) 1 with the flip at site k."""
    if not 1 <= k <= model.sites:
        raise ValueError(f"site must lie in 1..{model.sites}")
    mat = np.kron(np.eye(2 ** (k - 1)), np.kron(_SIGMA_X, np.eye(2 ** (model.sites - k))))
    return Element(model.algebra, mat)
