"""Named verification suites aggregating the library's numerical identities.

Each suite returns a list of Check records (name, tolerance, observed
deviation, pass flag); the CLI prints one line per check and folds the pass
flags into its exit status.  The acceptance tests reuse these suites.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import core, instances, mk
from .core import BetaSequence, Element, expect_matrix, expect_vector
from .instances import CantorModel, IntervalModel, UhfModel


@dataclass(frozen=True)
class Check:
    name: str
    tolerance: float
    deviation: float

    @property
    def passed(self):
        return self.deviation <= self.tolerance


def suite_ortho(level: int = 20) -> list:
    """Pairwise trace-orthogonality of the step basis and the Gram diagonal
    tau_v(phi_n^2) = 2^(1-n)."""
    model = IntervalModel.build(level)
    top = level - 2
    off = max(
        abs(instances.orthogonality_check(model, i, j))
        for i in range(top + 1)
        for j in range(i + 1, top + 1)
    )
    diag = 0.0
    for n in range(top + 1):
        sq = instances.phi(model, n).data ** 2
        gram = math.fsum(model.algebra.weights * sq)
        want = 1.0 if n == 0 else 2.0 ** (1 - n)
        diag = max(diag, abs(gram - want))
    return [
        Check("ortho.off-diagonal", 1e-12, off),
        Check("ortho.gram-diagonal", 1e-12, diag),
    ]


def suite_expansion(max_n: int = 15) -> list:
    model = IntervalModel.build(max_n + 2)
    bad = sum(not instances.chi_expansion_check(model, n) for n in range(max_n + 1))
    return [Check(f"expansion.exact-n<={max_n}", 0.0, float(bad))]


def suite_products(max_n: int = 15) -> list:
    model = IntervalModel.build(max_n + 2)
    bad = sum(
        not instances.product_table_check(model, n, m)
        for n in range(max_n + 1)
        for m in range(max_n + 1)
    )
    return [Check(f"products.exact-n,m<={max_n}", 0.0, float(bad))]


def _random_commutative(alg, rng):
    return rng.standard_normal(alg.dim)


def _random_hermitian(alg, rng):
    d = alg.dim
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2.0


def _random_in_level(alg, n, rng):
    """A random (not necessarily self-adjoint) member of filtration level n."""
    if alg.kind == "commutative":
        v = np.empty(alg.dim)
        for block in alg.partitions[n - 1]:
            v[list(block)] = rng.standard_normal()
        return v
    d1 = 2 ** (n - 1)
    d2 = 2 ** (alg.sites - n + 1)
    b = rng.standard_normal((d1, d1)) + 1j * rng.standard_normal((d1, d1))
    return np.kron(b, np.eye(d2))


def _raw_norm(alg, arr):
    if alg.kind == "commutative":
        return float(np.abs(arr).max())
    from .numerics import spectral_norm

    return spectral_norm(arr)


def _raw_expect(alg, n, arr):
    if alg.kind == "commutative":
        return expect_vector(alg, n, arr)
    return expect_matrix(alg.sites, n, arr)


def suite_expectations(seed: int = 0, samples: int = 100) -> list:
    """Tomiyama axioms, trace preservation, and nesting on seeded samples
    for all three instances."""
    targets = [
        ("interval", IntervalModel.build(10).algebra, _random_commutative),
        ("cantor", CantorModel.build(5).algebra, _random_commutative),
        ("uhf", UhfModel.build(5).algebra, _random_hermitian),
    ]
    checks = []
    for label, alg, sampler in targets:
        rng = np.random.default_rng(seed)
        idem = contract = module = tr = nest = 0.0
        n_levels = alg.levels
        for _ in range(samples):
            a = sampler(alg, rng)
            norm_a = _raw_norm(alg, a)
            tau_a = core.trace(alg, Element(alg, a)) if not np.iscomplexobj(a) else None
            for n in range(1, n_levels + 1):
                ea = _raw_expect(alg, n, a)
                idem = max(idem, np.abs(_raw_expect(alg, n, ea) - ea).max())
                contract = max(contract, _raw_norm(alg, ea) - norm_a)
                b = _random_in_level(alg, n, rng)
                bp = _random_in_level(alg, n, rng)
                if alg.kind == "commutative":
                    lhs = _raw_expect(alg, n, b * a * bp)
                    rhs = b * ea * bp
                else:
                    lhs = _raw_expect(alg, n, b @ a @ bp)
                    rhs = b @ ea @ bp
                module = max(module, np.abs(lhs - rhs).max())
                if alg.kind == "matrix":
                    tr = max(tr, abs((np.trace(ea) - np.trace(a)).real) / alg.dim)
                else:
                    tr = max(tr, abs(core.trace(alg, Element(alg, ea)) - tau_a))
                for m in range(1, n + 1):
                    nest = max(nest, np.abs(_raw_expect(alg, m, ea) - _raw_expect(alg, m, a)).max())
        checks += [
            Check(f"expect.{label}.idempotent", 1e-10, idem),
            Check(f"expect.{label}.contractive", 1e-10, contract),
            Check(f"expect.{label}.module", 1e-10, module),
            Check(f"expect.{label}.trace-preserving", 1e-12, tr),
            Check(f"expect.{label}.nesting", 1e-12, nest),
        ]
    return checks


def suite_seminorm(max_n: int = 15) -> list:
    """Seminorm of the witness families against 1/beta(n)."""
    model = IntervalModel.build(max_n + 2)
    checks = []
    for beta in (BetaSequence.geometric(0.5), BetaSequence.harmonic()):
        dev = 0.0
        for n in range(1, max_n + 1):
            val = core.lip_seminorm(model.algebra, beta, instances.phi(model, n)).value
            dev = max(dev, abs(val - 1.0 / beta(n)))
        checks.append(Check(f"seminorm.phi.{beta.name}", 1e-12, dev))
    beta = BetaSequence.geometric(0.5)
    unit = core.lip_seminorm(model.algebra, beta, instances.phi(model, 0))
    checks.append(Check("seminorm.unit-vanishes", 1e-12, unit.value))

    cantor = CantorModel.build(5)
    dev = max(
        abs(core.lip_seminorm(cantor.algebra, beta, instances.rademacher(cantor, k)).value - 2.0 ** k)
        for k in range(1, 6)
    )
    checks.append(Check("seminorm.rademacher", 1e-12, dev))

    uhf = UhfModel.build(5)
    dev = max(
        abs(core.lip_seminorm(uhf.algebra, beta, instances.pauli_site(uhf, k)).value - 2.0 ** k)
        for k in range(1, 6)
    )
    checks.append(Check("seminorm.pauli", 1e-8, dev))
    return checks


def _distance_matrix(alg, beta):
    n = alg.dim
    d = np.zeros((n, n))
    states = [mk.pure_state(alg, p) for p in alg.points]
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = mk.mk_distance(alg, beta, states[i], states[j]).value
    return d


def suite_mk(level: int = 10, depth: int = 5) -> list:
    """LP distances against the closed forms on both commutative instances,
    plus metric axioms of the LP values."""
    beta = BetaSequence.geometric(0.5)
    model = IntervalModel.build(level)
    alg = model.algebra
    d = _distance_matrix(alg, beta)
    dev = 0.0
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            cf = instances.closed_form_mk(model, beta, model.point_value(i), model.point_value(j))
            dev = max(dev, abs(d[i, j] - cf))
    tri = max(
        d[i, j] - (d[i, k] + d[k, j])
        for i in range(alg.dim)
        for j in range(alg.dim)
        for k in range(alg.dim)
    )
    checks = [
        Check("mk.interval.closed-form", 1e-8, dev),
        Check("mk.interval.symmetry", 1e-9, float(np.abs(d - d.T).max())),
        Check("mk.interval.triangle", 1e-8, max(tri, 0.0)),
    ]

    cantor = CantorModel.build(depth)
    words = cantor.algebra.points
    states = [mk.pure_state(cantor.algebra, w) for w in words]
    dev = 0.0
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            v = mk.mk_distance(cantor.algebra, beta, states[i], states[j]).value
            dev = max(dev, abs(v - instances.cantor_closed_form_mk(cantor, beta, words[i], words[j])))
    checks.append(Check("mk.cantor.prefix-formula", 1e-8, dev))
    return checks


def suite_sandwich(seed: int = 0, pairs_per_level: int = 25, max_level: int = 8) -> list:
    """Random agreeing state pairs: lower bound <= LP value <= 2 beta(n),
    with equality at 2 beta(n) whenever the witness pairing is antipodal."""
    model = IntervalModel.build(10)
    alg = model.algebra
    beta = BetaSequence.geometric(0.5)
    low_dev = up_dev = eq_dev = 0.0
    s = seed
    for n in range(1, max_level + 1):
        w = instances.phi(model, n)
        for _ in range(pairs_per_level):
            mu = mk.random_state(alg, s)
            nu = mk.random_state(alg, s + 1)
            s += 2
            mu, nu = mk.push_agreement(alg, mu, nu, n)
            lower, upper = mk.sandwich_bounds(alg, beta, mu, nu, w, n)
            value = mk.mk_distance(alg, beta, mu, nu).value
            low_dev = max(low_dev, lower - value)
            up_dev = max(up_dev, value - upper)
            if abs(mu(w) + nu(w)) <= 1e-12 and abs(mu(w)) > 1e-12:
                eq_dev = max(eq_dev, abs(value - upper))
    # pure antipodal pair: delta_0 and delta at 1/2^(n-1) pair to -1/+1 on phi_n
    for n in range(1, max_level + 1):
        w = instances.phi(model, n)
        mu = mk.pure_state(alg, alg.points[model.point_index(Fraction(1, 2 ** (n - 1)))])
        nu = mk.pure_state(alg, IntervalModel.TAIL_LABEL)
        lower, upper = mk.sandwich_bounds(alg, beta, mu, nu, w, n)
        value = mk.mk_distance(alg, beta, mu, nu).value
        eq_dev = max(eq_dev, abs(value - 2.0 * beta(n)), abs(lower - upper))
    return [
        Check("sandwich.lower<=lp", 1e-9, max(low_dev, 0.0)),
        Check("sandwich.lp<=upper", 1e-8, max(up_dev, 0.0)),
        Check("sandwich.antipodal-equality", 1e-8, eq_dev),
    ]


def suite_domain(levels: int = 20, seed: int = 0) -> list:
    """Domain-separation diagnostics for the coordinate function and
    residual decay for in-level samples."""
    model = IntervalModel.build(12)
    a = instances.p1(model, cutoff=30)
    rep = core.domain_separation_report(model.algebra, a, levels)
    const_dev = max(abs(v - 1.0) for v in rep.l_beta_running)
    rel_dev = max(
        abs(rep.l_beta_sq_running[n - 1] - 0.75 * 2.0 ** n) / (0.75 * 2.0 ** n)
        for n in range(1, levels + 1)
    )
    growth = 0.0 if rep.l_beta_sq_running[10] > 1e3 else 1.0

    decay = core.residual_decay(model.algebra, a, 25)
    mono = max(b - aa for aa, b in zip(decay, decay[1:]))
    small = decay[24]

    rng = np.random.default_rng(seed)
    in_level = 0.0
    alg = model.algebra
    for _ in range(20):
        k = int(rng.integers(2, alg.levels + 1))
        e = core.conditional_expectation(alg, k, Element(alg, rng.standard_normal(alg.dim)))
        tailres = core.residual_decay(alg, e, alg.levels)[k - 1 :]
        in_level = max(in_level, max(tailres))
    return [
        Check("domain.l-beta-constant-1", 1e-9, const_dev),
        Check("domain.l-beta-sq-growth", 1e-6, rel_dev),
        Check("domain.exceeds-1e3-by-11", 0.0, growth),
        Check("domain.residuals-monotone", 1e-15, max(mono, 0.0)),
        Check("domain.residual-small-at-25", 1e-6, small),
        Check("domain.in-level-residuals-vanish", 1e-12, in_level),
    ]


SUITES = {
    "ortho": suite_ortho,
    "expansion": suite_expansion,
    "products": suite_products,
    "expectations": suite_expectations,
    "seminorm": suite_seminorm,
    "mk": suite_mk,
    "sandwich": suite_sandwich,
    "domain": suite_domain,
}


def run_suites(names, seed: int = 0) -> list:
    checks = []
    for name in names:
        fn = SUITES[name]
        if name in ("expectations", "sandwich", "domain"):
            checks += fn(seed=seed)
        else:
            checks += fn()
    return checks
