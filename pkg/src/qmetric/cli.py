"""Command line driver.

    qm <instance> --level N --beta <spec> [--seed S] <command> [options]

Commands: distances, domain --element, seminorm --element, verify --suite.
Exit codes: 0 success, 1 verification failure, 2 usage/config error,
3 numerical failure.

Numbers serialize through Python's shortest round-trip float repr in both
JSON and CSV, so a fixed config (seed included) yields byte-identical
artifacts.
"""

import argparse
import json
import sys

import numpy as np

from . import core, instances, mk, verify
from .core import BetaSequence, Element, Tail, ZeroResidual
from .instances import CantorModel, IntervalModel, UhfModel
from .mk import MatrixKindUnsupported
from .numerics import NumericalFailure

LEVEL_BOUNDS = {"interval": (2, 24), "cantor": (1, 8), "uhf": (1, 6)}


class ConfigError(ValueError):
    pass


def build_model(instance, level):
    lo, hi = LEVEL_BOUNDS[instance]
    if not lo <= level <= hi:
        raise ConfigError(f"{instance} level must lie in {lo}..{hi}")
    if instance == "interval":
        return IntervalModel.build(level)
    if instance == "cantor":
        return CantorModel.build(level)
    return UhfModel.build(level)


def resolve_element(model, spec, working_level):
    """Element references accepted by --element and from-element betas."""
    if spec == "p1":
        if not isinstance(model, IntervalModel):
            raise ConfigError("element p1 lives on the interval instance")
        return instances.p1(model, cutoff=max(30, working_level + 5))
    if spec.startswith("phi:"):
        return instances.phi(model, int(spec.split(":", 1)[1]))
    if spec.startswith("rademacher:"):
        return instances.rademacher(model, int(spec.split(":", 1)[1]))
    if spec.startswith("pauli:"):
        return instances.pauli_site(model, int(spec.split(":", 1)[1]))
    try:
        with open(spec) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read element file {spec!r}: {exc}") from exc
    values = np.asarray(payload["values"], dtype=float)
    if "limit" in payload:
        tail = Tail(
            limit=float(payload["limit"]),
            cutoff=len(values),
            affine=bool(payload.get("affine", False)),
        )
        return Element(model.algebra, values, tail)
    return Element(model.algebra, values)


def parse_beta(spec, model, working_level):
    if spec.startswith("geom:"):
        return BetaSequence.geometric(float(spec.split(":", 1)[1]))
    if spec == "harmonic":
        return BetaSequence.harmonic()
    if spec.startswith("from-element-squared:"):
        a = resolve_element(model, spec.split(":", 1)[1], working_level)
        return core.beta_squared_from_element(model.algebra, a, working_level)
    if spec.startswith("from-element:"):
        a = resolve_element(model, spec.split(":", 1)[1], working_level)
        return core.beta_from_element(model.algebra, a, working_level)
    raise ConfigError(f"unknown beta spec {spec!r}")


def _py(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_py(v) for v in obj]
    if isinstance(obj, (list, tuple)):
        return [_py(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _py(v) for k, v in obj.items()}
    return obj


def emit(artifact, rows, out, fmt):
    """Write the run artifact: `artifact` is the JSON document, `rows` the
    CSV line set carrying the same numbers."""
    if fmt == "json":
        text = json.dumps(_py(artifact), indent=2) + "\n"
    else:
        text = "\n".join(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) for row in rows) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_distances(model, beta, args):
    alg = model.algebra
    if alg.kind != "commutative":
        raise MatrixKindUnsupported("distance matrices are only defined for commutative instances")
    npts = alg.dim
    states = [mk.pure_state(alg, p) for p in alg.points]
    lp = np.zeros((npts, npts))
    closed = np.zeros((npts, npts))
    for i in range(npts):
        for j in range(i + 1, npts):
            lp[i, j] = lp[j, i] = mk.mk_distance(alg, beta, states[i], states[j]).value
            if isinstance(model, IntervalModel):
                cf = instances.closed_form_mk(model, beta, model.point_value(i), model.point_value(j))
            else:
                cf = instances.cantor_closed_form_mk(model, beta, alg.points[i], alg.points[j])
            closed[i, j] = closed[j, i] = cf
    max_disc = float(np.abs(lp - closed).max())
    artifact = {
        "points": list(alg.points),
        "lp": [list(map(float, row)) for row in lp],
        "closed_form": [list(map(float, row)) for row in closed],
        "max_discrepancy": max_disc,
    }
    rows = [["kind", "row", *alg.points]]
    rows += [["lp", alg.points[i], *map(float, lp[i])] for i in range(npts)]
    rows += [["closed_form", alg.points[i], *map(float, closed[i])] for i in range(npts)]
    rows += [["max_discrepancy", "", max_disc]]
    emit(artifact, rows, args.out, args.format)
    return 0


def cmd_domain(model, beta, args, level):
    a = resolve_element(model, args.element, level)
    rep = core.domain_separation_report(model.algebra, a, level)
    growth = rep.l_beta_sq_running[-1] / rep.l_beta_sq_running[-2] if level >= 2 else float("nan")
    artifact = {
        "levels": level,
        "beta_a": list(rep.beta_values),
        "beta_a_squared": list(rep.beta_sq_values),
        "l_beta_running": list(rep.l_beta_running),
        "l_beta_sq_running": list(rep.l_beta_sq_running),
        "divergence": {"last": rep.l_beta_sq_running[-1], "growth_ratio": growth},
    }
    rows = [["level", "beta_a", "beta_a_squared", "l_beta_running", "l_beta_sq_running"]]
    for n in range(level):
        rows.append(
            [
                n + 1,
                float(rep.beta_values[n]),
                float(rep.beta_sq_values[n]),
                float(rep.l_beta_running[n]),
                float(rep.l_beta_sq_running[n]),
            ]
        )
    rows.append(["divergence", float(rep.l_beta_sq_running[-1]), float(growth), "", ""])
    emit(artifact, rows, args.out, args.format)
    return 0


def cmd_seminorm(model, beta, args, level):
    a = resolve_element(model, args.element, level)
    rep = core.lip_seminorm(model.algebra, beta, a)
    artifact = {
        "value": float(rep.value),
        "terms": list(map(float, rep.terms)),
        "exact": rep.exact,
    }
    rows = [["level", "term"]]
    rows += [[n + 1, float(t)] for n, t in enumerate(rep.terms)]
    rows += [["value", float(rep.value)], ["exact", rep.exact]]
    emit(artifact, rows, args.out, args.format)
    return 0


def cmd_verify(args, seed):
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    checks = verify.run_suites(names, seed=seed)
    ok = True
    for c in checks:
        ok &= c.passed
        mark = "ok  " if c.passed else "FAIL"
        print(f"{mark} {c.name}  tolerance={c.tolerance:g}  deviation={c.deviation:.3e}")
    print(f"{'PASS' if ok else 'FAIL'}: {sum(c.passed for c in checks)}/{len(checks)} checks")
    return 0 if ok else 1


def make_parser():
    parser = argparse.ArgumentParser(prog="qm", description="quantum metrics on truncated filtered algebras")
    parser.add_argument("instance", choices=["interval", "cantor", "uhf"])
    parser.add_argument("--level", type=int, default=10, help="truncation level / depth / site count")
    parser.add_argument("--beta", default="geom:0.5", help="geom:R | harmonic | from-element:NAME | from-element-squared:NAME")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "csv"], default="json")

    add_output(sub.add_parser("distances", help="LP distance matrix over pure states plus closed forms"))
    p = sub.add_parser("domain", help="domain-separation diagnostics for an element")
    p.add_argument("--element", required=True)
    add_output(p)
    p = sub.add_parser("seminorm", help="per-level seminorm table for an element")
    p.add_argument("--element", required=True)
    add_output(p)
    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=[*verify.SUITES, "all"], default="all")
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args, args.seed)
        model = build_model(args.instance, args.level)
        level = model.algebra.levels if args.instance != "interval" else args.level
        beta = parse_beta(args.beta, model, level)
        if args.command == "distances":
            return cmd_distances(model, beta, args)
        if args.command == "domain":
            return cmd_domain(model, beta, args, level)
        return cmd_seminorm(model, beta, args, level)
    except (ConfigError, MatrixKindUnsupported, ZeroResidual, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
