"""Command-line front end: ``polycommutant <command> [options]``.

Every command prints either plain text or a JSON document (``schema: 1``)
that records the basis and monomial order it used.  Exit status is 0 when
every checked identity has zero residual, 1 when one fails (or, with
``--strict-paper``, when a printed formula disagrees with the engine) and
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import a3, racah
from .commutant import cartan_elements, dimension_table, extract_generators, kernel_centralizer, search_relations
from .envalg import normalize_word, random_rewrite
from .liealg import DefinitionError, InvalidDimension, algebra_by_name, check_jacobi
from .report import RelationReport

SCHEMA = 1
MONOMIAL_ORDER = ("commutative: total degree, ties lexicographic with the last variable most significant; "
                  "enveloping: PBW words non-decreasing in basis order")
COMMANDS = ("algebra", "commutant", "verify-a3", "verify-racah", "corrections")


@dataclass
class RunConfig:
    command: str
    n: int = 3
    output: str = "text"
    seed: int = 0
    flags: dict[str, Any] = field(default_factory=dict)


@dataclass
class Outcome:
    ok: bool
    payload: dict[str, Any]
    lines: list[str]
    basis: list[str]
    paper_ok: bool = True


def _reports(rs: Sequence[RelationReport]) -> list[dict]:
    return [r.to_dict() for r in rs]


def _summary(label: str, rs: Sequence[RelationReport]) -> str:
    good = sum(r.ok for r in rs)
    return f"{label}: {good}/{len(rs)} verified"


# -- commands -----------------------------------------------------------------

def cmd_algebra(cfg: RunConfig) -> Outcome:
    spec = algebra_by_name(cfg.flags["algebra"])
    desc = spec.describe()
    jacobi = check_jacobi(spec)
    # randomized confluence spot check: random reduction orders agree with the memoized normal form
    rng = random.Random(cfg.seed)
    words = [tuple(rng.randrange(spec.dim) for _ in range(rng.randint(2, 5))) for _ in range(10)]
    confluent = all(random_rewrite(spec, w, rng) == normalize_word(spec, w) for w in words)
    lines = [f"algebra {spec.name} (dim {spec.dim})", "basis: " + " ".join(spec.basis)]
    lines += [f"[{row['x']}, {row['y']}] = {row['bracket']}" for row in desc["brackets"]]
    lines += [f"jacobi: {'ok' if jacobi else 'FAILED'}",
              f"confluence ({len(words)} random words, seed {cfg.seed}): {'ok' if confluent else 'FAILED'}"]
    payload = dict(desc, jacobi=jacobi, confluence={"words": [list(w) for w in words], "ok": confluent})
    return Outcome(jacobi and confluent, payload, lines, list(spec.basis))


def cmd_commutant(cfg: RunConfig) -> Outcome:
    spec = algebra_by_name(cfg.flags["algebra"])
    top = cfg.flags["max_degree"]
    weight_dims = dimension_table(spec, top)
    cartan = cartan_elements(spec)
    kernel_dims = {d: kernel_centralizer(spec, cartan, d).dimension for d in range(1, top + 1)}
    gens = extract_generators(spec, top)
    bound = cfg.flags.get("relation_degree") or 2 * top
    search = search_relations(gens, bound)
    gens.relations = search.relations
    agree = weight_dims == kernel_dims
    lines = [f"commutant of the Cartan subalgebra in S({spec.name}), degrees 1..{top}"]
    lines += [f"degree {d}: dimension {weight_dims[d]} (kernel method {kernel_dims[d]})" for d in weight_dims]
    lines.append(f"generators ({len(gens.names)}):")
    lines += [f"  {n} [deg {gens.degrees[n]}] = {gens.elements[n].to_text()}" for n in gens.names]
    lines.append(f"relations up to weighted degree {bound}: {len(search.relations)}")
    lines += [f"  {r.to_text()} = 0" for r in search.relations]
    payload = {
        "algebra": spec.name,
        "dimensions": {str(d): v for d, v in weight_dims.items()},
        "kernel_dimensions": {str(d): v for d, v in kernel_dims.items()},
        "generators": gens.to_dict()["generators"],
        "relations": [r.to_text() for r in search.relations],
        "relation_search": {"bound": bound,
                            "kernel_dimensions": {str(d): v for d, v in search.kernel_dims.items()}},
    }
    return Outcome(agree, payload, lines, list(spec.basis))


def cmd_verify_a3(cfg: RunConfig) -> Outcome:
    parts = [p for p in ("classical", "quantum", "constraint") if cfg.flags.get(p)]
    if not parts:
        parts = ["classical", "quantum", "constraint"]
    q = a3.build_quantum()
    payload: dict[str, Any] = {}
    lines: list[str] = []
    ok = True
    paper_ok = True
    qrs = None
    if "classical" in parts:
        rs = a3.verify_classical(q.classical)
        payload["classical"] = _reports(rs)
        lines.append(_summary("classical", rs))
        lines += [r.text_line() for r in rs]
        ok &= all(r.ok for r in rs)
    if "quantum" in parts:
        forms = a3.compare_explicit_forms(q)
        qrs = a3.verify_quantum(q)
        limit = a3.classical_limit_checks(q)
        payload["quantum"] = {"forms": _reports(forms), "relations": _reports(qrs),
                              "classical_limit": _reports(limit)}
        lines.append(_summary("quantum relations", qrs))
        lines += [r.text_line() for r in forms + qrs]
        lines.append(_summary("classical limit", limit))
        ok &= all(r.ok for r in forms + qrs + limit)
        paper_ok &= all(r.paper_comparison is None or r.paper_comparison["matched"] for r in forms + qrs)
    if "constraint" in parts:
        res = a3.verify_quantum_constraint(q)
        corrected = qrs if qrs is not None else [r for r in a3.verify_quantum(q) if r.correction is not None]
        corrected = [r for r in corrected if r.correction is not None]
        mats = a3.matrix_cross_check(q, "defining", corrected, res)
        payload["constraint"] = res.report.to_dict()
        payload["matrix_check"] = _reports(mats)
        lines.append(res.report.text_line())
        lines.append("identity: " + res.report.extra["identity"])
        lines.append(_summary("defining representation", mats))
        ok &= res.report.ok and all(r.ok for r in mats)
        paper_ok &= bool(res.report.paper_comparison["matched"])
    return Outcome(ok, payload, lines, list(q.spec.basis), paper_ok)


def cmd_verify_racah(cfg: RunConfig) -> Outcome:
    run = racah.run_sphere(cfg.n, closure=bool(cfg.flags.get("closure")))
    fixed = run.symbols
    extra = list(run.extra_checks)
    if cfg.n >= 6:
        extra += racah.disjoint_triple_checks(fixed)
    ok = all(r.ok for r in run.with_ideal) and all(r.ok for r in extra)
    without_nonzero = sum(not r.ok for r in run.without_ideal)
    lines = [f"R({cfg.n}) sphere model",
             "constants: " + ", ".join(f"{k}={v}" for k, v in run.solution.values.items()),
             f"solution family dimension: {run.solution.family_dimension}",
             "instances: " + ", ".join(f"{k}={v}" for k, v in sorted(run.counts.items())),
             _summary("modulo constraints", run.with_ideal),
             f"without constraints: {without_nonzero} non-zero residuals",
             _summary("auxiliary checks", extra)]
    lines += [r.text_line() for r in run.with_ideal + extra if not r.ok]
    payload = {
        "n": cfg.n,
        "closure": bool(cfg.flags.get("closure")),
        "constants": run.solution.to_dict(),
        "counts": dict(sorted(run.counts.items())),
        "relations": _reports(run.with_ideal),
        "without_ideal": [{"id": r.id, "indices": list(r.indices), "residual": r.residual, "status": r.status}
                          for r in run.without_ideal],
        "auxiliary": _reports(extra),
    }
    return Outcome(ok, payload, lines, list(fixed.ring.names))


def cmd_corrections(cfg: RunConfig) -> Outcome:
    q = a3.build_quantum()
    rows = a3.corrections_table(q)
    res = a3.verify_quantum_constraint(q)
    lines = []
    for row in rows:
        idx = ",".join(map(str, row["indices"]))
        flag = "match" if row["matched"] else "differs"
        lines.append(f"{row['id']}({idx}) {row['lhs']}: {row['engine_correction']}  [printed: {flag}]")
    lines.append(f"constraint lower terms: {res.report.correction}")
    paper_ok = all(r["matched"] for r in rows) and bool(res.report.paper_comparison["matched"])
    payload = {"corrections": rows, "constraint": res.report.to_dict()}
    ok = res.report.ok
    return Outcome(ok, payload, lines, list(q.spec.basis), paper_ok)


HANDLERS = {
    "algebra": cmd_algebra,
    "commutant": cmd_commutant,
    "verify-a3": cmd_verify_a3,
    "verify-racah": cmd_verify_racah,
    "corrections": cmd_corrections,
}


# -- argument handling --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--strict-paper", action="store_true",
                        help="fail when a printed formula disagrees with the engine")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="polycommutant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", parents=[common], help="structure constants and sanity checks")
    p.add_argument("--algebra", default="sl3")

    p = sub.add_parser("commutant", parents=[common], help="Cartan commutant generators and relations")
    p.add_argument("--algebra", default="sl3")
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--relation-degree", type=int, default=None)

    p = sub.add_parser("verify-a3", parents=[common], help="classical and quantum A3 relations")
    p.add_argument("--classical", action="store_true")
    p.add_argument("--quantum", action="store_true")
    p.add_argument("--constraint", action="store_true")

    p = sub.add_parser("verify-racah", parents=[common], help="R(n) relations in the sphere model")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--closure", action="store_true")

    sub.add_parser("corrections", parents=[common], help="quantum correction table for A3")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "n", "output", "seed")}
    return RunConfig(args.command, getattr(args, "n", 3), args.output, args.seed, flags)


def render(cfg: RunConfig, out: Outcome) -> str:
    if cfg.output == "json":
        doc = {
            "schema": SCHEMA,
            "command": cfg.command,
            "config": {"n": cfg.n, "seed": cfg.seed, **{k: v for k, v in sorted(cfg.flags.items())}},
            "basis": out.basis,
            "monomial_order": MONOMIAL_ORDER,
            "ok": out.ok,
            "paper_match": out.paper_ok,
            "result": out.payload,
        }
        return json.dumps(doc, indent=2) + "\n"
    head = [f"# basis: {' '.join(out.basis)}", f"# monomial order: {MONOMIAL_ORDER}"]
    tail = [f"status: {'ok' if out.ok else 'FAILED'}"
            + ("" if out.paper_ok else " (printed formulas differ from engine)")]
    return "\n".join(head + out.lines + tail) + "\n"


def run(cfg: RunConfig) -> tuple[int, str]:
    out = HANDLERS[cfg.command](cfg)
    code = 0 if out.ok else 1
    if cfg.flags.get("strict_paper") and not out.paper_ok:
        code = 1
    return code, render(cfg, out)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = config_from_args(args)
    if cfg.command == "verify-racah" and cfg.n < 3:
        parser.print_usage(sys.stderr)
        print("polycommutant: error: --n must be at least 3", file=sys.stderr)
        return 2
    try:
        code, text = run(cfg)
    except racah.NoRealization as exc:
        print(f"polycommutant: no realization: {exc} ({', '.join(exc.relation_ids)})", file=sys.stderr)
        return 1
    except (DefinitionError, InvalidDimension, ValueError) as exc:
        print(f"polycommutant: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
