"""Command-line front end.

Exit codes: 0 success, 1 a negative semantic outcome (invalid quiver, failed
verification, no solution), 2 usage or input errors.

A quiver argument is a path to a quiver file, or ``fixture:<name>`` for one
of the bundled examples.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Callable

from . import fixtures
from .dsl import DSLError, module_from_text, parse_jf, parse_quiver, parse_string
from .fields import PrimeField
from .jordan import genjf
from .quiver import GentleQuiver, algebra_basis, validate_gentle
from .recoverability import (
    AnalysisReport,
    NoSolution,
    NotJordanRecoverable,
    VerificationFailed,
    decide,
    find_witness,
    recover,
    verify_witness,
)
from .representations import (
    Summand,
    decompose_ledgered,
    from_summands,
    hom_dim_combinatorial,
    hom_space,
    string_module,
)
from .strings import (
    InfiniteFamily,
    InvalidString,
    enumerate_bands,
    is_maximal,
    require_string,
    strings_through,
)


class UsageError(Exception):
    pass


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def load_quiver(source: str) -> GentleQuiver:
    if source.startswith("fixture:"):
        try:
            text = fixtures.fixture_text(source[len("fixture:") :])
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc.strerror}") from exc
    try:
        return parse_quiver(text)
    except DSLError as exc:
        raise UsageError(f"{source}: {exc}") from exc


def _vertex(q: GentleQuiver, m: str) -> str:
    if m not in q.vertices:
        raise UsageError(f"unknown vertex {m!r}; vertices are {', '.join(q.vertices)}")
    return m


def _gentle(q: GentleQuiver) -> GentleQuiver:
    report = validate_gentle(q)
    if not report.ok:
        raise UsageError("quiver is not gentle: " + "; ".join(v.detail for v in report.violations))
    return q


class Printer:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.data: dict = {}

    def human(self, line: str = "") -> None:
        if self.fmt == "human":
            print(line)

    def put(self, key: str, value) -> None:
        self.data[key] = value

    def finish(self) -> None:
        if self.fmt == "json":
            print(json.dumps(self.data, indent=2, sort_keys=True))


# commands

def cmd_validate(args, out: Printer) -> int:
    q = load_quiver(args.quiver)
    report = validate_gentle(q)
    out.data.update(q.to_dict(report))
    out.put("ok", report.ok)
    out.human(f"{q.name}: {len(q.vertices)} vertices, {len(q.arrows)} arrows, {len(q.relations)} relations")
    if report.ok:
        out.human("gentle and admissible")
    for v in report.violations:
        out.human(f"violation [{v.rule}] {v.detail} (at {v.offender})")
    return 0 if report.ok else 1


def cmd_basis(args, out: Printer) -> int:
    q = _gentle(load_quiver(args.quiver))
    paths = algebra_basis(q)
    out.put("basis", [str(p) for p in paths])
    out.put("dimension", len(paths))
    out.human(f"dim = {len(paths)}")
    for p in paths:
        out.human(f"  {p}")
    return 0


def cmd_strings(args, out: Printer) -> int:
    q = _gentle(load_quiver(args.quiver))
    m = _vertex(q, args.vertex)
    try:
        words = strings_through(q, m, cap=args.cap)
    except InfiniteFamily as exc:
        out.put("error", str(exc))
        out.human(str(exc))
        return 1
    if args.maximal:
        words = [w for w in words if is_maximal(q, w)]
    out.put("strings", [str(w) for w in words])
    out.human(f"Σ_Q({m}): {len(words)} strings" + (" (maximal only)" if args.maximal else ""))
    for w in words:
        out.human(f"  {w}")
    return 0


def cmd_bands(args, out: Printer) -> int:
    q = _gentle(load_quiver(args.quiver))
    bands = enumerate_bands(q, args.max_len)
    out.put("bands", [str(b) for b in bands])
    out.human(f"{len(bands)} bands of length <= {args.max_len}")
    for b in bands:
        out.human(f"  {b}")
    return 0


def _report_dict(r: AnalysisReport) -> dict:
    d = {
        "vertex": r.vertex,
        "flags": r.flags.as_dict(),
        "detail": dict(sorted(r.flags.detail.items())),
        "jr": r.jr,
        "cjr": r.cjr,
    }
    if r.reduction is not None:
        d["reduction"] = {"string": str(r.reduction.word), "vertices": list(r.reduction.quiver.vertices)}
    return d


def cmd_analyze(args, out: Printer) -> int:
    q = _gentle(load_quiver(args.quiver))
    m = _vertex(q, args.vertex)
    report = decide(q, m)
    out.data.update(_report_dict(report))
    mark = {True: "yes", False: "no"}
    out.human(f"vertex {m} of {q.name}")
    for k, v in report.flags.as_dict().items():
        line = f"  ({k}) {mark[v]}"
        if k in report.flags.detail:
            line += f": {report.flags.detail[k]}"
        out.human(line)
    out.human(f"Jordan recoverable: {mark[report.jr]}")
    out.human(f"canonically Jordan recoverable: {mark[report.cjr]}")
    if report.reduction is not None:
        out.human(f"reduces to the type A quiver along {report.reduction.word}")
    if not args.witness:
        return 0
    opts = dict(prime=args.prime, budget=args.budget, seed=args.seed, threads=args.threads)
    if report.cjr:
        return _recovery_demo(q, m, out, **opts)
    w = find_witness(q, m, report, **opts)
    entry = {"kind": w.kind, "construction": w.construction, "x": w.x.describe()}
    try:
        verify_witness(w, **opts)
        ok = True
    except VerificationFailed as exc:
        entry["failure"] = str(exc)
        ok = False
    entry["y"] = w.y.describe() if w.kind == "jr-pair" else _rep_maps(w.y, w.arrow)
    entry["genjf"] = str(w.shared) if w.shared is not None else None
    entry["transcript"] = list(w.transcript)
    entry["verified"] = ok
    out.put("witness", entry)
    out.human(f"witness ({w.construction}):")
    out.human(f"  X = {entry['x']}")
    out.human(f"  {'Y' if w.kind == 'jr-pair' else 'W'} = {entry['y']}")
    for line in w.transcript:
        out.human(f"  {line}")
    out.human("  verified" if ok else f"  verification FAILED: {entry['failure']}")
    return 0 if ok else 1


def _rep_maps(rep, arrow: str) -> str:
    mat = rep.maps[arrow]
    return f"dims {rep.dim_vector()}, only {arrow} nonzero: {mat.tolist()}"


def _recovery_demo(q, m, out: Printer, prime, budget, seed, threads) -> int:
    field = PrimeField(prime)
    words = strings_through(q, m)
    x = from_summands(q, [Summand("string", w) for w in words], field)
    g = genjf(x, vertex_hint=m, prime=prime, budget=budget, seed=seed, threads=threads, escalate=(3, 5))
    y = recover(q, m, g.jf, field=field, prime=prime, budget=budget, threads=threads)
    same = decompose_ledgered(x, y) == "iso"
    out.put("recovery", {"x": x.describe(), "genjf": str(g.jf), "engine": g.engine, "recovered": y.describe(), "iso": same})
    out.human("recovery demonstration:")
    out.human(f"  X = {x.describe()}")
    out.human(f"  GenJF(X) = {g.jf} [{g.engine}]")
    out.human(f"  recovered {y.describe()} ({'≅ X' if same else 'NOT isomorphic to X'})")
    return 0 if same else 1


def cmd_genjf(args, out: Printer) -> int:
    q = _gentle(load_quiver(args.quiver))
    hint = _vertex(q, args.vertex_hint) if args.vertex_hint else None
    x = module_from_text(q, args.module, PrimeField(args.prime))
    bad = x.relation_defects()
    if bad:
        raise UsageError(f"module violates relations {bad}")
    res = genjf(
        x, vertex_hint=hint, engine=args.engine, prime=args.prime, budget=args.budget,
        seed=args.seed, threads=args.threads, escalate=tuple(args.escalate),
    )
    exactness = {"structural": "proven exact", "exhaustive": "exact over GF(p)", "sampled": "lower bound"}[res.engine]
    out.put("module", x.describe())
    out.put("genjf", str(res.jf))
    out.put("engine", res.engine)
    out.put("prime", res.prime)
    out.human(f"GenJF({x.describe()}) = {res.jf}")
    out.human(f"engine: {res.engine} ({exactness}" + (f", p = {res.prime})" if res.prime else ")"))
    return 0


def cmd_homdim(args, out: Printer) -> int:
    q = _gentle(load_quiver(args.quiver))
    rho = require_string(q, parse_string(q, args.source))
    sigma = require_string(q, parse_string(q, args.target))
    field = PrimeField(args.prime)
    comb = hom_dim_combinatorial(rho, sigma)
    lin = len(hom_space(string_module(q, rho, field), string_module(q, sigma, field)))
    out.put("combinatorial", comb)
    out.put("linear", lin)
    out.human(f"dim Hom(M({rho}), M({sigma})) = {comb} (substring pairs), {lin} (linear system)")
    return 0 if comb == lin else 1


def cmd_recover(args, out: Printer) -> int:
    q = _gentle(load_quiver(args.quiver))
    m = _vertex(q, args.vertex)
    try:
        lam = parse_jf(args.jf, q.vertices)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        x = recover(q, m, lam, prime=args.prime, budget=args.budget, threads=args.threads)
    except (NoSolution, NotJordanRecoverable) as exc:
        out.put("result", type(exc).__name__)
        out.put("reason", str(exc))
        out.human(f"{type(exc).__name__}: {exc}")
        return 1
    out.put("result", x.describe())
    out.human(x.describe())
    return 0


# self test over the bundled examples

def _selftest_checks() -> list[tuple[str, Callable[[], bool]]]:
    def fx(name):
        return fixtures.load_fixture(name)

    def jf_of(name, expr):
        q = fx(name)
        return str(genjf(module_from_text(q, expr, PrimeField(2)), engine="oracle", escalate=(3,)).jf)

    def verdict(name, m):
        r = decide(fx(name), m)
        return r.jr, r.cjr

    def witness_ok(name, m):
        q = fx(name)
        w = find_witness(q, m)
        verify_witness(w)
        return True

    def no_solution():
        try:
            recover(fx("chain3"), "2", parse_jf("1:[1];2:[1];3:[1]"))
        except NoSolution:
            return True
        return False

    return [
        ("eight-vertex quiver is gentle", lambda: validate_gentle(fx("eight")).ok),
        ("eight-vertex algebra has dimension 20", lambda: len(algebra_basis(fx("eight"))) == 20),
        ("GenJF(S_1 + S_2) on A_2", lambda: jf_of("a2", "M(e_1) + M(e_2)") == "1:[1];2:[1]"),
        ("GenJF on the chain", lambda: jf_of("chain3", "M(a) + M(e_2) + M(b)") == "1:[1];2:[3];3:[1]"),
        ("GenJF on the star", lambda: jf_of("star4", "M(e_1) + M(c^-1 a) + M(b a) + M(a)") == "1:[4];2:[3];3:[1];4:[1]"),
        ("verdicts on the chain", lambda: verdict("chain3", "2") == (True, True)),
        ("verdicts on the star", lambda: verdict("star4", "2")[0] is False and all(verdict("star4", m)[1] for m in "134")),
        ("verdicts on the 3-cycle", lambda: verdict("cycle3", "2") == (True, False)),
        ("verdicts on the Kronecker quiver", lambda: not verdict("kronecker", "1")[0] and not verdict("kronecker", "2")[0]),
        ("witness on the star", lambda: witness_ok("star4", "2")),
        ("witness on the fork", lambda: witness_ok("fork", "1")),
        ("witness on the triangle", lambda: witness_ok("triangle", "1")),
        ("witness on the 3-cycle", lambda: witness_ok("cycle3", "2")),
        ("recovery on the chain", lambda: recover(fx("chain3"), "2", parse_jf("1:[1];2:[3];3:[1]")).describe() == "M(e_2) + M(a) + M(b)"),
        ("no solution for single boxes", no_solution),
    ]


def cmd_selftest(args, out: Printer) -> int:
    results = []
    for name, check in _selftest_checks():
        t0 = time.perf_counter()
        try:
            ok, err = bool(check()), None
        except Exception as exc:  # a crash is reported as a failed check
            ok, err = False, f"{type(exc).__name__}: {exc}"
        results.append({"check": name, "pass": ok, "error": err})
        out.human(f"{'PASS' if ok else 'FAIL'} {name} ({time.perf_counter() - t0:.2f}s)" + (f" {err}" if err else ""))
    out.put("checks", results)
    passed = sum(r["pass"] for r in results)
    out.human(f"{passed}/{len(results)} checks passed")
    return 0 if passed == len(results) else 1


# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=2, help="prime field for searches (default 2)")
    common.add_argument("--budget", type=int, default=1 << 16, help="maximum points searched")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=("human", "json"), default="human")

    parser = argparse.ArgumentParser(prog="gentle-jordan", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check gentleness and admissibility").add_argument("quiver")
    add("basis", cmd_basis, "list the paths spanning the algebra").add_argument("quiver")
    p = add("strings", cmd_strings, "strings through a vertex")
    p.add_argument("quiver")
    p.add_argument("--vertex", "-m", required=True)
    p.add_argument("--cap", type=int, default=None, help="length bound")
    p.add_argument("--maximal", action="store_true")
    p = add("bands", cmd_bands, "bands up to a length")
    p.add_argument("quiver")
    p.add_argument("--max-len", type=int, default=6)
    p = add("analyze", cmd_analyze, "conditions and recoverability verdicts at a vertex")
    p.add_argument("quiver")
    p.add_argument("--vertex", "-m", required=True)
    p.add_argument("--witness", action="store_true", help="build and verify a counterexample or a recovery")
    p = add("genjf", cmd_genjf, "generic Jordan form of a module")
    p.add_argument("quiver")
    p.add_argument("--module", required=True, help="e.g. 'M(a) + M(e_2)^2'")
    p.add_argument("--engine", choices=("auto", "structural", "oracle"), default="auto")
    p.add_argument("--vertex-hint", default=None)
    p.add_argument("--escalate", type=int, nargs="*", default=[3], help="further primes to try")
    p = add("homdim", cmd_homdim, "dimension of Hom between two string modules")
    p.add_argument("quiver")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p = add("recover", cmd_recover, "recover a module from Jordan data")
    p.add_argument("quiver")
    p.add_argument("--vertex", "-m", required=True)
    p.add_argument("--jf", required=True, help="e.g. '1:[1];2:[3];3:[1]'")
    add("selftest", cmd_selftest, "run the bundled example checks")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Printer(args.format)
    try:
        if not _is_prime(args.prime):
            raise UsageError(f"--prime must be prime, got {args.prime}")
        if args.budget < 1:
            raise UsageError("--budget must be at least 1")
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        code = args.func(args, out)
    except (UsageError, InvalidString) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
