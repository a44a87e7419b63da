"""Command-line interface.

Exit codes:
    0  success
    1  unexpected internal error
    2  usage error (bad arguments or parameter values)
    3  lattice file could not be parsed or validated
    4  a search cap was exceeded; nothing is printed on stdout
    5  an axiom checker or cross-check failed; the offending data is dumped
    6  ``verify`` found a failing check, or output differs from a golden file
"""

from __future__ import annotations

import argparse
import difflib
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import __version__, bounds
from .errors import (
    AxiomViolation,
    CapExceeded,
    FileSyntaxError,
    OracleMismatch,
    PCyclicError,
    ValidationError,
    VersionError,
)
from .exact_linalg import is_prime, p_valuation
from .formats import load_lattice, run_pipeline, serialize_lattice
from .lattice import c_value, character_profile, max_free_rank, random_lattice
from .modrep import ext1_modp, ext1_modp2, hom_order_modp
from .tate import h0_hat, h1
from .verification import run_verify
from .yakovlev import DiagramConstraints, build_diagram, enumerate_diagrams, permutation_multiplicities

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CAP = 4
EXIT_AXIOM = 5
EXIT_VERIFY = 6

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def _int_list(text: str, sep: str = ",") -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(sep) if x.strip())
    except ValueError:
        raise UsageError(f"expected integers separated by {sep!r}, got {text!r}") from None


def _matrix_text(rows) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in rows) + "]"


# ---------------------------------------------------------------------------
# subcommands; each returns (stdout text, exit code)
# ---------------------------------------------------------------------------

def cmd_cohomology(args) -> tuple[str, int]:
    M = load_lattice(args.file, args.strict)
    M.check_level(args.level)
    lines = [f"lattice p={M.p} n={M.n} rank={M.rank} label={M.label or '-'}",
             f"level {args.level}"]
    for name, group in (("H1", h1(M, args.level)), ("H0hat", h0_hat(M, args.level))):
        mod = group.module
        lines.append(f"{name}: {mod.group}")
        if mod.rank:
            lines.append(f"  sigma action: {_matrix_text(mod.action.rows)}")
    lines.append(f"c = {c_value(M, args.level)}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_diagram(args) -> tuple[str, int]:
    M = load_lattice(args.file, args.strict)
    D = build_diagram(M)
    D.check_axioms()
    return D.serialize(), EXIT_OK


def cmd_decompose(args) -> tuple[str, int]:
    M = load_lattice(args.file, args.strict)
    i = args.group_level
    M.check_level(i)
    free = max_free_rank(M, i, witness=args.witness)
    profile = character_profile(M)
    lines = [f"lattice p={M.p} n={M.n} rank={M.rank} label={M.label or '-'}",
             f"group level {i}",
             f"free Z_p[Gamma_{i}] summands: {free.rank}",
             f"c = {c_value(M, i)}",
             "character profile (kernel Gamma_0..Gamma_n): "
             + " ".join(str(m) for m in profile.multiplicities)]
    if free.witness is not None:
        for vec in free.witness:
            lines.append(f"  generator {list(vec)}")
    if args.reference is not None:
        ref = _int_list(args.reference)
        a = permutation_multiplicities(M, ref)
        lines.append("permutation multiplicities a_0..a_n: " + " ".join(map(str, a)))
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_ext(args) -> tuple[str, int]:
    p = args.p
    if not (is_prime(p) and p % 2):
        raise UsageError(f"p={p} is not an odd prime")
    lines = []
    if args.modp2:
        lines.append(f"Ext^1 over (Z/{p}^2)[C_{p}] between Y_i and Y_j (columns j=1..{p})")
        for i in range(1, p + 1):
            lines.append(f"i={i}: " + " | ".join(str(ext1_modp2(i, j, p)) for j in range(1, p + 1)))
    else:
        lines.append(f"dim Ext^1 / dim Hom over (Z/{p})[C_{p}] between Y_i and Y_j "
                     f"(columns j=1..{p})")
        for i in range(1, p + 1):
            cells = [f"{ext1_modp(i, j, p)}/{p_valuation(hom_order_modp(i, j, p), p)}"
                     for j in range(1, p + 1)]
            lines.append(f"i={i}: " + " | ".join(cells))
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_enumerate(args) -> tuple[str, int]:
    ranks = _int_list(args.ranks)
    if len(ranks) != 2 or min(ranks) < 0:
        raise UsageError("--ranks takes two nonnegative integers d1,d2")
    kwargs = {}
    if args.cap is not None:
        kwargs["search_cap"] = args.cap
    result = enumerate_diagrams(args.p, 2, DiagramConstraints(ranks), **kwargs)
    bound = bounds.burns_counting_bound(args.p, 2, ranks)
    text = result.serialize() + f"counting bound: {bound}\n"
    return text, EXIT_OK


def _parse_params(text: str) -> dict[str, str]:
    out = {}
    for item in filter(None, (s.strip() for s in (text or "").split(","))):
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not of the form key=value")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _take_int(params: dict[str, str], key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise UsageError(f"missing parameter {key}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise UsageError(f"parameter {key} must be an integer") from None


def _factor_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for item in filter(None, text.split(":")):
        base, _, exp = item.partition("^")
        try:
            pairs.append((int(base), int(exp or "1")))
        except ValueError:
            raise UsageError(f"map factor {item!r} is not of the form order^exponent") from None
    return pairs


FORMULAS = ("thmA", "thmB1", "thmB2proof", "counting", "countingref", "fixedpart", "rosen",
            "rescores3", "adhoc")


def evaluate_formula(formula: str, params: dict[str, str]) -> list[str]:
    get = lambda key, default=None: _take_int(params, key, default)  # noqa: E731
    if formula == "thmA":
        inp = bounds.BoundInput(get("p", 3), group_order=get("group_order"),
                                p_part_order=get("p_part_order"), cl_s_rank=get("cl_s_rank"),
                                s_f=get("s_f"))
        return [f"thmA = {bounds.thmA_bound(inp)}"]
    if formula == "thmB1":
        p, r, d = get("p"), get("r"), get("delta")
        bounds.BoundInput(p, r=r, delta=d)
        return [f"thmB1 = {p}^{bounds.thmB1_exponent(r, d)} = {bounds.thmB1_bound(p, r, d)}"]
    if formula == "thmB2proof":
        p, r, d = get("p"), get("r"), get("delta")
        bounds.BoundInput(p, r=r, delta=d)
        return [f"thmB2proof = {bounds.thmB2_proof_bound(p, r, d)}"]
    if formula == "counting":
        p, n = get("p"), get("n", 2)
        d = _int_list(params.get("d", ""), ":")
        return [f"counting = {bounds.burns_counting_bound(p, n, d)}"]
    if formula == "countingref":
        N = _int_list(params.get("N", ""), ":")
        s = _int_list(params.get("s", ""), ":")
        value = bounds.counting_ref_bound(N, s, _factor_pairs(params.get("res", "")),
                                          _factor_pairs(params.get("cores", "")))
        return [f"countingref = {value}"]
    if formula == "fixedpart":
        fp = bounds.fixedpart_bound(get("i"), get("n"), get("r"), get("delta"))
        lines = [f"fixedpart = {fp.value}"]
        if fp.clamped:
            lines.append(f"  raw value {fp.raw} clamped at 0")
        return lines
    if formula == "rosen":
        p = params.get("p")
        value = bounds.rosen_bound(get("degree"), get("r"), get("delta"),
                                   int(p) if p is not None else None)
        return [f"rosen = {value}"]
    if formula == "rescores3":
        p, r, d = get("p"), get("r"), get("delta")
        res, cores = bounds.res_cores3_exponents(p, r, d)
        return [f"restriction maps <= {p}^{res}", f"corestriction maps <= {p}^{cores}"]
    if formula == "adhoc":
        return [f"adhoc = {bounds.adhoc_n2_bound(get('p'), get('r'), get('delta'))}"]
    raise UsageError(f"unknown formula {formula}")


def cmd_bounds(args) -> tuple[str, int]:
    params = _parse_params(args.params)
    try:
        lines = evaluate_formula(args.formula, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    shown = ", ".join(f"{k}={v}" for k, v in sorted(params.items()))
    return f"{args.formula}({shown})\n" + "\n".join(lines) + "\n", EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    ok, text = run_verify()
    return text, EXIT_OK if ok else EXIT_VERIFY


def _report_one(job: tuple[str, bool, int]) -> tuple[str, int, str]:
    path, strict, seed = job
    try:
        return run_pipeline(load_lattice(path, strict), source=path, seed=seed), EXIT_OK, ""
    except PCyclicError as exc:
        code, message = classify(exc)
        return "", code, message


def cmd_report(args) -> tuple[str, int]:
    jobs = [(path, args.strict, args.seed) for path in args.files]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_report_one, jobs))
    else:
        results = [_report_one(job) for job in jobs]
    out = []
    worst = EXIT_OK
    for (path, _, _), (text, code, message) in zip(jobs, results):
        if code:
            sys.stderr.write(f"{path}: {message}\n")
            worst = worst or code
        else:
            out.append(text)
    return "\n".join(out), worst


def cmd_random(args) -> tuple[str, int]:
    M, recipe = random_lattice(args.p, args.n, args.seed, max_rank=args.max_rank)
    summands = " + ".join(f"{name}^{k}" if k > 1 else name for name, k in recipe.multiplicities)
    note = f"random_lattice p={args.p} n={args.n} seed={args.seed}: {summands}"
    return serialize_lattice(M, provenance=note), EXIT_OK


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

def classify(exc: BaseException) -> tuple[int, str]:
    """Exit code and diagnostic text for an exception."""
    if isinstance(exc, (FileSyntaxError, ValidationError, VersionError)):
        return EXIT_PARSE, f"parse error ({type(exc).__name__}): {exc}"
    if isinstance(exc, CapExceeded):
        return EXIT_CAP, f"cap exceeded: {exc}"
    if isinstance(exc, (AxiomViolation, OracleMismatch)):
        dump = getattr(exc, "dump", "")
        return EXIT_AXIOM, f"check failed ({type(exc).__name__}): {exc}" + (
            "\n" + dump.rstrip("\n") if dump else "")
    if isinstance(exc, UsageError):
        return EXIT_USAGE, f"usage error: {exc}"
    if isinstance(exc, PCyclicError):
        return EXIT_USAGE, f"error ({type(exc).__name__}): {exc}"
    return EXIT_INTERNAL, f"internal error ({type(exc).__name__}): {exc}"


def golden_name(args) -> str:
    parts = [args.command]
    for key in ("p", "n", "ranks", "modp2", "formula", "params", "level", "group_level", "seed"):
        value = getattr(args, key, None)
        if value not in (None, False):
            parts.append(f"{key}-{value}")
    for key in ("file",):
        value = getattr(args, key, None)
        if value:
            parts.append(os.path.splitext(os.path.basename(value))[0])
    name = "_".join(str(x) for x in parts)
    return "".join(ch if ch.isalnum() or ch in "-_." else "-" for ch in name) + ".txt"


def check_golden(directory: str, name: str, text: str) -> tuple[bool, str]:
    """Write the golden file if absent, otherwise compare byte-for-byte."""
    path = os.path.join(directory, name)
    if not os.path.exists(path):
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        return True, f"golden file written: {path}"
    with open(path, encoding="utf-8", newline="") as fh:
        expected = fh.read()
    if expected == text:
        return True, ""
    diff = "".join(difflib.unified_diff(expected.splitlines(True), text.splitlines(True),
                                        fromfile=path, tofile="current output"))
    return False, f"output differs from golden file {path}\n{diff}"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--strict", action="store_true",
                        help="reject unknown fields in lattice files")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"seed for any randomness (default {DEFAULT_SEED})")
    common.add_argument("--cap", type=int, default=None,
                        help="maximum number of candidates a search may examine")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batch work")
    common.add_argument("--golden", metavar="DIR", default=None,
                        help="compare output with DIR/<name>.txt, writing it if absent")

    parser = argparse.ArgumentParser(prog="pcyclic", description=__doc__.splitlines()[0],
                                     epilog=__doc__.split("\n", 1)[1],
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"pcyclic {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", parents=[common], help="H^1 and H^0-hat at one level")
    p.add_argument("file")
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(handler=cmd_cohomology)

    p = sub.add_parser("diagram", parents=[common], help="the cohomology diagram of a lattice")
    p.add_argument("file")
    p.set_defaults(handler=cmd_diagram)

    p = sub.add_parser("decompose", parents=[common], help="free summands and character data")
    p.add_argument("file")
    p.add_argument("--group-level", type=int, required=True)
    p.add_argument("--reference", default=None,
                   help="character profile m_0,..,m_n of the non-permutation part")
    p.add_argument("--witness", action="store_true", help="print free generators")
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("ext", parents=[common], help="Ext^1 and Hom tables between Y_i, Y_j")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--modp2", action="store_true", help="work over (Z/p^2)[C_p]")
    p.set_defaults(handler=cmd_ext)

    p = sub.add_parser("enumerate", parents=[common], help="count diagrams over C_{p^2}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ranks", required=True, help="rank caps d1,d2")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("bounds", parents=[common], help="evaluate a closed-form bound")
    p.add_argument("--formula", choices=FORMULAS, required=True)
    p.add_argument("--params", default="", help="comma separated key=value pairs")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("report", parents=[common], help="full report for lattice files")
    p.add_argument("files", nargs="+")
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("random", parents=[common], help="emit a seeded random lattice file")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--max-rank", type=int, default=12)
    p.set_defaults(handler=cmd_random)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.jobs < 1 or (args.cap is not None and args.cap < 1):
        sys.stderr.write("usage error: --jobs and --cap must be positive\n")
        return EXIT_USAGE
    try:
        text, code = args.handler(args)
    except (PCyclicError, UsageError, OSError) as exc:
        if isinstance(exc, OSError):
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_USAGE
        code, message = classify(exc)
        sys.stderr.write(message + "\n")
        return code
    if args.golden is not None and text:
        same, message = check_golden(args.golden, golden_name(args), text)
        if message:
            sys.stderr.write(message + ("" if message.endswith("\n") else "\n"))
        if not same:
            sys.stdout.write(text)
            return EXIT_VERIFY
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
