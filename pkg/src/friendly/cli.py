"""Command-line surface over the library with stable, scriptable output.

Every subcommand is a thin adapter: the same inputs through the CLI and the
library produce the same values. Output is a human-readable report by
default; ``--json`` emits one envelope object with integers rendered as
decimal strings so arbitrary-precision values survive any JSON parser.
Options fall back to FRIENDLY_* environment variables; explicit flags win.

Exit codes: 0 success, 1 domain error (machine-readable with ``--json``),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction
from typing import Callable, Optional

from .abundancy import abundancy_index, find_friends, solitary_certificate
from .arith import FactoringBudgetError, Factorization, factorize, sigma
from .friend10 import Candidate, derive_residue_class, filter_chain
from .scan import DEFAULT_SEGMENT_SIZE, CheckpointError, scan
from .sieve import SieveBudgetError
from .verify import SUITE_NAMES, run_suites

ENV_PREFIX = "FRIENDLY_"

_DOMAIN_ERRORS = (
    ValueError,
    ArithmeticError,
    FactoringBudgetError,
    CheckpointError,
    SieveBudgetError,
    OSError,
)


def parse_natural(text: str) -> int:
    """Decimal natural number; underscores and a base^exp form are accepted."""
    raw = text.strip().replace("_", "")
    if "^" in raw:
        base, _, exp = raw.partition("^")
        value = int(base) ** int(exp)
    else:
        value = int(raw)
    if value < 0:
        raise ValueError(f"expected a natural number, got {text!r}")
    return value


def parse_index(text: str) -> Fraction:
    """An exact ratio written P/Q."""
    num, sep, den = text.strip().partition("/")
    if not sep:
        raise ValueError(f"index must be written as P/Q, got {text!r}")
    return Fraction(int(num), int(den))


def parse_q_factors(text: str) -> Factorization:
    """Comma-separated prime powers: ``7^2,11,13^1`` (empty means Q = 1)."""
    text = text.strip()
    if not text:
        return Factorization(())
    pairs = []
    for chunk in text.split(","):
        prime, sep, exp = chunk.strip().partition("^")
        pairs.append((int(prime), int(exp) if sep else 1))
    return Factorization(tuple(sorted(pairs)))


def _parse_bool(text: str) -> bool:
    return text.strip().lower() in ("1", "true", "yes", "on")


class _Option:
    """One flag with an environment fallback."""

    def __init__(
        self,
        dest: str,
        parse: Callable[[str], object],
        *,
        required: bool = False,
        default: object = None,
    ):
        self.dest = dest
        self.parse = parse
        self.required = required
        self.default = default

    @property
    def env_key(self) -> str:
        return ENV_PREFIX + self.dest.upper()

    @property
    def flag(self) -> str:
        return "--" + self.dest.replace("_", "-")


def _resolve_options(parser: argparse.ArgumentParser, ns: argparse.Namespace) -> None:
    for opt in getattr(ns, "options", ()):
        if getattr(ns, opt.dest) is not None:
            continue
        raw = os.environ.get(opt.env_key)
        if raw is not None:
            try:
                setattr(ns, opt.dest, opt.parse(raw))
            except (ValueError, ZeroDivisionError) as exc:
                parser.error(f"bad {opt.env_key}={raw!r}: {exc}")
        elif opt.required:
            parser.error(f"{opt.flag} is required (or set {opt.env_key})")
        else:
            setattr(ns, opt.dest, opt.default)


def _str_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


# --- handlers ---------------------------------------------------------------
# Each returns (inputs echo, result payload, human lines, exit code).


def _cmd_sigma(ns):
    value = sigma(factorize(ns.n))
    return (
        {"n": str(ns.n)},
        {"sigma": str(value)},
        [f"sigma({ns.n}) = {value}"],
        0,
    )


def _cmd_index(ns):
    value = abundancy_index(ns.n)
    return (
        {"n": str(ns.n)},
        {"index": _str_fraction(value)},
        [f"I({ns.n}) = {_str_fraction(value)}"],
        0,
    )


def _cmd_friends(ns):
    hits = find_friends(ns.n, ns.bound)
    listing = "[" + ", ".join(str(h) for h in hits) + "]"
    return (
        {"n": str(ns.n), "bound": str(ns.bound)},
        {"friends": [str(h) for h in hits]},
        [f"friends of {ns.n} up to {ns.bound}: {listing}"],
        0,
    )


def _cmd_solitary(ns):
    verdict = solitary_certificate(ns.n)
    g = math.gcd(ns.n, sigma(factorize(ns.n)))
    return (
        {"n": str(ns.n)},
        {"verdict": verdict.value, "gcd": str(g)},
        [f"{ns.n}: {verdict.value} (gcd(n, sigma(n)) = {g})"],
        0,
    )


def _cmd_check(ns):
    candidate = Candidate(a=ns.a, q_factorization=ns.q_factors)
    report = filter_chain(candidate)
    rules = [
        {"rule": r.rule, "verdict": r.verdict.value, "detail": r.detail}
        for r in report.results
    ]
    lines = [f"candidate: {report.candidate}"]
    width = max(len(r.rule) for r in report.results)
    for r in report.results:
        shown = {"pass": "pass", "reject": "REJECT", "not_applicable": "n/a"}[r.verdict.value]
        lines.append(f"  {r.rule:<{width}}  {shown:<6}  {r.detail}")
    lines.append(f"overall: {report.overall}")
    return (
        {"a": str(ns.a), "q_factors": str(ns.q_factors)},
        {
            "candidate": report.candidate,
            "rules": rules,
            "overall": report.overall,
            "survives": report.survives,
        },
        lines,
        0,
    )


def _cmd_derive(ns):
    rc = derive_residue_class(ns.a)
    return (
        {"a": str(ns.a)},
        {"residue": str(rc.residue), "modulus": str(rc.modulus)},
        [f"residue: {rc.residue}", f"modulus: {rc.modulus}"],
        0,
    )


def _cmd_scan(ns):
    outcome = scan(
        ns.bound,
        ns.index,
        workers=ns.workers,
        segment_size=ns.segment_size,
        checkpoint_path=ns.resume,
    )
    inputs = {
        "bound": str(ns.bound),
        "index": _str_fraction(ns.index),
        "workers": str(ns.workers),
        "segment_size": str(ns.segment_size),
    }
    if ns.resume:
        inputs["resume"] = str(ns.resume)
    listing = "[" + ", ".join(str(h) for h in outcome.hits) + "]"
    lines = [
        f"scanned [1, {outcome.bound}) for index {_str_fraction(outcome.target_index)}",
        f"segments: {outcome.segments_done}/{outcome.segments_total}",
        f"scanned_count: {outcome.scanned_count}",
        f"checksum: {outcome.checksum}",
        f"hits: {listing}",
    ]
    if not outcome.complete:
        lines.append(f"frontier: {outcome.frontier} (incomplete)")
    return (
        inputs,
        {
            "bound": str(outcome.bound),
            "index": _str_fraction(outcome.target_index),
            "hits": [str(h) for h in outcome.hits],
            "scanned_count": str(outcome.scanned_count),
            "checksum": str(outcome.checksum),
            "segments_done": str(outcome.segments_done),
            "segments_total": str(outcome.segments_total),
            "frontier": str(outcome.frontier),
            "complete": outcome.complete,
        },
        lines,
        0,
    )


def _cmd_verify(ns):
    results = run_suites(ns.suite)
    ok = all(r.ok for r in results)
    suites = [
        {
            "name": r.name,
            "checks": str(r.checks),
            "failures": str(r.failures),
            "elapsed_ms": str(r.elapsed_ms),
            "notes": list(r.notes),
        }
        for r in results
    ]
    lines = []
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        lines.append(f"{r.name}: {r.checks} checks, {r.failures} failures ({r.elapsed_ms} ms) {status}")
        lines.extend(f"    {note}" for note in r.notes)
    lines.append(f"overall: {'PASS' if ok else 'FAIL'}")
    return (
        {"suite": ns.suite},
        {"suites": suites, "ok": ok},
        lines,
        0 if ok else 1,
    )


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="friendly",
        description="Exact abundancy-index toolkit: divisor sums, friend scans, "
        "and the friend-of-10 candidate filter chain.",
        epilog=f"Options also read {ENV_PREFIX}<NAME> environment variables; flags win.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, handler, options: tuple[_Option, ...]):
        p.add_argument("--json", action="store_const", const=True, default=None,
                       help="emit a JSON envelope instead of the report")
        p.set_defaults(handler=handler, options=options + (_Option("json", _parse_bool, default=False),))

    p = sub.add_parser("sigma", help="sum of divisors of N")
    p.add_argument("n", type=parse_natural)
    common(p, _cmd_sigma, ())

    p = sub.add_parser("index", help="abundancy index sigma(N)/N as an exact ratio")
    p.add_argument("n", type=parse_natural)
    common(p, _cmd_index, ())

    p = sub.add_parser("friends", help="all friends of N up to a bound")
    p.add_argument("n", type=parse_natural)
    p.add_argument("--bound", type=parse_natural, default=None)
    common(p, _cmd_friends, (_Option("bound", parse_natural, required=True),))

    p = sub.add_parser("solitary", help="gcd-based solitary certificate for N")
    p.add_argument("n", type=parse_natural)
    common(p, _cmd_solitary, ())

    p = sub.add_parser("check", help="run the filter chain on a structured candidate")
    p.add_argument("--a", type=parse_natural, default=None, help="half-exponent of 5")
    p.add_argument("--q-factors", dest="q_factors", type=parse_q_factors, default=None,
                   help="factorization of Q as P1^E1,P2^E2,... (empty for Q = 1)")
    common(p, _cmd_check, (
        _Option("a", parse_natural, required=True),
        _Option("q_factors", parse_q_factors, default=Factorization(())),
    ))

    p = sub.add_parser("derive", help="residue class every friend of 10 with this a must hit")
    p.add_argument("--a", type=parse_natural, default=None)
    common(p, _cmd_derive, (_Option("a", parse_natural, required=True),))

    p = sub.add_parser("scan", help="exhaustive index scan of [1, bound)")
    p.add_argument("--bound", type=parse_natural, default=None)
    p.add_argument("--index", type=parse_index, default=None, help="target index P/Q")
    p.add_argument("--resume", default=None, help="checkpoint path; created if missing")
    p.add_argument("--workers", type=parse_natural, default=None)
    p.add_argument("--segment-size", dest="segment_size", type=parse_natural, default=None)
    common(p, _cmd_scan, (
        _Option("bound", parse_natural, required=True),
        _Option("index", parse_index, required=True),
        _Option("resume", str),
        _Option("workers", parse_natural, default=1),
        _Option("segment_size", parse_natural, default=DEFAULT_SEGMENT_SIZE),
    ))

    p = sub.add_parser("verify", help="run exhaustive verification suites")
    p.add_argument("--suite", choices=SUITE_NAMES, default=None)
    common(p, _cmd_verify, (_Option("suite", str, default="all"),))

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    _resolve_options(parser, ns)
    started = time.perf_counter()
    try:
        inputs, result, lines, code = ns.handler(ns)
    except _DOMAIN_ERRORS as exc:
        if ns.json:
            print(json.dumps({
                "command": ns.command,
                "error": {"type": type(exc).__name__, "message": str(exc)},
            }))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    if ns.json:
        envelope = {
            "command": ns.command,
            "inputs": inputs,
            "result": result,
            "elapsed_ms": int((time.perf_counter() - started) * 1000),
        }
        print(json.dumps(envelope))
    else:
        print("\n".join(lines))
    return code


def run() -> None:
    sys.exit(main())


# --- envelope schema --------------------------------------------------------

_DECIMAL = "decimal-string"
_FRACTION = "fraction-string"
_RESULT_SCHEMAS: dict[str, dict] = {
    "sigma": {"sigma": _DECIMAL},
    "index": {"index": _FRACTION},
    "friends": {"friends": [_DECIMAL]},
    "solitary": {"verdict": str, "gcd": _DECIMAL},
    "check": {
        "candidate": str,
        "rules": [{"rule": str, "verdict": str, "detail": str}],
        "overall": str,
        "survives": bool,
    },
    "derive": {"residue": _DECIMAL, "modulus": _DECIMAL},
    "scan": {
        "bound": _DECIMAL,
        "index": _FRACTION,
        "hits": [_DECIMAL],
        "scanned_count": _DECIMAL,
        "checksum": _DECIMAL,
        "segments_done": _DECIMAL,
        "segments_total": _DECIMAL,
        "frontier": _DECIMAL,
        "complete": bool,
    },
    "verify": {
        "suites": [{"name": str, "checks": _DECIMAL, "failures": _DECIMAL,
                    "elapsed_ms": _DECIMAL, "notes": [str]}],
        "ok": bool,
    },
}


def _check_schema(value, schema, path: str) -> None:
    if schema is _DECIMAL:
        if not (isinstance(value, str) and value.isdigit()):
            raise ValueError(f"{path}: expected a decimal string, got {value!r}")
    elif schema is _FRACTION:
        num, sep, den = value.partition("/") if isinstance(value, str) else ("", "", "")
        if not (sep and num.isdigit() and den.isdigit()):
            raise ValueError(f"{path}: expected P/Q, got {value!r}")
    elif isinstance(schema, list):
        if not isinstance(value, list):
            raise ValueError(f"{path}: expected a list, got {type(value).__name__}")
        for i, item in enumerate(value):
            _check_schema(item, schema[0], f"{path}[{i}]")
    elif isinstance(schema, dict):
        if not isinstance(value, dict) or set(value) != set(schema):
            raise ValueError(f"{path}: keys {sorted(value)} != {sorted(schema)}")
        for key, sub in schema.items():
            _check_schema(value[key], sub, f"{path}.{key}")
    else:
        if not isinstance(value, schema) or (schema is not bool and isinstance(value, bool)):
            raise ValueError(f"{path}: expected {schema.__name__}, got {type(value).__name__}")


def validate_envelope(doc: dict) -> None:
    """Raise ValueError unless doc is a well-formed OutputEnvelope."""
    if set(doc) != {"command", "inputs", "result", "elapsed_ms"}:
        raise ValueError(f"envelope keys are {sorted(doc)}")
    command = doc["command"]
    if command not in _RESULT_SCHEMAS:
        raise ValueError(f"unknown command {command!r}")
    if not isinstance(doc["elapsed_ms"], int) or doc["elapsed_ms"] < 0:
        raise ValueError("elapsed_ms must be a non-negative integer")
    inputs = doc["inputs"]
    if not isinstance(inputs, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in inputs.items()
    ):
        raise ValueError("inputs must be a string-to-string mapping")
    _check_schema(doc["result"], _RESULT_SCHEMAS[command], "result")
