"""Command-line front end: family tables, verification suites, caching.

Designed for scripts and batch jobs; all output is reproducible byte for
byte for a fixed configuration.  Rational parameters must be given as
"p/q" strings; decimal literals switch the computation to float mode at
the configured precision.

Exit codes: 0 pass/success, 1 suite failure, 2 indeterminate, 3 usage error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from fractions import Fraction
from typing import Dict, List, Optional

import mpmath

from . import __version__, verify
from .families import (
    AssocPollaczek,
    CoefficientSequence,
    LittleQLegendre,
    PollaczekParams,
    RandomWalk,
    RandomWalkParams,
)
from .hypergroup import LinearizationTable
from .scalars import (
    DEFAULT_PRECISION,
    DomainError,
    InvariantViolation,
    is_exact,
    parse_scalar,
    scalar_str,
    working_precision,
)
from .spectrum import character, eval_poly, q_measure

USAGE_ERROR = 3
CACHE_VERSION = f"polyhg-{__version__}"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                        help="float working precision in bits (>= 64)")
    common.add_argument("--mode", choices=("auto", "rational", "float"), default="auto",
                        help="scalar regime; rational rejects square-root-requiring requests")
    common.add_argument("--cache-dir", default=None, help="directory for table caches")
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized property trials")

    p = _Parser(prog="polyhg", description=__doc__, add_help=True, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        # every subcommand re-accepts the global flags so they may follow it
        return sub.add_parser(name, parents=[common], **kw)

    def family_opts(sp):
        sp.add_argument("family", choices=("qleg", "pollaczek", "random-walk"))
        sp.add_argument("--q", help="q parameter for qleg, as p/q or decimal")
        sp.add_argument("--alpha", help="alpha for pollaczek")
        sp.add_argument("--lambda", dest="lam", help="lambda for pollaczek")
        sp.add_argument("--nu", help="nu for pollaczek / random-walk")
        sp.add_argument("--a", help="a for random-walk")
        sp.add_argument("--b", help="b for random-walk")
        sp.add_argument("--plain", action="store_true",
                        help="random-walk: use the full variant instead of one-step")

    sp = add("coeffs", help="emit (n, a, b, c) rows")
    family_opts(sp)
    sp.add_argument("-N", type=int, required=True)

    sp = add("linearize", help="emit one linearization vector")
    family_opts(sp)
    sp.add_argument("-m", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)

    sp = add("haar", help="emit Haar weights up to N")
    family_opts(sp)
    sp.add_argument("-N", type=int, required=True)

    sp = add("eval", help="evaluate one polynomial value")
    family_opts(sp)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--form", choices=("normalized", "orthonormal", "monic", "derivative"),
                    default="normalized")

    sp = add("character", help="emit character values up to K")
    family_opts(sp)
    sp.add_argument("--x", required=True)
    sp.add_argument("-K", type=int, required=True)
    sp.add_argument("--derivative", action="store_true")

    sp = add("measure", help="emit q-family measure atoms")
    sp.add_argument("--q", required=True)
    sp.add_argument("-K", type=int, required=True)

    sp = add("chain", help="parameter sequences of a chain sequence probe")
    sp.add_argument("--op", choices=("minimal", "maximal"), required=True)
    sp.add_argument("--constant", help="constant probe value")
    sp.add_argument("--alpha", help="pollaczek probe alpha")
    sp.add_argument("--lambda", dest="lam", help="pollaczek probe lambda")
    sp.add_argument("--nu", help="pollaczek probe nu")
    sp.add_argument("-N", type=int, required=True)

    sp = add("verify", help="run one verification suite")
    sp.add_argument("suite")
    sp.add_argument("--q")
    sp.add_argument("--alpha")
    sp.add_argument("--lambda", dest="lam")
    sp.add_argument("--nu")
    sp.add_argument("--a")
    sp.add_argument("--b")
    sp.add_argument("--override", action="append", default=[],
                    metavar="KEY=VALUE", help="sweep-size override, repeatable")
    sp.add_argument("--out", help="write the report to this path")
    sp.add_argument("--include-runtime", action="store_true")

    add("list-suites", help="print the suite catalog")
    return p


def _parse_param(text: str, args) -> object:
    value = parse_scalar(text, args.precision)
    if args.mode == "rational" and not is_exact(value):
        raise _UsageError(
            f"decimal literal {text!r} forces float mode, but --mode rational was given"
        )
    return value


def _family(args) -> CoefficientSequence:
    if args.family == "qleg":
        if args.q is None:
            raise _UsageError("qleg needs --q")
        return LittleQLegendre(_parse_param(args.q, args))
    if args.family == "pollaczek":
        if args.alpha is None or args.lam is None:
            raise _UsageError("pollaczek needs --alpha and --lambda")
        nu = _parse_param(args.nu, args) if args.nu is not None else Fraction(0)
        return AssocPollaczek(
            PollaczekParams(_parse_param(args.alpha, args), _parse_param(args.lam, args), nu)
        )
    if args.family == "random-walk":
        if args.a is None or args.b is None:
            raise _UsageError("random-walk needs --a and --b")
        nu = _parse_param(args.nu, args) if args.nu is not None else Fraction(0)
        return RandomWalk(
            RandomWalkParams(
                _parse_param(args.a, args), _parse_param(args.b, args), nu,
                tilde=not args.plain,
            )
        )
    raise _UsageError(f"unknown family {args.family!r}")


def _family_key(args) -> str:
    parts = [args.family]
    for name in ("q", "alpha", "lam", "nu", "a", "b"):
        v = getattr(args, name, None)
        if v is not None:
            parts.append(f"{name}={v}")
    if getattr(args, "plain", False):
        parts.append("plain")
    parts.append(f"mode={args.mode}")
    parts.append(f"prec={args.precision}")
    return "|".join(parts)


def _emit(doc: dict, args, tabular: Optional[List[List[str]]] = None,
          header: Optional[List[str]] = None) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    elif args.format == "csv":
        if tabular is None:
            raise _UsageError("this command has no CSV form")
        rows = [",".join(header)] if header else []
        rows += [",".join(str(c) for c in row) for row in tabular]
        sys.stdout.write("\n".join(rows) + "\n")
    else:
        if tabular is not None and header is not None:
            widths = [
                max(len(str(r[i])) for r in [header] + tabular)
                for i in range(len(header))
            ]
            line = "  ".join(h.ljust(w) for h, w in zip(header, widths))
            sys.stdout.write(line + "\n")
            for row in tabular:
                sys.stdout.write(
                    "  ".join(str(c).ljust(w) for c, w in zip(row, widths)) + "\n"
                )
        else:
            sys.stdout.write(json.dumps(doc, indent=2) + "\n")


# --- caching --------------------------------------------------------------------

def _cache_path(cache_dir: str, kind: str, key: str) -> str:
    digest = hashlib.sha256(f"{CACHE_VERSION}|{kind}|{key}".encode()).hexdigest()[:24]
    return os.path.join(cache_dir, f"{kind}-{digest}.json")


def _cache_load(path: str) -> Optional[dict]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, ValueError):
        return None
    if doc.get("version") != CACHE_VERSION:
        return None
    return doc


def _cache_store(path: str, doc: dict) -> None:
    doc = dict(doc, version=CACHE_VERSION)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- subcommands ------------------------------------------------------------------

def cmd_coeffs(args) -> int:
    cs = _family(args)
    rows = []
    for n in range(args.N + 1):
        a, b, c = cs.triple(n)
        rows.append([n, scalar_str(a), scalar_str(b), scalar_str(c)])
    doc = {
        "family": cs.describe(),
        "rows": [{"n": r[0], "a": r[1], "b": r[2], "c": r[3]} for r in rows],
    }
    _emit(doc, args, tabular=rows, header=["n", "a", "b", "c"])
    return 0


def cmd_linearize(args) -> int:
    if args.m < 0 or args.n < 0:
        raise _UsageError("indices must be nonnegative")
    cs = _family(args)
    cache_hit = False
    vec = None
    path = None
    key = f"{_family_key(args)}|m={args.m}|n={args.n}"
    if args.cache_dir:
        path = _cache_path(args.cache_dir, "linearize", key)
        doc = _cache_load(path)
        if doc is not None:
            vec = doc["g"]
            cache_hit = True
    if vec is None:
        table = LinearizationTable(cs)
        vec = [scalar_str(v) for v in table.linearize(args.m, args.n)]
        if path:
            _cache_store(path, {"g": vec})
    offset = abs(args.m - args.n)
    doc = {
        "family": cs.describe(),
        "m": args.m,
        "n": args.n,
        "k_start": offset,
        "g": vec,
        "cache_hit": cache_hit,
    }
    rows = [[offset + i, g] for i, g in enumerate(vec)]
    _emit(doc, args, tabular=rows, header=["k", "g"])
    return 0


def cmd_haar(args) -> int:
    cs = _family(args)
    table = LinearizationTable(cs)
    rows = [[n, scalar_str(table.haar(n))] for n in range(args.N + 1)]
    doc = {"family": cs.describe(), "h": {str(r[0]): r[1] for r in rows}}
    _emit(doc, args, tabular=rows, header=["n", "h"])
    return 0


def cmd_eval(args) -> int:
    if args.mode == "rational" and args.form == "orthonormal":
        raise _UsageError("--form orthonormal takes square roots; not available in --mode rational")
    cs = _family(args)
    x = _parse_param(args.x, args)
    with working_precision(args.precision):
        value = eval_poly(cs, args.n, x, form=args.form)
    doc = {
        "family": cs.describe(),
        "n": args.n,
        "x": scalar_str(x),
        "form": args.form,
        "value": scalar_str(value),
    }
    _emit(doc, args, tabular=[[args.n, doc["value"]]], header=["n", "value"])
    return 0


def cmd_character(args) -> int:
    cs = _family(args)
    x = _parse_param(args.x, args)
    with working_precision(args.precision):
        ch = character(cs, x, args.K, derivative=args.derivative)
    rows = [[n, scalar_str(v)] for n, v in enumerate(ch.values)]
    header = ["n", "value"]
    if args.derivative:
        header.append("derivative")
        for n, d in enumerate(ch.derivs):
            rows[n].append(scalar_str(d))
    doc = {
        "family": cs.describe(),
        "x": scalar_str(x),
        "K": args.K,
        "values": [r[1] for r in rows],
    }
    if args.derivative:
        doc["derivatives"] = [r[2] for r in rows]
    _emit(doc, args, tabular=rows, header=header)
    return 0


def cmd_measure(args) -> int:
    q = _parse_param(args.q, args)
    mu = q_measure(q, args.K)
    rows = [[scalar_str(x), scalar_str(m)] for x, m in mu.atoms]
    doc = {
        "q": scalar_str(q),
        "K": args.K,
        "atoms": [{"x": r[0], "mass": r[1]} for r in rows],
        "tail_bound": scalar_str(mu.tail),
    }
    _emit(doc, args, tabular=rows, header=["x", "mass"])
    return 0


def cmd_chain(args) -> int:
    from .chainseq import ChainSequenceProbe, maximal_parameters, minimal_parameters

    if args.constant is not None:
        probe = ChainSequenceProbe.constant(_parse_param(args.constant, args))
    elif args.alpha is not None and args.lam is not None:
        nu = _parse_param(args.nu, args) if args.nu is not None else Fraction(0)
        probe = ChainSequenceProbe.from_pollaczek(
            PollaczekParams(_parse_param(args.alpha, args), _parse_param(args.lam, args), nu)
        )
    else:
        raise _UsageError("chain needs --constant or --alpha/--lambda")
    if args.op == "minimal":
        r = minimal_parameters(probe, args.N)
        doc = {
            "op": "minimal",
            "ok": r.ok,
            "values": [scalar_str(v) for v in r.values],
        }
        if not r.ok:
            doc["certificate"] = str(r.certificate)
        rows = [[i, v] for i, v in enumerate(doc["values"])]
        _emit(doc, args, tabular=rows, header=["n", "m"])
        return 0 if r.ok else 1
    r = maximal_parameters(probe, args.N, prec=args.precision)
    doc = {
        "op": "maximal",
        "converged": r.converged,
        "horizon": r.horizon,
        "values": [scalar_str(v) for v in r.values],
    }
    rows = [[i, v] for i, v in enumerate(doc["values"])]
    _emit(doc, args, tabular=rows, header=["n", "M"])
    return 0 if r.converged else 2


def cmd_verify(args) -> int:
    spec = verify.get_suite(args.suite)
    if spec is None:
        raise _UsageError(
            f"unknown suite {args.suite!r}; see `polyhg list-suites`"
        )
    params = {}
    for cli_name, suite_name in (
        ("q", "q"), ("alpha", "alpha"), ("lam", "lambda"),
        ("nu", "nu"), ("a", "a"), ("b", "b"),
    ):
        v = getattr(args, cli_name, None)
        if v is not None:
            params[suite_name] = _parse_param(v, args)
    overrides = {}
    for item in args.override:
        if "=" not in item:
            raise _UsageError(f"override {item!r} is not KEY=VALUE")
        k, v = item.split("=", 1)
        try:
            overrides[k] = int(v)
        except ValueError as exc:
            raise _UsageError(f"override value {v!r} is not an integer") from exc
    if args.seed is not None:
        overrides["seed"] = args.seed
    try:
        report = verify.run_suite(
            args.suite, params=params or None, overrides=overrides or None,
            precision=args.precision,
        )
    except DomainError as exc:
        raise _UsageError(str(exc)) from exc
    fmt = "csv" if args.format == "csv" else "json"
    payload = verify.serialize(report, fmt, include_runtime=args.include_runtime)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    if args.format == "pretty":
        sys.stdout.write(f"suite {report.suite}: {report.overall}\n")
        for e in report.entries:
            mark = {"pass": "ok  ", "fail": "FAIL", "indeterminate": "????"}[e.status]
            sys.stdout.write(f"  [{mark}] {e.claim}  ({e.range})\n")
            if e.margin is not None:
                sys.stdout.write(f"         margin {e.margin[:60]}\n")
            if e.witness and e.status != "pass":
                sys.stdout.write(f"         witness {e.witness}\n")
    else:
        sys.stdout.write(payload.decode())
    return report.exit_code


def cmd_list_suites(args) -> int:
    specs = verify.list_suites()
    doc = {
        "suites": [
            {
                "name": s.name,
                "title": s.title,
                "parameters": s.param_ranges,
                "defaults": s.defaults,
                "sweep_defaults": s.sweep_defaults,
                "mode": s.mode,
            }
            for s in specs
        ]
    }
    rows = [[s.name, s.mode, s.title] for s in specs]
    _emit(doc, args, tabular=rows, header=["name", "mode", "title"])
    return 0


_COMMANDS = {
    "coeffs": cmd_coeffs,
    "linearize": cmd_linearize,
    "haar": cmd_haar,
    "eval": cmd_eval,
    "character": cmd_character,
    "measure": cmd_measure,
    "chain": cmd_chain,
    "verify": cmd_verify,
    "list-suites": cmd_list_suites,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.precision < 64:
            raise _UsageError("--precision must be at least 64")
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except (DomainError, InvariantViolation) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
