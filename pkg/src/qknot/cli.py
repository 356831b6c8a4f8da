"""Command line entry point: ``qknot <subcommand> ...``.

Exit codes: 0 success / verified, 1 a check failed, 2 invalid parameters.
Set QKNOT_CACHE_DIR (or pass --cache-dir) to persist figure-eight values.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile

from . import jones
from .exact_poly import (
    TM,
    MultiPoly,
    ParseError,
    RatFun,
    UsageError,
    from_json_obj,
    from_text,
    ratfun_from_json_obj,
    ratfun_to_json_obj,
    to_json_obj,
    to_text,
)
from .jones import CableParams
from .qtorus import NormalizedOperator, SkewOperator, operator_from_json_obj

log = logging.getLogger("qknot")


# -- serialization ------------------------------------------------------------


def serialize(value, fmt: str = "json") -> bytes:
    """Canonical bytes for a MultiPoly, RatFun or operator."""
    if fmt == "text":
        if isinstance(value, MultiPoly):
            return to_text(value).encode()
        if isinstance(value, RatFun):
            return str(value).encode()
        raise UsageError(f"no text form for {type(value).__name__}")
    if isinstance(value, MultiPoly):
        obj = to_json_obj(value)
    elif isinstance(value, RatFun):
        obj = ratfun_to_json_obj(value)
    elif isinstance(value, (SkewOperator, NormalizedOperator)):
        obj = value.to_json_obj()
    elif hasattr(value, "to_json_obj"):
        obj = value.to_json_obj()
    else:
        raise UsageError(f"cannot serialize {type(value).__name__}")
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def deserialize(data, vars=TM):
    """Inverse of serialize.  JSON is detected by a leading brace.

    Malformed input raises ParseError carrying the offending position.
    """
    if isinstance(data, bytes):
        data = data.decode()
    stripped = data.lstrip()
    if not stripped.startswith("{"):
        return from_text(data, vars)
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})", exc.pos) from None
    try:
        if "L_terms" in obj:
            return operator_from_json_obj(obj)
        if "num" in obj:
            return ratfun_from_json_obj(obj)
        return from_json_obj(obj)
    except ValueError as exc:
        raise ParseError(str(exc), 0) from None


# -- persistent cache of figure-eight values ---------------------------------


class FileStore:
    """One JSON file per n under ``root``; writes are atomic (temp + rename)."""

    def __init__(self, root):
        self.root = root
        self.writable = True
        try:
            os.makedirs(root, exist_ok=True)
            probe = tempfile.NamedTemporaryFile(dir=root, delete=True)
            probe.close()
        except OSError as exc:
            log.warning("cache directory %s is not writable (%s); using memory only", root, exc)
            self.writable = False

    def path(self, n: int) -> str:
        return os.path.join(self.root, f"fig8_{n}.json")

    def load(self, n: int):
        path = self.path(n)
        if not os.path.exists(path):
            return None
        try:
            with open(path) as fh:
                obj = json.load(fh)
            if obj.get("n") != n:
                raise ValueError("index mismatch")
            value = from_json_obj(obj["value"])
            _check_fig8_value(n, value)
        except (OSError, ValueError, KeyError, TypeError, UsageError) as exc:
            log.warning("discarding corrupt cache entry %s (%s)", path, exc)
            return None
        return value

    def save(self, n: int, value: MultiPoly):
        if not self.writable:
            return
        payload = json.dumps({"n": n, "value": to_json_obj(value)}, sort_keys=True, separators=(",", ":"))
        try:
            fd, tmp = tempfile.mkstemp(dir=self.root, prefix=f".fig8_{n}.", suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                fh.write(payload)
            os.replace(tmp, self.path(n))
        except OSError as exc:
            log.warning("could not write cache entry for n=%d (%s)", n, exc)


def _check_fig8_value(n: int, value: MultiPoly):
    """Cheap structural checks a genuine J_E(n) passes."""
    if value.vars != TM or value.is_zero():
        raise ValueError("wrong shape")
    if value.degree_range("M") != (0, 0):
        raise ValueError("depends on M")
    if jones.degrees(value) != jones.degrees_fig8(n):
        raise ValueError("degree mismatch")
    mirrored = value.map_exponents(lambda e: (-e[0], e[1]))
    if mirrored != value:
        raise ValueError("not symmetric under t -> 1/t")


def configure_cache(cache_dir=None):
    cache_dir = cache_dir or os.environ.get("QKNOT_CACHE_DIR")
    jones.set_fig8_store(FileStore(cache_dir) if cache_dir else None)
    return cache_dir


# -- subcommands ---------------------------------------------------------------


def _params(args) -> CableParams:
    if args.r is None or args.s is None:
        raise UsageError("--r and --s are required")
    return CableParams(args.r, args.s)


def _emit(args, text: str, obj):
    out = json.dumps(obj, sort_keys=True, indent=2) if args.format == "json" else text
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def cmd_jones(args) -> int:
    n = args.n
    if args.knot == "unknot":
        v = jones.jones_unknot(n)
    elif args.knot == "fig8":
        v = jones.jones_fig8(n)
    elif args.knot == "cable":
        v = jones.jones_cable(_params(args), n)
    else:
        v = jones.t_seq(_params(args), n)
    _emit(args, to_text(v), {"knot": args.knot, "n": n, "value": to_json_obj(v)})
    return 0


def cmd_degrees(args) -> int:
    if args.knot == "fig8":
        rows = jones.fig8_degree_table(args.n_max)
        head = "figure eight"
    else:
        p = _params(args)
        rows = jones.degree_table(p, args.n_max)
        head = f"cable ({p.r}, {p.s})"
    lines = [head, " n  pred_lo  pred_hi  lo  hi  match"]
    for n, plo, phi, clo, chi, ok in rows:
        lines.append(f"{n:2d} {plo:8d} {phi:8d} {clo:4d} {chi:4d}  {'yes' if ok else 'NO'}")
    keys = ("n", "pred_lo", "pred_hi", "lo", "hi", "match")
    _emit(args, "\n".join(lines), {"rows": [dict(zip(keys, row)) for row in rows]})
    return 0 if all(row[-1] for row in rows) else 1


def cmd_annihilator(args) -> int:
    from .recurrences import assemble_annihilator, verify_annihilator

    p = _params(args)
    ann = assemble_annihilator(p)
    sol = ann.solved
    rep = verify_annihilator(ann, range(1, args.verify_n + 1)) if args.verify_n else None
    obj = {
        "r": p.r,
        "s": p.s,
        "Q": sol.Q.to_json_obj(),
        "B": ratfun_to_json_obj(sol.B),
        "rank": sol.rank,
        "clearing_multiplier": ratfun_to_json_obj(sol.multiplier),
        "R": ann.R.to_json_obj(),
        "L_degree": ann.L_degree,
        "assembly": ann.assembly,
    }
    lines = [
        f"cable ({p.r}, {p.s})",
        f"relation rank: {sol.rank}",
        f"Q terms per L-power: {[len(sol.Q.coeffs[i]) for i in sorted(sol.Q.coeffs)]}",
        f"annihilator L-degree: {ann.L_degree}",
        "assembly: (" + ") * (".join(ann.assembly) + ")",
    ]
    if rep is not None:
        obj["verification"] = [{"n": n, "ok": ok} for n, ok in rep.results]
        lines.append("verified at n = " + ", ".join(f"{n}:{'ok' if ok else 'FAIL'}" for n, ok in rep.results))
    _emit(args, "\n".join(lines), obj)
    return 0 if rep is None or rep.ok else 1


def cmd_apoly(args) -> int:
    from .apoly import a_cable, a_fig8

    A = a_fig8() if args.knot == "fig8" else a_cable(_params(args))
    lines = [f"A-polynomial ({A.provenance}):", to_text(A.poly), "factors:"]
    lines += [f"  {label}: {to_text(f)}" for label, f in A.factors]
    _emit(args, "\n".join(lines), A.to_json_obj())
    return 0


def cmd_aj(args) -> int:
    from .ajcheck import aj_verify

    p = _params(args)
    if not p.proven:
        log.warning("|r| < 4s: outside the proven range, minimality of the annihilator is not established there")
    rep = aj_verify(p, args.verify_n)
    _emit(args, rep.summary(), rep.to_json_obj())
    return 0 if rep.verified else 1


def cmd_resultant_check(args) -> int:
    from .ajcheck import subsequence_check, resultant_identity

    s = args.s
    if s is None or s < 2:
        raise UsageError("--s must be at least 2")
    sub = subsequence_check(s, args.n_max)
    obj = {
        "s": s,
        "subsequence": {"holds": sub.holds, "no_repeated_roots": sub.squarefree,
                    "constant": ratfun_to_json_obj(sub.constant)},
    }
    lines = [f"s = {s}", f"resultant annihilates S_(sn) for n <= {args.n_max}: {sub.holds}"]
    ok = sub.holds
    if args.r is not None:
        p = _params(args)
        if s > 2:
            ri = resultant_identity(p, args.n_max)
            obj["prop"] = {"r": p.r, "proportional": ri.proportional, "T_constant": ri.t_constant,
                           "witness": ratfun_to_json_obj(ri.witness) if ri.witness is not None else None}
            lines.append(f"Q(-1, M, L) proportional to the resultant (r = {p.r}): {ri.proportional}")
            lines.append(f"resultant annihilates commutative T_n: {ri.t_constant}")
            ok = ok and bool(ri)
    _emit(args, "\n".join(lines), obj)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qknot", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--output", default=None, help="write to this file instead of stdout")
    common.add_argument("--r", type=int)
    common.add_argument("--s", type=int)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jones", parents=[common], help="colored Jones value")
    p.add_argument("--knot", choices=("unknot", "fig8", "cable", "T"), default="fig8")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_jones)

    p = sub.add_parser("degrees", parents=[common], help="predicted vs computed degrees")
    p.add_argument("--knot", choices=("fig8", "cable"), default="cable")
    p.add_argument("--n-max", type=int, default=8)
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("annihilator", parents=[common], help="cable annihilator")
    p.add_argument("--verify-n", type=int, default=0)
    p.set_defaults(func=cmd_annihilator)

    p = sub.add_parser("apoly", parents=[common], help="A-polynomial")
    p.add_argument("--knot", choices=("fig8", "cable"), default="cable")
    p.set_defaults(func=cmd_apoly)

    p = sub.add_parser("aj", parents=[common], help="full AJ report")
    p.add_argument("--verify-n", type=int, default=6)
    p.set_defaults(func=cmd_aj)

    p = sub.add_parser("resultant-check", parents=[common], help="commutative resultant checks")
    p.add_argument("--n-max", type=int, default=5)
    p.set_defaults(func=cmd_resultant_check)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name in ("n_max", "verify_n"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            print(f"error: --{name.replace('_', '-')} must be non-negative", file=sys.stderr)
            return 2
    configure_cache(args.cache_dir)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        jones.set_fig8_store(None)


if __name__ == "__main__":
    sys.exit(main())
