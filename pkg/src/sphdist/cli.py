"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 mathematical invariant violated.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from contextlib import nullcontext
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import List, Optional

from . import __version__, bounds, catalog, fileio, pointset, schemes, selftest
from .errors import InputError, InvariantViolation, SphdistError
from .exactnum import QuadExt, format_scalar

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


def jsonable(obj):
    """Exact scalars become ``p/q`` strings; containers recurse."""
    if isinstance(obj, (Fraction, QuadExt)):
        return format_scalar(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if hasattr(obj, "tolist"):
        return jsonable(obj.tolist())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass
class AuditCertificate:
    command: str
    input_digest: str
    report: dict
    bounds: List[bounds.BoundReport] = field(default_factory=list)
    scheme: Optional[dict] = None
    version: str = __version__
    timestamp: str = ""

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "version": self.version,
            "timestamp": self.timestamp,
            "report": jsonable(self.report),
            "bounds": [jsonable(b) for b in self.bounds],
            "scheme": jsonable(self.scheme),
        }


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def analyze_config(config, max_degree=None, with_scheme=True):
    """Report dict, bound reports and optional scheme report for one configuration."""
    dist = pointset.inner_product_set(config)
    prof = pointset.strength(config, max_degree)
    coeffs = pointset.annihilator_expansion(config).coeffs
    flags = [k for k, f in enumerate(coeffs) if f == Fraction(1, config.n)]
    antipodal, _ = pointset.antipodal_check(config)
    report = {
        "n": config.n,
        "m": config.m,
        "field": config.field.header(),
        "distance_values": list(dist.values),
        "distance_counts": list(dist.counts),
        "strength": prof.strength,
        "moments": list(prof.moments),
        "annihilator_coeffs": list(coeffs),
        "flags": flags,
        "antipodal": antipodal,
    }
    scheme_rep = None
    kd = None
    if with_scheme and prof.strength >= 2 * dist.s - 2:
        spec = schemes.idempotents(schemes.from_distance_classes(config))
        scheme_rep = schemes.scheme_report(spec.scheme, spec)
        if scheme_rep["orderings"]:
            kd, _ = schemes.q_polynomial(spec)
    reps = bounds.audit(config, krein_data=kd, profile=prof, try_scheme=False)
    return report, reps, scheme_rep


def _emit(args, cert: AuditCertificate, text_lines: List[str]):
    if getattr(args, "json", False):
        print(json.dumps(cert.to_dict(), indent=2))
    else:
        print("\n".join(text_lines))


def _fmt(v) -> str:
    return format_scalar(v) if isinstance(v, (Fraction, QuadExt)) else str(v)


def _bound_lines(reps) -> List[str]:
    out = []
    for r in reps:
        if not r.applicable:
            out.append(f"  {r.name:22s} n/a ({r.note})")
            continue
        mark = " ATTAINED" if r.attained else ""
        out.append(f"  {r.name:22s} {r.kind} {r.value}{mark}")
    return out


def _scheme_lines(rep: dict) -> List[str]:
    out = [f"scheme: n={rep['n']} classes={rep['s']} multiplicities={rep['multiplicities']}"]
    if not rep["orderings"]:
        out.append("  no Q-polynomial ordering")
        return out
    out.append(f"  Q-polynomial orderings: {rep['orderings']}")
    out.append("  B1*:")
    out.extend("    " + " ".join(f"{_fmt(x):>8s}" for x in row) for row in rep["B1star"])
    out.append(f"  l={rep['l']} case=({rep['s0_case']}) bound={rep['s0_bound']}"
               f"{' ATTAINED' if rep['s0_attained'] else ''}")
    out.append(f"  predicted multiplicities: {rep['predicted_multiplicities']}")
    return out


def cmd_analyze(args) -> int:
    config = fileio.read_points(args.file, name=os.path.basename(args.file))
    report, reps, scheme_rep = analyze_config(config, args.max_degree)
    cert = AuditCertificate("analyze", _digest(args.file), report, reps, scheme_rep, timestamp=_now())
    lines = [
        f"{config.name}: n={config.n} m={config.m} field={report['field']}",
        f"  s={len(report['distance_values'])} values: {' '.join(_fmt(v) for v in report['distance_values'])}",
        f"  counts: {report['distance_counts']}",
        f"  strength t={report['strength']}  antipodal={report['antipodal']}",
        f"  annihilator coefficients: {' '.join(_fmt(c) for c in report['annihilator_coeffs'])}",
        f"  coefficients equal to 1/n at: {report['flags']}",
        "bounds:",
        *_bound_lines(reps),
    ]
    if scheme_rep is not None:
        lines.extend(_scheme_lines(scheme_rep))
    _emit(args, cert, lines)
    return EXIT_OK


def cmd_scheme(args) -> int:
    sch = fileio.read_relations(args.file)
    rep = schemes.scheme_report(sch)
    cert = AuditCertificate("scheme", _digest(args.file), rep, scheme=None, timestamp=_now())
    _emit(args, cert, _scheme_lines(rep))
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.table:
        grid = bounds.h_table(args.m, args.max_degree)
        if args.json:
            print(json.dumps({"m": args.m, "h": grid}, indent=2))
        else:
            width = max(len(str(v)) for v in grid[-1]) + 1
            print("m\\i " + "".join(f"{i:>{width}d}" for i in range(args.max_degree + 1)))
            for m, row in zip(args.m, grid):
                print(f"{m:>3d} " + "".join(f"{v:>{width}d}" for v in row))
        return EXIT_OK
    if args.m is None or args.s is None:
        raise InputError("bounds needs --m and --s (or --table)")
    t = args.strength
    if t is None and args.i is not None:
        t = 2 * args.s - args.i
    reps = bounds.evaluate(args.m, args.s, t=t, l=args.l, antipodal=args.antipodal, flags=args.flags or [])
    if args.json:
        print(json.dumps([jsonable(r) for r in reps], indent=2))
    else:
        for r in reps:
            v = r.value if r.applicable else "n/a"
            print(f"{r.name:22s} {v!s:>10s}  {r.note}")
    return EXIT_OK


_CATALOG_DEFAULTS = {
    "leech-derived-2025": (),
    "dodecahedron": (),
    "simplex": (3,),
    "cross-polytope": (3,),
    "cube": (3,),
    "triangular": (5,),
    "cycle": (5,),
    "grid": (3, 4),
}


def cmd_catalog(args) -> int:
    name = args.name
    if name not in _CATALOG_DEFAULTS:
        raise InputError(f"unknown catalog entry {name!r}; choose from {', '.join(_CATALOG_DEFAULTS)}")
    params = tuple(args.params) or _CATALOG_DEFAULTS[name]
    obj = catalog.baselines(name, *params)
    label = name + "".join(f"-{p}" for p in params)
    if isinstance(obj, pointset.SphericalConfig):
        obj.name = label
        text = fileio.dump_points(obj)
    else:
        text = fileio.dump_relations(obj, label)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {label} to {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = selftest.run(include_leech=not args.quick, seed=args.seed, log=print)
    bad = [r.name for r in results if not r.passed]
    print("selftest " + ("FAILED: " + ", ".join(bad) if bad else "passed"))
    return EXIT_INVARIANT if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphdist", description="Exact audits of spherical distance sets and Q-polynomial schemes.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--threads", type=int, default=None, help="BLAS threads (default: all cores)")
    p.add_argument("--allow-large-exact", action="store_true", help="permit exact ranks above the size cap")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="audit a points file")
    a.add_argument("file")
    a.add_argument("--max-degree", type=int, default=None, metavar="T")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("scheme", help="audit a relation-matrix file")
    s.add_argument("file")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_scheme)

    b = sub.add_parser("bounds", help="evaluate the closed-form bounds")
    b.add_argument("--m", type=int)
    b.add_argument("--s", type=int)
    grp = b.add_mutually_exclusive_group()
    grp.add_argument("--i", type=int, help="defect i, so that t = 2s - i")
    grp.add_argument("--strength", type=int, help="design strength t")
    b.add_argument("--l", type=int, default=None)
    b.add_argument("--antipodal", action="store_true")
    b.add_argument("--flags", type=int, nargs="*", help="indices k with f_k = 1/|X|")
    b.add_argument("--table", action="store_true", help="print h_{i,m} for m = 2..M (M from --m, default 25)")
    b.add_argument("--max-degree", type=int, default=10)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("catalog", help="write a catalog object in file format")
    c.add_argument("name")
    c.add_argument("params", type=int, nargs="*")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_catalog)

    t = sub.add_parser("selftest", help="run the invariant suites")
    t.add_argument("--quick", action="store_true", help="skip the 2025-point set")
    t.add_argument("--seed", type=int, default=selftest.SEED)
    t.set_defaults(func=cmd_selftest)
    return p


def _thread_limit(n):
    if n is None:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=n)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bounds" and args.table:
        args.m = list(range(2, (args.m or 25) + 1))
    if args.allow_large_exact:
        os.environ[pointset.RANK_CAP_ENV] = str(10**9)
    try:
        with _thread_limit(args.threads):
            return args.func(args)
    except (InvariantViolation, AssertionError) as exc:
        print(f"invariant violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InputError, SphdistError, ValueError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
