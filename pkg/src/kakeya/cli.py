"""Command-line surface for the library.

Every subcommand is a pure function of its argv: no clocks, locale, or
environment state feed the output, so identical invocations produce
byte-identical reports. Exact values are printed as ``num/den`` strings (and
``a+b*sqrt5`` for quadratic scalars), never as floats.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 undecided-at-cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import fibonacci
from .errors import DomainError, ParseError, UndecidedAtCapError
from .exactnum import format_scalar, parse_rational, parse_scalar
from .expander import (
    DigitPrefix,
    Feasibility,
    TargetValue,
    TiePolicy,
    build_branch_plan,
    count_prefixes,
    digit_frequency,
    enumerate_expansions,
    feasible_prefix,
    greedy_expand,
    kakeya_partition,
    lazy_expand,
)
from .sequences import (
    Verdict,
    kakeya_check,
    parse_descriptor,
    perturbation_check,
    ratio_condition_check,
    rho_check,
    special_indices,
)


def parse_target(text: str, desc) -> TargetValue:
    """Accept ``p/q``, ``a+b*sqrt5``, decimal strings (converted exactly),
    or ``S`` for the full series sum of the descriptor."""
    s = text.strip()
    if s == "S":
        return TargetValue.sequence_sum(desc)
    if "." in s and "sqrt5" not in s:
        try:
            return TargetValue.from_exact(Fraction(s))
        except ValueError as exc:
            raise ParseError(f"not a decimal literal: {text!r}") from exc
    return TargetValue.from_exact(parse_scalar(s))


def _decimal(value: Fraction, places: int = 12) -> str:
    """Fixed-point decimal rendering of an exact fraction (deterministic)."""
    sign = "-" if value < 0 else ""
    magnitude = abs(value) * 10 ** places
    q, r = divmod(magnitude.numerator, magnitude.denominator)
    if 2 * r >= magnitude.denominator:
        q += 1
    digits = str(q).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _cap_kwargs(args) -> dict:
    return {"cap": args.cap} if args.cap is not None else {}


def _interval_fields(iv) -> dict:
    return {"lo": str(iv.lo), "hi": str(iv.hi)}


def _report_payload(report) -> tuple[dict, int]:
    rows = []
    for i in range(report.first, report.last + 1):
        verdict = report.verdict(i)
        row = {"index": i, "verdict": verdict.value}
        witness = report.witnesses.get(i)
        if witness is not None:
            row["witness_lo"] = str(witness.lo)
            row["witness_hi"] = str(witness.hi)
        rows.append(row)
    payload = {
        "property": report.property_name,
        "first": report.first,
        "last": report.last,
        "all_hold": report.all_hold,
        "rows": rows,
    }
    if report.note:
        payload["note"] = report.note
    code = 3 if report.indices(Verdict.UNDECIDED) else 0
    return payload, code


def _certificate_fields(cert) -> dict:
    fields = {
        "bits": str(cert.prefix),
        "partial": format_scalar(cert.partial),
        "residual_lo": str(cert.residual_enclosure.lo),
        "residual_hi": str(cert.residual_enclosure.hi),
        "feasible": cert.feasible.value,
    }
    return fields


# -- handlers -----------------------------------------------------------------


def _cmd_fib(args):
    return {"command": "fib", "n": args.n, "value": str(fibonacci.fib(args.n))}, 0


def _cmd_cassini(args):
    return {"command": "cassini", "n": args.n, "holds": fibonacci.cassini_check(args.n)}, 0


def _cmd_binet(args):
    return {"command": "binet", "n": args.n, "holds": fibonacci.binet_nearest_check(args.n)}, 0


def _cmd_s_const(args):
    width = parse_rational(args.width)
    enclosure = fibonacci.s_constant(width)
    payload = {
        "command": "s-const",
        "width": str(width),
        **_interval_fields(enclosure),
        "midpoint": str(enclosure.midpoint),
        "midpoint_decimal": _decimal(enclosure.midpoint),
    }
    return payload, 0


def _cmd_check_kakeya(args):
    desc = parse_descriptor(args.seq)
    report = kakeya_check(
        desc, args.upto, strict=not args.non_strict, width=parse_rational(args.width),
        **_cap_kwargs(args),
    )
    payload, code = _report_payload(report)
    payload = {"command": "check-kakeya", "seq": desc.label(), "strict": not args.non_strict, **payload}
    return payload, code


def _cmd_special(args):
    desc = parse_descriptor(args.seq)
    members, report = special_indices(
        desc, args.upto, width=parse_rational(args.width), **_cap_kwargs(args)
    )
    payload, code = _report_payload(report)
    payload = {"command": "special", "seq": desc.label(), "indices": sorted(members), **payload}
    return payload, code


def _cmd_rho(args):
    desc = parse_descriptor(args.seq)
    result = rho_check(desc, args.upto)
    payload = {
        "command": "rho",
        "seq": desc.label(),
        "upto": args.upto,
        "holds": result.holds,
        "rho": format_scalar(result.rho),
        "threshold": format_scalar(parse_scalar("-1/2+1/2*sqrt5")),
    }
    return payload, 0


def _cmd_perturb(args):
    result = perturbation_check(
        parse_scalar(args.eps_inf), parse_scalar(args.eps_sup), parse_scalar(args.q)
    )
    payload = {
        "command": "perturb",
        "holds": result.holds,
        "ratio": format_scalar(result.ratio),
        "equality": result.equality,
    }
    return payload, 0


def _cmd_expand(args):
    desc = parse_descriptor(args.seq)
    x = parse_target(args.x, desc)
    kwargs = _cap_kwargs(args)
    if args.mode == "partition":
        tie = (
            TiePolicy.PREFER_X_BIN if args.tie == "x" else TiePolicy.PREFER_COMPLEMENT_BIN
        )
        prefix, complement = kakeya_partition(desc, x, args.digits, tie, **kwargs)
        payload = {
            "command": "expand",
            "mode": "partition",
            "seq": desc.label(),
            "target": args.x,
            "tie": tie.value,
            "bits": str(prefix),
            "complement": str(complement),
        }
        return payload, 0
    expander_fn = greedy_expand if args.mode == "greedy" else lazy_expand
    cert = expander_fn(desc, x, args.digits, **kwargs)
    payload = {
        "command": "expand",
        "mode": args.mode,
        "seq": desc.label(),
        "target": args.x,
        **_certificate_fields(cert),
    }
    return payload, 0 if cert.feasible is not Feasibility.UNDECIDED else 3


def _cmd_feasible(args):
    desc = parse_descriptor(args.seq)
    x = parse_target(args.x, desc)
    prefix = DigitPrefix.from_string(args.prefix) if args.prefix else DigitPrefix()
    verdict = feasible_prefix(desc, x, prefix, width=parse_rational(args.width), **_cap_kwargs(args))
    payload = {
        "command": "feasible",
        "seq": desc.label(),
        "target": args.x,
        "bits": str(prefix),
        "verdict": verdict.value,
    }
    return payload, 3 if verdict is Feasibility.UNDECIDED else 0


def _cmd_count(args):
    desc = parse_descriptor(args.seq)
    x = parse_target(args.x, desc)
    counts = count_prefixes(desc, x, args.depth, **_cap_kwargs(args))
    payload = {
        "command": "count",
        "seq": desc.label(),
        "target": args.x,
        "depth": counts.depth,
        "feasible": list(counts.feasible),
        "undecided": list(counts.undecided),
    }
    return payload, 3 if any(counts.undecided) else 0


def _cmd_enumerate(args):
    desc = parse_descriptor(args.seq)
    x = parse_target(args.x, desc)
    certs = enumerate_expansions(desc, x, args.count, args.depth, **_cap_kwargs(args))
    rows = [_certificate_fields(c) for c in certs]
    payload = {
        "command": "enumerate",
        "seq": desc.label(),
        "target": args.x,
        "depth": args.depth,
        "found": len(rows),
        "rows": rows,
    }
    return payload, 0


def _cmd_branch_plan(args):
    desc = parse_descriptor(args.seq)
    x = parse_target(args.x, desc)
    plan = build_branch_plan(desc, x, args.m, width=parse_rational(args.width), **_cap_kwargs(args))
    payload = {
        "command": "branch-plan",
        "seq": desc.label(),
        "target": args.x,
        "indices": list(plan.indices),
        "budget_lo": str(plan.budget_certificate.lo),
        "budget_hi": str(plan.budget_certificate.hi),
    }
    return payload, 0


def _cmd_freq(args):
    prefix = DigitPrefix.from_string(args.prefix)
    result = digit_frequency(prefix)
    payload = {
        "command": "freq",
        "bits": str(prefix),
        "ones": result.ones,
        "zeros": result.zeros,
        "ratio": str(result.ratio),
    }
    return payload, 0


# -- parser/rendering ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kakeya",
        description="Exact arithmetic for binary expansions over Kakeya sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--cap", type=int, default=None, help="refinement cap")

    seq_arg = dict(required=True, help="sequence descriptor, e.g. fibonacci or geometric:3/2")

    p = sub.add_parser("fib", parents=[common], help="n-th Fibonacci number")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_fib)

    p = sub.add_parser("cassini", parents=[common], help="Cassini identity check")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_cassini)

    p = sub.add_parser("binet", parents=[common], help="Binet nearest-integer check")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_binet)

    p = sub.add_parser("s-const", parents=[common], help="enclosure of sum(1/F_i)")
    p.add_argument("--width", default="1/1000")
    p.set_defaults(handler=_cmd_s_const)

    p = sub.add_parser("check-kakeya", parents=[common], help="term vs tail dominance per index")
    p.add_argument("--seq", **seq_arg)
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--non-strict", action="store_true")
    p.add_argument("--width", default="1/1024")
    p.set_defaults(handler=_cmd_check_kakeya)

    p = sub.add_parser("special", parents=[common], help="special elements in [2, upto]")
    p.add_argument("--seq", **seq_arg)
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--width", default="1/1024")
    p.set_defaults(handler=_cmd_special)

    p = sub.add_parser("rho", parents=[common], help="minimal consecutive term ratio vs 1/phi")
    p.add_argument("--seq", **seq_arg)
    p.add_argument("--upto", type=int, required=True)
    p.set_defaults(handler=_cmd_rho)

    p = sub.add_parser("perturb", parents=[common], help="perturbed-geometric Kakeya criterion")
    p.add_argument("--eps-inf", required=True)
    p.add_argument("--eps-sup", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(handler=_cmd_perturb)

    p = sub.add_parser("expand", parents=[common], help="digit construction")
    p.add_argument("mode", choices=("greedy", "lazy", "partition"))
    p.add_argument("--seq", **seq_arg)
    p.add_argument("--x", required=True, help="target: p/q, a+b*sqrt5, decimal, or S")
    p.add_argument("--digits", type=int, required=True)
    p.add_argument("--tie", choices=("x", "complement"), default="x")
    p.set_defaults(handler=_cmd_expand)

    p = sub.add_parser("feasible", parents=[common], help="prefix feasibility verdict")
    p.add_argument("--seq", **seq_arg)
    p.add_argument("--x", required=True)
    p.add_argument("--prefix", default="")
    p.add_argument("--width", default="1/1024")
    p.set_defaults(handler=_cmd_feasible)

    p = sub.add_parser("count", parents=[common], help="feasible prefixes per level")
    p.add_argument("--seq", **seq_arg)
    p.add_argument("--x", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("enumerate", parents=[common], help="distinct feasible prefixes")
    p.add_argument("--seq", **seq_arg)
    p.add_argument("--x", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("branch-plan", parents=[common], help="special-index branch plan")
    p.add_argument("--seq", **seq_arg)
    p.add_argument("--x", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--width", default="1/1024")
    p.set_defaults(handler=_cmd_branch_plan)

    p = sub.add_parser("freq", parents=[common], help="digit frequency of a prefix")
    p.add_argument("--prefix", required=True)
    p.set_defaults(handler=_cmd_freq)

    return parser


def _render_text(payload: dict) -> str:
    lines = []
    for key, value in payload.items():
        if key == "rows":
            for row in value:
                lines.append("  " + " ".join(f"{k}={v}" for k, v in row.items()))
        elif isinstance(value, list):
            lines.append(f"{key}: {' '.join(str(v) for v in value)}")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _render_csv(payload: dict) -> str:
    rows = payload.get("rows")
    if rows:
        keys = sorted({k for row in rows for k in row})
        out = [",".join(keys)]
        for row in rows:
            out.append(",".join(str(row.get(k, "")) for k in keys))
        return "\n".join(out) + "\n"
    scalars = {k: v for k, v in payload.items() if not isinstance(v, (list, dict))}
    lists = {k: v for k, v in payload.items() if isinstance(v, list)}
    out = [",".join(scalars), ",".join(str(v) for v in scalars.values())]
    for key, value in lists.items():
        out.append(f"{key}," + ",".join(str(v) for v in value))
    return "\n".join(out) + "\n"


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        return _render_csv(payload)
    return _render_text(payload)


def run(argv: list[str] | None = None) -> int:
    """Dispatch a CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        payload, code = args.handler(args)
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except UndecidedAtCapError as err:
        print(f"undecided at cap: {err}", file=sys.stderr)
        return 3
    except DomainError as err:
        print(f"domain error: {err}", file=sys.stderr)
        return 1
    sys.stdout.write(render(payload, args.format))
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
