#!/usr/bin/env python3
"""
modtrace command-line driver

    python -m src.cli faber 2 --order 8
    python -m src.cli hecke tn j 2 --order 10
    python -m src.cli trace --delta 5 --d 4 --f frakf --digits 60
    python -m src.cli verify hecke-system --format text

Exit codes: 0 성공, 1 수학적 오류 또는 검증 실패, 2 사용법 오류.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from src.borcherds import (
    borcherds_product,
    borcherds_trace_series,
    bp_identity_check,
    gbhe_check,
    zagier_basis,
)
from src.const import DEFAULT_TRACE_SERIES_N, SUPPORTED_SERIES, SUPPORTED_SUITES
from src.errors import ModtraceError
from src.hecke import FORM_WEIGHTS, WeightedForm, half_integral_pTp2, hecke_Tn, mult_hecke, named_form
from src.lifts import akn_generating, divisor_lift, divisor_solve, dlift_equivariance_check
from src.lvalues import class_number, dirichlet_L1, fundamental_unit, narrow_class_number, regulator_product
from src.numeval import eval_modular, point
from src.qforms import enumerate_forms, genus_character
from src.series import faber, standard_series
from src.suites import verify_suite
from src.traces import kronecker_limit_check, parse_traceable, trace_hecke_relation, twisted_trace
from src.type.args import RunConfig
from src.type.form import BinaryQF
from src.type.report import CheckResult, SuiteReport
from src.util import format_output, load_config, map_args_to_command, setup_logging

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


# -----------------------------
# 1. 문법
# -----------------------------
def _global_flags() -> argparse.ArgumentParser:
    # 하위 명령 앞뒤 어디에 와도 되도록 모든 파서가 공유
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS, help="working precision (decimal digits)")
    common.add_argument("--order", type=int, default=argparse.SUPPRESS, help="q-series truncation order")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads for suites")
    common.add_argument("--format", choices=["json", "csv", "text"], default=argparse.SUPPRESS)
    common.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="modtrace", parents=[common],
                                     description="Faber/Hecke systems, twisted traces and Borcherds products")
    sub = parser.add_subparsers(dest="group", required=True)

    def leaf(container, name: str, **kw) -> argparse.ArgumentParser:
        return container.add_parser(name, parents=[common], **kw)

    p = leaf(sub, "series", help="exact q-expansion of a named series")
    p.add_argument("name", choices=sorted(SUPPORTED_SERIES | {"E4E6"}))

    p = leaf(sub, "faber", help="J_n and its Faber polynomial")
    p.add_argument("n", type=int)

    hecke = leaf(sub, "hecke", help="Hecke operators")
    hsub = hecke.add_subparsers(dest="action", required=True)
    p = leaf(hsub, "tn", help="f|T_n")
    p.add_argument("name", choices=sorted(FORM_WEIGHTS))
    p.add_argument("n", type=int)
    p.add_argument("--weight", type=int, default=None)
    p = leaf(hsub, "mult", help="multiplicative Hecke operator")
    p.add_argument("name", choices=sorted(FORM_WEIGHTS))
    p.add_argument("p", type=int)
    p = leaf(hsub, "half", help="p T(p^2) on the Zagier basis element f_d")
    p.add_argument("d", type=int)
    p.add_argument("p", type=int)

    lift = leaf(sub, "lift", help="divisor lifting")
    lsub = lift.add_subparsers(dest="action", required=True)
    p = leaf(lsub, "divisor", help="D(f) and the recovered divisor")
    p.add_argument("name", choices=sorted(FORM_WEIGHTS))
    leaf(lsub, "akn", help="-Theta j / (j - lam)")
    p = leaf(lsub, "check-equivariance", help="D(f|T(p)) == D(f)|T_p")
    p.add_argument("name", choices=sorted(FORM_WEIGHTS))
    p.add_argument("p", type=int)

    qf = leaf(sub, "qf", help="binary quadratic forms")
    qsub = qf.add_subparsers(dest="action", required=True)
    p = leaf(qsub, "list", help="reduced forms of discriminant D")
    p.add_argument("D", type=int)
    p = leaf(qsub, "chi", help="genus character chi_Delta([a,b,c])")
    for name in ("delta", "a", "b", "c"):
        p.add_argument(name, type=int)

    lv = leaf(sub, "lv", help="L-values, units and regulators")
    vsub = lv.add_subparsers(dest="action", required=True)
    for action in ("L1", "unit", "reg"):
        leaf(vsub, action).add_argument("D", type=int)

    p = leaf(sub, "eval", help="certified value at tau")
    p.add_argument("name")
    p.add_argument("--tau", required=True, help="x,y for tau = x + iy")
    p.add_argument("--n", type=int, default=None)

    p = leaf(sub, "trace", help="twisted traces")
    p.add_argument("action", nargs="?", choices=["value", "relation", "klf"], default="value")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--f", default="frakf")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--m", type=int, default=1)

    bz = leaf(sub, "bz", help="Zagier basis and Borcherds products")
    bsub = bz.add_subparsers(dest="action", required=True)
    p = leaf(bsub, "basis")
    p.add_argument("d", type=int)
    p = leaf(bsub, "product")
    p.add_argument("delta", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--mode", choices=["exact", "ball"], default="exact")
    p = leaf(bsub, "check")
    p.add_argument("kind", choices=["bp", "gbhe", "traces"])
    p.add_argument("delta", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--tau", default=None, help="x,y for tau = x + iy")

    p = leaf(sub, "verify", help="named verification suite")
    p.add_argument("suite", choices=list(SUPPORTED_SUITES) + ["all"])
    return parser


def command_name(ns: argparse.Namespace) -> str:
    action = getattr(ns, "action", None)
    return f"{ns.group} {action}" if action else ns.group


# -----------------------------
# 2. 실행
# -----------------------------
def _tau(text: str, ctx):
    try:
        x, y = text.split(",")
    except ValueError:
        raise UsageError(f"--tau expects x,y, got {text!r}")
    return point(x.strip(), y.strip(), ctx)


def _order(args, config: RunConfig) -> int:
    return args.order if args.order is not None else config.order


def _series_command(args, config: RunConfig):
    order = _order(args, config)
    if args.name == "E4E6":
        return named_form("E4E6", order).series
    return standard_series(args.name, order)


def _faber_command(args, config: RunConfig):
    series, poly = faber(args.n, _order(args, config))
    return {"n": args.n, "series": series, "polynomial": poly}


def _hecke_tn(args, config: RunConfig):
    order = _order(args, config)
    f = named_form(args.name, args.n * order + args.n + 1)
    weight = args.weight if args.weight is not None else f.weight
    image = hecke_Tn(WeightedForm(f.series, weight), args.n).truncate(order)
    return {"name": args.name, "n": args.n, "weight": weight, "series": image}


def _hecke_mult(args, config: RunConfig):
    order = _order(args, config)
    f = named_form(args.name, args.p * order + args.p + 1)
    image = mult_hecke(f.series, args.p)
    return {"name": args.name, "p": args.p, "weight": (args.p + 1) * f.weight, "series": image.with_order(order)}


def _hecke_half(args, config: RunConfig):
    order = _order(args, config)
    basis = zagier_basis(args.d, args.p * args.p * order + 1)
    return half_integral_pTp2(basis, args.p)


def _lift_divisor(args, config: RunConfig):
    order = _order(args, config)
    lifted = divisor_lift(named_form(args.name, order + 1))
    depth = min(8, lifted.prec - 1)
    divisor = divisor_solve([lifted.coefficient(n) for n in range(1, depth + 1)], lifted.coefficient(0))
    return {"name": args.name, "lift": lifted, "divisor": divisor}


def _lift_check(args, config: RunConfig):
    order = _order(args, config)
    f = named_form(args.name, args.p * order + 2 * args.p + 2)
    return dlift_equivariance_check(f, args.p, order)


def _qf_list(args, config: RunConfig):
    return [{"a": q.a, "b": q.b, "c": q.c, "omega": omega} for q, omega in enumerate_forms(args.D)]


def _qf_chi(args, config: RunConfig):
    q = BinaryQF(args.a, args.b, args.c)
    return {"a": q.a, "b": q.b, "c": q.c, "omega": q.omega, "chi": genus_character(args.delta, q)}


def _lv(args, config: RunConfig):
    ctx = config.precision()
    if args.action == "L1":
        return dirichlet_L1(args.D, ctx)
    if args.action == "unit":
        unit = fundamental_unit(args.D)
        return {
            "unit": unit,
            "class_number": class_number(args.D),
            "narrow_class_number": narrow_class_number(args.D),
        }
    return regulator_product(args.D, ctx)


def _eval(args, config: RunConfig):
    ctx = config.precision()
    return eval_modular(args.name, _tau(args.tau, ctx), n=args.n)


def _trace(args, config: RunConfig):
    ctx = config.precision()
    if args.action == "klf":
        return kronecker_limit_check(args.delta, args.d, ctx)
    if args.action == "relation":
        if args.p is None:
            raise UsageError("trace relation needs --p")
        n = args.n or 0
        f = None if n else parse_traceable(args.f)
        relation, check = trace_hecke_relation(args.delta, args.d, args.p, args.m, n, f, ctx)
        return check if check is not None else relation
    f = parse_traceable(args.f, args.n)
    value = twisted_trace(args.delta, args.d, f, ctx)
    return {"delta": args.delta, "d": args.d, "f": args.f, "value": value}


def _bz_basis(args, config: RunConfig):
    return zagier_basis(args.d, _order(args, config))


def _bz_product(args, config: RunConfig):
    ctx = config.precision() if args.mode == "ball" else None
    return borcherds_product(args.delta, args.d, _order(args, config), mode=args.mode, ctx=ctx)


def _bz_check(args, config: RunConfig):
    ctx = config.precision()
    if args.kind == "bp":
        tau = _tau(args.tau, ctx) if args.tau else None
        return bp_identity_check(args.delta, args.d, tau, ctx)
    if args.kind == "gbhe":
        if args.p is None:
            raise UsageError("bz check gbhe needs --p")
        return gbhe_check(args.delta, args.d, args.p, order=args.order, ctx=ctx)
    return borcherds_trace_series(args.delta, args.d, DEFAULT_TRACE_SERIES_N, ctx)


def _verify(args, config: RunConfig):
    return verify_suite(args.suite, config)


HANDLERS = {
    "series": _series_command,
    "faber": _faber_command,
    "hecke tn": _hecke_tn,
    "hecke mult": _hecke_mult,
    "hecke half": _hecke_half,
    "lift divisor": _lift_divisor,
    "lift akn": lambda args, config: akn_generating(_order(args, config)),
    "lift check-equivariance": _lift_check,
    "qf list": _qf_list,
    "qf chi": _qf_chi,
    "lv L1": _lv,
    "lv unit": _lv,
    "lv reg": _lv,
    "eval": _eval,
    "trace value": _trace,
    "trace relation": _trace,
    "trace klf": _trace,
    "bz basis": _bz_basis,
    "bz product": _bz_product,
    "bz check": _bz_check,
    "verify": _verify,
}


def _failed(result) -> bool:
    return isinstance(result, (CheckResult, SuiteReport)) and not result.passed


def run_command(argv: Optional[List[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse 는 사용법 오류에 2, --help 에 0 으로 종료한다
        return int(exc.code or 0)

    raw = vars(ns)
    config = load_config({k: raw.get(k) for k in ("digits", "order", "threads", "format", "log_level")})
    setup_logging(config.log_level)

    command = command_name(ns)
    args = map_args_to_command(command, raw)
    if args is None:
        parser.print_usage(sys.stderr)
        return 2
    # 문법에만 있고 인자 클래스에는 없는 값 (trace 의 action/p/m, tn 의 weight 등)
    for key in ("action", "p", "m", "tau", "mode", "weight", "kind", "f", "n"):
        if key in raw and not hasattr(args, key):
            setattr(args, key, raw[key])
    if not hasattr(args, "order"):
        args.order = raw.get("order")

    logger.info(f"🔧 {command}: {raw}")
    try:
        result = HANDLERS[command](args, config)
        body = format_output(result, config.format)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"modtrace: error: {exc}", file=sys.stderr)
        return 2
    except ModtraceError as exc:
        logger.error(f"❌ {command}: {exc.code}: {exc.message}")
        print(json.dumps(exc.to_dict(), sort_keys=True, ensure_ascii=False), file=stdout)
        return 1

    print(body, file=stdout)
    if _failed(result):
        logger.warning(f"❌ {command}: check failed")
        return 1
    return 0


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
