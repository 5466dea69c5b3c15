"""Command-line front end: ``hallforest VERB [options] ARGS``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import cache
from .hall import (DELTA, HallElement, HallError, antipode, backend_of, bracket,
                   coproduct, counit, format_element, hall_product, kappa, prelie)
from .hecke import (CONVOLUTIONS, direct_sum_diagnostic, indecomposability_test, truncated_act,
                    truncation_set)
from .parsing import ParseError, parse
from .representations import RepKind, act, rep_kind
from .verify import SUITES, run_suite

REPS = ("ins", "top-ins", "elim", "top-elim")


class UsageError(Exception):
    pass


def _fmt_number(c: Fraction) -> str:
    return str(c)


def _tensor_items(t):
    def key(kv):
        (a, b), _ = kv
        be = backend_of(a)
        return be.sort_key(a), be.sort_key(b)
    return sorted(t.items(), key=key)


def _tensor_text(t) -> str:
    if not t:
        return "0"
    parts = []
    for i, ((a, b), c) in enumerate(_tensor_items(t)):
        body = f"{abs(c)}*{a}⊗{b}"
        parts.append(("-" if c < 0 else "") + body if i == 0
                     else (" - " if c < 0 else " + ") + body)
    return "".join(parts)


def _tensor_json(t) -> dict:
    return {"terms": [{"left": a, "right": b, "num": c.numerator, "den": c.denominator}
                      for (a, b), c in _tensor_items(t)]}


def _elem(text: str, args, basis: str = DELTA) -> HallElement:
    return parse(text, getattr(args, "category", None), basis)


def _emit(args, text: str, doc) -> None:
    if args.format == "json":
        print(json.dumps(doc, ensure_ascii=False, sort_keys=False))
    else:
        print(text)


def _emit_element(args, v: HallElement) -> None:
    _emit(args, format_element(v), v.to_json())


# ---------------------------------------------------------------------------
# verbs


def cmd_canon(args):
    v = _elem(args.expr, args)
    _emit_element(args, v)


def cmd_product(args):
    v = _elem(args.left, args)
    for e in args.right:
        v = hall_product(v, _elem(e, args))
    _emit_element(args, v)


def cmd_coproduct(args):
    t = coproduct(_elem(args.expr, args))
    _emit(args, _tensor_text(t), _tensor_json(t))


def cmd_antipode(args):
    _emit_element(args, antipode(_elem(args.expr, args)))


def cmd_counit(args):
    c = counit(_elem(args.expr, args))
    _emit(args, _fmt_number(c), {"num": c.numerator, "den": c.denominator})


def cmd_bracket(args):
    x, y = _elem(args.left, args), _elem(args.right, args)
    for v, flag in ((x, "first"), (y, "second")):
        for k in v:
            if not v.backend.is_indecomposable(k):
                raise UsageError(f"{flag} argument of bracket: {k} is not indecomposable")
    _emit_element(args, bracket(x, y))


def cmd_prelie(args):
    x, y = _elem(args.left, args), _elem(args.right, args)
    out = prelie(x, y)
    if args.bracket:
        out = out - prelie(y, x)
    _emit_element(args, out)


def cmd_act(args):
    kind = rep_kind(args.rep)
    side = "left" if kind in (RepKind.INSERTION, RepKind.ELIMINATION) else "right"
    if args.side and args.side != side:
        raise UsageError(f"--side {args.side} does not match --rep {args.rep}, "
                         f"which is a {side} action")
    by = _elem(args.by, args)
    on = _elem(args.on, args, basis=kind.basis)
    _emit_element(args, act(kind, by, on))


def cmd_hecke_conv(args):
    f, g = _elem(args.left, args), _elem(args.right, args)
    _emit_element(args, CONVOLUTIONS[args.which](f, g))


def cmd_truncate(args):
    m = _elem(args.object, args)
    if len(m) != 1:
        raise UsageError("--object must be a single class")
    ts = truncation_set(next(iter(m)), args.mode)
    if args.format == "json":
        print(json.dumps({"root": ts.root, "mode": ts.mode, "members": list(ts.members)},
                         ensure_ascii=False))
    elif args.list:
        print("\n".join(ts.members))
    else:
        print(f"{'Quot' if ts.mode == 'quot' else '≤'}({ts.root}): {len(ts)} classes")


def cmd_act_trunc(args):
    m = _elem(args.object, args)
    if len(m) != 1:
        raise UsageError("--object must be a single class")
    ts = truncation_set(next(iter(m)), args.mode)
    if args.certify:
        checks = indecomposability_test(ts, seed=args.seed)
        ok = all(c.status == "pass" for c in checks)
        _emit(args, "\n".join(f"[{c.status}] {c.claim}" for c in checks),
              [c.to_json() for c in checks])
        return 0 if ok else 1
    if args.rep is None or args.by is None or args.on is None:
        raise UsageError("act-trunc needs --rep, --by and --on (or --certify)")
    kind = rep_kind(args.rep)
    by = _elem(args.by, args)
    on = _elem(args.on, args, basis=kind.basis)
    _emit_element(args, truncated_act(ts, kind, by, on))
    return 0


def cmd_diagnose(args):
    a, b = _elem(args.a, args), _elem(args.b, args)
    if len(a) != 1 or len(b) != 1:
        raise UsageError("diagnose-direct-sum takes two single classes")
    report = direct_sum_diagnostic(next(iter(a)), next(iter(b)), args.mode)
    if args.format == "json":
        print(json.dumps(report, ensure_ascii=False))
    else:
        w = report["witness"]
        print(f"[{report['status']}] {report['claim']}")
        print(f"  dim {w['dim_sum_object']} vs summands {' + '.join(map(str, w['dim_summands']))}"
              f" ({'agree' if w['dimensions_agree'] else 'differ'})")
        print(f"  without φ_∅: {w['reduced_dims'][0]} vs {w['reduced_dims'][1]}")
        for n, parts in w["obstructions"].items():
            print(f"  {n} is presented with A-parts {', '.join(parts)}")
        print(f"  projection inverts inclusion: {w['projection_inverts_inclusion']}")
    return 1 if report["status"] == "fail" else 0


def cmd_verify(args):
    report = run_suite(args.suite, args.category or "trees", args.max_degree, args.seed)
    if args.format == "json":
        print(json.dumps(report.to_json(args.timing), ensure_ascii=False))
    else:
        print(report.to_text(args.timing))
    return 0 if report.ok else 1


def cmd_kappa(args):
    c = kappa(_elem(args.left, args), _elem(args.right, args))
    _emit(args, _fmt_number(c), {"num": c.numerator, "den": c.denominator})


def cmd_k0(args):
    v = _elem(args.expr, args)
    out = {}
    for k in v:
        d = v.backend.k0(k)
        out[k] = d if isinstance(d, int) else {key: n for key, n in d}
    if args.format == "json":
        print(json.dumps(out, ensure_ascii=False))
    else:
        for k, d in out.items():
            shown = d if isinstance(d, int) else " + ".join(f"{n}*{key}" for key, n in d.items())
            print(f"{k}: {shown}")


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--category", choices=("trees", "graphs"))
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="hallforest",
                                description="Hall algebras of rooted forests and Feynman graphs.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = verb("canon", cmd_canon, "canonical form of an expression")
    sp.add_argument("expr")
    sp = verb("product", cmd_product, "Hall product of two or more expressions")
    sp.add_argument("left")
    sp.add_argument("right", nargs="+")
    for name, func, help_ in (("coproduct", cmd_coproduct, "coproduct"),
                              ("antipode", cmd_antipode, "antipode"),
                              ("counit", cmd_counit, "counit")):
        verb(name, func, help_).add_argument("expr")
    sp = verb("bracket", cmd_bracket, "Hall commutator of indecomposables")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = verb("prelie", cmd_prelie, "pre-Lie product (grafting or insertion)")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--bracket", action="store_true", help="antisymmetrize")
    sp = verb("act", cmd_act, "one of the four actions")
    sp.add_argument("--rep", choices=REPS, required=True)
    sp.add_argument("--by", required=True)
    sp.add_argument("--on", required=True)
    sp.add_argument("--side", choices=("left", "right"))
    sp = verb("hecke-conv", cmd_hecke_conv, "Hecke convolution")
    sp.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    sp.add_argument("left")
    sp.add_argument("right")
    sp = verb("truncate", cmd_truncate, "quotient or subobject classes of an object")
    sp.add_argument("--mode", choices=("sub", "quot"), required=True)
    sp.add_argument("--object", required=True)
    sp.add_argument("--list", action="store_true")
    sp = verb("act-trunc", cmd_act_trunc, "action on a truncated module")
    sp.add_argument("--mode", choices=("sub", "quot"), required=True)
    sp.add_argument("--object", required=True)
    sp.add_argument("--rep", choices=REPS)
    sp.add_argument("--by")
    sp.add_argument("--on")
    sp.add_argument("--certify", action="store_true", help="run the indecomposability test")
    sp.add_argument("--seed", type=int, default=0)
    sp = verb("diagnose-direct-sum", cmd_diagnose, "truncation of A ⊕ B against A and B")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--mode", choices=("sub", "quot"), default="quot")
    sp = verb("verify", cmd_verify, "run an invariant battery")
    sp.add_argument("--suite", choices=SUITES, required=True)
    sp.add_argument("--max-degree", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--timing", action="store_true", help="include wall time")
    sp = verb("kappa", cmd_kappa, "the pairing κ(f, g)")
    sp.add_argument("left")
    sp.add_argument("right")
    verb("k0", cmd_k0, "K0 class of each term").add_argument("expr")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cache.load()
    try:
        code = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, HallError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        cache.save()
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
