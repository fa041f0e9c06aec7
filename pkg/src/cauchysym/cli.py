"""Command-line entry point.

    cauchysym [--config FILE] [--output-dir DIR] {eval,verify,reproduce,extremal,curves} ...

Every long option can also come from the config file (``key = value`` per
line, ``#`` comments, dashes or underscores in keys); options given on the
command line win.  Reports go to ``--output-dir``, else ``$CAUCHYSYM_OUTPUT_DIR``,
else ``./cauchysym-out``.  Exit status: 0 when every assertion passes, 1 when
one fails, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from .curve import CUSTOM_CURVES, curve_data, format_curve, parse_curve
from .experiments import reproductions as rp
from .experiments.reports import SAMPLE_COLUMNS, _clean, sample_rows, write_csv
from .experiments.sampling import MODES, TripleSampler
from .experiments.search import OBJECTIVES, extremal_ratio
from .experiments.suites import ALL_SUITES, SUITES, default_sampler, registry_self_test, run_suite
from .kernels import VARIANTS, KernelHandle, constant_phase, graph_phase, parse_kernel
from .symmetry import h_functional, remainder_rh, symmetrize

ENV_OUTPUT = "CAUCHYSYM_OUTPUT_DIR"
DEFAULT_OUTPUT = "cauchysym-out"
EXAMPLES = ("4.1", "4.2", "4.3")


class UsageError(Exception):
    pass


def read_config(path) -> dict:
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected 'key = value', got {raw.strip()!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


def _floats(text, n=None, sep=","):
    try:
        vals = [float(v) for v in str(text).split(sep) if v.strip()]
    except ValueError:
        raise UsageError(f"expected numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} numbers, got {text!r}")
    return vals


def _region(text):
    boxes = [tuple(_floats(b, 2)) for b in str(text).split(";")]
    if len(boxes) != 3:
        raise UsageError(f"region needs three 'lo,hi' boxes separated by ';', got {text!r}")
    return boxes


def _points(text):
    try:
        pts = [complex(v.strip().replace(" ", "")) for v in str(text).split(",")]
    except ValueError:
        raise UsageError(f"expected three complex numbers like '0,1,1j', got {text!r}") from None
    if len(pts) != 3:
        raise UsageError(f"expected three points, got {text!r}")
    return np.array(pts)


def _phase(text, spec):
    if text is None:
        return None
    if text == "graph":
        if spec is None:
            raise UsageError("--phase graph needs --curve")
        return graph_phase(spec)
    return constant_phase(_floats(text, 1)[0])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cauchysym", description=__doc__.split("\n\n")[0])
    p.add_argument("--config", help="file of 'key = value' lines supplying option defaults")
    p.add_argument("--output-dir", help=f"report directory (default ${ENV_OUTPUT} or ./{DEFAULT_OUTPUT})")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    e = sub.add_parser("eval", help="symmetrized forms of one triple or a sampled batch")
    e.add_argument("--kernel", default="k0", choices=VARIANTS)
    e.add_argument("--curve", help="line | parabola:<a> | cubic | bumpsine | cosh")
    e.add_argument("--phase", help="constant value, or 'graph' for the curve's tangent phase")
    e.add_argument("--xs", help="three abscissas, e.g. -2,0,2")
    e.add_argument("--z", help="three points, e.g. 0,1,1j")
    e.add_argument("--mode", choices=MODES, help="sample a batch instead of one triple")
    e.add_argument("--n", type=int, default=1000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--interval", help="lo,hi for on-curve sampling")
    e.add_argument("--x0", type=float, default=0.0)
    e.add_argument("--delta", type=float, default=0.1)
    e.add_argument("--csv", help="CSV path for batch output (default <output-dir>/eval.csv)")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", default="all", help=f"one of {', '.join(ALL_SUITES)}, or all")
    v.add_argument("--n", type=int, help="sample count override")
    v.add_argument("--seed", type=int, help="seed override")
    v.add_argument("--curve", help="curve override for curve-based samplers")
    v.add_argument("--interval", help="lo,hi override for on-curve samplers")
    v.add_argument("--x0", type=float)
    v.add_argument("--delta", type=float)
    v.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE",
                   help="tolerance override, repeatable")
    v.add_argument("--report", help="JSON-lines path (default <output-dir>/verify-<suite>.jsonl)")
    v.add_argument("--self-test", action="store_true", help="only check the suite registry")

    r = sub.add_parser("reproduce", help="recompute a worked example")
    r.add_argument("--example", choices=EXAMPLES, help="required, here or in the config file")
    r.add_argument("--lambda", dest="lam", type=float, help="example parameter lambda")
    r.add_argument("--a", type=float, default=1.0, help="cubic example parameter a")

    x = sub.add_parser("extremal", help="search for extreme symmetrization ratios")
    x.add_argument("--curve", default="parabola:0.5")
    x.add_argument("--objective", default="min-re-ratio", choices=OBJECTIVES)
    x.add_argument("--budget", type=int, default=100_000)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--restarts", type=int, default=3)
    x.add_argument("--region", help="lo,hi;lo,hi;lo,hi (default depends on curve and objective)")
    x.add_argument("--report", help="JSON-lines path (default <output-dir>/extremal.jsonl)")

    c = sub.add_parser("curves", help="list curve shorthands or describe a curve at a point")
    c.add_argument("--curve")
    c.add_argument("--at", help="abscissas, e.g. 0,0.5")
    return p


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    cfg = read_config(known.config)
    # command-line flags win because they are parsed after these defaults
    subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    seen = set()
    for sp in list(subs.choices.values()) + [parser]:
        names = {}
        for a in sp._actions:
            for opt in a.option_strings:
                names[opt.lstrip("-").replace("-", "_")] = a
        hits = {k: v for k, v in cfg.items() if k in names}
        sp.set_defaults(**{names[k].dest: _coerce(names[k], v) for k, v in hits.items()})
        seen |= set(hits)
    unknown = sorted(set(cfg) - seen - {"config"})
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return cfg


def _coerce(action, value):
    if isinstance(action, argparse._StoreTrueAction):
        return value.lower() in ("1", "true", "yes", "on")
    if isinstance(action, argparse._AppendAction):
        return [s.strip() for s in value.split(",") if s.strip()]
    if action.type is not None:
        return action.type(value)
    if action.choices is not None and value not in action.choices:
        raise UsageError(f"invalid value {value!r} for {action.dest}; choose from {list(action.choices)}")
    return value


def output_dir(args) -> Path:
    return Path(args.output_dir or os.environ.get(ENV_OUTPUT) or DEFAULT_OUTPUT)


def _resolved(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if v is not None and k != "func"}


def _print_json(obj):
    print(json.dumps(_clean(obj)))


# -- commands --------------------------------------------------------------

def cmd_eval(args) -> int:
    spec = parse_curve(args.curve) if args.curve else None
    kernel = parse_kernel(args.kernel, spec, _phase(args.phase, spec))
    if kernel.variant in ("kh", "khstar") and kernel.phase is None:
        raise UsageError(f"{args.kernel} needs --phase or --curve")
    if args.mode:
        smp = TripleSampler(args.mode, args.seed, args.n, spec,
                            tuple(_floats(args.interval, 2)) if args.interval else None,
                            args.x0, args.delta)
        s = smp.sample()
        if kernel.on_curve:
            if s.xs is None:
                raise UsageError(f"{args.kernel} needs on-curve or shrinking-window sampling")
            r = symmetrize(kernel, s.xs)
        else:
            r = symmetrize(kernel, s.z)
        path = Path(args.csv) if args.csv else output_dir(args) / "eval.csv"
        write_csv(path, SAMPLE_COLUMNS, sample_rows(s.z, r.c_sq, r.full, r.re_part, r.im_part, r.condition))
        _print_json({"rows": len(s), "csv": str(path), "sampler": smp.describe()})
        return 0
    if kernel.on_curve or (spec is not None and args.xs):
        if not args.xs:
            raise UsageError(f"{args.kernel} needs --xs")
        xs = np.array(_floats(args.xs, 3))
        r = symmetrize(kernel, xs)
        out = {"xs": xs.tolist()}
    else:
        if not args.z:
            raise UsageError("point kernels need --z")
        z = _points(args.z)
        r = symmetrize(kernel, z)
        out = {"z": [[p.real, p.imag] for p in z]}
        if kernel.variant == "kh":
            rep = remainder_rh(kernel.phase, z)
            out["r_h"] = {"formula": rep.via_formula, "identity": rep.via_identity}
        elif kernel.variant == "khstar":
            rep = h_functional(kernel.phase, z)
            out["h"] = {"formula": rep.via_formula, "identity": rep.via_identity}
    out.update(kernel=args.kernel, full=complex(r.full), re_part=r.re_part, im_part=r.im_part,
               c_sq=r.c_sq, condition=r.condition)
    _print_json(out)
    return 0


def _sampler_for(args):
    smp = default_sampler(args.suite)
    kw = {}
    if args.n is not None:
        kw["count"] = args.n
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.curve:
        kw["spec"] = parse_curve(args.curve)
    if args.interval:
        kw["interval"] = tuple(_floats(args.interval, 2))
    if args.x0 is not None:
        kw["x0"] = args.x0
    if args.delta is not None:
        kw["delta"] = args.delta
    return (smp.with_(**kw) if kw else None), kw


def _tolerances(items):
    out = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"--tol expects KEY=VALUE, got {item!r}")
        k, val = item.split("=", 1)
        out[k.strip()] = _floats(val, 1)[0]
    return out


def cmd_verify(args) -> int:
    problems = registry_self_test()
    if args.self_test or problems:
        for p in problems:
            print(f"self-test: {p}", file=sys.stderr)
        print(f"self-test: {'FAIL' if problems else 'ok'} ({len(ALL_SUITES)} suites registered)")
        return 1 if problems else 0
    suites = ALL_SUITES if args.suite == "all" else (args.suite,)
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; expected one of {', '.join(ALL_SUITES)} or all")
    tol = _tolerances(args.tol)
    lines, ok = [], True
    for sid in suites:
        sampler, overrides = _sampler_for(argparse.Namespace(**{**vars(args), "suite": sid}))
        if overrides and args.suite == "all":
            raise UsageError("sampler overrides need a single --suite")
        rep = run_suite(sid, sampler, tol if args.suite != "all" else None)
        rep.config["run"] = _resolved(args)
        lines += rep.jsonl_lines()
        ok &= rep.passed
        print(f"{'PASS' if rep.passed else 'FAIL'} {sid} ({rep.samples} evaluations, {rep.runtime:.2f}s)")
        for a in rep.failing():
            print(f"  failing assertion {a.id}: value {a.value!r}, bound {a.bound!r}", file=sys.stderr)
    path = Path(args.report) if args.report else output_dir(args) / f"verify-{args.suite}.jsonl"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    print(f"report: {path}")
    return 0 if ok else 1


def cmd_reproduce(args) -> int:
    if args.example is None:
        raise UsageError(f"reproduce needs --example, one of {', '.join(EXAMPLES)}")
    if args.example == "4.2":
        lam = 2.0 if args.lam is None else args.lam
        spec = rp.PARABOLA_HALF
        r = symmetrize(KernelHandle.restricted(spec), rp.parabola_im_triple(lam))
        closed = float(rp.parabola_im_closed_form(lam))
        print(f"curve {format_curve(spec)}  xs = (-{lam!r}, 0, {lam!r})")
        print(f"S[Im]  direct = {r.im_part!r}   closed form = {closed!r}   difference = {r.im_part - closed:.3e}")
        return 0
    if args.example == "4.3":
        lam = 100.0 if args.lam is None else args.lam
        a = args.a
        r = symmetrize(KernelHandle.restricted(rp.CUBIC), rp.cubic_triple(a, lam))
        terms = [float(t) for t in rp.cubic_terms(a, lam)]
        printed = [float(t) for t in rp.printed_cubic_terms(a, lam)]
        print(f"curve cubic  xs = (-{a!r}, 0, {lam!r})")
        print(f"S[Re]  direct = {r.re_part!r}   I+II+III = {sum(terms)!r}")
        print("terms  I = {!r}  II = {!r}  III = {!r}".format(*terms))
        print("uncorrected split (does not match): I = {!r}  II = {!r}  III = {!r}  sum = {!r}".format(
            *printed, sum(printed)))
        return 0
    spec = parse_curve("bumpsine")
    k = KernelHandle.restricted(spec)
    print("k  lambda  |S[Re]|/c^2")
    for kk in (2, 3, 4, 5):
        xs = rp.bump_triple(kk)
        r = symmetrize(k, xs)
        print(f"{kk}  {float(xs[1])!r}  {float(abs(r.re_part) / r.c_sq)!r}")
    return 0


def cmd_extremal(args) -> int:
    spec = parse_curve(args.curve)
    region = _region(args.region) if args.region else None
    rep = extremal_ratio(spec, args.objective, region, args.budget, args.seed, args.restarts)
    path = Path(args.report) if args.report else output_dir(args) / "extremal.jsonl"
    rep.write_jsonl(path)
    print(f"{args.objective} on {rep.curve}: best {rep.best_value!r} (grid {rep.grid_best!r}), "
          f"{rep.evaluations} of {rep.budget} evaluations")
    print("witness abscissas: " + ", ".join(repr(v) for v in rep.arg_triple))
    print(f"report: {path}")
    return 0


def cmd_curves(args) -> int:
    if not args.curve:
        for name in ("line[:m[:b]]", "parabola:<a>", "cubic", "bumpsine[:r0:r1:f0:f1]", *CUSTOM_CURVES):
            print(name)
        return 0
    spec = parse_curve(args.curve)
    if not args.at:
        _print_json(spec.to_record())
        return 0
    xs = np.array(_floats(args.at))
    d = curve_data(spec, xs)
    for i, x in enumerate(xs):
        _print_json({"x": x, "height": d.height[i], "slope": d.slope[i], "speed": d.speed[i],
                     "curvature": d.curvature[i], "phase": d.phase[i]})
    return 0


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "reproduce": cmd_reproduce,
            "extremal": cmd_extremal, "curves": cmd_curves}


def _glue_negative_values(argv):
    """``--xs -2,0,2`` -> ``--xs=-2,0,2`` so argparse does not read ``-2,0,2`` as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok.startswith("--") and "=" not in tok and re.match(r"-[\d.]", nxt):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, ValueError, OSError) as exc:
        print(f"cauchysym: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
