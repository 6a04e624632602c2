"""``coarse`` command line.

Exit codes: 0 analysis passed, 1 analysis ran but the property failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import campaigns, gallery
from .chains import chain_component, chain_metric, check_r_convexity, component_labels
from .cuts import (
    find_min_cut,
    reachable_partition,
    verify_cut,
    verify_separator,
    zero_dim_partition,
)
from .dimension import component_growth, estimate_asdg, estimate_asdim, estimate_lsind, verify_certificate
from .io import InvalidMetricError, load_space, save_space
from .metric import CoarseInputError, FiniteMetricSpace, hausdorff_distance, validate_metric
from .reports import RunManifest, atomic_write, build_report, emit_profile_csv
from .resemblance import ScaleParams, alike_at_scale, gap_profile, split_alike

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def resolve_subset(space: FiniteMetricSpace, text: str | None) -> frozenset[int]:
    """A named subset of the space, or a comma-separated id list ('' = empty)."""
    if text is None or text.strip() == "":
        return frozenset()
    if text in space.subsets:
        return space.subsets[text]
    try:
        return space.subset(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise CoarseInputError(f"no subset named {text!r} and not an id list") from None


def _space_arg(p):
    p.add_argument("space", help="space file (.json or .csv)")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--allow-invalid", action="store_true")


def _scale_args(p, r_default=None):
    p.add_argument("--r", type=float, required=r_default is None, default=r_default)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--m", type=float, default=None, help="alikeness scale (default r)")
    p.add_argument("--basepoint", type=int, default=0)
    p.add_argument("--window", type=float, default=0.0)
    p.add_argument("--rho", type=float, default=None, help="bounded radius (default window/4)")
    p.add_argument("--gap", type=float, default=1.0)


def _params(args) -> ScaleParams:
    return ScaleParams(
        r=args.r,
        s=args.s,
        m=args.m if args.m is not None else args.r,
        basepoint=args.basepoint,
        window_R=args.window,
        bounded_rho=args.rho,
        disjoint_gap=args.gap,
    )


def _out_arg(p):
    p.add_argument("--out", "-o", default=None, help="report path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coarse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a gallery space")
    gsub = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    g = gsub.add_parser("exp-rays")
    g.add_argument("--n-max", type=int, default=10)
    g.add_argument("--height", type=float, default=1024)
    g.add_argument("--step", type=float, default=1.0)
    g = gsub.add_parser("exp-strips")
    g.add_argument("--n-max", type=int, default=6)
    g.add_argument("--step", type=float, default=1.0)
    g = gsub.add_parser("lattice")
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--side", type=int, default=20)
    g.add_argument("--norm", choices=["l1", "l2", "linf"], default="l1")
    g = gsub.add_parser("free-group")
    g.add_argument("--rank", type=int, default=2)
    g.add_argument("--radius", type=int, default=5)
    g = gsub.add_parser("lf-group")
    g.add_argument("--n-terms", type=int, default=10)
    g = gsub.add_parser("random")
    g.add_argument("--n", type=int, default=20)
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--box", type=float, default=10.0)
    g.add_argument("--seed", type=int, default=0)
    for g in gsub.choices.values():
        g.add_argument("--out", "-o", required=True, help="space JSON to write")

    p = sub.add_parser("convexity", help="r-convexity scan")
    _space_arg(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--max-listed", type=int, default=100)
    _out_arg(p)

    p = sub.add_parser("components", help="chain components at scale r")
    _space_arg(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--x", type=int, default=None, help="only the component of this point")
    _out_arg(p)

    p = sub.add_parser("metric", help="chain metric d_r(x, y)")
    _space_arg(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    _out_arg(p)

    cut = sub.add_parser("cut", help="asymptotic cuts")
    csub = cut.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = csub.add_parser("verify")
    _space_arg(p)
    for name in ("a", "b", "c"):
        p.add_argument(f"--{name}", required=True)
    _scale_args(p)
    _out_arg(p)
    p = csub.add_parser("find")
    _space_arg(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--r", type=float, required=True)
    _out_arg(p)

    sep = sub.add_parser("sep", help="large-scale separators")
    ssub = sep.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for action in ("verify", "construct"):
        p = ssub.add_parser(action)
        _space_arg(p)
        p.add_argument("--a", required=True)
        p.add_argument("--b", default="")
        p.add_argument("--c", default="")
        p.add_argument("--method", choices=["reach", "zero"], default="reach")
        p.add_argument("--i-max", type=int, default=6)
        p.add_argument("--swap", action="store_true", help="exchange X1 and X2")
        _scale_args(p)
        _out_arg(p)
        if action == "verify":
            p.add_argument("--x1", default=None)
            p.add_argument("--x2", default=None)
            p.add_argument("--t", type=float, default=None)
            p.add_argument("--exempt-core", action="store_true")

    dim = sub.add_parser("dim", help="dimension estimators")
    dsub = dim.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = dsub.add_parser("asdim")
    _space_arg(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--D", type=float, required=True)
    _out_arg(p)
    for action in ("asdg", "lsind"):
        p = dsub.add_parser(action)
        _space_arg(p)
        p.add_argument("--a", default=None, help="pair sets (repeat --a/--b for several pairs)", action="append")
        p.add_argument("--b", default=None, action="append")
        p.add_argument("--depth", type=int, default=2)
        p.add_argument("--candidate", action="append", default=[], help="named subset to try as a cut")
        _scale_args(p)
        _out_arg(p)

    prof = sub.add_parser("profile", help="gap and growth profiles")
    psub = prof.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = psub.add_parser("gap")
    _space_arg(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--x0", type=int, default=0)
    p.add_argument("--radii", type=_floats, required=True)
    p.add_argument("--csv", default=None)
    _out_arg(p)
    p = psub.add_parser("growth")
    _space_arg(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--radii", type=_floats, required=True)
    p.add_argument("--csv", default=None)
    _out_arg(p)

    chk = sub.add_parser("check", help="axiom and property campaigns")
    ksub = chk.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = ksub.add_parser("axioms")
    _space_arg(p)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    _out_arg(p)
    p = ksub.add_parser("props")
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _out_arg(p)
    return parser


def _load(args) -> FiniteMetricSpace:
    return load_space(args.space, args.format, allow_invalid=args.allow_invalid)


def _gen(args):
    fam = args.family
    if fam == "exp-rays":
        space = gallery.gen_exp_rays(args.n_max, args.height, args.step)
    elif fam == "exp-strips":
        space = gallery.gen_exp_strips(args.n_max, args.step)
    elif fam == "lattice":
        space = gallery.gen_lattice(args.dim, args.side, args.norm)
    elif fam == "free-group":
        space = gallery.gen_free_group_ball(args.rank, args.radius)
    elif fam == "lf-group":
        space = gallery.gen_locally_finite_group(args.n_terms)
    else:
        space = gallery.gen_random(args.n, args.dim, args.box, args.seed)
    save_space(space, args.out)
    return True, {"family": fam, "name": space.name, "points": space.n, "path": args.out}


def _axioms(space: FiniteMetricSpace, m: float, cases: int, seed: int) -> tuple[bool, dict]:
    rng = np.random.default_rng(seed)
    metric = validate_metric(space)
    union_fail, split_fail, hd_fail = [], [], []

    def pick():
        return rng.choice(space.n, size=int(rng.integers(1, min(space.n, 8) + 1)), replace=False).tolist()

    for k in range(cases if space.n else 0):
        A1, A2, B1, B2 = pick(), pick(), pick(), pick()
        if alike_at_scale(space, A1, B1, m) and alike_at_scale(space, A2, B2, m):
            if not alike_at_scale(space, A1 + A2, B1 + B2, m):
                union_fail.append(k)
        if alike_at_scale(space, A1, B1 + B2, m):
            P1, P2 = split_alike(space, A1, B1, B2, m)
            ok = (P1 | P2) == frozenset(A1) and P1 and P2
            ok = ok and alike_at_scale(space, P1, B1, m) and alike_at_scale(space, P2, B2, m)
            if not ok:
                split_fail.append(k)
        h = lambda X, Y: hausdorff_distance(space, X, Y)  # noqa: E731
        if h(A1, A2) > h(A1, B1) + h(B1, A2) or h(A1, B1) != h(B1, A1):
            hd_fail.append(k)
    passed = not (metric or union_fail or split_fail or hd_fail)
    return passed, {
        "metric_violations": [v.to_dict() for v in metric],
        "union_axiom_failures": union_fail,
        "split_failures": split_fail,
        "hausdorff_failures": hd_fail,
        "cases": cases,
        "m": m,
    }


def _props(cases: int, seed: int) -> tuple[bool, dict]:
    small = max(1, cases // 4)
    results = [
        campaigns.separator_implies_cut(seed, cases),
        campaigns.cut_bound_campaign(gallery.gen_lattice(2, 16, "l1"), 2.0, 0.5, pairs=max(1, cases // 20), seed=seed),
        campaigns.cut_bound_campaign(gallery.gen_free_group_ball(2, 4), 2.0, 0.5, pairs=max(1, cases // 20), seed=seed),
        campaigns.chain_metric_oracle(seed, small),
        campaigns.min_cut_oracle(seed, small),
        campaigns.hausdorff_oracle(seed, small),
    ]
    return all(r.passed for r in results), {"campaigns": [r.to_dict() for r in results]}


def _dispatch(args) -> tuple[bool, dict, list[str], dict]:
    cmd = args.command
    if cmd == "gen":
        ok, payload = _gen(args)
        return ok, payload, [], {}
    if cmd == "check" and args.action == "props":
        ok, payload = _props(args.cases, args.seed)
        return ok, payload, [], {"cases": args.cases, "seed": args.seed}
    space = _load(args)
    inputs = [args.space]
    if cmd == "convexity":
        rep = check_r_convexity(space, args.r, args.max_listed)
        return rep.convex, rep.to_dict(), inputs, {"r": args.r}
    if cmd == "components":
        if args.x is not None:
            comps = [sorted(chain_component(space, args.x, args.r))]
        else:
            labels = component_labels(space, args.r)
            comps = [np.nonzero(labels == k)[0].tolist() for k in np.unique(labels)]
        return True, {"r": args.r, "count": len(comps), "components": comps}, inputs, {"r": args.r}
    if cmd == "metric":
        hops = chain_metric(space, args.x, args.y, args.r)
        payload = {"x": args.x, "y": args.y, "r": args.r, "d": space.d(args.x, args.y), "d_r": hops}
        return hops is not None, payload, inputs, {"r": args.r}
    if cmd == "cut":
        A, B = resolve_subset(space, args.a), resolve_subset(space, args.b)
        if args.action == "verify":
            params = _params(args)
            rep = verify_cut(space, A, B, resolve_subset(space, args.c), params)
            return rep.passed, rep.to_dict(), inputs, params.to_dict()
        C = find_min_cut(space, A, B, args.r)
        return True, {"r": args.r, "size": len(C), "cut": sorted(C)}, inputs, {"r": args.r}
    if cmd == "sep":
        params = _params(args)
        A, B, C = (resolve_subset(space, v) for v in (args.a, args.b, args.c))
        if args.action == "verify" and args.x1 is not None:
            X1 = resolve_subset(space, args.x1)
            X2 = resolve_subset(space, args.x2) if args.x2 is not None else frozenset(range(space.n)) - X1
        elif args.method == "reach":
            X1, X2 = reachable_partition(space, A, C, params)
        else:
            X1, X2 = zero_dim_partition(space, A, B, args.i_max)
        if args.swap:
            X1, X2 = X2, X1
        if args.action == "construct":
            return True, {"method": args.method, "X1": sorted(X1), "X2": sorted(X2)}, inputs, params.to_dict()
        rep = verify_separator(space, A, B, C, X1, X2, params, t=args.t, exempt_core=args.exempt_core)
        return rep.passed, rep.to_dict(), inputs, params.to_dict()
    if cmd == "dim":
        if args.action == "asdim":
            cert = estimate_asdim(space, args.r, args.D)
            return verify_certificate(space, cert), cert.to_dict(), inputs, {"r": args.r, "D": args.D}
        params = _params(args)
        pairs = None
        if args.a or args.b:
            if not args.a or not args.b or len(args.a) != len(args.b):
                raise CoarseInputError("give --a and --b the same number of times")
            pairs = [(resolve_subset(space, a), resolve_subset(space, b)) for a, b in zip(args.a, args.b)]
        extra = {name: resolve_subset(space, name) for name in args.candidate}
        run = estimate_asdg if args.action == "asdg" else estimate_lsind
        cert = run(space, pairs, params, args.depth, extra or None)
        payload = cert.to_dict()
        payload["reverified"] = verify_certificate(space, cert)
        return cert.estimate is not None and payload["reverified"], payload, inputs, params.to_dict()
    if cmd == "profile":
        if args.action == "gap":
            prof = gap_profile(space, resolve_subset(space, args.a), resolve_subset(space, args.b), args.x0, args.radii)
            rows = prof.rows()
            header = ("radius", "gap")
        else:
            rows = component_growth(space, args.x, args.radii)
            header = ("r", "diameter")
        if args.csv:
            emit_profile_csv(rows, args.csv, header)
        return True, {"rows": [list(r) for r in rows]}, inputs, {"radii": args.radii}
    ok, payload = _axioms(space, args.m, args.cases, args.seed)
    return ok, payload, inputs, {"m": args.m, "cases": args.cases, "seed": args.seed}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    manifest = RunManifest(["coarse", *argv])
    try:
        ok, payload, inputs, params = _dispatch(args)
    except InvalidMetricError as exc:
        print(json.dumps({"error": str(exc), "violations": [v.to_dict() for v in exc.violations[:50]]}), file=sys.stderr)
        return EXIT_INPUT
    except CoarseInputError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    manifest.inputs = {p: RunManifest([], [p]).inputs[p] for p in inputs}
    manifest.params = params
    report = build_report(manifest, {"pass": ok, **payload})
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    out = getattr(args, "out", None)
    if args.command != "gen" and out:
        try:
            atomic_write(Path(out), text)
        except OSError as exc:
            print(json.dumps({"error": f"cannot write {out}: {exc}"}), file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
