"""Command-line front end: ``bipartite-chunglu <subcommand> ...``.

Every artifact starts with a ``#`` header (or a ``meta`` JSON key) holding the
toolkit version, the full argument set and the seed, and contains nothing
time-dependent, so reruns with the same arguments are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import ParameterError, SizeError
from .experiments import (
    FIG2_ALPHA_R_GRID,
    FIGURE_BASE_N,
    child_seeds,
    compare,
    degree_curves,
    figure2_rows,
    figure_weight_curves,
    resolve_wmax,
)
from .fitting import fit_power_law
from .ingest import degrees_as_weights, load_bipartite_edgelist, write_label_map
from .projection import DEFAULT_MAX_WORK, project, read_projected_edgelist, write_projected_edgelist
from .sampler import (
    DEFAULT_MAX_PAIRS,
    expected_edges,
    read_bipartite_edgelist,
    sample,
    write_bipartite_edgelist,
)
from .stats import coefficient_report, count_triangles, degree_binned
from .theory import (
    MomentBundle,
    predict_global_clustering,
    predicted_projected_exponent,
    predictor_curve,
    write_predictor_csv,
)
from .weights import PowerLawParams, Side, check_assumptions, read_weights, sample_power_law

log = logging.getLogger("bipartite_chunglu")


def _header(args, extra=None):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    lines = [f"bipartite-chunglu {__version__}", f"command: {args.command}", f"seed: {args.seed}",
             "config: " + json.dumps(cfg, sort_keys=True, default=str)]
    for k, v in (extra or {}).items():
        lines.append(f"{k}: {json.dumps(v, sort_keys=True, default=str)}")
    return "\n".join(lines)


def _meta(args):
    return {"version": __version__, "command": args.command, "seed": args.seed,
            "config": {k: v for k, v in sorted(vars(args).items()) if k != "func"}}


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return _jsonable(float(x))
    return x


def _dump_json(obj, path):
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _open_out(path):
    if path is None or str(path) == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _has_index_header(path):
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                return False
            if "n_left=" in line:
                return True
    return False


def load_graph(path, swap_sides=False):
    """Files written by ``generate`` keep their ids; anything else is parsed as a labelled edge list."""
    if _has_index_header(path):
        G = read_bipartite_edgelist(path)
        return (G.swap_sides() if swap_sides else G), None
    return load_bipartite_edgelist(path, swap_sides=swap_sides)


def _model_weights(args, seed_l, seed_r):
    n_l, n_r = args.nl, args.nr if args.nr is not None else args.nl
    w_max = resolve_wmax(max(n_l, n_r), args.wmax, args.wmax_exp)
    if args.weights_left:
        SL = read_weights(args.weights_left, Side.LEFT)
    else:
        SL = sample_power_law(PowerLawParams(args.alpha_l, 1.0, w_max, discrete=not args.continuous), n_l,
                              seed=seed_l, side=Side.LEFT)
    if args.weights_right:
        SR = read_weights(args.weights_right, Side.RIGHT)
    else:
        SR = sample_power_law(PowerLawParams(args.alpha_r, 1.0, w_max, discrete=not args.continuous), n_r,
                              seed=seed_r, side=Side.RIGHT)
    return SL, SR, w_max


# --- subcommands -----------------------------------------------------------

def cmd_generate(args):
    s_l, s_r, s_g = child_seeds(args.seed, 3)
    SL, SR, w_max = _model_weights(args, s_l, s_r)
    if args.sampler == "fast" and not (SL.is_integral and SR.is_integral):
        raise ParameterError("the fast sampler needs integer weights; rerun with --sampler naive")
    report = check_assumptions(SL, SR, args.delta)
    if not report.all_passed:
        log.warning("weight sequences violate the finite-n assumption surrogates; details in the meta file")
    G = sample(SL, SR, args.sampler, s_g, max_pairs=args.max_pairs)
    mb = MomentBundle.from_sequences(SL, SR)
    meta = _meta(args)
    meta.update(
        n_left=G.n_left, n_right=G.n_right, n_edges=G.n_edges, w_max=w_max,
        expected_edges=expected_edges(SL, SR), moments=mb.to_dict(), assumptions=report.to_dict(),
    )
    write_bipartite_edgelist(G, args.out, header=_header(args))
    _dump_json(meta, str(args.out) + ".meta.json")
    log.info("wrote %d edges to %s", G.n_edges, args.out)
    return 0


def cmd_project(args):
    G, meta = load_graph(args.input, args.swap_sides)
    P = project(G, keep_multiplicity=args.keep_multiplicity, max_work=args.max_work)
    write_projected_edgelist(P, args.out, header=_header(args, {"n_edges": P.n_edges}))
    if meta is not None and args.labels_out:
        write_label_map(meta, args.labels_out)
    return 0


def _projected_input(args):
    if args.projected:
        return read_projected_edgelist(args.input)
    G, _ = load_graph(args.input, args.swap_sides)
    return project(G, max_work=args.max_work)


def cmd_stats(args):
    P = _projected_input(args)
    st = count_triangles(P)
    rep = coefficient_report(P, st)
    out = {"meta": _meta(args), "n_nodes": P.n, "n_edges": P.n_edges, "triangles": st.triangle_total}
    out.update(rep.to_dict())
    _dump_json(out, args.out)
    if args.curves_out:
        for mode in ("clustering", "closure"):
            path = f"{args.curves_out}.{mode}.csv"
            with open(path, "w", newline="") as fh:
                degree_binned(P, mode, args.min_bin_size, st).to_csv(fh, header=_header(args, {"curve": mode}))
    return 0


def cmd_predict(args):
    if args.input:
        G, _ = load_graph(args.input, args.swap_sides)
        SL, SR = degrees_as_weights(G)
        w_max = None
    else:
        s_l, s_r = child_seeds(args.seed, 2)
        SL, SR, w_max = _model_weights(args, s_l, s_r)
    mb = MomentBundle.from_sequences(SL, SR)
    extra = {"moments": mb.to_dict(), "w_max": w_max, "predicted_global_clustering": predict_global_clustering(mb)}
    if args.alpha_l and args.alpha_r and not args.input:
        extra["predicted_projected_exponent"] = predicted_projected_exponent(args.alpha_l, args.alpha_r)
    rows = predictor_curve(args.kind, range(1, args.max_w + 1), mb)
    fh, close = _open_out(args.out)
    try:
        write_predictor_csv(rows, fh, header=_header(args, extra))
    finally:
        if close:
            fh.close()
    return 0


def cmd_compare(args):
    G, meta = load_graph(args.input, args.swap_sides)
    res = compare(G, trials=args.trials, seed=args.seed, max_work=args.max_work)
    SL, SR = degrees_as_weights(G)
    out = {
        "meta": _meta(args),
        "dataset": {"n_left_raw": G.n_left, "n_right_raw": G.n_right, "n_edges": G.n_edges,
                    "n_left_nonisolated": len(SL), "n_right_nonisolated": len(SR),
                    **(meta.to_dict() if meta else {})},
        "table": res.table(),
        "notes": res.notes,
    }
    _dump_json(out, args.out)
    return 0


def _figure_n(args):
    if not 0 < args.scale <= 1:
        raise ParameterError("--scale must be in (0, 1]")
    return max(1, int(round(FIGURE_BASE_N[args.figure] * args.scale)))


def cmd_figure(args):
    fh, close = _open_out(args.out)
    try:
        if args.figure in ("fig1", "fig3"):
            n = _figure_n(args)
            wexp = 0.3 if args.wmax_exp is None else args.wmax_exp
            sample_, curves = figure_weight_curves(n, args.alpha_l, args.alpha_r, wexp, args.seed,
                                                   args.max_w, args.min_bin_size)
            mode = "clustering" if args.figure == "fig1" else "closure"
            fh.write("".join(f"# {ln}\n" for ln in _header(args, {"n": n, "moments": sample_.mb.to_dict()})
                             .splitlines()))
            fh.write("x,empirical,predicted,n_nodes\n")
            for w, emp, pred, cnt in curves[mode]:
                fh.write(f"{w},{emp!r},{pred!r},{cnt}\n")
        elif args.figure == "fig2":
            n = _figure_n(args)
            wexp = 0.5 if args.wmax_exp is None else args.wmax_exp
            rows = figure2_rows(n, args.alpha_l, FIG2_ALPHA_R_GRID, wexp, args.seed)
            fh.write("".join(f"# {ln}\n" for ln in _header(args, {"n": n}).splitlines()))
            fh.write("x,empirical,predicted\n")
            for a_r, emp, pred in rows:
                fh.write(f"{a_r},{emp!r},{pred!r}\n")
        else:
            if not args.input:
                raise ParameterError(f"{args.figure} needs --input <dataset edge list>")
            G, _ = load_graph(args.input, args.swap_sides)
            mode = "clustering" if args.figure == "fig4" else "closure"
            curves = degree_curves(G, args.seed, mode, args.min_bin_size, args.max_work)
            fh.write("".join(f"# {ln}\n" for ln in _header(args).splitlines()))
            fh.write("x,empirical,model,random_intersection\n")
            for k, vals in curves.items():
                fh.write(f"{k}," + ",".join("" if v is None else repr(v) for v in vals) + "\n")
    finally:
        if close:
            fh.close()
    return 0


def cmd_fit(args):
    if args.side == "weights":
        x = read_weights(args.input).values
    else:
        G, _ = load_graph(args.input, args.swap_sides)
        if args.side == "left":
            x = G.left_degrees()
        elif args.side == "right":
            x = G.right_degrees()
        else:
            x = project(G, max_work=args.max_work).degrees()
    fit = fit_power_law(np.asarray(x), x_min=args.x_min)
    _dump_json({"meta": _meta(args), **fit.to_dict()}, args.out)
    return 0


# --- parser ----------------------------------------------------------------

def _model_flags(p):
    p.add_argument("--nl", type=int, default=10**4, help="left node count")
    p.add_argument("--nr", type=int, default=None, help="right node count (default: --nl)")
    p.add_argument("--alpha-l", type=float, default=2.5)
    p.add_argument("--alpha-r", type=float, default=2.5)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--wmax", type=float, default=None, help="absolute weight cap")
    g.add_argument("--wmax-exp", type=float, default=None, help="weight cap n**EXP")
    p.add_argument("--continuous", action="store_true", help="continuous instead of discrete power law")
    p.add_argument("--weights-left", default=None, help="read left weights from a file instead")
    p.add_argument("--weights-right", default=None, help="read right weights from a file instead")


def build_parser():
    parser = argparse.ArgumentParser(prog="bipartite-chunglu", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("generate", cmd_generate, "sample a bipartite graph")
    _model_flags(p)
    p.add_argument("--sampler", choices=("fast", "naive", "random-intersection"), default="fast")
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS)
    p.add_argument("--out", required=True)

    p = add("project", cmd_project, "project a bipartite edge list onto its left side")
    p.add_argument("input")
    p.add_argument("--swap-sides", action="store_true")
    p.add_argument("--keep-multiplicity", action="store_true")
    p.add_argument("--max-work", type=int, default=DEFAULT_MAX_WORK)
    p.add_argument("--labels-out", default=None)
    p.add_argument("--out", required=True)

    p = add("stats", cmd_stats, "clustering/closure report of a projection")
    p.add_argument("input")
    p.add_argument("--projected", action="store_true", help="input is already a projected edge list")
    p.add_argument("--swap-sides", action="store_true")
    p.add_argument("--max-work", type=int, default=DEFAULT_MAX_WORK)
    p.add_argument("--min-bin-size", type=int, default=None)
    p.add_argument("--curves-out", default=None, help="prefix for per-degree curve CSVs")
    p.add_argument("--out", default=None)

    p = add("predict", cmd_predict, "closed-form predictions for a weight model")
    _model_flags(p)
    p.add_argument("--input", default=None, help="take weights from this dataset's degrees")
    p.add_argument("--swap-sides", action="store_true")
    p.add_argument("--kind", choices=("clustering", "closure", "degree"), default="clustering")
    p.add_argument("--max-w", type=int, default=20)
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument("--out", default=None)

    p = add("compare", cmd_compare, "data vs. model vs. random intersection")
    p.add_argument("input")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--swap-sides", action="store_true")
    p.add_argument("--max-work", type=int, default=DEFAULT_MAX_WORK)
    p.add_argument("--out", default=None)

    p = add("figure", cmd_figure, "simulated or data-driven figure series as CSV")
    p.add_argument("figure", choices=("fig1", "fig2", "fig3", "fig4", "fig5"))
    p.add_argument("--scale", type=float, default=0.01)
    p.add_argument("--alpha-l", type=float, default=2.5)
    p.add_argument("--alpha-r", type=float, default=2.5)
    p.add_argument("--wmax-exp", type=float, default=None)
    p.add_argument("--max-w", type=int, default=20)
    p.add_argument("--min-bin-size", type=int, default=5)
    p.add_argument("--input", default=None, help="dataset for fig4/fig5")
    p.add_argument("--swap-sides", action="store_true")
    p.add_argument("--max-work", type=int, default=DEFAULT_MAX_WORK)
    p.add_argument("--out", default=None)

    p = add("fit", cmd_fit, "discrete power-law fit of a degree or weight sequence")
    p.add_argument("input")
    p.add_argument("--side", choices=("left", "right", "projected", "weights"), default="left")
    p.add_argument("--x-min", type=int, default=None)
    p.add_argument("--swap-sides", action="store_true")
    p.add_argument("--max-work", type=int, default=DEFAULT_MAX_WORK)
    p.add_argument("--out", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ParameterError, SizeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
