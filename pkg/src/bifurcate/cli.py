"""Command-line entry point: ``bifurcate {generate,features,entropy,detect,bench}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .centrality import FEATURE_FAMILIES, FeatureConfig
from .entropy import MODES, entropy_series, vnge_approx, vnge_exact
from .graph import GraphError
from .io import read_edgelist, write_edgelist
from .pipeline import detect, embed_sequences, extract_features, series_values
from .spectral import decomposition_count
from .stats import zscore_series
from .synthgen import FAMILIES, ScenarioConfig, erdos_renyi, scenario

log = logging.getLogger("bifurcate")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return "" if not math.isfinite(x) else repr(float(x))
    return str(x)


def write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(x) for x in r])


def _csv_ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _feature_cfg(args) -> FeatureConfig:
    feats = tuple(f.strip() for f in args.features.split(",")) if args.features else FEATURE_FAMILIES
    return FeatureConfig(feats, _csv_ints(args.hops), _csv_ints(args.refs) if args.refs else (), args.metric)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _plots(args) -> bool:
    return not args.no_plots


def cmd_generate(args) -> int:
    cfg = ScenarioConfig(
        n=args.n, T=args.steps, t0=args.t0, intensity=args.intensity, hub_count=args.hubs,
        seed=args.seed, family=args.family, p_edge=args.p_edge, m_attach=args.m_attach,
    )
    normal, abnormal = scenario(cfg)
    out = _outdir(args)
    write_edgelist(normal, out / "normal.txt")
    write_edgelist(abnormal, out / "abnormal.txt")
    print(f"wrote {out / 'normal.txt'} and {out / 'abnormal.txt'} (n={cfg.n}, T={cfg.T}, t0={cfg.t0})")
    return 0


def _write_embedding(path: Path, emb_sets, stamps, tags=None) -> None:
    l = emb_sets[0][0].shape[1]
    header = (["seq"] if tags else []) + ["t", "node"] + [f"y{k + 1}" for k in range(l)]
    rows = []
    for s, embs in enumerate(emb_sets):
        for t, Y in zip(stamps, embs):
            for i, y in enumerate(Y):
                rows.append(([tags[s]] if tags else []) + [t, i, *y])
    write_csv(path, header, rows)


def cmd_features(args) -> int:
    seq = read_edgelist(args.input)
    out = _outdir(args)
    feats = extract_features(seq, _feature_cfg(args), args.threads)
    for fm in feats:
        write_csv(out / f"features_t{fm.t}.csv", list(fm.feature_names), fm.values.tolist())
        for w in fm.warnings:
            log.warning("t=%s: %s", fm.t, w)
    _, (embs,) = embed_sequences([feats], args.dim)
    _write_embedding(out / "embedding.csv", [embs], seq.timestamps)
    if _plots(args):
        from .plotting import plot_embedding

        rows = np.vstack(embs)
        ts = np.repeat(seq.timestamps, seq.n)
        plot_embedding(rows, ts, out / "embedding.png")
    print(f"wrote {len(feats)} feature files and embedding.csv to {out}")
    return 0


def cmd_entropy(args) -> int:
    seq = read_edgelist(args.input)
    out = _outdir(args)
    before = decomposition_count()
    res = entropy_series(seq, args.mode, args.threads)
    used = decomposition_count() - before
    V = series_values(res, "exact")
    Q = series_values(res, "approx")
    zV, zQ = zscore_series(V), zscore_series(Q)
    write_csv(
        out / "entropy.csv",
        ["t", "V", "Q", "lower", "upper", "zV", "zQ"],
        ([r.t, r.exact, r.approx, r.lower, r.upper, zv, zq] for r, zv, zq in zip(res, zV, zQ)),
    )
    for r in res:
        if r.gap:
            log.warning("t=%s: edgeless snapshot, gap entry", r.t)
    if _plots(args):
        from .plotting import plot_entropy

        series = {}
        if args.mode in ("exact", "both"):
            series["V"] = zV
        if args.mode in ("approx", "both"):
            series["Q"] = zQ
        plot_entropy(list(seq.timestamps), series, out / "entropy.png")
    log.info("eigendecompositions: %d", used)
    if args.verbose:
        print(f"eigendecompositions: {used}")
    print(f"wrote {out / 'entropy.csv'}")
    return 0


def cmd_detect(args) -> int:
    if not args.input_b:
        raise ValueError("detect needs --input and --input-b")
    seq_a, seq_b = read_edgelist(args.input), read_edgelist(args.input_b)
    out = _outdir(args)
    res = detect(seq_a, seq_b, _feature_cfg(args), args.dim, args.alpha, args.p_threshold, args.mode, args.threads)
    rep = res.report
    (out / "report.json").write_text(rep.to_json())
    rows = rep.rows()
    write_csv(out / "report.csv", list(rows[0]), (list(r.values()) for r in rows))
    for tag, fits in (("a", res.fits_a), ("b", res.fits_b)):
        payload = [({"t": f.t, **f.ellipsoid.to_dict()} if f.ellipsoid is not None else {"t": f.t, "gap": True}) for f in fits]
        (out / f"ellipsoids_{tag}.json").write_text(json.dumps(payload, indent=2))
    l = res.trajectory_a.shape[1]
    write_csv(
        out / "trajectory.csv",
        ["seq", "t"] + [f"c{k + 1}" for k in range(l)],
        [[tag, t, *c] for tag, traj in (("A", res.trajectory_a), ("B", res.trajectory_b)) for t, c in zip(res.timestamps, traj)],
    )
    _write_embedding(out / "embedding.csv", [res.embeddings_a, res.embeddings_b], res.timestamps, tags=("A", "B"))
    if _plots(args):
        from .plotting import plot_entropy, plot_pvalues, plot_trajectories

        plot_pvalues(rep.timestamps, rep.p_values, rep.threshold, out / "pvalues.png", rep.critical_time)
        plot_trajectories(res.fits_a, res.fits_b, out / "trajectory.png", labels=("A", "B"))
        series = {}
        if rep.z_exact_a:
            series.update({"V A": rep.z_exact_a, "V B": rep.z_exact_b})
        if rep.z_approx_a:
            series.update({"Q A": rep.z_approx_a, "Q B": rep.z_approx_b})
        plot_entropy(rep.timestamps, series, out / "entropy.png")
    for w in rep.warnings:
        log.warning(w)
    crit = rep.critical_time
    print(f"critical time: {crit if crit is not None else 'none'} (threshold p < {rep.threshold:g}); wrote {out}")
    return 0


def bench_rows(sizes, trials: int, p_edge: float, seed: int) -> list[dict]:
    rows = []
    for n in sizes:
        if n < 100:
            raise ValueError(f"benchmark sizes must be >= 100, got {n}")
        g = erdos_renyi(n, p_edge, seed)
        t_ex, t_ap = [], []
        for _ in range(trials):
            t = time.perf_counter()
            vnge_exact(g)
            t_ex.append(time.perf_counter() - t)
            t = time.perf_counter()
            vnge_approx(g)
            t_ap.append(time.perf_counter() - t)
        e, a = statistics.median(t_ex), statistics.median(t_ap)
        rows.append({"n": n, "t_exact": e, "t_approx": a, "ratio": e / a if a > 0 else float("inf")})
    return rows


def cmd_bench(args) -> int:
    out = _outdir(args)
    rows = bench_rows(_csv_ints(args.sizes), args.trials, args.p_edge, args.seed)
    write_csv(out / "bench.csv", ["n", "t_exact", "t_approx", "ratio"], ([r["n"], r["t_exact"], r["t_approx"], r["ratio"]] for r in rows))
    if _plots(args):
        from .plotting import plot_bench

        plot_bench(rows, out / "bench.png")
    for r in rows:
        print(f"n={r['n']:6d}  exact {r['t_exact']:.4f}s  approx {r['t_approx']:.5f}s  ratio {r['ratio']:.1f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON or YAML file of option defaults; flags win")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="worker threads across time steps")
    common.add_argument("--no-plots", action="store_true", help="skip PNG figures")
    common.add_argument("-v", "--verbose", action="store_true")

    pipe = argparse.ArgumentParser(add_help=False)
    pipe.add_argument("--input", help="temporal edge-list file")
    pipe.add_argument("--dim", type=int, default=3, help="PCA dimension l")
    pipe.add_argument("--metric", choices=("hop", "invweight"), default="hop")
    pipe.add_argument("--features", default="", help=f"comma list from {','.join(FEATURE_FAMILIES)}")
    pipe.add_argument("--hops", default="2,3", help="hop-walk depths")
    pipe.add_argument("--refs", default="", help="reference nodes for distance features")
    pipe.add_argument("--mode", choices=MODES, default="both")

    p = argparse.ArgumentParser(prog="bifurcate", description="Centrality and graph-entropy bifurcation detection.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a normal/attacked synthetic pair")
    g.add_argument("--n", type=int, default=400)
    g.add_argument("--steps", type=int, default=12)
    g.add_argument("--t0", type=int, default=7)
    g.add_argument("--intensity", type=float, default=0.3)
    g.add_argument("--hubs", type=int, default=3)
    g.add_argument("--family", choices=FAMILIES, default="er")
    g.add_argument("--p-edge", type=float, default=0.025)
    g.add_argument("--m-attach", type=int, default=5)
    g.set_defaults(func=cmd_generate)

    f = sub.add_parser("features", parents=[common, pipe], help="per-step centrality CSVs and PCA embedding")
    f.set_defaults(func=cmd_features)

    e = sub.add_parser("entropy", parents=[common, pipe], help="exact/approximate VNGE series")
    e.set_defaults(func=cmd_entropy)

    d = sub.add_parser("detect", parents=[common, pipe], help="bifurcation report for two sequences")
    d.add_argument("--input-b", help="second temporal edge-list file")
    d.add_argument("--alpha", type=float, default=0.975)
    d.add_argument("--p-threshold", type=float, default=0.01)
    d.set_defaults(func=cmd_detect)

    b = sub.add_parser("bench", parents=[common], help="time exact vs approximate entropy")
    b.add_argument("--sizes", default="500,1000,2000")
    b.add_argument("--trials", type=int, default=5)
    b.add_argument("--p-edge", type=float, default=0.01)
    b.set_defaults(func=cmd_bench)
    return p


def _load_config(path: str) -> dict:
    text = Path(path).read_text()
    if path.endswith((".yaml", ".yml")):
        import yaml

        data = yaml.safe_load(text) or {}
    else:
        data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a mapping")
    return {k.replace("-", "_"): v for k, v in data.items()}


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if args.config:
            cfg = _load_config(args.config)
            sub = parser._subparsers._group_actions[0].choices[args.command]
            sub.set_defaults(**cfg)
            args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.INFO if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        if args.command in ("features", "entropy", "detect") and not args.input:
            raise ValueError(f"{args.command} needs --input")
        return args.func(args)
    except (ValueError, GraphError, OSError, KeyError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
