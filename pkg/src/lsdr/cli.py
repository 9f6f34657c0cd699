"""Command-line front end: dataset generation, reduction runs and indices.

Every command writes a manifest JSON recording the exact argv, seed and
output paths; ``lsdr rerun <manifest>`` replays it and reproduces the
outputs byte for byte. Exit codes: 0 success, 2 usage, 3 input parse,
4 numerical failure, 5 degeneracy fallback under --strict.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .datasets import FAMILIES, DatasetSpec, generate
from .embedding import KernelSpec
from .errors import (
    InputParseError,
    LsdrError,
    NumericalError,
    ValidationError,
)
from .graph import dump_edge_list
from .indices import (
    IdentityAdapter,
    IndexReport,
    PcaAdapter,
    knn_metrics,
    tractable_consistency_index,
    trustability_index,
)
from .pipeline import LsdrAdapter, LsdrConfig, lsdr, transform_bandwidth
from .serialize import (
    read_point_cloud,
    write_embedding,
    write_json,
    write_paired,
    write_point_cloud,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_NUMERICAL = 4
EXIT_DEGENERATE = 5

GNUPLOT_TEMPLATE = """# gnuplot script: plot original data against its embedding
set datafile separator ','
set key off
plot '{paired}' using 1:2 with points pt 7 ps 0.4
"""


def _fail(category: str, message: str, code: int) -> int:
    print(f"ERROR {category}: {message}", file=sys.stderr)
    return code


def _write_manifest(path: Path, command: str, argv: list[str], seed: int, outputs: list[str], started: float) -> None:
    write_json(
        path,
        {
            "command": command,
            "argv": argv,
            "seed": seed,
            "outputs": sorted(outputs),
            "tool_version": __version__,
            "duration_seconds": time.time() - started,
        },
    )


def _dataset_spec(args) -> DatasetSpec:
    params = {}
    if args.clusters is not None:
        params["clusters"] = args.clusters
    if args.gaps is not None:
        params["gaps"] = [float(g) for g in args.gaps.split(":")]
    if args.separation is not None:
        params["separation"] = args.separation
    if args.turns is not None:
        params["turns"] = args.turns
    return DatasetSpec(
        family=args.family,
        n=args.n,
        p=args.p,
        noise=args.noise,
        seed=args.seed,
        params=params,
    )


def cmd_generate(args, argv: list[str]) -> int:
    started = time.time()
    spec = _dataset_spec(args)
    cloud = generate(spec)
    out = Path(args.out)
    write_point_cloud(out, cloud)
    manifest = out.with_suffix(".manifest.json")
    _write_manifest(manifest, "generate", argv, args.seed, [str(out)], started)
    print(f"wrote {out} ({cloud.shape[0]} rows, {cloud.shape[1]} columns)")
    return EXIT_OK


def cmd_reduce(args, argv: list[str]) -> int:
    started = time.time()
    cloud = read_point_cloud(args.input)
    outputs = []
    degenerate = False
    if args.algo == "pca":
        from .indices import pca_reduce

        emb = pca_reduce(cloud, args.d)
        skeleton = None
        graph = None
    else:
        kernel = KernelSpec("gaussian", args.bandwidth)
        cfg = LsdrConfig(
            d=args.d,
            alpha=args.alpha,
            k=args.k,
            kernel=kernel,
            seed=args.seed,
            threads=args.threads,
        )
        result = lsdr(cloud, cfg)
        emb = result.embedding
        skeleton = result.skeleton
        graph = result.graph
        degenerate = result.degenerate_fallback

    out = Path(args.out)
    write_embedding(out, emb)
    outputs.append(str(out))
    paired = out.with_name(out.stem + "_paired.csv")
    write_paired(paired, cloud, emb)
    outputs.append(str(paired))
    if args.plot:
        script = out.with_suffix(".gp")
        script.write_text(GNUPLOT_TEMPLATE.format(paired=paired.name))
        outputs.append(str(script))
    if skeleton is not None:
        skel_path = out.with_name(out.stem + "_skeleton.json")
        write_json(skel_path, skeleton.to_dict())
        outputs.append(str(skel_path))
    if args.dump_graph:
        if graph is None:
            return _fail("degeneracy", "no graph available to dump (fallback path taken)", EXIT_DEGENERATE)
        graph_path = out.with_name(out.stem + "_graph.txt")
        graph_path.write_text(dump_edge_list(graph))
        outputs.append(str(graph_path))

    manifest = out.with_suffix(".manifest.json")
    _write_manifest(manifest, "reduce", argv, args.seed, outputs, started)
    if degenerate and args.strict:
        return _fail("degeneracy", "degeneracy fallback taken under --strict", EXIT_DEGENERATE)
    print(f"wrote {out} ({emb.n} rows, {emb.d} columns)")
    return EXIT_OK


def _resolve_adapter(args):
    if args.algo == "pca":
        return PcaAdapter()
    if args.algo == "identity":
        return IdentityAdapter()
    return LsdrAdapter(alpha=args.alpha, k=args.k, seed=args.seed)


def cmd_index(args, argv: list[str]) -> int:
    started = time.time()
    cloud = read_point_cloud(args.input)
    adapter = _resolve_adapter(args)
    report = IndexReport(
        algorithm=adapter.name,
        dataset=Path(args.input).stem,
        n=cloud.shape[0],
    )
    if args.ti:
        report.ti = trustability_index(adapter, cloud)
    if args.tci:
        sigma = args.bandwidth
        if sigma is None:
            sigma = transform_bandwidth(cloud, alpha=args.alpha, k=args.k, seed=args.seed)
        try:
            report.tci = tractable_consistency_index(
                adapter,
                cloud,
                args.d,
                KernelSpec("gaussian", sigma),
                transform_subsample=args.transforms,
                seed=args.seed,
            )
        except LsdrError as exc:
            return _fail(
                "numerical",
                f"consistency index failed while fitting the reconstruction model: {exc}",
                EXIT_NUMERICAL,
            )
        report.extras["tci_bandwidth"] = sigma
    if args.knn:
        emb = adapter.reduce(args.d, cloud)
        tsi, trust, cont = knn_metrics(cloud, emb.coords, args.knn_k)
        report.knn_k = args.knn_k
        report.tsi = tsi
        report.trustworthiness = trust
        report.continuity = cont

    out = Path(args.out)
    write_json(out, report.to_dict())
    header, row = report.csv_row()
    summary = out.with_suffix(".csv")
    summary.write_text(header + "\n" + row + "\n")
    manifest = out.with_suffix(".manifest.json")
    _write_manifest(manifest, "index", argv, args.seed, [str(out), str(summary)], started)
    print(f"wrote {out}")
    return EXIT_OK


def cmd_rerun(args, argv: list[str]) -> int:
    manifest = json.loads(Path(args.manifest).read_text())
    stored = manifest.get("argv")
    if not stored:
        return _fail("input-parse", "manifest does not record an argv", EXIT_PARSE)
    return _dispatch(stored)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lsdr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a synthetic dataset CSV")
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=int, default=None)
    gen.add_argument("--noise", type=float, default=None)
    gen.add_argument("--clusters", type=int, default=None)
    gen.add_argument("--gaps", type=str, default=None, help="colon-separated cluster gaps")
    gen.add_argument("--separation", type=float, default=None)
    gen.add_argument("--turns", type=float, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="dataset.csv")
    gen.set_defaults(func=cmd_generate)

    red = sub.add_parser("reduce", help="reduce a CSV point cloud")
    red.add_argument("input")
    red.add_argument("--algo", choices=("lsdr", "pca"), default="lsdr")
    red.add_argument("--d", type=int, required=True)
    red.add_argument("--alpha", type=float, default=0.95)
    red.add_argument("--k", type=int, default=3)
    red.add_argument("--bandwidth", type=float, default=None)
    red.add_argument("--seed", type=int, default=0)
    red.add_argument("--threads", type=int, default=1)
    red.add_argument("--dump-graph", action="store_true")
    red.add_argument("--plot", action="store_true")
    red.add_argument("--strict", action="store_true")
    red.add_argument("--out", default="embedding.csv")
    red.set_defaults(func=cmd_reduce)

    idx = sub.add_parser("index", help="compute quality indices for an algorithm")
    idx.add_argument("input")
    idx.add_argument("--algo", choices=("lsdr", "pca", "identity"), default="pca")
    idx.add_argument("--d", type=int, default=2)
    idx.add_argument("--alpha", type=float, default=0.95)
    idx.add_argument("--k", type=int, default=3)
    idx.add_argument("--ti", action="store_true")
    idx.add_argument("--tci", action="store_true")
    idx.add_argument("--knn", action="store_true")
    idx.add_argument("--knn-k", type=int, default=5)
    idx.add_argument("--transforms", type=int, default=32)
    idx.add_argument("--bandwidth", type=float, default=None)
    idx.add_argument("--seed", type=int, default=0)
    idx.add_argument("--out", default="indices.json")
    idx.set_defaults(func=cmd_index)

    rer = sub.add_parser("rerun", help="replay a command from its manifest")
    rer.add_argument("manifest")
    rer.set_defaults(func=cmd_rerun)
    return parser


def _dispatch(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except InputParseError as exc:
        return _fail("input-parse", str(exc), EXIT_PARSE)
    except ValidationError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except NumericalError as exc:
        return _fail("numerical", str(exc), EXIT_NUMERICAL)
    except LsdrError as exc:
        return _fail("numerical", str(exc), EXIT_NUMERICAL)


def main(argv: list[str] | None = None) -> int:
    return _dispatch(list(sys.argv[1:]) if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
