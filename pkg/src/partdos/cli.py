"""Command-line surface: dos / compare / sample / blocks / exact / score.

Every command that writes an output file also writes a JSON manifest next to
it (same path + '.manifest.json') with the resolved parameters, the seed and
input digests, so a run can be repeated bit-identically.

Exit codes: 0 success, 2 usage error, 3 input error, 4 non-convergence.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .blocks import (blocks_at_threshold, co_occurrence, default_theta_grid,
                     score as score_blocks, sweep_to_csv, threshold_sweep)
from .entropic import SampleSet, entropic_sample
from .exact import BudgetError, enumerate_labellings, enumerate_structures
from .graph import Graph, GraphFormatError, load_edge_list_file
from .quality import Labelling, QualityError, StructureMatrix, recompute
from .sampler import NULL_SPACES, make_sampler
from .wanglandau import DosGrid, NonConvergenceError, WlConfig, compare, wl_sweep

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NONCONV = 4


class InputError(Exception):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out: Path, command: str, params: dict, inputs: list[Path],
                    t_wall: float) -> None:
    manifest = {
        "command": command,
        "parameters": params,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "tool_version": __version__,
        "wall_clock_s": round(t_wall, 3),
    }
    Path(str(out) + ".manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _emit(text: str, out: str | None, command: str, params: dict,
          inputs: list[Path], t0: float) -> None:
    if out:
        Path(out).write_text(text)
        _write_manifest(Path(out), command, params, inputs, time.time() - t0)
    else:
        sys.stdout.write(text)


def _load_graph(path: str) -> Graph:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"graph file not found: {path}")
    try:
        return load_edge_list_file(p)
    except GraphFormatError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_structure(spec: str | None, k: int, null: str) -> StructureMatrix:
    varying = null.endswith("+B") or null.endswith("+cm+B")
    if spec is None:
        if varying:
            return StructureMatrix.assortative(k)
        raise InputError("--b PRESET|PATH is required for fixed-structure nulls")
    if spec in ("assortative", "disassortative"):
        return StructureMatrix.preset(spec, k)
    p = Path(spec)
    if not p.is_file():
        raise InputError(f"structure matrix file not found: {spec}")
    try:
        bm = StructureMatrix.from_text(p.read_text())
    except QualityError as exc:
        raise InputError(f"{spec}: {exc}") from exc
    if bm.k != k:
        raise InputError(f"structure matrix is {bm.k}x{bm.k}, expected K={k}")
    return bm


def _load_labels(path: str, g: Graph, k: int) -> Labelling:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"labels file not found: {path}")
    by_token: dict[str, int] = {}
    singles: list[int] = []
    for lineno, raw in enumerate(p.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 2:
            by_token[parts[0]] = int(parts[1])
        elif len(parts) == 1:
            singles.append(int(parts[0]))
        else:
            raise InputError(f"{path}:{lineno}: expected 'token label' or 'label'")
    if by_token:
        missing = [t for t in g.tokens if t not in by_token]
        if missing:
            raise InputError(f"{path}: no label for node(s) {missing[:5]}")
        labels = [by_token[t] for t in g.tokens]
    else:
        if len(singles) != g.n_nodes:
            raise InputError(
                f"{path}: {len(singles)} labels for {g.n_nodes} nodes")
        labels = singles
    try:
        return Labelling.from_labels(labels, k)
    except QualityError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _wl_config(args) -> WlConfig:
    try:
        cfg = WlConfig(epsilon=args.epsilon, n_min=args.nmin, n_bins=args.bins,
                       n_s=args.ns, n_o=args.no, n_step=args.nstep,
                       q_lo=args.qlo, q_hi=args.qhi)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.ns >= args.bins:
        cfg = cfg.single_window()
    return cfg


def cmd_dos(args) -> int:
    t0 = time.time()
    g = _load_graph(args.graph)
    if args.k < 2:
        raise InputError("need K >= 2")
    bm = _load_structure(args.b, args.k, args.null)
    cfg = _wl_config(args)
    try:
        sampler = make_sampler(g, args.k, args.null, bm, seed=args.seed,
                               p_swap=args.pswap, p_rewire=args.prewire)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    grid = wl_sweep(sampler, cfg)
    params = {k: v for k, v in vars(args).items() if k != "func"}
    _emit(grid.to_csv(), args.out, "dos", params, [Path(args.graph)], t0)
    return 0


def cmd_compare(args) -> int:
    t0 = time.time()
    grids = []
    for path in (args.dos_a, args.dos_b):
        p = Path(path)
        if not p.is_file():
            raise InputError(f"DOS file not found: {path}")
        try:
            grids.append(DosGrid.from_csv(p.read_text()))
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from exc
    try:
        result = compare(grids[0], grids[1])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    params = {k: v for k, v in vars(args).items() if k != "func"}
    _emit(result.to_csv(), args.out, "compare", params,
          [Path(args.dos_a), Path(args.dos_b)], t0)
    return 0


def cmd_sample(args) -> int:
    t0 = time.time()
    g = _load_graph(args.graph)
    if args.k < 2:
        raise InputError("need K >= 2")
    if not 0 < args.alpha < 1:
        raise InputError("need 0 < alpha < 1")
    if args.m < 1 or args.ncorr < 1:
        raise InputError("need m >= 1 and ncorr >= 1")
    bm = _load_structure(args.b, args.k, args.null)
    varying = "B" in args.null.split("+")
    try:
        sampler = make_sampler(g, args.k, args.null, bm, seed=args.seed,
                               p_swap=args.pswap, p_rewire=args.prewire)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sample_set = entropic_sample(sampler, alpha=args.alpha, m=args.m,
                                 n_corr=args.ncorr, varying_b=varying)
    if sample_set.exhausted:
        sys.stderr.write(
            f"warning: step budget exhausted after {len(sample_set.records)} "
            f"of {args.m} records\n")
    params = {k: v for k, v in vars(args).items() if k != "func"}
    _emit(sample_set.to_jsonl(), args.out, "sample", params, [Path(args.graph)], t0)
    return 0


def cmd_blocks(args) -> int:
    t0 = time.time()
    p = Path(args.samples)
    if not p.is_file():
        raise InputError(f"samples file not found: {args.samples}")
    sample_set = SampleSet.from_jsonl(p.read_text())
    if not sample_set.records:
        raise InputError(f"{args.samples}: no sample records")
    tokens = None
    inputs = [p]
    if args.graph:
        g = _load_graph(args.graph)
        tokens = g.tokens
        inputs.append(Path(args.graph))
    lm = sample_set.labels_matrix()
    if tokens is not None and len(tokens) != lm.shape[1]:
        raise InputError("graph node count does not match the samples")
    co = co_occurrence(lm)
    params = {k: v for k, v in vars(args).items() if k != "func"}
    if args.w_out:
        Path(args.w_out).write_text(co.to_csv())
    if args.sweep:
        rows = threshold_sweep(co, lm, default_theta_grid())
        sweep_out = args.sweep_out or (args.out + ".sweep.csv" if args.out else None)
        _emit(sweep_to_csv(rows), sweep_out, "blocks-sweep", params, inputs, t0)
    if args.theta is not None:
        if not 0 <= args.theta < 1:
            raise InputError("need 0 <= theta < 1")
        bs = blocks_at_threshold(co, args.theta)
        assign = bs.assignment()
        comp = float(np.mean([score_blocks(assign, s).c for s in lm]))
        names = tokens if tokens is not None else [str(i) for i in range(co.n_nodes)]
        doc = {"theta": args.theta,
               "blocks": [[names[i] for i in blk] for blk in bs.blocks],
               "mean_completeness": comp}
        _emit(json.dumps(doc) + "\n", args.out, "blocks", params, inputs, t0)
    if not args.sweep and args.theta is None:
        raise InputError("nothing to do: pass --theta and/or --sweep")
    return 0


def cmd_exact(args) -> int:
    t0 = time.time()
    g = _load_graph(args.graph)
    try:
        if args.structures:
            if not args.labels:
                raise InputError("--structures needs --labels FILE")
            labelling = _load_labels(args.labels, g, args.k)
            dos = enumerate_structures(g, labelling, args.k)
        else:
            bm = _load_structure(args.b or "assortative", args.k, "labels")
            dos = enumerate_labellings(g, args.k, bm, budget=args.budget)
    except BudgetError as exc:
        raise InputError(str(exc)) from exc
    sys.stderr.write(f"enumerated {dos.total} states"
                     + (f" ({dos.n_set_partitions} set partitions)\n"
                        if dos.n_set_partitions is not None else "\n"))
    params = {k: v for k, v in vars(args).items() if k != "func"}
    _emit(dos.to_csv(), args.out, "exact", params, [Path(args.graph)], t0)
    return 0


def cmd_score(args) -> int:
    g = _load_graph(args.graph)
    labelling = _load_labels(args.labels, g, args.k)
    bm = _load_structure(args.b, args.k, "labels")
    state = recompute(g, labelling, bm)
    print("%.6f" % state.q)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="partdos",
        description="Density of states of network-partition quality")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, with_null=True):
        p.add_argument("--graph", required=True, help="edge-list file")
        p.add_argument("--k", type=int, required=True, help="number of groups")
        if with_null:
            p.add_argument("--null", choices=NULL_SPACES, default="labels")
        p.add_argument("--b", help="structure matrix file or preset "
                                   "(assortative, disassortative)")
        p.add_argument("--pswap", type=float, default=None)
        p.add_argument("--prewire", type=float, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1,
                       help="window parallelism cap (windows currently run "
                            "sequentially; results are thread-count invariant)")
        p.add_argument("--out", help="output path (stdout if omitted)")

    p = sub.add_parser("dos", help="estimate the DOS via Wang-Landau")
    add_common(p)
    p.add_argument("--bins", type=int, default=200)
    p.add_argument("--ns", type=int, default=20)
    p.add_argument("--no", type=int, default=10)
    p.add_argument("--nstep", type=int, default=10)
    p.add_argument("--epsilon", type=float, default=1e-5)
    p.add_argument("--nmin", type=int, default=10_000)
    p.add_argument("--qlo", type=float, default=None)
    p.add_argument("--qhi", type=float, default=None)
    p.set_defaults(func=cmd_dos)

    p = sub.add_parser("compare", help="per-bin log ratio of two DOS files")
    p.add_argument("dos_a")
    p.add_argument("dos_b")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sample", help="entropic sampling of high-Q states")
    add_common(p)
    p.add_argument("--alpha", type=float, default=0.99)
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--ncorr", type=int, default=10_000)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("blocks", help="building blocks from a sample file")
    p.add_argument("samples", help="JSON-lines sample file")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--sweep", action="store_true")
    p.add_argument("--sweep-out", dest="sweep_out")
    p.add_argument("--w-out", dest="w_out", help="write the co-occurrence matrix CSV")
    p.add_argument("--graph", help="edge-list file, for original node tokens")
    p.add_argument("--out")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("exact", help="exact DOS by enumeration")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--b", help="structure matrix file or preset")
    p.add_argument("--structures", action="store_true",
                   help="enumerate structure matrices instead of labellings")
    p.add_argument("--labels", help="labelling file (with --structures)")
    p.add_argument("--budget", type=int, default=10**8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("score", help="quality Q of one labelling")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_score)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except NonConvergenceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NONCONV


if __name__ == "__main__":
    sys.exit(main())
