"""Command-line front end: instance generation, bound/sweep analysis and
the batch drivers behind the scatter and w_L-sweep result tables.

Commands write JSON/CSV only; figures are produced by a separate package
that consumes these files.  All outputs are deterministic for fixed seed
and flags, and every file is written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .bounds import build_report, local_minimum, report_to_json
from .errors import (NumericalError, ParameterError, QptBoundsError,
                     ValidationError)
from .graph import induced_subgraph
from .hamiltonian import (AnnealInstance, Normalization, instance_from_json,
                          instance_to_json)
from .instances import (LabeledInstance, ToyParams, WmisParams, build_wmis,
                        gen_toy, verify_wmis_counts)
from .ndpt import predict_crossing_ndpt
from .spectral import fidelity_jump, sweep, sweep_to_csv
from .symmetry import (equitable_partition, gershgorin_bound,
                       improved_lambda_upper, quotient_matrix)

log = logging.getLogger("qpt_bounds")


def _setup_logging():
    level = os.environ.get("QPT_BOUNDS_LOG", "WARNING").upper()
    logging.basicConfig(stream=sys.stderr,
                        level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _write_atomic(path: Path, text: str):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _write_json(path: Path, obj):
    _write_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.12g}"


def _grid(n: int) -> np.ndarray:
    if n < 2:
        raise ParameterError("--grid must be at least 2")
    return np.linspace(0.0, 1.0, n)


def _labeled_from_files(instance_path: Path, provenance_path: Path | None,
                        unnormalized: bool) -> LabeledInstance:
    obj = json.loads(instance_path.read_text())
    if unnormalized:
        obj["normalization"] = "none"
    energies = obj.get("energies")
    if isinstance(energies, dict) and "toy" in energies:
        li = gen_toy(ToyParams.from_json(energies["toy"]))
    elif isinstance(energies, dict) and "wmis" in energies:
        li = build_wmis(WmisParams.from_json(energies["wmis"]))
    else:
        inst = instance_from_json(obj)
        if provenance_path is None or not provenance_path.exists():
            raise ValidationError(
                "explicit-energy instances need a provenance file naming the "
                "local-minimum set and global node")
        prov = json.loads(provenance_path.read_text())
        lm = local_minimum(inst.driver, prov["v"], inst.target.energies,
                           epsilon=float(prov.get("epsilon", np.inf)))
        return LabeledInstance(inst, int(prov["global_node"]), lm, prov)
    if unnormalized != (li.instance.normalization is Normalization.NONE):
        norm = Normalization.NONE if unnormalized else Normalization.PER_D
        li = dataclasses.replace(
            li, instance=AnnealInstance(li.instance.driver, li.instance.target, norm))
    return li


def _with_symmetry(li: LabeledInstance) -> LabeledInstance:
    sub, _ = induced_subgraph(li.instance.driver, li.local_min.v)
    lam_hat = improved_lambda_upper(sub)
    lm = dataclasses.replace(li.local_min, symmetry_bound=lam_hat)
    return dataclasses.replace(li, local_min=lm)


def _symmetry_block(li: LabeledInstance) -> dict:
    """Quotient data for the report; the orbit partition is approximated
    by the coarsest equitable partition, flagged as such."""
    sub, _ = induced_subgraph(li.instance.driver, li.local_min.v)
    part = equitable_partition(sub)
    q = quotient_matrix(sub, part)
    return {
        "classes": part.sizes(),
        "B": q.entries.tolist(),
        "gershgorin": gershgorin_bound(q),
        "lambda_upper": li.local_min.symmetry_bound,
        "method": "equitable_partition",
    }


def analyze_labeled(li: LabeledInstance, grid_n: int = 401,
                    use_symmetry: bool = False, with_ndpt: bool = False,
                    do_sweep: bool = True, seed: int = 0,
                    jump_threshold: float = 0.5):
    """Bounds report (+ optional sweep) for a labelled instance.

    Returns (report_json_dict, sweep_or_None).
    """
    sym_block = None
    if use_symmetry:
        li = _with_symmetry(li)
        sym_block = _symmetry_block(li)
    ndpt_val = None
    ndpt_local_only = None
    if with_ndpt:
        pred = predict_crossing_ndpt(li)
        ndpt_val = pred.s_cross
        ndpt_local_only = pred.s_cross_local_only
    rep = build_report(li.instance, li.local_min, use_symmetry=use_symmetry,
                       ndpt_s_cross=ndpt_val)
    out = report_to_json(rep)
    out["ndpt_s_cross_local_only"] = ndpt_local_only
    out["symmetry"] = sym_block
    out["seed"] = li.provenance.get("params", {}).get("seed")
    out["generator"] = li.provenance.get("generator")
    # line constants for the figure component (it must not recompute physics)
    inst = li.instance
    out["profiles"] = {
        "c": 1.0 if inst.normalization is Normalization.PER_D else float(inst.driver.d),
        "d": inst.driver.d,
        "mean_energy": inst.target.mean_energy,
        "e0_t": inst.target.ground_energy(),
        "e_v_t": li.local_min.e_v_target,
        "phi": float(li.local_min.phi),
        "dmax": li.local_min.dmax,
    }
    swp = None
    if do_sweep:
        swp = sweep(li.instance, _grid(grid_n), seed=seed)
        out["s_min"] = swp.s_min
        out["g_min"] = swp.g_min
        out["fidelity_jump"] = fidelity_jump(swp, jump_threshold)
    else:
        out["s_min"] = out["g_min"] = out["fidelity_jump"] = None
    return out, swp


def _cmd_gen_toy(args) -> int:
    params = ToyParams(n=args.n, d=args.d, epsilon=args.epsilon,
                       target_v_size=args.v_size, seed=args.seed)
    li = gen_toy(params)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = f"toy_s{args.seed}"
    norm = "none" if args.unnormalized else "per_d"
    obj = instance_to_json(li.instance, energies_obj={"toy": params.to_json()})
    obj["normalization"] = norm
    _write_json(outdir / f"{stem}.json", obj)
    _write_json(outdir / f"{stem}.provenance.json", li.provenance)
    log.info("wrote %s", outdir / f"{stem}.json")
    print(outdir / f"{stem}.json")
    return 0


def _cmd_build_wmis(args) -> int:
    params = WmisParams(w_l=args.w_l)
    li = build_wmis(params)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = f"wmis_wl{args.w_l:g}"
    obj = instance_to_json(li.instance, energies_obj={"wmis": params.to_json()})
    _write_json(outdir / f"{stem}.json", obj)
    _write_json(outdir / f"{stem}.provenance.json", li.provenance)
    _write_json(outdir / f"{stem}.verify.json", verify_wmis_counts(li).to_json())
    print(outdir / f"{stem}.json")
    return 0


def _cmd_analyze(args) -> int:
    instance_path = Path(args.instance)
    if not instance_path.exists():
        raise ParameterError(f"instance file {instance_path} not found")
    prov_path = (Path(args.provenance) if args.provenance else
                 instance_path.with_name(
                     instance_path.name.replace(".json", ".provenance.json")))
    li = _labeled_from_files(instance_path, prov_path, args.unnormalized)
    report, swp = analyze_labeled(
        li, grid_n=args.grid, use_symmetry=args.symmetry, with_ndpt=args.ndpt,
        do_sweep=not args.no_sweep, seed=args.seed,
        jump_threshold=args.jump_threshold)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = instance_path.name.removesuffix(".json")
    _write_json(outdir / f"{stem}.report.json", report)
    if swp is not None:
        _write_atomic(outdir / f"{stem}.sweep.csv", sweep_to_csv(swp))
    print(outdir / f"{stem}.report.json")
    return 0


def _wmis_row(task) -> dict:
    w_l, grid_n, skip_exact, with_ndpt, seed = task
    li = _with_symmetry(build_wmis(WmisParams(w_l=w_l)))
    rep = build_report(li.instance, li.local_min, use_symmetry=True)
    ndpt_val = None
    if with_ndpt:
        ndpt_val = predict_crossing_ndpt(li).s_cross
    row = {
        "w_l": w_l,
        "delta_e_t": rep.delta_e_t,
        "s_min_exact": None,
        "bound_lo": float(rep.s_star_lower),
        "bound_hi": float(rep.s_star_upper),
        "bound_hi_sym": float(rep.s_star_upper_sym),
        "ndpt_s_cross": ndpt_val,
    }
    if not skip_exact:
        swp = sweep(li.instance, _grid(grid_n), seed=seed)
        row["s_min_exact"] = swp.s_min
        row["g_min"] = swp.g_min
    return row


WMIS_CSV_HEADER = "w_l,delta_e_t,s_min_exact,bound_lo,bound_hi,bound_hi_sym,ndpt_s_cross"


def _cmd_sweep_wmis(args) -> int:
    w_ls = _parse_float_grid(args.w_l_grid)
    tasks = [(w, args.grid, args.skip_exact, args.ndpt, args.seed) for w in w_ls]
    rows = _run_batch(_wmis_row, tasks, args.jobs)
    lines = [WMIS_CSV_HEADER]
    for row in rows:
        lines.append(",".join(_fmt(row[k]) for k in WMIS_CSV_HEADER.split(",")))
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_atomic(outdir / "wmis_sweep.csv", "\n".join(lines) + "\n")
    print(outdir / "wmis_sweep.csv")
    return 0


def _scatter_row(task) -> dict:
    seed, n, d, v_size, epsilon, grid_n, with_ndpt, use_symmetry = task
    li = gen_toy(ToyParams(n=n, d=d, epsilon=epsilon,
                           target_v_size=v_size, seed=seed))
    report, _ = analyze_labeled(li, grid_n=grid_n, use_symmetry=use_symmetry,
                                with_ndpt=with_ndpt, do_sweep=True, seed=seed)
    report["seed"] = seed
    return report


SCATTER_CSV_HEADER = ("seed,class,s_min,g_min,bound_lo,bound_hi,s_prime,"
                      "delta_e_t,ndpt_s_cross,fidelity_jump")


def _cmd_scatter(args) -> int:
    seeds = _parse_int_list(args.seeds)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    tasks = [(s, args.n, args.d, args.v_size, args.epsilon, args.grid,
              args.ndpt, args.symmetry) for s in seeds]
    reports = _run_batch(_scatter_row, tasks, args.jobs)
    lines = [SCATTER_CSV_HEADER]
    for rep in reports:
        _write_json(outdir / f"toy_s{rep['seed']}.report.json", rep)
        lines.append(",".join([
            str(rep["seed"]), rep["class"], _fmt(rep["s_min"]), _fmt(rep["g_min"]),
            _fmt(rep["s_star"][0]), _fmt(rep["s_star"][1]), _fmt(rep["s_prime"]),
            _fmt(rep["delta_e_t"]), _fmt(rep["ndpt_s_cross"]),
            _fmt(rep["fidelity_jump"]),
        ]))
    _write_atomic(outdir / "scatter.csv", "\n".join(lines) + "\n")
    print(outdir / "scatter.csv")
    return 0


def _run_batch(fn, tasks, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def _parse_float_grid(spec: str) -> list[float]:
    """Parse '1.5:1.95:0.05' (inclusive) or a comma list '1.5,1.8'."""
    if ":" in spec:
        lo_s, hi_s, step_s = spec.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
        if step <= 0 or hi < lo:
            raise ParameterError(f"bad grid spec {spec!r}")
        count = int(round((hi - lo) / step)) + 1
        return [round(lo + k * step, 12) for k in range(count)]
    return [float(x) for x in spec.split(",") if x]


def _parse_int_list(spec: str) -> list[int]:
    """Parse '1..50' (inclusive range) or a comma list '3,5,9'."""
    if ".." in spec:
        lo, hi = spec.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in spec.split(",") if x]


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qpt-bounds",
        description="Graph-theoretic bounds on first-order transitions "
                    "along annealing schedules")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, sweep_flags=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--unnormalized", action="store_true",
                       help="use the unnormalized driver convention")
        if sweep_flags:
            p.add_argument("--grid", type=int, default=401,
                           help="number of schedule grid points")
            p.add_argument("--symmetry", action="store_true",
                           help="tighten the degree bound by graph symmetries")
            p.add_argument("--ndpt", action="store_true",
                           help="include the second-order NDPT prediction")
            p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("gen-toy", help="generate a toy landscape instance")
    common(p, sweep_flags=False)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--v-size", type=int, default=None)
    p.set_defaults(fn=_cmd_gen_toy)

    p = sub.add_parser("build-wmis", help="build the 15-qubit WMIS instance")
    common(p, sweep_flags=False)
    p.add_argument("--w-l", type=float, default=1.8)
    p.set_defaults(fn=_cmd_build_wmis)

    p = sub.add_parser("analyze", help="bounds report + spectrum sweep")
    common(p)
    p.add_argument("--instance", required=True)
    p.add_argument("--provenance", default=None)
    p.add_argument("--no-sweep", action="store_true")
    p.add_argument("--jump-threshold", type=float, default=0.5)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("sweep-wmis", help="bounds vs exact s_min over a w_L grid")
    common(p)
    p.add_argument("--w-l-grid", required=True,
                   help="lo:hi:step (inclusive) or comma list")
    p.add_argument("--skip-exact", action="store_true",
                   help="bounds-only CSV, no diagonalization")
    p.set_defaults(fn=_cmd_sweep_wmis)

    p = sub.add_parser("scatter", help="batch-analyze toy instances")
    common(p)
    p.add_argument("--seeds", required=True, help="lo..hi or comma list")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--v-size", type=int, default=None)
    p.set_defaults(fn=_cmd_scatter)
    return ap


def main(argv=None) -> int:
    _setup_logging()
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ParameterError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc} (residuals={exc.residuals})",
              file=sys.stderr)
        return 1
    except QptBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
