"""Batch command line: ``qtherm <subcommand> [options]``.

Every subcommand prints its main artifact to stdout. With ``--out DIR`` the
artifacts are also written there (CSV is the contract, SVG a convenience).
Exit status 0 on success, 2 on any validation or input error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import composite, criteria, equilibrium, fundamental, hamiltonians, shape
from .output import csv_text, dumps_json, svg_line_chart, write_text
from .spectral import HermitianOperator, eigvalsh


class UsageError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty number list")
    return vals


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QTHERM_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"QTHERM_SEED must be an integer, got {env!r}") from None


def _emit(args, name: str, text: str, stream: bool = True):
    if args.out:
        write_text(Path(args.out) / name, text)
    if stream:
        sys.stdout.write(text)


def _box(values: list[float]) -> hamiltonians.BoxShape:
    if len(values) != 3:
        raise UsageError(f"a box needs three sides b,c,d, got {len(values)}")
    return hamiltonians.BoxShape(*values)


def cmd_spectrum(args):
    if args.box:
        if (args.max_energy is None) == (args.max_count is None):
            raise UsageError("--box needs exactly one of --max-energy or --max-count")
        spec = hamiltonians.box_spectrum(_box(args.box), args.max_energy, args.max_count, beta=args.beta)
        header = ["index", "nx", "ny", "nz", "energy"]
        rows = [(i, *q, e) for i, (q, e) in enumerate(zip(spec.quantum_numbers.tolist(), spec.energies))]
        if args.beta is not None:
            sys.stderr.write(f"tail_weight_bound at beta={args.beta}: {spec.tail_weight_bound:.3e}\n")
    elif args.well_csv:
        v = hamiltonians.load_potential_csv(args.well_csv)
        well = hamiltonians.GridWell(len(v), args.step, v)
        w = eigvalsh(hamiltonians.fd_well(well))
        n = len(w) if args.levels is None else min(args.levels, len(w))
        header, rows = ["index", "energy"], [(i, e) for i, e in enumerate(w[:n])]
    elif args.spin_gaps:
        h = hamiltonians.spin_system(len(args.spin_gaps) + 1, args.spin_gaps)
        header, rows = ["index", "energy"], [(i, e) for i, e in enumerate(np.diag(h.matrix).real)]
    else:
        raise UsageError("spectrum needs one of --box, --well-csv or --spin-gaps")
    _emit(args, "spectrum.csv", csv_text(header, rows))


def cmd_gibbs(args):
    complete = not args.truncated
    if (args.beta is None) == (args.energy is None):
        raise UsageError("gibbs needs exactly one of --beta or --energy")
    beta = args.beta
    if beta is None:
        beta = equilibrium.beta_for_energy(args.levels, args.energy, complete=complete)
    st = equilibrium.canonical_state(args.levels, beta, complete=complete, k=args.k)
    gibbs_resid = abs(st.entropy - args.k * (st.beta * st.energy + st.log_partition)) if math.isfinite(st.beta) else 0.0
    report = {
        "command": "gibbs",
        "k": args.k,
        "beta": st.beta,
        "complete": complete,
        "levels": list(st.energies),
        "occupations": list(st.occupations),
        "log_partition": st.log_partition,
        "energy": st.energy,
        "entropy": st.entropy,
        "temperature": st.temperature,
        "gibbs_identity_residual": gibbs_resid,
    }
    _emit(args, "gibbs.json", dumps_json(report))


def cmd_composite(args):
    k = args.k
    beta_c = args.beta_s if args.beta_c is None else args.beta_c
    h_s = HermitianOperator(np.diag(args.levels_s))
    h_c = HermitianOperator(np.diag(args.levels_c))
    spec_err = 0.0
    pair_sums = np.sort(composite.compose_levels(args.levels_s, args.levels_c).energies.ravel())
    if h_s.dim * h_c.dim <= composite.DENSE_DIM_CAP:
        spec_err = float(np.max(np.abs(eigvalsh(composite.compose_hamiltonians(h_s, h_c)) - pair_sums)))
    st_s = equilibrium.canonical_state(args.levels_s, args.beta_s, complete=True, k=k)
    st_c = equilibrium.canonical_state(args.levels_c, beta_c, complete=True, k=k)
    occ = composite.product_state(st_s, st_c)
    T = st_s.temperature
    resid = composite.gibbs_ratio_residual(occ, T, k=k, seed=_seed(args)) if math.isfinite(T) and T != 0 else math.nan
    mu_s = args.mu_s if args.mu_s is not None else None
    mu_c = args.mu_c if args.mu_c is not None else None
    report = {
        "command": "composite",
        "seed": _seed(args),
        "k": k,
        "beta_s": st_s.beta,
        "beta_c": st_c.beta,
        "dim_s": h_s.dim,
        "dim_c": h_c.dim,
        "spectrum_error": spec_err,
        "entropy_s": st_s.entropy,
        "entropy_c": st_c.entropy,
        "entropy_composite": occ.entropy,
        "entropy_additivity_error": abs(occ.entropy - st_s.entropy - st_c.entropy),
        "gibbs_ratio_residual": resid,
        "flow": composite.flow_direction(st_s, st_c).value,
        "equilibrium": composite.mutual_equilibrium(st_s, st_c, mu_s, mu_c),
    }
    _emit(args, "composite.json", dumps_json(report))


def cmd_shape_trace(args):
    traj, opts = shape.load_trajectory(args.config)
    m = args.retained if args.retained is not None else opts["retained_levels"]
    tr = shape.trajectory_run(traj, retained_levels=m, tail_tol=opts["tail_tol"])
    text = csv_text(tr.header(), tr.rows())
    v0 = traj.volume
    loop = float(np.nanmax(np.abs(tr.occupations[-1] - tr.occupations[0]))) if traj.shapes[0] == traj.shapes[-1] else "not_closed"
    summary = {
        "command": "shape-trace",
        "mode": traj.mode,
        "samples": len(tr),
        "volume": v0,
        "max_volume_error": max(abs(s.volume() - v0) / v0 for s in traj.shapes),
        "max_occupation_sum_error": float(np.max(np.abs(tr.full_occupation_sums - 1))),
        "closed_loop_deviation": loop,
        "max_reallocation_step": float(tr.reallocation_step.max()),
        "csv": "trace.csv",
    }
    if args.out:
        if not args.no_svg:
            svg = svg_line_chart(tr.times, {"entropy S(t)": tr.entropy, "reallocation step": tr.reallocation_step}, "constant-volume shape trajectory")
            write_text(Path(args.out) / "trace.svg", svg)
            summary["svg"] = "trace.svg"
        write_text(Path(args.out) / "trace_summary.json", dumps_json(summary))
    _emit(args, "trace.csv", text)


def cmd_shape_gap(args):
    a, b = _box(args.shape_a), _box(args.shape_b)
    if args.energies:
        grid = args.energies
    else:
        grid = np.geomspace(args.emin, args.emax, args.points).tolist()
    rows = shape.semiclassical_scan(a, b, grid, tail_tol=args.tail_tol)
    text = csv_text(["energy", "entropy_a", "entropy_b", "gap", "relative_gap"], [(r.energy, r.entropy_a, r.entropy_b, r.gap, r.relative_gap) for r in rows])
    _emit(args, "shape_gap.csv", text)


def cmd_criteria(args):
    rep = criteria.run_criteria_suite(args.dims, args.trials, _seed(args))
    _emit(args, "criteria.json", dumps_json(rep.to_dict()))
    if args.out:
        write_text(Path(args.out) / "criteria.txt", rep.to_text() + "\n")
    return 0 if rep.all_pass else 1


def cmd_fundamental(args):
    energies = np.linspace(args.emin, args.emax, args.points)
    curve = fundamental.ideal_gas_curve(energies, args.n, args.V, args.c0, args.k)
    header = ["energy", "entropy", "inverse_temperature", "pressure", "total_potential"]
    rel = fundamental.FundamentalRelation.ideal_gas(args.c0, args.k)
    ns = [0.0] + [2.0**-j for j in range(args.halvings, -1, -1)]
    mu_rows = [(n, fundamental.total_potential_at_temperature(rel, args.T, n, args.V) / (args.k * args.T)) for n in ns]
    if args.out:
        write_text(Path(args.out) / "total_potential.csv", csv_text(["n", "mu_over_kT"], mu_rows))
    _emit(args, "fundamental.csv", f"# reduced units m=h=k=1, c0={args.c0!r}\n" + csv_text(header, curve))


def cmd_spin(args):
    eps = args.edge
    if not (0 < eps < 0.5) or args.points < 2:
        raise UsageError("need 0 < --edge < 0.5 and --points >= 2")
    # mirror the lower half so f and 1 - f pairs (and f = 1/2 for odd counts) are exact
    low = np.linspace(eps, 0.5, (args.points + 1) // 2 + (args.points % 2 == 0))
    if args.points % 2:
        f = np.concatenate([low, 1 - low[-2::-1]])
    else:
        low = low[:-1]
        f = np.concatenate([low, 1 - low[::-1]])
    curve = fundamental.spin_curve(args.N, args.gap, f, args.k)
    text = csv_text(["filling", "energy", "entropy", "inverse_temperature"], curve)
    if args.out:
        svg = svg_line_chart(curve[:, 0], {"S / k": curve[:, 2], "1/T": curve[:, 3]}, "spin lattice fundamental relation")
        write_text(Path(args.out) / "spin.svg", svg)
    _emit(args, "spin.csv", text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory for artifacts")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (falls back to $QTHERM_SEED, then 0)")
    common.add_argument("--k", type=float, default=1.0, help="Boltzmann constant (default 1)")

    p = argparse.ArgumentParser(prog="qtherm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="box, grid-well or spin ladder spectra")
    s.add_argument("--box", type=_floats, help="sides b,c,d")
    s.add_argument("--max-energy", type=float)
    s.add_argument("--max-count", type=int)
    s.add_argument("--beta", type=float, help="report the Weyl tail weight at this beta")
    s.add_argument("--well-csv", help="potential values, one per line")
    s.add_argument("--step", type=float, default=0.01)
    s.add_argument("--levels", type=int)
    s.add_argument("--spin-gaps", type=_floats)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("gibbs", parents=[common], help="canonical state and entropy of a level list")
    s.add_argument("--levels", type=_floats, required=True)
    s.add_argument("--beta", type=float)
    s.add_argument("--energy", type=float)
    s.add_argument("--truncated", action="store_true", help="levels are a truncation of an unbounded spectrum")
    s.set_defaults(func=cmd_gibbs)

    s = sub.add_parser("composite", parents=[common], help="two-phase composition checks")
    s.add_argument("--levels-s", type=_floats, required=True)
    s.add_argument("--levels-c", type=_floats, required=True)
    s.add_argument("--beta-s", type=float, required=True)
    s.add_argument("--beta-c", type=float)
    s.add_argument("--mu-s", type=_floats, help="total potentials of phase s (use -inf for absent)")
    s.add_argument("--mu-c", type=_floats)
    s.set_defaults(func=cmd_composite)

    s = sub.add_parser("shape-trace", parents=[common], help="quasistatic constant-volume shape trajectory")
    s.add_argument("--config", required=True, help="trajectory JSON")
    s.add_argument("--retained", type=int)
    s.add_argument("--no-svg", action="store_true")
    s.set_defaults(func=cmd_shape_trace)

    s = sub.add_parser("shape-gap", parents=[common], help="entropy gap between equal-volume shapes vs energy")
    s.add_argument("--shape-a", type=_floats, default=[1.0, 1.0, 1.0])
    s.add_argument("--shape-b", type=_floats, default=[2.0, 1.0, 0.5])
    s.add_argument("--energies", type=_floats)
    s.add_argument("--emin", type=float, default=10.0)
    s.add_argument("--emax", type=float, default=1000.0)
    s.add_argument("--points", type=int, default=7)
    s.add_argument("--tail-tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_shape_gap)

    s = sub.add_parser("criteria", parents=[common], help="nine entropy criteria suite")
    s.add_argument("--dims", type=_ints, default=[2, 3, 4, 8, 16])
    s.add_argument("--trials", type=int, default=20)
    s.set_defaults(func=cmd_criteria)

    s = sub.add_parser("fundamental", parents=[common], help="ideal-gas fundamental relation curves")
    s.add_argument("--n", type=float, default=1.0)
    s.add_argument("--V", type=float, default=1.0)
    s.add_argument("--T", type=float, default=1.0, help="temperature for the mu(n) sweep")
    s.add_argument("--c0", type=float, default=1.0)
    s.add_argument("--emin", type=float, default=0.5)
    s.add_argument("--emax", type=float, default=10.0)
    s.add_argument("--points", type=int, default=50)
    s.add_argument("--halvings", type=int, default=100)
    s.set_defaults(func=cmd_fundamental)

    s = sub.add_parser("spin", parents=[common], help="spin lattice S(E) and 1/T(E), both zero-temperature ends")
    s.add_argument("--N", type=float, default=1.0)
    s.add_argument("--gap", type=float, default=1.0)
    s.add_argument("--points", type=int, default=201)
    s.add_argument("--edge", type=float, default=1e-6, help="closest filling to 0 and 1")
    s.set_defaults(func=cmd_spin)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code = args.func(args)
    except (ValueError, OSError, KeyError, TypeError, OverflowError) as exc:
        sys.stderr.write(f"qtherm {args.command}: error: {exc}\n")
        return 2
    return 0 if code is None else code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
