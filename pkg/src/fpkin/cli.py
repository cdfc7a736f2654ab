"""Command-line front end.

Subcommands
-----------
equilibrium
    Solve the density constraint for one parameter set and print the
    solved constant, energy, entropy, free energy and ordering verdicts.
sweep
    Solve over a k-range and write a CSV table with one row per k plus
    per-inequality verdict columns.
simulate
    Run the phase-space solver from a config file and write the
    diagnostics CSV (and optionally the final field as a CSV matrix).
verify
    Execute the full verification suite and print a pass/fail table.

Exit codes: 0 success, 1 verification failure, 2 supercritical density,
3 I/O error, 4 solver/step failure.
"""

import argparse
import configparser
import math
import sys

import numpy as np

from . import __version__, equilibrium, kinetics, verify

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_SUPERCRITICAL = 2
EXIT_IO = 3
EXIT_SOLVER = 4

_SWEEP_COLUMNS = (
    "k", "status", "C_k", "kC", "E_q", "S_q", "F_q", "C_0", "E_c", "S_c",
    "F_c", "residual", "in_window", "energy_ok", "bounds_ok", "entropy_ok",
    "free_energy_ok",
)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _parse_cell(text):
    if text == "":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return float(text)
    except ValueError:
        return text


def write_sweep_csv(path, rows, meta=None):
    with open(path, "w", encoding="utf-8") as fh:
        for key, val in (meta or {}).items():
            fh.write(f"# {key} = {val}\n")
        fh.write(",".join(_SWEEP_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(getattr(row, c)) for c in _SWEEP_COLUMNS)
                     + "\n")


def read_sweep_csv(path):
    """Parse a sweep CSV back into dictionaries (column -> value)."""
    out = []
    with open(path, encoding="utf-8") as fh:
        header = None
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
                continue
            cells = line.split(",")
            row = dict(zip(header, (_parse_cell(c) for c in cells)))
            row["status"] = str(row["status"])
            out.append(row)
    return out


def write_diagnostics_csv(path, records, meta=None):
    with open(path, "w", encoding="utf-8") as fh:
        for key, val in (meta or {}).items():
            fh.write(f"# {key} = {val}\n")
        fh.write(kinetics.DiagnosticRecord.CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.csv_row() + "\n")


def write_field_csv(path, fld, meta=None):
    with open(path, "w", encoding="utf-8") as fh:
        for key, val in (meta or {}).items():
            fh.write(f"# {key} = {val}\n")
        for row in fld.values:
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


def load_config(path) -> kinetics.SimulationConfig:
    """Read the flat key-value run configuration (INI sections)."""
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    cfg = kinetics.SimulationConfig()

    def get(section, key, conv, default):
        if parser.has_option(section, key):
            return conv(parser.get(section, key))
        return default

    def parse_dt(text):
        return None if text.strip().lower() == "auto" else float(text)

    return kinetics.SimulationConfig(
        x_nodes=get("grid", "x_nodes", int, cfg.x_nodes),
        v_nodes=get("grid", "v_nodes", int, cfg.v_nodes),
        length=get("grid", "length", float, cfg.length),
        v_max=get("grid", "v_max", float, cfg.v_max),
        k=get("model", "k", float, cfg.k),
        rho=get("model", "rho", float, cfg.rho),
        dt=get("time", "dt", parse_dt, cfg.dt),
        t_final=get("time", "t_final", float, cfg.t_final),
        output_interval=get("time", "output_interval", float,
                            cfg.output_interval),
        boundary=get("boundary", "kind", str, cfg.boundary),
        initial=get("initial", "kind", str, cfg.initial),
        amplitude=get("initial", "amplitude", float, cfg.amplitude),
        mode=get("initial", "mode", int, cfg.mode),
        v_shift=get("initial", "v_shift", float, cfg.v_shift),
    )


def config_output_paths(path):
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    diag = parser.get("output", "diagnostics", fallback=None)
    fieldp = parser.get("output", "field", fallback=None)
    return diag, fieldp


def cmd_equilibrium(args):
    params = equilibrium.ModelParams(k=args.k, n=args.n, volume=args.vol,
                                     rho=args.rho)
    try:
        sol = equilibrium.solve_normalization(params)
    except equilibrium.SupercriticalDensityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SUPERCRITICAL
    except equilibrium.SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    cls = sol.classical
    print(f"k = {params.k:g}, n = {params.n}, volume = {params.volume:g}, "
          f"rho = {params.rho:g}")
    print(f"C_k      = {sol.C_k:.17g}")
    print(f"k*C_k    = {sol.kC:.17g}")
    print(f"residual = {sol.residual:.3e}")
    print(f"E_q = {sol.E_q:.17g}   (classical E_c = {cls.E:.17g})")
    print(f"S_q = {sol.S_q:.17g}   (classical S_c = {cls.S:.17g})")
    print(f"F_q = {sol.F_q:.17g}   (classical F_c = {cls.F:.17g})")
    if params.k > 0:
        side = "boson < classical" if sol.E_q < cls.E else "boson >= classical (unexpected)"
    elif params.k < 0:
        side = "fermion > classical" if sol.E_q > cls.E else "fermion <= classical (unexpected)"
    else:
        side = "classical"
    print(f"energy verdict: {side}")
    if args.out:
        row = equilibrium.sweep([params.k], n=params.n, volume=params.volume,
                                rho=params.rho)[0]
        try:
            write_sweep_csv(args.out, [row], meta=_param_meta(params))
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote {args.out}")
    return EXIT_OK


def _param_meta(params):
    return {"k": params.k, "n": params.n, "volume": params.volume,
            "rho": params.rho, "fpkin_version": __version__}


def cmd_sweep(args):
    if not math.isfinite(args.k_min) or not math.isfinite(args.k_max):
        print("error: k range must be finite", file=sys.stderr)
        return EXIT_SOLVER
    if args.k_min == args.k_max:  # degenerate range: one row
        k_values = np.array([args.k_min])
    else:
        k_values = np.linspace(args.k_min, args.k_max, args.steps)
    rows = equilibrium.sweep(k_values, n=args.n, volume=args.vol,
                             rho=args.rho, small_k=args.small_k)
    meta = {"k_min": args.k_min, "k_max": args.k_max, "steps": args.steps,
            "n": args.n, "volume": args.vol, "rho": args.rho,
            "small_k": args.small_k, "fpkin_version": __version__}
    try:
        write_sweep_csv(args.out, rows, meta=meta)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    violations = sum(len(r.violations()) for r in rows)
    supercritical = sum(1 for r in rows if r.status == "supercritical")
    print(f"wrote {args.out}: {len(rows)} rows, {violations} inequality "
          f"violations, {supercritical} supercritical")
    return EXIT_OK


def cmd_simulate(args):
    try:
        config = load_config(args.config)
        diag_path, field_path = config_output_paths(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.diagnostics:
        diag_path = args.diagnostics
    if args.field_out:
        field_path = args.field_out
    if diag_path is None:
        diag_path = "diagnostics.csv"

    meta = config.metadata()
    meta["fpkin_version"] = __version__
    try:
        records, final, _grid = kinetics.simulate(config)
        aborted = False
    except kinetics.SimulationAborted as exc:
        print(f"error: {exc}", file=sys.stderr)
        records, final, aborted = exc.records, None, True
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    try:
        write_diagnostics_csv(diag_path, records, meta=meta)
        if field_path and final is not None:
            write_field_csv(field_path, final, meta=meta)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"wrote {diag_path} ({len(records)} records)")
    if aborted:
        print("run aborted; partial diagnostics retained", file=sys.stderr)
        return EXIT_SOLVER
    verdict = kinetics.classify(records)
    kind = ("conservative" if verdict.conservative
            else "dissipative" if verdict.dissipative else "neither")
    print(f"final Lyapunov value = {records[-1].Gtilde:.6e}")
    print(f"decay violations     = {kinetics.count_decay_violations(records)}")
    print(f"classification       = {kind}")
    if field_path:
        print(f"wrote {field_path}")
    return EXIT_OK


def cmd_verify(args):
    results = verify.run_all(quick=args.quick)
    width = max(len(r.name) for r in results)
    print(f"{'criterion':{width}}  status  runtime")
    for r in results:
        print(f"{r.name:{width}}  {r.status:6}  {r.runtime:7.2f}s")
        if args.verbose or not r.passed:
            for line in r.details:
                print(f"    {line}")
    failed = [r for r in results if not r.passed]
    if failed:
        names = ", ".join(r.name for r in failed)
        print(f"\nFAILED: {names}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    print("\nall criteria passed")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fpkin",
        description="Quantum/classical Fokker-Planck equilibria and the "
                    "1D phase-space solver with Lyapunov diagnostics",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eq = sub.add_parser("equilibrium", help="solve one equilibrium")
    p_eq.add_argument("--k", type=float, required=True,
                      help="quantum parameter (k>0 boson, k<0 fermion)")
    p_eq.add_argument("--n", type=int, default=1, help="velocity dimension")
    p_eq.add_argument("--vol", type=float, default=1.0, help="domain volume")
    p_eq.add_argument("--rho", type=float, default=1.0, help="total density")
    p_eq.add_argument("--out", help="optional CSV output path")
    p_eq.set_defaults(func=cmd_equilibrium)

    p_sw = sub.add_parser("sweep", help="solve over a k-range")
    p_sw.add_argument("--k-min", type=float, required=True)
    p_sw.add_argument("--k-max", type=float, required=True)
    p_sw.add_argument("--steps", type=int, default=11)
    p_sw.add_argument("--n", type=int, default=1)
    p_sw.add_argument("--vol", type=float, default=1.0)
    p_sw.add_argument("--rho", type=float, default=1.0)
    p_sw.add_argument("--small-k", type=float, default=0.05,
                      help="|k| window where the entropy/free-energy "
                           "orderings are asserted")
    p_sw.add_argument("--out", required=True, help="CSV output path")
    p_sw.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="run the phase-space solver")
    p_sim.add_argument("--config", required=True, help="INI run description")
    p_sim.add_argument("--diagnostics", help="override diagnostics CSV path")
    p_sim.add_argument("--field-out", help="write the final field as CSV")
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run the verification suite")
    p_ver.add_argument("--quick", action="store_true",
                       help="skip the long simulation check")
    p_ver.add_argument("--verbose", action="store_true",
                       help="print per-check details even on success")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
