"""Command-line front end: analyze, simulate, tables, sequences, reuse.

Exit codes: 0 success, 1 usage error, 2 verification mismatch,
3 topology generation timeout.
"""

import argparse
import json
import sys
from pathlib import Path

from . import analytics, experiments, reuse, schemes, simulator
from .topology import GenerationTimeout

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_TIMEOUT = 0, 1, 2, 3

DEFAULTS = {"seed": 0, "jobs": 1, "out": None, "format": "csv"}

# q(D, 100) for D = 1..16 and q(1, N) for the listed N
Q_BY_DENSITY = dict(zip(range(1, 17), (4, 5, 7, 9, 11, 11, 11, 11, 11, 11, 13, 13, 16, 16, 16, 17)))
Q_BY_PAIRS = dict(zip((1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100),
                    (2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 4)))


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list:
    """Parse ``0.1,0.3`` or a range ``0.1..0.5`` (step 0.1, or ``a..b:step``)."""
    if ".." in text:
        lo, rest = text.split("..", 1)
        hi, _, step = rest.partition(":")
        lo, hi, step = float(lo), float(hi), float(step or 0.1)
        n = int(round((hi - lo) / step))
        return [round(lo + i * step, 10) for i in range(n + 1)]
    return [float(v) for v in text.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, help="root seed (unsigned integer)")
    common.add_argument("--jobs", type=int, help="parallel worker processes")
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--format", choices=("csv", "json-lines"))
    common.add_argument("--config", help="JSON file with option defaults")

    p = _Parser(prog="ttsched", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common], help="closed-form throughput")
    a.add_argument("--scheme", choices=schemes.SCHEMES + ("all",), default=None)
    a.add_argument("--d", type=int, default=None)
    a.add_argument("--n", type=int, default=None)
    a.add_argument("--t", type=int, default=None)
    a.add_argument("--p", default=None, help="one probability or a comma list of N values")
    a.add_argument("--critical", action="store_true", default=None,
                   help="also report the critical densities")

    s = sub.add_parser("simulate", parents=[common], help="Monte-Carlo experiments")
    s.add_argument("--preset", choices=experiments.PRESETS, default=None)
    s.add_argument("--scheme", choices=schemes.SCHEMES, default=None)
    s.add_argument("--d", type=int, default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--t", type=int, default=None)
    s.add_argument("--p", type=float, default=None)
    s.add_argument("--traffic", choices=(simulator.FRAME_SYNC, simulator.POISSON), default=None)
    s.add_argument("--feedback", action="store_true", default=None)
    s.add_argument("--topologies", type=int, default=None)
    s.add_argument("--runs", type=int, default=None)
    s.add_argument("--frames", type=int, default=None, help="frames per run")
    s.add_argument("--power", default=None, help="transmit powers, e.g. 0.1..0.5")
    s.add_argument("--big-frames", type=int, default=None)

    sub.add_parser("tables", parents=[common], help="recompute the q(D, N) tables")

    q = sub.add_parser("sequences", parents=[common], help="dump a sequence set")
    q.add_argument("--scheme", choices=schemes.SEQUENCE_SCHEMES, default=None)
    q.add_argument("--d", type=int, default=None)
    q.add_argument("--n", type=int, default=None)

    r = sub.add_parser("reuse", parents=[common], help="GPS-enabled reuse sizing")
    r.add_argument("--r", type=float, default=None, help="communication range (m)")
    r.add_argument("--d-min", type=float, default=None, help="minimum spacing (m)")
    r.add_argument("--d", type=int, default=None)
    r.add_argument("--strict", action="store_true", default=None)
    r.add_argument("--grid", type=int, default=None, help="dump colours for |m|,|n| <= GRID")
    return p


COMMAND_DEFAULTS = {
    "analyze": {"scheme": "all", "d": 1, "n": 10, "t": 10, "p": "1", "critical": False},
    "simulate": {"topologies": 10, "runs": 10, "traffic": simulator.FRAME_SYNC,
                 "feedback": False, "big_frames": 20, "d": 1, "p": 0.8},
    "tables": {},
    "sequences": {"scheme": "gf", "d": 1, "n": 4},
    "reuse": {"r": 100.0, "d_min": 10.0, "d": 2, "strict": False, "grid": None},
}


def resolve(ns: argparse.Namespace) -> dict:
    """Command line over config file over built-in defaults."""
    opts = dict(DEFAULTS)
    opts.update(COMMAND_DEFAULTS[ns.command])
    cfg_path = getattr(ns, "config", None)
    if cfg_path:
        try:
            cfg = json.loads(Path(cfg_path).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {cfg_path}: {exc}") from exc
        opts.update({k.replace("-", "_"): v for k, v in cfg.items()})
    opts.update({k: v for k, v in vars(ns).items() if v is not None})
    return opts


def _emit(text: str, opts: dict) -> None:
    if opts["out"]:
        Path(opts["out"]).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(o: dict) -> int:
    D, N, T = o["d"], o["n"], o["t"]
    ps = _floats(str(o["p"]))
    ps = ps[0] if len(ps) == 1 else ps
    names = schemes.SCHEMES if o["scheme"] == "all" else (o["scheme"],)
    if schemes.COMBINATION in names and D != 1:
        print("warning: the combination scheme is designed for D=1 only; "
              "its bound ignores D", file=sys.stderr)
    rows = []
    for name in names:
        try:
            row = analytics.analytics_row(name, D, N, T, ps)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        rows.append(row)
        extra = ""
        if name == schemes.GF:
            q, k = schemes.gf_params(D, N)
            extra = f"  q={q} k={k} L={q * q}"
        elif name == schemes.TDMA:
            extra = f"  L={N}"
        elif name == schemes.COMBINATION:
            extra = f"  L={schemes.combination_min_length(N)}"
        else:
            extra = f"  delta={schemes.aloha_probability(D).delta:g}"
        print(f"{name:12s} {row.kind:12s} {row.value:.6f}{extra}")
    if o["critical"]:
        for name in (schemes.ALOHA, schemes.GF):
            print(f"critical density ({name} vs tdma): "
                  f"{analytics.critical_density(N, T, ps, name)}")
        print(f"critical density (gf period < N): {analytics.gf_period_critical_density(N)}")
    if o["out"]:
        Path(o["out"]).write_text(analytics.rows_to_csv(rows))
    return EXIT_OK


def cmd_simulate(o: dict) -> int:
    fmt = simulator.rows_to_jsonl if o["format"] == "json-lines" else simulator.rows_to_csv
    if o.get("preset") == "robustness-nd":
        rows = []
        for s in experiments.BASIC:
            for rec in simulator.run_dynamic(s, 50, 10, o.get("t") or 50, o["p"],
                                             o["big_frames"], seed=o["seed"]):
                rows.append(simulator.ExperimentRow(
                    f"robustness-nd/bf{rec['big_frame']}", s, rec["N"], 10,
                    float(rec["D_measured"]), o.get("t") or 50, f"{o['p']:g}",
                    simulator.FRAME_SYNC, False, rec["throughput"], float("nan"), 1, 1))
        _emit(fmt(rows), o)
        return EXIT_OK
    if o.get("preset"):
        powers = _floats(o["power"]) if o.get("power") else None
        grid = experiments.preset(o["preset"], T=o.get("t"), horizon=o.get("frames"),
                                  powers=powers)
    else:
        if not o.get("scheme") or not o.get("n") or not o.get("t"):
            raise UsageError("give --preset, or --scheme, --n and --t")
        cfg = simulator.SimConfig(o["scheme"], o["n"], o["d"], o["t"], horizon=o.get("frames"),
                                  traffic=o["traffic"], feedback=bool(o["feedback"]))
        topo = simulator.TopologyParams.for_density(o["n"], o["d"], o["p"])
        grid = [simulator.GridPoint("custom", cfg, topo, f"{o['p']:g}")]
    rows = simulator.run_experiment(grid, o["topologies"], o["runs"], o["seed"], o["jobs"])
    _emit(fmt(rows), o)
    for r in rows:
        print(f"{r.experiment:24s} {r.scheme:12s} N={r.N:<3d} D={r.D_design:<3d} T={r.T:<4d} "
              f"p={r.p_summary:8s} fb={int(r.feedback)} {r.avg_throughput:.4f} "
              f"+/- {r.stderr:.4f}", file=sys.stderr)
    return EXIT_OK


def cmd_tables(o: dict) -> int:
    bad = 0
    print("q(D,100)")
    for D, want in Q_BY_DENSITY.items():
        got, _ = schemes.gf_params(D, 100)
        bad += got != want
        print(f"D={D:<3d} q={got:<3d} q^2={got * got:<4d} expected={want} "
              f"{'ok' if got == want else 'MISMATCH'}")
    print("q(1,N)")
    for N, want in Q_BY_PAIRS.items():
        got, _ = schemes.gf_params(1, N)
        bad += got != want
        print(f"N={N:<4d} q={got:<3d} q^2={got * got:<4d} expected={want} "
              f"{'ok' if got == want else 'MISMATCH'}")
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_sequences(o: dict) -> int:
    seqs = schemes.sequences(o["scheme"], o["d"], o["n"])
    _emit(seqs.to_text(), o)
    return EXIT_OK


def cmd_reuse(o: dict) -> int:
    lat = reuse.reuse_factor(o["r"], o["d_min"], strict=bool(o["strict"]))
    info = reuse.reuse_scheme_params(o["d"], lat)
    line = (f"G={info['G']} b1={info['b1']} b2={info['b2']} tdma_period={info['tdma_period']} "
            f"gf_q={info['gf_q']} gf_period={info['gf_period']}")
    if o["grid"] is not None:
        print(line)
        text = "m,n,color\n" + "".join(f"{m},{n},{c}\n"
                                       for m, n, c in reuse.colour_grid(lat, o["grid"]))
        _emit(text, o)
    else:
        _emit(line + "\n", o)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "simulate": cmd_simulate, "tables": cmd_tables,
            "sequences": cmd_sequences, "reuse": cmd_reuse}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        opts = resolve(ns)
        return COMMANDS[ns.command](opts)
    except UsageError as exc:
        print(f"ttsched: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GenerationTimeout as exc:
        print(f"ttsched: topology generation failed: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


if __name__ == "__main__":
    sys.exit(main())
