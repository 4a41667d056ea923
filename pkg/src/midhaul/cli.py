"""Command-line front end.

Subcommands: ``generate-scene``, ``plan``, ``sweep-cus``, ``sweep-arrays``
and ``validate-trace``. Exit status: 0 success, 2 configuration error,
3 infeasible plan, 4 file I/O error, 5 evaluation failure.
"""

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import bundled, planner
from .config import ConfigError, RunConfig, load_config, parse_array_size, with_overrides
from .exceptions import MidhaulError, ReferentialIntegrityError, TraceFormatError
from .report import emit_plot_data, links_csv, plan_json, plan_text
from .scene import read_scene
from .trace_io import parse_nodes, parse_trace, read_scenario

log = logging.getLogger("midhaul")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4
EXIT_EVAL = 5

__all__ = ["main", "run", "emit_plot_data"]


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        out = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("list must not be empty")
    return tuple(out)


def _sizes(text):
    try:
        out = [parse_array_size(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not out:
        raise argparse.ArgumentTypeError("list must not be empty")
    return tuple(out)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value run configuration file")
    common.add_argument("--seed", type=int, help="scene random seed")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("--input", type=Path, help="directory holding nodes.csv and trace.csv")
    inputs.add_argument("--nodes", type=Path, help="node inventory CSV")
    inputs.add_argument("--trace", type=Path, help="path trace CSV")
    inputs.add_argument("--bundled", choices=sorted(bundled.BUNDLED), help="use a bundled scene")
    inputs.add_argument("--mode", choices=("greedy", "exhaustive"))
    inputs.add_argument("--precoder", choices=("slnr", "zf"))
    inputs.add_argument("--rate-target", type=float, help="per-link rate target, bit/s")

    parser = _ArgumentParser(prog="midhaul", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    sub.add_parser("generate-scene", parents=[common], help="write scene, node and trace files")
    sub.add_parser("plan", parents=[common, inputs], help="select CUs and score every link")
    p = sub.add_parser("sweep-cus", parents=[common, inputs], help="metrics per CU count")
    p.add_argument("counts", nargs="?", type=_int_list, help="CU counts, e.g. 1,2,3")
    p.add_argument("--cus", type=_int_list, help="same as the positional CU counts")
    p = sub.add_parser("sweep-arrays", parents=[common, inputs], help="links at target per array size")
    p.add_argument("sizes", nargs="?", type=_sizes, help="array sizes, e.g. 8x8,16x8,16x16")
    p.add_argument("--arrays", type=_sizes, help="same as the positional array sizes")
    p.add_argument("--cus", type=int, help="number of CUs in the fixed plan")
    p = sub.add_parser("validate-trace", parents=[common], help="check a trace file")
    p.add_argument("trace", type=Path)
    p.add_argument("--nodes", type=Path)
    return parser


def _config(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg = with_overrides(cfg, scene=with_overrides(cfg.scene, seed=args.seed))
    radio = cfg.radio
    if getattr(args, "rate_target", None) is not None:
        radio = with_overrides(radio, rate_target_bps=args.rate_target)
    return with_overrides(cfg, radio=radio, mode=getattr(args, "mode", None),
                          precoder=getattr(args, "precoder", None))


def _scenario(args, cfg):
    if args.bundled:
        return bundled.load_bundled(args.bundled, cfg.radio)
    nodes, trace = args.nodes or cfg.nodes, args.trace or cfg.trace
    if args.input is not None:
        nodes = nodes or args.input / bundled.NODES_FILE
        trace = trace or args.input / bundled.TRACE_FILE
    if nodes is None or trace is None:
        raise ConfigError("no input: pass --bundled, --input DIR, or --nodes and --trace")
    for path in (nodes, trace):
        if not Path(path).is_file():
            raise FileNotFoundError(f"input file not found: {path}")
    return read_scenario(nodes, trace, cfg.radio, cfg.propagation.max_paths)


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    log.info("wrote %s", path)


def cmd_generate_scene(args, cfg):
    scene_cfg = cfg.scene
    if cfg.scene_file is not None:
        # a saved scene.txt supplies the generator settings; --seed still wins
        scene_cfg, _ = read_scene(Path(cfg.scene_file).read_text(encoding="utf-8"))
        if args.seed is not None:
            scene_cfg = with_overrides(scene_cfg, seed=args.seed)
    _, nodes, paths = bundled.write_scene_files(args.out, scene_cfg, cfg.radio, cfg.propagation)
    print(f"{len(nodes)} nodes, {len(paths)} paths written to {args.out}")
    return EXIT_OK


def cmd_plan(args, cfg):
    scenario = _scenario(args, cfg)
    plan = planner.plan_minimum_cus(scenario, cfg.planner_settings(), cfg.mode)
    _write(args.out / "plan.json", plan_json(plan))
    _write(args.out / "plan.txt", plan_text(plan))
    _write(args.out / "links.csv", links_csv(plan.links))
    print(plan_text(plan), end="")
    return EXIT_OK if plan.feasible else EXIT_INFEASIBLE


def cmd_sweep_cus(args, cfg):
    scenario = _scenario(args, cfg)
    counts = args.counts or args.cus or cfg.cu_counts
    settings = cfg.planner_settings()
    metrics = {}
    summary = io.StringIO()
    w = csv.writer(summary, lineterminator="\n")
    w.writerow(["cu_count", "selected", "links_at_target", "unserved", "min_rate_bps", "feasible"])
    for k in counts:
        plan = planner.plan_with_cu_count(scenario, k, settings)
        metrics[f"{k}cu"] = plan.links
        _write(args.out / f"metrics_{k}cu.csv", links_csv(plan.links))
        w.writerow([k, " ".join(plan.selected), plan.satisfied_count, len(plan.unserved),
                    repr(plan.min_rate), plan.feasible])
        print(f"{k} CU(s) {', '.join(plan.selected)}: {plan.satisfied_count} links at target, "
              f"min rate {plan.min_rate / 1e9:.3f} Gbit/s")
    _write(args.out / "cu_sweep.csv", summary.getvalue())
    args.out.mkdir(parents=True, exist_ok=True)
    emit_plot_data(metrics, args.out, scenario.radio)
    return EXIT_OK


def cmd_sweep_arrays(args, cfg):
    scenario = _scenario(args, cfg)
    sizes = args.sizes or args.arrays or cfg.array_sizes
    k = args.cus or cfg.sweep_cus
    base = cfg.planner_settings()
    graph = planner.build_connectivity(scenario, base.threshold_dbm)
    fixed = planner.associate(planner.greedy_order(graph)[:k], graph, scenario.radio.rate_target_bps)
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["rows", "cols", "links_at_target", "links_total", "min_rate_bps"])
    for rows, cols in sizes:
        settings = with_overrides(
            base,
            cu_array=with_overrides(cfg.cu_array, rows=rows, cols=cols),
            du_array=with_overrides(cfg.du_array, rows=rows, cols=cols),
        )
        plan = planner.evaluate_plan(fixed, scenario, settings)
        total = len(plan.links) + len(plan.unserved)
        w.writerow([rows, cols, plan.satisfied_count, total, repr(plan.min_rate)])
        print(f"{rows}x{cols}: {plan.satisfied_count}/{total} links at target")
    _write(args.out / "array_sweep.csv", out.getvalue())
    return EXIT_OK


def cmd_validate_trace(args, cfg):
    nodes = None
    if args.nodes is not None:
        nodes = parse_nodes(args.nodes.read_text(encoding="utf-8"))
    records = parse_trace(args.trace.read_text(encoding="utf-8"), nodes)
    pairs = {r.pair for r in records}
    print(f"{args.trace}: {len(records)} paths over {len(pairs)} CU-DU pairs, OK")
    return EXIT_OK


COMMANDS = {
    "generate-scene": cmd_generate_scene,
    "plan": cmd_plan,
    "sweep-cus": cmd_sweep_cus,
    "sweep-arrays": cmd_sweep_arrays,
    "validate-trace": cmd_validate_trace,
}


def run(argv=None):
    """Parse ``argv`` and execute; returns the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, TraceFormatError, ReferentialIntegrityError) as exc:
        print(f"midhaul: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"midhaul: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (MidhaulError, ValueError) as exc:
        print(f"midhaul: error: {exc}", file=sys.stderr)
        return EXIT_EVAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
