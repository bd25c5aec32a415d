#!/usr/bin/env python3
"""
deerpsim - command-line front end

Run single scenarios, compare routing protocols over seeds and sweeps, dump
the built-in presets and re-render saved comparisons.

Usage:
    deerpsim --help
"""

import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import click
import pandas as pd
import yaml

from .. import __version__
from ..analysis.artifacts import write_run_artifacts
from ..analysis.comparison import compare
from ..analysis.metrics import aggregate
from ..analysis.render import load_runs, render
from ..core.scenario import PRESETS, ScenarioConfig, load_config, preset
from ..core.simulation import run_scenario
from ..protocols import PROTOCOLS
from ..utils.error_handling import DeerpSimError, ValidationError, handle_errors
from ..utils.file_utils import default_output_dir, ensure_directory, write_json
from ..utils.logging_config import (
    configure_for_environment,
    get_logger,
    log_operation,
    setup_logging,
)

logger = get_logger(__name__)

EXIT_ERROR = 1
EXIT_INVALID = 2

OUT_HELP = "Output directory (default: $DEERPSIM_OUT)"


def parse_area(value: str) -> Tuple[float, float]:
    """``"600x600"`` to ``(600.0, 600.0)``."""
    try:
        width, height = value.lower().split("x", 1)
        return float(width), float(height)
    except ValueError:
        raise click.BadParameter(f"expected WIDTHxHEIGHT, got {value!r}")


def parse_seeds(value: str) -> List[int]:
    """``"1-10"``, ``"1,2,5"`` or a mix of both."""
    seeds: List[int] = []
    try:
        for part in value.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                low, high = part.split("-", 1)
                seeds.extend(range(int(low), int(high) + 1))
            else:
                seeds.append(int(part))
    except ValueError:
        raise click.BadParameter(f"expected seeds like 1-10 or 1,2,3, got {value!r}")
    if not seeds:
        raise click.BadParameter("at least one seed is required")
    return seeds


def parse_overrides(pairs: Sequence[str]) -> Dict[str, Any]:
    """``key=value`` pairs; values are read as YAML scalars or lists."""
    overrides: Dict[str, Any] = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.BadParameter(f"expected key=value, got {pair!r}")
        key, raw = pair.split("=", 1)
        overrides[key.strip()] = yaml.safe_load(raw)
    return overrides


def scenario_options(func: Callable) -> Callable:
    """Flags shared by ``run`` and ``compare``."""
    mobility_models = click.Choice(["RWP", "RPGM", "STATIC"], case_sensitive=False)
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False),
            help="YAML/JSON scenario or manifest",
        ),
        click.option(
            "--preset",
            "preset_name",
            type=click.Choice(sorted(PRESETS)),
            help="Start from a preset",
        ),
        click.option("--seed", type=int, help="Random seed"),
        click.option(
            "--nodes", type=int, help="Node count (picks the matching sweep point)"
        ),
        click.option("--area", help="Terrain as WIDTHxHEIGHT in meters"),
        click.option("--mobility", type=mobility_models),
        click.option("--speed-min", type=float, help="Minimum speed (m/s)"),
        click.option("--speed-max", type=float, help="Maximum speed (m/s)"),
        click.option("--pause", type=float, help="Pause time (s)"),
        click.option("--duration", type=float, help="Simulated time (s)"),
        click.option("--flows", type=int, help="Number of CBR flows"),
        click.option(
            "--rpsc-table",
            type=click.Path(dir_okay=False),
            help="RPSC table file for DEERP",
        ),
        click.option(
            "--set",
            "overrides",
            multiple=True,
            metavar="KEY=VALUE",
            help="Any config key, e.g. radio.range=200",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def build_config(
    config_path: Optional[str],
    preset_name: Optional[str],
    overrides: Sequence[str],
    single: bool,
    **flags: Any,
) -> ScenarioConfig:
    """Preset, then config file, then flags, then ``--set`` overrides."""
    config = preset(preset_name) if preset_name else ScenarioConfig()
    if config_path:
        config = load_config(config_path, base=config)

    nodes = flags.get("nodes")
    if nodes is not None:
        if config.sweep:
            config = config.for_node_count(nodes)
        else:
            config = config.copy(node_count=nodes)
    elif single and config.sweep:
        config = config.for_node_count(config.node_count)

    values: Dict[str, Any] = {}
    if flags.get("protocol"):
        values["protocol"] = flags["protocol"].upper()
    if flags.get("seed") is not None:
        values["seed"] = flags["seed"]
    if flags.get("area"):
        width, height = parse_area(flags["area"])
        values["mobility.width"], values["mobility.height"] = width, height
    if flags.get("mobility"):
        values["mobility.model"] = flags["mobility"].upper()
    for flag, key in (
        ("speed_min", "mobility.speed_min"),
        ("speed_max", "mobility.speed_max"),
        ("pause", "mobility.pause"),
        ("duration", "duration"),
        ("flows", "traffic.flows"),
        ("rpsc_table", "deerp.rpsc_table"),
    ):
        if flags.get(flag) is not None:
            values[key] = flags[flag]
    if flags.get("trace"):
        values["trace.enabled"] = True

    config.apply(values)
    config.apply(parse_overrides(overrides))
    if config.sweep and values.get("mobility.width") is not None:
        # An explicit area replaces the sweep's paired areas
        config.sweep = [
            [point[0], config.mobility.width, config.mobility.height]
            for point in config.sweep
        ]
    config.protocol = config.protocol.upper()
    config.mobility.model = config.mobility.model.upper()
    return config


def fail(error: Exception, verbose: bool) -> None:
    """Print an error and exit: 2 for invalid input, 1 otherwise."""
    message = error.user_message if isinstance(error, DeerpSimError) else str(error)
    click.echo(f"\n❌ Error: {message}", err=True)
    if verbose:
        import traceback

        traceback.print_exc()
    sys.exit(EXIT_INVALID if isinstance(error, ValidationError) else EXIT_ERROR)


@click.group()
@click.version_option(__version__, prog_name="deerpsim")
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
@click.option(
    "--log-dir",
    type=click.Path(file_okay=False),
    help="Also write rotating log files here",
)
@click.option(
    "--verbose", "-v", is_flag=True, help="Debug logging and tracebacks on errors"
)
@click.pass_context
def cli(
    ctx: click.Context, log_level: Optional[str], log_dir: Optional[str], verbose: bool
) -> None:
    """Energy-aware MANET routing simulator."""
    settings = configure_for_environment()
    if log_level:
        settings["log_level"] = log_level
    if verbose:
        settings["log_level"] = "DEBUG"
    setup_logging(log_dir=Path(log_dir) if log_dir else None, **settings)
    ctx.obj = {"verbose": verbose}


@cli.command("run")
@scenario_options
@click.option(
    "--protocol",
    type=click.Choice(PROTOCOLS, case_sensitive=False),
    help="Routing protocol",
)
@click.option("--out", type=click.Path(file_okay=False), help=OUT_HELP)
@click.option(
    "--trace",
    is_flag=True,
    help="Write event log, trajectories, energy samples and modes",
)
@click.pass_context
def run_command(ctx: click.Context, out: Optional[str], **options: Any) -> None:
    """Run one simulation and write its artifacts."""
    verbose = ctx.obj["verbose"]
    try:
        config = build_config(single=True, **options).validate()
        out_dir = Path(out) if out else default_output_dir()
        files, metrics = _run(config, out_dir)
    except Exception as e:
        fail(e, verbose)
        return

    delivered = f"{metrics.delivered:,}/{metrics.originated:,}"
    scenario = f"{config.node_count} nodes, seed {config.seed}"
    click.echo(f"📡 {config.protocol} on {scenario}")
    click.echo(f"  Delivered:        {delivered} (PDR {metrics.pdr:.3f})")
    click.echo(f"  Avg idle energy:  {metrics.energy_idle:,.1f} mJ")
    click.echo(f"  Avg remaining:    {metrics.remaining:,.1f} mJ")
    click.echo(f"  Control frames:   {metrics.control_frames:,}")
    click.echo(f"\n💾 Artifacts in {out_dir}")
    for name, path in files.items():
        click.echo(f"  {name}: {path}")


@log_operation("run")
@handle_errors()
def _run(config: ScenarioConfig, out_dir: Path):
    result = run_scenario(config)
    metrics = aggregate(result)
    return write_run_artifacts(result, out_dir, metrics), metrics


@cli.command("compare")
@scenario_options
@click.option(
    "--protocols",
    default=",".join(PROTOCOLS),
    show_default=True,
    help="Comma-separated protocols",
)
@click.option(
    "--seeds", default="1", show_default=True, help="Seeds, e.g. 1-10 or 1,2,3"
)
@click.option(
    "--workers", type=int, envvar="DEERPSIM_WORKERS", default=1, show_default=True
)
@click.option("--out", type=click.Path(file_okay=False), help=OUT_HELP)
@click.pass_context
def compare_command(
    ctx: click.Context,
    protocols: str,
    seeds: str,
    workers: int,
    out: Optional[str],
    **options: Any,
) -> None:
    """Compare protocols over seeds and the scenario's sweep."""
    verbose = ctx.obj["verbose"]
    try:
        config = build_config(single=False, **options).validate()
        protocol_list = [p.strip().upper() for p in protocols.split(",") if p.strip()]
        seed_list = parse_seeds(seeds)
        out_dir = Path(out) if out else default_output_dir()
        start = time.time()
        result, files = _compare(config, protocol_list, seed_list, workers, out_dir)
    except Exception as e:
        fail(e, verbose)
        return

    elapsed = time.time() - start
    click.echo(f"📊 Compared {', '.join(result.protocols)} in {elapsed:.1f}s")
    click.echo(f"  Runs completed:   {len(result.runs):,}")
    click.echo(f"  Failed cells:     {len(result.failures):,}")
    for failure in result.failures:
        cell = f"{failure['protocol']} n={failure['node_count']} seed={failure['seed']}"
        click.echo(f"    {cell}: {failure['error']}")
    click.echo(f"\n💾 Report in {out_dir}")
    for name, path in files.items():
        click.echo(f"  {name}: {path}")


@log_operation("compare")
@handle_errors()
def _compare(
    config: ScenarioConfig,
    protocols: List[str],
    seeds: List[int],
    workers: int,
    out_dir: Path,
):
    result = compare(config, protocols, seeds, workers=workers)
    out = ensure_directory(out_dir)
    files: Dict[str, str] = {}

    runs_path = out / "runs.csv"
    result.runs.to_csv(runs_path, index=False)
    files["runs"] = str(runs_path)
    if result.failures:
        failures_path = out / "failures.csv"
        result.failures_table().to_csv(failures_path, index=False)
        files["failures"] = str(failures_path)
    manifest = {
        "deerpsim_version": __version__,
        "config": config.to_flat(),
        "protocols": result.protocols,
        "seeds": list(seeds),
        "runs": len(result.runs),
        "failures": result.failures,
    }
    files["manifest"] = str(write_json(out / "manifest.json", manifest))

    if not result.runs.empty:
        files.update(render(result, out))
    return result, files


@cli.command("preset")
@click.argument("name")
@click.option(
    "--out",
    "out_file",
    type=click.Path(dir_okay=False),
    help="Write the preset as a config file",
)
@click.pass_context
def preset_command(ctx: click.Context, name: str, out_file: Optional[str]) -> None:
    """Show a built-in preset as a flat config."""
    try:
        config = preset(name)
    except Exception as e:
        fail(e, ctx.obj["verbose"])
        return

    text = yaml.safe_dump(config.to_flat(), sort_keys=True, default_flow_style=None)
    if out_file:
        path = Path(out_file)
        ensure_directory(path.parent)
        path.write_text(text, encoding="utf-8")
        click.echo(f"💾 Wrote preset {name} to {path}")
    else:
        click.echo(text, nl=False)


@cli.command("render")
@click.argument("runs_csv", type=click.Path(dir_okay=False))
@click.option(
    "--out",
    type=click.Path(file_okay=False),
    help="Output directory (default: next to RUNS_CSV)",
)
@click.option("--protocols", default=None, help="Bar order, comma-separated")
@click.pass_context
def render_command(
    ctx: click.Context, runs_csv: str, out: Optional[str], protocols: Optional[str]
) -> None:
    """Re-render metric CSVs and charts from a saved runs.csv."""
    try:
        runs: pd.DataFrame = load_runs(runs_csv)
        order = [p.strip().upper() for p in protocols.split(",")] if protocols else None
        out_dir = Path(out) if out else Path(runs_csv).parent
        files = _render(runs, out_dir, order)
    except Exception as e:
        fail(e, ctx.obj["verbose"])
        return

    click.echo(f"🖼  Rendered {len(files)} files to {out_dir}")


@log_operation("render")
@handle_errors()
def _render(
    runs: pd.DataFrame, out_dir: Path, protocols: Optional[List[str]]
) -> Dict[str, str]:
    return render(runs, out_dir, protocols=protocols)


def main() -> None:
    """Console entry point."""
    cli(prog_name="deerpsim")


if __name__ == "__main__":
    main()
