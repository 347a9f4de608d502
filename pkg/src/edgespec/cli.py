"""Command-line interface for edge/cloud speculative decoding experiments."""

import asyncio
import json
import math
import sys
from pathlib import Path

import click
import pandas as pd

from . import config
from .analytics import PerfParams, report
from .bench import (
    MODES,
    SWEEP_DIMENSIONS,
    compare,
    load_scenario,
    preset_names,
    serve_loopback,
    simulate,
    sweep,
    write_transcript,
)
from .bench.serve import serve as serve_role
from .exceptions import Divergence, DigestMismatch, PeerClosed, ScenarioError


def _load(scenario_path, seed=None, max_tokens=None, mode=None):
    try:
        scenario = load_scenario(scenario_path)
        changes = {}
        if seed is not None:
            changes["session.seed"] = seed
        if max_tokens is not None:
            changes["max_tokens"] = max_tokens
        if mode is not None:
            changes["mode"] = mode
        return scenario.updated(**changes) if changes else scenario
    except ScenarioError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(2)


def _write_table(df: pd.DataFrame, out, fmt: str) -> None:
    if out is None:
        click.echo(df.to_string(index=False))
        return
    output_path = Path(out)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        df.to_csv(output_path, index=False)
    else:
        with open(output_path, "w") as f:
            json.dump(df.to_dict(orient="records"), f, indent=2)
    click.echo(f"Results saved -> {output_path}")


def _fail(message: str) -> None:
    click.echo(f"Error: {message}", err=True)
    sys.exit(1)


scenario_option = click.option(
    "--scenario", "-s", default="fullhit", show_default=True, help="Scenario file or preset name"
)
mode_option = click.option("--mode", "-m", type=click.Choice(MODES), default=None, help="Override the scenario mode")
seed_option = click.option("--seed", type=int, default=None, help="Override the session seed")
max_tokens_option = click.option("--max-tokens", "-n", type=int, default=None, help="Override max_tokens")
repeats_option = click.option("--repeats", "-r", type=int, default=1, show_default=True, help="Seeds to average over")


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
def cli(verbose):
    """Edge/cloud speculative decoding simulator"""
    config.setup_logging("DEBUG" if verbose else config.LOG_LEVEL)


@cli.command(name="simulate")
@scenario_option
@mode_option
@seed_option
@max_tokens_option
@repeats_option
@click.option("--out", "-o", default=None, help="Metrics JSON path (default: <output dir>/<scenario>_metrics.json)")
@click.option("--transcript", "-t", default=None, help="Also write the committed transcript here")
def simulate_cmd(scenario, mode, seed, max_tokens, repeats, out, transcript):
    """Run one scenario and write its metrics."""
    sc = _load(scenario, seed, max_tokens, mode)
    click.echo(f"Simulating {sc.name} ({sc.mode}) digest {sc.digest()[:12]}...")
    try:
        tokens, record = simulate(sc, sc.mode, repeats=repeats)
    except Divergence as e:
        _fail(f"divergence: {e}")

    output_path = Path(out or Path(config.OUTPUT_DIR) / f"{sc.name}_metrics.json")
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w") as f:
        json.dump(record, f, indent=2)

    if transcript:
        write_transcript(transcript, tokens, sc, sc.mode)
        click.echo(f"Transcript saved -> {transcript}")

    key = "throughput" if repeats == 1 else "throughput_mean"
    click.echo(f"Committed tokens: {len(tokens)}")
    click.echo(f"Throughput: {record[key]:.3f} tok/s (predicted {record['pred_throughput']:.3f})")
    if repeats == 1:
        click.echo(f"Mean accept length: {record['mean_accept_len']:.3f} (predicted {record['pred_EL']:.3f})")
        click.echo(f"TTFT: {record['ttft_ms']:.3f} ms  TPOT: {record['tpot_ms']:.3f} ms")
    click.echo(f"Results saved -> {output_path}")


@cli.command()
@click.option("--alpha", "-a", type=float, required=True, help="Token acceptance rate in [0, 1]")
@click.option("--gamma", "-g", type=int, default=4, show_default=True)
@click.option("--t-draft", type=float, required=True, help="Batch drafting time (ms)")
@click.option("--t-rtt", type=float, required=True, help="Round-trip time (ms)")
@click.option("--t-verify", type=float, required=True, help="Batch verification time (ms)")
@click.option("--t-pre", type=float, default=0.0, show_default=True, help="Pre-verification lead time (ms)")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def analyze(alpha, gamma, t_draft, t_rtt, t_verify, t_pre, fmt):
    """Evaluate the closed-form performance model."""
    if not 0.0 <= alpha <= 1.0:
        raise click.BadParameter(f"{alpha} is outside [0, 1]", param_hint="--alpha")
    try:
        params = PerfParams(alpha, gamma, t_draft, t_verify, t_rtt, t_pre)
    except ValueError as e:
        raise click.UsageError(str(e))
    values = report(params)
    at_limit = not math.isnan(values["S"]) and math.isclose(values["S"], values["S_limit"], rel_tol=1e-9)

    if fmt == "json":
        click.echo(json.dumps({**values, "S_at_limit": at_limit}, indent=2))
        return
    labels = [
        ("EL", "expected accept length", ""),
        ("L_sync", "sync latency", "ms"),
        ("R_sync", "sync throughput", "tok/ms"),
        ("E_T_async", "async expected latency", "ms"),
        ("R_async", "async throughput", "tok/ms"),
        ("S", "speedup", ""),
        ("S_limit", "speedup limit", ""),
        ("T_bubble", "bubble time", "ms"),
    ]
    for key, label, unit in labels:
        flag = "  <- at limit" if key == "S" and at_limit else ""
        click.echo(f"{label:>24}: {values[key]:.6g} {unit}{flag}")


@cli.command(name="sweep")
@scenario_option
@click.option("--dim", "-d", type=click.Choice(sorted(SWEEP_DIMENSIONS)), required=True)
@click.option("--values", "values_", required=True, help="Comma-separated values (K accepts V)")
@mode_option
@seed_option
@max_tokens_option
@repeats_option
@click.option("--out", "-o", default=None, help="Output file (default: <output dir>/<scenario>_<dim>_sweep.csv)")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def sweep_cmd(scenario, dim, values_, mode, seed, max_tokens, repeats, out, fmt):
    """Sweep one parameter and emit one row per value."""
    sc = _load(scenario, seed, max_tokens, mode)
    values = [v.strip() for v in values_.split(",") if v.strip()]
    if len(values) < 2:
        raise click.BadParameter("give at least two values", param_hint="--values")
    try:
        df = sweep(sc, dim, values, sc.mode, repeats=repeats)
    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(2)
    except Divergence as e:
        _fail(f"divergence: {e}")
    out = out or Path(config.OUTPUT_DIR) / f"{sc.name}_{dim}_sweep.{fmt}"
    _write_table(df, out, fmt)


@cli.command(name="compare")
@scenario_option
@seed_option
@max_tokens_option
@repeats_option
@click.option("--out", "-o", default=None, help="Output file (default: print)")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def compare_cmd(scenario, seed, max_tokens, repeats, out, fmt):
    """Run every pipeline mode on one scenario."""
    sc = _load(scenario, seed, max_tokens)
    try:
        df = compare(sc, repeats=repeats)
    except ScenarioError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(2)
    except Divergence as e:
        _fail(f"divergence: {e}")
    if out is None:
        cols = ["mode", "throughput", "mean_accept_len", "mean_cycle_ms", "speedup_vs_sync"]
        click.echo(df[[c for c in cols if c in df.columns]].to_string(index=False))
    else:
        _write_table(df, out, fmt)


@cli.command()
@click.option("--role", type=click.Choice(["edge", "cloud", "loopback"]), required=True)
@click.option("--addr", default="127.0.0.1:7878", show_default=True, help="HOST:PORT")
@scenario_option
@mode_option
@seed_option
@max_tokens_option
@click.option("--time-scale", type=float, default=None, help="Real seconds per simulated ms")
@click.option("--transcript", "-t", default=None, help="Write the committed transcript here")
def serve(role, addr, scenario, mode, seed, max_tokens, time_scale, transcript):
    """Run a live session over TCP (cloud listens, edge connects)."""
    sc = _load(scenario, seed, max_tokens, mode)
    scale = time_scale if time_scale is not None else config.TIME_SCALE
    click.echo(f"{role}: scenario {sc.name} digest {sc.digest()[:12]}")
    try:
        if role == "loopback":
            tokens, _ = asyncio.run(serve_loopback(sc, sc.mode, time_scale=scale))
        else:
            tokens = asyncio.run(serve_role(role, addr, sc, sc.mode, time_scale=scale))
    except ConnectionRefusedError:
        _fail(f"connection refused at {addr}")
    except DigestMismatch as e:
        _fail(f"handshake aborted: {e}")
    except (PeerClosed, Divergence) as e:
        _fail(str(e))
    click.echo(f"Committed tokens: {len(tokens)}")
    if transcript:
        write_transcript(transcript, tokens, sc, sc.mode)
        click.echo(f"Transcript saved -> {transcript}")


@cli.command()
def scenarios():
    """List bundled scenario presets."""
    for name in preset_names():
        sc = load_scenario(name)
        click.echo(f"{name:>16}  {sc.description}")


if __name__ == "__main__":
    cli()
