#!/usr/bin/env python3
"""CLI for shellspec."""

import json
import logging
import sys

import click
import numpy as np

from .. import __version__
from .._core.errors import ShellSpecError
from .utils import (
    EXIT_CONFIG,
    EXIT_MODEL,
    EXIT_VERIFY_FAILED,
    fail,
    load_model,
    make_grid,
    model_options,
    parse_complex,
    parse_depths,
    policy_options,
    sweep_policy,
    tolerance_override,
)

# Raised while building a model or running a computation
_RUN_ERRORS = (ShellSpecError, ArithmeticError, np.linalg.LinAlgError)


class AliasedGroup(click.Group):
    """Click group with command aliases."""

    ALIASES = {
        "d": "density",
        "w": "weyl",
        "st": "show-config",
        "config": "show-config",
    }

    def get_command(self, ctx, cmd_name):
        cmd_name = self.ALIASES.get(cmd_name, cmd_name)
        return super().get_command(ctx, cmd_name)


def _print_recursive_help(ctx, param, value):
    """Callback for --help-recursive flag."""
    if not value or ctx.resilient_parsing:
        return

    def _print_command_help(cmd, prefix: str, parent_ctx):
        click.secho(f"\n━━━ {prefix} ━━━", fg="cyan", bold=True)
        sub_ctx = click.Context(cmd, info_name=prefix.split()[-1], parent=parent_ctx)
        click.echo(cmd.get_help(sub_ctx))

    click.secho("━━━ shellspec ━━━", fg="cyan", bold=True)
    click.echo(ctx.get_help())

    for name, cmd in sorted(cli.commands.items()):
        _print_command_help(cmd, f"shellspec {name}", ctx)

    ctx.exit(0)


def _configure_logging(verbose: int) -> None:
    from .._core.config import Config

    if verbose >= 2:
        level = "DEBUG"
    elif verbose == 1:
        level = "INFO"
    else:
        try:
            level = Config.get_log_level()
        except ValueError as e:
            fail(e, EXIT_CONFIG)
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _write(result, output, fmt) -> None:
    from .._core.export import export_density, export_json, export_mc, export_weyl, save
    from .._core.models import McResult
    from .._core.spectral import DensityEstimate

    if output:
        for path in save(result, output, fmt):
            click.secho(f"Wrote {path}", fg="green", err=True)
        return
    if fmt == "json":
        click.echo(export_json(result))
    elif isinstance(result, DensityEstimate):
        click.echo(export_density(result), nl=False)
    elif isinstance(result, McResult):
        click.echo(export_mc(result), nl=False)
    else:
        click.echo(export_weyl(result), nl=False)


def _output_options(fn):
    fn = click.option(
        "--format",
        "fmt",
        type=click.Choice(["csv", "json"]),
        default="csv",
        help="Output format (default: csv)",
    )(fn)
    fn = click.option("-o", "--output", type=click.Path(), help="Write to file instead of stdout")(fn)
    return fn


def _grid_options(fn):
    fn = click.option("--points", type=int, default=201, help="Number of grid points")(fn)
    fn = click.option("--lmax", type=float, default=2.0, help="Upper end of the lambda grid")(fn)
    fn = click.option("--lmin", type=float, default=-2.0, help="Lower end of the lambda grid")(fn)
    return fn


@click.group(cls=AliasedGroup, context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, "-V", "--version")
@click.option("-v", "--verbose", count=True, help="Log INFO (-v) or DEBUG (-vv) to stderr")
@click.option("--threads", type=int, default=None, help="Worker cap (overrides SHELLSPEC_THREADS)")
@click.option("--rank-tol", type=float, default=None, help="Relative SVD rank cutoff")
@click.option("--cond-max", type=float, default=None, help="Largest accepted condition number")
@click.option("--eig-tol", type=float, default=None, help="Eigenvalue exclusion radius")
@click.option(
    "--help-recursive",
    is_flag=True,
    is_eager=True,
    expose_value=False,
    callback=_print_recursive_help,
    help="Show help for all commands recursively.",
)
def cli(verbose, threads, rank_tol, cond_max, eig_tol):
    """
    Spectral diagnostics for shell-structured self-adjoint operators.

    \b
    Models are JSON specs (file or inline) or weighted graphs:
      shellspec density -m '{"kind": "stair", "depth": 200}' --points 400
      shellspec weyl -g graph.json --root 0 --z 0+1i

    \b
    Configuration precedence (highest -> lowest):
      1. CLI flags
      2. SHELLSPEC_* environment variables (see show-config)
      3. built-in defaults
    """
    from .._core.config import Config

    _configure_logging(verbose)
    if threads is not None:
        try:
            Config.set_threads(threads)
        except ValueError as e:
            fail(e, EXIT_CONFIG)
    if (rank_tol, cond_max, eig_tol) != (None, None, None):
        try:
            Config.set_tolerance(tolerance_override(rank_tol, cond_max, eig_tol))
        except ValueError as e:
            fail(e, EXIT_CONFIG)


@cli.command("density")
@model_options
@_grid_options
@click.option("--no-masses", is_flag=True, help="Skip point-mass detection")
@policy_options
@_output_options
def density_cmd(
    model, graph, root, depth, lmin, lmax, points, no_masses,
    no_perturb, pseudo, output, fmt,
):
    """Averaged spectral density on a lambda grid.

    \b
    CSV columns: lambda,density,min_norm,stieltjes_re,stieltjes_im,flag
    With -o out.csv the point masses go to out.masses.csv.

    \b
    Example:
      $ shellspec density -m chain.json --lmin -1.9 --lmax 1.9 --points 400
      $ shellspec density -g tree.json -o tree.csv
    """
    from .._core.models import build_model
    from .._core.spectral import density_curve

    try:
        spec = load_model(model, graph, root, depth)
        grid = make_grid(lmin, lmax, points)
        policy = sweep_policy(no_perturb, pseudo)
    except (ValueError, OSError) as e:
        fail(e, EXIT_CONFIG)

    try:
        so, cd = build_model(spec)
        estimate = density_curve(so, cd, grid, so.depth, policy, masses=not no_masses)
    except _RUN_ERRORS as e:
        fail(e, EXIT_MODEL)

    flagged = sum(1 for f in estimate.flags if f != "ok")
    if flagged:
        click.secho(f"{flagged} of {len(grid)} grid points flagged", fg="yellow", err=True)
    _write(estimate, output, fmt)


@cli.command("weyl")
@model_options
@click.option("--z", "z_text", default="0+1i", help="Spectral parameter a+bi with b > 0 (default: 0+1i)")
@click.option("--depths", default=None, help="Depths as a..b or n1,n2,... (default: 0..depth)")
@policy_options
@_output_options
def weyl_cmd(
    model, graph, root, depth, z_text, depths,
    no_perturb, pseudo, output, fmt,
):
    """Weyl disc centers and radii against the deepest root resolvent.

    \b
    CSV columns: n,center_re,center_im,radius,truth_re,truth_im

    \b
    Example:
      $ shellspec weyl -m chain.json --z 0+1i --depths 1..200
      $ shellspec weyl -m '{"kind": "stair", "depth": 0}'
    """
    from .._core.models import build_model
    from .._core.weyl import limit_point_diagnostic

    try:
        spec = load_model(model, graph, root, depth)
        z = parse_complex(z_text)
        if z.imag <= 0:
            raise ValueError(f"Weyl discs need Im z > 0, got z={z_text}")
        policy = sweep_policy(no_perturb, pseudo)
    except (ValueError, OSError) as e:
        fail(e, EXIT_CONFIG)

    try:
        so, cd = build_model(spec)
    except _RUN_ERRORS as e:
        fail(e, EXIT_MODEL)

    try:
        depth_list = parse_depths(depths, so.depth)
    except ValueError as e:
        fail(e, EXIT_CONFIG)

    try:
        table = limit_point_diagnostic(so, cd, z, depth_list, policy)
    except _RUN_ERRORS as e:
        fail(e, EXIT_MODEL)
    _write(table, output, fmt)


@cli.command("mc")
@click.option("-m", "--model", required=True, help="Model spec: JSON file or inline JSON object")
@click.option("-d", "--depth", type=int, default=None, help="Override the model depth")
@_grid_options
@click.option("--depths", default=None, help="Depths as a..b or n1,n2,... (default: 0..depth)")
@click.option("--trials", type=int, default=64, help="Monte Carlo trials (at least 16)")
@click.option("--seed", type=int, default=None, help="Override the model seed")
@_output_options
def mc_cmd(model, depth, lmin, lmax, points, depths, trials, seed, output, fmt):
    """Fourth moment of the conjugated transfer product with its bound.

    \b
    CSV columns: lambda,n,fourth_moment,stderr,bound_product

    \b
    Example:
      $ shellspec mc -m stair.json --lmin -0.5 --lmax 0.5 --points 5 --depths 0,100,200
    """
    from .._core.models import MIN_TRIALS, fourth_moment_run

    try:
        spec = load_model(model, depth=depth, seed=seed)
        grid = make_grid(lmin, lmax, points) if points > 1 else np.array([lmin])
        depth_list = parse_depths(depths, spec.depth)
        if trials < MIN_TRIALS:
            raise ValueError(f"Invalid trials: {trials}. Use at least {MIN_TRIALS}")
        if spec.kind == "custom":
            raise ValueError("Monte Carlo runs need a built-in model, not a custom graph")
    except (ValueError, OSError) as e:
        fail(e, EXIT_CONFIG)

    try:
        result = fourth_moment_run(spec, grid, depth_list, trials)
    except _RUN_ERRORS as e:
        fail(e, EXIT_MODEL)
    _write(result, output, fmt)


@cli.command("verify")
@click.option(
    "--suite",
    type=click.Choice(["all", "algebra", "weyl", "spectral", "models"]),
    default="all",
    help="Property suite to run (default: all)",
)
@click.option("--seed", type=int, default=0, help="Master seed (default: 0)")
@click.option("--inject-fault", "fault", type=click.Choice(["sign"]), default=None, help="Run against a known-broken composition")
@click.option("--json", "as_json", is_flag=True, help="Output as JSON")
@click.option("--save", "save_path", type=click.Path(), help="Save results to file")
@click.option(
    "--save-format",
    type=click.Choice(["text", "json"]),
    default="json",
    help="Format for --save (default: json)",
)
def verify_cmd(suite, seed, fault, as_json, save_path, save_format):
    """Run the numerical property suites; exit 1 if any property fails.

    \b
    Example:
      $ shellspec verify
      $ shellspec verify --suite algebra --json
      $ shellspec verify --inject-fault sign   # must fail
    """
    from .._core.verify import run_suites

    result = run_suites(suite=suite, seed=seed, fault=fault)

    if as_json:
        click.echo(json.dumps(result.to_dict(), indent=2))
    else:
        click.echo(result._format_text())

    if save_path:
        path = result.save(save_path, format=save_format)
        click.secho(f"Saved to {path}", fg="green", err=True)

    if not result.ok:
        sys.exit(EXIT_VERIFY_FAILED)


@cli.command("partition")
@click.option("-g", "--graph", required=True, help="Graph JSON file")
@click.option("--root", type=int, default=0, help="Root vertex (default: 0)")
@click.option("--shells", default=None, help="Candidate partition as a JSON list of vertex lists")
@click.option("--probes", type=int, default=3, help="(A2) probes per shell")
@click.option("--seed", type=int, default=0, help="Probe seed")
@click.option("--json", "as_json", is_flag=True, help="Output as JSON")
def partition_cmd(graph, root, shells, probes, seed, as_json):
    """Shell partition of a graph with channel ranks and (A2) probes.

    \b
    Example:
      $ shellspec partition -g graph.json --root 0
      $ shellspec partition -g graph.json --shells '[[1,2],[0,3]]' --json
    """
    from .._core.graph import (
        ShellPartition,
        WeightedGraph,
        bfs_partition,
        channel_decomposition,
        check_A2,
        extract_shell_operator,
        group_shells,
        validate_partition,
    )

    try:
        g = WeightedGraph.load(graph)
        candidate = ShellPartition.from_lists(json.loads(shells)) if shells else None
    except (ValueError, OSError) as e:
        fail(e, EXIT_CONFIG)

    try:
        p = candidate if candidate is not None else bfs_partition(g, root)
        violations = validate_partition(g, p)
        report = {"partition": p.to_dict(), "violations": [list(v) for v in violations]}
        if not violations:
            so = extract_shell_operator(g, p)
            cd = channel_decomposition(so)
            grouped, grouping = group_shells(so, probe_count=probes, seed=seed)
            report["ranks"] = list(cd.ranks)
            report["grouping"] = grouping
            report["a2"] = [r.to_dict() for r in check_A2(so, cd, probes, seed)]
            report["grouped_sizes"] = grouped.sizes
    except _RUN_ERRORS as e:
        fail(e, EXIT_MODEL)

    if as_json:
        click.echo(json.dumps(report, indent=2))
    else:
        click.secho(f"Shells ({len(p.sizes)}):", fg="cyan", bold=True)
        for n, shell in enumerate(report["partition"]["shells"]):
            click.echo(f"  S_{n}: {shell}")
        if violations:
            click.secho(f"Violations: {report['violations']}", fg="red")
        else:
            click.echo(f"Ranks: {report['ranks']}")
            click.echo(f"Grouping: {report['grouping']}")
            failing = [r["shell"] for r in report["a2"] if not r["full_rank"]]
            if failing:
                click.secho(f"(A2) not certified on shells {failing}", fg="yellow")
            else:
                click.secho("(A2) certified on all probed shells", fg="green")

    if violations:
        sys.exit(EXIT_MODEL)


from .status import status_cmd  # noqa: E402

cli.add_command(status_cmd)


def main():
    """Main entry point."""
    cli()


if __name__ == "__main__":
    main()

# EOF
