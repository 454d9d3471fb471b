#!/usr/bin/env python3
"""Show-config command for shellspec CLI."""

import sys

import click


@click.command("show-config")
@click.option("--json", "as_json", is_flag=True, help="Output as JSON")
def status_cmd(as_json):
    """Show environment variables and the effective numerical policy.

    \b
    Example:
      $ shellspec show-config
      $ shellspec show-config --json
    """
    import json as json_module
    import os

    from .._core.config import ENV_VARS, Config

    try:
        tolerance = Config.get_tolerance()
        threads = Config.get_threads()
        log_level = Config.get_log_level()
    except ValueError as e:
        if as_json:
            click.echo(json_module.dumps({"status": "error", "error": str(e)}, indent=2))
        else:
            click.secho(f"Error: {e}", fg="red", err=True)
        sys.exit(2)

    if as_json:
        data = {
            "status": "ok",
            "env": {name: os.environ.get(name) for name, _ in ENV_VARS},
            "tolerance": tolerance.to_dict(),
            "threads": threads,
            "log_level": log_level,
        }
        click.echo(json_module.dumps(data, indent=2))
        return

    click.secho("shellspec - Configuration", fg="cyan", bold=True)
    click.echo("=" * 50)
    click.echo()

    click.echo("Environment Variables:")
    click.echo()
    for var_name, description in ENV_VARS:
        value = os.environ.get(var_name)
        if value:
            click.echo(f"  {var_name}={value}")
        else:
            click.echo(f"  {var_name} (not set)")
        click.echo(f"      | {description}")
        click.echo()

    click.echo("Effective Policy:")
    for key, value in tolerance.to_dict().items():
        click.echo(f"  {key}: {value:g}")
    click.echo(f"  threads: {threads}")
    click.echo(f"  log_level: {log_level}")


# EOF
