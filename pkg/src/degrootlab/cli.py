"""Command-line front end: scenario runs, built-in recipes, recipe listing."""
from __future__ import annotations

import sys

import click

from .errors import ConfigError, SolverError
from .recipes import list_recipes, run_recipe
from .results import write_result
from .scenario import resolve_output_dir, run_scenario

EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4


def _fail(code: int, message) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(result, paths) -> None:
    for line in result.lines:
        click.echo(line)
    for path in paths:
        click.echo(f"wrote {path}")


@click.group()
def main():
    """Social-learning simulation toolkit.

    Networks aggregate opinions by repeated weighted averaging; agents
    pick signal precision against a cost, and similarity kernels turn
    attention choices into the network itself. Scenarios are TOML files;
    recipes replay the built-in benchmark examples.
    """


@main.command()
@click.argument("config", type=click.Path())
@click.option("--output-dir", "-o", default=None, metavar="DIR",
              help="Directory for CSV and matrix output (overrides env and config).")
@click.option("--seed", type=int, default=None,
              help="Random seed (overrides the config's).")
@click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
              help="Override a config field, e.g. --set kernel.alpha=2.0.")
def run(config, output_dir, seed, overrides):
    """Run the scenario described by a TOML config file."""
    pairs = []
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            _fail(EXIT_CONFIG, f"--set needs KEY=VALUE, got {item!r}")
        pairs.append((key, raw))
    try:
        result, paths = run_scenario(
            config, output_dir=output_dir, seed=seed, overrides=pairs
        )
    except ConfigError as exc:
        _fail(EXIT_CONFIG, exc)
    except SolverError as exc:
        _fail(EXIT_SOLVER, exc)
    except ValueError as exc:
        _fail(EXIT_CONFIG, exc)
    except OSError as exc:
        _fail(EXIT_IO, exc)
    _emit(result, paths)


@main.command()
@click.argument("name")
@click.option("--output-dir", "-o", default=None, metavar="DIR",
              help="Directory for CSV and matrix output (overrides env).")
def recipe(name, output_dir):
    """Run a built-in reproduction recipe by name."""
    try:
        result = run_recipe(name)
        paths = write_result(result, resolve_output_dir(output_dir, {}))
    except ConfigError as exc:
        _fail(EXIT_CONFIG, exc)
    except SolverError as exc:
        _fail(EXIT_SOLVER, exc)
    except ValueError as exc:
        _fail(EXIT_CONFIG, exc)
    except OSError as exc:
        _fail(EXIT_IO, exc)
    _emit(result, paths)


@main.command(name="list")
def list_cmd():
    """List the built-in recipe names."""
    for name in list_recipes():
        click.echo(name)


if __name__ == "__main__":
    main()
