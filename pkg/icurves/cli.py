'''
Command line interface.

Exit codes: 0 success, 1 failed checks, 2 invalid recipe or inadmissible
angular function, 3 expression error, 4 bad curve file, 5 unknown export
format.
'''
import contextlib
import json
import logging
import os
import typing

import click

from .curvefile import CurveFileError, export_gnuplot, export_obj, read_csv, write_csv
from .exprlang import ExprError
from .families import FamilyError
from .frenet import CurvatureError, DegenerateCurveError
from .intrinsic import DomainViolation
from .numerics import FrameError, GridError
from .recipe import (AnalysisReport, CLOSED_NUMERIC_TOL, Recipe, RecipeError,
    analyze as analyze_table, check_n, curve_table, verify_family)


EXIT_FAILED_CHECKS = 1
EXIT_RECIPE = 2
EXIT_EXPRESSION = 3
EXIT_CURVE_FILE = 4
EXIT_FORMAT = 5

EXPORT_FORMATS = ('obj', 'gnuplot')


def _fail(message: str, code: int) -> typing.NoReturn:
    click.echo(f'error: {message}', err=True)
    raise SystemExit(code)


@contextlib.contextmanager
def _exit_codes():
    ''' Translate library errors into the documented exit codes. '''
    try:
        yield
    except DomainViolation as exc:
        click.echo(json.dumps(exc.report.to_json()), err=True)
        _fail(str(exc), EXIT_RECIPE)
    except ExprError as exc:
        _fail(str(exc), EXIT_EXPRESSION)
    except CurveFileError as exc:
        _fail(str(exc), EXIT_CURVE_FILE)
    except (RecipeError, FamilyError, GridError, FrameError, DegenerateCurveError,
            CurvatureError) as exc:
        _fail(str(exc), EXIT_RECIPE)
    except OSError as exc:
        _fail(str(exc), EXIT_RECIPE)


def _write_report(report: AnalysisReport, json_path: typing.Optional[str]):
    text = json.dumps(report.to_json(), indent=2)
    if json_path is None:
        click.echo(text)
    else:
        with open(json_path, 'w') as handle:
            handle.write(text + '\n')
        status = 'passed' if report.passed else 'FAILED'
        click.echo(f'{len(report.checks)} checks, {status}; report written to '
            f'{json_path}')


def _validate_n(ctx, param, value):
    if value is None:
        return None
    try:
        return check_n(value)
    except RecipeError as exc:
        raise click.BadParameter(str(exc))


@click.group()
def cli():
    ''' Build and verify curves from intrinsic fraction functions. '''


@cli.command()
@click.option('--recipe', 'recipe_path', required=True,
    type=click.Path(exists=True, dir_okay=False), help='Recipe JSON file.')
@click.option('--out', 'out_path', required=True, type=click.Path(dir_okay=False),
    help='Curve CSV to write.')
@click.option('--n', type=int, default=None, callback=_validate_n,
    help='Grid size, overriding the recipe and FRENET_DEFAULT_N.')
def generate(recipe_path, out_path, n):
    ''' Generate a curve CSV from a recipe. '''
    with _exit_codes():
        recipe = Recipe.load(recipe_path)
        family = recipe.generate(n)
        table = curve_table(family)
        write_csv(out_path, table)
        base = os.path.splitext(out_path)[0]
        if 'obj' in recipe.outputs:
            with open(base + '.obj', 'w') as handle:
                handle.write(export_obj(table))
        if 'gnuplot' in recipe.outputs:
            with open(base + '.gp', 'w') as handle:
                handle.write(export_gnuplot(table, out_path))
        if 'report' in recipe.outputs:
            with open(base + '.report.json', 'w') as handle:
                json.dump(verify_family(family).to_json(), handle, indent=2)
    click.echo(f'wrote {family.grid.n} samples to {out_path}')


@cli.command()
@click.option('--in', 'in_path', required=True,
    type=click.Path(exists=True, dir_okay=False), help='Curve CSV to analyze.')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), default=None,
    help='Write the report here instead of standard output.')
@click.option('--tol-rel', type=float, default=CLOSED_NUMERIC_TOL, show_default=True,
    help='Relative tolerance for comparisons against kappa and tau columns.')
def analyze(in_path, json_path, tol_rel):
    ''' Compute the numeric Frenet apparatus of a curve CSV. '''
    with _exit_codes():
        report = analyze_table(read_csv(in_path), tol_rel)
        _write_report(report, json_path)


@cli.command()
@click.option('--recipe', 'recipe_path', required=True,
    type=click.Path(exists=True, dir_okay=False), help='Recipe JSON file.')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), default=None,
    help='Write the report here instead of standard output.')
@click.option('--n', type=int, default=None, callback=_validate_n,
    help='Grid size, overriding the recipe and FRENET_DEFAULT_N.')
def verify(recipe_path, json_path, n):
    ''' Generate a recipe's curve and check it against every applicable oracle. '''
    with _exit_codes():
        report = verify_family(Recipe.load(recipe_path).generate(n))
        _write_report(report, json_path)
    if not report.passed:
        names = ', '.join(c.name for c in report.failed())
        _fail(f'failed checks: {names}', EXIT_FAILED_CHECKS)


@cli.command()
@click.option('--in', 'in_path', required=True,
    type=click.Path(exists=True, dir_okay=False), help='Curve CSV to export.')
@click.option('--format', 'format_', required=True,
    help=f'One of {", ".join(EXPORT_FORMATS)}.')
@click.option('--out', 'out_path', required=True, type=click.Path(dir_okay=False),
    help='File to write.')
def export(in_path, format_, out_path):
    ''' Export a curve CSV as an OBJ polyline or a gnuplot script. '''
    if format_ not in EXPORT_FORMATS:
        _fail(f'unknown format {format_!r}, expected one of '
            f'{", ".join(EXPORT_FORMATS)}', EXIT_FORMAT)
    with _exit_codes():
        table = read_csv(in_path)
        if format_ == 'obj':
            text = export_obj(table)
        else:
            text = export_gnuplot(table, in_path)
        with open(out_path, 'w') as handle:
            handle.write(text)
    click.echo(f'wrote {format_} export to {out_path}')


def main():
    logging.basicConfig(level=getattr(logging,
        os.environ.get('LOG_LEVEL', 'warning').upper()))
    cli()


if __name__ == '__main__':
    main()
