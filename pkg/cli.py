"""
Command-line interface for schlicht-bounds.

Emits bound tables, improvement comparisons, member coefficient dumps and
verification reports as JSON or CSV on stdout (or --out). Logs go to stderr.

Usage:
    python cli.py bounds --formula cor1 --lambda 0 --A 1 --B -1 --n 2..6
    python cli.py compare --lambda 1/2 --A 1 --B 0 --n-max 8 --format csv
    python cli.py member --class-kind K --lambda 1 --w-g monomial:1 --w-q blaschke:1/2 --at 1/2
    python cli.py verify --preset quasi --samples 500 --seed 7 --out report.json
    python cli.py presets
    python cli.py --format csv --order 12 --seed 7 member --named QCV --A 1 --B 0

Global --format, --out, --seed and --order apply to every command; the same
flags given after a command name override them.

Exit codes: 0 success, 1 violations found, 2 usage error.
"""

from __future__ import annotations

import io
import logging
import math
import os
import sys
from typing import Dict, List, Optional

import click

from bounds import FORMULAS, bound_for, bound_table, compare_improvement, improvement_holds, params_for
from membership import CLASS_KINDS, ClassSpec, OperatorParams, make_member, named_class
from records import (
    FORMATS,
    bound_table_document,
    comparison_document,
    lattice_report_document,
    member_document,
    preset_list_document,
    suite_report_document,
    verification_report_document,
    write_document,
)
from schlicht_classes import PhiFamily, SchwarzSpec, parse_point, prime0_abs
from series_core import DEFAULT_ORDER, Backend, SchlichtError, UsageError, parse_rational
from verify import (
    BACKEND_CHOICES,
    SuiteReport,
    VerificationConfig,
    draw_witnesses,
    evaluate_member,
    load_presets,
    load_suite_config,
    run_suite,
    verify_config,
    verify_specialization_lattice,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2

LOG_LEVEL = os.getenv('SCHLICHT_LOG_LEVEL', 'WARNING')
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

# Seeds are unsigned 64-bit integers.
MAX_SEED = 2 ** 64 - 1
DEFAULT_N_MAX = 10
LATTICE_N_MAX = 20


def _rational(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_rational(value)
    except UsageError as e:
        raise click.BadParameter(str(e))


def _family(ctx, param, value):
    if value is None:
        return None
    try:
        return PhiFamily.parse(value)
    except SchlichtError as e:
        raise click.BadParameter(str(e))


def _witness(ctx, param, value):
    if value is None:
        return None
    try:
        return SchwarzSpec.parse(value)
    except SchlichtError as e:
        raise click.BadParameter(str(e))


def parse_n_range(text: str) -> List[int]:
    """``a..b`` (inclusive), ``a,b,c`` or a single integer; every n must be >= 2."""
    text = (text or '').strip()
    try:
        if '..' in text:
            start, stop = text.split('..', 1)
            ns = list(range(int(start), int(stop) + 1))
        else:
            ns = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise UsageError(f"Cannot parse n range {text!r} (use a..b, a,b,c or n)")
    if not ns:
        raise UsageError(f"Empty n range {text!r}")
    if min(ns) < 2:
        raise UsageError(f"Coefficient bounds start at n = 2, got {min(ns)}")
    return ns


def _n_range(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_n_range(value)
    except UsageError as e:
        raise click.BadParameter(str(e))


def output_options(f):
    f = click.option('--out', 'out', type=click.Path(dir_okay=False), default=None,
                     help='Write to this file instead of stdout (overrides the global --out)')(f)
    f = click.option('--format', 'fmt', type=click.Choice(FORMATS), default=None,
                     help='Output format (overrides the global --format)')(f)
    return f


def run_options(f):
    f = click.option('--order', 'order', type=click.IntRange(min=3), default=None,
                     help='Truncation order N (overrides the global --order)')(f)
    f = click.option('--seed', 'seed', type=click.IntRange(min=0, max=MAX_SEED), default=None,
                     help='Random seed (overrides the global --seed)')(f)
    return f


def inherited(ctx: click.Context, name: str, value, default=None):
    """A subcommand value, else the global flag of the same name, else ``default``."""
    if value is not None:
        return value
    shared = (ctx.obj or {}).get(name)
    return default if shared is None else shared


def emit(ctx: click.Context, doc: Dict, fmt: Optional[str], out: Optional[str]):
    fmt, out = inherited(ctx, 'fmt', fmt, 'json'), inherited(ctx, 'out', out)
    if out:
        with open(out, 'w', encoding='utf-8', newline='') as f:
            write_document(doc, fmt, f)
        logger.info(f"Wrote {doc['record_type']} to {out}")
    else:
        buffer = io.StringIO()
        write_document(doc, fmt, buffer)
        click.echo(buffer.getvalue(), nl=False)


def fail(error: Exception):
    logger.error(f"{type(error).__name__}: {error}")
    click.echo(f"Error: {error}", err=True)
    sys.exit(EXIT_USAGE)


@click.group()
@click.option('--log-level', default=LOG_LEVEL, show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              help='Logging level (stderr)')
@click.option('-v', '--verbose', is_flag=True, help='Shortcut for --log-level INFO')
@click.option('--format', 'fmt', type=click.Choice(FORMATS), default='json', show_default=True,
              help='Output format for every command')
@click.option('--out', 'out', type=click.Path(dir_okay=False), default=None,
              help='Write to this file instead of stdout')
@click.option('--seed', 'seed', type=click.IntRange(min=0, max=MAX_SEED), default=None,
              help='Random seed for commands that draw witnesses')
@click.option('--order', 'order', type=click.IntRange(min=3), default=None,
              help='Truncation order N; also the default n range of bounds/compare/lattice')
@click.pass_context
def cli(ctx: click.Context, log_level: str, verbose: bool, fmt: str, out: Optional[str],
        seed: Optional[int], order: Optional[int]):
    """
    Coefficient bounds for comprehensive classes of analytic functions.

    Examples:

        schlicht bounds --formula thm1 --lambda 1/2 --delta 1/4 --phi1 2 --psi1 2 --n 2..8

        schlicht compare --lambda 0 --A 1 --B 0 --n-max 5

        schlicht verify --preset extremal --class-kind K
    """
    ctx.ensure_object(dict)
    ctx.obj.update(fmt=fmt, out=out, seed=seed, order=order)
    level = 'INFO' if verbose and log_level.upper() in ('WARNING', 'ERROR') else log_level.upper()
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT, stream=sys.stderr, force=True)


@cli.command()
@click.option('--formula', 'formulas', multiple=True, required=True,
              type=click.Choice(sorted(FORMULAS)), help='Formula id (repeatable)')
@click.option('--lambda', 'lam', callback=_rational, help='lambda (p/q)')
@click.option('--delta', 'delta', callback=_rational, help='delta (p/q)')
@click.option('--phi1', 'phi1', callback=_rational, help="|phi'(0)| (p/q)")
@click.option('--psi1', 'psi1', callback=_rational, help="|psi'(0)| (p/q)")
@click.option('--phi', 'phi', callback=_family, help="Take |phi'(0)| from a family (halfplane | janowski:A:B | order:alpha)")
@click.option('--psi', 'psi', callback=_family, help="Take |psi'(0)| from a family")
@click.option('--A', 'A', callback=_rational, help='Janowski A (p/q)')
@click.option('--B', 'B', callback=_rational, help='Janowski B (p/q)')
@click.option('--alpha', 'alpha', callback=_rational, help='alpha (p/q)')
@click.option('--beta', 'beta', callback=_rational, help='beta (p/q)')
@click.option('--n', 'ns', default=None, callback=_n_range,
              help='n range: a..b, a,b,c or n (default 2..order, order 10)')
@run_options
@output_options
@click.pass_context
def bounds(ctx, formulas, lam, delta, phi1, psi1, phi, psi, A, B, alpha, beta, ns, seed, order, fmt, out):
    """
    Evaluate coefficient-bound formulas exactly.

    Examples:

        schlicht bounds --formula cor1 --lambda 0 --A 1 --B -1 --n 2..6

        schlicht --format csv bounds --formula thm1 --formula thm2 --lambda 1/2 --delta 1/4 --phi halfplane --psi halfplane
    """
    params = {'lam': lam, 'delta': delta, 'phi1': phi1, 'psi1': psi1,
              'A': A, 'B': B, 'alpha': alpha, 'beta': beta}
    if ns is None:
        ns = list(range(2, inherited(ctx, 'order', order, DEFAULT_N_MAX) + 1))
    try:
        if params['phi1'] is None and phi is not None:
            params['phi1'] = prime0_abs(phi)
        if params['psi1'] is None and psi is not None:
            params['psi1'] = prime0_abs(psi)
        rows = bound_table(formulas, params, ns)
    except SchlichtError as e:
        fail(e)
    emit(ctx, bound_table_document(rows, formulas, params), fmt, out)


@cli.command()
@click.option('--lambda', 'lam', required=True, callback=_rational, help='lambda (p/q)')
@click.option('--A', 'A', required=True, callback=_rational, help='Janowski A (p/q)')
@click.option('--B', 'B', required=True, callback=_rational, help='Janowski B (p/q)')
@click.option('--n-max', 'n_max', default=None, type=int, help='Largest n (default: the order, else 10)')
@run_options
@output_options
@click.pass_context
def compare(ctx, lam, A, B, n_max, seed, order, fmt, out):
    """
    Compare the Q_CV/Q_ST bounds with the earlier Janowski-type bounds.

    Exits 1 if any row has cor1 > thmA or cor2 > thmB.
    """
    if n_max is None:
        n_max = inherited(ctx, 'order', order, DEFAULT_N_MAX)
    try:
        rows = compare_improvement(lam, A, B, n_max)
    except SchlichtError as e:
        fail(e)
    emit(ctx, comparison_document(lam, A, B, rows), fmt, out)
    if not all(improvement_holds(row) for row in rows):
        sys.exit(EXIT_VIOLATIONS)


@cli.command()
@click.option('--class-kind', 'kind', type=click.Choice(CLASS_KINDS), default='K', show_default=True,
              help='K_{lambda,delta} or S_{lambda,delta}')
@click.option('--named', 'named', default=None,
              help='Classical class name (QK, C, CS, CCV, CST, QCV, Q_CV, Q_ST, libera, close-to-convex, ...)')
@click.option('--lambda', 'lam', callback=_rational, help='lambda (p/q), default 0')
@click.option('--delta', 'delta', callback=_rational, help='delta (p/q), default 0')
@click.option('--phi', 'phi', callback=_family, help='Comparison family for the quotient, default halfplane')
@click.option('--psi', 'psi', callback=_family, help='Comparison family for g, default halfplane')
@click.option('--A', 'A', callback=_rational, help='Janowski A for --named classes')
@click.option('--B', 'B', callback=_rational, help='Janowski B for --named classes')
@click.option('--alpha', 'alpha', callback=_rational, help='alpha for --named libera')
@click.option('--beta', 'beta', callback=_rational, help='beta for --named libera')
@click.option('--w-g', 'w_g', callback=_witness, help='Schwarz witness for g (zero | monomial:m | rotation:theta | blaschke:re,im)')
@click.option('--w-q', 'w_q', callback=_witness, help='Schwarz witness for the quotient')
@click.option('--backend', 'backend', type=click.Choice(['auto', 'exact', 'float']), default='auto', show_default=True)
@click.option('--at', 'at', default=None, help='Also evaluate f, g and the quotient at this point (re[,im])')
@run_options
@output_options
@click.pass_context
def member(ctx, kind, named, lam, delta, phi, psi, A, B, alpha, beta, w_g, w_q, backend, at, seed, order, fmt, out):
    """
    Build a class member from two Schwarz witnesses and dump its coefficients.

    Missing witnesses are drawn from --seed, or default to monomial:1.

    Examples:

        schlicht member --class-kind S --w-g monomial:1 --w-q monomial:1 --order 8

        schlicht --seed 3 member --named QCV --A 1 --B 0 --format csv
    """
    seed = inherited(ctx, 'seed', seed)
    order = inherited(ctx, 'order', order, DEFAULT_ORDER)
    try:
        if named:
            spec = named_class(named, lam=lam, A=A, B=B, alpha=alpha, beta=beta, phi=phi, psi=psi)
        else:
            half = PhiFamily.half_plane()
            spec = ClassSpec(kind, OperatorParams(lam or 0, delta or 0), phi or half, psi or half)
        if w_g is None or w_q is None:
            drawn = draw_witnesses(seed, 0) if seed is not None else (SchwarzSpec.monomial(1), SchwarzSpec.monomial(1))
            w_g, w_q = w_g or drawn[0], w_q or drawn[1]
        point = parse_point(at) if at is not None else None
        requested = None if backend == 'auto' else Backend(backend)

        witness = make_member(spec, w_g, w_q, order, requested)
        bounds_n = [bound_for(spec, n) for n in range(2, order + 1)]
        outcome = evaluate_member(witness, bounds_n, params_for(spec).phi1)
    except SchlichtError as e:
        fail(e)
    ratios = [math.sqrt(r) for r in outcome.ratio_sq]
    emit(ctx, member_document(witness, bounds_n, ratios, point), fmt, out)
    if outcome.violations:
        logger.warning(f"{len(outcome.violations)} violation(s) for {spec.label}")
        sys.exit(EXIT_VIOLATIONS)


@cli.command()
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Suite config JSON (default: the bundled default suite)')
@click.option('--preset', 'preset_ids', multiple=True, help='Preset id (repeatable); overrides the config list')
@click.option('--class-kind', 'kinds', multiple=True, type=click.Choice(CLASS_KINDS),
              help='Class kind (repeatable); overrides the config kinds')
@click.option('--lambda', 'lam', callback=_rational, help='Custom class: lambda (p/q)')
@click.option('--delta', 'delta', callback=_rational, help='Custom class: delta (p/q)')
@click.option('--phi', 'phi', callback=_family, help='Custom class: comparison family for the quotient')
@click.option('--psi', 'psi', callback=_family, help='Custom class: comparison family for g')
@click.option('--samples', 'samples', type=click.IntRange(min=1), default=None, help='Samples per class')
@click.option('--workers', 'workers', type=click.IntRange(min=1), default=None, help='Worker processes')
@click.option('--tolerance', 'tolerance', type=float, default=None, help='Floating ratio tolerance')
@click.option('--backend', 'backend', type=click.Choice(BACKEND_CHOICES), default=None)
@click.option('--lattice/--no-lattice', 'lattice', default=None, help='Run the specialization lattice')
@run_options
@output_options
@click.pass_context
def verify(ctx, config_path, preset_ids, kinds, lam, delta, phi, psi, samples, workers,
           tolerance, backend, lattice, seed, order, fmt, out):
    """
    Verify the coefficient bounds on randomly witnessed class members.

    Without --lambda/--phi/--psi the presets of a suite config are run;
    with them a single custom class is verified. Exits 1 on any violation.
    """
    try:
        config = load_suite_config(config_path)
        overrides = {'samples': samples, 'seed': inherited(ctx, 'seed', seed),
                     'order': inherited(ctx, 'order', order), 'workers': workers,
                     'tolerance': tolerance, 'backend': backend, 'lattice': lattice}
        config.update({k: v for k, v in overrides.items() if v is not None})
        if preset_ids:
            config['presets'] = list(preset_ids)
        if kinds:
            config['kinds'] = list(kinds)
        config = load_suite_config(config)

        if any(v is not None for v in (lam, delta, phi, psi)):
            doc, passed = _verify_custom(config, lam, delta, phi, psi)
        else:
            suite = run_suite(config)
            doc, passed = suite_report_document(suite), suite.passed
    except SchlichtError as e:
        fail(e)
    emit(ctx, doc, fmt, out)
    if not passed:
        sys.exit(EXIT_VIOLATIONS)


def _verify_custom(config: Dict, lam, delta, phi, psi):
    half = PhiFamily.half_plane()
    prm = OperatorParams(lam or 0, delta or 0)
    reports = []
    for kind in config['kinds']:
        cfg = VerificationConfig(ClassSpec(kind, prm, phi or half, psi or half), order=config['order'],
                                 sample_count=config['samples'], seed=config['seed'],
                                 backend=config['backend'], tolerance=config['tolerance'],
                                 workers=config['workers'], lemma2_checks=config['lemma2_checks'])
        reports.append(verify_config(cfg))
    if len(reports) == 1 and not config['lattice']:
        return verification_report_document(reports[0]), reports[0].passed
    suite = SuiteReport(config, reports, verify_specialization_lattice() if config['lattice'] else None)
    return suite_report_document(suite), suite.passed


@cli.command()
@click.option('--n-max', 'n_max', default=None, type=click.IntRange(min=2),
              help='Largest n (default: the order, else 20)')
@run_options
@output_options
@click.pass_context
def lattice(ctx, n_max, seed, order, fmt, out):
    """Check every exact identity between the bound formulas."""
    if n_max is None:
        n_max = inherited(ctx, 'order', order, LATTICE_N_MAX)
    report = verify_specialization_lattice(n_max)
    emit(ctx, lattice_report_document(report), fmt, out)
    if not report.passed:
        sys.exit(EXIT_VIOLATIONS)


@cli.command()
@run_options
@output_options
@click.pass_context
def presets(ctx, seed, order, fmt, out):
    """List the named class presets."""
    try:
        loaded = load_presets()
    except SchlichtError as e:
        fail(e)
    emit(ctx, preset_list_document(loaded), fmt, out)


def main():
    cli(prog_name='schlicht')


if __name__ == '__main__':
    main()
