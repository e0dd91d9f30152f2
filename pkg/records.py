"""
Output Records

Schema-versioned JSON and CSV encodings of everything the command line emits:
bound tables, improvement comparisons, member dumps, verification reports,
suite reports, lattice reports and the preset list.

Encoding rules:
- exact rationals are "numerator/denominator" strings (always with a denominator)
- floats are JSON numbers (shortest round-trip repr); non-finite floats are strings
- exact complex values are {"re": "p/q", "im": "p/q"}, floating ones {"re": float, "im": float}
- comparison functions and Schwarz witnesses use their textual forms (janowski:A:B, blaschke:re,im, ...)

CSV output carries the same cells, each encoded exactly as in JSON.

Usage:
    from records import bound_table_document, write_document

    doc = bound_table_document(rows, ['thm1'], params)
    write_document(doc, 'json', sys.stdout)
"""

from __future__ import annotations

import csv
import json
import logging
import math
from fractions import Fraction
from typing import Any, Dict, IO, List, Optional, Sequence, Tuple

from bounds import BoundRow, improvement_holds
from membership import ClassSpec, MemberWitness, OperatorParams
from schlicht_classes import GeneratedMember, PhiFamily, SchwarzSpec
from series_core import Backend, GaussianRational, Scalar, Series, UsageError, parse_rational
from verify import (
    ClassPreset,
    LatticeCheck,
    LatticeReport,
    SuiteReport,
    Violation,
    VerificationReport,
    WorstCase,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
FORMATS = ('json', 'csv')
RECORD_TYPES = ('bound_table', 'comparison', 'member', 'verification_report',
                'suite_report', 'lattice_report', 'preset_list')


class RecordError(UsageError):
    """Raised when a document cannot be decoded into its record type."""
    pass


# ============================================================================
# Scalars
# ============================================================================

def encode_number(value: Any):
    if isinstance(value, bool):
        raise RecordError(f"Cannot encode boolean {value!r} as a number")
    if isinstance(value, int):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    raise RecordError(f"Cannot encode number {value!r}")


def decode_number(value: Any):
    if isinstance(value, bool):
        raise RecordError(f"Not a number: {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        if '/' in value:
            return parse_rational(value)
        try:
            return float(value)
        except ValueError:
            raise RecordError(f"Not a number: {value!r}")
    raise RecordError(f"Not a number: {value!r}")


def encode_scalar(value: Scalar) -> Dict[str, Any]:
    if isinstance(value, GaussianRational):
        return {'re': encode_number(value.re), 'im': encode_number(value.im)}
    value = complex(value)
    return {'re': encode_number(value.real), 'im': encode_number(value.imag)}


def decode_scalar(data: Dict[str, Any]) -> Scalar:
    re, im = decode_number(data['re']), decode_number(data['im'])
    if isinstance(re, Fraction) and isinstance(im, Fraction):
        return GaussianRational(re, im)
    return complex(float(re), float(im))


# ============================================================================
# Domain values
# ============================================================================

def encode_series(s: Series) -> Dict[str, Any]:
    return {'backend': s.backend.value, 'order': s.order, 'lossy_top': s.lossy_top,
            'coeffs': [encode_scalar(c) for c in s.coeffs]}


def decode_series(data: Dict[str, Any]) -> Series:
    backend = Backend(data['backend'])
    coeffs = tuple(decode_scalar(c) for c in data['coeffs'])
    if len(coeffs) != data['order'] + 1:
        raise RecordError(f"Series of order {data['order']} has {len(coeffs)} coefficients")
    return Series(coeffs, backend, data.get('lossy_top', False))


def encode_family(fam: PhiFamily):
    if fam.is_builtin:
        return fam.describe()
    return {'kind': 'user', 'series': encode_series(fam.series)}


def decode_family(data: Any) -> PhiFamily:
    if isinstance(data, str):
        return PhiFamily.parse(data)
    return PhiFamily.user(decode_series(data['series']))


def encode_spec(spec: ClassSpec) -> Dict[str, Any]:
    return {'kind': spec.kind, 'lambda': encode_number(spec.params.lam),
            'delta': encode_number(spec.params.delta),
            'phi': encode_family(spec.phi), 'psi': encode_family(spec.psi)}


def decode_spec(data: Dict[str, Any]) -> ClassSpec:
    return ClassSpec(data['kind'], OperatorParams(decode_number(data['lambda']), decode_number(data['delta'])),
                     decode_family(data['phi']), decode_family(data['psi']))


def _encode_pair(pair: Tuple[SchwarzSpec, SchwarzSpec]) -> List[str]:
    return [pair[0].describe(), pair[1].describe()]


def _decode_pair(data: Sequence[str]) -> Tuple[SchwarzSpec, SchwarzSpec]:
    return SchwarzSpec.parse(data[0]), SchwarzSpec.parse(data[1])


def _header(record_type: str) -> Dict[str, Any]:
    return {'schema_version': SCHEMA_VERSION, 'record_type': record_type}


def _check_header(doc: Dict[str, Any], record_type: str):
    if doc.get('schema_version') != SCHEMA_VERSION:
        raise RecordError(f"Unsupported schema_version {doc.get('schema_version')!r}")
    if doc.get('record_type') != record_type:
        raise RecordError(f"Expected a {record_type} record, got {doc.get('record_type')!r}")


# ============================================================================
# Bound tables and comparisons
# ============================================================================

def bound_table_document(rows: List[BoundRow], formula_ids: Sequence[str],
                         params: Dict[str, Any]) -> Dict[str, Any]:
    doc = _header('bound_table')
    doc['formulas'] = list(formula_ids)
    doc['params'] = {name: encode_number(value) for name, value in params.items() if value is not None}
    doc['rows'] = [{'n': row.n, 'values': {k: encode_number(v) for k, v in row.values.items()}} for row in rows]
    return doc


def decode_rows(doc: Dict[str, Any]) -> List[BoundRow]:
    """Rows of a bound_table or comparison document."""
    if doc.get('record_type') not in ('bound_table', 'comparison'):
        raise RecordError(f"Expected a bound_table or comparison record, got {doc.get('record_type')!r}")
    _check_header(doc, doc['record_type'])
    return [BoundRow(r['n'], {k: decode_number(v) for k, v in r['values'].items()}) for r in doc['rows']]


def comparison_document(lam, A, B, rows: List[BoundRow]) -> Dict[str, Any]:
    doc = _header('comparison')
    doc['params'] = {'lam': encode_number(lam), 'A': encode_number(A), 'B': encode_number(B)}
    doc['rows'] = [{'n': row.n, 'values': {k: encode_number(v) for k, v in row.values.items()},
                    'improvement_holds': improvement_holds(row)} for row in rows]
    doc['improvement_holds'] = all(improvement_holds(row) for row in rows)
    return doc


# ============================================================================
# Members
# ============================================================================

def member_document(member: MemberWitness, bounds: List[Any], ratios: List[float],
                    at: Optional[Scalar] = None) -> Dict[str, Any]:
    """Member coefficients with per-n bounds and ratios; ``at`` adds spot evaluations."""
    doc = _header('member')
    doc['spec'] = encode_spec(member.spec)
    doc['witnesses'] = _encode_pair(member.witnesses)
    doc['f'] = encode_series(member.f)
    doc['g'] = {'class_tag': member.g.class_tag, 'series': encode_series(member.g.series)}
    doc['quotient'] = encode_series(member.quotient)
    doc['bounds'] = [{'n': n, 'bound': encode_number(b), 'ratio': encode_number(r)}
                     for n, (b, r) in enumerate(zip(bounds, ratios), start=2)]
    if at is not None:
        doc['evaluations'] = {'z': encode_scalar(at), 'f': encode_scalar(member.f(at)),
                              'g': encode_scalar(member.g.series(at)),
                              'quotient': encode_scalar(member.quotient(at))}
    return doc


def decode_member(doc: Dict[str, Any]) -> MemberWitness:
    _check_header(doc, 'member')
    spec = decode_spec(doc['spec'])
    w_g, w_q = _decode_pair(doc['witnesses'])
    g = GeneratedMember(decode_series(doc['g']['series']), w_g, doc['g']['class_tag'], spec.psi)
    return MemberWitness(decode_series(doc['f']), g, decode_series(doc['quotient']), spec, w_q)


# ============================================================================
# Verification, suite and lattice reports
# ============================================================================

def _encode_worst(case: Optional[WorstCase]) -> Optional[Dict[str, Any]]:
    if case is None:
        return None
    return {'ratio_sq': encode_number(case.ratio_sq), 'ratio': encode_number(case.ratio),
            'sample': case.sample, 'witnesses': _encode_pair(case.witnesses)}


def _decode_worst(data: Optional[Dict[str, Any]]) -> Optional[WorstCase]:
    if data is None:
        return None
    return WorstCase(decode_number(data['ratio_sq']), data['sample'], _decode_pair(data['witnesses']))


def _report_body(report: VerificationReport) -> Dict[str, Any]:
    return {
        'preset': report.preset,
        'spec': encode_spec(report.spec),
        'order': report.order,
        'sample_count': report.sample_count,
        'seed': report.seed,
        'backend': report.backend,
        'tolerance': encode_number(report.tolerance),
        'passed': report.passed,
        'float_samples': report.float_samples,
        'rows': [dict(n=n, bound=encode_number(report.bound(n)), **_encode_worst(report.worst_case(n)))
                 for n in report.ns if n - 2 < len(report.worst)],
        'quotient_worst': _encode_worst(report.quotient_worst),
        'violations': [{'sample': v.sample, 'n': v.n, 'check': v.check, 'ratio': encode_number(v.ratio),
                        'witnesses': _encode_pair(v.witnesses)} for v in report.violations],
    }


def verification_report_document(report: VerificationReport) -> Dict[str, Any]:
    doc = _header('verification_report')
    doc.update(_report_body(report))
    return doc


def _decode_report_body(data: Dict[str, Any]) -> VerificationReport:
    rows = data['rows']
    return VerificationReport(
        spec=decode_spec(data['spec']),
        order=data['order'],
        sample_count=data['sample_count'],
        seed=data['seed'],
        backend=data['backend'],
        tolerance=decode_number(data['tolerance']),
        bounds=[decode_number(r['bound']) for r in rows],
        worst=[_decode_worst(r) for r in rows],
        quotient_worst=_decode_worst(data['quotient_worst']),
        violations=[Violation(v['sample'], v['n'], v['check'], decode_number(v['ratio']),
                              _decode_pair(v['witnesses'])) for v in data['violations']],
        float_samples=data['float_samples'],
        preset=data['preset'],
    )


def decode_verification_report(doc: Dict[str, Any]) -> VerificationReport:
    _check_header(doc, 'verification_report')
    return _decode_report_body(doc)


def _lattice_body(lattice: LatticeReport) -> Dict[str, Any]:
    return {'n_max': lattice.n_max, 'passed': lattice.passed, 'points': lattice.points,
            'checks': [{'name': c.name, 'points': c.points, 'passed': c.passed,
                        'mismatch_count': c.mismatch_count, 'mismatches': list(c.mismatches)}
                       for c in lattice.checks]}


def _decode_lattice_body(data: Dict[str, Any]) -> LatticeReport:
    checks = [LatticeCheck(c['name'], c['points'], list(c['mismatches']), c['mismatch_count'])
              for c in data['checks']]
    return LatticeReport(data['n_max'], checks)


def lattice_report_document(lattice: LatticeReport) -> Dict[str, Any]:
    doc = _header('lattice_report')
    doc.update(_lattice_body(lattice))
    return doc


def decode_lattice_report(doc: Dict[str, Any]) -> LatticeReport:
    _check_header(doc, 'lattice_report')
    return _decode_lattice_body(doc)


def _encode_config(config: Dict[str, Any]) -> Dict[str, Any]:
    encoded = dict(config)
    encoded['tolerance'] = encode_number(float(config['tolerance']))
    return encoded


def suite_report_document(suite: SuiteReport) -> Dict[str, Any]:
    doc = _header('suite_report')
    doc['config'] = _encode_config(suite.config)
    doc['passed'] = suite.passed
    doc['violation_count'] = suite.violation_count
    doc['reports'] = [_report_body(r) for r in suite.reports]
    doc['lattice'] = _lattice_body(suite.lattice) if suite.lattice is not None else None
    return doc


def decode_suite_report(doc: Dict[str, Any]) -> SuiteReport:
    _check_header(doc, 'suite_report')
    config = dict(doc['config'])
    config['tolerance'] = decode_number(config['tolerance'])
    lattice = _decode_lattice_body(doc['lattice']) if doc['lattice'] is not None else None
    return SuiteReport(config, [_decode_report_body(r) for r in doc['reports']], lattice)


def preset_list_document(presets: Dict[str, ClassPreset]) -> Dict[str, Any]:
    doc = _header('preset_list')
    doc['presets'] = [{
        'id': p.id,
        'name': p.name,
        'category': p.category,
        'description': p.description,
        'lambda': encode_number(p.params.lam),
        'delta': encode_number(p.params.delta),
        'phi': encode_family(p.phi),
        'psi': encode_family(p.psi),
        'witnesses': _encode_pair(p.witnesses) if p.witnesses else None,
    } for p in presets.values()]
    return doc


DECODERS = {
    'bound_table': decode_rows,
    'comparison': decode_rows,
    'member': decode_member,
    'verification_report': decode_verification_report,
    'suite_report': decode_suite_report,
    'lattice_report': decode_lattice_report,
}


def decode_document(doc: Dict[str, Any]):
    """Rebuild the record a document was emitted from."""
    decoder = DECODERS.get(doc.get('record_type'))
    if decoder is None:
        raise RecordError(f"No decoder for record type {doc.get('record_type')!r}")
    return decoder(doc)


# ============================================================================
# Writers
# ============================================================================

Section = Tuple[str, List[str], List[List[Any]]]

REPORT_COLUMNS = ['n', 'bound', 'worst_ratio_sq', 'worst_ratio', 'worst_sample', 'w_g', 'w_quotient']
SUMMARY_COLUMNS = ['preset', 'kind', 'lambda', 'delta', 'phi', 'psi', 'order', 'sample_count', 'seed',
                   'backend', 'tolerance', 'passed', 'float_samples', 'quotient_worst_ratio_sq',
                   'quotient_worst_ratio', 'quotient_worst_sample', 'quotient_w_g', 'quotient_w_quotient']
VIOLATION_COLUMNS = ['preset', 'kind', 'sample', 'n', 'check', 'ratio', 'w_g', 'w_quotient']
CHECK_COLUMNS = ['check', 'points', 'mismatch_count', 'passed', 'mismatches']
KEY_VALUE = ['key', 'value']


def _scalar_cells(value: Scalar) -> List[str]:
    encoded = encode_scalar(value)
    return [_csv_value(encoded['re']), _csv_value(encoded['im'])]


def _family_cell(data: Any) -> str:
    return data if isinstance(data, str) else 'user'


def _key_values(items: Dict[str, Any]) -> List[List[Any]]:
    return [[key, ' '.join(value) if isinstance(value, list) else value] for key, value in items.items()]


def _report_rows(report_doc: Dict[str, Any], prefix: List[Any]) -> List[List[Any]]:
    return [prefix + [r['n'], r['bound'], r['ratio_sq'], r['ratio'], r['sample']] + r['witnesses']
            for r in report_doc['rows']]


def _summary_row(report_doc: Dict[str, Any]) -> List[Any]:
    spec = report_doc['spec']
    worst = report_doc['quotient_worst'] or {}
    return [report_doc['preset'], spec['kind'], spec['lambda'], spec['delta'],
            _family_cell(spec['phi']), _family_cell(spec['psi']),
            report_doc['order'], report_doc['sample_count'], report_doc['seed'], report_doc['backend'],
            report_doc['tolerance'], report_doc['passed'], report_doc['float_samples'],
            worst.get('ratio_sq'), worst.get('ratio'), worst.get('sample')] + (worst.get('witnesses') or [None, None])


def _violation_rows(report_doc: Dict[str, Any]) -> List[List[Any]]:
    prefix = [report_doc['preset'], report_doc['spec']['kind']]
    return [prefix + [v['sample'], v['n'], v['check'], v['ratio']] + v['witnesses']
            for v in report_doc['violations']]


def _check_rows(lattice: Dict[str, Any]) -> List[List[Any]]:
    return [[c['name'], c['points'], c['mismatch_count'], c['passed'], ' | '.join(c['mismatches'])]
            for c in lattice['checks']]


def _bound_table_sections(doc: Dict[str, Any]) -> List[Section]:
    rows = [[r['n']] + [r['values'][fid] for fid in doc['formulas']] for r in doc['rows']]
    return [('rows', ['n'] + doc['formulas'], rows),
            ('params', KEY_VALUE, _key_values(doc['params']))]


def _comparison_sections(doc: Dict[str, Any]) -> List[Section]:
    keys = list(doc['rows'][0]['values']) if doc['rows'] else []
    rows = [[r['n']] + [r['values'][k] for k in keys] + [r['improvement_holds']] for r in doc['rows']]
    summary = _key_values(doc['params']) + [['improvement_holds', doc['improvement_holds']]]
    return [('rows', ['n'] + keys + ['improvement_holds'], rows), ('params', KEY_VALUE, summary)]


def _member_sections(doc: Dict[str, Any]) -> List[Section]:
    f, g, q = decode_series(doc['f']), decode_series(doc['g']['series']), decode_series(doc['quotient'])
    bounds = {b['n']: b for b in doc['bounds']}
    rows = []
    for n in range(f.order + 1):
        extra = [bounds[n]['bound'], bounds[n]['ratio']] if n in bounds else ['', '']
        rows.append([n] + _scalar_cells(f[n]) + _scalar_cells(g[n]) + _scalar_cells(q[n]) + extra)
    spec = doc['spec']
    summary = {'kind': spec['kind'], 'lambda': spec['lambda'], 'delta': spec['delta'],
               'phi': _family_cell(spec['phi']), 'psi': _family_cell(spec['psi']),
               'w_g': doc['witnesses'][0], 'w_quotient': doc['witnesses'][1],
               'g_class': doc['g']['class_tag'], 'backend': doc['f']['backend'],
               'lossy_top': doc['f']['lossy_top']}
    sections = [('rows', ['n', 'a_re', 'a_im', 'b_re', 'b_im', 'quotient_re', 'quotient_im', 'bound', 'ratio'], rows),
                ('member', KEY_VALUE, _key_values(summary))]
    if 'evaluations' in doc:
        points = [[name, value['re'], value['im']] for name, value in doc['evaluations'].items()]
        sections.append(('evaluations', ['at', 're', 'im'], points))
    return sections


def _verification_sections(doc: Dict[str, Any]) -> List[Section]:
    return [('rows', REPORT_COLUMNS, _report_rows(doc, [])),
            ('summary', SUMMARY_COLUMNS, [_summary_row(doc)]),
            ('violations', VIOLATION_COLUMNS, _violation_rows(doc))]


def _suite_sections(doc: Dict[str, Any]) -> List[Section]:
    rows, summaries, violations = [], [], []
    for report in doc['reports']:
        rows.extend(_report_rows(report, [report['preset'], report['spec']['kind']]))
        summaries.append(_summary_row(report))
        violations.extend(_violation_rows(report))
    suite = {'passed': doc['passed'], 'violation_count': doc['violation_count'], **doc['config']}
    lattice = doc['lattice']
    if lattice is not None:
        suite.update(lattice_n_max=lattice['n_max'], lattice_points=lattice['points'],
                     lattice_passed=lattice['passed'])
    sections = [('rows', ['preset', 'kind'] + REPORT_COLUMNS, rows),
                ('summary', SUMMARY_COLUMNS, summaries),
                ('violations', VIOLATION_COLUMNS, violations),
                ('suite', KEY_VALUE, _key_values(suite))]
    if lattice is not None:
        sections.append(('lattice', CHECK_COLUMNS, _check_rows(lattice)))
    return sections


def _lattice_sections(doc: Dict[str, Any]) -> List[Section]:
    summary = {'n_max': doc['n_max'], 'points': doc['points'], 'passed': doc['passed']}
    return [('checks', CHECK_COLUMNS, _check_rows(doc)), ('summary', KEY_VALUE, _key_values(summary))]


def _preset_list_sections(doc: Dict[str, Any]) -> List[Section]:
    header = ['id', 'name', 'category', 'lambda', 'delta', 'phi', 'psi', 'witnesses']
    rows = [[p['id'], p['name'], p['category'], p['lambda'], p['delta'], _family_cell(p['phi']),
             _family_cell(p['psi']), ' '.join(p['witnesses'] or [])] for p in doc['presets']]
    return [('presets', header, rows)]


CSV_LAYOUTS = {
    'bound_table': _bound_table_sections,
    'comparison': _comparison_sections,
    'member': _member_sections,
    'verification_report': _verification_sections,
    'suite_report': _suite_sections,
    'lattice_report': _lattice_sections,
    'preset_list': _preset_list_sections,
}


def csv_sections(doc: Dict[str, Any]) -> List[Section]:
    """
    Every CSV section of a document as (title, header, rows), cells encoded as in JSON.

    The first section is the main table; the others carry the document's
    remaining fields (parameters, summaries, violations, evaluations).

    Raises:
        RecordError: If the record type has no CSV layout
    """
    layout = CSV_LAYOUTS.get(doc.get('record_type'))
    if layout is None:
        raise RecordError(f"No CSV layout for record type {doc.get('record_type')!r}")
    return [(title, header, [[_csv_value(v) for v in row] for row in rows])
            for title, header, rows in layout(doc)]


def csv_table(doc: Dict[str, Any]) -> Tuple[List[str], List[List[str]]]:
    """Header and rows of the main CSV table of a document."""
    _, header, rows = csv_sections(doc)[0]
    return header, rows


def _csv_value(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + '\n'


def loads(text: str) -> Dict[str, Any]:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise RecordError(f"Invalid JSON document: {e}")


def write_document(doc: Dict[str, Any], fmt: str, stream: IO[str]):
    """
    Write a document as JSON or CSV.

    CSV sections after the main table follow a blank line and a ``[title]`` row.
    """
    if fmt == 'json':
        stream.write(dumps(doc))
    elif fmt == 'csv':
        writer = csv.writer(stream, lineterminator='\n')
        for index, (title, header, rows) in enumerate(csv_sections(doc)):
            if index:
                writer.writerow([])
                writer.writerow([f"[{title}]"])
            writer.writerow(header)
            writer.writerows(rows)
    else:
        raise UsageError(f"Output format must be one of {FORMATS}, got {fmt!r}")
    logger.debug(f"Wrote {doc.get('record_type')} record as {fmt}")
