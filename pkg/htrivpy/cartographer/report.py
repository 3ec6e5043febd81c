##
# @file report.py
#
# @section description_report Description
# Machine readable documents: the class syntax "(a,b,c)" / "(a,b;t)", the
# versioned classification report "htriv-report/1" and its reader, which
# rejects unknown fields. Rationals are written as strings.
#
# @section libraries_report Libraries/Modules
# - json
# - re
# - fractions
# - htrivpy.first_mate.errors

import json
import re
from fractions import Fraction

import htrivpy
from htrivpy.first_mate.errors import DomainError, ReportSchemaError

SCHEMA = 'htriv-report/1'

REPORT_KEYS = {'schema', 'version', 'fan', 'picard', 'infinite', 'collinear_pairs',
               'ball_radius', 'provenance', 'sporadic', 'lines', 'tube_radii', 'certificate'}
FAN_KEYS = {'name', 'vectors', 'fingerprint'}
PICARD_KEYS = {'free_rank', 'torsion', 'basis'}
LINE_KEYS = {'base', 'direction', 'status', 'window', 'nontrivial', 'nontrivial_above',
             'nontrivial_below', 'hits'}
TUBE_KEYS = {'direction', 'radius2', 'provenance'}
CERTIFICATE_KEYS = {'epsilon_lower', 'delta', 'a', 'radius', 'net_size', 'shifts'}
SHIFT_KEYS = {'I', 'r'}

_CLASS_PATTERN = re.compile(r'^\(\s*([-+\d\s,]*?)\s*(?:;\s*([-+\d\s,]*?)\s*)?\)$')


def format_class(c):
    return str(c)


def parse_class(pic, text):
    '''Class from "(a,b,c)" (free coordinates, zero torsion) or "(a,b;t)".'''
    match = _CLASS_PATTERN.match(text.strip())
    if not match:
        raise DomainError(f'cannot read class {text!r}, expected "(a,b,...)" or "(a,b;t)"',
                          code='domain.class_syntax')

    def numbers(part):
        if part is None or not part.strip():
            return ()
        try:
            return tuple(int(x) for x in part.split(','))
        except ValueError:
            raise DomainError(f'cannot read class {text!r}', code='domain.class_syntax')

    torsion = numbers(match.group(2)) if match.group(2) is not None \
        else (0,) * len(pic.torsion_invariants)
    return pic.make_class(numbers(match.group(1)), torsion)


def _rational(x):
    return str(Fraction(x))


def build_report(report):
    '''JSON compatible document of a ClassificationReport.'''
    pic = report.pic
    cert = report.certificate
    doc = {
        'schema': SCHEMA,
        'version': htrivpy.__version__,
        'fan': {'name': report.fan.name, 'vectors': [list(v) for v in report.fan.vectors],
                'fingerprint': report.fan.fingerprint},
        'picard': {'free_rank': pic.free_rank, 'torsion': list(pic.torsion_invariants),
                   'basis': list(pic.basis_labels) if pic.basis is not None else None},
        'infinite': report.infinite,
        'collinear_pairs': [list(p.one_based()) for p in report.collinear_pairs],
        'ball_radius': _rational(report.ball_radius),
        'provenance': report.provenance,
        'sporadic': [format_class(c) for c in report.sporadic],
        'lines': [{'base': format_class(line.base),
                   'direction': format_class(line.direction),
                   'status': line.status.status,
                   'window': line.status.window,
                   'nontrivial': list(line.status.nontrivial),
                   'nontrivial_above': line.status.nontrivial_above,
                   'nontrivial_below': line.status.nontrivial_below,
                   'hits': [format_class(c) for c in line.hits]} for line in report.lines],
        'tube_radii': [{'direction': format_class(t.direction), 'radius2': _rational(t.radius2),
                        'provenance': t.provenance} for t in report.tube_radii],
        'certificate': None if cert is None else {
            'epsilon_lower': _rational(cert.epsilon_lower),
            'delta': _rational(cert.delta),
            'a': _rational(cert.a),
            'radius': cert.radius,
            'net_size': cert.net_size,
            'shifts': [{'I': [i + 1 for i in I], 'r': list(r)} for I, r in cert.shifts]},
    }
    return doc


def dump_report(doc, path=None):
    '''Sorted-key JSON text with a trailing newline, written to path if given.'''
    text = json.dumps(doc, sort_keys=True, indent=2) + '\n'
    if path is not None:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
    return text


def _check_keys(obj, keys, where):
    if not isinstance(obj, dict):
        raise ReportSchemaError(f'{where}: expected an object')
    unknown = sorted(set(obj) - keys)
    missing = sorted(keys - set(obj))
    if unknown:
        raise ReportSchemaError(f'{where}: unknown fields {unknown}')
    if missing:
        raise ReportSchemaError(f'{where}: missing fields {missing}')


def validate_report(doc):
    _check_keys(doc, REPORT_KEYS, 'report')
    if doc['schema'] != SCHEMA:
        raise ReportSchemaError(f'unsupported schema {doc["schema"]!r}, expected {SCHEMA!r}')
    _check_keys(doc['fan'], FAN_KEYS, 'fan')
    _check_keys(doc['picard'], PICARD_KEYS, 'picard')
    for i, line in enumerate(doc['lines']):
        _check_keys(line, LINE_KEYS, f'lines[{i}]')
    for i, tube in enumerate(doc['tube_radii']):
        _check_keys(tube, TUBE_KEYS, f'tube_radii[{i}]')
    if doc['certificate'] is not None:
        _check_keys(doc['certificate'], CERTIFICATE_KEYS, 'certificate')
        for i, shift in enumerate(doc['certificate']['shifts']):
            _check_keys(shift, SHIFT_KEYS, f'certificate.shifts[{i}]')
    return doc


def load_report(source):
    '''Read and validate a report from a path or from JSON text.'''
    text = source
    if not source.lstrip().startswith('{'):
        with open(source, 'r', encoding='utf-8') as f:
            text = f.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ReportSchemaError(f'line {err.lineno}, column {err.colno}: {err.msg}')
    return validate_report(doc)
