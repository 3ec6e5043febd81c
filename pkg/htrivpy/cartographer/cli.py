##
# @file cli.py
#
# @section description_cli Description
# Command line tool ``htriv``. Every subcommand writes one JSON document to
# stdout; progress goes to stderr through a LogTracker when --verbose is
# given. Exit status: 0 success, 1 domain error, 2 usage error, 3 oracle
# disagreement.
#
# @section libraries_cli Libraries/Modules
# - argparse
# - json
# - sys
# - fractions
# - htrivpy.htrivpy
# - htrivpy.cartographer
# - htrivpy.first_mate

import argparse
import json
import sys
from fractions import Fraction

from htrivpy.htrivpy.fan import collinear_pairs
from htrivpy.htrivpy.picard import picard_group
from htrivpy.htrivpy.cohomology import cohomology_dims
from htrivpy.htrivpy.forbidden import forbidden_witness, is_h_trivial
from htrivpy.htrivpy.classify import Classifier, lambda_m_enumerate
from htrivpy.htrivpy import semigroup as sg
from htrivpy.cartographer.fanfile import read_fan_file
from htrivpy.cartographer.report import build_report, dump_report, format_class, parse_class
from htrivpy.cartographer.plotting import plot_fan, plot_picard_slice
from htrivpy.first_mate.errors import HTrivError, OracleDisagreementError
from htrivpy.first_mate.logutils import LogTracker

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_ORACLE = 3


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f'not a rational number: {text!r}')


def _json_list(text):
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        raise argparse.ArgumentTypeError(f'not a JSON list: {text!r}')
    if not isinstance(value, list):
        raise argparse.ArgumentTypeError(f'not a JSON list: {text!r}')
    return value


def _slice(text):
    try:
        parts = [int(x) for x in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected "i,j" or "i,j,c", got {text!r}')
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f'expected "i,j" or "i,j,c", got {text!r}')
    return parts


def build_parser():
    parser = argparse.ArgumentParser(prog='htriv',
                                     description='H-trivial line bundles on 2-D toric stacks')
    parser.add_argument('--verbose', action='store_true', help='progress on stderr')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('validate', help='validate a fan file')
    p.add_argument('file')

    p = sub.add_parser('picard', help='Picard group presentation')
    p.add_argument('file')

    p = sub.add_parser('cohomology', help='cohomology dimensions of a class')
    p.add_argument('file')
    p.add_argument('--class', dest='cls', required=True)

    p = sub.add_parser('trivial', help='H-triviality of a class')
    p.add_argument('file')
    p.add_argument('--class', dest='cls', required=True)
    p.add_argument('--cross-check', action='store_true')

    p = sub.add_parser('classify', help='H-trivial classes in a ball')
    p.add_argument('file')
    p.add_argument('--radius', type=_fraction, required=True)
    p.add_argument('--certify', action='store_true')
    p.add_argument('--workers', type=int, default=1)
    p.add_argument('--window', type=int, default=None)
    p.add_argument('--cross-check', action='store_true')
    p.add_argument('--out', default=None, help='also write the report to this file')

    p = sub.add_parser('lambda', help='classes with total cohomology below m')
    p.add_argument('file')
    p.add_argument('-m', type=int, required=True)
    p.add_argument('--radius', type=_fraction, required=True)

    p = sub.add_parser('plot', help='SVG picture of a fan or of its H-trivial classes')
    p.add_argument('file')
    p.add_argument('--out', required=True)
    p.add_argument('--what', choices=('fan', 'pic'), default=None)
    p.add_argument('--radius', type=_fraction, default=None)
    p.add_argument('--picard-slice', type=_slice, default=None)

    p = sub.add_parser('semigroup', help='cone semigroup constructions')
    p.add_argument('action', choices=('gamma', 'shift', 'decompose', 'mult'))
    p.add_argument('--generators', type=_json_list, required=True)
    p.add_argument('--torsion', type=_json_list, default=[])
    p.add_argument('--h', type=_json_list, default=None)
    p.add_argument('--x', type=_json_list, default=None)
    p.add_argument('-m', type=int, default=None)
    return parser


def _load(args):
    doc = read_fan_file(args.file)
    return doc.fan, picard_group(doc.fan, basis=doc.picard_basis)


def cmd_validate(args, log):
    fan, _ = _load(args)
    return {'valid': True, 'name': fan.name, 'n': fan.n,
            'vectors': [list(v) for v in fan.vectors], 'fingerprint': fan.fingerprint,
            'collinear_pairs': [list(p.one_based()) for p in collinear_pairs(fan)]}


def cmd_picard(args, log):
    fan, pic = _load(args)
    return {'free_rank': pic.free_rank, 'torsion': list(pic.torsion_invariants),
            'basis': list(pic.basis_labels) if pic.basis is not None else None,
            'fingerprint': pic.fingerprint}


def cmd_cohomology(args, log):
    fan, pic = _load(args)
    c = parse_class(pic, args.cls)
    dims = cohomology_dims(fan, pic, c)
    return {'class': format_class(c), 'h0': dims.h0, 'h1': dims.h1, 'h2': dims.h2}


def cmd_trivial(args, log):
    fan, pic = _load(args)
    c = parse_class(pic, args.cls)
    trivial = is_h_trivial(fan, pic, c, cross_check=args.cross_check)
    witness = None if trivial else forbidden_witness(fan, pic, c)
    return {'class': format_class(c), 'h_trivial': trivial,
            'forbidden_set': None if witness is None else [i + 1 for i in witness.I],
            'cross_checked': args.cross_check}


def cmd_classify(args, log):
    doc = read_fan_file(args.file)
    classifier = Classifier(doc.fan, radius=args.radius, certify=args.certify,
                            workers=args.workers, window=args.window,
                            cross_check=args.cross_check, basis=doc.picard_basis, log=log)
    report = build_report(classifier.classify())
    if args.out:
        dump_report(report, args.out)
    return report


def cmd_lambda(args, log):
    fan, pic = _load(args)
    classes = lambda_m_enumerate(fan, pic, args.m, args.radius)
    return {'m': args.m, 'ball_radius': str(args.radius),
            'classes': [format_class(c) for c in classes]}


def cmd_plot(args, log):
    doc = read_fan_file(args.file)
    what = args.what or ('pic' if args.radius is not None else 'fan')
    if what == 'fan':
        plot_fan(doc.fan, args.out)
    else:
        radius = args.radius if args.radius is not None else Fraction(5)
        report = Classifier(doc.fan, radius=radius, certify=False,
                            basis=doc.picard_basis, log=log).classify()
        axes, fixed = (0, 1), None
        if args.picard_slice:
            axes = tuple(args.picard_slice[:2])
            fixed = args.picard_slice[2] if len(args.picard_slice) == 3 else None
        plot_picard_slice(report, args.out, axes=axes, fixed=fixed)
    return {'plot': what, 'out': args.out}


def cmd_semigroup(args, log):
    S = sg.cone_semigroup(args.generators, moduli=args.torsion, h=args.h)
    out = {'generators': [list(w) for w in S.generators], 'torsion': list(S.moduli),
           'h': list(S.h)}
    if args.action == 'gamma':
        gamma = sg.gamma_set(S)
        out.update(bound=gamma.bound, gamma=[list(p) for p in gamma])
    elif args.action == 'shift':
        out.update(shift=list(sg.saturation_shift(S)))
    elif args.action == 'decompose':
        if args.x is None:
            raise argparse.ArgumentTypeError('decompose needs --x')
        a, b = sg.decompose(S, args.x)
        out.update(x=list(S.reduce(args.x)), a=list(a), b=list(b))
    else:
        if args.m is None:
            raise argparse.ArgumentTypeError('mult needs -m')
        out.update(m=args.m, relation=list(sg.relation(S)),
                   point=list(sg.multiplicity_point(S, args.m)))
    return out


COMMANDS = {'validate': cmd_validate, 'picard': cmd_picard, 'cohomology': cmd_cohomology,
            'trivial': cmd_trivial, 'classify': cmd_classify, 'lambda': cmd_lambda,
            'plot': cmd_plot, 'semigroup': cmd_semigroup}


def run_cli(argv=None, stdout=None, stderr=None):
    '''Run one command; returns the exit status.'''
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return EXIT_OK if stop.code in (0, None) else EXIT_USAGE
    log = LogTracker(stream=stderr) if args.verbose else None
    try:
        doc = COMMANDS[args.command](args, log)
    except argparse.ArgumentTypeError as err:
        print(f'htriv: usage error: {err}', file=stderr)
        return EXIT_USAGE
    except OracleDisagreementError as err:
        print(str(err), file=stderr)
        return EXIT_ORACLE
    except HTrivError as err:
        print(str(err), file=stderr)
        return EXIT_DOMAIN
    stdout.write(dump_report(doc))
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
