'''Testing cartographer modules: fan files, reports, plots and the htriv tool.'''
#===============================================================================
# Import
#===============================================================================
import io
import json
from os import path

import pytest

from htrivpy.htrivpy.fan import standard_fan, validate_fan
from htrivpy.htrivpy.picard import picard_group
from htrivpy.htrivpy.classify import Classifier
from htrivpy.cartographer import cli
from htrivpy.cartographer.fanfile import (read_fan_file, parse_fan_file, parse_fan_text,
                                          serialize_fan, write_fan_file)
from htrivpy.cartographer.report import (build_report, dump_report, load_report,
                                         validate_report, parse_class, SCHEMA)
from htrivpy.cartographer.plotting import plot_fan, plot_picard_slice
from htrivpy.first_mate.errors import (DomainError, FanFileError, FanValidationError,
                                       OracleDisagreementError, ReportSchemaError)
from htrivpy.first_mate.testutils import gen_tmp_folder

#===============================================================================
# Shared objects
#===============================================================================
# Paths.
main_dir = path.dirname(path.realpath(__file__))
ifiles_dir = path.join(main_dir, 'testfiles')
p2_path = path.join(ifiles_dir, 'p2.fan')
p1p1_path = path.join(ifiles_dir, 'p1p1.fan')
ex4_path = path.join(ifiles_dir, 'ex4.fan')
torsion_path = path.join(ifiles_dir, 'torsion.fan')
broken_path = path.join(ifiles_dir, 'broken.fan')
duplicate_path = path.join(ifiles_dir, 'duplicate.fan')
main_tests_dir = path.join(main_dir, '_tmp')
gen_tmp_folder(main_tests_dir)


def run(*argv):
    '''Exit status, parsed stdout document (or None) and stderr text of one call.'''
    out, err = io.StringIO(), io.StringIO()
    status = cli.run_cli(list(argv), stdout=out, stderr=err)
    text = out.getvalue()
    return status, (json.loads(text) if text else None), err.getvalue()


def _p2_report(radius=3):
    fan = standard_fan('P2')
    return build_report(Classifier(fan, radius=radius).classify())


#===============================================================================
# Tests
#===============================================================================
def test_read_fan_file():
    doc = read_fan_file(ex4_path)
    assert doc.fan.name == 'five rays'
    assert doc.fan.vectors == ((1, 1), (0, 1), (-1, 0), (0, -1), (1, -1))
    assert doc.basis == (0, 3, 4)
    assert doc.picard_basis == (0, 3, 4)
    assert read_fan_file(p2_path).picard_basis == 'auto'
    assert parse_fan_file(p1p1_path).n == 4


def test_fan_file_syntax_error():
    with pytest.raises(FanFileError) as err:
        read_fan_file(broken_path)
    assert err.value.code == 'io.syntax'
    assert err.value.location.startswith(broken_path + ':')
    with pytest.raises(FanFileError) as err:
        read_fan_file(path.join(ifiles_dir, 'missing.fan'))
    assert err.value.code == 'io.read'


def test_fan_file_validation_error():
    with pytest.raises(FanValidationError) as err:
        read_fan_file(duplicate_path)
    assert err.value.code == 'fan.duplicate_ray'
    assert err.value.indices == (0, 1)


@pytest.mark.parametrize('text, location', [
    ('[1, 2]', '<string>'),
    ('{"vectors": [[1, 0], [0, 1], [-1, -1]], "colour": 1}', '<string>'),
    ('{"name": "x"}', '<string>: vectors'),
    ('{"vectors": [[1, 0], [0, 1, 2], [-1, -1]]}', '<string>: vectors[1]'),
    ('{"vectors": [[1, 0], [true, 1], [-1, -1]]}', '<string>: vectors[1]'),
    ('{"vectors": [[1, 0], [0, 1], [-1, -1]], "name": 3}', '<string>: name'),
    ('{"vectors": [[1, 0], [0, 1], [-1, -1]], "basis": [4]}', '<string>: basis'),
])
def test_fan_file_schema_errors(text, location):
    with pytest.raises(FanFileError) as err:
        parse_fan_text(text)
    assert err.value.code == 'io.schema'
    assert err.value.location == location


def test_fan_file_round_trip():
    doc = read_fan_file(ex4_path)
    text = serialize_fan(doc.fan, doc.basis)
    assert text.endswith('\n')
    again = parse_fan_text(text)
    assert again == doc
    out_path = path.join(main_tests_dir, 'round_trip.fan')
    write_fan_file(out_path, doc.fan, doc.basis)
    assert read_fan_file(out_path) == doc


def test_basis_follows_validated_order():
    # the input lists P2 clockwise; indices refer to the input order
    doc = parse_fan_text('{"vectors": [[1, 0], [-1, -1], [0, 1]], "basis": [2]}')
    assert doc.fan.vectors == ((1, 0), (0, 1), (-1, -1))
    assert doc.basis == (2,)


def test_parse_class():
    pic = picard_group(standard_fan('example5'), basis=(0, 3, 4))
    assert parse_class(pic, '(0,-2,-4)').free == (0, -2, -4)
    assert parse_class(pic, ' ( 1, 0 , -1 ) ').free == (1, 0, -1)
    tors = picard_group(standard_fan('torsion'))
    c = parse_class(tors, '(3;1)')
    assert c.free == (3,) and c.torsion == (1,)
    assert parse_class(tors, '(3)').torsion == (0,)
    for text in ('1,2,3', '(a,b,c)', '(1,,2)'):
        with pytest.raises(DomainError) as err:
            parse_class(pic, text)
        assert err.value.code == 'domain.class_syntax'
    with pytest.raises(DomainError) as err:
        parse_class(pic, '(1,2)')
    assert err.value.code == 'domain.length_mismatch'


def test_report_round_trip():
    doc = _p2_report()
    assert doc['schema'] == SCHEMA
    assert doc['sporadic'] == ['(-1)', '(-2)']
    assert doc['provenance'] == 'user_supplied'
    assert doc['certificate']['radius'] == 6
    assert doc['certificate']['shifts'] == [{'I': [], 'r': [-5]}, {'I': [1, 2, 3], 'r': [2]}]
    text = dump_report(doc)
    assert text.endswith('\n')
    assert load_report(text) == doc
    out_path = path.join(main_tests_dir, 'p2_report.json')
    dump_report(doc, out_path)
    assert load_report(out_path) == doc
    assert validate_report(json.loads(text)) == doc


def test_report_rejects_unknown_fields():
    doc = _p2_report()
    doc['colour'] = 'red'
    with pytest.raises(ReportSchemaError):
        validate_report(doc)
    doc = _p2_report()
    doc['certificate']['shifts'][0]['extra'] = 1
    with pytest.raises(ReportSchemaError):
        validate_report(doc)
    doc = _p2_report()
    del doc['lines']
    with pytest.raises(ReportSchemaError):
        validate_report(doc)
    doc = _p2_report()
    doc['schema'] = 'htriv-report/0'
    with pytest.raises(ReportSchemaError):
        validate_report(doc)
    with pytest.raises(ReportSchemaError):
        load_report('{"schema": ')


def test_report_lines():
    fan = standard_fan('P1xP1')
    doc = build_report(Classifier(fan, radius=3).classify())
    validate_report(doc)
    assert doc['infinite']
    assert doc['collinear_pairs'] == [[1, 3], [2, 4]]
    assert doc['certificate'] is None
    assert [line['direction'] for line in doc['lines']] == ['(0,1)', '(1,0)']
    assert all(line['status'] == 'fully_trivial' for line in doc['lines'])
    assert [t['radius2'] for t in doc['tube_radii']] == ['1', '1']


def test_plots():
    fan_svg = path.join(main_tests_dir, 'ex4_fan.svg')
    plot_fan(standard_fan('example5'), fan_svg)
    pic_svg = path.join(main_tests_dir, 'ex4_pic.svg')
    report = Classifier(standard_fan('example5'), radius=3, basis=(0, 3, 4)).classify()
    plot_picard_slice(report, pic_svg, axes=(0, 2), fixed=-1)
    for svg in (fan_svg, pic_svg):
        with open(svg, 'r', encoding='utf-8') as f:
            assert '<svg' in f.read()
    with pytest.raises(DomainError) as err:
        plot_picard_slice(report, pic_svg, axes=(1, 1))
    assert err.value.code == 'domain.plot'


def test_cli_validate_and_picard():
    status, doc, _ = run('validate', ex4_path)
    assert status == cli.EXIT_OK
    assert doc['valid'] and doc['n'] == 5
    assert doc['collinear_pairs'] == [[2, 4]]
    status, doc, _ = run('picard', ex4_path)
    assert status == cli.EXIT_OK
    assert doc['free_rank'] == 3
    assert doc['basis'] == ['E1', 'E4', 'E5']
    status, doc, _ = run('picard', torsion_path)
    assert doc['torsion'] == [2] and doc['basis'] is None


def test_cli_classes():
    status, doc, _ = run('cohomology', p2_path, '--class', '(-3)')
    assert status == cli.EXIT_OK
    assert (doc['h0'], doc['h1'], doc['h2']) == (0, 0, 1)
    status, doc, _ = run('trivial', p2_path, '--class', '(-1)', '--cross-check')
    assert doc['h_trivial'] and doc['forbidden_set'] is None and doc['cross_checked']
    status, doc, _ = run('trivial', p2_path, '--class', '(0)')
    assert not doc['h_trivial']
    assert doc['forbidden_set'] == [1, 2, 3]


def test_cli_classify():
    out_path = path.join(main_tests_dir, 'cli_report.json')
    status, doc, err = run('--verbose', 'classify', ex4_path, '--radius', '6', '--out', out_path)
    assert status == cli.EXIT_OK
    assert len(doc['sporadic']) == 12
    assert sorted(line['base'] for line in doc['lines']) == \
        ['(0,-1,-1)', '(0,-1,0)', '(1,-1,-1)']
    assert load_report(out_path) == doc
    assert 'classification' in err
    status, doc, _ = run('classify', p2_path, '--radius', '20', '--certify')
    assert doc['provenance'] == 'certified'
    assert doc['certificate']['epsilon_lower'] == '1'


def test_cli_lambda():
    status, doc, _ = run('lambda', p2_path, '-m', '2', '--radius', '10')
    assert status == cli.EXIT_OK
    assert doc['classes'] == ['(0)', '(-1)', '(-2)', '(-3)']


def test_cli_semigroup():
    status, doc, _ = run('semigroup', 'gamma', '--generators', '[2, 3]')
    assert status == cli.EXIT_OK
    assert doc['bound'] == 5
    assert doc['gamma'] == [[0], [1], [2], [3], [4]]
    status, doc, _ = run('semigroup', 'shift', '--generators', '[2, 3]')
    assert doc['shift'] == [7]
    status, doc, _ = run('semigroup', 'decompose', '--generators', '[2, 3]', '--x', '[7]')
    assert (doc['a'], doc['b']) == ([4], [3])
    status, doc, _ = run('semigroup', 'mult', '--generators', '[1, 2]', '-m', '2')
    assert doc['relation'] == [2, -1] and doc['point'] == [6]


def test_cli_plot():
    out_path = path.join(main_tests_dir, 'cli_pic.svg')
    status, doc, _ = run('plot', ex4_path, '--out', out_path, '--radius', '3',
                         '--picard-slice', '0,2,-1')
    assert status == cli.EXIT_OK
    assert doc == {'plot': 'pic', 'out': out_path}
    assert path.isfile(out_path)


def test_cli_exit_codes():
    status, doc, err = run('validate', broken_path)
    assert status == cli.EXIT_DOMAIN and doc is None
    assert 'io.syntax' in err
    status, _, err = run('validate', duplicate_path)
    assert status == cli.EXIT_DOMAIN and 'fan.duplicate_ray' in err
    status, _, err = run('classify', p2_path, '--radius', '0')
    assert status == cli.EXIT_DOMAIN and 'domain.radius' in err
    assert run()[0] == cli.EXIT_USAGE
    assert run('classify', p2_path, '--radius', 'abc')[0] == cli.EXIT_USAGE
    assert run('semigroup', 'decompose', '--generators', '[2, 3]')[0] == cli.EXIT_USAGE
    assert run('plot', p2_path, '--out', 'x.svg', '--picard-slice', '1')[0] == cli.EXIT_USAGE


def test_cli_oracle_disagreement(monkeypatch):
    def disagree(*args, **kwargs):
        raise OracleDisagreementError('oracles disagree on (0)')
    monkeypatch.setattr(cli, 'is_h_trivial', disagree)
    status, _, err = run('trivial', p2_path, '--class', '(0)', '--cross-check')
    assert status == cli.EXIT_ORACLE
    assert 'oracle.disagreement' in err


def test_cli_certify_wide_forbidden_semigroup():
    fan = validate_fan([(-3, -2), (1, -2), (2, -3), (1, 1)])
    fan_path = path.join(main_tests_dir, 'wide.fan')
    write_fan_file(fan_path, fan)
    status, doc, err = run('classify', fan_path, '--radius', '2', '--certify')
    assert status == cli.EXIT_OK
    assert 'Traceback' not in err
    assert not doc['infinite']
