##
# @file fanfile.py
#
# @section description_fanfile Description
# Reading and writing fan files: UTF-8 JSON documents
# {"name"?: str, "vectors": [[int, int], ...], "basis"?: [int, ...]}.
# Errors point at the line/column of a syntax error or at the offending
# field.
#
# @section libraries_fanfile Libraries/Modules
# - json
# - dataclasses
# - htrivpy.htrivpy.fan
# - htrivpy.first_mate.errors

import json
from dataclasses import dataclass

from htrivpy.htrivpy.fan import validate_fan
from htrivpy.first_mate.errors import FanFileError

FAN_FILE_KEYS = ('basis', 'name', 'vectors')


@dataclass(frozen=True)
class FanFile(object):
    """!
    A parsed fan file.
    """
    ## (StackyFan) Validated fan.
    fan: object
    ## (tuple of int or None) Display basis as 0-based positions in the validated order.
    basis: tuple = None

    @property
    def picard_basis(self):
        '''Argument for picard_group.'''
        return 'auto' if self.basis is None else self.basis


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def parse_fan_text(text, source='<string>'):
    '''Parse the text of a fan file into a FanFile.'''
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise FanFileError(err.msg, code='io.syntax',
                           location=f'{source}:{err.lineno}:{err.colno}')
    if not isinstance(doc, dict):
        raise FanFileError('a fan file must hold a JSON object', code='io.schema',
                           location=source)
    unknown = sorted(set(doc) - set(FAN_FILE_KEYS))
    if unknown:
        raise FanFileError(f'unknown fields {unknown}, please select from {list(FAN_FILE_KEYS)}',
                           code='io.schema', location=source)
    if 'vectors' not in doc:
        raise FanFileError('missing field', code='io.schema', location=f'{source}: vectors')
    vectors = doc['vectors']
    if not isinstance(vectors, list):
        raise FanFileError('expected a list of integer pairs', code='io.schema',
                           location=f'{source}: vectors')
    for i, v in enumerate(vectors):
        if not isinstance(v, list) or len(v) != 2 or not all(_is_int(x) for x in v):
            raise FanFileError(f'expected an integer pair, got {v!r}', code='io.schema',
                               location=f'{source}: vectors[{i}]')
    name = doc.get('name', '')
    if not isinstance(name, str):
        raise FanFileError('expected a string', code='io.schema', location=f'{source}: name')
    fan = validate_fan([tuple(v) for v in vectors], name=name)
    basis = doc.get('basis')
    if basis is not None:
        if not isinstance(basis, list) or not all(_is_int(i) and 1 <= i <= fan.n for i in basis):
            raise FanFileError(f'expected 1-based ray indices between 1 and {fan.n}',
                               code='io.schema', location=f'{source}: basis')
        basis = tuple(sorted(fan.position_of_input(i - 1) for i in basis))
    return FanFile(fan, basis)


def read_fan_file(path):
    '''Read a fan file, keeping the optional display basis.'''
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except (OSError, UnicodeDecodeError) as err:
        raise FanFileError(str(err), code='io.read', location=str(path))
    return parse_fan_text(text, source=str(path))


def parse_fan_file(path):
    '''Validated StackyFan of a fan file.'''
    return read_fan_file(path).fan


def serialize_fan(fan, basis=None):
    '''Fan file text (validated order, 1-based basis) ending with a newline.'''
    doc = {'vectors': [list(v) for v in fan.vectors]}
    if fan.name:
        doc['name'] = fan.name
    if basis is not None:
        doc['basis'] = [i + 1 for i in basis]
    return json.dumps(doc, sort_keys=True) + '\n'


def write_fan_file(path, fan, basis=None):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(serialize_fan(fan, basis))
