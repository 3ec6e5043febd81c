##
# @file fan.py
#
# @section description_fan Description
# Validation and normalisation of two dimensional complete stacky fans:
# counterclockwise ordering by exact angle comparison, cyclic adjacency and
# collinear (antiparallel) pairs of rays.
#
# @section libraries_fan Libraries/Modules
# - functools
# - hashlib
# - json
# - dataclasses
# - htrivpy.first_mate.errors

import functools
import hashlib
import json
from dataclasses import dataclass, field

from htrivpy.first_mate.errors import FanValidationError


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _half(v):
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(u, v):
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


@dataclass(frozen=True)
class CollinearPair(object):
    ## (int) 0-based index of the first ray.
    i: int
    ## (int) 0-based index of the antiparallel ray, i < j.
    j: int

    def one_based(self):
        return (self.i + 1, self.j + 1)


@dataclass(frozen=True)
class StackyFan(object):
    """!
    Ordered ray generators v_1..v_n of a complete simplicial fan in Z^2.
    Non-primitive generators are allowed and encode the stack structure.
    """
    ## (tuple of (int, int)) Generators in counterclockwise order.
    vectors: tuple
    ## (str, default: '') Optional human readable name.
    name: str = field(default='', compare=False)
    ## (tuple of int, default: ()) order[i] is the input position of vectors[i].
    order: tuple = field(default=(), compare=False)

    @property
    def n(self):
        return len(self.vectors)

    def det(self, i, j):
        return cross(self.vectors[i % self.n], self.vectors[j % self.n])

    def adjacent(self, i, j):
        return (i - j) % self.n in (1, self.n - 1)

    @property
    def fingerprint(self):
        '''Short SHA-256 digest of the ordered vectors.'''
        text = json.dumps([list(v) for v in self.vectors], separators=(',', ':'))
        return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]

    def input_index(self, position):
        '''Input position of the ray stored at ``position``.'''
        return self.order[position] if self.order else position

    def position_of_input(self, index):
        '''Position in the validated order of the input ray ``index``.'''
        return self.order.index(index) if self.order else index

    def apply_unimodular(self, T):
        '''Fan with every vector multiplied by the 2x2 integer matrix T.'''
        (a, b), (c, d) = T
        if abs(a * d - b * c) != 1:
            raise ValueError('T is not unimodular')
        moved = [(a * x + b * y, c * x + d * y) for x, y in self.vectors]
        return validate_fan(moved, name=self.name)

    def rotate(self, k):
        '''Same fan listed from position k on.'''
        k %= self.n
        return validate_fan(list(self.vectors[k:] + self.vectors[:k]), name=self.name)


def validate_fan(vectors, name=''):
    '''Validate ray generators and return them as a counterclockwise StackyFan.

    The output starts with the input's first vector. Errors carry the
    offending input indices (0-based) and a stable code.

    Parameters
    ----------
    vectors: sequence of (int, int)
        Ray generators in any order.
    name: str, optional
        Name carried by the fan.

    Returns
    -------
    StackyFan

    '''
    try:
        vecs = [(int(v[0]), int(v[1])) for v in vectors]
        if any(len(v) != 2 or v[0] != int(v[0]) or v[1] != int(v[1]) for v in vectors):
            raise TypeError
    except (TypeError, ValueError, IndexError):
        raise FanValidationError('vectors must be pairs of integers',
                                 code='fan.syntax')
    n = len(vecs)
    if n < 3:
        raise FanValidationError(f'a complete fan needs at least 3 rays, got {n}',
                                 code='fan.too_few', indices=range(n))
    for i, v in enumerate(vecs):
        if v == (0, 0):
            raise FanValidationError(f'vector {i + 1} is zero',
                                     code='fan.zero_vector', indices=(i,))
    for i in range(n):
        for j in range(i + 1, n):
            if cross(vecs[i], vecs[j]) == 0 and dot(vecs[i], vecs[j]) > 0:
                raise FanValidationError(
                    f'vectors {i + 1} and {j + 1} span the same ray',
                    code='fan.duplicate_ray', indices=(i, j))
    order = sorted(range(n), key=functools.cmp_to_key(
        lambda a, b: _angle_cmp(vecs[a], vecs[b])))
    start = order.index(0)
    order = order[start:] + order[:start]
    for pos in range(n):
        a, b = order[pos], order[(pos + 1) % n]
        if cross(vecs[a], vecs[b]) <= 0:
            raise FanValidationError(
                f'vectors {a + 1} and {b + 1} leave a gap of at least half a turn: '
                f'the rays lie in a closed half-plane', code='fan.not_complete',
                indices=(a, b))
    return StackyFan(tuple(vecs[i] for i in order), name=name, order=tuple(order))


def collinear_pairs(fan):
    '''All pairs (i, j), i < j, with v_j a negative multiple of v_i, sorted.'''
    pairs = []
    for i in range(fan.n):
        for j in range(i + 1, fan.n):
            u, v = fan.vectors[i], fan.vectors[j]
            if cross(u, v) == 0 and dot(u, v) < 0:
                pairs.append(CollinearPair(i, j))
    return pairs


STANDARD_FANS = {
    'P2': [(1, 0), (0, 1), (-1, -1)],
    'P1xP1': [(1, 0), (0, 1), (-1, 0), (0, -1)],
    'example5': [(1, 1), (0, 1), (-1, 0), (0, -1), (1, -1)],
    'torsion': [(2, 0), (0, 1), (-2, -1)],
    'stacky_P2': [(2, 0), (0, 3), (-1, -1)],
    'hirzebruch1': [(1, 0), (0, 1), (-1, 1), (0, -1)],
}


def standard_fan(name):
    '''One of the named example fans (see STANDARD_FANS).'''
    if name not in STANDARD_FANS:
        raise ValueError(f'Unknown fan {name}, please select from {sorted(STANDARD_FANS)}')
    return validate_fan(STANDARD_FANS[name], name=name)
