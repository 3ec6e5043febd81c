##
# @file cohomology.py
#
# @section description_cohomology Description
# Support complexes of divisors (subcomplexes of the n-cycle), their reduced
# homology by arc counting, and the cohomology dimensions of a line bundle
# class by enumerating every functional f in a box that provably contains
# all functionals with nontrivial contribution.
#
# @section libraries_cohomology Libraries/Modules
# - itertools
# - dataclasses
# - numpy (vectorised sign patterns, int64 or object dtype)
# - htrivpy.htrivpy.lattice
# - htrivpy.htrivpy.picard

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from htrivpy.htrivpy.fan import cross
from htrivpy.htrivpy.lattice import ConstraintSystem, polyhedron_vertices_2d, bounding_box
from htrivpy.htrivpy.picard import Divisor, divisor_representative, reduce_divisor

# Beyond this magnitude pattern values are evaluated with Python ints.
INT64_SAFE = 2 ** 60
SLAB = 512


@dataclass(frozen=True)
class SupportComplex(object):
    """!
    Subcomplex of the n-cycle spanned by the indices with r_i >= 0.
    """
    ## (int) Number of rays.
    n: int
    ## (tuple of int) Sorted 0-based vertices.
    vertices: tuple
    ## (tuple of (int, int)) Cyclically adjacent pairs inside vertices.
    edges: tuple


@dataclass(frozen=True)
class HomologyDims(object):
    h_minus1: int
    h0red: int
    h1red: int

    def as_tuple(self):
        return (self.h_minus1, self.h0red, self.h1red)


@dataclass(frozen=True)
class CohomologyDims(object):
    h0: int
    h1: int
    h2: int

    @property
    def total(self):
        return self.h0 + self.h1 + self.h2

    @property
    def vanishes(self):
        return self.total == 0

    def as_tuple(self):
        return (self.h0, self.h1, self.h2)


@dataclass(frozen=True)
class FunctionalBox(object):
    """!
    Integer rectangle lo <= f <= hi in the space of functionals.
    """
    lo: tuple
    hi: tuple

    def __iter__(self):
        for f1 in range(self.lo[0], self.hi[0] + 1):
            for f2 in range(self.lo[1], self.hi[1] + 1):
                yield (f1, f2)

    def __len__(self):
        return max(self.hi[0] - self.lo[0] + 1, 0) * max(self.hi[1] - self.lo[1] + 1, 0)

    def __contains__(self, f):
        return all(l <= x <= h for l, x, h in zip(self.lo, f, self.hi))

    def doubled(self):
        '''Box with twice the side lengths around the same centre.'''
        grow = [(h - l) // 2 + 1 for l, h in zip(self.lo, self.hi)]
        return FunctionalBox(tuple(l - g for l, g in zip(self.lo, grow)),
                             tuple(h + g for h, g in zip(self.hi, grow)))


def support_complex(fan, D):
    '''Supp(r) for the divisor D = sum r_i E_i.'''
    r = tuple(D)
    vertices = tuple(i for i in range(fan.n) if r[i] >= 0)
    inside = set(vertices)
    edges = tuple(sorted(tuple(sorted((i, (i + 1) % fan.n))) for i in vertices
                         if (i + 1) % fan.n in inside))
    return SupportComplex(fan.n, vertices, edges)


def reduced_homology_dims(S):
    '''Reduced homology of a subcomplex of the cycle by counting arcs.'''
    if not S.vertices:
        return HomologyDims(1, 0, 0)
    if len(S.vertices) == S.n:
        return HomologyDims(0, 0, 1)
    inside = set(S.vertices)
    arcs = sum(1 for i in S.vertices if (i - 1) % S.n not in inside)
    return HomologyDims(0, arcs - 1, 0)


def _polygon_points(fan, rows):
    system = ConstraintSystem(2, tuple(rows))
    poly = polyhedron_vertices_2d(system)
    if poly.rays:
        raise ArithmeticError(f'unbounded contribution region {rows}')
    return list(poly.vertices)


def contribution_box(fan, D):
    '''Integer box containing every f whose pattern a + f(v) has nontrivial
    reduced homology.

    Covers the polytopes P0 (all r_i >= 0) and P2 (all r_i <= -1), the
    pairwise parallelograms |f(v_i)|, |f(v_j)| <= A + 1 and the polytopes of
    alternating sign patterns on cyclically ordered quadruples.
    '''
    a = tuple(D)
    n = fan.n
    vs = fan.vectors
    A = max(abs(x) for x in a)
    points = [(Fraction(0), Fraction(0))]
    points += _polygon_points(fan, [(v, '>=', -a[i]) for i, v in enumerate(vs)])
    points += _polygon_points(fan, [(v, '<=', -a[i] - 1) for i, v in enumerate(vs)])
    B = A + 1
    for i, j in itertools.combinations(range(n), 2):
        det = cross(vs[i], vs[j])
        if det == 0:
            continue
        for s1, s2 in itertools.product((B, -B), repeat=2):
            points.append((Fraction(s1 * vs[j][1] - s2 * vs[i][1], det),
                           Fraction(vs[i][0] * s2 - vs[j][0] * s1, det)))
    for quad in itertools.combinations(range(n), 4):
        for shift in (0, 1):
            rows = []
            for pos, idx in enumerate(quad):
                if (pos + shift) % 2 == 0:
                    rows.append((vs[idx], '>=', -a[idx]))
                else:
                    rows.append((vs[idx], '<=', -a[idx] - 1))
            points += _polygon_points(fan, rows)
    lo, hi = bounding_box(points)
    return FunctionalBox(lo, hi)


def pattern_cohomology(fan, D, box):
    '''Sum the reduced homology of Supp(a + f(v)) over every f in box.'''
    a = list(D)
    n = fan.n
    if len(box) == 0:
        return CohomologyDims(0, 0, 0)
    reach = max(abs(x) for x in box.lo + box.hi) + 1
    vmax = max(max(abs(v[0]), abs(v[1])) for v in fan.vectors)
    dtype = np.int64 if 2 * reach * vmax + max(abs(x) for x in a) < INT64_SAFE else object
    vx = np.array([v[0] for v in fan.vectors], dtype=dtype)
    vy = np.array([v[1] for v in fan.vectors], dtype=dtype)
    base = np.array(a, dtype=dtype)
    ys = np.array(list(range(box.lo[1], box.hi[1] + 1)), dtype=dtype)
    h0 = h1 = h2 = 0
    for start in range(box.lo[0], box.hi[0] + 1, SLAB):
        xs = np.array(list(range(start, min(start + SLAB, box.hi[0] + 1))), dtype=dtype)
        F1, F2 = np.meshgrid(xs, ys, indexing='ij')
        F1 = F1.ravel()
        F2 = F2.ravel()
        R = base[None, :] + F1[:, None] * vx[None, :] + F2[:, None] * vy[None, :]
        nonneg = np.asarray(R >= 0, dtype=bool)
        count = nonneg.sum(axis=1)
        starts = (nonneg & ~np.roll(nonneg, 1, axis=1)).sum(axis=1)
        full = count == n
        empty = count == 0
        partial = ~full & ~empty
        h0 += int(full.sum())
        h2 += int(empty.sum())
        h1 += int((starts[partial] - 1).sum())
    return CohomologyDims(h0, h1, h2)


def cohomology_dims(fan, pic, c, box=None):
    '''Dimensions h^0, h^1, h^2 of the line bundle class c.

    Parameters
    ----------
    fan: StackyFan
    pic: PicardGroup
    c: LineBundleClass
    box: FunctionalBox, optional
        Override of the enumeration box (must contain the contribution_box
        of the reduced representative).

    Returns
    -------
    CohomologyDims

    '''
    D = reduce_divisor(fan.vectors, divisor_representative(pic, c))
    if box is None:
        box = contribution_box(fan, D)
    return pattern_cohomology(fan, D, box)


def divisor_cohomology(fan, D, box=None):
    '''Cohomology of O(D) computed straight from a divisor.'''
    D = D if isinstance(D, Divisor) else Divisor(tuple(D))
    return pattern_cohomology(fan, D, box if box is not None else contribution_box(fan, D))
