##
# @file semigroup.py
#
# @section description_semigroup Description
# Semigroups generated by elements w_1..w_n of M = Z^k (+) torsion whose
# free parts span a pointed cone C. Provides the low height set Gamma, the
# decomposition x = a + b with a in the semigroup, the saturation shift r
# with r + (C n M) inside the semigroup, points with many representations
# and the semigroup presentation of a forbidden set.
#
# Elements of M are flat tuples: k free coordinates followed by the torsion
# residues, reduced modulo the invariants.
#
# @section libraries_semigroup Libraries/Modules
# - itertools
# - math
# - collections
# - dataclasses
# - fractions
# - numpy (vectorised search for short integer expressions)
# - htrivpy.htrivpy.lattice
# - htrivpy.htrivpy.picard
# - htrivpy.first_mate.errors

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from htrivpy.htrivpy.lattice import (ConstraintSystem, integer_determinant, primitive,
                                     rational_feasible_point, smith_normal_form,
                                     solve_integer_system)
from htrivpy.htrivpy.picard import Divisor, class_of
from htrivpy.first_mate.errors import DomainError

# Largest candidate grid scanned when searching integer expressions.
EXPRESSION_GRID_LIMIT = 200_000
# Passes of kernel size reduction applied to a Smith normal form expression.
REDUCTION_ROUNDS = 50


@dataclass(frozen=True, eq=False)
class ConeSemigroup(object):
    """!
    Semigroup generated by w_1..w_n in M = Z^k (+) Z/d_1 (+) ... with a
    supporting functional h positive on every generator.
    """
    ## (int) Free rank k of M.
    k: int
    ## (tuple of int) Torsion invariants of M.
    moduli: tuple
    ## (tuple of tuple) Generators as reduced flat tuples.
    generators: tuple
    ## (tuple of int) Supporting functional on the free part.
    h: tuple
    ## (tuple of tuple) Primitive inward facet normals of C.
    normals: tuple = field(repr=False)

    @property
    def n(self):
        return len(self.generators)

    @property
    def zero(self):
        return (0,) * (self.k + len(self.moduli))

    @property
    def total_height(self):
        '''Sum of h(w_i), the height bound of Gamma.'''
        return sum(self.height(w) for w in self.generators)

    def reduce(self, x):
        x = tuple(int(a) for a in x) if hasattr(x, '__len__') else (int(x),)
        if len(x) != self.k + len(self.moduli):
            raise DomainError(f'elements of M have {self.k} free and {len(self.moduli)} '
                              f'torsion coordinates, got {len(x)}', code='domain.length_mismatch')
        return x[:self.k] + tuple(t % d for t, d in zip(x[self.k:], self.moduli))

    def add(self, x, y):
        return self.reduce([a + b for a, b in zip(x, y)])

    def sub(self, x, y):
        return self.reduce([a - b for a, b in zip(x, y)])

    def scale(self, x, m):
        return self.reduce([m * a for a in x])

    def combine(self, coeffs):
        '''Element sum c_i w_i.'''
        total = [0] * (self.k + len(self.moduli))
        for c, w in zip(coeffs, self.generators):
            for j, a in enumerate(w):
                total[j] += c * a
        return self.reduce(total)

    def height(self, x):
        return sum(a * b for a, b in zip(self.h, x[:self.k]))


def _cofactor_normal(rows, k):
    '''Integer vector n with n·y = det(rows; y) for k-1 rows of length k.'''
    normal = []
    for j in range(k):
        minor = [[r[c] for c in range(k) if c != j] for r in rows]
        normal.append((-1) ** (k - 1 + j) * integer_determinant(minor))
    return tuple(normal)


def facet_normals(vectors, k):
    '''Primitive inward normals of the facets of a full dimensional cone.

    Parameters
    ----------
    vectors: sequence of tuple
        Generators (free parts) of the cone.
    k: int
        Ambient dimension.

    Returns
    -------
    tuple of tuple
        Sorted normals n with n·w >= 0 for every generator.

    '''
    vectors = [tuple(v[:k]) for v in vectors if any(v[:k])]
    normals = set()
    for subset in itertools.combinations(vectors, k - 1):
        normal = _cofactor_normal(subset, k)
        if not any(normal):
            continue
        values = [sum(a * b for a, b in zip(normal, w)) for w in vectors]
        if all(x >= 0 for x in values):
            normals.add(primitive(normal))
        elif all(x <= 0 for x in values):
            normals.add(primitive(tuple(-a for a in normal)))
    return tuple(sorted(normals))


def _generates(k, moduli, generators):
    t = len(moduli)
    columns = [list(w) for w in generators]
    for j, d in enumerate(moduli):
        columns.append([d if r == k + j else 0 for r in range(k + t)])
    matrix = [[col[r] for col in columns] for r in range(k + t)]
    dec = smith_normal_form(matrix)
    return dec.rank == k + t and all(d == 1 for d in dec.invariants)


def cone_semigroup(generators, moduli=(), h=None):
    '''Validate generators and build a ConeSemigroup.

    Parameters
    ----------
    generators: sequence of sequence of int
        Flat elements of M (free coordinates, then torsion residues).
    moduli: sequence of int, optional
        Torsion invariants of M.
    h: sequence of int, optional
        Supporting functional; the sum of the facet normals when omitted.

    Returns
    -------
    ConeSemigroup

    '''
    moduli = tuple(int(d) for d in moduli)
    generators = [w if hasattr(w, '__len__') else (w,) for w in generators]
    if not generators:
        raise DomainError('a semigroup needs at least one generator', code='domain.empty')
    width = len(generators[0])
    k = width - len(moduli)
    if k < 1:
        raise DomainError('the free rank of M must be positive', code='domain.length_mismatch')
    shape = ConeSemigroup(k, moduli, (), (0,) * k, ())
    gens = tuple(shape.reduce(w) for w in generators)
    if not _generates(k, moduli, gens):
        raise DomainError('the generators do not generate M', code='domain.not_generating')
    if rational_feasible_point(ConstraintSystem(k, tuple((w[:k], '>=', 1) for w in gens))) is None:
        raise DomainError('the cone spanned by the generators is not pointed',
                          code='domain.not_pointed')
    normals = facet_normals(gens, k)
    if h is None:
        h = tuple(sum(nrm[j] for nrm in normals) for j in range(k))
    else:
        h = tuple(int(a) for a in h)
        if len(h) != k:
            raise DomainError(f'h needs {k} coefficients', code='domain.length_mismatch')
    for i, w in enumerate(gens):
        if sum(a * b for a, b in zip(h, w[:k])) <= 0:
            raise DomainError(f'h is not positive on generator {i + 1}', code='domain.height')
    return ConeSemigroup(k, moduli, gens, h, normals)


def height(S, x):
    return S.height(S.reduce(x))


def cone_contains(S, x):
    '''True when the free part of x lies in the real cone C.'''
    x = S.reduce(x)
    return all(sum(a * b for a, b in zip(nrm, x[:S.k])) >= 0 for nrm in S.normals)


@dataclass(frozen=True)
class GammaSet(object):
    ## (tuple of tuple) Elements of C n M below the height bound, sorted.
    points: tuple
    ## (int) Height bound sum h(w_i) (exclusive).
    bound: int

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, x):
        return tuple(x) in self.points


def cone_points(S, max_height, strict=False):
    '''Elements of C n M with h <= max_height (h < max_height when strict).'''
    limit = max_height - 1 if strict else max_height
    if limit < 0:
        return []
    box = []
    for j in range(S.k):
        reach = max(-(-abs(w[j]) * limit // S.height(w)) for w in S.generators)
        box.append(range(-reach, reach + 1))
    torsion = list(itertools.product(*[range(d) for d in S.moduli]))
    out = []
    for free in itertools.product(*box):
        if sum(a * b for a, b in zip(S.h, free)) > limit:
            continue
        if all(sum(a * b for a, b in zip(nrm, free)) >= 0 for nrm in S.normals):
            out.extend(free + t for t in torsion)
    return sorted(out, key=lambda x: (S.height(x), x))


def gamma_set(S):
    '''All p in C n M with h(p) < sum h(w_i), every torsion coset included.'''
    bound = S.total_height
    return GammaSet(tuple(cone_points(S, bound, strict=True)), bound)


def representations(S, x, limit=None):
    '''Nonnegative integer vectors c with sum c_i w_i = x, lexicographic order.

    The search is finite because every h(w_i) is positive.
    '''
    target = S.reduce(x)
    if S.height(target) < 0:
        return []
    heights = [S.height(w) for w in S.generators]
    last = S.n - 1
    found = []

    def search(i, rest, coeffs):
        if limit is not None and len(found) >= limit:
            return
        hr = S.height(rest)
        if i == last:
            if hr % heights[i] == 0 and \
                    S.sub(rest, S.scale(S.generators[i], hr // heights[i])) == S.zero:
                found.append(coeffs + (hr // heights[i],))
            return
        for c in range(hr // heights[i] + 1):
            search(i + 1, S.sub(rest, S.scale(S.generators[i], c)), coeffs + (c,))

    search(0, target, ())
    return found


def fs_contains(S, x):
    '''Membership of x in the semigroup generated by the w_i.'''
    return bool(representations(S, x, limit=1))


def representation_counts(S, max_height):
    '''Number of representations of every semigroup element with h <= max_height.'''
    counts = defaultdict(int)
    counts[S.zero] = 1
    for w in S.generators:
        hw = S.height(w)
        buckets = defaultdict(list)
        for x in counts:
            buckets[S.height(x)].append(x)
        for level in range(0, max_height - hw + 1):
            for x in buckets.get(level, ()):
                y = S.add(x, w)
                if y not in counts:
                    buckets[level + hw].append(y)
                counts[y] += counts[x]
    return dict(counts)


def _expression_size(c):
    return (max((abs(a) for a in c), default=0), sum(abs(a) for a in c), tuple(c))


def _size_reduce(c, kernel, rounds=REDUCTION_ROUNDS):
    '''Subtract integer multiples of kernel vectors while the size of c drops.'''
    c = list(c)
    for _ in range(rounds):
        improved = False
        for kv in kernel:
            norm = sum(a * a for a in kv)
            if norm == 0:
                continue
            center = Fraction(sum(a * b for a, b in zip(c, kv)), norm)
            best = _expression_size(c)
            for t in sorted({math.floor(center), math.ceil(center), 1, -1}):
                if t == 0:
                    continue
                trial = [a - t * b for a, b in zip(c, kv)]
                if _expression_size(trial) < best:
                    c, best, improved = trial, _expression_size(trial), True
        if not improved:
            break
    return tuple(c)


def _expression_lattice(S):
    '''Generator matrix with the torsion columns d_j e_j appended, and a
    size reduced kernel basis restricted to the generator coordinates.'''
    t = len(S.moduli)
    columns = [list(w) for w in S.generators]
    for j, d in enumerate(S.moduli):
        columns.append([d if r == S.k + j else 0 for r in range(S.k + t)])
    matrix = [[col[r] for col in columns] for r in range(S.k + t)]
    dec = smith_normal_form(matrix)
    K, rank = dec.V, dec.rank
    kernel = [tuple(int(K[i, j]) for i in range(S.n)) for j in range(rank, K.shape[1])]
    kernel = [kv for kv in kernel if any(kv)]
    for i, kv in enumerate(kernel):
        kernel[i] = _size_reduce(kv, kernel[:i] + kernel[i + 1:])
    return matrix, kernel


def integer_expressions(S, points):
    '''Integer coefficient vectors c with sum c_i w_i = p for each point.

    Small expressions are searched on a grid of coefficients, minimising
    max |c_i|, then sum |c_i|, then the coefficient tuple. Points left once
    the grid outgrows EXPRESSION_GRID_LIMIT get a Smith normal form solution
    size reduced against the integer kernel.
    '''
    wanted = {S.reduce(p) for p in points}
    found = {}
    W = np.array([list(w) for w in S.generators], dtype=np.int64)
    R = 0
    while len(found) < len(wanted) and (2 * R + 1) ** S.n <= EXPRESSION_GRID_LIMIT:
        axis = np.arange(-R, R + 1, dtype=np.int64)
        grid = np.stack(np.meshgrid(*([axis] * S.n), indexing='ij'), axis=-1).reshape(-1, S.n)
        grid = grid[np.abs(grid).max(axis=1) == R]
        keys = [grid[:, j] for j in range(S.n - 1, -1, -1)]
        order = np.lexsort(keys + [np.abs(grid).sum(axis=1)])
        grid = grid[order]
        images = grid @ W
        for j, d in enumerate(S.moduli):
            images[:, S.k + j] %= d
        for row, image in zip(grid.tolist(), images.tolist()):
            image = tuple(image)
            if image in wanted and image not in found:
                found[image] = tuple(row)
        R += 1
    missing = sorted(wanted - set(found))
    if missing:
        matrix, kernel = _expression_lattice(S)
        for p in missing:
            solution = solve_integer_system(matrix, p)
            if solution is None:
                raise DomainError(f'{p} is not an integer combination of the generators',
                                  code='domain.not_generating')
            x0 = tuple(int(a) for a in solution[0][:S.n])
            found[p] = _size_reduce(x0, kernel)
    return found


def saturation_shift(S, gamma=None):
    '''Element r = sum a_j w_j of the semigroup with r + (C n M) inside it.

    a_j is the largest |c_j| over the chosen integer expressions of the
    Gamma points.
    '''
    gamma = gamma_set(S) if gamma is None else gamma
    expressions = integer_expressions(S, gamma.points)
    coeffs = [max(abs(c[j]) for c in expressions.values()) for j in range(S.n)]
    return S.combine(coeffs)


def decompose(S, x):
    '''Split x in C n M as a + b, a in the semigroup and h(b) < sum h(w_i).

    Generators are subtracted lowest index first, keeping the rest in C.
    '''
    x = S.reduce(x)
    if not cone_contains(S, x):
        raise DomainError(f'{x} is not in the cone', code='domain.not_in_cone')
    bound = S.total_height
    a = S.zero
    while S.height(x) >= bound:
        for w in S.generators:
            rest = S.sub(x, w)
            if cone_contains(S, rest):
                x, a = rest, S.add(a, w)
                break
        else:
            raise ArithmeticError(f'no generator can be subtracted from {x}')
    return a, x


def relation(S):
    '''First kernel vector of the generator matrix, first nonzero entry positive.'''
    if S.n <= S.k:
        raise DomainError('the generators satisfy no relation', code='domain.no_relation')
    t = len(S.moduli)
    columns = [list(w) for w in S.generators]
    for j, d in enumerate(S.moduli):
        columns.append([d if r == S.k + j else 0 for r in range(S.k + t)])
    matrix = [[col[r] for col in columns] for r in range(S.k + t)]
    dec = smith_normal_form(matrix)
    vector = [dec.V[i, dec.rank] for i in range(S.n)]
    lead = next(a for a in vector if a != 0)
    return tuple(int(a) if lead > 0 else -int(a) for a in vector)


def multiplicity_point(S, m):
    '''p = (m+1)·p1, p1 the positive half of a relation, so that every
    element of r + p + (C n M) has at least m representations.'''
    if m < 1:
        raise DomainError('m must be a positive integer', code='domain.multiplicity')
    coeffs = relation(S)
    p1 = S.combine([max(a, 0) for a in coeffs])
    return S.scale(p1, m + 1)


@dataclass(frozen=True, eq=False)
class ForbiddenSemigroup(object):
    """!
    FS_I = base + semigroup generated by E_i (i in I) and -E_i (i not in I).
    """
    I: tuple
    semigroup: ConeSemigroup
    ## (LineBundleClass) q_I = -sum of E_i over i not in I.
    base: object

    def element(self, c):
        '''Flat element of M for a class.'''
        return self.semigroup.reduce(c.free + c.torsion)


def forbidden_semigroup(fan, pic, I):
    inside = set(I)
    gens = []
    for i in range(fan.n):
        sign = 1 if i in inside else -1
        c = class_of(pic, Divisor.basis(fan.n, i)) * sign
        gens.append(c.free + c.torsion)
    base = class_of(pic, Divisor(tuple(0 if i in inside else -1 for i in range(fan.n))))
    return ForbiddenSemigroup(tuple(sorted(inside)),
                              cone_semigroup(gens, pic.torsion_invariants), base)
