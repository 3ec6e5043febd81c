##
# @file picard.py
#
# @section description_picard Description
# Picard group of the toric stack of a stacky fan: Z^n modulo the lattice of
# relation rows (f(v_1), ..., f(v_n)), presented through the Smith normal
# form of the n x 2 matrix of ray generators. Classes are carried with
# the fingerprint of their group.
#
# @section libraries_picard Libraries/Modules
# - itertools
# - math
# - dataclasses
# - fractions
# - htrivpy.htrivpy.lattice
# - htrivpy.first_mate.errors

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from htrivpy.htrivpy.lattice import (integer_matrix, smith_normal_form, unimodular_inverse,
                                     integer_determinant, mat_vec)
from htrivpy.first_mate.errors import DomainError, PicardMismatchError


@dataclass(frozen=True)
class LinearFunctional2(object):
    """!
    Integer functional w on Z^2, evaluated as w(v) = w1*x + w2*y.
    """
    w1: int
    w2: int

    def __call__(self, v):
        return self.w1 * v[0] + self.w2 * v[1]

    def values(self, fan):
        return tuple(self(v) for v in fan.vectors)


@dataclass(frozen=True)
class Divisor(object):
    """!
    Integer combination r_1 E_1 + ... + r_n E_n of the boundary divisors.
    """
    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, 'coefficients', tuple(int(r) for r in self.coefficients))

    @classmethod
    def basis(cls, n, k):
        return cls(tuple(1 if i == k else 0 for i in range(n)))

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]

    def __iter__(self):
        return iter(self.coefficients)

    def __add__(self, other):
        return Divisor(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        return Divisor(tuple(a - b for a, b in zip(self, other)))

    def shifted(self, fan, f):
        '''Equivalent divisor r + f(v).'''
        f = f if isinstance(f, LinearFunctional2) else LinearFunctional2(*f)
        return Divisor(tuple(r + f(v) for r, v in zip(self, fan.vectors)))


@dataclass(frozen=True)
class LineBundleClass(object):
    """!
    Element of Pic: free coordinates and torsion residues in the canonical
    coordinates of the owning PicardGroup.
    """
    ## (tuple of int) Free coordinates.
    free: tuple
    ## (tuple of int, default: ()) Residues, reduced to [0, d).
    torsion: tuple = ()
    ## (tuple of int, default: ()) Torsion invariants of the group.
    moduli: tuple = ()
    ## (str, default: '') Fingerprint of the owning PicardGroup.
    group: str = ''

    def _check(self, other):
        if not isinstance(other, LineBundleClass) or other.group != self.group:
            raise PicardMismatchError('line bundle classes of different Picard groups')

    def _make(self, free, torsion):
        return LineBundleClass(tuple(free), tuple(t % d for t, d in zip(torsion, self.moduli)),
                               self.moduli, self.group)

    def __add__(self, other):
        self._check(other)
        return self._make([a + b for a, b in zip(self.free, other.free)],
                          [a + b for a, b in zip(self.torsion, other.torsion)])

    def __sub__(self, other):
        self._check(other)
        return self._make([a - b for a, b in zip(self.free, other.free)],
                          [a - b for a, b in zip(self.torsion, other.torsion)])

    def __neg__(self):
        return self._make([-a for a in self.free], [-a for a in self.torsion])

    def __mul__(self, m):
        return self._make([m * a for a in self.free], [m * a for a in self.torsion])

    __rmul__ = __mul__

    @property
    def is_zero(self):
        return not any(self.free) and not any(self.torsion)

    @property
    def norm2(self):
        return sum(a * a for a in self.free)

    @property
    def key(self):
        '''Sort key: graded by squared norm, then lexicographic, torsion last.'''
        return (self.norm2, self.free, self.torsion)

    def __str__(self):
        text = ','.join(str(a) for a in self.free)
        if self.torsion:
            text += ';' + ','.join(str(t) for t in self.torsion)
        return f'({text})'


@dataclass(frozen=True, eq=False)
class PicardGroup(object):
    """!
    Presentation Z^n / relations ~ Z^free_rank (+) Z/d_1 (+) ... .

    The projection sends a divisor to canonical coordinates (display basis
    coordinates when a subset of the E_i is a basis, Smith coordinates
    otherwise); the lift sends canonical coordinates back to a divisor.
    """
    ## (int) Number of rays.
    n: int
    ## (int) Rank of the free part, n - 2.
    free_rank: int
    ## (tuple of int) Invariant factors d >= 2.
    torsion_invariants: tuple
    ## (tuple of int or None) 0-based indices of the E_i forming the display basis.
    basis: tuple
    ## (str) Fingerprint of fan and coordinate system.
    fingerprint: str
    ## (numpy.ndarray) free_rank x n projection to free coordinates.
    proj_free: object = field(repr=False)
    ## (numpy.ndarray) torsion x n projection to torsion residues.
    proj_torsion: object = field(repr=False)
    ## (numpy.ndarray) n x free_rank lift of free coordinates.
    lift_free: object = field(repr=False)
    ## (numpy.ndarray) n x torsion lift of torsion residues.
    lift_torsion: object = field(repr=False)
    ## (tuple of (int, int)) The fan vectors, used by relation helpers.
    vectors: tuple = field(repr=False, default=())

    @property
    def basis_labels(self):
        if self.basis is None:
            return None
        return tuple(f'E{i + 1}' for i in self.basis)

    def make_class(self, free, torsion=()):
        free = tuple(int(a) for a in free)
        torsion = tuple(int(t) for t in torsion)
        if len(free) != self.free_rank or len(torsion) != len(self.torsion_invariants):
            raise DomainError(f'class needs {self.free_rank} free coordinates and '
                              f'{len(self.torsion_invariants)} torsion residues',
                              code='domain.length_mismatch')
        return LineBundleClass(free, tuple(t % d for t, d in zip(torsion, self.torsion_invariants)),
                               self.torsion_invariants, self.fingerprint)

    def zero(self):
        return self.make_class((0,) * self.free_rank, (0,) * len(self.torsion_invariants))

    def check(self, c):
        if not isinstance(c, LineBundleClass) or c.group != self.fingerprint:
            raise PicardMismatchError('class does not belong to this Picard group')
        return c

    def relation(self, f):
        '''Relation divisor (f(v_1), ..., f(v_n)).'''
        f = f if isinstance(f, LinearFunctional2) else LinearFunctional2(*f)
        return Divisor(tuple(f(v) for v in self.vectors))

    def all_torsion(self):
        return list(itertools.product(*[range(d) for d in self.torsion_invariants]))

    def classes_in_ball(self, radius):
        '''Classes with |free|^2 <= radius^2, graded lexicographic, torsion innermost.'''
        radius = Fraction(radius)
        bound = math.floor(radius)
        r2 = radius * radius
        points = [p for p in itertools.product(range(-bound, bound + 1), repeat=self.free_rank)
                  if sum(a * a for a in p) <= r2]
        points.sort(key=lambda p: (sum(a * a for a in p), p))
        torsion = self.all_torsion()
        for p in points:
            for t in torsion:
                yield self.make_class(p, t)


def _display_basis(fan, U, k, torsion_free, basis):
    if basis is None or not torsion_free:
        if basis not in (None, 'auto'):
            raise DomainError('a display basis needs a torsion free Picard group',
                              code='domain.basis')
        return None, None
    free_rows = U[2:, :]
    if basis == 'auto':
        candidates = itertools.combinations(range(fan.n), k)
    else:
        chosen = tuple(sorted(int(i) for i in basis))
        if len(chosen) != k or len(set(chosen)) != k or not all(0 <= i < fan.n for i in chosen):
            raise DomainError(f'display basis must be {k} distinct indices', code='domain.basis')
        candidates = [chosen]
    for subset in candidates:
        Q = integer_matrix([[free_rows[r, s] for s in subset] for r in range(k)])
        if abs(integer_determinant(Q)) == 1:
            return subset, unimodular_inverse(Q)
    if basis != 'auto':
        raise DomainError(f'E_i for i in {[i + 1 for i in basis]} do not form a basis of Pic',
                          code='domain.basis')
    return None, None


def _reduced_columns(fan, columns):
    reduced = [reduce_divisor(fan.vectors, col) for col in columns]
    return integer_matrix([[col[i] for col in reduced] for i in range(fan.n)], fan.n, len(reduced))


def picard_group(fan, basis='auto'):
    '''Compute Pic of the stacky fan.

    Parameters
    ----------
    fan: StackyFan
        Validated fan.
    basis: 'auto', None or sequence of int, optional
        'auto' picks the lexicographically first subset of E_i forming a
        basis (torsion free case), None keeps Smith coordinates, a sequence
        of 0-based indices picks that subset.

    Returns
    -------
    PicardGroup

    '''
    n = fan.n
    relations = integer_matrix([list(v) for v in fan.vectors])  # n x 2
    dec = smith_normal_form(relations)
    U = dec.U
    Uinv = unimodular_inverse(U)
    diag = dec.diagonal
    if dec.rank != 2:
        raise DomainError('ray generators do not span the plane', code='fan.not_complete')
    k = n - 2
    slots = [i for i in range(2) if diag[i] >= 2]
    moduli = tuple(diag[i] for i in slots)
    subset, T = _display_basis(fan, U, k, not slots, basis)
    free_rows = integer_matrix([[U[r, c] for c in range(n)] for r in range(2, n)], k, n)
    if subset is not None:
        proj_free = integer_matrix([[sum(T[a, b] * free_rows[b, c] for b in range(k))
                                     for c in range(n)] for a in range(k)], k, n)
        lift_free = integer_matrix([[1 if subset[a] == i else 0 for a in range(k)]
                                    for i in range(n)], n, k)
    else:
        proj_free = free_rows
        lift_free = _reduced_columns(fan, [[Uinv[i, 2 + a] for i in range(n)] for a in range(k)])
    proj_torsion = integer_matrix([[U[s, c] for c in range(n)] for s in slots], len(slots), n)
    lift_torsion = _reduced_columns(fan, [[Uinv[i, s] for i in range(n)] for s in slots])
    tag = 'snf' if subset is None else '-'.join(str(i + 1) for i in subset)
    return PicardGroup(n=n, free_rank=k, torsion_invariants=moduli, basis=subset,
                       fingerprint=f'{fan.fingerprint}:{tag}', proj_free=proj_free,
                       proj_torsion=proj_torsion, lift_free=lift_free,
                       lift_torsion=lift_torsion, vectors=fan.vectors)


def class_of(pic, D):
    '''Class of a divisor in canonical coordinates.'''
    r = tuple(D) if not isinstance(D, Divisor) else D.coefficients
    if len(r) != pic.n:
        raise DomainError(f'divisor has {len(r)} coefficients, the fan has {pic.n} rays',
                          code='domain.length_mismatch')
    free = mat_vec(pic.proj_free, r)
    torsion = mat_vec(pic.proj_torsion, r)
    return pic.make_class(free, torsion)


def divisor_representative(pic, c):
    '''A divisor whose class is c.'''
    pic.check(c)
    free = mat_vec(pic.lift_free, c.free)
    torsion = mat_vec(pic.lift_torsion, c.torsion)
    return Divisor(tuple(a + b for a, b in zip(free, torsion)))


def rational_class_vector(pic, D):
    '''Free coordinates of a rational divisor (torsion is invisible over Q).'''
    return tuple(sum((Fraction(pic.proj_free[a, i]) * Fraction(D[i]) for i in range(pic.n)),
                     Fraction(0)) for a in range(pic.free_rank))


# Steps tried when walking a functional towards smaller coefficients.
NEIGHBOURS = tuple((dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx, dy) != (0, 0))


def _shift_size(vectors, r, f):
    vals = [a + f[0] * x + f[1] * y for a, (x, y) in zip(r, vectors)]
    return (max(abs(v) for v in vals), sum(abs(v) for v in vals), f)


def reduce_divisor(vectors, D):
    '''Equivalent divisor D + f(v) with small coefficients.

    Starts from the zero functional and the integer functionals around the
    least squares minimiser of sum (r_i + f(v_i))^2, then steps to
    neighbouring functionals while the largest coefficient (then the
    coefficient sum) shrinks.

    Parameters
    ----------
    vectors: sequence of (int, int)
        Ray generators, spanning the plane.
    D: Divisor or sequence of int

    Returns
    -------
    Divisor

    '''
    r = tuple(int(a) for a in D)
    gxx = sum(x * x for x, _ in vectors)
    gxy = sum(x * y for x, y in vectors)
    gyy = sum(y * y for _, y in vectors)
    bx = -sum(a * x for a, (x, _) in zip(r, vectors))
    by = -sum(a * y for a, (_, y) in zip(r, vectors))
    det = gxx * gyy - gxy * gxy
    if det == 0:
        raise DomainError('ray generators do not span the plane', code='fan.not_complete')
    fx = Fraction(bx * gyy - by * gxy, det)
    fy = Fraction(gxx * by - gxy * bx, det)
    starts = [(0, 0)] + [(p, q) for p in {math.floor(fx), math.ceil(fx)}
                         for q in {math.floor(fy), math.ceil(fy)}]
    best = min(_shift_size(vectors, r, f) for f in starts)
    while True:
        f = best[2]
        step = min(_shift_size(vectors, r, (f[0] + dx, f[1] + dy)) for dx, dy in NEIGHBOURS)
        if step[:2] >= best[:2]:
            break
        best = step
    f = best[2]
    return Divisor(tuple(a + f[0] * x + f[1] * y for a, (x, y) in zip(r, vectors)))
