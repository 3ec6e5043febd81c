##
# @file forbidden.py
#
# @section description_forbidden Description
# The family Delta of index sets with nontrivial reduced homology, forbidden
# set membership decided by integer feasibility in functional space, the
# H-triviality oracle built on it, and interior membership of real
# directions in the forbidden cones.
#
# @section libraries_forbidden Libraries/Modules
# - itertools
# - math
# - dataclasses
# - fractions
# - htrivpy.htrivpy.lattice
# - htrivpy.htrivpy.picard
# - htrivpy.htrivpy.cohomology
# - htrivpy.first_mate.errors

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from htrivpy.htrivpy.fan import cross
from htrivpy.htrivpy.lattice import (ConstraintSystem, integer_point_of_rows,
                                     rational_feasible_point, primitive)
from htrivpy.htrivpy.picard import (Divisor, LineBundleClass, LinearFunctional2,
                                    class_of, divisor_representative)
from htrivpy.htrivpy.cohomology import cohomology_dims
from htrivpy.first_mate.errors import DomainError, OracleDisagreementError

# Above this many rays Delta is produced lazily.
MATERIALIZE_LIMIT = 16


def is_cyclic_arc(I, n):
    '''True for nonempty proper subsets of Z/n forming one contiguous arc.'''
    inside = set(I)
    if not inside or len(inside) == n:
        return False
    return sum(1 for i in inside if (i - 1) % n not in inside) == 1


def iter_delta(n):
    '''Members of Delta ordered by size, then lexicographically.'''
    for size in range(n + 1):
        for I in itertools.combinations(range(n), size):
            if size in (0, n) or not is_cyclic_arc(I, n):
                yield I


@dataclass(frozen=True)
class IndexFamilyDelta(object):
    """!
    Empty set, full set and every nonempty proper non-arc subset of the
    n-cycle (0-based indices).
    """
    n: int
    ## (tuple of tuple or None) Stored members; None when produced lazily.
    members: tuple = None

    def __iter__(self):
        if self.members is not None:
            return iter(self.members)
        return iter_delta(self.n)

    def __len__(self):
        if self.members is not None:
            return len(self.members)
        return sum(1 for _ in iter_delta(self.n))

    def __contains__(self, I):
        I = tuple(sorted(set(I)))
        if any(i < 0 or i >= self.n for i in I):
            return False
        return len(I) in (0, self.n) or not is_cyclic_arc(I, self.n)

    def check_order(self):
        '''Empty and full set first (the most frequent hits), then the rest.'''
        full = tuple(range(self.n))
        yield ()
        yield full
        for I in self:
            if I not in ((), full):
                yield I


def delta_family(fan):
    n = fan if isinstance(fan, int) else fan.n
    if n <= MATERIALIZE_LIMIT:
        return IndexFamilyDelta(n, tuple(iter_delta(n)))
    return IndexFamilyDelta(n)


@dataclass(frozen=True)
class ForbiddenSetSpec(object):
    """!
    FS_I: classes with a representative r such that r_i >= 0 on I and
    r_i <= -1 off I.
    """
    n: int
    I: tuple

    def rows(self, fan, a, direction=None):
        '''Rows (coefficients, rhs) meaning coefficients·x >= rhs.

        Variables are (f1, f2), or (f1, f2, l) when a direction
        representative b is given (representative a + l*b + f(v)).
        '''
        inside = set(self.I)
        out = []
        for i, v in enumerate(fan.vectors):
            coeffs = (v[0], v[1]) if direction is None else (v[0], v[1], direction[i])
            if i in inside:
                out.append((coeffs, -a[i]))
            else:
                out.append((tuple(-x for x in coeffs), 1 + a[i]))
        return out

    def system(self, fan, a):
        return ConstraintSystem(2, tuple((c, '>=', r) for c, r in self.rows(fan, a)))


@dataclass(frozen=True)
class ForbiddenMembership(object):
    ## (bool) True when the class lies in FS_I.
    contained: bool
    I: tuple
    ## (Divisor or None) Witness representative a + f(v).
    r: Divisor = None
    ## (tuple or None) Witness functional f.
    f: tuple = None

    def __bool__(self):
        return self.contained


def _member(fan, a, I):
    spec = ForbiddenSetSpec(fan.n, I)
    f = integer_point_of_rows(spec.rows(fan, a), 2)
    if f is None:
        return ForbiddenMembership(False, I)
    return ForbiddenMembership(True, I, Divisor(a).shifted(fan, f), tuple(f))


def forbidden_set_contains(fan, pic, I, c):
    '''Decide c in FS_I; the result carries a witness (r, f) when true.'''
    I = tuple(sorted(set(I)))
    if I not in delta_family(fan):
        raise DomainError(f'{[i + 1 for i in I]} is a cyclic arc, not a member of Delta',
                          code='domain.not_in_delta')
    a = divisor_representative(pic, c)
    return _member(fan, a, I)


def forbidden_witness(fan, pic, c):
    '''First forbidden set containing c (check order) or None.'''
    a = divisor_representative(pic, c)
    for I in delta_family(fan).check_order():
        hit = _member(fan, a, I)
        if hit:
            return hit
    return None


def is_h_trivial(fan, pic, c, cross_check=False):
    '''True iff c lies in no forbidden set.

    With cross_check the cohomology oracle is evaluated too and any
    disagreement raises OracleDisagreementError.
    '''
    trivial = forbidden_witness(fan, pic, c) is None
    if cross_check:
        dims = cohomology_dims(fan, pic, c)
        if dims.vanishes != trivial:
            raise OracleDisagreementError(
                f'class {c}: feasibility says trivial={trivial}, '
                f'cohomology gives {dims.as_tuple()}')
    return trivial


def _rational_divisor(fan, pic, c):
    if isinstance(c, LineBundleClass):
        return [Fraction(x) for x in divisor_representative(pic, c)]
    values = [Fraction(x) for x in c]
    if len(values) == fan.n:
        return values
    if len(values) == pic.free_rank:
        return [sum((Fraction(pic.lift_free[i, k]) * values[k] for k in range(pic.free_rank)),
                    Fraction(0)) for i in range(fan.n)]
    raise DomainError(f'a direction needs {fan.n} divisor or {pic.free_rank} class '
                      f'coordinates', code='domain.length_mismatch')


def _is_relation(fan, a):
    vs = fan.vectors
    for i, j in itertools.combinations(range(fan.n), 2):
        det = cross(vs[i], vs[j])
        if det:
            f1 = (a[i] * vs[j][1] - a[j] * vs[i][1]) / det
            f2 = (vs[i][0] * a[j] - vs[j][0] * a[i]) / det
            return all(f1 * v[0] + f2 * v[1] == x for v, x in zip(vs, a))
    return False


def interior_membership(fan, pic, c):
    '''Some I in Delta whose forbidden cone contains the real direction c in
    its interior, or None.

    Parameters
    ----------
    c: LineBundleClass or sequence of rationals
        A class, a rational divisor (n entries) or rational free
        coordinates (free_rank entries).

    '''
    a = _rational_divisor(fan, pic, c)
    if _is_relation(fan, a):
        raise DomainError('the zero class has no interior direction', code='domain.zero_class')
    scale = math.lcm(*[x.denominator for x in a])
    a = [int(x * scale) for x in a]
    for I in delta_family(fan):
        inside = set(I)
        rows = [((0, 0, 1), '>=', 1)]
        for i, v in enumerate(fan.vectors):
            if i in inside:
                rows.append(((v[0], v[1], a[i]), '>=', 1))
            else:
                rows.append(((v[0], v[1], a[i]), '<=', -1))
        if rational_feasible_point(ConstraintSystem(3, tuple(rows))) is not None:
            return I
    return None


def vanishing_functional(fan, pair):
    '''Primitive integer functional h(v) = det(v_p, v)/g vanishing on the pair.'''
    p = fan.vectors[pair.i]
    q = fan.vectors[pair.j]
    if cross(p, q) != 0 or p[0] * q[0] + p[1] * q[1] >= 0:
        raise DomainError(f'rays {pair.i + 1} and {pair.j + 1} are not antiparallel',
                          code='domain.not_collinear')
    w = primitive((-p[1], p[0]))
    return LinearFunctional2(*w)


def sign_change_class(fan, pic, pair):
    '''The class sum_{h(v_i) > 0} h(v_i) E_i - E_p built from a collinear pair.'''
    h = vanishing_functional(fan, pair)
    coeffs = [max(h(v), 0) for v in fan.vectors]
    coeffs[pair.i] -= 1
    return class_of(pic, Divisor(tuple(coeffs)))
