##
# @file lattice.py
#
# @section description_lattice Description
# Exact integer and rational linear algebra: Smith normal form with
# transforms, integer solutions of linear systems, vertices of rational
# polygons and integer feasibility of small constraint systems.
#
# @section libraries_lattice Libraries/Modules
# - math
# - fractions
# - dataclasses
# - numpy (object dtype integer matrices)
# - sympy (exact determinants and inverses)
# - htrivpy.first_mate.errors

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from htrivpy.first_mate.errors import DimensionError, DomainError

RELATIONS = {'>=': '>=', '≥': '>=', '<=': '<=', '≤': '<=', '=': '=', '==': '='}
MAX_FEASIBILITY_DIMENSION = 3


#===============================================================================
# Integer matrices
#===============================================================================
def integer_matrix(entries, rows=None, cols=None):
    '''Build a 2-D numpy array of Python ints (``dtype=object``).

    Parameters
    ----------
    entries: array-like
        Nested rows, a 2-D numpy array or a flat sequence when rows and
        cols are given.
    rows, cols: int, optional
        Shape; required for flat input and for empty matrices.

    Returns
    -------
    numpy.ndarray
        Arbitrary precision integer matrix.

    '''
    if isinstance(entries, np.ndarray) and entries.ndim == 2:
        rows, cols = entries.shape
        flat = entries.ravel().tolist()
    elif rows is not None and cols is not None and \
            (len(entries) == 0 or not hasattr(entries[0], '__len__')):
        flat = list(entries)
    else:
        nested = [list(row) for row in entries]
        rows = len(nested) if rows is None else rows
        cols = (len(nested[0]) if nested else 0) if cols is None else cols
        if any(len(row) != cols for row in nested):
            raise DomainError('ragged integer matrix', code='domain.shape')
        flat = [x for row in nested for x in row]
    if len(flat) != rows * cols:
        raise DomainError(f'expected {rows}x{cols} entries, got {len(flat)}',
                          code='domain.shape')
    values = []
    for x in flat:
        if x != int(x):
            raise DomainError(f'non integral entry {x}', code='domain.not_integral')
        values.append(int(x))
    out = np.empty((rows, cols), dtype=object)
    if values:
        out.ravel()[:] = values
    return out


def identity(n):
    out = integer_matrix([], n, n) if n == 0 else integer_matrix(
        [[1 if i == j else 0 for j in range(n)] for i in range(n)])
    return out


def mat_mul(A, B):
    '''Exact product of two integer (or rational) object matrices.'''
    if A.shape[1] != B.shape[0]:
        raise DomainError(f'shape mismatch {A.shape} x {B.shape}', code='domain.shape')
    out = np.empty((A.shape[0], B.shape[1]), dtype=object)
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            out[i, j] = sum((A[i, k] * B[k, j] for k in range(A.shape[1])), 0)
    return out


def mat_vec(A, x):
    return tuple(sum((A[i, k] * x[k] for k in range(A.shape[1])), 0)
                 for i in range(A.shape[0]))


def integer_determinant(M):
    '''Exact determinant of a square integer matrix.'''
    M = integer_matrix(M)
    if M.shape[0] == 0:
        return 1
    return int(sympy.Matrix(M.tolist()).det())


def unimodular_inverse(M):
    '''Inverse of a unimodular integer matrix (raises if not unimodular).'''
    M = integer_matrix(M)
    if M.shape[0] == 0:
        return M.copy()
    if abs(integer_determinant(M)) != 1:
        raise DomainError('matrix is not unimodular', code='domain.not_unimodular')
    inv = sympy.Matrix(M.tolist()).inv()
    return integer_matrix([[int(x) for x in inv.row(i)] for i in range(inv.rows)])


def primitive(vector):
    '''Divide an integer vector by the gcd of its entries (zero stays zero).'''
    g = math.gcd(*[int(x) for x in vector]) if len(vector) else 0
    if g == 0:
        return tuple(int(x) for x in vector)
    return tuple(int(x) // g for x in vector)


#===============================================================================
# Smith normal form
#===============================================================================
@dataclass(frozen=True, eq=False)
class SmithDecomposition(object):
    """!
    Result of smith_normal_form: U·M·V = D with U, V unimodular and the
    nonnegative diagonal of D forming a divisibility chain.
    """
    ## (numpy.ndarray) Left unimodular transform, rows x rows.
    U: np.ndarray
    ## (numpy.ndarray) Diagonal matrix with the shape of M.
    D: np.ndarray
    ## (numpy.ndarray) Right unimodular transform, cols x cols.
    V: np.ndarray

    @property
    def diagonal(self):
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariants(self):
        '''Nonzero diagonal entries.'''
        return tuple(d for d in self.diagonal if d != 0)


def _smallest_entry(A, t, rows, cols):
    best = None
    for i in rows:
        for j in cols:
            x = A[i, j]
            if x != 0 and (best is None or abs(x) < abs(A[best[0], best[1]])):
                best = (i, j)
    return best


def _swap_rows(A, i, j):
    if i != j:
        A[[i, j], :] = A[[j, i], :]


def _swap_cols(A, i, j):
    if i != j:
        A[:, [i, j]] = A[:, [j, i]]


def smith_normal_form(M):
    '''Smith normal form with transforms.

    Pivot selection takes the entry of smallest absolute value, earliest in
    row-major order, so the output is deterministic for a fixed input.

    Parameters
    ----------
    M: array-like
        Integer matrix.

    Returns
    -------
    SmithDecomposition
        U, D, V with U·M·V = D.

    '''
    A = integer_matrix(M).copy()
    r, c = A.shape
    U, V = identity(r), identity(c)
    for t in range(min(r, c)):
        pivot = _smallest_entry(A, t, range(t, r), range(t, c))
        if pivot is None:
            break
        _swap_rows(A, t, pivot[0]); _swap_rows(U, t, pivot[0])
        _swap_cols(A, t, pivot[1]); _swap_cols(V, t, pivot[1])
        while True:
            clean = True
            for i in range(t + 1, r):
                if A[i, t] != 0:
                    q = A[i, t] // A[t, t]
                    A[i, :] = A[i, :] - q * A[t, :]
                    U[i, :] = U[i, :] - q * U[t, :]
                    clean = clean and A[i, t] == 0
            for j in range(t + 1, c):
                if A[t, j] != 0:
                    q = A[t, j] // A[t, t]
                    A[:, j] = A[:, j] - q * A[:, t]
                    V[:, j] = V[:, j] - q * V[:, t]
                    clean = clean and A[t, j] == 0
            if not clean:
                # a remainder survived: move the smallest one onto the pivot
                best = (t, t)
                for i in range(t + 1, r):
                    if A[i, t] != 0 and abs(A[i, t]) < abs(A[best[0], best[1]]):
                        best = (i, t)
                for j in range(t + 1, c):
                    if A[t, j] != 0 and abs(A[t, j]) < abs(A[best[0], best[1]]):
                        best = (t, j)
                _swap_rows(A, t, best[0]); _swap_rows(U, t, best[0])
                _swap_cols(A, t, best[1]); _swap_cols(V, t, best[1])
                continue
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if A[i, j] % A[t, t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            A[t, :] = A[t, :] + A[offender, :]
            U[t, :] = U[t, :] + U[offender, :]
        if A[t, t] < 0:
            A[t, :] = -A[t, :]
            U[t, :] = -U[t, :]
    return SmithDecomposition(U=U, D=A, V=V)


def solve_integer_system(A, b):
    '''Integer solutions of A·x = b.

    Returns
    -------
    tuple or None
        (x0, K) with x0 a particular solution and the columns of K a basis of
        the integer kernel, or None when no integer solution exists.

    '''
    A = integer_matrix(A)
    rows, cols = A.shape
    dec = smith_normal_form(A)
    rhs = mat_vec(dec.U, [int(x) for x in b])
    rank = dec.rank
    y = [0] * cols
    for i in range(rows):
        d = dec.D[i, i] if i < min(rows, cols) else 0
        if i < rank:
            if rhs[i] % d != 0:
                return None
            y[i] = rhs[i] // d
        elif rhs[i] != 0:
            return None
    x0 = mat_vec(dec.V, y)
    K = dec.V[:, rank:].copy()
    return x0, K


def lattice_basis(generators, dim):
    '''Basis (as columns) of the lattice spanned by integer column generators.'''
    G = integer_matrix([list(g) for g in generators]).T if generators else \
        integer_matrix([], dim, 0)
    if G.shape[1] == 0:
        return integer_matrix([], dim, 0)
    dec = smith_normal_form(G)
    Uinv = unimodular_inverse(dec.U)
    basis = [tuple(Uinv[i, j] * dec.D[j, j] for i in range(dim))
             for j in range(dec.rank)]
    return integer_matrix([list(v) for v in basis]).T if basis else \
        integer_matrix([], dim, 0)


#===============================================================================
# Constraint systems
#===============================================================================
@dataclass(frozen=True)
class Constraint(object):
    ## (tuple of int) Coefficient vector.
    coefficients: tuple
    ## (str) One of '>=', '<=', '='.
    relation: str
    ## (int) Right hand side.
    bound: int

    def holds(self, x):
        value = sum(a * v for a, v in zip(self.coefficients, x))
        if self.relation == '>=':
            return value >= self.bound
        if self.relation == '<=':
            return value <= self.bound
        return value == self.bound


@dataclass(frozen=True)
class ConstraintSystem(object):
    """!
    A conjunction of non-strict linear constraints with integer data.
    """
    ## (int) Number of variables.
    dimension: int
    ## (tuple of Constraint) At least one constraint.
    constraints: tuple

    def __post_init__(self):
        cleaned = []
        for item in self.constraints:
            if not isinstance(item, Constraint):
                coeffs, relation, bound = item
                if relation not in RELATIONS:
                    raise DomainError(f'unknown relation {relation!r}',
                                      code='domain.relation')
                item = Constraint(tuple(int(a) for a in coeffs),
                                  RELATIONS[relation], int(bound))
            if len(item.coefficients) != self.dimension:
                raise DomainError(f'constraint {item} does not have '
                                  f'{self.dimension} coefficients', code='domain.shape')
            cleaned.append(item)
        if not cleaned:
            raise DomainError('a constraint system needs at least one constraint',
                              code='domain.empty_system')
        object.__setattr__(self, 'constraints', tuple(cleaned))

    @classmethod
    def from_rows(cls, dimension, rows):
        return cls(dimension, tuple(rows))

    def holds(self, x):
        return all(c.holds(x) for c in self.constraints)

    def shifted(self, t):
        '''System whose solutions are the solutions of self translated by t.'''
        rows = []
        for c in self.constraints:
            rows.append(Constraint(c.coefficients, c.relation,
                                   c.bound + sum(a * s for a, s in zip(c.coefficients, t))))
        return ConstraintSystem(self.dimension, tuple(rows))

    def inequality_rows(self):
        '''All constraints as (coefficients, rhs) meaning coefficients·x >= rhs.'''
        rows = []
        for c in self.constraints:
            if c.relation in ('>=', '='):
                rows.append((c.coefficients, c.bound))
            if c.relation in ('<=', '='):
                rows.append((tuple(-a for a in c.coefficients), -c.bound))
        return rows


@dataclass(frozen=True)
class FeasibilityResult(object):
    ## (bool) True when an integer point exists.
    feasible: bool
    ## (tuple of int or None) An integer point satisfying every constraint.
    witness: tuple = None

    def __bool__(self):
        return self.feasible


@dataclass(frozen=True)
class Polyhedron2D(object):
    """!
    V-description of a rational polygon: P = conv(vertices) + cone(rays).
    When P has a lineality line, ``vertices`` holds one point of it and both
    line directions appear in ``rays``.
    """
    ## (tuple of (Fraction, Fraction)) Sorted vertices.
    vertices: tuple = ()
    ## (tuple of (int, int)) Sorted primitive recession generators.
    rays: tuple = ()

    @property
    def empty(self):
        return not self.vertices

    @property
    def bounded(self):
        return bool(self.vertices) and not self.rays


#===============================================================================
# Fourier-Motzkin engine (rows are (coefficients, rhs) meaning a·x >= rhs)
#===============================================================================
def _normalize_rows(rows, integral):
    best = {}
    for coeffs, rhs in rows:
        g = math.gcd(*coeffs) if coeffs else 0
        if g == 0:
            if rhs > 0:
                return None
            continue
        coeffs = tuple(a // g for a in coeffs)
        rhs = math.ceil(Fraction(rhs) / g) if integral else Fraction(rhs) / g
        if coeffs not in best or rhs > best[coeffs]:
            best[coeffs] = rhs
    for coeffs, rhs in best.items():
        opposite = tuple(-a for a in coeffs)
        if opposite in best and rhs + best[opposite] > 0:
            return None
    return sorted(best.items())


def _eliminate(rows, j, integral):
    pos, neg, keep = [], [], []
    for coeffs, rhs in rows:
        a = coeffs[j]
        rest = coeffs[:j] + coeffs[j + 1:]
        if a > 0:
            pos.append((a, rest, rhs))
        elif a < 0:
            neg.append((a, rest, rhs))
        else:
            keep.append((rest, rhs))
    for ap, rp, bp in pos:
        for aq, rq, bq in neg:
            keep.append((tuple(-aq * x + ap * y for x, y in zip(rp, rq)),
                         -aq * bp + ap * bq))
    return _normalize_rows(keep, integral)


def _substitute(rows, j, value):
    return [(coeffs[:j] + coeffs[j + 1:], rhs - coeffs[j] * value)
            for coeffs, rhs in rows]


def _rational_point(rows, k):
    rows = _normalize_rows(rows, False)
    if rows is None:
        return None
    if k == 0:
        return ()
    reduced = _eliminate(rows, k - 1, False)
    if reduced is None:
        return None
    head = _rational_point(reduced, k - 1)
    if head is None:
        return None
    lo = hi = None
    for coeffs, rhs in rows:
        a = coeffs[k - 1]
        if a == 0:
            continue
        value = (rhs - sum(c * x for c, x in zip(coeffs[:k - 1], head))) / Fraction(a)
        if a > 0:
            lo = value if lo is None else max(lo, value)
        else:
            hi = value if hi is None else min(hi, value)
    if lo is not None and hi is not None:
        if lo > hi:
            return None
        last = (lo + hi) / 2
    else:
        last = lo if lo is not None else (hi if hi is not None else Fraction(0))
    return head + (last,)


def _project_interval(rows, k):
    '''Integer interval of the first variable; (feasible, lo, hi), None = open.'''
    cur = rows
    for j in range(k - 1, 0, -1):
        cur = _eliminate(cur, j, True)
        if cur is None:
            return False, None, None
    lo = hi = None
    for (a,), rhs in cur:
        if a > 0:
            lo = rhs if lo is None else max(lo, rhs)
        else:
            hi = -rhs if hi is None else min(hi, -rhs)
    if lo is not None and hi is not None and lo > hi:
        return False, lo, hi
    return True, lo, hi


def _implicit_equalities(rows, k):
    homogeneous = [(coeffs, 0) for coeffs, _ in rows]
    return [coeffs for coeffs, _ in rows
            if _rational_point(homogeneous + [(coeffs, 1)], k) is None]


def _certify(rows, k):
    '''Integer point of a system whose recession cone is full dimensional.'''
    if k == 0:
        return ()
    z0 = _rational_point(rows, k)
    if z0 is None:
        return None
    if not rows:
        return tuple(math.floor(x + Fraction(1, 2)) for x in z0)
    direction = _rational_point([(coeffs, 1) for coeffs, _ in rows], k)
    if direction is None:
        raise ArithmeticError('recession cone is not full dimensional')
    scale = math.lcm(*[x.denominator for x in direction])
    g = [int(x * scale) for x in direction]
    t = max(math.ceil(Fraction(sum(abs(a) for a in coeffs), 2)) for coeffs, _ in rows)
    point = tuple(math.floor(z + t * gi + Fraction(1, 2)) for z, gi in zip(z0, g))
    if not all(sum(a * x for a, x in zip(coeffs, point)) >= rhs for coeffs, rhs in rows):
        raise ArithmeticError('rounding certificate failed')
    return point


def _branch(rows, k, bounded):
    rows = _normalize_rows(rows, True)
    if rows is None:
        return None
    if bounded == 0:
        return _certify(rows, k)
    feasible, lo, hi = _project_interval(rows, k)
    if not feasible:
        return None
    if lo is None or hi is None:
        raise ArithmeticError('unbounded projection of a bounded coordinate')
    for value in range(lo, hi + 1):
        tail = _branch(_substitute(rows, 0, value), k - 1, bounded - 1)
        if tail is not None:
            return (value,) + tail
    return None


def _unbounded_point(rows, k):
    if _rational_point(rows, k) is None:
        return None
    equalities = _implicit_equalities(rows, k)
    if not equalities:
        return _certify(rows, k)
    # V aligns the span of the recession cone with the trailing coordinates
    dec = smith_normal_form(equalities)
    V = dec.V
    moved = [(tuple(sum(coeffs[i] * V[i, j] for i in range(k)) for j in range(k)), rhs)
             for coeffs, rhs in rows]
    y = _branch(moved, k, dec.rank)
    if y is None:
        return None
    return mat_vec(V, y)


def _integer_point(rows, k):
    rows = _normalize_rows(rows, True)
    if rows is None:
        return None
    if k == 0:
        return ()
    if k == 1:
        lo = hi = None
        for (a,), rhs in rows:
            if a > 0:
                lo = rhs if lo is None else max(lo, rhs)
            else:
                hi = -rhs if hi is None else min(hi, -rhs)
        if lo is not None and hi is not None and lo > hi:
            return None
        return (lo if lo is not None else (hi if hi is not None else 0),)
    feasible, lo, hi = _project_interval(rows, k)
    if not feasible:
        return None
    if lo is not None and hi is not None:
        for value in range(lo, hi + 1):
            tail = _integer_point(_substitute(rows, 0, value), k - 1)
            if tail is not None:
                return (value,) + tail
        return None
    return _unbounded_point(rows, k)


def integer_point_of_rows(rows, k):
    '''Integer point of ``a·x >= rhs`` rows (integer data) or None.

    Low level entry used by the forbidden set and line checks, which build
    their rows directly.
    '''
    if k > MAX_FEASIBILITY_DIMENSION:
        raise DimensionError(f'integer feasibility is limited to dimension '
                             f'{MAX_FEASIBILITY_DIMENSION}, got {k}')
    return _integer_point([(tuple(int(a) for a in c), int(b)) for c, b in rows], k)


#===============================================================================
# Public operations
#===============================================================================
def integer_feasible(system):
    '''Decide whether a constraint system has an integer solution.

    Parameters
    ----------
    system: ConstraintSystem
        At most three variables.

    Returns
    -------
    FeasibilityResult
        With a witness when feasible.

    '''
    k = system.dimension
    if k > MAX_FEASIBILITY_DIMENSION:
        raise DimensionError(f'integer feasibility is limited to dimension '
                             f'{MAX_FEASIBILITY_DIMENSION}, got {k}')
    inequalities = []
    equalities = []
    for c in system.constraints:
        if c.relation == '=':
            equalities.append(c)
        elif c.relation == '>=':
            inequalities.append((c.coefficients, c.bound))
        else:
            inequalities.append((tuple(-a for a in c.coefficients), -c.bound))
    if equalities:
        solution = solve_integer_system([c.coefficients for c in equalities],
                                        [c.bound for c in equalities])
        if solution is None:
            return FeasibilityResult(False)
        x0, K = solution
        s = K.shape[1]
        rows = [(tuple(sum(coeffs[i] * K[i, j] for i in range(k)) for j in range(s)),
                 rhs - sum(a * x for a, x in zip(coeffs, x0)))
                for coeffs, rhs in inequalities]
        t = _integer_point(rows, s)
        if t is None:
            return FeasibilityResult(False)
        witness = tuple(x0[i] + sum(K[i, j] * t[j] for j in range(s)) for i in range(k))
    else:
        witness = _integer_point(inequalities, k)
        if witness is None:
            return FeasibilityResult(False)
    if not system.holds(witness):
        raise ArithmeticError(f'witness {witness} violates {system}')
    return FeasibilityResult(True, tuple(int(x) for x in witness))


def rational_feasible_point(system):
    '''Exact rational point of a system (any dimension) or None.'''
    return _rational_point(system.inequality_rows(), system.dimension)


def polyhedron_vertices_2d(system):
    '''Vertices and recession rays of a rational polygon.

    Parameters
    ----------
    system: ConstraintSystem
        Two variables.

    Returns
    -------
    Polyhedron2D
        Empty when the system has no rational solution.

    '''
    if system.dimension != 2:
        raise DimensionError('polyhedron_vertices_2d needs a 2-dimensional system',
                             code='lattice.unsupported_dimension')
    rows = [(c, Fraction(b)) for c, b in system.inequality_rows()]
    if any(c == (0, 0) and b > 0 for c, b in rows):
        return Polyhedron2D()
    rows = [(c, b) for c, b in rows if c != (0, 0)]
    if not rows:
        return Polyhedron2D(((Fraction(0), Fraction(0)),),
                            ((-1, 0), (0, -1), (0, 1), (1, 0)))

    def feasible(p):
        return all(c[0] * p[0] + c[1] * p[1] >= b for c, b in rows)

    u = rows[0][0]
    full_rank = any(c[0] * u[1] - c[1] * u[0] != 0 for c, _ in rows)
    if full_rank:
        points = set()
        for i in range(len(rows)):
            (a1, b1), r1 = rows[i]
            for j in range(i + 1, len(rows)):
                (a2, b2), r2 = rows[j]
                det = a1 * b2 - a2 * b1
                if det == 0:
                    continue
                p = (Fraction(r1 * b2 - r2 * b1, 1) / det,
                     Fraction(a1 * r2 - a2 * r1, 1) / det)
                if feasible(p):
                    points.add(p)
        if not points:
            return Polyhedron2D()
        rays = set()
        for (a, b), _ in rows:
            for d in ((-b, a), (b, -a)):
                if all(c[0] * d[0] + c[1] * d[1] >= 0 for c, _ in rows):
                    rays.add(primitive(d))
        return Polyhedron2D(tuple(sorted(points)), tuple(sorted(rays)))
    # all normals parallel to u: a strip, a half plane or a line
    u = primitive(u)
    lo = hi = None
    for c, b in rows:
        lam = Fraction(c[0], u[0]) if u[0] else Fraction(c[1], u[1])
        value = b / lam
        if lam > 0:
            lo = value if lo is None else max(lo, value)
        else:
            hi = value if hi is None else min(hi, value)
    if lo is not None and hi is not None and lo > hi:
        return Polyhedron2D()
    s0 = lo if lo is not None else hi
    norm2 = u[0] * u[0] + u[1] * u[1]
    point = (s0 * u[0] / norm2, s0 * u[1] / norm2)
    rays = {(-u[1], u[0]), (u[1], -u[0])}
    if hi is None:
        rays.add(u)
    if lo is None:
        rays.add((-u[0], -u[1]))
    return Polyhedron2D((point,), tuple(sorted(rays)))


def bounding_box(points):
    '''Integer box (lo, hi) containing rational points, as floor/ceil.'''
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return ((math.floor(min(xs)), math.floor(min(ys))),
            (math.ceil(max(xs)), math.ceil(max(ys))))
