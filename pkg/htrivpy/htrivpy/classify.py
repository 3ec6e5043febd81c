##
# @file classify.py
#
# @section description_classify Description
# Classification of H-trivial line bundles on a two dimensional toric stack:
# the finite/infinite verdict from collinear pairs, tube directions and
# the lattice lines they carry, the certified outer radius of the finite
# case, the enumeration of a ball of classes and the sets Lambda_m of
# classes with small total cohomology.
#
# @section libraries_classify Libraries/Modules
# - itertools
# - math
# - multiprocessing (optional worker pool over chunks of the ball)
# - collections
# - dataclasses
# - fractions
# - htrivpy.htrivpy.fan
# - htrivpy.htrivpy.picard
# - htrivpy.htrivpy.lattice
# - htrivpy.htrivpy.cohomology
# - htrivpy.htrivpy.forbidden
# - htrivpy.htrivpy.semigroup
# - htrivpy.first_mate.errors

import itertools
import math
import multiprocessing
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from htrivpy.htrivpy.fan import collinear_pairs
from htrivpy.htrivpy.picard import Divisor, class_of, divisor_representative, picard_group
from htrivpy.htrivpy.lattice import integer_point_of_rows
from htrivpy.htrivpy.cohomology import cohomology_dims
from htrivpy.htrivpy.forbidden import (ForbiddenSetSpec, delta_family, is_h_trivial,
                                       vanishing_functional)
from htrivpy.htrivpy.semigroup import forbidden_semigroup, saturation_shift
from htrivpy.first_mate.errors import (CertificateError, DimensionError, DomainError,
                                       NotApplicableError)

LINE_STATUSES = ('fully_trivial', 'mixed', 'not_trivial')
PROVENANCES = ('certified', 'user_supplied')
DEFAULT_DELTA = Fraction(1, 4)
MAX_HALVINGS = 12
MAX_NET_POINTS = 200_000
SQRT_SCALE = 10 ** 6


def _sqrt_bounds(x):
    '''Rational (lower, upper) bounds of sqrt(x) for an integer x >= 0, exact on squares.'''
    r = math.isqrt(x)
    if r * r == x:
        return Fraction(r), Fraction(r)
    s = math.isqrt(x * SQRT_SCALE * SQRT_SCALE)
    return Fraction(s, SQRT_SCALE), Fraction(s + 1, SQRT_SCALE)


def _ceil_sqrt(x):
    r = math.isqrt(x)
    return r if r * r == x else r + 1


@dataclass(frozen=True)
class LineStatus(object):
    """!
    Outcome of the check of a line D1 + Z·D2.
    """
    ## (str) One of LINE_STATUSES.
    status: str
    ## (int, default: 0) Half width L of the sampled window [-L, L] (mixed lines only).
    window: int = 0
    ## (tuple of int, default: ()) Values l in the window with D1 + l·D2 not H-trivial.
    nontrivial: tuple = ()
    ## (bool, default: False) Some l >= L gives a class in a forbidden set.
    nontrivial_above: bool = False
    ## (bool, default: False) Some l <= -L gives a class in a forbidden set.
    nontrivial_below: bool = False

    @property
    def fully_trivial(self):
        return self.status == 'fully_trivial'


@dataclass(frozen=True)
class LineFamily(object):
    """!
    H-trivial classes of the ball lying on base + Z·direction.
    """
    ## (LineBundleClass) Lattice point of the line closest to the origin.
    base: object
    ## (LineBundleClass) Tube direction, nonzero.
    direction: object
    ## (LineStatus) Result of line_fully_h_trivial.
    status: LineStatus
    ## (tuple of LineBundleClass) Enumerated members, sorted.
    hits: tuple = ()

    def point(self, l):
        return self.base + l * self.direction


@dataclass(frozen=True)
class BoundCertificate(object):
    """!
    Every class of norm greater than ``radius`` lies in a forbidden set.
    """
    ## (Fraction) Certified lower bound of min E over the unit sphere.
    epsilon_lower: Fraction
    ## (Fraction) Spacing of the net that produced epsilon_lower.
    delta: Fraction
    ## (tuple) Pairs (I, r_I) with r_I + (Z_I n M) inside FS_I, r_I as flat element.
    shifts: tuple
    ## (Fraction) Upper bound of max h_{I,i}(r_I).
    a: Fraction
    ## (int) Radius d with d·epsilon_lower > a.
    radius: int
    ## (int) Number of net points evaluated.
    net_size: int = 0

    @property
    def valid(self):
        return self.epsilon_lower > 0 and self.radius * self.epsilon_lower > self.a


@dataclass(frozen=True)
class TubeRadius(object):
    ## (LineBundleClass) Tube direction.
    direction: object
    ## (Fraction) Largest squared distance of a reported line from R·direction.
    radius2: Fraction
    ## (str) Always 'user_supplied': it depends on the enumeration ball.
    provenance: str = 'user_supplied'


@dataclass
class ClassificationReport(object):
    """!
    Result of enumerate_h_trivial.
    """
    ## (StackyFan) Classified fan.
    fan: object
    ## (PicardGroup) Its Picard group.
    pic: object
    ## (bool) True iff the fan has a collinear pair.
    infinite: bool
    ## (list of CollinearPair) Collinear pairs, sorted.
    collinear_pairs: list
    ## (list of LineBundleClass) H-trivial classes on no reported line.
    sporadic: list
    ## (list of LineFamily) Line families, sorted by direction then base.
    lines: list
    ## (Fraction) Radius of the enumerated ball.
    ball_radius: Fraction
    ## (str) 'certified' or 'user_supplied'.
    provenance: str
    ## (BoundCertificate or None) Outer radius certificate (finite case).
    certificate: BoundCertificate = None
    ## (list of TubeRadius) Per-direction tube radii.
    tube_radii: list = field(default_factory=list)

    @property
    def trivial_classes(self):
        '''Every H-trivial class found in the ball, sorted.'''
        found = {c for c in self.sporadic}
        for line in self.lines:
            found.update(line.hits)
        return sorted(found, key=lambda c: c.key)


def has_infinitely_many_h_trivial(fan):
    '''The fan has infinitely many H-trivial classes iff two rays are collinear.'''
    return bool(collinear_pairs(fan))


def tube_line_direction(fan, pic, pair):
    '''Class of sum_{h(v_i) > 0} h(v_i) E_i for the functional h vanishing on the pair.'''
    h = vanishing_functional(fan, pair)
    return class_of(pic, Divisor(tuple(max(h(v), 0) for v in fan.vectors)))


def canonical_line_base(pic, D1, D2):
    '''Point of D1 + Z·D2 of least norm, ties broken lexicographically.'''
    pic.check(D1)
    pic.check(D2)
    dd = D2.norm2
    if dd == 0:
        order = math.lcm(*[d // math.gcd(d, t) for t, d in zip(D2.torsion, D2.moduli)]) \
            if D2.moduli else 1
        return min((D1 + l * D2 for l in range(order)), key=lambda c: c.key)
    center = Fraction(-sum(a * b for a, b in zip(D1.free, D2.free)), dd)
    candidates = [D1 + l * D2 for l in (math.floor(center), math.ceil(center))]
    return min(candidates, key=lambda c: c.key)


def _line_rows(fan, a, b, I):
    return ForbiddenSetSpec(fan.n, I).rows(fan, a, direction=b)


def line_forbidden_sets(fan, pic, D1, D2):
    '''Members I of Delta such that FS_I meets the line D1 + Z·D2.'''
    a = divisor_representative(pic, D1)
    b = divisor_representative(pic, D2)
    return [I for I in delta_family(fan)
            if integer_point_of_rows(_line_rows(fan, a, b, I), 3) is not None]


def line_fully_h_trivial(fan, pic, D1, D2, window=None):
    '''Decide whether every class D1 + l·D2, l in Z, is H-trivial.

    Parameters
    ----------
    fan: StackyFan
    pic: PicardGroup
    D1, D2: LineBundleClass
        Base point and nonzero direction.
    window: int, optional
        Half width L of the sampled window for lines that are not fully
        trivial; 10·max(1, ceil|D1|, ceil|D2|) when omitted.

    Returns
    -------
    LineStatus

    '''
    if pic.check(D2).is_zero:
        raise DomainError('the direction of a line must be nonzero', code='domain.zero_class')
    a = divisor_representative(pic, D1)
    b = divisor_representative(pic, D2)
    hit = line_forbidden_sets(fan, pic, D1, D2)
    if not hit:
        return LineStatus('fully_trivial')
    L = window if window is not None else \
        10 * max(1, _ceil_sqrt(D1.norm2), _ceil_sqrt(D2.norm2))
    nontrivial = tuple(l for l in range(-L, L + 1) if not is_h_trivial(fan, pic, D1 + l * D2))
    above = any(integer_point_of_rows(_line_rows(fan, a, b, I) + [((0, 0, 1), L)], 3)
                is not None for I in hit)
    below = any(integer_point_of_rows(_line_rows(fan, a, b, I) + [((0, 0, -1), L)], 3)
                is not None for I in hit)
    status = 'not_trivial' if len(nontrivial) == 2 * L + 1 else 'mixed'
    return LineStatus(status, L, nontrivial, above, below)


def koszul_consistent(fan, pic, D1, D2, l_range, m=1):
    '''True when O(D1 + l·D2) is H-trivial whenever O(D1 + (l+m)D2) and
    O(D1 + (l+2m)D2) are, for every l in l_range.'''
    for l in l_range:
        if is_h_trivial(fan, pic, D1 + (l + m) * D2) and \
                is_h_trivial(fan, pic, D1 + (l + 2 * m) * D2) and \
                not is_h_trivial(fan, pic, D1 + l * D2):
            return False
    return True


#===============================================================================
# Certified outer radius
#===============================================================================
def _lower_unit_value(num, bounds):
    lo, hi = bounds
    return Fraction(num) / hi if num >= 0 else Fraction(num) / lo


def _upper_unit_value(num, bounds):
    lo, hi = bounds
    return Fraction(num) / lo if num >= 0 else Fraction(num) / hi


def _net(k, N):
    for axis in range(k):
        for sign in (1, -1):
            for rest in itertools.product(range(-N, N + 1), repeat=k - 1):
                yield rest[:axis] + (sign * N,) + rest[axis:]


def _net_minimum(cones, k, N, stop):
    '''Lower bound of min E over the cube net with spacing 1/N, or None once
    it drops to ``stop``.'''
    best = None
    count = 0
    for J in _net(k, N):
        count += 1
        value = None
        for normals in cones:
            inner = min(_lower_unit_value(sum(a * b for a, b in zip(nrm, J)), bounds)
                        for nrm, bounds in normals)
            value = inner if value is None else max(value, inner)
        value /= N
        if best is None or value < best:
            best = value
            if best <= stop:
                return None, count
    return best, count


def bound_certificate(fan, pic, delta=DEFAULT_DELTA, log=None):
    '''Certified radius d such that every class of norm > d is not H-trivial.

    Parameters
    ----------
    fan: StackyFan
        Fan without collinear pairs.
    pic: PicardGroup
        Free rank at most 3.
    delta: Fraction, optional
        Initial spacing of the net; halved until the bound is positive.
    log: LogTracker, optional

    Returns
    -------
    BoundCertificate

    '''
    if collinear_pairs(fan):
        raise NotApplicableError('the fan has a collinear pair: the H-trivial set is infinite')
    k = pic.free_rank
    if k > 3:
        raise DimensionError(f'certificates are limited to Picard rank 3, got {k}')
    cones = []
    shifts = []
    a = None
    for I in delta_family(fan):
        fs = forbidden_semigroup(fan, pic, I)
        S = fs.semigroup
        normals = [(nrm, _sqrt_bounds(sum(x * x for x in nrm))) for nrm in S.normals]
        cones.append(normals)
        try:
            shift = saturation_shift(S)
        except (ArithmeticError, DomainError) as err:
            raise CertificateError(f'no saturation shift for I = {[i + 1 for i in I]}: {err}')
        r = S.add(fs.element(fs.base), shift)
        shifts.append((I, r))
        for nrm, bounds in normals:
            value = _upper_unit_value(sum(x * y for x, y in zip(nrm, r[:k])), bounds)
            a = value if a is None else max(a, value)
        if log: log.lprint(f'shift for I = {[i + 1 for i in I]}: {r}', NTab=1)
    root_k = _sqrt_bounds(k)[1]
    root_face = _sqrt_bounds(k - 1)[1]
    delta = Fraction(delta)
    for _ in range(MAX_HALVINGS + 1):
        N = math.ceil(1 / delta)
        spacing = Fraction(1, N)
        if 2 * k * (2 * N + 1) ** (k - 1) > MAX_NET_POINTS:
            break
        slack = spacing * root_face / 2
        minimum, count = _net_minimum(cones, k, N, slack)
        if log: log.lprint(f'net spacing {spacing}: {count} points', NTab=1)
        if minimum is not None:
            epsilon = (minimum - slack) / root_k
            d = max(1, math.floor(a / epsilon) + 1)
            return BoundCertificate(epsilon, spacing, tuple(shifts), a, d, count)
        delta /= 2
    raise CertificateError('no positive lower bound for E within the net refinement limit')


#===============================================================================
# Enumeration
#===============================================================================
def _scan_chunk(args):
    fan, pic, chunk, cross_check = args
    return [is_h_trivial(fan, pic, c, cross_check=cross_check) for c in chunk]


def scan_classes(fan, pic, classes, workers=1, cross_check=False):
    '''H-triviality flags of classes, optionally over a process pool.'''
    if workers <= 1 or len(classes) < 2 * workers:
        return _scan_chunk((fan, pic, classes, cross_check))
    size = math.ceil(len(classes) / (4 * workers))
    chunks = [classes[i:i + size] for i in range(0, len(classes), size)]
    with multiprocessing.Pool(processes=workers) as pool:
        parts = pool.map(_scan_chunk, [(fan, pic, chunk, cross_check) for chunk in chunks])
    return [flag for part in parts for flag in part]


def tube_directions(fan, pic):
    '''Distinct tube directions, one per collinear pair, in pair order.'''
    out = []
    for pair in collinear_pairs(fan):
        d = tube_line_direction(fan, pic, pair)
        if d not in out and -d not in out:
            out.append(d)
    return out


def group_lines(fan, pic, hits, directions, window=None):
    '''Split hits into line families along tube directions and sporadic classes.

    A group of two or more hits on one line is a family; a lone hit forms a
    family only when its whole line is H-trivial.
    '''
    families = {}
    for d in directions:
        groups = defaultdict(list)
        for c in hits:
            groups[canonical_line_base(pic, c, d)].append(c)
        for base, members in groups.items():
            if len(members) >= 2:
                status = line_fully_h_trivial(fan, pic, base, d, window=window)
                families[(d, base)] = LineFamily(base, d, status,
                                                 tuple(sorted(members, key=lambda c: c.key)))
    covered = {c for fam in families.values() for c in fam.hits}
    sporadic = []
    for c in hits:
        if c in covered:
            continue
        for d in directions:
            base = canonical_line_base(pic, c, d)
            if not line_forbidden_sets(fan, pic, base, d):
                families[(d, base)] = LineFamily(base, d, LineStatus('fully_trivial'), (c,))
                covered.add(c)
                break
        else:
            sporadic.append(c)
    lines = sorted(families.values(), key=lambda f: (f.direction.key, f.base.key))
    return sorted(sporadic, key=lambda c: c.key), lines


def tube_radii(lines):
    '''Squared distance of the farthest reported line from R·direction, per direction.'''
    out = {}
    for line in lines:
        d = line.direction
        dd = d.norm2
        if dd == 0:
            continue
        b = line.base.free
        dist2 = sum(x * x for x in b) - Fraction(sum(x * y for x, y in zip(b, d.free)) ** 2, dd)
        if d not in out or dist2 > out[d]:
            out[d] = dist2
    return [TubeRadius(d, r) for d, r in sorted(out.items(), key=lambda item: item[0].key)]


def _check_radius(radius):
    radius = Fraction(radius)
    if radius <= 0:
        raise DomainError(f'the radius must be positive, got {radius}', code='domain.radius')
    return radius


def enumerate_h_trivial(fan, pic, radius, certify=True, delta=DEFAULT_DELTA, workers=1,
                        cross_check=False, window=None, log=None):
    '''Enumerate the H-trivial classes in the ball of the given radius.

    Parameters
    ----------
    fan: StackyFan
    pic: PicardGroup
    radius: Fraction or int
        Positive radius of the ball of free coordinates.
    certify: bool, optional
        Compute the outer radius certificate in the finite case.
    delta: Fraction, optional
        Initial net spacing of the certificate.
    workers: int, optional
        Processes used for the scan.
    cross_check: bool, optional
        Confirm every verdict with the cohomology oracle.
    window: int, optional
        Window override for lines that are not fully trivial.
    log: LogTracker, optional

    Returns
    -------
    ClassificationReport

    '''
    radius = _check_radius(radius)
    pairs = collinear_pairs(fan)
    infinite = bool(pairs)
    certificate = None
    provenance = 'user_supplied'
    if certify and not infinite and pic.free_rank <= 3:
        if log: log.section('outer radius certificate')
        certificate = bound_certificate(fan, pic, delta=delta, log=log)
        if radius >= certificate.radius:
            provenance = 'certified'
        if log: log.lprint(f'certified radius d = {certificate.radius}', NTab=1)
    if log: log.section(f'ball of radius {radius}')
    classes = list(pic.classes_in_ball(radius))
    if log: log.lprint(f'scanning {len(classes)} classes', NTab=1)
    flags = scan_classes(fan, pic, classes, workers=workers, cross_check=cross_check)
    hits = [c for c, flag in zip(classes, flags) if flag]
    if log: log.progress('H-trivial classes', len(hits), len(classes))
    directions = tube_directions(fan, pic)
    sporadic, lines = group_lines(fan, pic, hits, directions, window=window)
    return ClassificationReport(fan=fan, pic=pic, infinite=infinite, collinear_pairs=pairs,
                                sporadic=sporadic, lines=lines, ball_radius=radius,
                                provenance=provenance, certificate=certificate,
                                tube_radii=tube_radii(lines))


def lambda_m_enumerate(fan, pic, m, radius):
    '''Classes of the ball with h0 + h1 + h2 < m, sorted.'''
    if int(m) != m or m < 1:
        raise DomainError(f'm must be a positive integer, got {m}', code='domain.multiplicity')
    radius = _check_radius(radius)
    return [c for c in pic.classes_in_ball(radius) if cohomology_dims(fan, pic, c).total < m]


class Classifier(object):
    """!
    Driver running the certificate, the ball enumeration and the line
    grouping for one fan. Options are given as keyword arguments.
    """

    def __init__(self, fan, **kwargs):
        ## (StackyFan) Fan being classified.
        self.fan = fan
        ## (Fraction, default: 10) Radius of the enumerated ball.
        self.radius = 10
        ## (bool, default: True) Compute the outer radius certificate in the finite case.
        self.certify = True
        ## (Fraction, default: 1/4) Initial net spacing of the certificate.
        self.delta = DEFAULT_DELTA
        ## (int, default: None) Window half width for lines that are not fully trivial.
        self.window = None
        ## (int, default: 1) Number of processes used for the scan.
        self.workers = 1
        ## (bool, default: False) Confirm every verdict with the cohomology oracle.
        self.cross_check = False
        ## (str or tuple, default: 'auto') Display basis of Pic, see picard_group.
        self.basis = 'auto'
        ## (LogTracker, default: None) Progress output.
        self.log = None
        options = sorted(k for k in vars(self) if k != 'fan')
        for k, v in kwargs.items():
            if k not in options:
                raise ValueError(f"Unknown option {k}, please select from {options}")
            setattr(self, k, v)
        ## (PicardGroup) Picard group in the chosen display basis.
        self.pic = picard_group(fan, basis=self.basis)

    @property
    def infinite(self):
        return has_infinitely_many_h_trivial(self.fan)

    def certificate(self):
        return bound_certificate(self.fan, self.pic, delta=self.delta, log=self.log)

    def classify(self):
        if self.log: self.log.start('classification')
        report = enumerate_h_trivial(self.fan, self.pic, self.radius, certify=self.certify,
                                     delta=self.delta, workers=self.workers,
                                     cross_check=self.cross_check, window=self.window,
                                     log=self.log)
        if self.log: self.log.stop('classification')
        return report

    def lambda_set(self, m):
        return lambda_m_enumerate(self.fan, self.pic, m, self.radius)
