'''Utility module for testing modules.

Random fans, classes and semigroups driven by numpy generators, and the
brute force oracles used by the property tests.
'''
#===============================================================================
# Import
#===============================================================================
import math
from os import path, mkdir
from errno import EEXIST
from fractions import Fraction

import numpy as np

from htrivpy.htrivpy.fan import validate_fan, collinear_pairs
from htrivpy.htrivpy.picard import Divisor, class_of
from htrivpy.htrivpy.forbidden import is_h_trivial, sign_change_class
from htrivpy.htrivpy.classify import bound_certificate, tube_line_direction
from htrivpy.htrivpy.semigroup import cone_semigroup
from htrivpy.first_mate.errors import CertificateError, DomainError, FanValidationError


#===============================================================================
# Definitions
#===============================================================================
def gen_tmp_folder(main_tests_dir):
    if not path.isdir(main_tests_dir):
        try:
            mkdir(main_tests_dir)
        except OSError as exc:
            if exc.errno != EEXIST:
                raise
            pass


def _random_vector(rng, coord):
    while True:
        v = tuple(int(x) for x in rng.integers(-coord, coord + 1, size=2))
        if v != (0, 0):
            return v


def random_fan(rng, n_max=7, coord=6, collinear=None, max_attempts=10000):
    '''Random valid fan with 3 <= n <= n_max rays and |coordinates| <= coord.

    collinear: True forces a collinear pair, False forbids one, None leaves
    it to chance.
    '''
    for _ in range(max_attempts):
        n = int(rng.integers(3 if collinear is not True else 4, n_max + 1))
        if collinear:
            u = _random_vector(rng, max(coord // 2, 1))
            a, b = (int(x) for x in rng.integers(1, 3, size=2))
            if max(abs(a * u[0]), abs(a * u[1]), abs(b * u[0]), abs(b * u[1])) > coord:
                continue
            vectors = [(a * u[0], a * u[1]), (-b * u[0], -b * u[1])]
            vectors += [_random_vector(rng, coord) for _ in range(n - 2)]
            order = rng.permutation(len(vectors))
            vectors = [vectors[i] for i in order]
        else:
            vectors = [_random_vector(rng, coord) for _ in range(n)]
        try:
            fan = validate_fan(vectors)
        except FanValidationError:
            continue
        if collinear is False and collinear_pairs(fan):
            continue
        return fan
    raise RuntimeError('no random fan found')


def random_divisor(rng, n, coord=6):
    return Divisor(tuple(int(x) for x in rng.integers(-coord, coord + 1, size=n)))


def random_class(rng, pic, coord=6):
    return class_of(pic, random_divisor(rng, pic.n, coord))


def random_class_in_annulus(rng, pic, lo, hi, max_attempts=100000):
    '''Class whose free coordinates have norm in (lo, hi], torsion uniform.'''
    reach = math.floor(hi)
    for _ in range(max_attempts):
        free = tuple(int(x) for x in rng.integers(-reach, reach + 1, size=pic.free_rank))
        norm2 = sum(x * x for x in free)
        if Fraction(lo) ** 2 < norm2 <= Fraction(hi) ** 2:
            torsion = tuple(int(rng.integers(0, d)) for d in pic.torsion_invariants)
            return pic.make_class(free, torsion)
    raise RuntimeError('no class found in the annulus')


def random_semigroup(rng, k_max=2, n_max=4, coord=5, max_attempts=10000):
    '''Random torsion free semigroup with generators in the closed positive orthant.'''
    for _ in range(max_attempts):
        k = int(rng.integers(1, k_max + 1))
        n = int(rng.integers(k, n_max + 1))
        gens = [tuple(int(x) for x in rng.integers(0, coord + 1, size=k)) for _ in range(n)]
        if any(not any(w) for w in gens):
            continue
        try:
            return cone_semigroup(gens)
        except DomainError:
            continue
    raise RuntimeError('no random semigroup found')


def semigroup_elements(S, max_height):
    '''Brute force: every sum of generators with h <= max_height.'''
    found = {S.zero}
    frontier = [S.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for w in S.generators:
                y = S.add(x, w)
                if S.height(y) <= max_height and y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    return found


def count_representations(S, x):
    '''Brute force number of nonnegative c with sum c_i w_i = x.'''
    x = S.reduce(x)
    heights = [S.height(w) for w in S.generators]
    count = 0
    bounds = [range(S.height(x) // hw + 1) for hw in heights]
    for coeffs in np.ndindex(*[len(b) for b in bounds]):
        if sum(c * hw for c, hw in zip(coeffs, heights)) == S.height(x) and \
                S.combine(coeffs) == x:
            count += 1
    return count


def annulus_evidence(fan, pic, R, scan_limit=4000):
    '''True when an H-trivial class has norm in (R, 2R], False when none has,
    None when undecided.

    With a collinear pair the classes L + l·D2 built from the sign change
    class and the tube direction are walked through the annulus. Without
    one the outer radius certificate clears the annulus beyond its radius
    and the remaining shell is scanned class by class; the answer is None
    when the rank exceeds 3, no certificate is found or the shell holds
    more than scan_limit classes.
    '''
    pairs = collinear_pairs(fan)
    if pairs:
        L = sign_change_class(fan, pic, pairs[0])
        D2 = tube_line_direction(fan, pic, pairs[0])
        if D2.norm2 == 0:
            return None
        reach = 2 * R + math.isqrt(L.norm2) + 2
        for l in range(-reach, reach + 1):
            c = L + l * D2
            if R * R < c.norm2 <= 4 * R * R and is_h_trivial(fan, pic, c):
                return True
        return False
    if pic.free_rank > 3:
        return None
    try:
        cert = bound_certificate(fan, pic)
    except CertificateError:
        return None
    if not cert.valid:
        return None
    outer = min(Fraction(2 * R), Fraction(cert.radius))
    if outer <= R:
        return False
    shell = []
    for c in pic.classes_in_ball(outer):
        if c.norm2 > R * R:
            shell.append(c)
            if len(shell) > scan_limit:
                return None
    return any(is_h_trivial(fan, pic, c) for c in shell)


#===============================================================================
# Main
#===============================================================================
if __name__ == '__main__':
    pass
