'''Testing cohomology module.'''
#===============================================================================
# Import
#===============================================================================
import numpy as np

from htrivpy.htrivpy.fan import standard_fan, validate_fan
from htrivpy.htrivpy.lattice import ConstraintSystem, integer_feasible
from htrivpy.htrivpy.picard import (picard_group, Divisor, divisor_representative, class_of,
                                    reduce_divisor)
from htrivpy.htrivpy.cohomology import (support_complex, reduced_homology_dims,
                                        contribution_box, cohomology_dims,
                                        divisor_cohomology, SupportComplex, FunctionalBox)
from htrivpy.htrivpy.fan import collinear_pairs
from htrivpy.htrivpy.forbidden import sign_change_class
from htrivpy.first_mate.testutils import random_fan, random_class, random_divisor

#===============================================================================
# Shared objects
#===============================================================================
p2 = standard_fan('P2')
pic_p2 = picard_group(p2)
square = standard_fan('P1xP1')
pic_square = picard_group(square)


def O(pic, *free):
    return pic.make_class(free)


#===============================================================================
# Tests
#===============================================================================
def test_support_complex_examples():
    S = support_complex(p2, Divisor((0, 0, 0)))
    assert S.vertices == (0, 1, 2)
    assert S.edges == ((0, 1), (0, 2), (1, 2))
    S = support_complex(p2, Divisor((-1, -1, -1)))
    assert S.vertices == () and S.edges == ()
    S = support_complex(square, Divisor((0, -1, 0, -1)))
    assert S.vertices == (0, 2)
    assert S.edges == ()


def test_reduced_homology_examples():
    assert reduced_homology_dims(SupportComplex(4, (0, 1, 2, 3),
                                                ((0, 1), (0, 3), (1, 2), (2, 3)))).as_tuple() \
        == (0, 0, 1)
    assert reduced_homology_dims(SupportComplex(4, (), ())).as_tuple() == (1, 0, 0)
    assert reduced_homology_dims(SupportComplex(4, (0, 2), ())).as_tuple() == (0, 1, 0)
    # one arc wrapping around the end of the cycle
    S = support_complex(standard_fan('example5'), Divisor((0, -1, -1, 0, 0)))
    assert reduced_homology_dims(S).as_tuple() == (0, 0, 0)


def test_contribution_box_examples():
    box = contribution_box(p2, Divisor((0, 0, 0)))
    assert (0, 0) in box
    box = contribution_box(p2, Divisor((2, 0, 0)))
    for vertex in ((-2, 0), (-2, 2), (0, 0)):
        assert vertex in box
    ex5 = standard_fan('example5')
    box = contribution_box(ex5, Divisor((0, 0, 0, 0, 0)))
    for f in ((1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)):
        assert f in box


def test_p2_line_bundles(regtest):
    for k in range(-5, 4):
        print(k, cohomology_dims(p2, pic_p2, O(pic_p2, k)).as_tuple(), file=regtest)
    assert cohomology_dims(p2, pic_p2, O(pic_p2, 0)).as_tuple() == (1, 0, 0)
    assert cohomology_dims(p2, pic_p2, O(pic_p2, -1)).vanishes
    assert cohomology_dims(p2, pic_p2, O(pic_p2, -2)).vanishes
    assert cohomology_dims(p2, pic_p2, O(pic_p2, -3)).as_tuple() == (0, 0, 1)


def test_p1xp1_line_bundles():
    for a in (-3, 0, 3):
        assert cohomology_dims(square, pic_square, O(pic_square, a, -1)).vanishes
        assert cohomology_dims(square, pic_square, O(pic_square, -1, a)).vanishes
    assert cohomology_dims(square, pic_square, O(pic_square, 2, 1)).as_tuple() == (6, 0, 0)
    assert cohomology_dims(square, pic_square, O(pic_square, -2, -2)).as_tuple() == (0, 0, 1)
    assert cohomology_dims(square, pic_square, O(pic_square, -2, 0)).as_tuple() == (0, 1, 0)
    assert cohomology_dims(square, pic_square, O(pic_square, 3, -3)).as_tuple() == (0, 8, 0)


def test_stacky_p2():
    fan = standard_fan('stacky_P2')
    pic = picard_group(fan)
    assert cohomology_dims(fan, pic, pic.zero()).as_tuple() == (1, 0, 0)


def test_representative_independence():
    rng = np.random.default_rng(31)
    for _ in range(20):
        fan = random_fan(rng, n_max=6, coord=4)
        pic = picard_group(fan)
        c = random_class(rng, pic, coord=4)
        D = divisor_representative(pic, c)
        expected = cohomology_dims(fan, pic, c)
        for _ in range(20):
            f = tuple(int(x) for x in rng.integers(-5, 6, size=2))
            assert divisor_cohomology(fan, D.shifted(fan, f)) == expected


def test_box_sufficiency():
    rng = np.random.default_rng(32)
    for _ in range(100):
        fan = random_fan(rng, n_max=7, coord=4)
        D = random_divisor(rng, fan.n, coord=4)
        box = contribution_box(fan, D)
        assert divisor_cohomology(fan, D) == divisor_cohomology(fan, D, box.doubled())


def test_box_doubling_contains_box():
    box = FunctionalBox((-2, 1), (3, 1))
    big = box.doubled()
    assert all(f in big for f in box)
    assert len(big) > len(box)


def test_sign_change_class_vanishes():
    rng = np.random.default_rng(33)
    for _ in range(20):
        fan = random_fan(rng, n_max=7, coord=4, collinear=True)
        pic = picard_group(fan)
        for pair in collinear_pairs(fan):
            L = sign_change_class(fan, pic, pair)
            D = divisor_representative(pic, L)
            box = contribution_box(fan, D)
            for f in box:
                S = support_complex(fan, D.shifted(fan, f))
                assert 0 < len(S.vertices) < fan.n
                assert reduced_homology_dims(S).h0red == 0
            assert cohomology_dims(fan, pic, L).vanishes


def test_h0_positivity_criterion():
    rng = np.random.default_rng(34)
    for _ in range(60):
        fan = random_fan(rng, n_max=6, coord=4)
        D = random_divisor(rng, fan.n, coord=4)
        P0 = ConstraintSystem(2, tuple((v, '>=', -D[i]) for i, v in enumerate(fan.vectors)))
        assert (divisor_cohomology(fan, D).h0 > 0) == integer_feasible(P0).feasible


def test_large_functionals_have_one_arc():
    rng = np.random.default_rng(35)
    for _ in range(40):
        fan = random_fan(rng, n_max=7, coord=5)
        D = random_divisor(rng, fan.n, coord=4)
        A = max(abs(x) for x in D)
        for _ in range(20):
            f = tuple(int(x) for x in rng.integers(-60, 61, size=2))
            values = [f[0] * x + f[1] * y for x, y in fan.vectors]
            if min(abs(t) for t in values) <= A:
                continue
            r = D.shifted(fan, f)
            assert [x >= 0 for x in r] == [t > 0 for t in values]
            S = support_complex(fan, r)
            assert reduced_homology_dims(S).as_tuple() == (0, 0, 0)


def test_non_primitive_fan():
    fan = validate_fan([(2, 0), (0, 1), (-2, -1)])
    pic = picard_group(fan)
    for t in (0, 1):
        assert cohomology_dims(fan, pic, pic.make_class((0,), (t,))).h0 == (1 if t == 0 else 0)


def test_large_lift_is_reduced():
    fan = validate_fan([(-4, 1), (5, -3), (5, 5), (-6, 4)])
    pic = picard_group(fan)
    D = Divisor((3, 4, -6, -6))
    c = class_of(pic, D)
    reduced = reduce_divisor(fan.vectors, divisor_representative(pic, c))
    assert reduced == Divisor((4, 1, -1, -2))
    assert reduced == reduce_divisor(fan.vectors, D)
    assert class_of(pic, reduced) == c
    dims = cohomology_dims(fan, pic, c)
    assert dims == divisor_cohomology(fan, D)
    assert dims.h0 == 1


def test_reduction_keeps_class_and_cohomology():
    rng = np.random.default_rng(34)
    for _ in range(20):
        fan = random_fan(rng, n_max=6, coord=4)
        pic = picard_group(fan, basis=None)
        D = random_divisor(rng, fan.n, coord=8)
        reduced = reduce_divisor(fan.vectors, D)
        assert class_of(pic, reduced) == class_of(pic, D)
        assert max(abs(a) for a in reduced) <= max(abs(a) for a in D)
        assert divisor_cohomology(fan, reduced) == divisor_cohomology(fan, D)
