'''Testing picard module.'''
#===============================================================================
# Import
#===============================================================================
from fractions import Fraction

import numpy as np
import pytest

from htrivpy.htrivpy.fan import standard_fan
from htrivpy.htrivpy.lattice import lattice_basis, integer_determinant, solve_integer_system
from htrivpy.htrivpy.picard import (picard_group, class_of, divisor_representative, Divisor,
                                    LinearFunctional2, rational_class_vector)
from htrivpy.first_mate.errors import DomainError, PicardMismatchError
from htrivpy.first_mate.testutils import random_fan, random_divisor, random_class

#===============================================================================
# Shared objects
#===============================================================================
p2 = standard_fan('P2')
ex5 = standard_fan('example5')
tors = standard_fan('torsion')


#===============================================================================
# Tests
#===============================================================================
def test_p2():
    pic = picard_group(p2)
    assert pic.free_rank == 1
    assert pic.torsion_invariants == ()
    assert pic.basis == (0,)
    assert pic.basis_labels == ('E1',)
    for i in range(3):
        assert class_of(pic, Divisor.basis(3, i)) == pic.make_class((1,))


def test_five_ray_fan_basis():
    pic = picard_group(ex5, basis=(0, 3, 4))
    assert pic.free_rank == 3
    assert pic.torsion_invariants == ()
    assert pic.basis_labels == ('E1', 'E4', 'E5')
    assert class_of(pic, Divisor.basis(5, 1)) == pic.make_class((-1, 1, 1))
    assert class_of(pic, Divisor.basis(5, 2)) == pic.make_class((1, 0, 1))
    D = divisor_representative(pic, pic.make_class((2, -3, 5)))
    assert D == Divisor((2, 0, 0, -3, 5))


def test_auto_basis_is_lexicographically_first():
    assert picard_group(ex5).basis == (0, 1, 2)
    assert picard_group(standard_fan('P1xP1')).basis == (0, 1)
    assert picard_group(ex5, basis=None).basis is None


def test_basis_errors():
    with pytest.raises(DomainError) as err:
        picard_group(ex5, basis=(0, 2, 4))
    assert err.value.code == 'domain.basis'
    with pytest.raises(DomainError):
        picard_group(ex5, basis=(0, 3))
    with pytest.raises(DomainError):
        picard_group(tors, basis=(0,))


def test_torsion_fan(regtest):
    pic = picard_group(tors)
    assert pic.free_rank == 1
    assert pic.torsion_invariants == (2,)
    assert pic.basis is None
    for c in pic.classes_in_ball(1):
        print(c, file=regtest)


def test_classes_in_ball_order(regtest):
    pic = picard_group(p2)
    assert [str(c) for c in pic.classes_in_ball(2)] == ['(0)', '(-1)', '(1)', '(-2)', '(2)']
    pic = picard_group(standard_fan('P1xP1'))
    classes = list(pic.classes_in_ball(1))
    print([str(c) for c in classes], file=regtest)
    assert len(list(pic.classes_in_ball('3/2'))) == 9


def test_zero_and_relations():
    for name in ('P2', 'example5', 'torsion', 'stacky_P2', 'hirzebruch1'):
        fan = standard_fan(name)
        pic = picard_group(fan)
        assert class_of(pic, Divisor((0,) * fan.n)).is_zero
        assert class_of(pic, pic.relation((1, 0))).is_zero
        assert class_of(pic, pic.relation((0, 1))).is_zero
        assert divisor_representative(pic, pic.zero()).coefficients == (0,) * fan.n


def test_length_mismatch():
    pic = picard_group(p2)
    with pytest.raises(DomainError) as err:
        class_of(pic, Divisor((1, 0)))
    assert err.value.code == 'domain.length_mismatch'
    with pytest.raises(DomainError):
        pic.make_class((1, 2))


def test_mixing_groups():
    a = picard_group(p2).make_class((1,))
    b = picard_group(tors).make_class((1,), (0,))
    with pytest.raises(PicardMismatchError):
        a + b
    with pytest.raises(PicardMismatchError):
        picard_group(tors).check(a)


def test_class_arithmetic():
    pic = picard_group(tors)
    c = pic.make_class((3,), (1,))
    assert (c + c) == pic.make_class((6,), (0,))
    assert (-c).torsion == (1,)
    assert 3 * c == pic.make_class((9,), (1,))
    assert (c - c).is_zero
    assert str(c) == '(3;1)'
    assert c.norm2 == 9


def test_round_trip_random():
    rng = np.random.default_rng(21)
    for _ in range(40):
        fan = random_fan(rng, n_max=7, coord=5)
        pic = picard_group(fan)
        for _ in range(5):
            c = random_class(rng, pic)
            assert class_of(pic, divisor_representative(pic, c)) == c


def test_relation_kernel_random():
    rng = np.random.default_rng(22)
    for _ in range(100):
        fan = random_fan(rng, n_max=7, coord=5)
        pic = picard_group(fan)
        D = random_divisor(rng, fan.n)
        f = LinearFunctional2(*(int(x) for x in rng.integers(-6, 7, size=2)))
        assert class_of(pic, D.shifted(fan, f)) == class_of(pic, D)


def test_rank_law_and_torsion():
    rng = np.random.default_rng(23)
    for _ in range(60):
        fan = random_fan(rng, n_max=7, coord=4)
        pic = picard_group(fan)
        assert pic.free_rank == fan.n - 2
        index = abs(integer_determinant(lattice_basis(fan.vectors, 2)))
        product = 1
        for d in pic.torsion_invariants:
            product *= d
        assert product == index
        if index == 1:
            assert pic.torsion_invariants == ()


def test_projection_kills_only_relations():
    # a divisor with zero class is an integer relation
    rng = np.random.default_rng(24)
    for _ in range(30):
        fan = random_fan(rng, n_max=6, coord=4)
        pic = picard_group(fan, basis=None)
        D = random_divisor(rng, fan.n, coord=3)
        diff = D - divisor_representative(pic, class_of(pic, D))
        assert class_of(pic, diff).is_zero
        assert solve_integer_system([list(v) for v in fan.vectors], diff.coefficients) \
            is not None


def test_rational_class_vector():
    pic = picard_group(ex5, basis=(0, 3, 4))
    assert rational_class_vector(pic, (0, Fraction(1, 2), 0, 0, 0)) == \
        (Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2))
