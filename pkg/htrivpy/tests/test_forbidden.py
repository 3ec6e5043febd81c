'''Testing forbidden module.

The feasibility oracle is checked against the cohomology oracle on random
fans and classes.
'''
#===============================================================================
# Import
#===============================================================================
import itertools

import numpy as np
import pytest

from htrivpy.htrivpy.fan import standard_fan, collinear_pairs, CollinearPair
from htrivpy.htrivpy.lattice import integer_feasible
from htrivpy.htrivpy.picard import picard_group, class_of, Divisor, divisor_representative
from htrivpy.htrivpy.cohomology import cohomology_dims
from htrivpy.htrivpy.forbidden import (delta_family, iter_delta, is_cyclic_arc,
                                       forbidden_set_contains, forbidden_witness,
                                       is_h_trivial, interior_membership, vanishing_functional,
                                       ForbiddenSetSpec, IndexFamilyDelta)
from htrivpy.first_mate.errors import DomainError, OracleDisagreementError
from htrivpy.first_mate.testutils import random_fan, random_class

#===============================================================================
# Shared objects
#===============================================================================
p2 = standard_fan('P2')
pic_p2 = picard_group(p2)
ex5 = standard_fan('example5')
pic_ex5 = picard_group(ex5, basis=(0, 3, 4))


#===============================================================================
# Tests
#===============================================================================
def test_delta_small(regtest):
    for n in (3, 4, 5):
        members = tuple(delta_family(n))
        print(n, len(members), members, file=regtest)
    assert tuple(delta_family(3)) == ((), (0, 1, 2))
    assert tuple(delta_family(4)) == ((), (0, 2), (1, 3), (0, 1, 2, 3))
    assert len(delta_family(5)) == 12


def test_delta_lazy_for_many_rays():
    family = delta_family(18)
    assert family.members is None
    assert (0, 5, 9) in family
    assert (3, 4, 5) not in family
    first = list(itertools.islice(family.check_order(), 2))
    assert first == [(), tuple(range(18))]


def test_delta_membership():
    family = delta_family(ex5)
    assert () in family and (0, 1, 2, 3, 4) in family
    assert (0, 2) in family
    assert (4, 0) not in family
    assert (0, 7) not in family
    assert not is_cyclic_arc((), 5)
    assert is_cyclic_arc((4, 0, 1), 5)


def test_delta_symmetry():
    for n in range(3, 10):
        members = set(iter_delta(n))
        for I in members:
            rotated = tuple(sorted((i + 1) % n for i in I))
            reflected = tuple(sorted((-i) % n for i in I))
            assert rotated in members
            assert reflected in members


def test_check_order():
    family = IndexFamilyDelta(4, tuple(iter_delta(4)))
    assert list(family.check_order()) == [(), (0, 1, 2, 3), (0, 2), (1, 3)]


def test_forbidden_set_examples():
    full = (0, 1, 2)
    hit = forbidden_set_contains(p2, pic_p2, full, pic_p2.zero())
    assert hit and hit.r == Divisor((0, 0, 0)) and hit.f == (0, 0)
    O_minus = pic_p2.make_class((-1,))
    assert not forbidden_set_contains(p2, pic_p2, full, O_minus)
    assert not forbidden_set_contains(p2, pic_p2, (), O_minus)


def test_forbidden_set_not_in_delta():
    with pytest.raises(DomainError) as err:
        forbidden_set_contains(p2, pic_p2, (0,), pic_p2.zero())
    assert err.value.code == 'domain.not_in_delta'


def test_witness_satisfies_pattern():
    rng = np.random.default_rng(41)
    for _ in range(50):
        fan = random_fan(rng, n_max=7, coord=5)
        pic = picard_group(fan)
        c = random_class(rng, pic)
        hit = forbidden_witness(fan, pic, c)
        if hit is None:
            continue
        inside = set(hit.I)
        assert all((x >= 0) == (i in inside) for i, x in enumerate(hit.r))
        assert class_of(pic, hit.r) == c


def test_forbidden_system_matches_rows():
    a = divisor_representative(pic_ex5, pic_ex5.make_class((0, -2, -2)))
    for I in delta_family(ex5):
        spec = ForbiddenSetSpec(ex5.n, I)
        assert integer_feasible(spec.system(ex5, a)).feasible == \
            bool(forbidden_set_contains(ex5, pic_ex5, I, pic_ex5.make_class((0, -2, -2))))


def test_is_h_trivial_examples():
    assert is_h_trivial(p2, pic_p2, pic_p2.make_class((-1,)))
    assert is_h_trivial(p2, pic_p2, pic_p2.make_class((-2,)))
    assert not is_h_trivial(p2, pic_p2, pic_p2.make_class((-3,)))
    for name in ('P2', 'P1xP1', 'example5', 'torsion', 'stacky_P2'):
        fan = standard_fan(name)
        pic = picard_group(fan)
        assert not is_h_trivial(fan, pic, pic.zero(), cross_check=True)
    assert is_h_trivial(ex5, pic_ex5, pic_ex5.make_class((0, 0, -1)), cross_check=True)


def test_oracle_agreement():
    rng = np.random.default_rng(42)
    for _ in range(200):
        fan = random_fan(rng, n_max=7, coord=6)
        pic = picard_group(fan)
        c = random_class(rng, pic, coord=6)
        trivial = is_h_trivial(fan, pic, c)
        assert trivial == cohomology_dims(fan, pic, c).vanishes


@pytest.mark.longrun
def test_oracle_agreement_many_rays():
    rng = np.random.default_rng(46)
    for _ in range(1000):
        fan = random_fan(rng, n_max=9, coord=8)
        pic = picard_group(fan)
        c = random_class(rng, pic, coord=8)
        assert is_h_trivial(fan, pic, c) == cohomology_dims(fan, pic, c).vanishes


def test_cross_check_flags_disagreement(monkeypatch):
    import htrivpy.htrivpy.forbidden as forbidden
    monkeypatch.setattr(forbidden, 'forbidden_witness', lambda fan, pic, c: None)
    with pytest.raises(OracleDisagreementError) as err:
        forbidden.is_h_trivial(p2, pic_p2, pic_p2.zero(), cross_check=True)
    assert err.value.code == 'oracle.disagreement'


def test_monotone_cone_containment():
    rng = np.random.default_rng(43)
    for _ in range(40):
        fan = random_fan(rng, n_max=6, coord=5)
        pic = picard_group(fan)
        c = random_class(rng, pic)
        hit = forbidden_witness(fan, pic, c)
        if hit is None:
            continue
        for k in hit.I:
            assert forbidden_set_contains(fan, pic, hit.I,
                                          c + class_of(pic, Divisor.basis(fan.n, k)))


def test_interior_membership_examples():
    assert interior_membership(p2, pic_p2, pic_p2.make_class((1,))) == (0, 1, 2)
    assert interior_membership(p2, pic_p2, pic_p2.make_class((-1,))) == ()
    assert interior_membership(ex5, pic_ex5, pic_ex5.make_class((1, 0, 1))) is None
    assert interior_membership(ex5, pic_ex5, ('1/2', 0, '1/2')) is None
    with pytest.raises(DomainError) as err:
        interior_membership(p2, pic_p2, pic_p2.zero())
    assert err.value.code == 'domain.zero_class'
    with pytest.raises(DomainError):
        interior_membership(ex5, pic_ex5, (1, 1, 1, 1, 1, 1, 1))


def test_interior_membership_without_collinear_pairs():
    rng = np.random.default_rng(44)
    for _ in range(30):
        fan = random_fan(rng, n_max=6, coord=5, collinear=False)
        pic = picard_group(fan)
        c = random_class(rng, pic)
        if c.free == (0,) * pic.free_rank:
            continue
        assert interior_membership(fan, pic, c) is not None


def test_interior_membership_tube_directions():
    rng = np.random.default_rng(45)
    for _ in range(20):
        fan = random_fan(rng, n_max=6, coord=4, collinear=True)
        pic = picard_group(fan)
        for pair in collinear_pairs(fan):
            h = vanishing_functional(fan, pair)
            for sign in (1, -1):
                direction = [max(sign * h(v), 0) for v in fan.vectors]
                assert interior_membership(fan, pic, direction) is None


def test_vanishing_functional():
    pair = collinear_pairs(ex5)[0]
    h = vanishing_functional(ex5, pair)
    assert h(ex5.vectors[pair.i]) == 0 and h(ex5.vectors[pair.j]) == 0
    assert [h(v) for v in ex5.vectors] == [-1, 0, 1, 0, -1]
    with pytest.raises(DomainError) as err:
        vanishing_functional(ex5, CollinearPair(0, 1))
    assert err.value.code == 'domain.not_collinear'
