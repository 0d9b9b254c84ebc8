from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swanlab import grp, gring, lin

CYCLIC = [grp.cyclic(n) for n in range(2, 9)]
DIHEDRAL = [grp.dihedral(o) for o in (6, 10, 14, 18, 22)]
QUATERNION = [grp.quaternion(o) for o in (8, 12, 16, 20, 24)]
tag = lambda g: g.tag  # noqa: E731


def units_mod(n):
    return [r for r in range(1, n) if gcd(r, n) == 1]


# ---------------------------------------------------------------- group ring arithmetic

def test_norm_element_augmentation():
    for g in (grp.cyclic(5), grp.quaternion(12)):
        assert gring.norm_element(g).augmentation() == g.order


def test_zc2_zero_divisor():
    g = grp.cyclic(2)
    one = gring.element(g, {0: 1})
    x = gring.element(g, {1: 1})
    assert ((one + x) * (one - x)).coeffs == (0, 0)


@settings(max_examples=40, derandomize=True, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=12, max_size=12),
       st.lists(st.integers(-5, 5), min_size=12, max_size=12))
def test_involution_and_augmentation_laws(a, b):
    g = grp.quaternion(12)
    ea, eb = gring.element(g, a), gring.element(g, b)
    assert ea.involution().involution() == ea
    # (ab)* = b* a* and augmentation is multiplicative
    assert (ea * eb).involution() == eb.involution() * ea.involution()
    assert (ea * eb).augmentation() == ea.augmentation() * eb.augmentation()
    assert gring.grelem_add(ea, eb).augmentation() == ea.augmentation() + eb.augmentation()


def test_group_ring_is_associative():
    assert gring.group_ring(grp.dihedral(6)).check_associative()


def test_mismatched_rings():
    a = gring.element(grp.cyclic(3), [1, 0, 0])
    b = gring.element(grp.cyclic(4), [1, 0, 0, 0])
    with pytest.raises(lin.RingMismatchError):
        a * b


# ---------------------------------------------------------------- ideals

def test_augmentation_ideal():
    c2 = gring.augmentation_ideal(grp.cyclic(2))
    assert c2.rank == 1
    assert lin.lattice_member(c2.basis, [-1, 1])
    q8 = gring.augmentation_ideal(grp.quaternion(8))
    assert q8.rank == 7
    assert all(sum(r) == 0 for r in q8.basis.rows)
    assert q8.is_closed()


@pytest.mark.parametrize("g", CYCLIC + DIHEDRAL + QUATERNION, ids=tag)
def test_swan_index_and_periodicity(g):
    n = g.order
    for r in units_mod(n) or [1]:
        m = gring.swan_module(g, r)
        assert m.is_closed()
        assert lin.lattice_index(lin.full_lattice(n), m.basis) == r
        assert gring.swan_module(g, r + n).basis == m.basis
        assert gring.swan_module(g, r - n).basis == m.basis


def test_swan_trivial_and_literal():
    g = grp.cyclic(2)
    assert gring.swan_module(g, 1).basis == lin.full_lattice(2)
    literal = gring.swan_module(g, 3, normalise=False)
    assert literal.basis.rows == ((1, 2), (0, 3))
    # normalised, r = 3 becomes 1 mod 2
    assert gring.swan_module(g, 3).basis == lin.full_lattice(2)
    assert gring.is_free(literal).found


@pytest.mark.parametrize("r", [2, 3, 4])
def test_swan_c5_index(r):
    m = gring.swan_module(grp.cyclic(5), r)
    assert lin.lattice_index(lin.full_lattice(5), m.basis) == r


def test_swan_rejects_non_coprime():
    with pytest.raises(gring.SwanError):
        gring.swan_module(grp.cyclic(6), 2)
    with pytest.raises(gring.SwanError):
        gring.swan_module(grp.cyclic(6), 0, normalise=False)


def test_norm_swan_modules():
    g = grp.cyclic(3)
    assert gring.norm_swan_module(g, 1).basis == lin.full_lattice(3)
    n2 = gring.norm_swan_module(g, 2)
    i2 = gring.swan_module(g, 2)
    assert n2.is_closed()
    # ZG/(N, r) is (Z/r)G modulo the norm line, of order r^(|G|-1); so the
    # two ideals are isomorphic modules with different indices in ZG
    assert lin.lattice_index(lin.full_lattice(3), n2.basis) == 2 ** 2
    assert lin.lattice_index(lin.full_lattice(3), i2.basis) == 2
    cert = gring.iso_search(n2, i2)
    assert cert.found and cert.verified


def test_ideal_products():
    g = grp.cyclic(5)
    i2, i3 = gring.swan_module(g, 2), gring.swan_module(g, 3)
    zg = gring.regular_module(g)
    assert gring.ideal_product(i2, zg).basis == i2.basis
    aug = gring.augmentation_ideal(g)
    assert lin.lattice_contains(aug.basis, gring.ideal_product(aug, aug).basis)
    prod = gring.ideal_product(i2, i3)
    # as ideals (I,2)(I,3) = I + 6ZG, which is the unreduced (I,6)
    assert prod.basis == gring.swan_module(g, 6, normalise=False).basis
    cert = gring.iso_search(prod, gring.swan_module(g, 6))
    assert cert.found and cert.verified


# ---------------------------------------------------------------- twists

def test_twist_identity_is_identical():
    g = grp.quaternion(24)
    m = gring.swan_module(g, 5)
    t = gring.twist(m, grp.theta(g, 1, 0))
    assert t.basis == m.basis and t.action == m.action


def test_twist_regular_module_is_free():
    g = grp.quaternion(24)
    th = grp.theta(g, 5, 3)
    t = gring.twist(gring.regular_module(g), th)
    cert = gring.iso_search(t, gring.regular_module(g))
    assert cert.found and cert.verified


def test_twist_swan_module_stays_closed():
    g = grp.quaternion(24)
    t = gring.twist(gring.swan_module(g, 5), grp.theta(g, 5, 0))
    assert t.is_closed()


# ---------------------------------------------------------------- iso_search

def test_iso_search_identity_and_errors():
    g = grp.cyclic(2)
    zg = gring.regular_module(g)
    cert = gring.iso_search(zg, zg)
    assert cert.found and cert.map_matrix == ((1, 0), (0, 1))
    with pytest.raises(gring.IsoRankError):
        gring.iso_search(zg, gring.augmentation_ideal(g))
    with pytest.raises(lin.RingMismatchError):
        gring.iso_search(zg, gring.regular_module(grp.cyclic(3)))


def test_c5_swan_module_is_free():
    cert = gring.iso_search(gring.swan_module(grp.cyclic(5), 2), gring.regular_module(grp.cyclic(5)))
    assert cert.found and cert.verified
    assert gring.verify_certificate(gring.swan_module(grp.cyclic(5), 2),
                                    gring.regular_module(grp.cyclic(5)), cert.map_matrix)


def test_non_isomorphic_search_reports_unknown():
    g = grp.cyclic(2)
    # the sign and trivial rank-1 ZC2-lattices have no nonzero homs between them
    sign = gring.left_ideal(g, [[1, -1]])
    triv = gring.left_ideal(g, [[1, 1]])
    res = gring.iso_search(sign, triv, height=2, budget=200)
    assert not res.found
    assert res.candidates == 0


@pytest.mark.parametrize("g", CYCLIC, ids=tag)
def test_cyclic_swan_modules_are_free(g):
    for r in units_mod(g.order):
        cert = gring.is_free(gring.swan_module(g, r))
        assert cert.found and cert.verified, r


@pytest.mark.parametrize("g", DIHEDRAL, ids=tag)
def test_dihedral_weak_cancellation(g):
    values = sorted({gring.psi(g, 4, t).value for t in gring.automorphisms(g)})
    for r in values:
        cert = gring.is_free(gring.swan_module(g, r))
        assert cert.found and cert.verified, r


# ---------------------------------------------------------------- psi

@pytest.mark.parametrize("g, a, b, value", [
    (grp.cyclic(5), 2, None, 2),
    (grp.cyclic(5), 3, None, 3),
    (grp.quaternion(24), 5, 3, 1),
    (grp.quaternion(24), 5, 0, 1),
    (grp.quaternion(20), 3, 1, 9),
    (grp.dihedral(10), 2, 3, 9),
    (grp.dihedral(14), 3, 0, 9),
])
def test_psi_values(g, a, b, value):
    t = grp.theta(g, a) if b is None else grp.theta(g, a, b)
    assert gring.psi(g, gring.psi_period(g), t).value == value


def test_psi_identity_and_q8():
    for g in (grp.cyclic(7), grp.dihedral(10), grp.quaternion(24)):
        ident = grp.GroupAutomorphism(tuple(range(g.order)))
        assert gring.psi(g, gring.psi_period(g), ident).value == 1
    q8 = grp.quaternion(8)
    assert {gring.psi(q8, 4, t).value for t in gring.automorphisms(q8)} == {1}


FAMILIES = ([grp.cyclic(n) for n in range(2, 41)]
            + [grp.dihedral(o) for o in range(6, 41, 4)]
            + [grp.quaternion(o) for o in range(8, 41, 4)])


@pytest.mark.parametrize("g", FAMILIES, ids=tag)
def test_psi_is_a_homomorphism(g):
    ok, pairs = gring.psi_homomorphism_check(g)
    assert ok and pairs == len(gring.automorphisms(g)) ** 2


@pytest.mark.parametrize("g", [grp.cyclic(5), grp.cyclic(8), grp.dihedral(10), grp.quaternion(24)], ids=tag)
@pytest.mark.parametrize("i", [1, 2, 3])
def test_psi_multiples(g, i):
    k = gring.psi_period(g)
    for t in gring.automorphisms(g):
        assert gring.psi(g, i * k, t) == gring.psi_power(gring.psi(g, k, t), i)


def test_psi_power_examples():
    c5 = grp.cyclic(5)
    v = gring.psi(c5, 2, grp.theta(c5, 2))
    assert gring.psi_power(v, 1) == v
    assert gring.psi_power(v, 2).value == 4
    q24 = grp.quaternion(24)
    assert gring.psi_power(gring.psi(q24, 4, grp.theta(q24, 5, 0)), 2).value == 1


def test_psi_unsupported():
    with pytest.raises(gring.UnsupportedPsi):
        gring.psi(grp.cyclic(5), 3, grp.theta(grp.cyclic(5), 2))
    with pytest.raises(ValueError):
        gring.PsiValue(10, 4)
