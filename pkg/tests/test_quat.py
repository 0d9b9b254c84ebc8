import itertools

import pytest

from swanlab import quat
from swanlab.rings import RingError, RingHom, base_change, from_products, hom_from_images, inverse_hom

HZ = quat.lipschitz_order()
ZZ = quat.cyclotomic_quat_order()
HF3 = quat.quaternion_algebra(3)


def q(text, p=3):
    return quat.quat_element(text, p)


@pytest.mark.parametrize("ring", [HZ, ZZ, HF3, quat.quaternion_algebra(2)], ids=lambda r: r.name)
def test_presentations_are_associative_with_unity(ring):
    assert ring.check_associative()
    assert ring.check_unity()


def test_lipschitz_products():
    i, j, k = HZ.basis(1), HZ.basis(2), HZ.basis(3)
    assert HZ.mul(i, j) == k
    assert HZ.mul(j, i) == HZ.neg(k)
    assert HZ.mul(k, k) == HZ.neg(HZ.unity)


def test_cyclotomic_relations():
    z, j = ZZ.basis(1), ZZ.basis(4)
    z2, z4 = ZZ.power(z, 2), ZZ.power(z, 4)
    assert ZZ.add(z4, ZZ.unity) == z2
    assert ZZ.mul(z, ZZ.sub(z, ZZ.power(z, 3))) == ZZ.unity
    assert ZZ.mul(j, j) == ZZ.neg(ZZ.unity)
    assert ZZ.mul(j, z) == ZZ.mul(ZZ.power(z, 11), j)
    assert ZZ.power(z, 12) == ZZ.unity and ZZ.power(z, 6) == ZZ.neg(ZZ.unity)


def test_phi12_at_i_vanishes_mod_3():
    i = HF3.basis(1)
    val = HF3.add(HF3.sub(HF3.power(i, 4), HF3.power(i, 2)), HF3.unity)
    assert val == HF3.zero()
    hz_val = HZ.add(HZ.sub(HZ.power(HZ.basis(1), 4), HZ.power(HZ.basis(1), 2)), HZ.unity)
    assert hz_val == (3, 0, 0, 0)


def test_reduction_maps():
    j1, j2 = quat.j1(), quat.j2()
    assert j1.is_multiplicative() and j2.is_multiplicative()
    assert j1.apply(HZ.unity) == HF3.unity
    assert j1.apply((0, 5, 0, 0)) == (0, 2, 0, 0)
    assert j2.apply(ZZ.basis(1)) == HF3.basis(1)
    assert j2.apply(ZZ.basis(4)) == HF3.basis(2)
    assert j1.is_surjective() and j2.is_surjective()


def test_invalid_images_are_rejected():
    with pytest.raises(RingError):
        # zeta -> 1 breaks Phi12(zeta) = 0 mod 3 (Phi12(1) = 1)
        quat.validated_hom(ZZ, HF3, [HF3.unity, HF3.basis(2)], "bad")
    report = dict(quat.relation_report(ZZ, HF3, [HF3.unity, HF3.basis(2)]))
    assert report["Phi12(zeta)"] is False and report["j^2+1"] is True


@pytest.mark.parametrize("text, norm", [("1", 1), ("1+j", 2), ("1+i+j", 0), ("1-i-j-k", 1)])
def test_norms(text, norm):
    assert quat.quaternion_norm(q(text), HF3) == norm


def test_norm_is_multiplicative_exhaustively():
    elems = list(HF3.elements())
    norms = {e: quat.quaternion_norm(e, HF3) for e in elems}
    for a, b in itertools.product(elems, repeat=2):
        assert norms[HF3.mul(a, b)] == norms[a] * norms[b] % 3


def test_units_of_hf3():
    units = quat.enumerate_units(HF3)
    assert len(units) == 48
    nonzero = {e for e in HF3.elements() if quat.quaternion_norm(e, HF3)}
    assert set(units.elements) == nonzero
    assert units.is_subgroup()
    assert list(units.elements) == sorted(units.elements)


def test_units_of_small_algebras():
    f3 = from_products("F3", 3, 1, lambda a, b: [1], [1], ["1"], [0])
    assert quat.enumerate_units(f3).elements == ((1,), (2,))
    h2 = quat.quaternion_algebra(2)
    brute = [e for e in h2.elements() if any(h2.mul(e, f) == h2.unity for f in h2.elements())]
    assert len(quat.enumerate_units(h2)) == len(brute) == 8


def test_enumeration_guard():
    with pytest.raises(quat.UnitError):
        quat.enumerate_units(HZ)


@pytest.mark.parametrize("height", [1, 2, 3])
def test_lipschitz_units(height):
    found = quat.order_unit_search(HZ, height)
    assert found.complete
    labels = sorted(HZ.label(u) for u in found.units)
    assert labels == sorted(["1", "-1", "i", "-i", "j", "-j", "k", "-k"])


def test_cyclotomic_units_and_incomplete_flag():
    found = quat.order_unit_search(ZZ, 1)
    assert not found.complete
    one_minus_zeta = ZZ.sub(ZZ.unity, ZZ.basis(1))
    assert one_minus_zeta in found.units
    assert ZZ.inverse(one_minus_zeta) is not None


@pytest.mark.parametrize("gens, size", [(["i"], 4), (["i", "j"], 8), (["i", "j", "1-i"], 16)])
def test_closures(gens, size):
    sub = quat.subgroup_closure(HF3, [q(g) for g in gens])
    assert len(sub) == size
    assert sub.is_subgroup()


def test_enlarged_closure_contains_1_plus_i():
    sub = quat.subgroup_closure(HF3, [q("i"), q("j"), q("1-i")])
    assert q("1+i") in sub


def test_closure_rejects_non_units():
    with pytest.raises(quat.UnitError):
        quat.subgroup_closure(HF3, [q("1+i+j")])


def test_image_subgroup_of_lipschitz_units():
    img = quat.image_subgroup(quat.j1(), quat.order_unit_search(HZ, 1).units)
    assert len(img) == 8


@pytest.mark.parametrize("text, coords", [("1+j", [1, 0, 1, 0]), ("1-i-j-k", [1, -1, -1, -1]),
                                          ("2i+k", [0, 2, 0, 1]), ("-j", [0, 0, -1, 0])])
def test_parse(text, coords):
    assert quat.parse_quaternion(text) == coords


@pytest.mark.parametrize("bad", ["", "1+q", "+"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        quat.parse_quaternion(bad)


def test_finite_algebra_element_arithmetic():
    a = quat.FiniteAlgebraElement(HF3, q("1+j"))
    b = a.inverse()
    assert (a * b).coeffs == HF3.unity
    assert str(a + a) == "-1-j"
    with pytest.raises(quat.UnitError):
        quat.FiniteAlgebraElement(HF3, q("1+i+j")).inverse()


def test_ring_hom_helpers():
    h2 = base_change(HZ, 2)
    red = hom_from_images(HZ, h2, [h2.basis(1), h2.basis(2)])
    assert red.is_multiplicative()
    auto = hom_from_images(HF3, HF3, [HF3.basis(2), HF3.basis(1)])  # i <-> j
    inv = inverse_hom(auto)
    assert inv.compose(auto).same_as(RingHom(HF3, HF3, tuple(HF3.basis(k) for k in range(4))))
