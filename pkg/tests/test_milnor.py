import dataclasses

import pytest

from swanlab import grp, gring, lin, milnor, quat
from swanlab.rings import RingHom, inverse_hom

SQ = milnor.q24_square()
HF = SQ.R0


def q(text):
    return quat.quat_element(text)


@pytest.fixture(scope="module")
def units():
    return quat.enumerate_units(HF)


@pytest.fixture(scope="module")
def autos():
    return milnor.q24_automorphisms(SQ)


# ---------------------------------------------------------------- quotient rings

def test_lambda_has_rank_12_and_monomial_basis():
    lam = SQ.R
    assert lam.rank == 12
    assert lam.basis_names == ("1", "y", "x", "xy", "x^2", "x^2y", "x^3", "x^3y",
                               "x^4", "x^4y", "x^5", "x^5y")
    assert lam.check_associative()
    x, y = lam.basis(lam.gens[0]), lam.basis(lam.gens[1])
    assert lam.add(lam.power(x, 6), lam.unity) == lam.zero()
    assert lam.mul(y, y) == lam.neg(lam.unity)
    assert [n for n, ok in quat.relation_report(lam, lam, [x, y]) if not ok] == []


def test_quotient_by_x2_plus_1_is_lipschitz():
    g = grp.quaternion(24)
    zg = gring.group_ring(g)
    x = g.generators["x"]
    qr = milnor.quotient_ring(zg, [milnor._x_poly(zg, x, (1, 0, 1))])
    assert qr.ring.rank == 4
    hz = quat.lipschitz_order()
    gx = qr.projection.apply(zg.basis(x))
    gy = qr.projection.apply(zg.basis(g.generators["y"]))
    phi1 = quat.validated_hom(hz, qr.ring, [gx, gy], "phi1")
    assert phi1.is_bijective()


def test_quotient_of_zc2_by_augmentation():
    g = grp.cyclic(2)
    zg = gring.group_ring(g)
    qr = milnor.quotient_ring(zg, [[-1, 1]])
    assert qr.ring.rank == 1
    assert qr.projection.apply((3, 4)) == (7,)


def test_quotient_with_torsion_is_rejected():
    zg = gring.group_ring(grp.cyclic(2))
    with pytest.raises(milnor.QuotientTorsionError):
        milnor.quotient_ring(zg, [[2, 0]])


def test_square_extra_checks():
    names = {c.name: c for c in milnor.validate_square(SQ).checks}
    for key in ("phi1 is a ring isomorphism", "phi2 is a ring isomorphism", "I + J = (3, x^2+1)"):
        assert names[key].ok


# ---------------------------------------------------------------- square validation

def test_q24_square_is_valid():
    report = milnor.validate_square(SQ)
    assert report.ok, report.failures()
    names = {c.name: c for c in report.checks}
    assert names["fibre product index equals |R0|"].detail == "index 81"


def test_zero_j1_reports_surjectivity_failure():
    zero = RingHom(SQ.R1, SQ.R0, tuple((0,) * 4 for _ in range(4)), "zero")
    bad = dataclasses.replace(SQ, j1=zero, j2=RingHom(SQ.R2, SQ.R0, tuple((0,) * 4 for _ in range(8))),
                              extra={})
    report = milnor.validate_square(bad)
    failed = {c.name for c in report.failures()}
    assert "a corner map is surjective" in failed


def test_perturbed_i2_reports_commutativity_failure():
    rows = [list(r) for r in SQ.i2.matrix]
    rows[1][0] += 1
    bad = dataclasses.replace(SQ, i2=RingHom(SQ.R, SQ.R2, lin.freeze(rows), "i2'"), extra={})
    failed = {c.name for c in milnor.validate_square(bad).failures()}
    assert "j1 o i1 = j2 o i2" in failed


# ---------------------------------------------------------------- patching

def test_all_patched_modules(units):
    assert len(units) == 48
    for u in units:
        pm = milnor.patch_module(SQ, u)
        assert all(c.ok for c in pm.checks()), HF.label(u)


def test_trivial_patch_is_the_fibre_product():
    pm = milnor.patch_module(SQ, HF.unity)
    assert pm.lattice.basis == milnor.fibre_product(SQ) == milnor.image_lattice(SQ)


def test_distinct_units_give_distinct_lattices():
    a = milnor.patch_module(SQ, q("1+j")).lattice
    b = milnor.patch_module(SQ, q("1+k")).lattice
    assert a.rank == b.rank == 12
    assert a.basis != b.basis


def test_patch_rejects_non_units():
    with pytest.raises(ValueError):
        milnor.patch_module(SQ, q("1+i+j"))


# ---------------------------------------------------------------- double cosets

def test_double_coset_extremes(units):
    trivial = quat.UnitSubgroup(HF, (HF.unity,))
    assert len(milnor.double_cosets(units, units, units)) == 1
    assert len(milnor.double_cosets(units, trivial, trivial)) == 48


def test_double_cosets_reject_non_subgroups(units):
    bad = quat.UnitSubgroup(HF, (HF.unity, q("j")))
    with pytest.raises(ValueError):
        milnor.double_cosets(units, bad, units)


def test_q24_partition():
    part = milnor.q24_partition("enlarged")
    assert part.is_valid()
    assert len(part) == 3
    classes = {part.class_of(q(s)) for s in ("1", "1+j", "1+k")}
    assert len(classes) == 3
    for c in part.classes:
        assert c[0] == min(c)


def test_coset_identities():
    lhs = HF.mul(HF.mul(q("j"), q("1+i+j+k")), q("1+i"))
    assert lhs == q("1+k")
    lhs = HF.mul(HF.mul(q("-j"), q("1-i-j-k")), q("1+i"))
    assert lhs == q("1+j")
    part = milnor.q24_partition("enlarged")
    assert part.class_of(q("1+j")) == part.class_of(q("1-i-j-k"))
    assert part.class_of(q("1+k")) == part.class_of(q("1+i+j+k"))


def test_sandwich_subgroups():
    u0, left, enlarged, _ = milnor.q24_unit_data("enlarged")
    minimal = milnor.q24_unit_data("minimal")[2]
    upper = milnor.q24_unit_data("upper")[2]
    assert len(minimal) == 8 and len(enlarged) == 16 and len(upper) == 16
    assert minimal.is_subgroup_of(enlarged) and enlarged.is_subgroup_of(upper)
    assert set(enlarged) == set(upper)
    assert len(milnor.q24_partition("upper")) == 3


def test_minimal_right_subgroup_gives_six_classes():
    # Q8 is normal in H_F3^x, so Q8 \ U0 / Q8 = U0 / Q8 has 48 / 8 classes
    assert len(milnor.q24_partition("minimal")) == 6


# ---------------------------------------------------------------- automorphisms

def test_cube_checks_for_all_of_aut_q24(autos):
    assert len(autos) == 48
    assert all(a.ok for a in autos)
    assert len({a.params for a in autos}) == 48


def _images(hom):
    return HF.label(hom.apply(HF.basis(1))), HF.label(hom.apply(HF.basis(2)))


@pytest.mark.parametrize("a, b, images", [
    (1, 0, ("i", "j")), (1, 1, ("i", "k")), (5, 2, ("i", "-j")), (7, 0, ("-i", "j")), (1, 3, ("i", "-k"))])
def test_derived_alpha0(a, b, images):
    assert _images(milnor.extend_automorphism(SQ, a, b).alpha0) == images


@pytest.mark.parametrize("a, b, images", [(1, 1, ("i", "j")), (1, 0, ("i", "k")), (5, 2, ("i", "-k"))])
def test_closed_form_alpha0_formula(a, b, images):
    assert _images(milnor.closed_form_alpha0(a, b)) == images


def test_closed_form_breaks_the_cube():
    # the published alpha0 swaps the roles of b even and b odd; with it the
    # face alpha0 o j2 = j2 o alpha2 fails for theta_{1,0}
    ext = milnor.extend_automorphism(SQ, 1, 0)
    closed = milnor.closed_form_alpha0(1, 0)
    assert not closed.compose(SQ.j2).same_as(SQ.j2.compose(ext.alpha2))


def test_identity_orbits_equal_classes():
    part = milnor.q24_partition("enlarged")
    ident = [milnor.extend_automorphism(SQ, 1, 0)]
    orb = milnor.aut_orbits(part, ident)
    assert len(orb) == len(part)
    assert orb.witnesses == ()


def test_full_aut_orbits(autos):
    part = milnor.q24_partition("enlarged")
    orb = milnor.aut_orbits(part, autos)
    assert orb.well_defined
    assert len(orb) == 2
    one = part.class_of(q("1"))
    assert (one,) in orb.orbits
    merged = tuple(sorted((part.class_of(q("1+j")), part.class_of(q("1+k")))))
    assert merged in orb.orbits
    assert orb.witnesses


def test_which_automorphisms_swap_1j_and_1k(autos):
    part = milnor.q24_partition("enlarged")
    orb = milnor.aut_orbits(part, autos)
    j, k = part.class_of(q("1+j")), part.class_of(q("1+k"))
    for a in autos:
        swapped = orb.action[a.params][j] == k
        # alpha0(j) = i^b j is +-k exactly when b is odd
        assert swapped == (a.params[1] % 2 == 1)


# ---------------------------------------------------------------- certificates

def test_same_class_certificates():
    part = milnor.q24_partition("enlarged")
    pairs = 0
    for s in ("1", "1+j", "1+k"):
        u = q(s)
        for v in part.classes[part.class_of(u)][:2]:
            if v == u:
                continue
            cert = gring.iso_search(milnor.patch_module(SQ, u).lattice,
                                    milnor.patch_module(SQ, v).lattice, height=3)
            assert cert.found and cert.verified
            pairs += 1
    assert pairs >= 3


@pytest.mark.parametrize("params", [(1, 1), (5, 2), (7, 3)])
@pytest.mark.parametrize("s", ["1", "1+j", "1+k"])
def test_twist_compatibility(params, s):
    auto = milnor.extend_automorphism(SQ, *params)
    u = q(s)
    src = milnor.twisted_patch(milnor.patch_module(SQ, u), auto)
    assert src.is_closed()
    tgt = milnor.patch_module(SQ, inverse_hom(auto.alpha0).apply(u)).lattice
    cert = gring.iso_search(src, tgt, height=3, maps=milnor.twist_transport(SQ, auto))
    assert cert.found and cert.verified


# ---------------------------------------------------------------- extension of scalars

@pytest.fixture(scope="module")
def proj():
    return SQ.extra["lift"].projection


def test_ext_scalars_of_regular_module(proj):
    reg = gring.regular_module(grp.quaternion(24))
    res = milnor.ext_scalars(proj, reg)
    assert res.torsion == () and res.free_rank == 12 and res.injective
    assert res.module.basis == lin.full_lattice(12)
    assert res.module.action == gring.regular_module(SQ.R).action


def test_ext_scalars_of_swan_module(proj):
    res = milnor.ext_scalars(proj, gring.swan_module(grp.quaternion(24), 5))
    assert res.module.rank == 12 and res.module.is_closed()
    assert res.injective and res.torsion == ()


def test_ext_scalars_direct_sum(proj):
    g = grp.quaternion(24)
    a, b = gring.swan_module(g, 5), gring.regular_module(g)
    whole = milnor.ext_scalars(proj, milnor.direct_sum(a, b))
    parts = milnor.direct_sum(milnor.ext_scalars(proj, a).module, milnor.ext_scalars(proj, b).module)
    assert whole.module.basis == parts.basis
    assert whole.free_rank == 24


def test_ext_scalars_needs_surjection():
    g = grp.cyclic(2)
    zg = gring.group_ring(g)
    doubling = RingHom(zg, zg, ((2, 0), (0, 2)))
    with pytest.raises(ValueError):
        milnor.ext_scalars(doubling, gring.regular_module(g))


def test_union_find_groups():
    uf = milnor.UnionFind(range(5))
    uf.union(3, 1)
    uf.union(4, 3)
    assert uf.groups() == [[0], [1, 3, 4], [2]]
