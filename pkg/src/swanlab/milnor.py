"""Milnor squares, patched modules and the double-coset classification.

The concrete instance is the square for ``Lambda = ZQ24 / (x^6 + 1)``::

    Lambda ----i2----> Z[zeta12, j]
      |                    |
      i1                   j2
      v                    v
     H_Z  -----j1----->  H_F3

Patched modules are lattices in ``R1 x R2``::

    M(u) = {(x, y) : j1(x) * u = j2(y)}

Here ``Lambda`` acts on the left through ``(i1, i2)``.  Writing ``u`` on the
right is what makes ``M(u)`` closed under that action.  ``M(u)`` and
``M(j1(a)^-1 u j2(b))`` are isomorphic via ``(x, y) -> (x a, y b)``, so
isomorphism classes match the double cosets ``j1(R1^x) \\ R0^x / j2(R2^x)``.
"""

from __future__ import annotations

import dataclasses
import functools
from dataclasses import dataclass, field
from typing import Sequence

from . import grp, gring, lin, quat
from .lin import GLattice, HnfBasis
from .quat import UnitSubgroup
from .rings import RingError, RingHom, RingPresentation, hom_from_images, inverse_hom

Vec = tuple[int, ...]


class SquareError(RuntimeError):
    """An internal consistency check on a square failed."""


class QuotientTorsionError(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


# --------------------------------------------------------------------------
# quotient rings


@dataclass(frozen=True, eq=False)
class QuotientRing:
    ring: RingPresentation
    projection: RingHom
    section: tuple[tuple[int, ...], ...]  # rows: lifts of the quotient basis
    ideal: HnfBasis


def two_sided_ideal(ring: RingPresentation, generators: Sequence[Sequence[int]]) -> HnfBasis:
    n = ring.rank
    vectors = []
    for g in generators:
        for a in range(n):
            ag = ring.mul(ring.basis(a), g)
            for b in range(n):
                vectors.append(ring.mul(ag, ring.basis(b)))
    return lin.span(vectors, n)


def quotient_ring(ring: RingPresentation, generators: Sequence[Sequence[int]],
                  name: str | None = None) -> QuotientRing:
    """R / (two-sided ideal generated by ``generators``), for torsion-free quotients.

    When the ideal has a Hermite basis with unit pivots in reversed column
    order, the surviving basis elements of R form the quotient basis (so
    monomials stay monomials); otherwise a Smith complement is used.
    """
    if ring.modulus:
        raise RingError("quotient_ring works over Z")
    n = ring.rank
    ideal = two_sided_ideal(ring, generators)
    torsion, _, _ = lin.quotient(ideal)
    if torsion:
        raise QuotientTorsionError(f"quotient has torsion with invariant factors {torsion}")
    reversed_rows = [list(reversed(r)) for r in ideal.rows]
    rh = lin.hnf_of(reversed_rows, n) if reversed_rows else HnfBasis((), n)
    if all(row[c] == 1 for row, c in zip(rh.rows, rh.pivots)):
        pivots = {n - 1 - c for c in rh.pivots}
        keep = [c for c in range(n) if c not in pivots]
        pos = {c: t for t, c in enumerate(keep)}
        proj = [[0] * len(keep) for _ in range(n)]
        for c in keep:
            proj[c][pos[c]] = 1
        for row, pc in zip(rh.rows, rh.pivots):
            c = n - 1 - pc
            orig = list(reversed(row))
            for cc in keep:
                if orig[cc]:
                    proj[c][pos[cc]] = -orig[cc]
        section = [list(ring.basis(c)) for c in keep]
        names = tuple(ring.basis_names[c] for c in keep)
        words = tuple(ring.words[c] for c in keep) if ring.words else None
        gen_ok = all(g in pos for g in ring.gens)
        gens = tuple(pos[g] for g in ring.gens) if gen_ok else ()
        if not gen_ok:
            words = None
    else:
        _, proj, section = lin.quotient(ideal)
        keep = list(range(len(section)))
        names = tuple(f"q{t}" for t in keep)
        words, gens = None, ()
    q = len(keep)

    def product(s, t):
        return lin.vecmat(ring.mul(section[s], section[t]), proj)

    unity = lin.vecmat(ring.unity, proj)
    table = tuple(tuple(tuple(product(s, t)) for t in range(q)) for s in range(q))
    qring = RingPresentation(name or f"{ring.name}/I", 0, table, tuple(unity), names, gens, words)
    if not qring.check_unity():
        raise SquareError("quotient ring lost its identity")
    projection = RingHom(ring, qring, lin.freeze(proj), "proj")
    if not projection.is_multiplicative():
        raise SquareError("projection onto the quotient is not multiplicative")
    return QuotientRing(qring, projection, lin.freeze(section), ideal)


# --------------------------------------------------------------------------
# squares


@dataclass(frozen=True, eq=False)
class MilnorSquare:
    R: RingPresentation
    R1: RingPresentation
    R2: RingPresentation
    R0: RingPresentation
    i1: RingHom
    i2: RingHom
    j1: RingHom
    j2: RingHom
    extra: dict = field(default_factory=dict, compare=False)

    def replace(self, **kw) -> "MilnorSquare":
        return dataclasses.replace(self, extra=dict(self.extra), **kw)


@dataclass(frozen=True)
class SquareReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


def fibre_product(sq: MilnorSquare) -> HnfBasis:
    """{(x, y) in R1 x R2 : j1(x) = j2(y)}."""
    return _patch_lattice(sq, sq.R0.unity)


def _patch_lattice(sq: MilnorSquare, u: Vec) -> HnfBasis:
    r0 = sq.R0
    ru = r0.right_matrix(u)
    top = lin.matmul([list(r) for r in sq.j1.matrix], ru)
    w = top + [[-x for x in r] for r in sq.j2.matrix]
    if r0.modulus:
        return lin.congruence_lattice(w, r0.modulus)
    return lin.left_kernel(w, len(w))


def image_lattice(sq: MilnorSquare) -> HnfBasis:
    rows = [list(a) + list(b) for a, b in zip(sq.i1.matrix, sq.i2.matrix)]
    return lin.span(rows, sq.R1.rank + sq.R2.rank)


def validate_square(sq: MilnorSquare) -> SquareReport:
    checks = []
    for name in ("i1", "i2", "j1", "j2"):
        checks.append(Check(f"{name} multiplicative", getattr(sq, name).is_multiplicative()))
    left = sq.j1.compose(sq.i1)
    right = sq.j2.compose(sq.i2)
    checks.append(Check("j1 o i1 = j2 o i2", left.same_as(right)))
    s1, s2 = sq.j1.is_surjective(), sq.j2.is_surjective()
    checks.append(Check("a corner map is surjective", s1 or s2, f"j1: {s1}, j2: {s2}"))
    img = image_lattice(sq)
    checks.append(Check("R embeds in R1 x R2", img.rank == sq.R.rank, f"rank {img.rank}"))
    fib = fibre_product(sq)
    contained = lin.lattice_contains(fib, img)
    idx = lin.lattice_index(fib, img) if contained and img.rank == fib.rank else lin.INFINITE
    checks.append(Check("R is the fibre product", contained and idx == 1, f"index {idx}"))
    if sq.R0.modulus:
        total = lin.lattice_index(lin.full_lattice(fib.ncols), fib)
        checks.append(Check("fibre product index equals |R0|", total == sq.R0.size(),
                            f"index {total}"))
    for c in sq.extra.get("checks", ()):
        checks.append(c)
    return SquareReport(tuple(checks))


def _x_poly(ring: RingPresentation, x: int, coeffs: Sequence[int]) -> Vec:
    out = ring.zero()
    xe = ring.basis(x)
    for d, c in enumerate(coeffs):
        if c:
            out = ring.add(out, ring.scale(c, ring.power(xe, d)))
    return out


def lambda_relations():
    def six(r, g):
        return r.add(r.power(g[0], 6), r.unity)

    def ysq(r, g):
        return r.sub(r.mul(g[1], g[1]), r.power(g[0], 6))

    def conj(r, g):
        x, y = g
        return r.sub(r.mul(y, x), r.mul(r.power(x, 11), y))

    return [("x^6+1", six), ("y^2-x^6", ysq), ("yx-x^-1y", conj)]


@functools.cache
def q24_square() -> MilnorSquare:
    """The square for ZQ24/(x^6+1) over H_Z and Z[zeta12, j]."""
    g = grp.quaternion(24)
    zg = gring.group_ring(g)
    x, y = g.generators["x"], g.generators["y"]
    extra_checks = []

    lam_q = quotient_ring(zg, [_x_poly(zg, x, (1, 0, 0, 0, 0, 0, 1))], "Lambda")
    lam = lam_q.ring
    lam.extra["relations"] = lambda_relations()
    lam.extra["lift"] = lam_q
    hz, zz, hf = quat.lipschitz_order(), quat.cyclotomic_quat_order(), quat.quaternion_algebra(3)

    i1 = quat.validated_hom(lam, hz, [hz.basis(1), hz.basis(2)], "i1")
    i2 = quat.validated_hom(lam, zz, [zz.basis(1), zz.basis(4)], "i2")
    j1 = quat.j1()
    j2 = quat.j2()

    # the corner isomorphisms phi1, phi2 through the two quotients of ZQ24
    q1 = quotient_ring(zg, [_x_poly(zg, x, (1, 0, 1))], "ZQ24/(x^2+1)")
    q2 = quotient_ring(zg, [_x_poly(zg, x, (1, 0, -1, 0, 1))], "ZQ24/(x^4-x^2+1)")
    for label, src, qr, imgs in (
            ("phi1", hz, q1, None), ("phi2", zz, q2, None)):
        r = qr.ring
        gx, gy = qr.projection.apply(zg.basis(x)), qr.projection.apply(zg.basis(y))
        try:
            phi = quat.validated_hom(src, r, [gx, gy], label)
            extra_checks.append(Check(f"{label} is a ring isomorphism", phi.is_bijective(),
                                      f"{src.name} -> {r.name}, rank {r.rank}"))
        except RingError as exc:
            extra_checks.append(Check(f"{label} is a ring isomorphism", False, str(exc)))
    # I + J = (3, x^2 + 1) for I = (x^2+1), J = (x^4-x^2+1) in ZQ24
    ideal_i = two_sided_ideal(zg, [_x_poly(zg, x, (1, 0, 1))])
    ideal_j = two_sided_ideal(zg, [_x_poly(zg, x, (1, 0, -1, 0, 1))])
    target = two_sided_ideal(zg, [_x_poly(zg, x, (3,)), _x_poly(zg, x, (1, 0, 1))])
    extra_checks.append(Check("I + J = (3, x^2+1)", lin.lattice_sum(ideal_i, ideal_j) == target))
    extra_checks.append(Check("rank Lambda = 12", lam.rank == 12, f"rank {lam.rank}"))

    sq = MilnorSquare(lam, hz, zz, hf, i1, i2, j1, j2,
                      {"checks": tuple(extra_checks), "group": g, "lift": lam_q})
    report = validate_square(sq)
    if not report.ok:
        raise SquareError(f"Q24 square failed: {[c.name for c in report.failures()]}")
    return sq


# --------------------------------------------------------------------------
# patching


@dataclass(frozen=True, eq=False)
class PatchedModule:
    square: MilnorSquare
    unit: Vec
    lattice: GLattice

    def checks(self) -> list[Check]:
        sq = self.square
        lat = self.lattice
        idx = lin.lattice_index(lin.full_lattice(lat.ambient_rank), lat.basis)
        r1 = sq.R1.rank
        cond = True
        for row in lat.basis.rows:
            xv, yv = row[:r1], row[r1:]
            lhs = sq.R0.mul(sq.j1.apply(xv), self.unit)
            if lhs != sq.j2.apply(yv):
                cond = False
                break
        out = [Check("patching condition on basis rows", cond),
               Check("closed under R", lat.is_closed()),
               Check("rank equals rank R", lat.rank == sq.R.rank, f"rank {lat.rank}")]
        if sq.R0.modulus:
            out.append(Check("index equals |R0|", idx == sq.R0.size(), f"index {idx}"))
        return out


@functools.cache
def _ambient_data(sq: MilnorSquare):
    r1, r2 = sq.R1, sq.R2
    n1, n2 = r1.rank, r2.rank

    def block(a, b):
        out = lin.zeros(n1 + n2, n1 + n2)
        for i in range(n1):
            out[i][:n1] = a[i]
        for i in range(n2):
            out[n1 + i][n1:] = b[i]
        return lin.freeze(out)

    zero1, zero2 = lin.zeros(n1, n1), lin.zeros(n2, n2)
    action = tuple(block(r1.left_matrix(sq.i1.matrix[k]), r2.left_matrix(sq.i2.matrix[k]))
                   for k in range(sq.R.rank))
    endo = tuple([block(r1.right_matrix(r1.basis(t)), zero2) for t in range(n1)]
                 + [block(zero1, r2.right_matrix(r2.basis(t))) for t in range(n2)])
    return action, endo, block


def patch_module(sq: MilnorSquare, u: Sequence[int]) -> PatchedModule:
    u = sq.R0.reduce(u)
    if not sq.R0.is_unit(u):
        raise ValueError(f"{sq.R0.label(u)} is not a unit of {sq.R0.name}")
    action, endo, _ = _ambient_data(sq)
    lat = GLattice(sq.R, _patch_lattice(sq, u), action, sq.R.gens, endo)
    return PatchedModule(sq, u, lat)


def ambient_map(sq: MilnorSquare, f1: RingHom, f2: RingHom) -> lin.Matrix:
    """Block matrix of (f1, f2) on R1 x R2."""
    _, _, block = _ambient_data(sq)
    return [list(r) for r in block([list(r) for r in f1.matrix], [list(r) for r in f2.matrix])]


# --------------------------------------------------------------------------
# double cosets


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self) -> list[list]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return sorted((sorted(v) for v in out.values()), key=lambda c: c[0])


@dataclass(frozen=True)
class DoubleCosetPartition:
    ambient: UnitSubgroup
    left: UnitSubgroup
    right: UnitSubgroup
    classes: tuple[tuple[Vec, ...], ...]

    @property
    def representatives(self) -> tuple[Vec, ...]:
        return tuple(c[0] for c in self.classes)

    @functools.cached_property
    def _lookup(self) -> dict:
        return {u: n for n, c in enumerate(self.classes) for u in c}

    def class_of(self, u: Sequence[int]) -> int:
        return self._lookup[self.ambient.ring.reduce(u)]

    def __len__(self):
        return len(self.classes)

    def is_valid(self) -> bool:
        ring = self.ambient.ring
        seen = set()
        for n, c in enumerate(self.classes):
            cs = set(c)
            if cs & seen:
                return False
            seen |= cs
            for u in c:
                if any(ring.mul(a, u) not in cs for a in self.left):
                    return False
                if any(ring.mul(u, b) not in cs for b in self.right):
                    return False
        return seen == set(self.ambient.elements)


def double_cosets(ambient: UnitSubgroup, left: UnitSubgroup, right: UnitSubgroup) -> DoubleCosetPartition:
    """The partition of ``ambient`` into classes ``left * u * right``."""
    for name, sub in (("left", left), ("right", right)):
        if not sub.is_subgroup_of(ambient) or not sub.is_subgroup():
            raise ValueError(f"{name} image is not a subgroup of the ambient unit group")
    ring = ambient.ring
    uf = UnionFind(ambient.elements)
    for u in ambient.elements:
        for a in left:
            uf.union(u, ring.mul(a, u))
        for b in right:
            uf.union(u, ring.mul(u, b))
    classes = tuple(tuple(c) for c in uf.groups())
    return DoubleCosetPartition(ambient, left, right, classes)


# --------------------------------------------------------------------------
# the unit groups of the Q24 square


RIGHT_SUBGROUPS = ("enlarged", "minimal", "upper")


@functools.cache
def q24_unit_data(right: str = "enlarged"):
    """Unit groups for the Q24 classification.

    ``right`` picks the image of Z[zeta12, j]^x in H_F3^x:
    ``"enlarged"`` is the closure of j2(zeta), j2(j), j2(1 - zeta);
    ``"minimal"`` drops 1 - zeta; ``"upper"`` is the largest subgroup the
    image can be, namely F3[i]^x together with j (zeta maps into F3[i]).
    """
    sq = q24_square()
    hf, hz, zz = sq.R0, sq.R1, sq.R2
    u0 = quat.enumerate_units(hf)
    hz_units = quat.order_unit_search(hz, 1)
    left = quat.image_subgroup(sq.j1, hz_units.units)
    zeta, j = zz.basis(1), zz.basis(4)
    one_minus = zz.sub(zz.unity, zeta)
    if right == "enlarged":
        gens = [zeta, j, one_minus]
        right_g = quat.image_subgroup(sq.j2, gens)
    elif right == "minimal":
        gens = [zeta, j]
        right_g = quat.image_subgroup(sq.j2, gens)
    elif right == "upper":
        gens = None
        f9 = [e for e in hf.elements() if e[2] == 0 and e[3] == 0 and any(e)]
        right_g = quat.subgroup_closure(hf, f9 + [hf.basis(2)])
    else:
        raise ValueError(f"right subgroup must be one of {RIGHT_SUBGROUPS}")
    return u0, left, right_g, gens


def q24_partition(right: str = "enlarged") -> DoubleCosetPartition:
    u0, left, right_g, _ = q24_unit_data(right)
    return double_cosets(u0, left, right_g)


# --------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class SquareAutomorphism:
    params: tuple[int, int]
    alpha: RingHom
    alpha1: RingHom
    alpha2: RingHom
    alpha0: RingHom
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def closed_form_alpha0(a: int, b: int) -> RingHom:
    """The published closed formula for alpha0 on H_F3.

    It sends i to (-1)^a0 i with a = 2 a0 + 1, and j to (-1)^b0 j when
    b = 2 b0 + 1 or to (-1)^b0 k when b = 2 b0.  Kept for comparison only;
    :func:`extend_automorphism` derives alpha0 from the cube instead.
    """
    hf = quat.quaternion_algebra(3)
    a0 = (a - 1) // 2
    si = -1 if a0 % 2 else 1
    if b % 2:
        b0 = (b - 1) // 2
        jimg = hf.scale(-1 if b0 % 2 else 1, hf.basis(2))
    else:
        b0 = b // 2
        jimg = hf.scale(-1 if b0 % 2 else 1, hf.basis(3))
    return hom_from_images(hf, hf, [hf.scale(si, hf.basis(1)), jimg], "alpha0-closed")


def extend_automorphism(sq: MilnorSquare, a: int, b: int) -> SquareAutomorphism:
    """Extend theta_{a,b} (x -> x^a, y -> x^b y) to all four corners.

    alpha is induced on Lambda; alpha1, alpha2 and alpha0 are the maps forced
    by the square (i -> i^a, j -> i^b j and zeta -> zeta^a, j -> zeta^b j),
    each validated as a ring automorphism; the four faces are then checked.
    """
    lam, hz, zz, hf = sq.R, sq.R1, sq.R2, sq.R0
    lx, ly = lam.basis(lam.gens[0]), lam.basis(lam.gens[1])
    alpha = hom_from_images(lam, lam, [lam.power(lx, a), lam.mul(lam.power(lx, b), ly)], "alpha")
    i, jj = hz.basis(1), hz.basis(2)
    alpha1 = quat.validated_hom(hz, hz, [hz.power(i, a), hz.mul(hz.power(i, b), jj)], "alpha1")
    z, jz = zz.basis(1), zz.basis(4)
    alpha2 = quat.validated_hom(zz, zz, [zz.power(z, a), zz.mul(zz.power(z, b), jz)], "alpha2")
    fi, fj = hf.basis(1), hf.basis(2)
    alpha0 = quat.validated_hom(hf, hf, [hf.power(fi, a), hf.mul(hf.power(fi, b), fj)], "alpha0")
    checks = [
        Check("alpha bijective", alpha.is_bijective()),
        Check("alpha1 bijective", alpha1.is_bijective()),
        Check("alpha2 bijective", alpha2.is_bijective()),
        Check("alpha0 bijective", alpha0.is_bijective()),
        Check("alpha1 o i1 = i1 o alpha", alpha1.compose(sq.i1).same_as(sq.i1.compose(alpha))),
        Check("alpha2 o i2 = i2 o alpha", alpha2.compose(sq.i2).same_as(sq.i2.compose(alpha))),
        Check("alpha0 o j1 = j1 o alpha1", alpha0.compose(sq.j1).same_as(sq.j1.compose(alpha1))),
        Check("alpha0 o j2 = j2 o alpha2", alpha0.compose(sq.j2).same_as(sq.j2.compose(alpha2))),
    ]
    return SquareAutomorphism((a % 12, b % 12), alpha, alpha1, alpha2, alpha0, tuple(checks))


def q24_automorphisms(sq: MilnorSquare | None = None) -> list[SquareAutomorphism]:
    sq = sq or q24_square()
    g = sq.extra["group"]
    out = []
    for theta in grp.automorphism_group(g):
        a, b = theta.params
        ext = extend_automorphism(sq, a, b)
        if not ext.ok:
            raise SquareError(f"cube check failed for theta_{a},{b}: "
                              f"{[c.name for c in ext.checks if not c.ok]}")
        out.append(ext)
    return out


@dataclass(frozen=True)
class OrbitPartition:
    orbits: tuple[tuple[int, ...], ...]
    witnesses: tuple[tuple[tuple[int, int], int, int], ...]  # (params, from class, to class)
    action: dict  # params -> tuple mapping class index to class index
    well_defined: bool

    def __len__(self):
        return len(self.orbits)


def class_action(partition: DoubleCosetPartition, auto: SquareAutomorphism) -> tuple[tuple[int, ...], bool]:
    """The permutation of classes induced by u -> alpha0^-1(u), and whether it is well defined."""
    inv = inverse_hom(auto.alpha0)
    images = []
    well = True
    for c in partition.classes:
        targets = set()
        for u in c:
            v = inv.apply(u)
            if v not in partition.ambient:
                raise SquareError("alpha0^-1 moved a unit outside the unit group")
            targets.add(partition.class_of(v))
        if len(targets) != 1:
            well = False
        images.append(min(targets))
    return tuple(images), well


def aut_orbits(partition: DoubleCosetPartition, autos: Sequence[SquareAutomorphism]) -> OrbitPartition:
    n = len(partition.classes)
    uf = UnionFind(range(n))
    witnesses = []
    action = {}
    well = True
    for auto in autos:
        perm, ok = class_action(partition, auto)
        well = well and ok
        action[auto.params] = perm
        for src, dst in enumerate(perm):
            if uf.union(src, dst):
                witnesses.append((auto.params, src, dst))
    orbits = tuple(tuple(o) for o in uf.groups())
    return OrbitPartition(orbits, tuple(witnesses), action, well)


def twisted_patch(pm: PatchedModule, auto: SquareAutomorphism) -> GLattice:
    """M(u)_alpha: the same lattice with Lambda acting through alpha."""
    return gring.twist(pm.lattice, auto.alpha)


def twist_transport(sq: MilnorSquare, auto: SquareAutomorphism) -> list[lin.Matrix]:
    """Ambient maps M_alpha -> M: (alpha1^-1, alpha2^-1) followed by right multiplications.

    These span every Lambda-linear ambient map from the twisted ambient to the
    untwisted one, so they form a natural search space for the certificate
    M(u)_alpha = M(alpha0^-1(u)).
    """
    base = ambient_map(sq, inverse_hom(auto.alpha1), inverse_hom(auto.alpha2))
    _, endo, _ = _ambient_data(sq)
    return [lin.matmul(base, [list(r) for r in e]) for e in endo]


# --------------------------------------------------------------------------
# extension of scalars


@dataclass(frozen=True)
class ExtensionResult:
    module: GLattice
    torsion: tuple[int, ...]
    free_rank: int
    injective: bool  # M / KM maps isomorphically onto f(M)


def direct_sum(a: GLattice, b: GLattice) -> GLattice:
    if a.ring is not b.ring:
        raise lin.RingMismatchError("direct sum of modules over different rings")
    na, nb = a.ambient_rank, b.ambient_rank

    def block(x, y):
        out = lin.zeros(na + nb, na + nb)
        for i in range(na):
            out[i][:na] = x[i]
        for i in range(nb):
            out[na + i][na:] = y[i]
        return lin.freeze(out)

    action = tuple(block(x, y) for x, y in zip(a.action, b.action))
    rows = [list(r) + [0] * nb for r in a.basis.rows] + [[0] * na + list(r) for r in b.basis.rows]
    return GLattice(a.ring, lin.span(rows, na + nb), action, a.gens)


def free_module(ring: RingPresentation, copies: int) -> GLattice:
    reg = gring.regular_module(ring)
    out = reg
    for _ in range(copies - 1):
        out = direct_sum(out, reg)
    return out


def ext_scalars(f: RingHom, m: GLattice) -> ExtensionResult:
    """S (x)_R M for a surjection f: R -> S, computed as M / KM with K = ker f.

    ``m`` must sit inside a free module R^n with R acting by left
    multiplication.  The quotient is compared with the image f(M) in S^n: if
    the kernel of M -> f(M) is exactly KM the result is f(M) as an S-lattice.
    """
    if m.ring is not f.source:
        raise lin.RingMismatchError("module is not over the source of f")
    if not f.is_surjective():
        raise ValueError("ext_scalars is implemented for surjective ring maps")
    r, s = f.source, f.target
    if m.ambient_rank % r.rank:
        raise lin.DimensionError("module does not sit in a free module")
    copies = m.ambient_rank // r.rank
    kernel = f.kernel()
    km = [lin.vecmat(row, m.element_matrix(k)) for k in kernel.rows for row in m.basis.rows]
    km_lat = lin.span(km, m.ambient_rank)
    # M / KM in coordinates of M
    coords = [lin.coordinates(m.basis, v) for v in km_lat.rows]
    diag = lin.snf(coords)[0] if coords else []
    torsion = tuple(d for d in diag if d > 1)
    free_rank = m.rank - sum(1 for d in diag if d)
    # f(M) inside S^copies
    big = lin.zeros(m.ambient_rank, copies * s.rank)
    for c in range(copies):
        for i in range(r.rank):
            big[c * r.rank + i][c * s.rank:(c + 1) * s.rank] = f.matrix[i]
    images = [lin.vecmat(row, big) for row in m.basis.rows]
    image = lin.span(images, copies * s.rank)
    # kernel of M -> f(M), as vectors of the ambient
    kc = lin.left_kernel(images, m.rank)
    kvecs = [lin.vecmat(c, m.basis.matrix) for c in kc.rows]
    injective = lin.span(kvecs, m.ambient_rank) == km_lat
    target = free_module(s, copies)
    return ExtensionResult(target.with_basis(image), torsion, free_rank, injective)
