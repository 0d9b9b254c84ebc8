"""Integral group rings, Swan modules and isomorphism certificates.

Left ideals of ``ZG`` are full- or partial-rank lattices in ``Z^|G|`` (basis
indexed by group elements) with ``G`` acting by left multiplication.  Every
isomorphism claim is backed by an explicit matrix found by
:func:`iso_search` and re-verified before it is returned.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
import math
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from . import grp, lin
from .grp import FiniteGroup, GroupAutomorphism
from .lin import GLattice, HnfBasis
from .rings import RingHom, RingPresentation


class SwanError(ValueError):
    pass


class UnsupportedPsi(ValueError):
    pass


class IsoRankError(lin.DimensionError):
    """Modules of different Z-rank are never isomorphic."""


DEFAULT_HEIGHT = 3
DEFAULT_BUDGET = 500_000


# --------------------------------------------------------------------------
# the group ring as a presented ring


def _group_words(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    if g.family == "cyclic":
        return tuple((0,) * a for a in range(g.order))
    if g.family in ("dihedral", "quaternion"):
        return tuple((0,) * (h // 2) + (1,) * (h % 2) for h in range(g.order))
    gens = list(g.generators.values())
    words = {g.identity: ()}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for h in frontier:
            for pos, s in enumerate(gens):
                k = g.mul(h, s)
                if k not in words:
                    words[k] = words[h] + (pos,)
                    nxt.append(k)
        frontier = nxt
    return tuple(words[h] for h in range(g.order))


@functools.cache
def group_ring(g: FiniteGroup, modulus: int = 0) -> RingPresentation:
    n = g.order
    table = tuple(tuple(tuple(int(t == g.mul(a, b)) for t in range(n)) for b in range(n))
                  for a in range(n))
    unity = tuple(int(t == g.identity) for t in range(n))
    base = "Z" if modulus == 0 else f"F{modulus}"
    ring = RingPresentation(f"{base}{g.tag}", modulus, table, unity, g.labels,
                            tuple(g.generators.values()), _group_words(g))
    ring.extra["group"] = g
    ring.extra["linear_characters"] = sign_characters(g)
    return ring


def sign_characters(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """All homomorphisms G -> {+1, -1}, as value tuples indexed by element."""
    words = _group_words(g)
    ngens = len(g.generators)
    out = []
    for signs in itertools.product((1, -1), repeat=ngens):
        values = []
        for w in words:
            v = 1
            for pos in w:
                v *= signs[pos]
            values.append(v)
        if all(values[g.mul(a, b)] == values[a] * values[b]
               for a in range(g.order) for b in range(g.order)):
            out.append(tuple(values))
    return tuple(out)


@dataclass(frozen=True)
class GroupRingElement:
    group: FiniteGroup
    coeffs: tuple[int, ...]
    modulus: int = 0

    def __post_init__(self):
        if len(self.coeffs) != self.group.order:
            raise lin.DimensionError("coefficient list does not match the group order")
        if self.modulus:
            object.__setattr__(self, "coeffs", tuple(c % self.modulus for c in self.coeffs))

    def _check(self, other: "GroupRingElement"):
        if other.group is not self.group or other.modulus != self.modulus:
            raise lin.RingMismatchError("elements of different group rings")

    def __add__(self, other):
        self._check(other)
        return GroupRingElement(self.group, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                                self.modulus)

    def __sub__(self, other):
        self._check(other)
        return GroupRingElement(self.group, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
                                self.modulus)

    def __neg__(self):
        return GroupRingElement(self.group, tuple(-a for a in self.coeffs), self.modulus)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.group, tuple(other * a for a in self.coeffs), self.modulus)
        self._check(other)
        return grelem_mul(self, other)

    __rmul__ = __mul__

    def involution(self) -> "GroupRingElement":
        return involution(self)

    def augmentation(self) -> int:
        return augmentation(self)


def element(g: FiniteGroup, terms: dict[int, int] | Sequence[int], modulus: int = 0) -> GroupRingElement:
    if isinstance(terms, dict):
        coeffs = [0] * g.order
        for h, c in terms.items():
            coeffs[h] += c
        return GroupRingElement(g, tuple(coeffs), modulus)
    return GroupRingElement(g, tuple(terms), modulus)


def norm_element(g: FiniteGroup) -> GroupRingElement:
    return GroupRingElement(g, (1,) * g.order)


def grelem_mul(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    a._check(b)
    g = a.group
    out = [0] * g.order
    for h, ca in enumerate(a.coeffs):
        if ca:
            row = g.table[h]
            for k, cb in enumerate(b.coeffs):
                if cb:
                    out[row[k]] += ca * cb
    return GroupRingElement(g, tuple(out), a.modulus)


def grelem_add(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    return a + b


def involution(a: GroupRingElement) -> GroupRingElement:
    g = a.group
    out = [0] * g.order
    for h, c in enumerate(a.coeffs):
        out[g.inverse[h]] += c
    return GroupRingElement(g, tuple(out), a.modulus)


def augmentation(a: GroupRingElement) -> int:
    s = sum(a.coeffs)
    return s % a.modulus if a.modulus else s


# --------------------------------------------------------------------------
# ideals as lattices


def _regular_action(ring: RingPresentation):
    action = tuple(lin.freeze(ring.left_matrix(ring.basis(k))) for k in range(ring.rank))
    endo = tuple(lin.freeze(ring.right_matrix(ring.basis(k))) for k in range(ring.rank))
    return action, endo


@functools.cache
def _regular(ring: RingPresentation) -> GLattice:
    action, endo = _regular_action(ring)
    return GLattice(ring, lin.full_lattice(ring.rank), action, ring.gens, endo)


def regular_module(ring_or_group: RingPresentation | FiniteGroup) -> GLattice:
    """The ring as a left module over itself."""
    if isinstance(ring_or_group, FiniteGroup):
        ring_or_group = group_ring(ring_or_group)
    return _regular(ring_or_group)


def left_ideal(ring_or_group, generators: Sequence[Sequence[int]]) -> GLattice:
    """Left ideal generated by the given ring elements."""
    reg = regular_module(ring_or_group)
    ring = reg.ring
    vectors = [ring.mul(ring.basis(k), gen) for gen in generators for k in range(ring.rank)]
    return reg.with_basis(lin.span(vectors, ring.rank))


def augmentation_ideal(g: FiniteGroup) -> GLattice:
    reg = regular_module(g)
    rows = [[int(t == h) - int(t == g.identity) for t in range(g.order)]
            for h in range(g.order) if h != g.identity]
    return reg.with_basis(lin.span(rows, g.order))


def normalise_unit(g: FiniteGroup, r: int) -> int:
    n = g.order
    rr = r % n or n
    if gcd(rr, n) != 1:
        raise SwanError(f"r = {r} is not coprime to |G| = {n}; the ideal is not projective")
    return rr


def swan_module(g: FiniteGroup, r: int, normalise: bool = True) -> GLattice:
    """The Swan module (I, r) = I + r ZG.

    By default r is first replaced by its least positive residue mod |G|, so
    the lattice depends only on that residue.  With ``normalise=False`` the
    literal ideal I + r ZG is built (index r in ZG); its isomorphism class
    still depends only on r mod |G|.
    """
    if normalise:
        r = normalise_unit(g, r)
    elif r <= 0 or gcd(r, g.order) != 1:
        raise SwanError(f"r = {r} must be positive and coprime to |G| = {g.order}")
    aug = augmentation_ideal(g)
    rows = list(aug.basis.rows) + [[r * int(t == h) for t in range(g.order)] for h in range(g.order)]
    return aug.with_basis(lin.span(rows, g.order))


def norm_swan_module(g: FiniteGroup, r: int) -> GLattice:
    """The ideal (N, r) generated by the norm element and r."""
    r = normalise_unit(g, r)
    reg = regular_module(g)
    rows = [[1] * g.order] + [[r * int(t == h) for t in range(g.order)] for h in range(g.order)]
    return reg.with_basis(lin.span(rows, g.order))


def ideal_product(a: GLattice, b: GLattice) -> GLattice:
    if a.ring is not b.ring:
        raise lin.RingMismatchError("ideals of different rings")
    ring = a.ring
    if a.ambient_rank != ring.rank:
        raise lin.DimensionError("ideal_product needs lattices inside the ring itself")
    vectors = [ring.mul(x, y) for x in a.basis.rows for y in b.basis.rows]
    return a.with_basis(lin.span(vectors, ring.rank))


def twist(m: GLattice, theta: GroupAutomorphism | RingHom) -> GLattice:
    """The module M_theta: same lattice, with g acting as theta(g) did before.

    ``theta`` may be a group automorphism (for group-ring modules) or a ring
    automorphism of ``m.ring`` given as a :class:`RingHom`.
    """
    ring = m.ring
    if isinstance(theta, GroupAutomorphism):
        if len(theta.perm) != len(m.action):
            raise lin.RingMismatchError("automorphism of a different group")
        action = tuple(m.action[theta.perm[k]] for k in range(len(m.action)))
    else:
        if theta.source is not ring or theta.target is not ring:
            raise lin.RingMismatchError("ring automorphism of a different ring")
        action = tuple(lin.freeze(m.element_matrix(theta.matrix[k])) for k in range(ring.rank))
    return GLattice(ring, m.basis, action, m.gens, m.endo)


def permutation_matrix(theta: GroupAutomorphism) -> lin.Matrix:
    """Ambient matrix of the Z-linear map sending g to theta(g)."""
    n = len(theta.perm)
    return [[int(theta.perm[i] == j) for j in range(n)] for i in range(n)]


# --------------------------------------------------------------------------
# isomorphism certificates


@dataclass(frozen=True)
class IsoCertificate:
    """A verified isomorphism, written in lattice coordinates.

    Row ``v`` of the source basis maps to ``map_matrix[v]`` in target basis
    coordinates.
    """

    map_matrix: tuple[tuple[int, ...], ...]
    verified: bool
    direction: str = "forward"
    coefficients: tuple[int, ...] = ()
    candidates: int = 0
    found = True


@dataclass(frozen=True)
class IsoUnknown:
    """No certificate within the search bound; this is not a proof of anything."""

    height: int
    radius: int
    candidates: int
    exhausted: bool
    found = False


def verify_certificate(source: GLattice, target: GLattice, x: Sequence[Sequence[int]]) -> bool:
    if source.rank != target.rank or len(x) != source.rank:
        return False
    if abs(lin.det(x)) != 1:
        return False
    for g in source.gens:
        ps = source.lattice_action(g)
        pt = target.lattice_action(g)
        if lin.matmul(ps, x) != lin.matmul(x, pt):
            return False
    return True


def _adjugate(m: lin.Matrix) -> tuple[lin.Matrix, int]:
    d = lin.det(m)
    inv = lin.inverse(m)
    return [[int(q * d) for q in row] for row in inv], d


def ambient_maps(source: GLattice, target: GLattice) -> list[lin.Matrix]:
    """A spanning set of ambient maps commuting with both actions."""
    if (source.endo and source.action == target.action
            and source.ambient_rank == target.ambient_rank):
        return [[list(r) for r in e] for e in source.endo]
    hl = lin.hom_lattice(source.full(), target.full())
    n, k = source.ambient_rank, target.ambient_rank
    return [lin.unflatten(v, n, k) for v in hl.rows]


def _character_constraint(source: GLattice, target: GLattice):
    """Values forced on linear characters by a right multiplication source -> target.

    If lambda maps source onto target by right multiplication and chi is a
    ring map to Z, then chi(source) * chi(lambda) = chi(target), so
    |chi(lambda)| is the ratio of the two image ideals.  Applies only when the
    ambient maps are the right multiplications by the ring basis.
    """
    ring = source.ring
    chars = getattr(ring, "extra", {}).get("linear_characters")
    if not chars or source.ambient_rank != ring.rank or source.endo != regular_module(ring).endo:
        return None
    ratios = []
    for chi in chars:
        ma = math.gcd(*[sum(v * c for v, c in zip(row, chi)) for row in source.basis.rows])
        mb = math.gcd(*[sum(v * c for v, c in zip(row, chi)) for row in target.basis.rows])
        if ma == 0 or mb % ma:
            return "impossible"
        ratios.append(mb // ma)
    targets = set()
    for signs in itertools.product((1, -1), repeat=len(chars)):
        targets.add(tuple(sg * t for sg, t in zip(signs, ratios)))
    by_sig: dict[tuple[int, ...], list[int]] = {}
    for j in range(ring.rank):
        by_sig.setdefault(tuple(chi[j] for chi in chars), []).append(j)
    sigs = sorted(by_sig)
    return [by_sig[sg] for sg in sigs], sigs, targets


def _search_space(source: GLattice, target: GLattice, kind: str, maps=None):
    """Integer matrices T_j and a denominator D: candidate homs are (sum c_j T_j) / D.

    ``kind == "ambient"`` uses ambient maps (natural right multiplications
    when available), which keeps natural isomorphisms at tiny height;
    ``kind == "hom"`` uses the HNF basis of the full hom lattice, which also
    reaches maps that do not extend integrally to the ambient.
    """
    if kind == "ambient":
        if maps is None:
            maps = ambient_maps(source, target)
        s_rows = source.basis.matrix
        t_rows = target.basis.matrix
        adj, d = _adjugate(t_rows)
        ts = [lin.matmul(lin.matmul(s_rows, y), adj) for y in maps]
        return ts, d
    hl = lin.hom_lattice(source, target)
    return [lin.unflatten(v, source.rank, target.rank) for v in hl.rows], 1


def _shell(k: int, s: int, h: int) -> Iterator[tuple[int, ...]]:
    """Vectors in Z^k with L1 norm s and entries bounded by h, in lexicographic order."""
    if k == 0:
        if s == 0:
            yield ()
        return
    lo = max(-h, -s)
    for c in range(lo, min(h, s) + 1):
        rest = s - abs(c)
        if rest > h * (k - 1):
            continue
        for tail in _shell(k - 1, rest, h):
            yield (c,) + tail


def _class_vectors(n: int, total: int, l1: int, h: int) -> Iterator[tuple[int, ...]]:
    """Vectors in Z^n with the given sum and L1 norm, entries bounded by h."""
    if n == 0:
        if total == 0 and l1 == 0:
            yield ()
        return
    for c in range(-min(h, l1), min(h, l1) + 1):
        rest_l1 = l1 - abs(c)
        rest_total = total - c
        if abs(rest_total) > rest_l1 or rest_l1 > h * (n - 1) or (rest_l1 - rest_total) % 2:
            continue
        for tail in _class_vectors(n - 1, rest_total, rest_l1, h):
            yield (c,) + tail


def _constrained_shell(classes, sigs, targets, k: int, s: int, h: int) -> Iterator[tuple[int, ...]]:
    """Shell vectors whose character sums land in ``targets``.

    ``classes`` groups coordinates with equal character signature ``sigs[c]``;
    the character values of a vector depend only on its per-class sums.
    """
    nc = len(classes)

    def plans(c, budget, acc):
        if c == nc:
            if budget == 0:
                value = tuple(sum(sc * sig[t] for (sc, _), sig in zip(acc, sigs))
                              for t in range(len(sigs[0])))
                if value in targets:
                    yield list(acc)
            return
        size = len(classes[c])
        for l1 in range(0, min(budget, h * size) + 1):
            for sc in range(-l1, l1 + 1, 2):
                acc.append((sc, l1))
                yield from plans(c + 1, budget - l1, acc)
                acc.pop()

    for plan in plans(0, s, []):
        parts = [list(_class_vectors(len(cl), sc, l1, h)) for cl, (sc, l1) in zip(classes, plan)]
        for combo in itertools.product(*parts):
            v = [0] * k
            for cl, part in zip(classes, combo):
                for idx, x in zip(cl, part):
                    v[idx] = x
            yield tuple(v)


_DET_PRIME = 2147483629


def _powmod_vec(a: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(a)
    base = a % p
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def _batched_det_mod(m: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of square int64 matrices with entries in [0, p)."""
    m = m.copy()
    b, n, _ = m.shape
    det = np.ones(b, dtype=np.int64)
    idx = np.arange(b)
    for c in range(n):
        nz = m[:, c:, c] != 0
        has = nz.any(axis=1)
        piv = nz.argmax(axis=1) + c
        swap = piv != c
        if swap.any():
            rc = m[idx, c].copy()
            rp = m[idx, piv].copy()
            m[idx, c] = rp
            m[idx, piv] = rc
            det[swap] = (p - det[swap]) % p
        pv = m[:, c, c]
        det = det * pv % p
        det[~has] = 0
        if c + 1 == n:
            break
        inv = _powmod_vec(np.where(has, pv, 1), p - 2, p)
        f = m[:, c + 1:, c] * inv[:, None] % p
        m[:, c + 1:, c:] = (m[:, c + 1:, c:] - f[:, :, None] * m[:, None, c, c:] % p) % p
    return det


class _Searcher:
    def __init__(self, source: GLattice, target: GLattice, kind: str, maps=None):
        self.source, self.target = source, target
        self.ts, self.d = _search_space(source, target, kind, maps)
        self.r = source.rank
        k = len(self.ts)
        self.k = k
        flat = [[x for row in t for x in row] for t in self.ts]
        self.flat = flat
        ad = abs(self.d)
        self.mod_d = np.array([[x % ad for x in row] for row in flat], dtype=np.int64) if ad > 1 else None
        self.mod_p = np.array([[x % _DET_PRIME for x in row] for row in flat], dtype=np.int64).reshape(k, self.r * self.r)
        target_det = pow(self.d % _DET_PRIME, self.r, _DET_PRIME)
        self.targets = {target_det, (-target_det) % _DET_PRIME}
        self.constraint = _character_constraint(source, target) if kind == "ambient" and maps is None else None
        self.empty = self.constraint == "impossible"

    def shell(self, s: int, h: int) -> Iterator[tuple[int, ...]]:
        if self.empty:
            return iter(())
        if self.constraint is None:
            return _shell(self.k, s, h)
        classes, sigs, targets = self.constraint
        return _constrained_shell(classes, sigs, targets, self.k, s, h)

    def test(self, batch: list[tuple[int, ...]]):
        if not batch or self.k == 0:
            return None
        c = np.array(batch, dtype=np.int64)
        keep = np.arange(len(batch))
        if self.mod_d is not None:
            ad = abs(self.d)
            ok = ~((c @ self.mod_d) % ad).any(axis=1)
            keep = keep[ok]
            if not len(keep):
                return None
        mats = ((c[keep] @ self.mod_p) % _DET_PRIME).reshape(len(keep), self.r, self.r)
        dets = _batched_det_mod(mats, _DET_PRIME)
        hits = keep[np.isin(dets, list(self.targets))]
        for h in hits:
            coeffs = batch[int(h)]
            x = self.combine(coeffs)
            if x is not None and abs(lin.det(x)) == 1:
                return coeffs, x
        return None

    def combine(self, coeffs):
        r = self.r
        tot = [0] * (r * r)
        for c, row in zip(coeffs, self.flat):
            if c:
                for i, v in enumerate(row):
                    if v:
                        tot[i] += c * v
        if any(v % self.d for v in tot):
            return None
        return lin.unflatten([v // self.d for v in tot], r, r)


def iso_search(a: GLattice, b: GLattice, height: int = DEFAULT_HEIGHT,
               budget: int = DEFAULT_BUDGET, maps=None) -> IsoCertificate | IsoUnknown:
    """Look for a module isomorphism a -> b among small combinations of homs.

    Candidates are integer combinations of spanning sets of maps with
    coefficients bounded by ``height``, enumerated by increasing L1 norm and
    in a fixed order within each norm.  Ambient maps (full-rank lattices
    only) are tried first, then the hom-lattice basis, each in both
    directions.  Optional ``maps`` replaces the default ambient maps a -> b.  Returns a verified :class:`IsoCertificate` or
    :class:`IsoUnknown`.
    """
    if a.ring is not b.ring:
        raise lin.RingMismatchError("modules over different rings")
    if a.rank != b.rank:
        raise IsoRankError(f"ranks {a.rank} and {b.rank} differ")
    if a.basis == b.basis and a.action == b.action:
        x = lin.freeze(lin.identity(a.rank))
        return IsoCertificate(x, verify_certificate(a, b, x), "identity")
    # (direction, source, target, kind); search spaces are built lazily
    plan = []
    full = a.rank == a.ambient_rank and b.rank == b.ambient_rank
    if full or maps is not None:
        # an integral ambient map S -> T scales covolume by |det|, so it can
        # only be onto T when covol(S) divides covol(T)
        da, db = abs(a.basis.determinant()), abs(b.basis.determinant())
        if maps is not None or db % da == 0:
            plan.append(("forward", a, b, "ambient"))
        if maps is None and da % db == 0:
            plan.append(("reverse", b, a, "ambient"))
    plan.append(("forward", a, b, "hom"))
    plan.append(("reverse", b, a, "hom"))
    # searchers run one after another; budget a searcher leaves unused
    # passes on to the ones after it
    spent_total = 0
    radii = []
    exhausted = True
    for n, (direction, src, tgt, kind) in enumerate(plan):
        share = (budget - spent_total) // (len(plan) - n)
        sr = _Searcher(src, tgt, kind, maps if kind == "ambient" else None)
        if sr.k == 0 or sr.empty:
            radii.append(0)
            continue
        spent = 0
        radius = 0
        stop = False
        for s in range(1, sr.k * height + 1):
            batch = []
            for coeffs in sr.shell(s, height):
                batch.append(coeffs)
                if len(batch) == 4096:
                    found = sr.test(batch)
                    spent += len(batch)
                    batch = []
                    if found:
                        return _certificate(a, b, direction, found, spent_total + spent)
                    if spent >= share:
                        stop = True
                        break
            if batch and not stop:
                found = sr.test(batch)
                spent += len(batch)
                if found:
                    return _certificate(a, b, direction, found, spent_total + spent)
            if stop:
                break
            radius = s
            if spent >= share:
                stop = s < sr.k * height
                break
        exhausted = exhausted and not stop
        radii.append(radius)
        spent_total += spent
    return IsoUnknown(height, min(radii) if radii else 0, spent_total, exhausted)


def _certificate(a, b, direction, found, tried):
    coeffs, x = found
    if direction == "reverse":
        x = lin.integer_inverse(x)
    ok = verify_certificate(a, b, x)
    if not ok:
        raise AssertionError("search produced a map that fails verification")
    return IsoCertificate(lin.freeze(x), ok, direction, tuple(coeffs), tried)


def is_free(m: GLattice, height: int = DEFAULT_HEIGHT, budget: int = DEFAULT_BUDGET):
    """Search for a certificate m = ring (as a module over itself)."""
    return iso_search(m, regular_module(m.ring), height, budget)


# --------------------------------------------------------------------------
# psi


@dataclass(frozen=True)
class PsiValue:
    modulus: int
    value: int

    def __post_init__(self):
        if gcd(self.value, self.modulus) != 1:
            raise ValueError(f"{self.value} is not a unit mod {self.modulus}")


def psi(g: FiniteGroup, k: int, theta: GroupAutomorphism) -> PsiValue:
    """The value of psi_k on an automorphism, for the tabulated families.

    Cyclic groups with k = 2 send theta_i to i.  Dihedral groups of order
    4n+2 and quaternion groups of order 4n (n >= 3) with k = 4 send
    theta_{i,j} to i^2 (for the dihedral family i is first lifted to an odd
    residue so that i^2 is a unit mod 4n+2).  Q8 with k = 4 is constant 1.
    A multiple k = i * period gives the i-th power of the basic value.
    """
    n = g.order
    if not grp.is_automorphism(g, theta.perm):
        raise grp.GroupError("not an automorphism of this group")
    period = psi_period(g)
    if k <= 0 or k % period:
        raise UnsupportedPsi(f"psi_{k} is not tabulated for {g.tag} (period {period})")
    if g.family == "cyclic":
        a = theta.perm[g.generators["x"]] if n > 1 else 0
        base = PsiValue(n, a % n if n > 1 else 0)
    elif g.family == "dihedral":
        a = theta.perm[g.generators["x"]] // 2
        if a % 2 == 0:
            a += g.param
        base = PsiValue(n, a * a % n)
    elif n == 8:
        base = PsiValue(n, 1)
    else:
        a = theta.perm[g.generators["x"]] // 2
        base = PsiValue(n, a * a % n)
    return psi_power(base, k // period)


def psi_power(v: PsiValue, i: int) -> PsiValue:
    """psi_{ik} from psi_k."""
    if i < 1:
        raise ValueError("i must be positive")
    return PsiValue(v.modulus, pow(v.value, i, v.modulus))


def psi_period(g: FiniteGroup) -> int:
    if g.family == "cyclic":
        return 2
    if g.family in ("dihedral", "quaternion"):
        return 4
    raise UnsupportedPsi(f"no tabulated period for {g.tag}")


def psi_table(g: FiniteGroup, k: int | None = None) -> list[tuple[tuple[int, ...], int]]:
    """(parameters, psi value) for every automorphism, sorted by parameters."""
    k = k or psi_period(g)
    rows = [(t.params or grp.parameters_of(g, t), psi(g, k, t).value) for t in automorphisms(g)]
    return sorted(rows)


def psi_homomorphism_check(g: FiniteGroup, k: int | None = None) -> tuple[bool, int]:
    """Check psi(s o t) = psi(s) psi(t) on all pairs; returns (ok, pairs checked)."""
    k = k or psi_period(g)
    autos = automorphisms(g)
    values = {t.perm: psi(g, k, t).value for t in autos}
    n = g.order
    pairs = 0
    for s in autos:
        for t in autos:
            pairs += 1
            if values[s.compose(t).perm] != values[s.perm] * values[t.perm] % n:
                return False, pairs
    return True, pairs


def automorphisms(g: FiniteGroup) -> list[GroupAutomorphism]:
    """Aut(G), falling back to brute force for Q8."""
    if g.family == "quaternion" and g.order == 8:
        return grp.brute_force_automorphisms(g)
    return grp.automorphism_group(g)
