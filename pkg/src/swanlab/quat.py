"""Quaternion orders, their reductions mod p, and unit groups.

The Lipschitz order ``Z[i, j]`` has basis ``1, i, j, k``.  The order
``Z[zeta, j]`` (zeta a primitive 12th root of unity in the ``i`` direction)
has basis ``zeta^t`` and ``zeta^t j`` for ``t < 4``; its structure constants
are generated from ``zeta^4 = zeta^2 - 1`` and ``j zeta = zeta^-1 j``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import lin
from .rings import RingError, RingHom, RingPresentation, base_change, from_products, hom_from_images

Vec = tuple[int, ...]


class UnitError(ValueError):
    pass


# relations are callables (ring, generator images) -> element that must vanish
Relation = tuple[str, Callable[[RingPresentation, Sequence[Vec]], Vec]]


# --------------------------------------------------------------------------
# presentations


_QUAT_SIGNS = {
    # (a, b) -> (sign, index) for basis 1, i, j, k
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def _quat_product(a: int, b: int) -> list[int]:
    sign, idx = _QUAT_SIGNS[(a, b)]
    out = [0, 0, 0, 0]
    out[idx] = sign
    return out


def quaternion_relations() -> list[Relation]:
    def i2(r, g):
        return r.add(r.mul(g[0], g[0]), r.unity)

    def j2(r, g):
        return r.add(r.mul(g[1], g[1]), r.unity)

    def anti(r, g):
        return r.add(r.mul(g[0], g[1]), r.mul(g[1], g[0]))

    return [("i^2+1", i2), ("j^2+1", j2), ("ij+ji", anti)]


@functools.cache
def lipschitz_order() -> RingPresentation:
    ring = from_products("H_Z", 0, 4, _quat_product, (1, 0, 0, 0), ("1", "i", "j", "k"),
                         gens=(1, 2), words=((), (0,), (1,), (0, 1)), unit_height=1)
    ring.extra["relations"] = quaternion_relations()
    ring.extra["quaternion"] = True
    return ring


@functools.cache
def quaternion_algebra(p: int) -> RingPresentation:
    """Quaternions over F_p with i^2 = j^2 = -1."""
    ring = base_change(lipschitz_order(), p, f"H_F{p}")
    ring.extra["relations"] = quaternion_relations()
    ring.extra["quaternion"] = True
    return ring


PHI12 = (1, 0, -1, 0, 1)  # x^4 - x^2 + 1, constant term first


def _zeta_power(m: int) -> list[int]:
    """Coordinates of zeta^m in the basis 1, zeta, zeta^2, zeta^3."""
    poly = [1]
    for _ in range(m % 12):
        poly = [0] + poly
        while len(poly) > 4:
            top = poly.pop()
            # x^4 = x^2 - 1 shifted to the current degree
            d = len(poly) - 4
            poly[d + 2] += top
            poly[d] -= top
    return poly + [0] * (4 - len(poly))


def _cyclo_product(a: int, b: int) -> list[int]:
    s, e = a % 4, a // 4
    t, f = b % 4, b // 4
    # zeta^s j^e zeta^t j^f = zeta^(s + (-1)^e t) j^(e+f)
    z = _zeta_power(s + (t if e == 0 else -t))
    out = [0] * 8
    if e + f == 1:
        out[4:] = z
    else:
        sign = -1 if e + f == 2 else 1
        out[:4] = [sign * c for c in z]
    return out


def cyclotomic_relations() -> list[Relation]:
    def phi(r, g):
        z = g[0]
        return r.add(r.sub(r.power(z, 4), r.power(z, 2)), r.unity)

    def j2(r, g):
        return r.add(r.mul(g[1], g[1]), r.unity)

    def conj(r, g):
        z, j = g
        return r.sub(r.mul(j, z), r.mul(r.power(z, 11), j))

    return [("Phi12(zeta)", phi), ("j^2+1", j2), ("j zeta - zeta^-1 j", conj)]


@functools.cache
def cyclotomic_quat_order() -> RingPresentation:
    names = ("1", "z", "z^2", "z^3", "j", "zj", "z^2j", "z^3j")
    words = tuple((0,) * t + (1,) * e for e in range(2) for t in range(4))
    ring = from_products("Z[zeta12,j]", 0, 8, _cyclo_product, (1,) + (0,) * 7, names,
                         gens=(1, 4), words=words)
    ring.extra["relations"] = cyclotomic_relations()
    return ring


def relation_report(source: RingPresentation, target: RingPresentation,
                    images: Sequence[Sequence[int]]) -> list[tuple[str, bool]]:
    """Evaluate the named defining relations of ``source`` at generator ``images``."""
    imgs = [target.reduce(x) for x in images]
    return [(name, target.reduce(rel(target, imgs)) == target.zero())
            for name, rel in source.extra.get("relations", [])]


def validated_hom(source: RingPresentation, target: RingPresentation,
                  images: Sequence[Sequence[int]], name: str) -> RingHom:
    """A ring map given on generators, checked on named relations and on all basis pairs."""
    failed = [n for n, ok in relation_report(source, target, images) if not ok]
    if failed:
        raise RingError(f"{name}: relations {failed} fail in {target.name}")
    return hom_from_images(source, target, images, name)


def reduce_mod_p(source: RingPresentation, target: RingPresentation,
                 images: Sequence[Sequence[int]] | None = None, name: str = "") -> RingHom:
    """A map from a Z-order to an F_p-algebra.

    Without ``images`` the map is coefficient reduction (same basis); otherwise
    it is determined by the images of the source generators.
    """
    if not target.modulus or source.modulus:
        raise RingError("reduce_mod_p maps a Z-order to an F_p algebra")
    if images is None:
        if source.rank != target.rank:
            raise RingError("coefficient reduction needs matching bases")
        images = [target.reduce(source.basis(g)) for g in source.gens]
    return validated_hom(source, target, images, name or f"{source.name}->{target.name}")


def j1() -> RingHom:
    hz, hf = lipschitz_order(), quaternion_algebra(3)
    return reduce_mod_p(hz, hf, name="j1")


def j2() -> RingHom:
    hf = quaternion_algebra(3)
    return reduce_mod_p(cyclotomic_quat_order(), hf, [hf.basis(1), hf.basis(2)], name="j2")


# --------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class FiniteAlgebraElement:
    ring: RingPresentation
    coeffs: Vec

    def __post_init__(self):
        object.__setattr__(self, "coeffs", self.ring.reduce(self.coeffs))

    def __mul__(self, other):
        return FiniteAlgebraElement(self.ring, self.ring.mul(self.coeffs, other.coeffs))

    def __add__(self, other):
        return FiniteAlgebraElement(self.ring, self.ring.add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return FiniteAlgebraElement(self.ring, self.ring.sub(self.coeffs, other.coeffs))

    def __neg__(self):
        return FiniteAlgebraElement(self.ring, self.ring.neg(self.coeffs))

    def inverse(self) -> "FiniteAlgebraElement":
        inv = self.ring.inverse(self.coeffs)
        if inv is None:
            raise UnitError(f"{self} is not a unit")
        return FiniteAlgebraElement(self.ring, inv)

    def __str__(self):
        return self.ring.label(self.coeffs)


def quat_element(text: str, p: int = 3) -> Vec:
    """Parse sums like ``1+j``, ``1-i-j-k`` or ``2i+k`` into H_F_p coordinates."""
    ring = quaternion_algebra(p)
    return ring.reduce(parse_quaternion(text))


def parse_quaternion(text: str) -> list[int]:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty quaternion")
    if s[0] not in "+-":
        s = "+" + s
    out = [0, 0, 0, 0]
    idx = {"": 0, "1": 0, "i": 1, "j": 2, "k": 3}
    pos = 0
    while pos < len(s):
        sign = -1 if s[pos] == "-" else 1
        pos += 1
        start = pos
        while pos < len(s) and s[pos] not in "+-":
            pos += 1
        term = s[start:pos]
        digits = term.rstrip("ijk")
        unit = term[len(digits):]
        if unit not in idx or (not digits and not unit):
            raise ValueError(f"cannot parse term {term!r} in {text!r}")
        coef = int(digits) if digits else 1
        out[idx[unit]] += sign * coef
    return out


def quaternion_norm(e: FiniteAlgebraElement | Sequence[int], ring: RingPresentation | None = None) -> int:
    """a^2 + b^2 + c^2 + d^2, reduced mod p for finite quaternion algebras."""
    if isinstance(e, FiniteAlgebraElement):
        ring, coeffs = e.ring, e.coeffs
    else:
        coeffs = tuple(e)
    if ring is None or not ring.extra.get("quaternion") or ring.rank != 4:
        raise RingError("quaternion_norm needs a presentation with basis 1, i, j, k")
    n = sum(c * c for c in coeffs)
    return n % ring.modulus if ring.modulus else n


# --------------------------------------------------------------------------
# unit groups


@dataclass(frozen=True)
class UnitSubgroup:
    ring: RingPresentation
    elements: tuple[Vec, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements))))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return self.ring.reduce(x) in self._set

    def __iter__(self):
        return iter(self.elements)

    @functools.cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def is_subgroup(self) -> bool:
        r = self.ring
        if r.unity not in self._set:
            return False
        for a in self.elements:
            inv = r.inverse(a)
            if inv is None or inv not in self._set:
                return False
            for b in self.elements:
                if r.mul(a, b) not in self._set:
                    return False
        return True

    def is_subgroup_of(self, other: "UnitSubgroup") -> bool:
        return self.ring is other.ring and self._set <= other._set

    def labels(self) -> list[str]:
        return [self.ring.label(e) for e in self.elements]


MAX_ENUMERATION = 10 ** 6


def enumerate_units(ring: RingPresentation) -> UnitSubgroup:
    """All units of a finite algebra, found by testing each element for a two-sided inverse."""
    if not ring.modulus:
        raise UnitError("the unit group of a Z-order is infinite in general; use order_unit_search")
    if ring.modulus ** ring.rank > MAX_ENUMERATION:
        raise UnitError(f"{ring.name} has more than {MAX_ENUMERATION} elements")
    units = [e for e in ring.elements() if any(e) and ring.inverse(e) is not None]
    return UnitSubgroup(ring, tuple(units))


@dataclass(frozen=True)
class UnitSearch:
    """Units of a Z-order with coefficients bounded by ``height``.

    ``complete`` is True only when every unit of the order is known to have
    coefficients within the bound (positive definite norm form).
    """

    ring: RingPresentation
    height: int
    units: tuple[Vec, ...]
    complete: bool

    def as_subgroup(self) -> UnitSubgroup:
        g = UnitSubgroup(self.ring, self.units)
        if not g.is_subgroup():
            raise UnitError("units found up to this height are not closed under products")
        return g


def _box(rank: int, h: int) -> Iterable[tuple[int, ...]]:
    return itertools.product(range(-h, h + 1), repeat=rank)


def order_unit_search(ring: RingPresentation, height: int) -> UnitSearch:
    if ring.modulus:
        raise UnitError("order_unit_search is for Z-orders")
    if height < 0:
        raise ValueError("height must be non-negative")
    units = []
    for v in _box(ring.rank, height):
        if any(v) and ring.inverse(v) is not None:
            units.append(v)
    complete = ring.unit_height is not None and height >= ring.unit_height
    return UnitSearch(ring, height, tuple(sorted(units)), complete)


def subgroup_closure(ring: RingPresentation, generators: Sequence[Sequence[int]]) -> UnitSubgroup:
    """Breadth-first closure of a finite set of units under multiplication."""
    if not ring.modulus:
        raise UnitError("closure is only bounded inside a finite algebra")
    gens = [ring.reduce(g) for g in generators]
    for g in gens:
        if ring.inverse(g) is None:
            raise UnitError(f"{ring.label(g)} is not invertible in {ring.name}")
    seen = {ring.unity}
    frontier = [ring.unity]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = ring.mul(s, g)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    # in a finite group the monoid generated is already a group
    return UnitSubgroup(ring, tuple(seen))


def image_subgroup(hom: RingHom, elements: Iterable[Sequence[int]]) -> UnitSubgroup:
    """Closure of the images of some units under a map into a finite algebra."""
    return subgroup_closure(hom.target, [hom.apply(e) for e in elements])
