"""Finite-rank associative rings given by structure constants.

A ring of rank ``n`` over ``Z`` (``modulus == 0``) or ``Z/p`` has basis
``e_0 .. e_{n-1}`` and ``table[a][b]`` holds the coordinates of
``e_a * e_b``.  Elements are plain integer tuples.  Matrices follow the
row-vector convention used in :mod:`swanlab.lin`: the image of ``v`` is
``v @ M``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import lin


class RingError(ValueError):
    pass


Vec = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class RingPresentation:
    name: str
    modulus: int
    table: tuple[tuple[Vec, ...], ...]
    unity: Vec
    basis_names: tuple[str, ...]
    gens: tuple[int, ...]
    # words[k] lists the generator positions (into ``gens``) whose product is e_k
    words: tuple[tuple[int, ...], ...] | None = None
    # every unit of this order has coefficients bounded by this (if known)
    unit_height: int | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def rank(self) -> int:
        return len(self.table)

    @property
    def is_finite(self) -> bool:
        return self.modulus > 0

    def size(self) -> int:
        if not self.is_finite:
            raise RingError(f"{self.name} is infinite")
        return self.modulus ** self.rank

    def reduce(self, v: Sequence[int]) -> Vec:
        if self.modulus:
            return tuple(x % self.modulus for x in v)
        return tuple(v)

    def zero(self) -> Vec:
        return (0,) * self.rank

    def basis(self, k: int) -> Vec:
        return tuple(int(i == k) for i in range(self.rank))

    def add(self, u: Sequence[int], v: Sequence[int]) -> Vec:
        return self.reduce([a + b for a, b in zip(u, v)])

    def sub(self, u: Sequence[int], v: Sequence[int]) -> Vec:
        return self.reduce([a - b for a, b in zip(u, v)])

    def neg(self, u: Sequence[int]) -> Vec:
        return self.reduce([-a for a in u])

    def scale(self, c: int, u: Sequence[int]) -> Vec:
        return self.reduce([c * a for a in u])

    def mul(self, u: Sequence[int], v: Sequence[int]) -> Vec:
        out = [0] * self.rank
        for a, ua in enumerate(u):
            if not ua:
                continue
            row = self.table[a]
            for b, vb in enumerate(v):
                if not vb:
                    continue
                c = ua * vb
                for t, x in enumerate(row[b]):
                    if x:
                        out[t] += c * x
        return self.reduce(out)

    def product(self, elements: Sequence[Sequence[int]]) -> Vec:
        out = self.unity
        for e in elements:
            out = self.mul(out, e)
        return out

    def power(self, u: Sequence[int], n: int) -> Vec:
        if n < 0:
            inv = self.inverse(u)
            if inv is None:
                raise RingError("negative power of a non-unit")
            u, n = inv, -n
        out = self.unity
        for _ in range(n):
            out = self.mul(out, u)
        return out

    def left_matrix(self, a: Sequence[int]) -> lin.Matrix:
        """Matrix of v -> a*v."""
        return [list(self.mul(a, self.basis(i))) for i in range(self.rank)]

    def right_matrix(self, a: Sequence[int]) -> lin.Matrix:
        """Matrix of v -> v*a."""
        return [list(self.mul(self.basis(i), a)) for i in range(self.rank)]

    def inverse(self, a: Sequence[int]) -> Vec | None:
        """Two-sided inverse of ``a`` inside this ring, or None."""
        if self.modulus:
            sol = lin.solve_mod_p(self.left_matrix(a), self.unity, self.modulus)
            if sol is None:
                return None
            b = self.reduce(sol)
        else:
            m = self.left_matrix(a)
            # a unit makes v -> a*v invertible over Z, so its determinant is +-1
            if abs(lin.det(m)) != 1:
                return None
            inv = lin.inverse(m)
            b_frac = [sum(self.unity[i] * inv[i][j] for i in range(self.rank))
                      for j in range(self.rank)]
            if any(x.denominator != 1 for x in b_frac):
                return None
            b = tuple(int(x) for x in b_frac)
        if self.mul(a, b) != self.unity or self.mul(b, a) != self.unity:
            return None
        return b

    def is_unit(self, a: Sequence[int]) -> bool:
        return self.inverse(a) is not None

    def elements(self):
        """All elements of a finite ring in lexicographic order."""
        return (tuple(v) for v in itertools.product(range(self.modulus), repeat=self.rank))

    def check_associative(self) -> bool:
        n = self.rank
        for a, b, c in itertools.product(range(n), repeat=3):
            ea, eb, ec = self.basis(a), self.basis(b), self.basis(c)
            if self.mul(self.mul(ea, eb), ec) != self.mul(ea, self.mul(eb, ec)):
                return False
        return True

    def check_unity(self) -> bool:
        return all(self.mul(self.unity, self.basis(k)) == self.basis(k)
                   and self.mul(self.basis(k), self.unity) == self.basis(k)
                   for k in range(self.rank))

    def word_value(self, word: Sequence[int], images: Sequence[Sequence[int]] | None = None,
                   target: "RingPresentation | None" = None) -> Vec:
        """Evaluate a generator word here, or in ``target`` with generator ``images``."""
        if images is None:
            return self.product([self.basis(self.gens[g]) for g in word])
        return target.product([images[g] for g in word])

    def label(self, v: Sequence[int]) -> str:
        """Human-readable form such as ``1+j`` or ``2-i`` (balanced residues mod p)."""
        parts = []
        for c, name in zip(self.reduce(v), self.basis_names):
            if self.modulus and c > self.modulus // 2:
                c -= self.modulus
            if not c:
                continue
            if name == "1":
                parts.append(str(c))
            elif c in (1, -1):
                parts.append(("-" if c < 0 else "") + name)
            else:
                parts.append(f"{c}{name}")
        if not parts:
            return "0"
        return parts[0] + "".join(p if p.startswith("-") else "+" + p for p in parts[1:])


def from_products(name: str, modulus: int, rank: int, product, unity: Sequence[int],
                  basis_names: Sequence[str], gens: Sequence[int],
                  words: Sequence[Sequence[int]] | None = None,
                  unit_height: int | None = None) -> RingPresentation:
    """Build a presentation from a basis product function ``product(a, b) -> coords``."""
    def red(v):
        return tuple(x % modulus for x in v) if modulus else tuple(v)

    table = tuple(tuple(red(product(a, b)) for b in range(rank)) for a in range(rank))
    ring = RingPresentation(name, modulus, table, red(unity), tuple(basis_names),
                            tuple(gens), tuple(tuple(w) for w in words) if words else None,
                            unit_height)
    if not ring.check_unity():
        raise RingError(f"{name}: unity is not a two-sided identity")
    return ring


def base_change(ring: RingPresentation, p: int, name: str | None = None) -> RingPresentation:
    """Reduce the structure constants of a Z-ring modulo p."""
    if ring.modulus:
        raise RingError("base change is only defined from Z")
    table = tuple(tuple(tuple(x % p for x in v) for v in row) for row in ring.table)
    return RingPresentation(name or f"{ring.name}/{p}", p, table,
                            tuple(x % p for x in ring.unity), ring.basis_names,
                            ring.gens, ring.words)


# --------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class RingHom:
    source: RingPresentation
    target: RingPresentation
    matrix: tuple[tuple[int, ...], ...]
    name: str = ""

    def apply(self, v: Sequence[int]) -> Vec:
        return self.target.reduce(lin.vecmat(v, self.matrix))

    def compose(self, inner: "RingHom") -> "RingHom":
        """self after inner."""
        if inner.target is not self.source:
            raise lin.RingMismatchError("composition through different rings")
        m = [self.apply(row) for row in inner.matrix]
        return RingHom(inner.source, self.target, lin.freeze(m),
                       f"{self.name}o{inner.name}" if self.name else "")

    def is_multiplicative(self) -> bool:
        s, t = self.source, self.target
        if self.apply(s.unity) != t.unity:
            return False
        for a in range(s.rank):
            fa = self.matrix[a]
            for b in range(s.rank):
                if self.apply(s.table[a][b]) != t.mul(fa, self.matrix[b]):
                    return False
        return True

    def is_surjective(self) -> bool:
        t = self.target
        if t.modulus:
            return lin.rank_mod_p(self.matrix, t.modulus) == t.rank
        return lin.span(self.matrix, t.rank) == lin.full_lattice(t.rank)

    def is_bijective(self) -> bool:
        if self.source.rank != self.target.rank:
            return False
        if self.target.modulus:
            return self.is_surjective()
        return abs(lin.det(self.matrix)) == 1

    def kernel(self) -> lin.HnfBasis:
        if self.target.modulus:
            return lin.kernel_mod(self.matrix, self.target.modulus)
        return lin.left_kernel(self.matrix, self.source.rank)

    def same_as(self, other: "RingHom") -> bool:
        return (self.source is other.source and self.target is other.target
                and all(self.target.reduce(a) == other.target.reduce(b)
                        for a, b in zip(self.matrix, other.matrix)))


def hom_from_images(source: RingPresentation, target: RingPresentation,
                    gen_images: Sequence[Sequence[int]], name: str = "",
                    check: bool = True) -> RingHom:
    """The homomorphism sending ``source.gens[g]`` to ``gen_images[g]``.

    The source must carry ``words``; the image of every basis element is the
    product of the generator images along its word.  With ``check`` the map is
    verified to be multiplicative, which is exactly the statement that the
    defining relations of the source hold among the images.
    """
    if source.words is None:
        raise RingError(f"{source.name} has no basis words")
    imgs = [target.reduce(g) for g in gen_images]
    m = [target.product([imgs[g] for g in w]) for w in source.words]
    hom = RingHom(source, target, lin.freeze(m), name)
    if check and not hom.is_multiplicative():
        raise RingError(f"{name or 'map'}: images do not satisfy the relations of {source.name}")
    return hom


def identity_hom(ring: RingPresentation) -> RingHom:
    return RingHom(ring, ring, lin.freeze(lin.identity(ring.rank)), "id")


def inverse_hom(hom: RingHom) -> RingHom:
    """Inverse of a bijective homomorphism between rings of the same base."""
    if not hom.is_bijective():
        raise RingError("homomorphism is not bijective")
    t = hom.target
    if t.modulus:
        p = t.modulus
        rows = []
        for k in range(t.rank):
            sol = lin.solve_mod_p(hom.matrix, t.basis(k), p)
            rows.append([x % p for x in sol])
    else:
        rows = lin.integer_inverse(hom.matrix)
    return RingHom(t, hom.source, lin.freeze(rows), f"{hom.name}^-1" if hom.name else "")
