"""Finite groups as multiplication tables.

The family constructors are cached, so ``quaternion(24) is quaternion(24)``;
group rings and lattices built on top compare their rings by identity.

Elements of the cyclic, dihedral and quaternion families are indexed as
``x^a y^b`` with index ``2a + b`` (``b`` is always 0 for cyclic groups).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from math import gcd


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    family: str  # "cyclic", "dihedral", "quaternion" or "generic"
    param: int = 0  # order of x for the named families
    generators: dict[str, int] = field(default_factory=dict)
    labels: tuple[str, ...] = ()

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def power(self, g: int, n: int) -> int:
        if n < 0:
            g, n = self.inverse[g], -n
        out = self.identity
        for _ in range(n):
            out = self.table[out][g]
        return out

    def element_order(self, g: int) -> int:
        n, h = 1, g
        while h != self.identity:
            h = self.table[h][g]
            n += 1
        return n

    def word(self, a: int, b: int = 0) -> int:
        """Index of x^a y^b."""
        if self.family == "cyclic":
            return a % self.param
        return 2 * (a % self.param) + (b % 2)

    def check_axioms(self) -> bool:
        n = self.order
        t = self.table
        e = self.identity
        if any(t[e][g] != g or t[g][e] != g for g in range(n)):
            return False
        if any(t[g][self.inverse[g]] != e or t[self.inverse[g]][g] != e for g in range(n)):
            return False
        return all(t[t[a][b]][c] == t[a][t[b][c]]
                   for a in range(n) for b in range(n) for c in range(n))

    @property
    def tag(self) -> str:
        return {"cyclic": f"C{self.order}", "dihedral": f"D{self.order}",
                "quaternion": f"Q{self.order}"}.get(self.family, f"G{self.order}")


def _build(order, mul, family, param, generators, labels):
    table = tuple(tuple(mul(g, h) for h in range(order)) for g in range(order))
    e = 0
    inv = tuple(next(h for h in range(order) if table[g][h] == e) for g in range(order))
    return FiniteGroup(order, table, e, inv, family, param, generators, labels)


@functools.cache
def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    labels = tuple("1" if a == 0 else f"x^{a}" for a in range(n))
    gens = {"x": 1 % n} if n > 1 else {}
    return _build(n, lambda g, h: (g + h) % n, "cyclic", n, gens, labels)


def _xy_group(m: int, k: int | None, family: str) -> FiniteGroup:
    # y^2 = x^k (quaternion) or 1 (dihedral); y x y^-1 = x^-1
    def mul(g, h):
        a, b = divmod(g, 2)
        c, d = divmod(h, 2)
        e = a + (c if b == 0 else -c)
        if b and d and k is not None:
            e += k
        return 2 * (e % m) + (b + d) % 2

    labels = tuple(_label(a, b) for a in range(m) for b in range(2))
    return _build(2 * m, mul, family, m, {"x": 2, "y": 1}, labels)


def _label(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("x" if a == 1 else f"x^{a}")
    if b:
        parts.append("y")
    return "".join(parts) or "1"


@functools.cache
def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of order 4n+2 with x of order 2n+1."""
    if order < 6 or order % 4 != 2:
        raise GroupError("dihedral family is D_{4n+2}: order must be 2 mod 4 and >= 6")
    return _xy_group(order // 2, None, "dihedral")


@functools.cache
def quaternion(order: int) -> FiniteGroup:
    """Generalised quaternion group Q_{4k}: x^k = y^2, y x y^-1 = x^-1."""
    if order < 8 or order % 4 != 0:
        raise GroupError("quaternion order must be divisible by 4 and >= 8")
    k = order // 4
    return _xy_group(2 * k, k, "quaternion")


def from_spec(spec: str) -> FiniteGroup:
    """Parse ``c5``, ``d10``, ``q24`` style names."""
    s = spec.strip().lower()
    if len(s) < 2 or not s[1:].isdigit():
        raise GroupError(f"cannot parse group {spec!r}")
    n = int(s[1:])
    builders = {"c": cyclic, "d": dihedral, "q": quaternion}
    if s[0] not in builders:
        raise GroupError(f"unknown family in {spec!r}")
    return builders[s[0]](n)


def family_builder(family: str):
    try:
        return {"cyclic": cyclic, "dihedral": dihedral, "quaternion": quaternion}[family]
    except KeyError:
        raise GroupError(f"unknown family {family!r}") from None


# --------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class GroupAutomorphism:
    perm: tuple[int, ...]
    params: tuple[int, ...] | None = None

    def __call__(self, g: int) -> int:
        return self.perm[g]

    def compose(self, other: "GroupAutomorphism") -> "GroupAutomorphism":
        """self after other."""
        return GroupAutomorphism(tuple(self.perm[other.perm[g]] for g in range(len(self.perm))))

    def inverse(self) -> "GroupAutomorphism":
        inv = [0] * len(self.perm)
        for g, h in enumerate(self.perm):
            inv[h] = g
        return GroupAutomorphism(tuple(inv))


def is_automorphism(g: FiniteGroup, perm) -> bool:
    n = g.order
    if sorted(perm) != list(range(n)) or perm[g.identity] != g.identity:
        return False
    t = g.table
    return all(perm[t[a][b]] == t[perm[a]][perm[b]] for a in range(n) for b in range(n))


def theta(g: FiniteGroup, a: int, b: int = 0) -> GroupAutomorphism:
    """The automorphism x -> x^a (and y -> x^b y for the two-generator families)."""
    m = g.param
    if gcd(a, m) != 1:
        raise GroupError(f"{a} is not a unit mod {m}")
    if g.family == "cyclic":
        perm = tuple((a * x) % m for x in range(m))
        params = (a % m,)
    elif g.family in ("dihedral", "quaternion"):
        perm = tuple(g.word(a * (h // 2) + b * (h % 2), h % 2) for h in range(g.order))
        params = (a % m, b % m)
    else:
        raise GroupError("no parametrised automorphisms for a generic group")
    if not is_automorphism(g, perm):
        raise GroupError(f"theta{params} is not an automorphism of {g.tag}")
    return GroupAutomorphism(perm, params)


def automorphism_group(g: FiniteGroup) -> list[GroupAutomorphism]:
    """The parametrised automorphism group of a cyclic, dihedral or quaternion group."""
    m = g.param
    if g.family == "cyclic":
        return [theta(g, a) for a in range(1, m + 1) if gcd(a, m) == 1] if m > 1 \
            else [GroupAutomorphism((0,), (0,))]
    if g.family == "dihedral":
        return [theta(g, a, b) for a in range(1, m) if gcd(a, m) == 1 for b in range(m)]
    if g.family == "quaternion":
        if g.order == 8:
            raise GroupError("Aut(Q8) is exceptional; use brute_force_automorphisms")
        return [theta(g, a, b) for a in range(1, m) if gcd(a, m) == 1 for b in range(m)]
    raise GroupError("no parametrisation available for a generic group")


def brute_force_automorphisms(g: FiniteGroup) -> list[GroupAutomorphism]:
    """All automorphisms of a group with generators x, y, found by trying every image pair."""
    gens = list(g.generators.values())
    if not gens:
        return [GroupAutomorphism(tuple(range(g.order)))]
    # express every element as a word in the generators by breadth-first search
    words = {g.identity: ()}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for h in frontier:
            for s in gens:
                k = g.mul(h, s)
                if k not in words:
                    words[k] = words[h] + (s,)
                    nxt.append(k)
        frontier = nxt
    out = []
    for images in itertools.product(range(g.order), repeat=len(gens)):
        img = dict(zip(gens, images))
        perm = []
        for h in range(g.order):
            v = g.identity
            for s in words[h]:
                v = g.mul(v, img[s])
            perm.append(v)
        if is_automorphism(g, perm):
            out.append(GroupAutomorphism(tuple(perm)))
    return out


def parameters_of(g: FiniteGroup, auto: GroupAutomorphism) -> tuple[int, ...]:
    """Read off (a, b) from the images of x and y."""
    x = g.generators.get("x")
    if x is None:
        return (0,)
    a = auto.perm[x]
    if g.family == "cyclic":
        return (a,)
    a_exp, _ = divmod(a, 2)
    b_exp, _ = divmod(auto.perm[g.generators["y"]], 2)
    return (a_exp, b_exp)
