"""Lattice-valued fuzzy sets over finite carriers and finite groups.

A fuzzy set is a dense tuple of lattice element ids indexed by carrier
position, so equality is exact table equality.  Product carriers are
materialized in lexicographic order, which keeps the indexing of pair
maps, lifts and transposes stable.  All values are immutable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from random import Random
from typing import Iterable, Iterator, Sequence

from .lattice import ResiduatedLattice


class DomainMismatch(ValueError):
    pass


class GroupError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Carrier:
    labels: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"Carrier({','.join(self.labels)})"


@dataclass(frozen=True)
class ProductCarrier(Carrier):
    """Left x right, element (i, j) at index i * |right| + j."""

    left: Carrier
    right: Carrier

    def pair(self, i: int, j: int) -> int:
        return i * self.right.size + j

    def split(self, k: int) -> tuple[int, int]:
        return divmod(k, self.right.size)


def product_carrier(left: Carrier, right: Carrier) -> ProductCarrier:
    labels = tuple(
        f"({a},{b})" for a in left.labels for b in right.labels
    )
    return ProductCarrier(labels, left, right)


def square_carrier(c: Carrier) -> ProductCarrier:
    return product_carrier(c, c)


# ---------------------------------------------------------------------------
# finite groups and maps


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as a Cayley table over its carrier."""

    carrier: Carrier
    table: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.carrier.size

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def mul_map(self) -> "FiniteMap":
        """Group multiplication as a map X x X -> X."""
        sq = square_carrier(self.carrier)
        graph = tuple(
            self.table[i][j] for i in range(self.size) for j in range(self.size)
        )
        return FiniteMap(sq, self.carrier, graph)

    def inv_map(self) -> "FiniteMap":
        return FiniteMap(self.carrier, self.carrier, self.inv)

    def __repr__(self) -> str:
        return f"FiniteGroup({','.join(self.carrier.labels)})"


def make_group(labels: Sequence[str], table: Sequence[Sequence[int]]) -> FiniteGroup:
    """Validate a Cayley table exhaustively and package it."""
    n = len(labels)
    rows = tuple(tuple(int(v) for v in row) for row in table)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise GroupError(f"Cayley table must be {n}x{n}")
    for r in rows:
        for v in r:
            if not 0 <= v < n:
                raise GroupError(f"table entry {v} out of range")
    for a, b, c in itertools.product(range(n), repeat=3):
        if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
            raise GroupError(
                f"not associative at {labels[a]}, {labels[b]}, {labels[c]}",
                (labels[a], labels[b], labels[c]),
            )
    ident = None
    for e in range(n):
        if all(rows[e][a] == a and rows[a][e] == a for a in range(n)):
            ident = e
            break
    if ident is None:
        raise GroupError("no identity element")
    inv = []
    for a in range(n):
        found = [b for b in range(n) if rows[a][b] == ident and rows[b][a] == ident]
        if not found:
            raise GroupError(f"no inverse for {labels[a]}", (labels[a],))
        inv.append(found[0])
    return FiniteGroup(Carrier(tuple(labels)), rows, ident, tuple(inv))


def cyclic_group(n: int) -> FiniteGroup:
    labels = ["e"] + [f"a{k}" if k > 1 else "a" for k in range(1, n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return make_group(labels, table)


def klein_group() -> FiniteGroup:
    table = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    return make_group(["e", "a", "b", "c"], table)


_BUILTIN_GROUPS = {
    "z2": lambda: cyclic_group(2),
    "z3": lambda: cyclic_group(3),
    "z4": lambda: cyclic_group(4),
    "klein": klein_group,
}


def builtin_group(name: str) -> FiniteGroup:
    try:
        return _BUILTIN_GROUPS[name.lower()]()
    except KeyError:
        raise GroupError(f"unknown builtin group {name!r}") from None


@dataclass(frozen=True)
class FiniteMap:
    """Total function between finite carriers, stored as a graph tuple."""

    source: Carrier
    target: Carrier
    graph: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.graph[i]

    def __repr__(self) -> str:
        return f"FiniteMap[{' '.join(self.target.labels[v] for v in self.graph)}]"


def identity_map(c: Carrier) -> FiniteMap:
    return FiniteMap(c, c, tuple(range(c.size)))


def constant_map(source: Carrier, target: Carrier, y: int) -> FiniteMap:
    return FiniteMap(source, target, (y,) * source.size)


def compose_map(g: FiniteMap, f: FiniteMap) -> FiniteMap:
    if f.target != g.source:
        raise DomainMismatch("composition domains do not line up")
    return FiniteMap(f.source, g.target, tuple(g.graph[v] for v in f.graph))


def product_map(f1: FiniteMap, f2: FiniteMap) -> FiniteMap:
    """(f1 x f2)(x1, x2) = (f1(x1), f2(x2)) between product carriers."""
    src = product_carrier(f1.source, f2.source)
    tgt = product_carrier(f1.target, f2.target)
    graph = tuple(
        tgt.pair(f1.graph[i], f2.graph[j])
        for i in range(f1.source.size)
        for j in range(f2.source.size)
    )
    return FiniteMap(src, tgt, graph)


def projection_maps(pc: ProductCarrier) -> tuple[FiniteMap, FiniteMap]:
    p1 = FiniteMap(pc, pc.left, tuple(pc.split(k)[0] for k in range(pc.size)))
    p2 = FiniteMap(pc, pc.right, tuple(pc.split(k)[1] for k in range(pc.size)))
    return p1, p2


def is_homomorphism(f: FiniteMap, gx: FiniteGroup, gy: FiniteGroup) -> bool:
    return all(
        f.graph[gx.op(a, b)] == gy.op(f.graph[a], f.graph[b])
        for a in range(gx.size)
        for b in range(gx.size)
    )


# ---------------------------------------------------------------------------
# fuzzy sets


@dataclass(frozen=True)
class FuzzySet:
    lattice: ResiduatedLattice
    carrier: Carrier
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.carrier.size:
            raise DomainMismatch(
                f"{len(self.values)} values for carrier of size {self.carrier.size}"
            )

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def meet(self, other: "FuzzySet") -> "FuzzySet":
        _same(self, other)
        mt = self.lattice.meet_t
        return self._with(tuple(mt[a][b] for a, b in zip(self.values, other.values)))

    def join(self, other: "FuzzySet") -> "FuzzySet":
        _same(self, other)
        jt = self.lattice.join_t
        return self._with(tuple(jt[a][b] for a, b in zip(self.values, other.values)))

    def leq(self, other: "FuzzySet") -> bool:
        _same(self, other)
        lt = self.lattice.leq_t
        return all(lt[a][b] for a, b in zip(self.values, other.values))

    def height(self) -> int:
        """join_x lam(x)"""
        return self.lattice.join_all(self.values)

    def _with(self, values: tuple[int, ...]) -> "FuzzySet":
        return FuzzySet(self.lattice, self.carrier, values)

    def __str__(self) -> str:
        return "(" + " ".join(self.lattice.labels[v] for v in self.values) + ")"


def _same(lam: FuzzySet, mu: FuzzySet) -> None:
    if lam.carrier != mu.carrier or lam.lattice is not mu.lattice and lam.lattice != mu.lattice:
        raise DomainMismatch("fuzzy sets live on different domains")


def fz_const(lat: ResiduatedLattice, carrier: Carrier, a: int) -> FuzzySet:
    return FuzzySet(lat, carrier, (a,) * carrier.size)


def fz_char(lat: ResiduatedLattice, carrier: Carrier, x: int) -> FuzzySet:
    """Characteristic map of {x}: top at x, bottom elsewhere."""
    vals = [lat.bot] * carrier.size
    vals[x] = lat.top
    return FuzzySet(lat, carrier, tuple(vals))


def fz_char_set(lat: ResiduatedLattice, carrier: Carrier, xs: Iterable[int]) -> FuzzySet:
    vals = [lat.bot] * carrier.size
    for x in xs:
        vals[x] = lat.top
    return FuzzySet(lat, carrier, tuple(vals))


def all_fuzzy_sets(lat: ResiduatedLattice, carrier: Carrier) -> Iterator[FuzzySet]:
    """Every map carrier -> L in lexicographic value order (caller budgets)."""
    for values in itertools.product(range(lat.size), repeat=carrier.size):
        yield FuzzySet(lat, carrier, values)


def sample_fuzzy_sets(
    lat: ResiduatedLattice, carrier: Carrier, rng: Random, count: int
) -> list[FuzzySet]:
    return [
        FuzzySet(
            lat, carrier, tuple(rng.randrange(lat.size) for _ in range(carrier.size))
        )
        for _ in range(count)
    ]


# ---------------------------------------------------------------------------
# subsethood and Zadeh mappings


def subsethood(lam: FuzzySet, mu: FuzzySet) -> int:
    """S(lam, mu) = meet_x (lam(x) -> mu(x)), the graded inclusion degree."""
    _same(lam, mu)
    lat = lam.lattice
    at = lat.arrow_t
    return lat.meet_all(at[a][b] for a, b in zip(lam.values, mu.values))


def image(f: FiniteMap, lam: FuzzySet) -> FuzzySet:
    """Forward Zadeh image: image(f, lam)(y) = join over f(x) = y of lam(x)."""
    if lam.carrier != f.source:
        raise DomainMismatch("fuzzy set not on the map's source")
    lat = lam.lattice
    out = [lat.bot] * f.target.size
    jt = lat.join_t
    for x, y in enumerate(f.graph):
        out[y] = jt[out[y]][lam.values[x]]
    return FuzzySet(lat, f.target, tuple(out))


def preimage(f: FiniteMap, nu: FuzzySet) -> FuzzySet:
    """Backward Zadeh image: preimage(f, nu)(x) = nu(f(x))."""
    if nu.carrier != f.target:
        raise DomainMismatch("fuzzy set not on the map's target")
    return FuzzySet(nu.lattice, f.source, tuple(nu.values[y] for y in f.graph))


# ---------------------------------------------------------------------------
# group-indexed operations


def fz_odot(group: FiniteGroup, lam: FuzzySet, mu: FuzzySet) -> FuzzySet:
    """(lam (.) mu)(z) = join over xy = z of lam(x) /\\ mu(y)."""
    _same(lam, mu)
    if lam.carrier != group.carrier:
        raise DomainMismatch("odot needs fuzzy sets over the group carrier")
    lat = lam.lattice
    jt, mt = lat.join_t, lat.meet_t
    out = [lat.bot] * group.size
    for x in range(group.size):
        a = lam.values[x]
        row = group.table[x]
        for y in range(group.size):
            z = row[y]
            out[z] = jt[out[z]][mt[a][mu.values[y]]]
    return FuzzySet(lat, group.carrier, tuple(out))


def fz_inv(group: FiniteGroup, lam: FuzzySet) -> FuzzySet:
    """lam^{-1}(z) = lam(z^{-1})."""
    if lam.carrier != group.carrier:
        raise DomainMismatch("inverse needs a fuzzy set over the group carrier")
    return lam._with(tuple(lam.values[group.inv[z]] for z in range(group.size)))


def fz_times(lam: FuzzySet, mu: FuzzySet) -> FuzzySet:
    """(lam x mu)(x1, x2) = lam(x1) /\\ mu(x2) on the product carrier."""
    if lam.lattice != mu.lattice:
        raise DomainMismatch("fuzzy sets over different lattices")
    lat = lam.lattice
    pc = product_carrier(lam.carrier, mu.carrier)
    mt = lat.meet_t
    vals = tuple(mt[a][b] for a in lam.values for b in mu.values)
    return FuzzySet(lat, pc, vals)


def translate(group: FiniteGroup, x: int, lam: FuzzySet) -> FuzzySet:
    """x (.) lam, evaluated by (x (.) lam)(z) = lam(x^{-1} z)."""
    if lam.carrier != group.carrier:
        raise DomainMismatch("translate needs a fuzzy set over the group carrier")
    xi = group.inv[x]
    return lam._with(tuple(lam.values[group.op(xi, z)] for z in range(group.size)))


def lift_l(group: FiniteGroup, lam: FuzzySet) -> FuzzySet:
    """lam_l(x, y) = lam(x^{-1} y) on the square carrier."""
    if lam.carrier != group.carrier:
        raise DomainMismatch("lift needs a fuzzy set over the group carrier")
    sq = square_carrier(group.carrier)
    vals = tuple(
        lam.values[group.op(group.inv[x], y)]
        for x in range(group.size)
        for y in range(group.size)
    )
    return FuzzySet(lam.lattice, sq, vals)


def _square_of(lam: FuzzySet) -> ProductCarrier:
    c = lam.carrier
    if not isinstance(c, ProductCarrier) or c.left != c.right:
        raise DomainMismatch("operation needs a fuzzy set on a square carrier")
    return c


def relcomp(mu: FuzzySet, lam: FuzzySet) -> FuzzySet:
    """(mu o lam)(x, y) = join_z lam(x, z) * mu(z, y).

    Note the monoidal ``*`` here, in contrast to the ``/\\`` inside the
    group-indexed product of fuzzy sets.
    """
    _same(lam, mu)
    sq = _square_of(lam)
    lat = lam.lattice
    n = sq.left.size
    jt, st = lat.join_t, lat.star_t
    vals = []
    for x in range(n):
        for y in range(n):
            acc = lat.bot
            for z in range(n):
                acc = jt[acc][st[lam.values[sq.pair(x, z)]][mu.values[sq.pair(z, y)]]]
            vals.append(acc)
    return FuzzySet(lat, sq, tuple(vals))


def transpose(lam: FuzzySet) -> FuzzySet:
    """lam~(x, y) = lam(y, x)."""
    sq = _square_of(lam)
    n = sq.left.size
    vals = tuple(lam.values[sq.pair(y, x)] for x in range(n) for y in range(n))
    return lam._with(vals)
