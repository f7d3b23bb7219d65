"""Independent oracles the implementation is checked against.

On the two-element Boolean lattice, top-filters correspond to principal
classical filters: a filter is the up-set of the characteristic map of a
nonempty subset A.  The classical side below works purely with Python
frozensets and never touches the filter code, so agreement is meaningful.

The brute-force filter enumerator re-derives the filter axioms directly
from the lattice tables (its own subsethood, its own joins) and scans all
subsets of L^X; it is the anchor for the frozen enumeration counts.
"""

from __future__ import annotations

import itertools

from topconv.fuzzy import FiniteGroup, FiniteMap, fz_char_set
from topconv.lattice import ResiduatedLattice
from topconv.tfilter import TFilter


# ---------------------------------------------------------------------------
# classical principal-filter algebra over frozensets


def c_odot(group: FiniteGroup, a: frozenset, b: frozenset) -> frozenset:
    return frozenset(group.op(x, y) for x in a for y in b)


def c_inverse(group: FiniteGroup, a: frozenset) -> frozenset:
    return frozenset(group.inv[x] for x in a)


def c_times(a: frozenset, b: frozenset, size_right: int) -> frozenset:
    return frozenset(x * size_right + y for x in a for y in b)


def c_image(f: FiniteMap, a: frozenset) -> frozenset:
    return frozenset(f.graph[x] for x in a)


def c_preimage(f: FiniteMap, b: frozenset) -> frozenset | None:
    pre = frozenset(x for x in range(f.source.size) if f.graph[x] in b)
    return pre or None


def c_intersect(a: frozenset, b: frozenset) -> frozenset:
    # intersecting principal filters unions their generating sets
    return a | b


def c_lift(group: FiniteGroup, a: frozenset) -> frozenset:
    n = group.size
    return frozenset(
        x * n + y
        for x in range(n)
        for y in range(n)
        if group.op(group.inv[x], y) in a
    )


def c_compose(r: frozenset, s: frozenset, n: int) -> frozenset | None:
    """Pairs (x, y) joined through some z: (x, z) in r and (z, y) in s."""
    out = set()
    for p in r:
        x, z = divmod(p, n)
        for q in s:
            z2, y = divmod(q, n)
            if z == z2:
                out.add(x * n + y)
    return frozenset(out) or None


def c_transpose(r: frozenset, n: int) -> frozenset:
    return frozenset((p % n) * n + (p // n) for p in r)


# bridges between the two worlds (Boolean lattice only)


def to_tfilter(lat: ResiduatedLattice, carrier, a: frozenset) -> TFilter:
    assert lat.size == 2
    return TFilter(lat, carrier, (fz_char_set(lat, carrier, sorted(a)),))


def from_tfilter(f: TFilter) -> frozenset:
    assert f.lattice.size == 2
    m = f.min_map()
    return frozenset(i for i, v in enumerate(m.values) if v == f.lattice.top)


# ---------------------------------------------------------------------------
# brute-force filter enumeration, written from the definitions


def brute_force_filters(lat: ResiduatedLattice, carrier) -> list[frozenset]:
    """All sets of maps carrier -> L satisfying the three filter axioms.

    Returns each filter as a frozenset of value tuples.  Independent of
    the filter module: subsethood, joins and meets are recomputed here
    from the lattice tables.
    """

    def join_all(vals):
        out = lat.bot
        for v in vals:
            out = lat.join_t[out][v]
        return out

    def meet_all(vals):
        out = lat.top
        for v in vals:
            out = lat.meet_t[out][v]
        return out

    def subsethood(mu, lam):
        return meet_all(lat.arrow_t[a][b] for a, b in zip(mu, lam))

    space = list(itertools.product(range(lat.size), repeat=carrier.size))
    found = []
    for mask in range(1, 1 << len(space)):
        members = [space[i] for i in range(len(space)) if mask >> i & 1]
        if any(join_all(lam) != lat.top for lam in members):
            continue  # TF1
        mset = set(members)
        if any(
            tuple(lat.meet_t[a][b] for a, b in zip(lam, mu)) not in mset
            for lam, mu in itertools.combinations(members, 2)
        ):
            continue  # TF2
        if any(
            lam not in mset
            and join_all(subsethood(mu, lam) for mu in members) == lat.top
            for lam in space
        ):
            continue  # TF3
        found.append(frozenset(members))
    return found
