"""Top-filters of fuzzy sets, represented by finite bases.

A base B generates the filter F_B = {lam | join_{mu in B} S(mu, lam) = top}.
Filters are never materialized as member sets on large carriers; every
operation goes through the base plus the membership predicate.  A debug
materialization path exists but is budget-gated.

Canonical form: the base is saturated under pairwise meets and reduced to
its minimal antichain.  On a finite carrier that saturation terminates at
the single pointwise meet of the base, so canonical bases have exactly one
member and equality of canonical forms is representation-independent
(mutual containment remains the authoritative equality test).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .fuzzy import (
    Carrier,
    DomainMismatch,
    FiniteGroup,
    FiniteMap,
    FuzzySet,
    all_fuzzy_sets,
    fz_char,
    fz_inv,
    fz_odot,
    fz_times,
    image,
    lift_l,
    preimage,
    relcomp,
    transpose,
    product_carrier,
    subsethood,
)
from .lattice import ResiduatedLattice
from .report import BudgetExceeded


class NotABase(ValueError):
    def __init__(self, message: str, witness: str = ""):
        super().__init__(message)
        self.witness = witness


class PreimageUndefined(ValueError):
    def __init__(self, message: str, witness: FuzzySet | None = None):
        super().__init__(message)
        self.witness = witness


class CompositionUndefined(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class TFilter:
    """A top-filter given by its canonical base.

    ``member`` is the lazy predicate; two filters are equal iff each base
    member of one is a member of the other.
    """

    lattice: ResiduatedLattice
    carrier: Carrier
    base: tuple[FuzzySet, ...]

    def member(self, lam: FuzzySet) -> bool:
        """lam in F iff join_{mu in base} S(mu, lam) = top."""
        if lam.carrier != self.carrier:
            raise DomainMismatch("membership test across carriers")
        lat = self.lattice
        acc = lat.bot
        for mu in self.base:
            acc = lat.join(acc, subsethood(mu, lam))
            if acc == lat.top:
                return True
        return acc == lat.top

    def min_map(self) -> FuzzySet:
        """Pointwise meet of the base; the least member on a finite carrier."""
        m = self.base[0]
        for mu in self.base[1:]:
            m = m.meet(mu)
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, TFilter):
            return NotImplemented
        if self.lattice != other.lattice or self.carrier != other.carrier:
            return False
        if self.base == other.base:
            return True
        return filter_leq(self, other) and filter_leq(other, self)

    def __hash__(self) -> int:
        return hash(tuple(mu.values for mu in self.base))

    def __str__(self) -> str:
        return "<" + " ".join(str(mu) for mu in self.base) + ">"

    def __repr__(self) -> str:
        return f"TFilter{self.__str__()}"


# ---------------------------------------------------------------------------
# bases and generation


def is_base(
    lat: ResiduatedLattice, carrier: Carrier, sets: Sequence[FuzzySet]
) -> tuple[bool, str | None]:
    """Check TB1 (every member attains top) and TB2 (meet refinement)."""
    if not sets:
        return False, "empty collection"
    for lam in sets:
        if lam.carrier != carrier or lam.lattice != lat:
            raise DomainMismatch("base member on a different domain")
        if lam.height() != lat.top:
            return False, f"TB1 fails for {lam}"
    for lam, mu in itertools.combinations_with_replacement(sets, 2):
        target = lam.meet(mu)
        acc = lat.bot
        for nu in sets:
            acc = lat.join(acc, subsethood(nu, target))
            if acc == lat.top:
                break
        if acc != lat.top:
            return False, f"TB2 fails for pair {lam}, {mu}"
    return True, None


def generate(
    lat: ResiduatedLattice,
    carrier: Carrier,
    sets: Sequence[FuzzySet],
    validated: bool = False,
) -> TFilter:
    """Generate the filter of a base and canonicalize the base.

    Pairwise-meet saturation of a finite base terminates at the total
    pointwise meet, whose minimal antichain is that single map; membership
    semantics are unchanged by the rewrite.
    """
    if not validated:
        ok, witness = is_base(lat, carrier, sets)
        if not ok:
            raise NotABase(f"not a top-filter base: {witness}", witness or "")
    m = sets[0]
    for mu in sets[1:]:
        m = m.meet(mu)
    return TFilter(lat, carrier, (m,))


def point_filter(lat: ResiduatedLattice, carrier: Carrier, x: int) -> TFilter:
    """[x] = {lam | lam(x) = top}, generated by the characteristic map of x."""
    if not 0 <= x < carrier.size:
        raise DomainMismatch(f"point {x} outside carrier")
    return TFilter(lat, carrier, (fz_char(lat, carrier, x),))


def filter_leq(f: TFilter, g: TFilter) -> bool:
    """F subseteq G, decided on base members (bases refine their filters)."""
    return all(g.member(mu) for mu in f.base)


def filter_eq(f: TFilter, g: TFilter) -> bool:
    return filter_leq(f, g) and filter_leq(g, f)


def materialize(f: TFilter, budget: int) -> list[FuzzySet]:
    """Debug path: list every member.  Refuses above the enumeration budget."""
    total = f.lattice.size ** f.carrier.size
    if total > budget:
        raise BudgetExceeded(
            f"cannot materialize filter: |L|^|X| = {total} exceeds budget {budget}"
        )
    return [lam for lam in all_fuzzy_sets(f.lattice, f.carrier) if f.member(lam)]


# ---------------------------------------------------------------------------
# the operation algebra


def image_filter(f: FiniteMap, flt: TFilter) -> TFilter:
    """Forward filter image, generated by the Zadeh images of the base."""
    if flt.carrier != f.source:
        raise DomainMismatch("filter not on the map's source")
    return generate(flt.lattice, f.target, [image(f, lam) for lam in flt.base])


def preimage_exists(f: FiniteMap, flt: TFilter) -> bool:
    lat = flt.lattice
    img = set(f.graph)
    return all(
        lat.join_all(mu.values[y] for y in img) == lat.top for mu in flt.base
    )


def preimage_filter(f: FiniteMap, flt: TFilter) -> TFilter:
    """Backward filter image; exists iff every base member attains top on f(X)."""
    if flt.carrier != f.target:
        raise DomainMismatch("filter not on the map's target")
    lat = flt.lattice
    img = set(f.graph)
    for mu in flt.base:
        if lat.join_all(mu.values[y] for y in img) != lat.top:
            raise PreimageUndefined(
                f"preimage does not exist: {mu} never attains top on the image",
                mu,
            )
    return generate(lat, f.source, [preimage(f, mu) for mu in flt.base])


def product_filter(f1: TFilter, f2: TFilter) -> TFilter:
    """F1 x F2 on the product carrier, base {lam1 x lam2}."""
    pc = product_carrier(f1.carrier, f2.carrier)
    sets = [fz_times(l1, l2) for l1 in f1.base for l2 in f2.base]
    return generate(f1.lattice, pc, sets)


def odot_filter(group: FiniteGroup, f1: TFilter, f2: TFilter) -> TFilter:
    """F1 (.) F2, base {lam (.) mu} over the group."""
    _group_carrier(group, f1)
    _group_carrier(group, f2)
    sets = [fz_odot(group, l1, l2) for l1 in f1.base for l2 in f2.base]
    return generate(f1.lattice, group.carrier, sets)


def inverse_filter(group: FiniteGroup, flt: TFilter) -> TFilter:
    """F^{-1}, base {lam^{-1}}."""
    _group_carrier(group, flt)
    return generate(flt.lattice, group.carrier, [fz_inv(group, lam) for lam in flt.base])


def lift_filter(group: FiniteGroup, flt: TFilter) -> TFilter:
    """F_l on X x X, base {lam_l}."""
    _group_carrier(group, flt)
    sq = lift_l(group, flt.base[0]).carrier
    return generate(flt.lattice, sq, [lift_l(group, lam) for lam in flt.base])


def transpose_filter(flt: TFilter) -> TFilter:
    """F~ on a square carrier, base {lam~}."""
    return generate(flt.lattice, flt.carrier, [transpose(lam) for lam in flt.base])


def compose_exists(f: TFilter, g: TFilter) -> bool:
    lat = f.lattice
    return all(
        relcomp(mu, lam).height() == lat.top for lam in f.base for mu in g.base
    )


def compose_filter(f: TFilter, g: TFilter) -> TFilter:
    """F o G on a square carrier, base {mu o lam | lam in F, mu in G}.

    Exists when every such composite attains top; the check runs on base
    members only, which suffices because bases refine their filters.
    """
    lat = f.lattice
    sets = []
    for lam in f.base:
        for mu in g.base:
            c = relcomp(mu, lam)
            if c.height() != lat.top:
                raise CompositionUndefined(
                    f"composition does not exist: {mu} o {lam} never attains top",
                    (lam, mu),
                )
            sets.append(c)
    return generate(lat, f.carrier, sets)


def intersect_filter(f: TFilter, g: TFilter) -> TFilter:
    """F intersect G (as member sets), generated by pairwise joins of bases.

    The {lam v mu} base is this workbench's construction; it is justified
    on finite carriers where all suprema are attained.
    """
    if f.carrier != g.carrier:
        raise DomainMismatch("intersection across carriers")
    sets = [lam.join(mu) for lam in f.base for mu in g.base]
    return generate(f.lattice, f.carrier, sets)


def _group_carrier(group: FiniteGroup, flt: TFilter) -> None:
    if flt.carrier != group.carrier:
        raise DomainMismatch("filter not on the group carrier")


# ---------------------------------------------------------------------------
# exhaustive enumeration on tiny carriers


def enumerate_filters(
    lat: ResiduatedLattice, carrier: Carrier, budget: int = 20_000
) -> list[TFilter]:
    """Every top-filter on the carrier, in deterministic canonical order.

    For |L^X| <= 12 this brute-forces all subsets of L^X against TF1-TF3;
    beyond that it walks antichains of the top-height maps, which generate
    all up-closed candidates (TF3 forces up-closure).
    """
    total = lat.size ** carrier.size
    if total > budget:
        raise BudgetExceeded(
            f"filter enumeration needs |L|^|X| = {total} <= budget {budget}"
        )
    space = list(all_fuzzy_sets(lat, carrier))
    if len(space) <= 12:
        found = _enumerate_brute(lat, space)
    else:
        found = _enumerate_antichains(lat, space, budget)
    found.sort(key=lambda f: f.base[0].values)
    return found


def _enumerate_brute(lat: ResiduatedLattice, space: list[FuzzySet]) -> list[TFilter]:
    n = len(space)
    top = lat.top
    out = []
    for mask in range(1, 1 << n):
        members = [space[i] for i in range(n) if mask >> i & 1]
        if any(lam.height() != top for lam in members):
            continue
        values = {lam.values for lam in members}
        if any(
            lam.meet(mu).values not in values
            for lam, mu in itertools.combinations(members, 2)
        ):
            continue
        ok = True
        for lam in space:
            if lam.values in values:
                continue
            if lat.join_all(subsethood(mu, lam) for mu in members) == top:
                ok = False
                break
        if ok:
            m = members[0]
            for mu in members[1:]:
                m = m.meet(mu)
            out.append(TFilter(lat, members[0].carrier, (m,)))
    return out


def _enumerate_antichains(
    lat: ResiduatedLattice, space: list[FuzzySet], budget: int
) -> list[TFilter]:
    top = lat.top
    pool = [lam for lam in space if lam.height() == top]
    out = []
    seen = 0

    def up_set_is_filter(chain: list[FuzzySet]) -> bool:
        # TF2 on generators: some generator must sit below each pairwise meet
        for lam, mu in itertools.combinations(chain, 2):
            lo = lam.meet(mu)
            if not any(nu.leq(lo) for nu in chain):
                return False
        # TF3: nothing outside the up-set may reach a top refinement join
        for lam in space:
            if any(nu.leq(lam) for nu in chain):
                continue
            if lat.join_all(subsethood(nu, lam) for nu in chain) == top:
                return False
        return True

    def pair_supported(a: FuzzySet, b: FuzzySet, gens: list[FuzzySet]) -> bool:
        lo = a.meet(b)
        return any(w.leq(lo) for w in gens)

    def extend(chain: list[FuzzySet], start: int) -> None:
        nonlocal seen
        if chain:
            seen += 1
            if seen > budget:
                raise BudgetExceeded("antichain enumeration exceeded budget")
            if up_set_is_filter(chain):
                m = chain[0]
                for mu in chain[1:]:
                    m = m.meet(mu)
                out.append(TFilter(lat, m.carrier, (m,)))
        for i in range(start, len(pool)):
            cand = pool[i]
            if any(cand.leq(nu) or nu.leq(cand) for nu in chain):
                continue
            grown = chain + [cand]
            # a pair with no generator below its meet breaks TF2 for good:
            # a repairing generator would have to sit below both members of
            # an antichain pair, contradicting incomparability, so prune
            if all(pair_supported(nu, cand, grown) for nu in chain):
                extend(grown, i + 1)

    extend([], 0)
    # distinct generated up-sets may coincide only through equal minima
    uniq: dict[tuple, TFilter] = {}
    for f in out:
        uniq.setdefault(f.base[0].values, f)
    return list(uniq.values())
