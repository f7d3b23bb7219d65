"""Convergence structures for top-filters over finite carriers and groups.

Every "for all filters" quantifier in a theorem is interpreted over an
explicit :class:`FilterUniverse`.  A complete universe (the full output of
the filter enumerator) yields outright verdicts; anything smaller yields
verdicts tagged relative to the declared universe.  Structures, universes
and tables are immutable after construction, so theorem suites may fan
out over them from any number of workers.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .fuzzy import (
    Carrier,
    FiniteGroup,
    FiniteMap,
    FuzzySet,
    product_carrier,
    projection_maps,
)
from .lattice import ResiduatedLattice
from .report import BudgetExceeded, Budgets, CheckResult, failed, skipped, verdict
from .tfilter import (
    TFilter,
    enumerate_filters,
    filter_leq,
    image_filter,
    intersect_filter,
    inverse_filter,
    materialize,
    odot_filter,
    point_filter,
    product_filter,
    subsethood,
)


class ClosureInsufficient(RuntimeError):
    """A check needs a filter the declared universe does not contain."""

    def __init__(self, flag: str, detail: str = ""):
        super().__init__(f"universe not closed under {flag}" + (f": {detail}" if detail else ""))
        self.flag = flag


class FilterUniverse:
    """A finite, duplicate-free stand-in for the set of all top-filters.

    Point filters are always included.  ``complete`` records whether the
    list is the full enumerator output, which decides pass vs
    relative-pass tagging downstream.
    """

    def __init__(
        self,
        lattice: ResiduatedLattice,
        carrier: Carrier,
        filters: Iterable[TFilter],
        complete: bool = False,
    ):
        self.lattice = lattice
        self.carrier = carrier
        by_key: dict[tuple, TFilter] = {}
        for f in filters:
            by_key.setdefault(_key(f), f)
        for x in range(carrier.size):
            p = point_filter(lattice, carrier, x)
            by_key.setdefault(_key(p), p)
        self.filters: tuple[TFilter, ...] = tuple(
            sorted(by_key.values(), key=lambda f: tuple(m.values for m in f.base))
        )
        self.complete = complete
        self._index = {_key(f): i for i, f in enumerate(self.filters)}
        self._points = tuple(
            self._index[_key(point_filter(lattice, carrier, x))]
            for x in range(carrier.size)
        )
        self._leq: list[list[bool]] | None = None

    def __len__(self) -> int:
        return len(self.filters)

    def __getitem__(self, i: int) -> TFilter:
        return self.filters[i]

    def index(self, f: TFilter) -> int | None:
        i = self._index.get(_key(f))
        if i is not None:
            return i
        for j, g in enumerate(self.filters):  # non-canonical fallback
            if g == f:
                return j
        return None

    def require(self, f: TFilter, flag: str) -> int:
        i = self.index(f)
        if i is None:
            raise ClosureInsufficient(flag, str(f))
        return i

    def point_index(self, x: int) -> int:
        return self._points[x]

    def leq(self, i: int, j: int) -> bool:
        if self._leq is None:
            self._leq = [
                [filter_leq(f, g) for g in self.filters] for f in self.filters
            ]
        return self._leq[i][j]

    def up_set(self, i: int) -> frozenset[int]:
        return frozenset(j for j in range(len(self.filters)) if self.leq(i, j))

    def closure_flags(self, group: FiniteGroup | None = None) -> dict[str, bool]:
        """Which operations keep the universe inside itself (spot-verified)."""
        if self.complete:
            flags = {"points": True, "intersection": True}
            if group is not None:
                flags["odot"] = flags["inverse"] = True
            return flags
        flags = {"points": True}
        flags["intersection"] = all(
            self.index(intersect_filter(f, g)) is not None
            for f in self.filters
            for g in self.filters
        )
        if group is not None:
            flags["odot"] = all(
                self.index(odot_filter(group, f, g)) is not None
                for f in self.filters
                for g in self.filters
            )
            flags["inverse"] = all(
                self.index(inverse_filter(group, f)) is not None for f in self.filters
            )
        return flags

    def __repr__(self) -> str:
        tag = "complete" if self.complete else "relative"
        return f"FilterUniverse({len(self.filters)} filters, {tag})"


def _key(f: TFilter) -> tuple:
    return tuple(m.values for m in f.base)


def complete_universe(
    lattice: ResiduatedLattice, carrier: Carrier, budget: int = 20_000
) -> FilterUniverse:
    return FilterUniverse(
        lattice, carrier, enumerate_filters(lattice, carrier, budget), complete=True
    )


def universe_from_filters(
    lattice: ResiduatedLattice, carrier: Carrier, filters: Iterable[TFilter]
) -> FilterUniverse:
    return FilterUniverse(lattice, carrier, filters, complete=False)


# ---------------------------------------------------------------------------
# convergence structures


class ConvergenceStructure:
    """Relation "filter converges to point" over a universe, maybe grouped."""

    def __init__(
        self,
        universe: FilterUniverse,
        converges: Iterable[tuple[int, int]],
        group: FiniteGroup | None = None,
    ):
        self.universe = universe
        self.converges = frozenset(converges)
        self.group = group
        at: list[set[int]] = [set() for _ in range(universe.carrier.size)]
        for i, x in self.converges:
            at[x].add(i)
        self._at = tuple(frozenset(s) for s in at)

    def converges_to(self, i: int, x: int) -> bool:
        return i in self._at[x]

    def filters_at(self, x: int) -> frozenset[int]:
        return self._at[x]

    def __repr__(self) -> str:
        return (
            f"ConvergenceStructure({len(self.converges)} pairs over "
            f"{len(self.universe)} filters)"
        )


def discrete_structure(
    universe: FilterUniverse, group: FiniteGroup | None = None
) -> ConvergenceStructure:
    """F converges to x iff F contains the point filter [x]."""
    pairs = [
        (i, x)
        for x in range(universe.carrier.size)
        for i in range(len(universe))
        if universe.leq(universe.point_index(x), i)
    ]
    return ConvergenceStructure(universe, pairs, group)


def indiscrete_structure(
    universe: FilterUniverse, group: FiniteGroup | None = None
) -> ConvergenceStructure:
    """Everything converges everywhere."""
    pairs = [
        (i, x)
        for x in range(universe.carrier.size)
        for i in range(len(universe))
    ]
    return ConvergenceStructure(universe, pairs, group)


def _label(c: ConvergenceStructure, i: int, x: int) -> str:
    return f"F={c.universe[i]} x={c.universe.carrier.labels[x]}"


# ---------------------------------------------------------------------------
# axioms and classification


def check_axioms(
    c: ConvergenceStructure,
    budgets: Budgets = Budgets(),
    which: Sequence[str] = ("TC1", "TC2", "LT", "PT", "TT"),
) -> list[CheckResult]:
    """Classify a structure: convergence (TC1/TC2), limit (LT),
    pretopological (PT) and topological (TT), with failure witnesses.

    LT and PT locate intersections inside the universe and raise
    ``ClosureInsufficient`` when that is impossible; on an incomplete
    universe every verdict is tagged relative.
    """
    out: list[CheckResult] = []
    u = c.universe
    ok = u.complete

    if "TC1" in which:
        w = next(
            (
                x
                for x in range(u.carrier.size)
                if not c.converges_to(u.point_index(x), x)
            ),
            None,
        )
        out.append(
            verdict("TC1", ok)
            if w is None
            else failed("TC1", f"[{u.carrier.labels[w]}] does not converge to {u.carrier.labels[w]}")
        )
    if "TC2" in which:
        w = None
        for i, x in sorted(c.converges):
            for j in range(len(u)):
                if u.leq(i, j) and not c.converges_to(j, x):
                    w = f"{_label(c, i, x)} but larger {u[j]} does not converge"
                    break
            if w:
                break
        out.append(verdict("TC2", ok) if w is None else failed("TC2", w))
    if "LT" in which:
        w = None
        for x in range(u.carrier.size):
            for i, j in itertools.combinations_with_replacement(sorted(c.filters_at(x)), 2):
                k = u.require(intersect_filter(u[i], u[j]), "intersection")
                if not c.converges_to(k, x):
                    w = f"{u[i]} and {u[j]} converge to {u.carrier.labels[x]} but their intersection does not"
                    break
            if w:
                break
        out.append(
            verdict("LT", ok, detail="intersection via pairwise-join base")
            if w is None
            else failed("LT", w)
        )
    pt_ok = None
    if "PT" in which or "TT" in which:
        w = None
        for x in range(u.carrier.size):
            if not c.filters_at(x):
                w = f"nothing converges to {u.carrier.labels[x]}; U_x is undefined"
                break
            i = u.require(ux(c, x), "intersection")
            if not c.converges_to(i, x):
                w = f"U_{u.carrier.labels[x]} = {u[i]} does not converge to {u.carrier.labels[x]}"
                break
        pt_ok = w is None
        if "PT" in which:
            out.append(verdict("PT", ok) if pt_ok else failed("PT", w))
    if "TT" in which:
        if not pt_ok:
            out.append(skipped("TT", "not pretopological"))
        else:
            out.extend(tt_check(c, budgets))
    return out


def ux(c: ConvergenceStructure, x: int) -> TFilter:
    """U_x: the intersection of every filter converging to x."""
    indices = sorted(c.filters_at(x))
    if not indices:
        raise ValueError(f"no filter converges to point {x}; structure breaks TC1")
    acc = c.universe[indices[0]]
    for i in indices[1:]:
        acc = intersect_filter(acc, c.universe[i])
    return acc


def lambda_star(
    c: ConvergenceStructure,
    lam: FuzzySet,
    budgets: Budgets = Budgets(),
    ux_members: dict[int, list[FuzzySet]] | None = None,
) -> FuzzySet:
    """lam*(x) = join over mu in U_x of S(mu, lam)."""
    lat = c.universe.lattice
    if ux_members is None:
        ux_members = _ux_members(c, budgets)
    vals = tuple(
        lat.join_all(subsethood(mu, lam) for mu in ux_members[x])
        for x in range(c.universe.carrier.size)
    )
    return FuzzySet(lat, c.universe.carrier, vals)


def _ux_members(c: ConvergenceStructure, budgets: Budgets) -> dict[int, list[FuzzySet]]:
    return {
        x: materialize(ux(c, x), budgets.enumeration)
        for x in range(c.universe.carrier.size)
    }


def tt_check(c: ConvergenceStructure, budgets: Budgets = Budgets()) -> list[CheckResult]:
    """The topological refinement condition, searched over candidates.

    For every point x and every lam in U_x a witness lam' in U_x with
    lam' <= lam is sought such that each z admits lam_z in U_z with
    lam'(z) <= S(lam_z, lam).  Candidates for lam' are the lam* formula,
    the base of U_x, lam itself, then all members; candidates for lam_z
    are the explicit map w |-> (lam*(z) -> lam(w)), the base of U_z, then
    all members.  The report records which family witnessed each pass.
    """
    u = c.universe
    lat = u.lattice
    carrier = u.carrier
    for x in range(carrier.size):
        if not c.converges_to(u.require(ux(c, x), "intersection"), x):
            raise ValueError("structure is not pretopological; TT is undefined")
    members = _ux_members(c, budgets)
    ux_filters = {x: ux(c, x) for x in range(carrier.size)}
    family_counts: dict[str, int] = {}

    for x in range(carrier.size):
        for lam in members[x]:
            star = lambda_star(c, lam, budgets, members)
            candidates: list[tuple[str, FuzzySet]] = [("lambda-star", star)]
            candidates += [("base", b) for b in ux_filters[x].base]
            candidates.append(("member", lam))
            candidates += [("search", m) for m in members[x]]
            seen: set[tuple] = set()
            witness_family = None
            for tag, cand in candidates:
                if cand.values in seen:
                    continue
                seen.add(cand.values)
                if not (ux_filters[x].member(cand) and cand.leq(lam)):
                    continue
                if _tt_local_family(c, cand, lam, star, members):
                    witness_family = tag
                    break
            if witness_family is None:
                return [
                    failed(
                        "TT",
                        f"x={carrier.labels[x]} lam={lam}: no refinement with a local family",
                    )
                ]
            family_counts[witness_family] = family_counts.get(witness_family, 0) + 1
    detail = "witnessed by " + ", ".join(
        f"{k}:{v}" for k, v in sorted(family_counts.items())
    )
    return [verdict("TT", u.complete, detail=detail)]


def _tt_local_family(c, cand, lam, star, members) -> bool:
    lat = c.universe.lattice
    carrier = c.universe.carrier
    for z in range(carrier.size):
        need = cand.values[z]
        explicit = FuzzySet(
            lat, carrier, tuple(lat.arrow(star.values[z], v) for v in lam.values)
        )
        found = False
        for lz in [explicit, *members[z]]:
            if any(lz.values == m.values for m in members[z]) and lat.leq(
                need, subsethood(lz, lam)
            ):
                found = True
                break
        if not found:
            return False
    return True


# ---------------------------------------------------------------------------
# initial structures, products, continuity


def initial_structure(
    sources: Sequence[tuple[FiniteMap, "ConvergenceStructure"]],
    universe: FilterUniverse,
    group: FiniteGroup | None = None,
) -> ConvergenceStructure:
    """F converges to x iff every f_j-image of F converges to f_j(x).

    The empty source family therefore yields the indiscrete structure.
    """
    image_tables = []
    for f, target in sources:
        if f.source != universe.carrier:
            raise ClosureInsufficient("image", "map source is not the universe carrier")
        table = [
            target.universe.require(image_filter(f, universe[i]), f"image:{f!r}")
            for i in range(len(universe))
        ]
        image_tables.append((f, target, table))
    pairs = []
    for i in range(len(universe)):
        for x in range(universe.carrier.size):
            if all(
                target.converges_to(table[i], f.graph[x])
                for f, target, table in image_tables
            ):
                pairs.append((i, x))
    return ConvergenceStructure(universe, pairs, group)


def product_filter_universe(
    ua: FilterUniverse, ub: FilterUniverse, budget: int = 20_000
) -> FilterUniverse:
    """Universe on the product carrier.

    When both factors are complete and the product carrier fits the
    enumeration budget the complete universe is built; otherwise the
    family of product filters F x G (which contains all point filters).
    """
    lat = ua.lattice
    carrier = product_carrier(ua.carrier, ub.carrier)
    total = lat.size ** carrier.size
    if ua.complete and ub.complete and total <= budget:
        return complete_universe(lat, carrier, budget)
    prods = [product_filter(f, g) for f in ua.filters for g in ub.filters]
    return FilterUniverse(lat, carrier, prods, complete=False)


def product_structure(
    ca: ConvergenceStructure,
    cb: ConvergenceStructure | None = None,
    universe: FilterUniverse | None = None,
    budget: int = 20_000,
) -> ConvergenceStructure:
    """Initial structure of the two projections (the product space)."""
    cb = cb or ca
    if universe is None:
        universe = product_filter_universe(ca.universe, cb.universe, budget)
    p1, p2 = projection_maps(universe.carrier)  # type: ignore[arg-type]
    return initial_structure([(p1, ca), (p2, cb)], universe)


def continuous(
    f: FiniteMap, cx: ConvergenceStructure, cy: ConvergenceStructure
) -> tuple[bool, str | None]:
    """True iff every converging filter keeps converging through f."""
    for i, x in sorted(cx.converges):
        j = cy.universe.require(image_filter(f, cx.universe[i]), f"image:{f!r}")
        if not cy.converges_to(j, f.graph[x]):
            return False, f"{_label(cx, i, x)} maps to non-converging {cy.universe[j]}"
    return True, None


# ---------------------------------------------------------------------------
# group structure predicates


class ConvTables:
    """Cached filter-algebra tables for one (universe, group) pair.

    Built once, reused across the many structures of an enumeration run.
    All derived filters must land inside the universe.
    """

    def __init__(self, universe: FilterUniverse, group: FiniteGroup):
        self.universe = universe
        self.group = group
        n = len(universe)
        self.odot = [
            [
                universe.require(odot_filter(group, universe[i], universe[j]), "odot")
                for j in range(n)
            ]
            for i in range(n)
        ]
        self.invf = [
            universe.require(inverse_filter(group, universe[i]), "inverse")
            for i in range(n)
        ]
        rmap = group.inv_map()
        self.r_image = [
            universe.require(image_filter(rmap, universe[i]), "image:inverse-map")
            for i in range(n)
        ]


class ProductTables:
    """Projection and multiplication images for a product universe."""

    def __init__(
        self,
        prod_universe: FilterUniverse,
        x_universe: FilterUniverse,
        group: FiniteGroup,
    ):
        self.prod_universe = prod_universe
        self.x_universe = x_universe
        pc = prod_universe.carrier
        p1, p2 = projection_maps(pc)  # type: ignore[arg-type]
        mmap = group.mul_map()
        self.p1 = [
            x_universe.require(image_filter(p1, f), "image:p1")
            for f in prod_universe.filters
        ]
        self.p2 = [
            x_universe.require(image_filter(p2, f), "image:p2")
            for f in prod_universe.filters
        ]
        self.m = [
            x_universe.require(image_filter(mmap, f), "image:multiplication")
            for f in prod_universe.filters
        ]
        self.prod_index = {
            (i, j): prod_universe.require(
                product_filter(x_universe[i], x_universe[j]), "product"
            )
            for i in range(len(x_universe))
            for j in range(len(x_universe))
        }


def is_group_by_operations(
    c: ConvergenceStructure,
    tables: ProductTables | None = None,
    budget: int = 20_000,
) -> tuple[bool, str | None]:
    """Continuity of multiplication (on the product space) and inversion."""
    if c.group is None:
        raise ValueError("structure carries no group")
    g = c.group
    if tables is None:
        pu = product_filter_universe(c.universe, c.universe, budget)
        tables = ProductTables(pu, c.universe, g)
    pu = tables.prod_universe
    pc = pu.carrier
    for k in range(len(pu)):
        for x in range(pc.size):
            x1, x2 = pc.split(x)  # type: ignore[attr-defined]
            if c.converges_to(tables.p1[k], x1) and c.converges_to(tables.p2[k], x2):
                if not c.converges_to(tables.m[k], g.op(x1, x2)):
                    return (
                        False,
                        f"m not continuous: K={pu[k]} -> ({pc.labels[x]}) but image misses "
                        f"{g.carrier.labels[g.op(x1, x2)]}",
                    )
    rmap = g.inv_map()
    for i, x in sorted(c.converges):
        j = c.universe.require(image_filter(rmap, c.universe[i]), "image:inverse-map")
        if not c.converges_to(j, g.inv[x]):
            return False, f"r not continuous: {_label(c, i, x)}"
    return True, None


def is_group_by_tcg(
    c: ConvergenceStructure, tables: ConvTables | None = None
) -> tuple[bool, str | None]:
    """TCG1 (odot-product of converging filters converges to the product)
    and TCG2 (inverse filter converges to the inverse point)."""
    if c.group is None:
        raise ValueError("structure carries no group")
    g = c.group
    if tables is None:
        tables = ConvTables(c.universe, g)
    for i, x in sorted(c.converges):
        for j, y in sorted(c.converges):
            if not c.converges_to(tables.odot[i][j], g.op(x, y)):
                return (
                    False,
                    f"TCG1: {_label(c, i, x)}, {_label(c, j, y)} but product filter misses "
                    f"{g.carrier.labels[g.op(x, y)]}",
                )
    for i, x in sorted(c.converges):
        if not c.converges_to(tables.invf[i], g.inv[x]):
            return False, f"TCG2: {_label(c, i, x)}"
    return True, None


def localization_check(
    c: ConvergenceStructure, tables: ConvTables | None = None
) -> tuple[bool, str | None]:
    """F -> x iff [x^-1] (.) F -> e iff F (.) [x^-1] -> e, for all (F, x)."""
    if c.group is None:
        raise ValueError("structure carries no group")
    g = c.group
    if tables is None:
        tables = ConvTables(c.universe, g)
    e = g.identity
    u = c.universe
    for i in range(len(u)):
        for x in range(u.carrier.size):
            p_inv = u.point_index(g.inv[x])
            a = c.converges_to(i, x)
            b = c.converges_to(tables.odot[p_inv][i], e)
            d = c.converges_to(tables.odot[i][p_inv], e)
            if not (a == b == d):
                return (
                    False,
                    f"{_label(c, i, x)}: direct={a} left-localized={b} right-localized={d}",
                )
    return True, None


# ---------------------------------------------------------------------------
# structure enumeration


def _up_closed_choices(universe: FilterUniverse, x: int, budget: int) -> list[frozenset[int]]:
    n = len(universe)
    if (1 << n) > max(budget, 1 << 16):
        raise BudgetExceeded(f"cannot enumerate up-sets of a {n}-filter universe")
    must = universe.point_index(x)
    ups = [universe.up_set(i) for i in range(n)]
    out = []
    for mask in range(1 << n):
        s = frozenset(i for i in range(n) if mask >> i & 1)
        if must not in s:
            continue
        if all(ups[i] <= s for i in s):
            out.append(s)
    return out


def enumerate_structures(
    universe: FilterUniverse, budget: int = 20_000
) -> list[tuple[frozenset[int], ...]]:
    """All convergence relations (TC1 + TC2) as per-point filter sets.

    TC2 makes the converging set at each point an up-set of the filter
    order, and TC1 pins the point filter into it; points are independent,
    so the relations are exactly the products of per-point up-set choices.
    """
    per_point = [
        _up_closed_choices(universe, x, budget)
        for x in range(universe.carrier.size)
    ]
    total = 1
    for choices in per_point:
        total *= len(choices)
    if total > budget:
        raise BudgetExceeded(
            f"{total} candidate structures exceed enumeration budget {budget}"
        )
    return [tuple(combo) for combo in itertools.product(*per_point)]


def structure_from_sets(
    universe: FilterUniverse,
    sets_by_point: Sequence[frozenset[int]],
    group: FiniteGroup | None = None,
) -> ConvergenceStructure:
    pairs = [(i, x) for x, s in enumerate(sets_by_point) for i in s]
    return ConvergenceStructure(universe, pairs, group)


def enumerate_group_structures(
    group: FiniteGroup,
    universe: FilterUniverse,
    budget: int = 20_000,
    tables: ConvTables | None = None,
) -> list[ConvergenceStructure]:
    """All relations satisfying TC1, TC2, TCG1 and TCG2, in a fixed order."""
    if tables is None:
        tables = ConvTables(universe, group)
    out = []
    for sets in enumerate_structures(universe, budget):
        if _tcg_holds(group, tables, sets):
            out.append(structure_from_sets(universe, sets, group))
    return out


def _tcg_holds(group: FiniteGroup, tables: ConvTables, sets) -> bool:
    n = group.size
    for x in range(n):
        sx = sets[x]
        for y in range(n):
            target = sets[group.op(x, y)]
            sy = sets[y]
            for i in sx:
                row = tables.odot[i]
                for j in sy:
                    if row[j] not in target:
                        return False
    for x in range(n):
        target = sets[group.inv[x]]
        for i in sets[x]:
            if tables.invf[i] not in target:
                return False
    return True
