"""Function spaces of continuous maps with the power convergence structure.

The space C(X,Y) is materialized by brute force over all |Y|^|X| graphs.
Its filter universe is generated from point filters and closed under the
pointwise-group product and inverse, so power verdicts are always tagged
relative to that universe; the report records the completeness flags of
both sides.  Everything here presumes the meet-over-join distributive
lattice flag unless explicitly overridden.
"""

from __future__ import annotations

import itertools

from .convergence import (
    ConvergenceStructure,
    FilterUniverse,
    continuous,
    is_group_by_tcg,
    product_structure,
)
from .fuzzy import (
    Carrier,
    FiniteGroup,
    FiniteMap,
    compose_map,
    make_group,
    product_carrier,
    product_map,
)
from .report import BudgetExceeded, Budgets, CheckResult, failed, relative, verdict
from .tfilter import (
    TFilter,
    filter_eq,
    image_filter,
    inverse_filter,
    odot_filter,
    point_filter,
    product_filter,
)


def continuous_maps(cx: ConvergenceStructure, cy: ConvergenceStructure) -> list[FiniteMap]:
    """Exactly the continuous maps X -> Y, lexicographic by graph."""
    x, y = cx.universe.carrier, cy.universe.carrier
    out = []
    for graph in itertools.product(range(y.size), repeat=x.size):
        f = FiniteMap(x, y, graph)
        ok, _ = continuous(f, cx, cy)
        if ok:
            out.append(f)
    return out


class ContinuousMapSpace:
    """C(X,Y) with its pointwise group and power convergence structure."""

    def __init__(
        self,
        source: ConvergenceStructure,
        target: ConvergenceStructure,
        maps: list[FiniteMap],
        carrier: Carrier,
        group: FiniteGroup | None,
        ev: FiniteMap,
        universe: FilterUniverse,
        structure: ConvergenceStructure,
    ):
        self.source = source
        self.target = target
        self.maps = tuple(maps)
        self.carrier = carrier
        self.group = group
        self.ev = ev
        self.universe = universe
        self.structure = structure

    def map_index(self, f: FiniteMap) -> int | None:
        for i, g in enumerate(self.maps):
            if g.graph == f.graph:
                return i
        return None

    def __repr__(self) -> str:
        return f"ContinuousMapSpace({len(self.maps)} maps)"


def build_power(
    cx: ConvergenceStructure,
    cy: ConvergenceStructure,
    budgets: Budgets = Budgets(),
    allow_non_cd: bool = False,
) -> ContinuousMapSpace:
    """Materialize C(X,Y), its pointwise group, and the power structure.

    F converges to f iff for every point x and every filter G converging
    to x the ev-image of F x G converges to f(x); the G quantifier runs
    over the declared universe of the source structure.
    """
    lat = cx.universe.lattice
    if not lat.is_cd and not allow_non_cd:
        raise ValueError(
            "power construction expects the meet-over-join distributive flag; "
            "pass allow_non_cd=True to hunt counterexamples"
        )
    maps = continuous_maps(cx, cy)
    ycar = cy.universe.carrier
    labels = tuple(
        "[" + " ".join(ycar.labels[v] for v in f.graph) + "]" for f in maps
    )
    carrier = Carrier(labels)

    group = None
    if cy.group is not None:
        index = {f.graph: i for i, f in enumerate(maps)}
        table = []
        for f in maps:
            row = []
            for g in maps:
                prod = tuple(cy.group.op(a, b) for a, b in zip(f.graph, g.graph))
                j = index.get(prod)
                if j is None:
                    raise RuntimeError(
                        "pointwise product of continuous maps is not continuous"
                    )
                row.append(j)
            table.append(row)
        group = make_group(labels, table)
        rmap = cy.group.inv_map()
        for f in maps:
            if index.get(compose_map(rmap, f).graph) is None:
                raise RuntimeError("pointwise inverse of a continuous map escaped")

    ev = FiniteMap(
        product_carrier(carrier, cx.universe.carrier),
        ycar,
        tuple(f.graph[x] for f in maps for x in range(cx.universe.carrier.size)),
    )
    universe = _map_universe(lat, carrier, group, budgets)
    space = ContinuousMapSpace(
        cx, cy, maps, carrier, group, ev, universe, None  # structure set below
    )
    pairs = [
        (i, fi)
        for i in range(len(universe))
        for fi in range(len(maps))
        if power_converges(space, universe[i], fi)
    ]
    space.structure = ConvergenceStructure(universe, pairs, group)
    _verify_tc(space)
    return space


def _map_universe(lat, carrier, group, budgets) -> FilterUniverse:
    seeds: dict[tuple, TFilter] = {}

    def add(f: TFilter) -> None:
        seeds.setdefault(tuple(m.values for m in f.base), f)

    for i in range(carrier.size):
        add(point_filter(lat, carrier, i))
    if group is not None:
        for _ in range(budgets.closure_rounds):
            current = list(seeds.values())
            for f in current:
                add(inverse_filter(group, f))
            for f, g in itertools.product(current, current):
                add(odot_filter(group, f, g))
            if len(seeds) > budgets.enumeration:
                raise BudgetExceeded("map-filter universe outgrew the budget")
            if len(seeds) == len(current):
                break
    return FilterUniverse(lat, carrier, seeds.values(), complete=False)


def power_converges(space: ContinuousMapSpace, flt: TFilter, fi: int) -> bool:
    """The defining predicate of the power structure, usable on any filter
    over the map carrier (not only universe members)."""
    cx, cy = space.source, space.target
    f = space.maps[fi]
    for j, x in sorted(cx.converges):
        img = image_filter(space.ev, product_filter(flt, cx.universe[j]))
        k = cy.universe.require(img, "image:ev")
        if not cy.converges_to(k, f.graph[x]):
            return False
    return True


def _verify_tc(space: ContinuousMapSpace) -> None:
    s = space.structure
    for fi in range(len(space.maps)):
        if not s.converges_to(s.universe.point_index(fi), fi):
            raise RuntimeError("power structure lost a point filter (TC1)")
    for i, fi in s.converges:
        for j in range(len(s.universe)):
            if s.universe.leq(i, j) and not s.converges_to(j, fi):
                raise RuntimeError("power structure is not up-closed (TC2)")


# ---------------------------------------------------------------------------
# the distributivity lemma on product-filter images


def lemma_cd_check(
    f1: FiniteMap, f2: FiniteMap, flt1: TFilter, flt2: TFilter
) -> tuple[bool, str | None]:
    """(f1 x f2)=>(F1 x F2) equals f1=>(F1) x f2=>(F2), by mutual containment."""
    lhs = image_filter(product_map(f1, f2), product_filter(flt1, flt2))
    rhs = product_filter(image_filter(f1, flt1), image_filter(f2, flt2))
    if filter_eq(lhs, rhs):
        return True, None
    return False, f"lhs={lhs} rhs={rhs}"


# ---------------------------------------------------------------------------
# group checks on the power object


def check_power_group(
    space: ContinuousMapSpace, budgets: Budgets = Budgets()
) -> list[CheckResult]:
    """Group laws of the pointwise operation, the image containment
    f=>(F) (.) g=>(F) below (f.g)=>(F), continuity of evaluation, and
    TCG1/TCG2 of the power structure relative to its universe."""
    out: list[CheckResult] = []
    flags = (
        f"universes: maps {'complete' if space.universe.complete else 'relative'}, "
        f"source {'complete' if space.source.universe.complete else 'relative'}"
    )
    if space.group is None:
        return [failed("pointwise-group", "target carries no group")]
    out.append(relative("pointwise-group", detail=f"order {space.group.size}; {flags}"))

    gy = space.target.group
    w = None
    for fi, f in enumerate(space.maps):
        for gi, g in enumerate(space.maps):
            fg = space.maps[space.group.op(fi, gi)]
            for i in range(len(space.source.universe)):
                flt = space.source.universe[i]
                lhs = odot_filter(gy, image_filter(f, flt), image_filter(g, flt))
                rhs = image_filter(fg, flt)
                if not all(rhs.member(b) for b in lhs.base):
                    w = f"f={f!r} g={g!r} F={flt}"
                    break
            if w:
                break
        if w:
            break
    out.append(
        relative("odot-image-containment") if w is None else failed("odot-image-containment", w)
    )

    prod = product_structure(space.structure, space.source, budget=budgets.enumeration)
    ok, w = continuous(space.ev, prod, space.target)
    out.append(relative("ev-continuous") if ok else failed("ev-continuous", w))

    ok, w = is_group_by_tcg(space.structure)
    out.append(relative("power-tcg", detail=flags) if ok else failed("power-tcg", w))
    return out


def ev_homomorphism_witness(space: ContinuousMapSpace) -> str | None:
    """A witness that ev fails to be a group homomorphism, if one exists.

    The failure is expected on most instances but is never asserted
    universally; callers decide what to make of ``None``.
    """
    if space.group is None or space.source.group is None:
        return None
    gx, gy = space.source.group, space.target.group
    for fi, gi in itertools.product(range(len(space.maps)), repeat=2):
        for x, y in itertools.product(range(gx.size), repeat=2):
            f, g = space.maps[fi], space.maps[gi]
            lhs = space.maps[space.group.op(fi, gi)].graph[gx.op(x, y)]
            rhs = gy.op(f.graph[x], g.graph[y])
            if lhs != rhs:
                return (
                    f"ev((f,x).(g,y)) != ev(f,x).ev(g,y) at f={f!r} g={g!r} "
                    f"x={gx.carrier.labels[x]} y={gx.carrier.labels[y]}"
                )
    return None


# ---------------------------------------------------------------------------
# exponential transpose


def diamond_map(space: ContinuousMapSpace, phi: FiniteMap, z_carrier: Carrier) -> FiniteMap:
    """phi-diamond: z |-> phi(z, -), valued in the map carrier."""
    src = phi.source
    graph = []
    for z in range(z_carrier.size):
        section = tuple(
            phi.graph[src.pair(z, x)] for x in range(space.source.universe.carrier.size)
        )
        idx = None
        for i, f in enumerate(space.maps):
            if f.graph == section:
                idx = i
                break
        if idx is None:
            raise ValueError(f"section at z={z_carrier.labels[z]} is not continuous")
        graph.append(idx)
    return FiniteMap(z_carrier, space.carrier, tuple(graph))


def square_map(space: ContinuousMapSpace, psi: FiniteMap) -> FiniteMap:
    """psi-square: (z, x) |-> psi(z)(x) on the product carrier."""
    zc = psi.source
    xc = space.source.universe.carrier
    pc = product_carrier(zc, xc)
    graph = tuple(
        space.maps[psi.graph[z]].graph[x] for z in range(zc.size) for x in range(xc.size)
    )
    return FiniteMap(pc, space.target.universe.carrier, graph)


def transpose_check(
    space: ContinuousMapSpace,
    phi: FiniteMap,
    cz: ConvergenceStructure,
    budgets: Budgets = Budgets(),
) -> list[CheckResult]:
    """Verify the exponential transpose of a continuous phi: Z x X -> Y.

    Checks, in order: continuity of phi on the product space, that every
    section lands in C(X,Y), the composition identity ev o (phi-diamond x
    id) = phi, continuity of phi-diamond into the power structure, and
    uniqueness by scanning every map Z -> C(X,Y) for the identity.
    """
    prod = product_structure(cz, space.source, budget=budgets.enumeration)
    ok, w = continuous(phi, prod, space.target)
    if not ok:
        raise ValueError(f"phi is not continuous: {w}")
    out: list[CheckResult] = [relative("phi-continuous")]

    try:
        dia = diamond_map(space, phi, cz.universe.carrier)
    except ValueError as exc:
        return out + [failed("diamond-in-maps", str(exc))]
    out.append(relative("diamond-in-maps"))

    src = phi.source
    w = None
    for z in range(cz.universe.carrier.size):
        for x in range(space.source.universe.carrier.size):
            if space.maps[dia.graph[z]].graph[x] != phi.graph[src.pair(z, x)]:
                w = f"z={cz.universe.carrier.labels[z]} x={x}"
    out.append(
        relative("transpose-identity") if w is None else failed("transpose-identity", w)
    )

    w = None
    for j, z in sorted(cz.converges):
        img = image_filter(dia, cz.universe[j])
        if not power_converges(space, img, dia.graph[z]):
            w = f"F={cz.universe[j]} z={cz.universe.carrier.labels[z]}"
            break
    out.append(
        relative("diamond-continuous", detail="evaluated by the power predicate")
        if w is None
        else failed("diamond-continuous", w)
    )

    n_candidates = len(space.maps) ** cz.universe.carrier.size
    if n_candidates > budgets.enumeration:
        raise BudgetExceeded(f"uniqueness scan over {n_candidates} maps exceeds budget")
    matches = []
    for graph in itertools.product(range(len(space.maps)), repeat=cz.universe.carrier.size):
        if all(
            space.maps[graph[z]].graph[x] == phi.graph[src.pair(z, x)]
            for z in range(cz.universe.carrier.size)
            for x in range(space.source.universe.carrier.size)
        ):
            matches.append(graph)
    if len(matches) == 1 and matches[0] == dia.graph:
        out.append(
            relative("transpose-unique", detail=f"scanned {n_candidates} candidates")
        )
    else:
        out.append(failed("transpose-unique", f"{len(matches)} factorizations found"))
    return out
