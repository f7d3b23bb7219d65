"""Uniform convergence structures on the square carrier and the round trip
between convergence groups and their induced uniform structures.

The square-carrier universe is generated by need (point filters, lifts,
products of points with filters, transposes and existing compositions,
iterated to closure or budget) unless the full enumeration fits the
budget, in which case the complete universe is used.
"""

from __future__ import annotations

import itertools

from .convergence import (
    ClosureInsufficient,
    ConvergenceStructure,
    FilterUniverse,
    complete_universe,
)
from .fuzzy import FiniteGroup, square_carrier
from .report import BudgetExceeded, Budgets, CheckResult, failed, verdict
from .tfilter import (
    CompositionUndefined,
    TFilter,
    compose_exists,
    compose_filter,
    filter_leq,
    intersect_filter,
    lift_filter,
    odot_filter,
    point_filter,
    product_filter,
    transpose_filter,
)


class UniformStructure:
    """A subset Phi of a square-carrier filter universe."""

    def __init__(
        self,
        universe: FilterUniverse,
        members: frozenset[int],
        group: FiniteGroup | None = None,
    ):
        self.universe = universe
        self.members = frozenset(members)
        self.group = group

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __repr__(self) -> str:
        return f"UniformStructure({len(self.members)} of {len(self.universe)} filters)"


def check_tuc(phi: UniformStructure, budgets: Budgets = Budgets()) -> list[CheckResult]:
    """Per-axiom report: diagonal points (TUC1), up-closure (TUC2),
    closure under existing compositions (TUC3) and under transposes
    (TUC4), plus the separate limit-flag closure under intersections,
    which this workbench names TUC5-limit because the source numbering
    reuses TUC4 for it.
    """
    u = phi.universe
    sq = u.carrier
    out: list[CheckResult] = []
    ok = u.complete

    w = None
    for x in range(sq.left.size):  # type: ignore[attr-defined]
        d = sq.pair(x, x)  # type: ignore[attr-defined]
        if u.point_index(d) not in phi.members:
            w = f"[( {sq.left.labels[x]},{sq.left.labels[x]} )] missing"
            break
    out.append(verdict("TUC1", ok) if w is None else failed("TUC1", w))

    w = None
    for i in sorted(phi.members):
        for j in range(len(u)):
            if u.leq(i, j) and j not in phi.members:
                w = f"{u[i]} in Phi but larger {u[j]} is not"
                break
        if w:
            break
    out.append(verdict("TUC2", ok) if w is None else failed("TUC2", w))

    w = None
    for i in sorted(phi.members):
        for j in sorted(phi.members):
            try:
                comp = compose_filter(u[i], u[j])
            except CompositionUndefined:
                continue
            k = u.require(comp, "composition")
            if k not in phi.members:
                w = f"{u[i]} o {u[j]} exists but is not in Phi"
                break
        if w:
            break
    out.append(verdict("TUC3", ok) if w is None else failed("TUC3", w))

    w = None
    for i in sorted(phi.members):
        j = u.require(transpose_filter(u[i]), "transpose")
        if j not in phi.members:
            w = f"transpose of {u[i]} is not in Phi"
            break
    out.append(verdict("TUC4", ok) if w is None else failed("TUC4", w))

    w = None
    for i in sorted(phi.members):
        for j in sorted(phi.members):
            k = u.require(intersect_filter(u[i], u[j]), "intersection")
            if k not in phi.members:
                w = f"{u[i]} intersect {u[j]} is not in Phi"
                break
        if w:
            break
    out.append(
        verdict("TUC5-limit", ok, detail="limit-space flag, reported separately")
        if w is None
        else CheckResult("TUC5-limit", "fail", w, "limit-space flag, reported separately")
    )
    return out


# ---------------------------------------------------------------------------
# universe generation and the induced structures


def uniform_universe(c: ConvergenceStructure, budgets: Budgets = Budgets()) -> FilterUniverse:
    """Square-carrier universe adequate for the uniform checks on ``c``."""
    if c.group is None:
        raise ValueError("uniform universe generation needs a group")
    g = c.group
    lat = c.universe.lattice
    sq = square_carrier(g.carrier)
    total = lat.size ** sq.size
    if total <= budgets.enumeration:
        return complete_universe(lat, sq, budgets.enumeration)

    seeds: dict[tuple, TFilter] = {}

    def add(f: TFilter) -> None:
        seeds.setdefault(tuple(m.values for m in f.base), f)

    for d in range(sq.size):
        add(point_filter(lat, sq, d))
    for f in c.universe.filters:
        add(lift_filter(g, f))
    for x in range(g.size):
        px = point_filter(lat, g.carrier, x)
        for f in c.universe.filters:
            add(product_filter(px, f))
    for _ in range(budgets.closure_rounds):
        current = list(seeds.values())
        for f in current:
            add(transpose_filter(f))
        for f, h in itertools.product(current, current):
            if compose_exists(f, h):
                add(compose_filter(f, h))
        if len(seeds) > budgets.enumeration:
            raise BudgetExceeded("square-carrier universe outgrew the budget")
        if len(seeds) == len(current):
            break
    return FilterUniverse(lat, sq, seeds.values(), complete=False)


def phi_from_group(
    c: ConvergenceStructure,
    universe: FilterUniverse | None = None,
    budgets: Budgets = Budgets(),
) -> UniformStructure:
    """Phi induced by a convergence group: F is a member iff some filter
    converging to the identity has its lift below F."""
    if c.group is None:
        raise ValueError("needs a convergence group")
    g = c.group
    if universe is None:
        universe = uniform_universe(c, budgets)
    e = g.identity
    lifts = [
        lift_filter(g, c.universe[i]) for i in sorted(c.filters_at(e))
    ]
    members = frozenset(
        i
        for i in range(len(universe))
        if any(filter_leq(lf, universe[i]) for lf in lifts)
    )
    return UniformStructure(universe, members, g)


def conv_from_phi(
    phi: UniformStructure, x_universe: FilterUniverse
) -> ConvergenceStructure:
    """F converges to x iff [x] x F is a member of Phi."""
    sq = phi.universe.carrier
    lat = phi.universe.lattice
    left = sq.left  # type: ignore[attr-defined]
    pairs = []
    for x in range(left.size):
        px = point_filter(lat, left, x)
        for i in range(len(x_universe)):
            k = phi.universe.require(product_filter(px, x_universe[i]), "product")
            if k in phi.members:
                pairs.append((i, x))
    return ConvergenceStructure(x_universe, pairs, phi.group)


def lift_product_lemma(
    c_universe: FilterUniverse, group: FiniteGroup
) -> tuple[bool, str | None]:
    """G_l below [x] x F iff [x] (.) G below F, for all G, F, x."""
    lat = c_universe.lattice
    for gi in range(len(c_universe)):
        gl = lift_filter(group, c_universe[gi])
        for x in range(group.size):
            px = point_filter(lat, group.carrier, x)
            shifted = odot_filter(group, px, c_universe[gi])
            for fi in range(len(c_universe)):
                lhs = filter_leq(gl, product_filter(px, c_universe[fi]))
                rhs = filter_leq(shifted, c_universe[fi])
                if lhs != rhs:
                    return (
                        False,
                        f"G={c_universe[gi]} F={c_universe[fi]} x={group.carrier.labels[x]}: "
                        f"lift-containment={lhs} product-containment={rhs}",
                    )
    return True, None


def uniformization_check(
    c: ConvergenceStructure,
    universe: FilterUniverse | None = None,
    budgets: Budgets = Budgets(),
) -> list[CheckResult]:
    """Round trip: the convergence induced by Phi^C equals C.

    The stepping-stone lemma relating lifts, products and translated
    filters is checked first, exhaustively over the declared universe.
    """
    if c.group is None:
        raise ValueError("needs a convergence group")
    out: list[CheckResult] = []
    ok, w = lift_product_lemma(c.universe, c.group)
    out.append(
        verdict("lift-product-lemma", c.universe.complete)
        if ok
        else failed("lift-product-lemma", w)
    )
    phi = phi_from_group(c, universe, budgets)
    back = conv_from_phi(phi, c.universe)
    if back.converges == c.converges:
        out.append(verdict("uniformization-round-trip", c.universe.complete))
    else:
        diff = sorted(back.converges ^ c.converges)
        i, x = diff[0]
        side = "gained" if (i, x) in back.converges else "lost"
        out.append(
            failed(
                "uniformization-round-trip",
                f"{side} pair F={c.universe[i]} x={c.universe.carrier.labels[x]}",
            )
        )
    return out
