"""Finite complete residuated lattices as explicit operation tables.

Elements are dense integer ids ``0..n-1``; labels are display metadata
only, so no floating-point value ever enters a law check.  Finiteness
plus global bounds certify completeness, and distributivity of ``*`` over
arbitrary joins reduces to binary joins plus bottom.  Instances are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .report import CheckResult, failed, passed

# exhaustive subset checks (I4/I5, CD flag) run up to this many subsets
_SUBSET_CAP = 4096


class LatticeError(ValueError):
    """A candidate table breaks a residuated-lattice law; names the offenders."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class ResiduatedLattice:
    """A complete residuated lattice on a finite carrier.

    ``leq_t``, ``join_t``, ``meet_t`` realize the order; ``star_t`` is the
    monoidal operation and ``arrow_t`` its derived residuum
    ``a -> b = join{c | a*c <= b}``.  Law flags are computed at build time:
    ``is_mv`` (``a v b = (a->b)->b``), ``is_cd`` (binary meets distribute
    over arbitrary joins) and ``is_frame`` (``* = meet``).
    """

    labels: tuple[str, ...]
    leq_t: tuple[tuple[bool, ...], ...]
    join_t: tuple[tuple[int, ...], ...]
    meet_t: tuple[tuple[int, ...], ...]
    star_t: tuple[tuple[int, ...], ...]
    arrow_t: tuple[tuple[int, ...], ...]
    top: int
    bot: int
    is_mv: bool
    is_cd: bool
    is_frame: bool

    @property
    def size(self) -> int:
        return len(self.labels)

    def leq(self, a: int, b: int) -> bool:
        return self.leq_t[a][b]

    def join(self, a: int, b: int) -> int:
        return self.join_t[a][b]

    def meet(self, a: int, b: int) -> int:
        return self.meet_t[a][b]

    def star(self, a: int, b: int) -> int:
        return self.star_t[a][b]

    def arrow(self, a: int, b: int) -> int:
        return self.arrow_t[a][b]

    def join_all(self, items: Iterable[int]) -> int:
        out = self.bot
        for a in items:
            out = self.join_t[out][a]
        return out

    def meet_all(self, items: Iterable[int]) -> int:
        out = self.top
        for a in items:
            out = self.meet_t[out][a]
        return out

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def __repr__(self) -> str:
        flags = "".join(
            f for f, on in (("M", self.is_mv), ("C", self.is_cd), ("F", self.is_frame)) if on
        )
        return f"ResiduatedLattice({len(self.labels)} elements, flags={flags or '-'})"


# ---------------------------------------------------------------------------
# construction


def build_chain(n: int, flavor: str) -> ResiduatedLattice:
    """Chain 0 < 1/(n-1) < ... < 1 with a Lukasiewicz or Godel t-norm."""
    if n < 2:
        raise LatticeError(f"chain needs at least 2 elements, got {n}")
    if flavor not in ("lukasiewicz", "godel"):
        raise LatticeError(f"unknown chain flavor {flavor!r}")
    labels = tuple(str(Fraction(k, n - 1)) for k in range(n))
    leq = tuple(tuple(a <= b for b in range(n)) for a in range(n))
    if flavor == "lukasiewicz":
        star = tuple(tuple(max(0, a + b - (n - 1)) for b in range(n)) for a in range(n))
    else:
        star = tuple(tuple(min(a, b) for b in range(n)) for a in range(n))
    return _assemble(labels, leq, star)


def build_boolean(k: int) -> ResiduatedLattice:
    """Powerset lattice of a k-element set with star = meet."""
    if k < 1:
        raise LatticeError(f"boolean lattice needs k >= 1, got {k}")
    n = 1 << k
    names = "abcdefgh"[:k]

    def label(mask: int) -> str:
        return "{" + ",".join(names[i] for i in range(k) if mask >> i & 1) + "}"

    labels = tuple(label(m) for m in range(n))
    leq = tuple(tuple(a & b == a for b in range(n)) for a in range(n))
    star = tuple(tuple(a & b for b in range(n)) for a in range(n))
    return _assemble(labels, leq, star)


def build_from_tables(
    labels: Sequence[str],
    leq_pairs: Iterable[tuple[int, int]],
    star_table: Sequence[Sequence[int]],
) -> ResiduatedLattice:
    """Assemble and fully validate a lattice from user tables.

    ``leq_pairs`` is closed reflexively and transitively before the order
    checks, so a model file only needs to list covering pairs.
    """
    n = len(labels)
    if len(set(labels)) != n:
        raise LatticeError("duplicate element labels")
    reach = [[False] * n for _ in range(n)]
    for a in range(n):
        reach[a][a] = True
    for a, b in leq_pairs:
        reach[a][b] = True
    for m in range(n):  # Floyd-Warshall transitive closure
        for a in range(n):
            if reach[a][m]:
                row_a, row_m = reach[a], reach[m]
                for b in range(n):
                    if row_m[b]:
                        row_a[b] = True
    leq = tuple(tuple(row) for row in reach)
    star = tuple(tuple(int(v) for v in row) for row in star_table)
    if len(star) != n or any(len(row) != n for row in star):
        raise LatticeError(f"star table must be {n}x{n}")
    for row in star:
        for v in row:
            if not 0 <= v < n:
                raise LatticeError(f"star entry {v} out of range")
    return _assemble(tuple(labels), leq, star)


def _assemble(labels, leq, star) -> ResiduatedLattice:
    n = len(labels)
    _check_order(labels, leq)
    join, meet = _derive_bounds(labels, leq)
    top = next(a for a in range(n) if all(leq[b][a] for b in range(n)))
    bot = next(a for a in range(n) if all(leq[a][b] for b in range(n)))
    _check_star(labels, leq, join, star, top, bot)
    arrow = tuple(
        tuple(
            _join_all(join, bot, (c for c in range(n) if leq[star[a][c]][b]))
            for b in range(n)
        )
        for a in range(n)
    )
    is_frame = star == meet
    is_mv, _ = _mv_flag(leq, join, arrow, top)
    is_cd, _ = _cd_flag(leq, join, meet, bot)
    return ResiduatedLattice(
        labels, leq, join, meet, star, arrow, top, bot, is_mv, is_cd, is_frame
    )


def _join_all(join_t, bot, items) -> int:
    out = bot
    for a in items:
        out = join_t[out][a]
    return out


def _check_order(labels, leq) -> None:
    n = len(labels)
    for a in range(n):
        if not leq[a][a]:
            raise LatticeError(f"order not reflexive at {labels[a]}", (labels[a],))
    for a in range(n):
        for b in range(n):
            if a != b and leq[a][b] and leq[b][a]:
                raise LatticeError(
                    f"order not antisymmetric on {labels[a]}, {labels[b]}",
                    (labels[a], labels[b]),
                )
            for c in range(n):
                if leq[a][b] and leq[b][c] and not leq[a][c]:
                    raise LatticeError(
                        f"order not transitive on {labels[a]} <= {labels[b]} <= {labels[c]}",
                        (labels[a], labels[b], labels[c]),
                    )


def _derive_bounds(labels, leq):
    """Compute join/meet tables as least upper / greatest lower bounds."""
    n = len(labels)
    join = [[0] * n for _ in range(n)]
    meet = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            ubs = [c for c in range(n) if leq[a][c] and leq[b][c]]
            least = [c for c in ubs if all(leq[c][d] for d in ubs)]
            if len(least) != 1:
                raise LatticeError(
                    f"not-a-lattice: no least upper bound for {labels[a]}, {labels[b]}",
                    (labels[a], labels[b]),
                )
            join[a][b] = least[0]
            lbs = [c for c in range(n) if leq[c][a] and leq[c][b]]
            greatest = [c for c in lbs if all(leq[d][c] for d in lbs)]
            if len(greatest) != 1:
                raise LatticeError(
                    f"not-a-lattice: no greatest lower bound for {labels[a]}, {labels[b]}",
                    (labels[a], labels[b]),
                )
            meet[a][b] = greatest[0]
    if not any(all(leq[b][a] for b in range(n)) for a in range(n)):
        raise LatticeError("not-a-lattice: no top element")
    if not any(all(leq[a][b] for b in range(n)) for a in range(n)):
        raise LatticeError("not-a-lattice: no bottom element")
    return tuple(tuple(r) for r in join), tuple(tuple(r) for r in meet)


def _check_star(labels, leq, join, star, top, bot) -> None:
    n = len(labels)
    for a in range(n):
        for b in range(n):
            if star[a][b] != star[b][a]:
                raise LatticeError(
                    f"star-axiom-violation: not commutative at {labels[a]}, {labels[b]}",
                    (labels[a], labels[b]),
                )
            for c in range(n):
                if star[star[a][b]][c] != star[a][star[b][c]]:
                    raise LatticeError(
                        "star-axiom-violation: not associative at "
                        f"{labels[a]}, {labels[b]}, {labels[c]}",
                        (labels[a], labels[b], labels[c]),
                    )
    for a in range(n):
        if star[a][top] != a:
            raise LatticeError(
                f"no-unit: {labels[a]} * {labels[top]} = {labels[star[a][top]]}",
                (labels[a], labels[top]),
            )
        if star[a][bot] != bot:
            raise LatticeError(
                f"distributivity-violation: {labels[a]} * bot != bot", (labels[a],)
            )
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if star[a][join[b][c]] != join[star[a][b]][star[a][c]]:
                    raise LatticeError(
                        "distributivity-violation: star over join fails at "
                        f"{labels[a]}, {labels[b]}, {labels[c]}",
                        (labels[a], labels[b], labels[c]),
                    )


def _mv_flag(leq, join, arrow, top):
    n = len(leq)
    for a in range(n):
        for b in range(n):
            if join[a][b] != arrow[arrow[a][b]][b]:
                return False, (a, b)
    return True, None


def _cd_flag(leq, join, meet, bot):
    """Meet-over-join distributivity, exhaustive over subsets when small.

    On a finite lattice the subset form is equivalent to the binary form
    plus ``a /\\ bot = bot``; both routes are kept and cross-checked.
    """
    n = len(leq)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]:
                    return False, (a, b, c)
    if (1 << n) <= _SUBSET_CAP:
        for a in range(n):
            for mask in range(1 << n):
                sub = [s for s in range(n) if mask >> s & 1]
                lhs = meet[a][_join_all(join, bot, sub)]
                rhs = _join_all(join, bot, (meet[a][s] for s in sub))
                if lhs != rhs:
                    return False, (a, tuple(sub))
    return True, None


# ---------------------------------------------------------------------------
# axiom report


def verify_axioms(lat: ResiduatedLattice) -> list[CheckResult]:
    """Exhaustively re-check every law on built tables, one verdict each.

    Residuation properties I1-I5 are included; I4/I5 quantify over all
    subsets of the carrier while ``2^|L|`` stays under the subset cap.
    """
    n = lat.size
    lab = lat.labels
    out: list[CheckResult] = []

    def run(name: str, witness):
        if witness is None:
            out.append(passed(name))
        else:
            out.append(failed(name, witness))

    run("order-partial", _find_order_violation(lat))
    run("bounds", _find_bounds_violation(lat))
    run("join-lub", _find_lub_violation(lat))
    run("meet-glb", _find_glb_violation(lat))

    w = None
    for a in range(n):
        for b in range(n):
            if lat.star(a, b) != lat.star(b, a):
                w = f"a={lab[a]} b={lab[b]}"
    run("star-commutative", w)
    w = None
    for a, b, c in itertools.product(range(n), repeat=3):
        if lat.star(lat.star(a, b), c) != lat.star(a, lat.star(b, c)):
            w = f"a={lab[a]} b={lab[b]} c={lab[c]}"
    run("star-associative", w)
    run(
        "star-unit",
        next((f"a={lab[a]}" for a in range(n) if lat.star(a, lat.top) != a), None),
    )
    run(
        "star-bottom",
        next((f"a={lab[a]}" for a in range(n) if lat.star(a, lat.bot) != lat.bot), None),
    )
    w = None
    for a, b, c in itertools.product(range(n), repeat=3):
        if lat.star(a, lat.join(b, c)) != lat.join(lat.star(a, b), lat.star(a, c)):
            w = f"a={lab[a]} b={lab[b]} c={lab[c]}"
    run("star-distributes-join", w)

    w = None
    for a in range(n):
        for b in range(n):
            best = lat.join_all(c for c in range(n) if lat.leq(lat.star(a, c), b))
            if lat.arrow(a, b) != best:
                w = f"a={lab[a]} b={lab[b]}"
    run("arrow-residuum", w)
    w = None
    for a, b, c in itertools.product(range(n), repeat=3):
        if lat.leq(lat.star(a, c), b) != lat.leq(c, lat.arrow(a, b)):
            w = f"a={lab[a]} b={lab[b]} c={lab[c]}"
    run("adjunction", w)

    w = None
    for a in range(n):
        for b in range(n):
            if (lat.arrow(a, b) == lat.top) != lat.leq(a, b):
                w = f"a={lab[a]} b={lab[b]}"
    run("I1", w)
    run(
        "I2",
        next(
            (
                f"a={lab[a]} b={lab[b]}"
                for a in range(n)
                for b in range(n)
                if not lat.leq(lat.star(a, lat.arrow(a, b)), b)
            ),
            None,
        ),
    )
    w = None
    for a, b, c in itertools.product(range(n), repeat=3):
        if lat.arrow(a, lat.arrow(b, c)) != lat.arrow(lat.star(a, b), c):
            w = f"a={lab[a]} b={lab[b]} c={lab[c]}"
    run("I3", w)

    if (1 << n) <= _SUBSET_CAP:
        w4 = w5 = None
        for mask in range(1 << n):
            sub = [s for s in range(n) if mask >> s & 1]
            for b in range(n):
                lhs = lat.arrow(lat.join_all(sub), b)
                rhs = lat.meet_all(lat.arrow(s, b) for s in sub)
                if lhs != rhs:
                    w4 = f"S={{{','.join(lab[s] for s in sub)}}} b={lab[b]}"
                lhs = lat.arrow(b, lat.meet_all(sub))
                rhs = lat.meet_all(lat.arrow(b, s) for s in sub)
                if lhs != rhs:
                    w5 = f"S={{{','.join(lab[s] for s in sub)}}} a={lab[b]}"
        run("I4", w4)
        run("I5", w5)
    else:
        out.append(passed("I4", detail="subset check capped, binary form only"))
        out.append(passed("I5", detail="subset check capped, binary form only"))

    mv, mvw = _mv_flag(lat.leq_t, lat.join_t, lat.arrow_t, lat.top)
    out.append(
        CheckResult(
            "flag-mv",
            "pass",
            None if mv else f"a={lab[mvw[0]]} b={lab[mvw[1]]}",
            f"is_mv={mv}",
        )
    )
    cd, _ = _cd_flag(lat.leq_t, lat.join_t, lat.meet_t, lat.bot)
    out.append(passed("flag-cd", detail=f"is_cd={cd}"))
    out.append(passed("flag-frame", detail=f"is_frame={lat.is_frame}"))
    if lat.is_frame and not cd:
        out.append(failed("frame-implies-cd", "frame lattice without CD"))
    else:
        out.append(passed("frame-implies-cd"))
    return out


def _find_order_violation(lat):
    n, lab = lat.size, lat.labels
    for a in range(n):
        if not lat.leq(a, a):
            return f"reflexivity at {lab[a]}"
    for a in range(n):
        for b in range(n):
            if a != b and lat.leq(a, b) and lat.leq(b, a):
                return f"antisymmetry at {lab[a]}, {lab[b]}"
            for c in range(n):
                if lat.leq(a, b) and lat.leq(b, c) and not lat.leq(a, c):
                    return f"transitivity at {lab[a]}, {lab[b]}, {lab[c]}"
    return None


def _find_bounds_violation(lat):
    n, lab = lat.size, lat.labels
    for a in range(n):
        if not lat.leq(a, lat.top):
            return f"{lab[a]} not below top"
        if not lat.leq(lat.bot, a):
            return f"bottom not below {lab[a]}"
    return None


def _find_lub_violation(lat):
    n, lab = lat.size, lat.labels
    for a in range(n):
        for b in range(n):
            j = lat.join(a, b)
            if not (lat.leq(a, j) and lat.leq(b, j)):
                return f"join({lab[a]},{lab[b]}) not an upper bound"
            for c in range(n):
                if lat.leq(a, c) and lat.leq(b, c) and not lat.leq(j, c):
                    return f"join({lab[a]},{lab[b]}) not least (vs {lab[c]})"
    return None


def _find_glb_violation(lat):
    n, lab = lat.size, lat.labels
    for a in range(n):
        for b in range(n):
            m = lat.meet(a, b)
            if not (lat.leq(m, a) and lat.leq(m, b)):
                return f"meet({lab[a]},{lab[b]}) not a lower bound"
            for c in range(n):
                if lat.leq(c, a) and lat.leq(c, b) and not lat.leq(c, m):
                    return f"meet({lab[a]},{lab[b]}) not greatest (vs {lab[c]})"
    return None
