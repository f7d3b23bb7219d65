"""Theorem suites: named batches of checks dispatched over a parsed model.

Each suite draws on one module's operations and yields CheckResults whose
names are prefixed with the suite name.  A model whose lattice tables
fail validation turns every requested suite into a failing verdict that
carries the construction diagnostic as its witness; budget and closure
shortfalls surface as skipped entries, never as silent truncation.

The runner executes suites sequentially; all inputs are immutable, so a
parallel runner would only need an order-independent merge of entries.
"""

from __future__ import annotations

import itertools
import time
from random import Random

from . import convergence as cv
from . import power as pw
from . import uniform as un
from .fuzzy import (
    FiniteMap,
    FuzzySet,
    all_fuzzy_sets,
    constant_map,
    fz_char,
    fz_inv,
    fz_odot,
    fz_times,
    identity_map,
    image,
    lift_l,
    preimage,
    projection_maps,
    sample_fuzzy_sets,
    square_carrier,
    subsethood,
    translate,
    transpose,
)
from .lattice import verify_axioms
from .model import ModelDocument
from .report import (
    BudgetExceeded,
    Budgets,
    CheckResult,
    FAIL,
    Report,
    failed,
    passed,
    skipped,
)
from .tfilter import (
    filter_eq,
    generate,
    image_filter,
    inverse_filter,
    materialize,
    odot_filter,
    point_filter,
    product_filter,
)


class _Unavailable(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class _Session:
    """Lazily assembled objects shared by the suites of one run."""

    def __init__(self, doc: ModelDocument, budgets: Budgets):
        self.doc = doc
        self.budgets = budgets
        self._universe = None
        self._structure = None
        self._tables = None

    @property
    def lattice(self):
        if self.doc.lattice is None:
            raise _Unavailable(self.doc.lattice_error or "no lattice")
        return self.doc.lattice

    @property
    def group(self):
        if self.doc.group is None:
            raise _Unavailable("model declares no [group] section")
        return self.doc.group

    @property
    def universe(self) -> cv.FilterUniverse:
        if self._universe is None:
            self._universe = cv.complete_universe(
                self.lattice, self.group.carrier, self.budgets.enumeration
            )
        return self._universe

    @property
    def structure(self) -> cv.ConvergenceStructure:
        if self._structure is None:
            kind = self.doc.convergence_kind
            if kind == "discrete":
                self._structure = cv.discrete_structure(self.universe, self.group)
            elif kind == "indiscrete":
                self._structure = cv.indiscrete_structure(self.universe, self.group)
            else:
                pairs = []
                labels = self.group.carrier.labels
                for fname, plabel in self.doc.convergence_pairs:
                    i = self.universe.index(self.doc.filters[fname])
                    if i is None:
                        raise _Unavailable(f"declared filter {fname!r} is not in the universe")
                    pairs.append((i, labels.index(plabel)))
                self._structure = cv.ConvergenceStructure(self.universe, pairs, self.group)
        return self._structure

    @property
    def tables(self) -> cv.ConvTables:
        if self._tables is None:
            self._tables = cv.ConvTables(self.universe, self.group)
        return self._tables

    def fuzzy_pool(self, carrier, rng) -> tuple[list[FuzzySet], str]:
        total = self.lattice.size ** carrier.size
        if total <= self.budgets.enumeration:
            return list(all_fuzzy_sets(self.lattice, carrier)), "exhaustive"
        pool = sample_fuzzy_sets(self.lattice, carrier, rng, self.budgets.sample)
        return pool, f"sampled n={len(pool)}"

    def pairs_of(self, pool, rng) -> tuple[list, str]:
        if len(pool) ** 2 <= self.budgets.enumeration:
            return [(a, b) for a in pool for b in pool], "exhaustive"
        out = [(rng.choice(pool), rng.choice(pool)) for _ in range(self.budgets.sample)]
        return out, f"sampled n={len(out)}"

    def quads_of(self, pool, rng) -> tuple[list, str]:
        if len(pool) ** 4 <= self.budgets.enumeration:
            return list(itertools.product(pool, repeat=4)), "exhaustive"
        out = [tuple(rng.choice(pool) for _ in range(4)) for _ in range(self.budgets.sample)]
        return out, f"sampled n={len(out)}"


# ---------------------------------------------------------------------------
# individual suites


def _suite_lattice(s: _Session, rng: Random):
    return verify_axioms(s.lattice)


def _suite_fuzzy(s: _Session, rng: Random):
    lat, g = s.lattice, s.group
    car = g.carrier
    top = lat.top
    out = []
    pool, tag = s.fuzzy_pool(car, rng)
    pairs, ptag = s.pairs_of(pool, rng)
    quads, qtag = s.quads_of(pool, rng)

    def check(name, witness, detail):
        out.append(passed(name, detail) if witness is None else failed(name, witness, detail))

    w = next((str(lam) for lam in pool if translate(g, g.identity, lam) != lam), None)
    check("translate-identity", w, tag)

    w = None
    for x in range(g.size):
        chi = fz_char(lat, car, x)
        for lam in pool:
            if translate(g, x, lam) != fz_odot(g, chi, lam):
                w = f"x={car.labels[x]} lam={lam}"
                break
        if w:
            break
    check("translate-formula", w, tag)

    w = None
    for x in range(g.size):
        for lam, mu in pairs:
            if fz_odot(g, translate(g, x, lam), mu) != translate(g, x, fz_odot(g, lam, mu)):
                w = f"x={car.labels[x]} lam={lam} mu={mu}"
                break
        if w:
            break
    check("translate-associates-odot", w, ptag)

    w = None
    for x in range(g.size):
        for y in range(g.size):
            for lam in pool:
                if translate(g, g.op(x, y), lam) != translate(g, x, translate(g, y, lam)):
                    w = f"x={car.labels[x]} y={car.labels[y]} lam={lam}"
    check("translate-composes", w, tag)

    w = None
    for l1, l2, m1, m2 in quads:
        lhs = fz_odot(g, l1.meet(l2), m1.meet(m2))
        rhs = fz_odot(g, l1, m1).meet(fz_odot(g, l2, m2))
        if not lhs.leq(rhs):
            w = f"{l1} {l2} {m1} {m2}"
            break
    check("odot-meet-bound", w, qtag)

    w = None
    for l1, m1, l2, m2 in quads:
        lhs = lat.meet(subsethood(l1, m1), subsethood(l2, m2))
        if not lat.leq(lhs, subsethood(fz_times(l1, l2), fz_times(m1, m2))):
            w = f"{l1} {m1} {l2} {m2}"
            break
    check("subsethood-product-bound", w, qtag)

    w = None
    for x in range(g.size):
        for lam, mu in pairs:
            if not lat.leq(
                subsethood(lam, mu),
                subsethood(translate(g, x, lam), translate(g, x, mu)),
            ):
                w = f"x={car.labels[x]} lam={lam} mu={mu}"
                break
        if w:
            break
    check("subsethood-translate-bound", w, ptag)

    w = None
    for l1, m1, l2, m2 in quads:
        lhs = lat.meet(subsethood(l1, m1), subsethood(l2, m2))
        if not lat.leq(lhs, subsethood(fz_odot(g, l1, l2), fz_odot(g, m1, m2))):
            w = f"{l1} {m1} {l2} {m2}"
            break
    check("subsethood-odot-bound", w, qtag)

    sq = square_carrier(car)
    p1, p2 = projection_maps(sq)
    w = next(
        (
            f"{l1} {l2}"
            for l1, l2 in pairs
            if preimage(p1, l1).meet(preimage(p2, l2)) != fz_times(l1, l2)
        ),
        None,
    )
    check("projection-meet-is-product", w, ptag)

    sq_pool, sq_tag = s.fuzzy_pool(sq, rng)
    w = next((str(lam) for lam in sq_pool if transpose(transpose(lam)) != lam), None)
    check("transpose-involution", w, sq_tag)

    w = next(
        (str(lam) for lam in pool if transpose(lift_l(g, lam)) != lift_l(g, fz_inv(g, lam))),
        None,
    )
    check("lift-transpose", w, tag)

    w = None
    for graph in itertools.product(range(g.size), repeat=g.size):
        f = FiniteMap(car, car, graph)
        for lam in pool:
            if not lam.leq(preimage(f, image(f, lam))):
                w = f"f={f!r} lam={lam}"
                break
        if w:
            break
    check("zadeh-roundtrip-bound", w, tag)
    return out


def _suite_tfp(s: _Session, rng: Random):
    g, u, t = s.group, s.universe, s.tables
    out = []
    mul = g.mul_map()
    w = None
    for i in range(len(u)):
        for j in range(len(u)):
            lhs = image_filter(mul, product_filter(u[i], u[j]))
            if u.index(lhs) != t.odot[i][j]:
                w = f"F={u[i]} G={u[j]}"
                break
        if w:
            break
    out.append(passed("odot-is-multiplication-image") if w is None else failed("odot-is-multiplication-image", w))

    e = u.point_index(g.identity)
    w = next(
        (
            f"F={u[i]}"
            for i in range(len(u))
            if t.odot[e][i] != i or t.odot[i][e] != i
        ),
        None,
    )
    out.append(passed("identity-filter-is-unit") if w is None else failed("identity-filter-is-unit", w))

    n = len(u)
    if n**3 <= s.budgets.enumeration:
        triples = itertools.product(range(n), repeat=3)
        ttag = "exhaustive"
    else:
        triples = (
            (rng.randrange(n), rng.randrange(n), rng.randrange(n))
            for _ in range(s.budgets.sample)
        )
        ttag = f"sampled n={s.budgets.sample}"
    w = next(
        (
            f"F={u[i]} G={u[j]} H={u[k]}"
            for i, j, k in triples
            if t.odot[t.odot[i][j]][k] != t.odot[i][t.odot[j][k]]
        ),
        None,
    )
    out.append(passed("odot-associative", ttag) if w is None else failed("odot-associative", w, ttag))

    w = None
    for x in range(g.size):
        for y in range(g.size):
            if t.odot[u.point_index(x)][u.point_index(y)] != u.point_index(g.op(x, y)):
                w = f"x={g.carrier.labels[x]} y={g.carrier.labels[y]}"
    out.append(passed("point-filter-product") if w is None else failed("point-filter-product", w))

    w = next(
        (f"F={u[i]}" for i in range(len(u)) if t.invf[t.invf[i]] != i), None
    )
    out.append(passed("inverse-involution") if w is None else failed("inverse-involution", w))

    # base-refinement: building from full member sets instead of canonical
    # bases must generate the same filters
    total = s.lattice.size ** g.carrier.size
    if total <= s.budgets.enumeration:
        w = None
        for i in range(len(u)):
            for j in range(len(u)):
                mem_i = materialize(u[i], s.budgets.enumeration)
                mem_j = materialize(u[j], s.budgets.enumeration)
                big = generate(
                    s.lattice,
                    g.carrier,
                    [fz_odot(g, a, b) for a in mem_i for b in mem_j],
                )
                if not filter_eq(big, u[t.odot[i][j]]):
                    w = f"F={u[i]} G={u[j]}"
                    break
            if w:
                break
        out.append(
            passed("base-refinement-odot") if w is None else failed("base-refinement-odot", w)
        )
    else:
        out.append(skipped("base-refinement-odot", "member sets above budget"))
    return out


def _suite_characterization(s: _Session, rng: Random):
    c = s.structure
    tcg, w1 = cv.is_group_by_tcg(c, s.tables)
    ops, w2 = cv.is_group_by_operations(c, budget=s.budgets.enumeration)
    out = [
        passed("tcg-route", f"holds={tcg}" + (f"; {w1}" if w1 else "")),
        passed("operations-route", f"holds={ops}" + (f"; {w2}" if w2 else "")),
    ]
    if tcg == ops:
        out.append(
            CheckResult(
                "characterization-equivalence",
                "pass" if c.universe.complete else "relative-pass",
                None,
                f"both routes agree: {tcg}",
            )
        )
    else:
        out.append(
            failed(
                "characterization-equivalence",
                f"operations-route={ops} but tcg-route={tcg}",
            )
        )
    return out


def _suite_localization(s: _Session, rng: Random):
    c = s.structure
    tcg, _ = cv.is_group_by_tcg(c, s.tables)
    if not tcg:
        return [skipped("localization", "structure is not a convergence group")]
    ok, w = cv.localization_check(c, s.tables)
    if ok:
        return [CheckResult("localization", "pass" if c.universe.complete else "relative-pass")]
    return [failed("localization", w)]


def _suite_classification(s: _Session, rng: Random):
    out = cv.check_axioms(s.structure, s.budgets)
    if s.doc.convergence_kind == "discrete":
        rngl = Random(0)
        pool, tag = s.fuzzy_pool(s.group.carrier, rngl)
        w = next(
            (
                str(lam)
                for lam in pool
                if cv.lambda_star(s.structure, lam, s.budgets) != lam
            ),
            None,
        )
        out.append(
            passed("lambda-star-identity-on-discrete", tag)
            if w is None
            else failed("lambda-star-identity-on-discrete", w, tag)
        )
    return out


def _suite_uniform_tuc(s: _Session, rng: Random):
    if s.doc.uniform_kind == "from-group":
        tcg, _ = cv.is_group_by_tcg(s.structure, s.tables)
        if not tcg:
            return [skipped("tuc", "structure is not a convergence group")]
        phi = un.phi_from_group(s.structure, budgets=s.budgets)
    else:
        sq = square_carrier(s.group.carrier)
        universe = cv.complete_universe(s.lattice, sq, s.budgets.enumeration)
        members = set()
        for name in s.doc.uniform_members:
            i = universe.index(s.doc.filters[name])
            if i is None:
                return [skipped("tuc", f"declared member {name!r} not in the universe")]
            members.add(i)
        phi = un.UniformStructure(universe, frozenset(members), s.group)
    return un.check_tuc(phi, s.budgets)


def _suite_uniformization(s: _Session, rng: Random):
    c = s.structure
    tcg, _ = cv.is_group_by_tcg(c, s.tables)
    if not tcg:
        return [skipped("uniformization", "structure is not a convergence group")]
    return un.uniformization_check(c, budgets=s.budgets)


def _suite_cd_lemma(s: _Session, rng: Random):
    lat, g, u = s.lattice, s.group, s.universe
    car = g.carrier
    n_maps = car.size**car.size
    if n_maps <= 64:
        maps = [
            FiniteMap(car, car, graph)
            for graph in itertools.product(range(car.size), repeat=car.size)
        ]
        mtag = "exhaustive maps"
    else:
        maps = [
            FiniteMap(car, car, tuple(rng.randrange(car.size) for _ in range(car.size)))
            for _ in range(24)
        ]
        mtag = "sampled maps n=24"
    combos = len(maps) ** 2 * len(u) ** 2
    if combos <= s.budgets.enumeration:
        items = [
            (f1, f2, i, j)
            for f1 in maps
            for f2 in maps
            for i in range(len(u))
            for j in range(len(u))
        ]
        tag = f"exhaustive ({mtag})"
    else:
        items = [
            (
                rng.choice(maps),
                rng.choice(maps),
                rng.randrange(len(u)),
                rng.randrange(len(u)),
            )
            for _ in range(s.budgets.sample)
        ]
        tag = f"sampled n={len(items)} ({mtag})"
    counterexample = None
    for f1, f2, i, j in items:
        ok, w = pw.lemma_cd_check(f1, f2, u[i], u[j])
        if not ok:
            counterexample = f"f1={f1!r} f2={f2!r} F1={u[i]} F2={u[j]}: {w}"
            break
    if lat.is_cd:
        if counterexample is None:
            return [passed("product-image-distribution", tag)]
        return [failed("product-image-distribution", counterexample, tag)]
    detail = f"{tag}; lattice is not CD, lemma run as a counterexample hunt"
    if counterexample is None:
        return [passed("product-image-distribution", detail + "; none found")]
    return [passed("product-image-distribution", detail + f"; found: {counterexample}")]


def _suite_power(s: _Session, rng: Random):
    g = s.group
    if g.size**g.size > 32:
        return [skipped("power", f"|C(X,X)| may reach {g.size**g.size}, above the gate")]
    tcg, _ = cv.is_group_by_tcg(s.structure, s.tables)
    if not tcg:
        return [skipped("power", "structure is not a convergence group")]
    allow = not s.lattice.is_cd
    space = pw.build_power(s.structure, s.structure, s.budgets, allow_non_cd=allow)
    out = [
        passed(
            "map-space",
            f"{len(space.maps)} continuous maps; CD flag {'set' if s.lattice.is_cd else 'absent'}",
        )
    ]
    out.extend(pw.check_power_group(space, s.budgets))
    try:
        out.extend(pw.transpose_check(space, g.mul_map(), s.structure, s.budgets))
    except BudgetExceeded as exc:
        out.append(skipped("transpose", str(exc)))
    return out


SUITES = {
    "lattice-axioms": (_suite_lattice, "residuated-lattice laws and I1-I5"),
    "fuzzy-lemmas": (_suite_fuzzy, "pointwise fuzzy-set identities over the group"),
    "tfp": (_suite_tfp, "filter product algebra over the enumerated universe"),
    "characterization": (_suite_characterization, "operation continuity vs TCG axioms"),
    "localization": (_suite_localization, "convergence determined at the identity"),
    "classification": (_suite_classification, "TC/LT/PT/TT with the lambda-star construction"),
    "uniform-tuc": (_suite_uniform_tuc, "uniform axioms of the declared or induced Phi"),
    "uniformization": (_suite_uniformization, "round trip through the induced uniform structure"),
    "cd-lemma": (_suite_cd_lemma, "product-filter image distribution"),
    "power": (_suite_power, "function-space structure, group and transpose"),
}

ALL_SUITES = "all-theorems"
_ORDER = list(SUITES)


def list_suites() -> list[tuple[str, str]]:
    rows = [(name, doc) for name, (_, doc) in SUITES.items()]
    rows.append((ALL_SUITES, "every suite above, in order"))
    return rows


def resolve_suites(requested) -> list[str]:
    out: list[str] = []
    for name in requested:
        if name == ALL_SUITES:
            out.extend(n for n in _ORDER if n not in out)
        elif name in SUITES:
            if name not in out:
                out.append(name)
        else:
            raise KeyError(f"unknown suite {name!r}")
    return out


def run_suite(
    doc: ModelDocument,
    seed: int = 0,
    budgets: Budgets = Budgets(),
    suites=None,
) -> Report:
    """Run the requested suites (default: the document's) over a model."""
    started = time.perf_counter()
    names = resolve_suites(suites if suites is not None else doc.suites)
    report = Report(seed=seed, budgets=budgets)
    session = _Session(doc, budgets)
    for name in names:
        rng = Random(f"{seed}:{name}")  # str seeding is stable across processes
        fn, _ = SUITES[name]
        try:
            entries = fn(session, rng)
        except _Unavailable as exc:
            if doc.lattice is None:
                report.entries.append(
                    failed(f"{name}/model", exc.reason, "model did not build")
                )
            else:
                report.entries.append(skipped(f"{name}/suite", exc.reason))
            continue
        except cv.ClosureInsufficient as exc:
            report.entries.append(skipped(f"{name}/suite", str(exc)))
            continue
        except BudgetExceeded as exc:
            report.entries.append(skipped(f"{name}/suite", str(exc)))
            continue
        report.entries.extend(
            CheckResult(f"{name}/{e.name}", e.status, e.witness, e.detail)
            for e in entries
        )
    report.elapsed = time.perf_counter() - started
    return report


# ---------------------------------------------------------------------------
# built-in demonstration documents

_DEMO_TEXTS = {
    "z2-boolean-discrete": """\
[lattice]
kind = boolean
k = 1

[group]
kind = builtin
name = z2

[convergence]
kind = discrete

[suites]
run = all-theorems
""",
    "z3-boolean-discrete": """\
[lattice]
kind = boolean
k = 1

[group]
kind = builtin
name = z3

[convergence]
kind = discrete

[suites]
run = all-theorems
""",
    "z4-boolean-discrete": """\
[lattice]
kind = boolean
k = 1

[group]
kind = builtin
name = z4

[convergence]
kind = discrete

[suites]
run = all-theorems
""",
    "klein-boolean-discrete": """\
[lattice]
kind = boolean
k = 1

[group]
kind = builtin
name = klein

[convergence]
kind = discrete

[suites]
run = all-theorems
""",
    "z2-lukasiewicz3-discrete": """\
[lattice]
kind = chain
n = 3
flavor = lukasiewicz

[group]
kind = builtin
name = z2

[convergence]
kind = discrete

[suites]
run = all-theorems
""",
    "z2-boolean-indiscrete": """\
[lattice]
kind = boolean
k = 1

[group]
kind = builtin
name = z2

[convergence]
kind = indiscrete

[suites]
run = all-theorems
""",
}


def demo_names() -> list[str]:
    return sorted(_DEMO_TEXTS)


def demo_document(name: str) -> ModelDocument:
    from .model import parse_model

    try:
        text = _DEMO_TEXTS[name]
    except KeyError:
        raise KeyError(
            f"unknown demo {name!r}; available: {', '.join(demo_names())}"
        ) from None
    return parse_model(text, name=f"demo:{name}")
