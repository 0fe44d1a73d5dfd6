"""Presheaves on Theta^n presented as finite colimits of representables.

A `Presentation` is a coequalizer of a finite coproduct of representables:
generator objects N_1..N_g plus relation arcs, each arc identifying two
composites out of a representable level P.  `eval` computes the exact
level set at any object by a union-find quotient of the disjoint union
of hom-sets; the canonical representative of a class is the lexicographic
minimum of (generator index, serialized morphism).

Bounded tabulations (`Table`) carry explicit level sets and the full
functorial action between stored levels; products and the one-level-up
suspension `oplus` live on tables, never re-presented.  `present_table`
converts a bounded table back into a presentation by the usual density
colimit, exact on all stored levels.

Everything here is an immutable value; evaluation caches are internal
and behave as pure functions.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property

from .theta import (
    ThetaError, ThetaMorphism, ThetaObject, compose, hom_theta, identity,
    objects_of_degree, zero,
)


class PrecatError(ValueError):
    pass


class BoundExceeded(PrecatError):
    """A table was asked for a level outside its stored degree bound."""


class SearchCeiling(PrecatError):
    """An enumeration exceeded the configured candidate ceiling."""


def search_ceiling() -> int:
    return int(os.environ.get("PRECAT_MAX_SEARCH", "1000000"))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


@dataclass(frozen=True)
class Element:
    """Canonical representative of a class in a level set: (generator, map)."""

    level: ThetaObject
    gen: int
    rep: ThetaMorphism

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((self.level, self.gen, self.rep)))
        object.__setattr__(self, "_key", (self.gen,) + self.rep.sort_key)

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Element):
            return NotImplemented
        return self._h == other._h and self.gen == other.gen and \
            self.rep == other.rep and self.level == other.level

    @property
    def sort_key(self):
        return self._key

    def __lt__(self, other: "Element") -> bool:
        return (self.level, self.sort_key) < (other.level, other.sort_key)

    def text(self) -> str:
        return f"{self.gen}:{self.rep.text()}"

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class RelationArc:
    """Identify (left_gen, left_map o f) with (right_gen, right_map o f)
    for every f into `level`."""

    level: ThetaObject
    left_gen: int
    left_map: ThetaMorphism
    right_gen: int
    right_map: ThetaMorphism


class LevelSet:
    """The exact level set of a presentation at one object."""

    def __init__(self, level, elements, canon):
        self.level = level
        self.elements = elements          # tuple of canonical Elements, sorted
        self._canon = canon               # (gen, morphism) -> canonical Element

    def canonical(self, gen: int, rep: ThetaMorphism) -> Element:
        return self._canon[(gen, rep)]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class Presentation:
    n: int
    generators: tuple[ThetaObject, ...]
    relations: tuple[RelationArc, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        for N in self.generators:
            if N.n != self.n:
                raise PrecatError(f"generator {N} has level {N.n}, expected {self.n}")
        g = len(self.generators)
        for arc in self.relations:
            if not (0 <= arc.left_gen < g and 0 <= arc.right_gen < g):
                raise PrecatError("relation arc cites an unknown generator")
            if arc.left_map.source != arc.level or arc.right_map.source != arc.level:
                raise PrecatError("relation arc maps must start at the arc level")
            if arc.left_map.target != self.generators[arc.left_gen]:
                raise PrecatError("left arc map must land in its generator")
            if arc.right_map.target != self.generators[arc.right_gen]:
                raise PrecatError("right arc map must land in its generator")

    def eval(self, M: ThetaObject) -> LevelSet:
        """Exact level set at M: a union-find quotient of the coproduct of
        hom-sets, independent of generator and relation order."""
        if M in self._cache:
            return self._cache[M]
        if M.n != self.n:
            raise PrecatError("evaluation level has the wrong n")
        items = [(i, f) for i, N in enumerate(self.generators) for f in hom_theta(M, N)]
        uf = _UnionFind(items)
        for arc in self.relations:
            for f in hom_theta(M, arc.level):
                uf.union((arc.left_gen, compose(arc.left_map, f)),
                         (arc.right_gen, compose(arc.right_map, f)))
        groups: dict = {}
        for item in items:
            groups.setdefault(uf.find(item), []).append(item)
        canon = {}
        reps = []
        for members in groups.values():
            g, r = min(members, key=lambda it: (it[0],) + it[1].sort_key)
            e = Element(M, g, r)
            reps.append(e)
            for member in members:
                canon[member] = e
        out = LevelSet(M, tuple(sorted(reps, key=lambda e: e.sort_key)), canon)
        self._cache[M] = out
        return out

    def act(self, f: ThetaMorphism, x: Element) -> Element:
        """Contravariant action: pull x at target(f) back along f."""
        key = ("act", f, x.gen, x.rep)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if x.level != f.target:
            raise PrecatError("element level does not match the morphism target")
        out = self.eval(f.source).canonical(x.gen, compose(x.rep, f))
        self._cache[key] = out
        return out

    def element(self, gen: int, rep: ThetaMorphism) -> Element:
        return self.eval(rep.source).canonical(gen, rep)

    def generator_element(self, gen: int) -> Element:
        """The universal element of generator `gen` (its identity class)."""
        return self.element(gen, identity(self.generators[gen]))


def representable(M: ThetaObject) -> Presentation:
    return Presentation(M.n, (M,), ())


def empty_precat(n: int) -> Presentation:
    return Presentation(n, (), ())


def point(n: int) -> Presentation:
    return representable(zero(n))


@dataclass(frozen=True)
class Table:
    """A degreewise tabulation of a presheaf up to a total-degree bound.

    levels: object -> tuple of labels; action: (morphism, label) -> label
    for every morphism between stored levels.  Labels are opaque hashables;
    the stored tuple order is the canonical order.
    """

    n: int
    degree_bound: int
    levels: tuple          # tuple of (ThetaObject, tuple_of_labels), sorted
    action: tuple          # tuple of ((ThetaMorphism, label), label), sorted-free

    @cached_property
    def _levels(self) -> dict:
        return dict(self.levels)

    @cached_property
    def _action(self) -> dict:
        return dict(self.action)

    def stored(self, M: ThetaObject) -> bool:
        return M in self._levels

    def eval(self, M: ThetaObject):
        try:
            return self._levels[M]
        except KeyError:
            raise BoundExceeded(f"level {M} outside the stored degree bound "
                                f"{self.degree_bound}") from None

    def act(self, f: ThetaMorphism, x):
        try:
            return self._action[(f, x)]
        except KeyError:
            raise BoundExceeded(f"no stored action for {f}") from None

    def objects(self):
        return tuple(M for M, _ in self.levels)

    def census(self) -> dict:
        return {M: len(xs) for M, xs in self.levels}


def make_table(n, degree_bound, levels_dict, action_dict) -> Table:
    levels = tuple(sorted(levels_dict.items(),
                          key=lambda kv: (kv[0].degree, len(kv[0]), kv[0].components)))
    return Table(n, degree_bound, levels, tuple(action_dict.items()))


def evaluate(X, M: ThetaObject):
    """Level set of a Presentation (elements) or Table (labels)."""
    if isinstance(X, Presentation):
        return X.eval(M).elements
    return X.eval(M)


def act_on(X, f: ThetaMorphism, x):
    if isinstance(X, Presentation):
        return X.act(f, x)
    return X.act(f, x)


@dataclass(frozen=True)
class PrecatMap:
    """A map of presheaves out of a presentation, given on generators.

    images[i] is an element/label of the target at level generators[i];
    every relation arc must induce equal elements on both sides.
    """

    source: Presentation
    target: object            # Presentation or Table
    images: tuple

    def __post_init__(self):
        if len(self.images) != len(self.source.generators):
            raise PrecatError("one image per source generator required")
        for arc in self.source.relations:
            lhs = act_on(self.target, arc.left_map, self.images[arc.left_gen])
            rhs = act_on(self.target, arc.right_map, self.images[arc.right_gen])
            if lhs != rhs:
                raise PrecatError(f"relation arc violated at level {arc.level}")

    @classmethod
    def trusted(cls, source, target, images):
        """Skip arc validation (for maps whose arcs were already checked)."""
        self = object.__new__(cls)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", images)
        return self

    def apply(self, x: Element):
        return act_on(self.target, x.rep, self.images[x.gen])

    def level_map(self, M: ThetaObject) -> dict:
        return {x: self.apply(x) for x in self.source.eval(M)}


def identity_map(A: Presentation) -> PrecatMap:
    return PrecatMap(A, A, tuple(A.generator_element(i) for i in range(len(A.generators))))


def compose_maps(g: PrecatMap, f: PrecatMap) -> PrecatMap:
    """g o f where f: A -> B and g: B -> C (B must be a Presentation)."""
    if f.target is not g.source:
        if f.target != g.source:
            raise PrecatError("maps are not composable")
    return PrecatMap(f.source, g.target, tuple(g.apply(x) for x in f.images))


def _assignment_order(A: Presentation):
    """Greedy most-constrained-next order: each generator is scheduled once
    it shares as many arcs as possible with the already-scheduled ones, so
    dead branches are cut as early as possible."""
    g = len(A.generators)
    incident: list[set] = [set() for _ in range(g)]
    for k, arc in enumerate(A.relations):
        incident[arc.left_gen].add(k)
        incident[arc.right_gen].add(k)
    chosen: list[int] = []
    in_set = [False] * g
    scores = [0] * g
    arc_gens = [(arc.left_gen, arc.right_gen) for arc in A.relations]
    for _ in range(g):
        best = None
        for i in range(g):
            if in_set[i]:
                continue
            key = (scores[i], -len(incident[i]), -i)
            if best is None or key > best[0]:
                best = (key, i)
        i = best[1]
        chosen.append(i)
        in_set[i] = True
        for k in incident[i]:
            a, b = arc_gens[k]
            other = b if a == i else a
            if not in_set[other]:
                scores[other] += 1
    return chosen


def map_enumerate(A: Presentation, B, ceiling: int | None = None) -> tuple[PrecatMap, ...]:
    """All precat maps A -> B, returned in canonical (image-lexicographic)
    order.  Depth-first over generator images along a constraint-aware
    schedule, checking each arc as soon as both endpoints are assigned.
    """
    limit = search_ceiling() if ceiling is None else ceiling
    gens = A.generators
    choices = [evaluate(B, N) for N in gens]
    steps = 0
    order = _assignment_order(A)
    position = {gen: k for k, gen in enumerate(order)}
    arcs_at: list[list[RelationArc]] = [[] for _ in gens]
    for arc in A.relations:
        arcs_at[max(position[arc.left_gen], position[arc.right_gen])].append(arc)
    out = []
    images: list = [None] * len(gens)

    def ok(k) -> bool:
        for arc in arcs_at[k]:
            lhs = act_on(B, arc.left_map, images[arc.left_gen])
            rhs = act_on(B, arc.right_map, images[arc.right_gen])
            if lhs != rhs:
                return False
        return True

    def rec(k):
        nonlocal steps
        if k == len(gens):
            out.append(PrecatMap.trusted(A, B, tuple(images)))
            return
        i = order[k]
        for x in choices[i]:
            steps += 1
            if steps > limit:
                raise SearchCeiling(f"enumeration exceeded the ceiling ({limit})")
            images[i] = x
            if ok(k):
                rec(k + 1)
        images[i] = None

    rec(0)
    return tuple(sorted(out, key=lambda pm: tuple(_image_key(x) for x in pm.images)))


def _image_key(x):
    if isinstance(x, Element):
        return (0, x.level.components, x.sort_key)
    return (1, repr(x))


def coproduct(A: Presentation, B: Presentation) -> Presentation:
    if A.n != B.n:
        raise PrecatError("coproduct of different levels")
    off = len(A.generators)
    rels = A.relations + tuple(
        RelationArc(a.level, a.left_gen + off, a.left_map, a.right_gen + off, a.right_map)
        for a in B.relations)
    return Presentation(A.n, A.generators + B.generators, rels)


def pushout(f: PrecatMap, g: PrecatMap):
    """Pushout D of B <-f- A -g-> C; returns (D, B -> D, C -> D).

    Both targets must be presentations sharing the source of f and g.
    """
    A = f.source
    if g.source != A:
        raise PrecatError("pushout legs must share their source")
    B, C = f.target, g.target
    if not isinstance(B, Presentation) or not isinstance(C, Presentation):
        raise PrecatError("pushout targets must be presentations")
    D0 = coproduct(B, C)
    off = len(B.generators)
    glue = []
    for i, N in enumerate(A.generators):
        bx, cx = f.images[i], g.images[i]
        glue.append(RelationArc(N, bx.gen, bx.rep, cx.gen + off, cx.rep))
    D = Presentation(A.n, D0.generators, D0.relations + tuple(glue))
    into_b = PrecatMap(B, D, tuple(D.element(j, identity(N))
                                   for j, N in enumerate(B.generators)))
    into_c = PrecatMap(C, D, tuple(D.element(j + off, identity(N))
                                   for j, N in enumerate(C.generators)))
    return D, into_b, into_c


def multi_pushout(A: Presentation, legs) -> tuple[Presentation, PrecatMap]:
    """Simultaneous pushout of A along a batch of (attaching map, cell) pairs.

    Each leg is (sigma_map: PrecatMap Sigma -> A, phi: PrecatMap Sigma -> h)
    with h a single-generator presentation.  Returns (D, inclusion A -> D);
    the new generators appear after A's, in leg order.
    """
    gens = list(A.generators)
    rels = list(A.relations)
    for s, phi in legs:
        h = phi.target
        if len(h.generators) != 1 or h.relations:
            raise PrecatError("cell of a multi-pushout must be representable")
        new_idx = len(gens)
        gens.append(h.generators[0])
        for i, N in enumerate(s.source.generators):
            ax = s.images[i]
            px = phi.images[i]
            rels.append(RelationArc(N, ax.gen, ax.rep, new_idx, px.rep))
    D = Presentation(A.n, tuple(gens), tuple(rels))
    incl = PrecatMap(A, D, tuple(D.element(j, identity(N))
                                 for j, N in enumerate(A.generators)))
    return D, incl


def product_eval(A, B, M: ThetaObject) -> tuple:
    """Cartesian product of level sets; act componentwise via product_table."""
    return tuple(itertools.product(evaluate(A, M), evaluate(B, M)))


def tabulate(A, D: int) -> Table:
    """Bounded image of A: levels and complete action up to total degree D."""
    n = A.n
    objs = objects_of_degree(n, D)
    levels = {M: tuple(evaluate(A, M)) for M in objs}
    action = {}
    for M in objs:
        for N in objs:
            for f in hom_theta(M, N):
                for x in levels[N]:
                    action[(f, x)] = act_on(A, f, x)
    return make_table(n, D, levels, action)


def product_table(TA: Table, TB: Table) -> Table:
    if TA.n != TB.n:
        raise PrecatError("product of different levels")
    D = min(TA.degree_bound, TB.degree_bound)
    objs = [M for M in TA.objects() if M.degree <= D and TB.stored(M)]
    levels = {M: tuple(itertools.product(TA.eval(M), TB.eval(M))) for M in objs}
    action = {}
    for M in objs:
        for N in objs:
            for f in hom_theta(M, N):
                for (a, b) in levels[N]:
                    action[(f, (a, b))] = (TA.act(f, a), TB.act(f, b))
    return make_table(TA.n, D, levels, action)


@dataclass(frozen=True)
class TableMap:
    """A levelwise map of tables commuting with all stored actions."""

    source: Table
    target: Table
    mapping: tuple   # ((level, label), label) pairs

    @cached_property
    def _map(self) -> dict:
        return dict(self.mapping)

    def __call__(self, M: ThetaObject, x):
        return self._map[(M, x)]

    def check(self):
        for M in self.source.objects():
            for x in self.source.eval(M):
                if (M, x) not in self._map:
                    raise PrecatError(f"table map misses {x} at {M}")
        for M in self.source.objects():
            for N in self.source.objects():
                for f in hom_theta(M, N):
                    for x in self.source.eval(N):
                        if self.target.act(f, self(N, x)) != self(M, self.source.act(f, x)):
                            raise PrecatError(f"table map not natural at {f}")
        return self


def table_map(source: Table, target: Table, fn) -> TableMap:
    pairs = []
    for M in source.objects():
        for x in source.eval(M):
            pairs.append(((M, x), fn(M, x)))
    return TableMap(source, target, tuple(pairs)).check()


def tabulate_map(pm: PrecatMap, D: int, source_table: Table | None = None,
                 target_table: Table | None = None) -> TableMap:
    src = source_table if source_table is not None else tabulate(pm.source, D)
    tgt = target_table if target_table is not None else tabulate(pm.target, D)
    return table_map(src, tgt, lambda M, x: pm.apply(x))


def set_pushout(B, C, f_pairs, g_pairs):
    """Pushout of finite sets B <- A -> C given as pairs (f(a), g(a)).

    Returns (labels, b_map, c_map) with canonical frozen labels.
    """
    items = [("b", x) for x in B] + [("c", y) for y in C]
    uf = _UnionFind(items)
    for fb, gc in zip(f_pairs, g_pairs):
        uf.union(("b", fb), ("c", gc))
    groups: dict = {}
    for it in items:
        groups.setdefault(uf.find(it), []).append(it)
    label_of = {}
    for members in groups.values():
        rep = min(members)
        for m in members:
            label_of[m] = rep
    labels = tuple(sorted({label_of[it] for it in items}))
    return labels, {x: label_of[("b", x)] for x in B}, {y: label_of[("c", y)] for y in C}


def pushout_table(f: TableMap, g: TableMap) -> tuple[Table, TableMap, TableMap]:
    """Levelwise set pushout of tables B <-f- A -g-> C (colimits are pointwise)."""
    A, B, C = f.source, f.target, g.target
    if g.source != A:
        raise PrecatError("table pushout legs must share their source")
    D = min(B.degree_bound, C.degree_bound, A.degree_bound)
    objs = [M for M in A.objects() if B.stored(M) and C.stored(M)]
    levels = {}
    bmaps, cmaps = {}, {}
    for M in objs:
        fp = [f(M, a) for a in A.eval(M)]
        gp = [g(M, a) for a in A.eval(M)]
        labels, bm, cm = set_pushout(B.eval(M), C.eval(M), fp, gp)
        levels[M] = labels
        bmaps[M], cmaps[M] = bm, cm
    action = {}
    for M in objs:
        for N in objs:
            for h in hom_theta(M, N):
                for x in B.eval(N):
                    action[(h, bmaps[N][x])] = bmaps[M][B.act(h, x)]
                for y in C.eval(N):
                    action[(h, cmaps[N][y])] = cmaps[M][C.act(h, y)]
    T = make_table(A.n, D, levels, action)
    fm = table_map(B, T, lambda M, x: bmaps[M][x])
    gm = table_map(C, T, lambda M, y: cmaps[M][y])
    return T, fm, gm


def present_table(T: Table) -> Presentation:
    """The density presentation of a bounded table.

    One generator per stored element, one arc per (morphism, element) pair;
    evaluation at every stored level reproduces the table exactly.
    """
    index = {}
    gens = []
    for M, xs in T.levels:
        for x in xs:
            index[(M, x)] = len(gens)
            gens.append(M)
    rels = []
    for M in T.objects():
        for N in T.objects():
            for f in hom_theta(M, N):
                for x in T.eval(N):
                    y = T.act(f, x)
                    rels.append(RelationArc(M, index[(M, y)], identity(M),
                                            index[(N, x)], f))
    return Presentation(T.n, tuple(gens), tuple(rels))


def table_of_presented(T: Table, P: Presentation | None = None):
    """Correspondence label -> element of present_table(T) (for map transport)."""
    P = present_table(T) if P is None else P
    index = {}
    g = 0
    for M, xs in T.levels:
        for x in xs:
            index[(M, x)] = P.element(g, identity(M))
            g += 1
    return P, index


def vertex_maps(n: int, M: ThetaObject):
    return hom_theta(zero(n), M)


def fullsub(T: Table, S) -> Table:
    """Full sub-precat on the object subset S: keep elements all of whose
    vertex pullbacks land in S."""
    S = frozenset(S)
    keep = {}
    for M in T.objects():
        kept = tuple(x for x in T.eval(M)
                     if all(T.act(v, x) in S for v in vertex_maps(T.n, M)))
        keep[M] = kept
    action = {}
    for M in T.objects():
        for N in T.objects():
            for f in hom_theta(M, N):
                for x in keep[N]:
                    action[(f, x)] = T.act(f, x)
    return make_table(T.n, T.degree_bound, keep, action)


def oplus(D: Table, C: Table, bound: int) -> Table:
    """One-level-up suspension of an (n-1)-table C over a 1-table D.

    Level 0 is D_0; over (p, M') each simplex f in D_p contributes a copy
    of C at M' when f is nondegenerate, and a single point when f lies in
    the image of D_0 (the action projects C to that point accordingly).
    """
    if D.n != 1:
        raise PrecatError("first argument of oplus must be a 1-precat table")
    n = C.n + 1
    d_objs = {M.degree: M for M in D.objects()}          # degree p <-> object (p) / 0

    def d_level(p):
        key = d_objs.get(p)
        if key is None or (p > 0 and len(key) == 0):
            raise BoundExceeded(f"1-precat table lacks level ({p})")
        return D.eval(key)

    degenerate = {}
    for p in sorted(d_objs):
        if p == 0:
            continue
        drop = hom_theta(d_objs[p], d_objs[0])[0]
        degenerate[p] = {D.act(drop, x) for x in D.eval(d_objs[0])}

    levels = {zero(n): tuple(("o", x) for x in d_level(0))}
    for M in objects_of_degree(n, bound):
        if len(M) == 0:
            continue
        p, tail = M.components[0], ThetaObject(C.n, M.components[1:])
        if p not in d_objs or not C.stored(tail):
            continue
        row = []
        for f in d_level(p):
            if f in degenerate.get(p, set()):
                row.append(("d", f))
            else:
                row.extend(("c", f, c) for c in C.eval(tail))
        levels[M] = tuple(row)

    action = {}
    objs = list(levels)
    for Msrc in objs:
        for Mtgt in objs:
            for phi in hom_theta(Msrc, Mtgt):
                for x in levels[Mtgt]:
                    action[(phi, x)] = _oplus_act(D, C, degenerate, phi, x)
    return make_table(n, bound, levels, action)


def _delta_component(D: Table, comp) -> ThetaMorphism:
    src = zero(1) if comp.source_size == 0 else ThetaObject(1, (comp.source_size,))
    tgt = zero(1) if comp.target_size == 0 else ThetaObject(1, (comp.target_size,))
    return ThetaMorphism(src, tgt, (comp,))


def _tail_morphism(nc: int, phi: ThetaMorphism) -> ThetaMorphism:
    from .theta import project
    return project(nc, phi.padded_lift()[1:])


def _oplus_act(D, C, degenerate, phi: ThetaMorphism, x):
    Msrc = phi.source
    lift = phi.padded_lift()
    d_phi = _delta_component(D, lift[0])
    f_new = D.act(d_phi, x[1])
    if len(Msrc) == 0:
        return ("o", f_new)
    p = Msrc.components[0]
    if f_new in degenerate.get(p, set()):
        return ("d", f_new)
    # f_new nondegenerate forces x to carry a C part: x = ("c", f, c)
    return ("c", f_new, C.act(_tail_morphism(C.n, phi), x[2]))


def is_cofibration_bounded(f: PrecatMap, D: int) -> bool:
    """Levelwise injectivity below top degree: objects of length < n only."""
    n = f.source.n
    for M in objects_of_degree(n, D):
        if len(M) >= n:
            continue
        seen = {}
        for x in f.source.eval(M):
            y = f.apply(x)
            if y in seen and seen[y] != x:
                return False
            seen[y] = x
    return True


def level_censuses(X, D: int) -> dict:
    return {M: len(evaluate(X, M)) for M in objects_of_degree(X.n, D)}


def tables_isomorphic(T1: Table, T2: Table) -> bool:
    """Exact isomorphism of bounded tables: color refinement to cut the
    search space, then a backtracking match verified on every action triple."""
    if T1.census() != T2.census():
        return False

    def refine(T):
        color = {}
        for M in T.objects():
            for x in T.eval(M):
                color[(M, x)] = (M.components,)
        pairs = []
        for M in T.objects():
            for N in T.objects():
                for f in hom_theta(M, N):
                    for x in T.eval(N):
                        pairs.append((f, (N, x), (M, T.act(f, x))))
        for _ in range(6):
            new = {}
            for key in color:
                out = sorted((f.text(), color[b]) for f, a, b in pairs if a == key)
                inn = sorted((f.text(), color[a]) for f, a, b in pairs if b == key)
                new[key] = (color[key], tuple(out), tuple(inn))
            # compress
            canon = {}
            for key in sorted(new, key=lambda k: repr(new[k])):
                canon.setdefault(repr(new[key]), len(canon))
            color = {k: canon[repr(new[k])] for k in new}
        return color, pairs

    c1, triples1 = refine(T1)
    c2, _ = refine(T2)
    from collections import Counter
    if Counter(c1.values()) != Counter(c2.values()):
        return False
    keys1 = sorted(c1, key=lambda k: (k[0], str(k[1])))
    by_color2: dict = {}
    for k, c in c2.items():
        by_color2.setdefault((k[0], c), []).append(k)
    involving: dict = {}
    for t in triples1:
        involving.setdefault(t[1], []).append(t)
        involving.setdefault(t[2], []).append(t)
    assign: dict = {}
    used: set = set()

    def consistent(key):
        for f, a, b in involving.get(key, ()):
            if a in assign and b in assign:
                Mb, xb = assign[b]
                Na, xa = assign[a]
                if T2.act(f, xa) != xb:
                    return False
        return True

    def rec(i):
        if i == len(keys1):
            return True
        k = keys1[i]
        for cand in by_color2.get((k[0], c1[k]), ()):
            if cand in used:
                continue
            assign[k] = cand
            used.add(cand)
            if consistent(k) and rec(i + 1):
                return True
            used.discard(cand)
            del assign[k]
        return False

    return rec(0)


def levelwise_isomorphic(A: Presentation, B: Presentation, D: int) -> bool:
    """Equal level censuses plus an exact action-preserving bijection."""
    if level_censuses(A, D) != level_censuses(B, D):
        return False
    return tables_isomorphic(tabulate(A, D), tabulate(B, D))
