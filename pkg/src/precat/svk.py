"""Combinatorial complexes, fundamental groupoids, pushout gluing, bounded
internal Hom and nonabelian cohomology at n=1.

Spaces are replaced by finite complexes and the Poincare groupoid by the
edge-path groupoid, so every statement exercised here is exact and about
presented groupoids.  The pushout route materializes a complex as a finite
1-precat (edges with formal inverses, inverse-law triangles and one
triangle chain per face), pushes out the presentations and categorifies
exactly.

The internal Hom is a bounded table: Hom(A,B)_M enumerates maps
h(M) x A -> B within the degree bound, with action by precomposition;
the exponential law holds on the nose at matching bounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .theta import (
    ThetaObject, compose, hom_theta, identity, obj, objects_of_degree, zero,
)
from .presheaf import (
    Element, PrecatError, PrecatMap, Presentation, RelationArc, Table,
    TableMap, evaluate, make_table, map_enumerate, present_table,
    product_table, pushout, table_map, table_of_presented, tabulate,
)
from .standard import theta_map
from .fincat import (
    Arrow, FinCategory, Relation, UndecidedError, cat1_exact,
    groupoid_presentation, hom_data, with_inverses,
)
from .structure import StrictModel, Verdict, category_model


# ---------------------------------------------------------------------------
# complexes

@dataclass(frozen=True)
class Edge:
    name: str
    src: str
    dst: str


@dataclass(frozen=True)
class Face:
    name: str
    word: tuple          # ((edge name, +1 | -1), ...), cyclically composable


@dataclass(frozen=True)
class ComboComplex:
    vertices: tuple
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...] = ()

    def __post_init__(self):
        names = {e.name for e in self.edges}
        if len(names) != len(self.edges):
            raise PrecatError("duplicate edge names")
        for e in self.edges:
            if e.src not in self.vertices or e.dst not in self.vertices:
                raise PrecatError(f"edge {e.name} has unknown endpoints")
        for f in self.faces:
            if not f.word:
                raise PrecatError(f"face {f.name} has an empty boundary word")
            seq = self.word_vertices(f.word)
            if seq[0] != seq[-1]:
                raise PrecatError(f"face {f.name} boundary is not a cycle")

    @cached_property
    def _edge(self) -> dict:
        return {e.name: e for e in self.edges}

    def word_vertices(self, word):
        at = None
        seq = []
        for name, sign in word:
            e = self._edge.get(name)
            if e is None:
                raise PrecatError(f"unknown edge {name}")
            s, d = (e.src, e.dst) if sign > 0 else (e.dst, e.src)
            if at is None:
                seq.append(s)
            elif at != s:
                raise PrecatError(f"boundary word breaks at {name}")
            seq.append(d)
            at = d
        return seq

    def is_subcomplex_of(self, other: "ComboComplex") -> bool:
        return set(self.vertices) <= set(other.vertices) and \
            {(e.name, e.src, e.dst) for e in self.edges} <= \
            {(e.name, e.src, e.dst) for e in other.edges} and \
            {(f.name, f.word) for f in self.faces} <= \
            {(f.name, f.word) for f in other.faces}


def complex(vertices, edges, faces=()) -> ComboComplex:
    return ComboComplex(tuple(vertices),
                        tuple(Edge(*e) for e in edges),
                        tuple(Face(nm, tuple(w)) for nm, w in faces))


def pi1(cx: ComboComplex, word_bound: int = 8) -> FinCategory:
    """The edge-path groupoid: edges with formal inverses, one relation per
    face word (the loop equals the identity at its basepoint)."""
    face_words = []
    for f in cx.faces:
        base = cx.word_vertices(f.word)[0]
        face_words.append((base, f.word))
    return groupoid_presentation(cx.vertices,
                                 [(e.name, e.src, e.dst) for e in cx.edges],
                                 face_words, word_bound=word_bound)


# ---------------------------------------------------------------------------
# a complex as a finite 1-precat

def complex_to_precat(cx: ComboComplex):
    """Present the complex as a 1-precat whose exact categorification is its
    edge-path groupoid: a vertex generator per vertex, an edge pair per
    edge, inverse-law triangles, and a triangle chain per face.

    Returns (presentation, generator-name index) so that inclusions of
    subcomplexes can be written down by name."""
    gens: list[ThetaObject] = []
    names: list = []
    rels: list[RelationArc] = []
    index: dict = {}

    def add(name, level):
        index[name] = len(gens)
        gens.append(level)
        names.append(name)
        return index[name]

    e1, e2 = obj(1, 1), obj(1, 2)
    for v in cx.vertices:
        add(("v", v), zero(1))

    def glue_vertex(gen_idx, position_map, vertex_name):
        rels.append(RelationArc(zero(1), gen_idx, position_map,
                                index[("v", vertex_name)],
                                theta_map(1, zero(1), zero(1), [(0,)])))

    def add_edge_cell(name, src, dst):
        gi = add(name, e1)
        glue_vertex(gi, theta_map(1, zero(1), e1, [(0,)]), src)
        glue_vertex(gi, theta_map(1, zero(1), e1, [(1,)]), dst)
        return gi

    d01 = theta_map(1, e1, e2, [(0, 1)])
    d12 = theta_map(1, e1, e2, [(1, 2)])
    d02 = theta_map(1, e1, e2, [(0, 2)])

    def add_triangle(name, first, second, long):
        """2-cell forcing long = second o first; each side is an edge
        generator index or a vertex name (meaning its degenerate edge)."""
        ti = add(name, e2)
        for dmap, side in ((d01, first), (d12, second), (d02, long)):
            if isinstance(side, int):
                rels.append(RelationArc(e1, ti, dmap, side, identity(e1)))
            else:
                rels.append(RelationArc(e1, ti, dmap, index[("v", side)],
                                        theta_map(1, e1, zero(1), [(0, 0)])))

    for e in cx.edges:
        gi = add_edge_cell(("e", e.name), e.src, e.dst)
        gj = add_edge_cell(("e~", e.name), e.dst, e.src)
        add_triangle(("inv1", e.name), gi, gj, e.src)
        add_triangle(("inv2", e.name), gj, gi, e.dst)

    for f in cx.faces:
        seq = cx.word_vertices(f.word)
        sides = []
        for name, sign in f.word:
            sides.append(index[("e", name) if sign > 0 else ("e~", name)])
        if len(sides) == 1:
            add_triangle(("face", f.name, 0), sides[0], seq[0], seq[0])
            continue
        acc = sides[0]
        for k in range(1, len(sides)):
            last = k == len(sides) - 1
            if last:
                add_triangle(("face", f.name, k), acc, sides[k], seq[0])
            else:
                nxt = add_edge_cell(("c", f.name, k), seq[0], seq[k + 1])
                add_triangle(("face", f.name, k), acc, sides[k], nxt)
                acc = nxt

    return Presentation(1, tuple(gens), tuple(rels)), index


def inclusion_precat_map(W: ComboComplex, U: ComboComplex):
    """The presentation map induced by a subcomplex inclusion."""
    PW, iw = complex_to_precat(W)
    PU, iu = complex_to_precat(U)
    rev = {v: k for k, v in iw.items()}
    images = []
    for g, level in enumerate(PW.generators):
        name = rev[g]
        images.append(PU.element(iu[name], identity(level)))
    return PrecatMap(PW, PU, tuple(images)), PW, PU


@dataclass(frozen=True)
class PresentedGroupoid:
    """A groupoid presented by an exact categorification, with the complex
    vertices resolved to object classes."""
    groupoid: FinCategory
    vertex_class: tuple       # (vertex name, object label) pairs

    @cached_property
    def _vertex(self) -> dict:
        return dict(self.vertex_class)

    def vertex(self, name):
        return self._vertex[name]

    def endo_census(self, vertex_name, length: int) -> int:
        return self.groupoid.endo_census(self.vertex(vertex_name), length)


def svk_pushout(U: ComboComplex, V: ComboComplex, W: ComboComplex,
                word_bound: int = 8) -> PresentedGroupoid:
    """Category-theoretic pushout of the two pieces over the intersection:
    push out the complex presentations, then categorify exactly."""
    if not (W.is_subcomplex_of(U) and W.is_subcomplex_of(V)):
        raise PrecatError("W must embed in both pieces")
    fu, PW, PU = inclusion_precat_map(W, U)
    fv, _, PV = inclusion_precat_map(W, V)
    D, into_u, into_v = pushout(fu, fv)
    res = cat1_exact(D, word_bound=word_bound)
    cat = with_inverses(res.category)
    _, iu = complex_to_precat(U)
    vertex_class = []
    seen = set()
    for v in U.vertices:
        el = into_u.apply(PU.element(iu[("v", v)], identity(zero(1))))
        vertex_class.append((v, res.obj(el)))
        seen.add(v)
    _, iv = complex_to_precat(V)
    for v in V.vertices:
        if v in seen:
            continue
        el = into_v.apply(PV.element(iv[("v", v)], identity(zero(1))))
        vertex_class.append((v, res.obj(el)))
    return PresentedGroupoid(cat, tuple(vertex_class))


def pi1_presented(cx: ComboComplex, word_bound: int = 8) -> PresentedGroupoid:
    """pi1 through the exact engine (identical services as svk_pushout)."""
    P, index = complex_to_precat(cx)
    res = cat1_exact(P, word_bound=word_bound)
    cat = with_inverses(res.category)
    vertex_class = tuple(
        (v, res.obj(P.element(index[("v", v)], identity(zero(1)))))
        for v in cx.vertices)
    return PresentedGroupoid(cat, vertex_class)


# ---------------------------------------------------------------------------
# bounded groupoid comparison

def contract_tree(cat: FinCategory):
    """Collapse a canonical spanning forest: the result has one object per
    component and only the non-tree generator pairs."""
    pairs = dict(cat.inverses)
    positive = [a for a in cat.arrows if a.name in pairs and
                not a.name.endswith("~")]
    root: dict = {}
    tree: set = set()
    for comp in sorted(cat.components(), key=lambda c: str(c)):
        base = sorted(comp, key=str)[0]
        root[base] = base
        reached = {base}
        frontier = [base]
        while frontier:
            nxt = []
            for x in frontier:
                for a in positive:
                    for s, d in ((a.src, a.dst), (a.dst, a.src)):
                        if s == x and d not in reached and d in comp:
                            reached.add(d)
                            tree.add(a.name)
                            root[d] = base
                            nxt.append(d)
            frontier = nxt
    kept = [a for a in positive if a.name not in tree]
    arrows = []
    inverses = []
    for a in kept:
        inv = pairs[a.name]
        arrows.append(Arrow(a.name, root[a.src], root[a.dst]))
        arrows.append(Arrow(inv, root[a.dst], root[a.src]))
        inverses.append((a.name, inv))
    drop = tree | {pairs[t] for t in tree}
    relations = []
    for r in cat.relations:
        left = tuple(x for x in r.left if x not in drop)
        right = tuple(x for x in r.right if x not in drop)
        if left == right:
            continue
        relations.append(Relation(root[r.start], left, right))
    objects = tuple(sorted(set(root.values()), key=str))
    return FinCategory(objects, tuple(arrows), tuple(relations),
                       word_bound=cat.word_bound, inverses=tuple(inverses))


def _component_signatures(cat: FinCategory, L: int):
    sigs = []
    undecided = False
    for comp in sorted(cat.components(), key=lambda c: str(c)):
        base = sorted(comp, key=str)[0]
        vec = []
        for ell in range(L + 1):
            reps, und = cat.hom_classes(base, base, ell)
            undecided = undecided or und
            vec.append(len(reps))
        sigs.append(tuple(vec))
    return sorted(sigs), undecided


def groupoid_equiv_bounded(G: FinCategory, H: FinCategory, L: int) -> Verdict:
    """Bounded comparison: object iso-classes and basepoint censuses after
    collapsing spanning forests.  Exact when both sides are certified finite
    or both collapse to free groupoids; otherwise a census comparison."""
    CG, CH = contract_tree(G), contract_tree(H)
    if len(CG.objects) != len(CH.objects):
        return Verdict("no", "component counts differ")
    dg, dh = hom_data(G, L), hom_data(H, L)
    if dg is not None and dh is not None:
        return _finite_groupoid_equiv(G, dg, H, dh)
    if CG.is_free_groupoid and CH.is_free_groupoid:
        pg, ph = dict(CG.inverses), dict(CH.inverses)
        rg = sorted(len([a for a in CG.arrows if a.src == c and a.name in pg])
                    for c in CG.objects)
        rh = sorted(len([a for a in CH.arrows if a.src == c and a.name in ph])
                    for c in CH.objects)
        return Verdict("yes" if rg == rh else "no",
                       None if rg == rh else ("free ranks", rg, rh))
    sg, ug = _component_signatures(CG, L)
    sh, uh = _component_signatures(CH, L)
    if ug or uh:
        return Verdict("unknown", "census undecided")
    if sg != sh:
        return Verdict("no", ("census", sg, sh))
    return Verdict("yes")


def _finite_groupoid_equiv(G, dg, H, dh) -> Verdict:
    from .structure import model_from_hom_data, _isomorphic_objects
    mg = model_from_hom_data(G, dg)
    mh = model_from_hom_data(H, dh)

    def skeleton(model):
        classes = []
        for x in model.objects:
            for c in classes:
                if model.equivalent_objects(c[0], x):
                    c.append(x)
                    break
            else:
                classes.append([x])
        return classes

    sg, sh = skeleton(mg), skeleton(mh)
    if len(sg) != len(sh):
        return Verdict("no", "iso-class counts differ")
    groups_g = sorted(_group_signature(mg, c[0]) for c in sg)
    groups_h = sorted(_group_signature(mh, c[0]) for c in sh)
    if groups_g != groups_h:
        return Verdict("no", ("vertex groups", groups_g, groups_h))
    # signatures include full multiplication-table canonical forms, so
    # matched signatures give isomorphic vertex groups
    return Verdict("yes")


def _group_signature(model, x):
    elems = sorted(model.hom_objects(x, x), key=str)
    idx = {e: i for i, e in enumerate(elems)}
    table = tuple(tuple(idx[model.compose_obj(x, x, x, a, b)] for b in elems)
                  for a in elems)
    return _canonical_group_table(table)


def _canonical_group_table(table):
    n = len(table)
    best = None
    for perm in itertools.permutations(range(n)):
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        t = tuple(tuple(perm[table[inv[i]][inv[j]]] for j in range(n))
                  for i in range(n))
        if best is None or t < best:
            best = t
    return best


# ---------------------------------------------------------------------------
# bounded internal Hom

def hom_bounded(A: Presentation, B, bound: int, level_bound: int | None = None) -> Table:
    """Hom(A,B)_M = maps(h(M) x A -> B), with the precomposition action.

    `bound` controls the tabulation depth of each product h(M) x A (the
    exactness of every stored level); `level_bound` restricts which levels
    M get stored (defaults to `bound`).  A map is stored as the sorted
    tuple of its values on the product table elements."""
    n = A.n
    level_bound = bound if level_bound is None else level_bound
    TA = tabulate(A, bound)
    stored = [M for M in objects_of_degree(n, level_bound)]
    products = {}
    presented = {}
    for M in stored:
        TH = tabulate(Presentation(n, (M,), ()), bound)
        prod = product_table(TH, TA)
        P, label_elem = table_of_presented(prod)
        products[M] = prod
        presented[M] = (P, label_elem)
    levels = {}
    canon = {}
    for M in stored:
        P, _ = presented[M]
        prod = products[M]
        row = []
        for pm in map_enumerate(P, B):
            entry = []
            k = 0
            for L, xs in prod.levels:
                for x in xs:
                    entry.append(((L, x), pm.images[k]))
                    k += 1
            label = tuple(sorted(entry))
            row.append(label)
            canon[(M, label)] = dict(entry)
        levels[M] = tuple(sorted(set(row)))
    action = {}
    for M in stored:
        for N in stored:
            for f in hom_theta(M, N):
                for y in levels[N]:
                    vals = canon[(N, y)]
                    entry = []
                    for L, xs in products[M].levels:
                        for (xh, xa) in xs:
                            # xh: L -> M inside h(M); push to h(N) along f
                            moved = Element(xh.level, 0, compose(f, xh.rep))
                            entry.append(((L, (xh, xa)), vals[(L, (moved, xa))]))
                    action[(f, y)] = tuple(sorted(entry))
    return make_table(n, level_bound, levels, action)


def hom_restriction(hom_src: Table, hom_tgt: Table, along: PrecatMap) -> TableMap:
    """Hom(A',B) -> Hom(A,B) induced by a map A -> A' (precompose the second
    factor)."""
    def fn(M, label):
        vals = dict(label)
        out = []
        for (L, (xh, xa)) in _grid_keys(hom_tgt, M):
            out.append(((L, (xh, xa)), vals[(L, (xh, along.apply(xa)))]))
        return tuple(sorted(out))
    return table_map(hom_src, hom_tgt, fn)


def _grid_keys(hom_table: Table, M):
    # the grid of a Hom table's level is recoverable from any of its labels
    label = hom_table.eval(M)[0]
    return [k for k, _ in label]


def table_pi0(T: Table):
    """Objects modulo the zigzag closure of the level-(1) endpoint maps.

    For groupoid-valued Hom tables this is the set of classes of objects."""
    from .presheaf import _UnionFind
    n = T.n
    objs = list(T.eval(zero(n)))
    uf = _UnionFind(objs)
    edge = ThetaObject(n, (1,))
    if T.stored(edge):
        v0 = theta_map(n, zero(n), edge, [(0,)])
        v1 = theta_map(n, zero(n), edge, [(1,)])
        for e in T.eval(edge):
            uf.union(T.act(v0, e), T.act(v1, e))
    return sorted({uf.find(x) for x in objs}, key=str)


# ---------------------------------------------------------------------------
# nonabelian cohomology via functor enumeration

def cyclic_group_model(k: int) -> StrictModel:
    homs = {("*", "*"): tuple(range(k))}
    compose = {("*", "*", "*"): {(a, b): (a + b) % k
                                 for a in range(k) for b in range(k)}}
    return category_model(("*",), homs, compose, {"*": 0})


def group_nerve_table(k: int, bound: int) -> Table:
    """Bar-construction nerve of the cyclic group of order k."""
    levels = {}
    for M in objects_of_degree(1, bound):
        p = M.components[0] if len(M) else 0
        levels[M] = tuple(itertools.product(range(k), repeat=p))
    action = {}
    for M in levels:
        for N in levels:
            for f in hom_theta(M, N):
                dm = f.padded_lift()[0]
                for x in levels[N]:
                    out = []
                    for i in range(dm.source_size):
                        g = 0
                        for j in range(dm(i), dm(i + 1)):
                            g = (g + x[j]) % k
                        out.append(g)
                    action[(f, x)] = tuple(out)
    return make_table(1, bound, levels, action)


def invertible_arrows(A: StrictModel, x, y):
    return A.iso_pairs(x, y)


def functors_into(G: FinCategory, A: StrictModel):
    """All functors from a presented groupoid into a finite strict 1-model,
    enumerated over generator images (inverse generators follow suit)."""
    pairs = dict(G.inverses)
    positive = [a for a in G.arrows if a.name in pairs]
    objects = sorted(G.objects, key=str)
    out = []
    for obj_assign in itertools.product(A.objects, repeat=len(objects)):
        omap = dict(zip(objects, obj_assign))
        choices = []
        ok = True
        for a in positive:
            iso = invertible_arrows(A, omap[a.src], omap[a.dst])
            if not iso:
                ok = False
                break
            choices.append(iso)
        if not ok:
            continue
        for combo in itertools.product(*choices):
            amap = {}
            for a, (u, v) in zip(positive, combo):
                amap[a.name] = u
                amap[pairs[a.name]] = v
            if _functor_respects_relations(G, A, omap, amap):
                out.append((omap, amap))
    return out


def _eval_word(G: FinCategory, A: StrictModel, omap, amap, start, word):
    at = start
    val = A.ident(omap[start])
    for name in word:
        arrow = G._arrow[name]
        val = A.compose_obj(omap[start], omap[at], omap[arrow.dst],
                            val, amap[name])
        at = arrow.dst
    return val, at


def _functor_respects_relations(G, A, omap, amap):
    for rel in G.relations:
        lv, lt = _eval_word(G, A, omap, amap, rel.start, rel.left)
        rv, rt = _eval_word(G, A, omap, amap, rel.start, rel.right)
        if lv != rv:
            return False
    return True


def naturally_isomorphic(G: FinCategory, A: StrictModel, F1, F2) -> bool:
    o1, a1 = F1
    o2, a2 = F2
    objects = sorted(G.objects, key=str)
    pairs = dict(G.inverses)
    positive = [a for a in G.arrows if a.name in pairs]
    comp_choices = []
    for x in objects:
        iso = invertible_arrows(A, o1[x], o2[x])
        if not iso:
            return False
        comp_choices.append([u for u, _ in iso])
    for combo in itertools.product(*comp_choices):
        c = dict(zip(objects, combo))
        natural = True
        for a in positive:
            lhs = A.compose_obj(o1[a.src], o1[a.dst], o2[a.dst],
                                a1[a.name], c[a.dst])
            rhs = A.compose_obj(o1[a.src], o2[a.src], o2[a.dst],
                                c[a.src], a2[a.name])
            if lhs != rhs:
                natural = False
                break
        if natural:
            return True
    return False


def cohomology_classes(X: ComboComplex, A: StrictModel, word_bound: int = 8):
    """H(X, A) at n=1: functors pi1(X) -> A modulo natural isomorphism."""
    G = pi1(X, word_bound=word_bound)
    functors = functors_into(G, A)
    classes = []
    for F in functors:
        for c in classes:
            if naturally_isomorphic(G, A, c[0], F):
                c.append(F)
                break
        else:
            classes.append([F])
    return [c[0] for c in classes]
