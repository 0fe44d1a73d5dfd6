import itertools

import pytest

from precat.theta import (
    DeltaMap, ThetaMorphism, ThetaObject, compose, hom_theta, identity, obj,
    objects_of_degree, zero,
)
from precat.presheaf import (
    BoundExceeded, Element, PrecatError, PrecatMap, Presentation, RelationArc,
    coproduct, empty_precat, evaluate, fullsub, identity_map,
    is_cofibration_bounded, level_censuses, map_enumerate, make_table,
    multi_pushout, oplus, point, present_table, product_eval, product_table,
    pushout, pushout_table, representable, set_pushout, table_map, tabulate,
    tabulate_map, vertex_maps,
)


def vclass(n, M, value):
    """The constant-vertex class 0 -> M picking the given vertex."""
    for f in hom_theta(zero(n), M):
        if f.comps[0].values == (value,):
            return f
    raise AssertionError


def spine(m, n=1):
    """m edges glued end to end (built by hand; standard builders come later)."""
    e = obj(n, 1)
    gens = tuple(e for _ in range(m))
    rels = tuple(
        RelationArc(zero(n), i, vclass(n, e, 1), i + 1, vclass(n, e, 0))
        for i in range(m - 1))
    return Presentation(n, gens, rels)


def naive_eval_count(A, M):
    """Independent oracle for eval: naive transitive closure on raw items."""
    items = [(i, f) for i, N in enumerate(A.generators) for f in hom_theta(M, N)]
    pairs = []
    for arc in A.relations:
        for f in hom_theta(M, arc.level):
            pairs.append(((arc.left_gen, compose(arc.left_map, f)),
                          (arc.right_gen, compose(arc.right_map, f))))
    classes = {it: {it} for it in items}
    changed = True
    while changed:
        changed = False
        for a, b in pairs:
            if classes[a] is not classes[b]:
                merged = classes[a] | classes[b]
                for x in merged:
                    classes[x] = merged
                changed = True
    return len({id(c) for c in classes.values()})


def test_representable_eval_is_hom():
    h = representable(obj(1, 2))
    assert len(h.eval(zero(1))) == 3
    assert len(h.eval(obj(1, 1))) == 6
    h2 = representable(obj(2, 1, 1))
    assert len(h2.eval(obj(2, 1, 1))) == 5


def test_empty_and_point():
    assert len(empty_precat(1).eval(obj(1, 1))) == 0
    for M in objects_of_degree(1, 3):
        assert len(point(1).eval(M)) == 1


def test_spine_eval_counts():
    A = spine(2)
    assert len(A.eval(zero(1))) == 3
    assert len(A.eval(obj(1, 1))) == 5
    assert len(A.eval(obj(1, 2))) == 7
    assert len(A.eval(obj(1, 3))) == 9


def test_eval_matches_naive_quotient():
    A = spine(3)
    for M in objects_of_degree(1, 3):
        assert len(A.eval(M)) == naive_eval_count(A, M)
    B = coproduct(spine(2), representable(obj(1, 2)))
    for M in objects_of_degree(1, 3):
        assert len(B.eval(M)) == naive_eval_count(B, M)


def test_eval_canonical_representatives_are_minimal():
    A = spine(2)
    for x in A.eval(obj(1, 1)):
        assert isinstance(x, Element)
    keys = [x.sort_key for x in A.eval(obj(1, 1))]
    assert keys == sorted(keys)


def test_act_functoriality_exhaustive():
    A = spine(2)
    objs = objects_of_degree(1, 3)
    for M in objs:
        for N in objs:
            for f in hom_theta(M, N):
                for x in A.eval(N):
                    assert A.act(identity(N), x) == x
                    for P in objs:
                        for g in hom_theta(P, M):
                            assert A.act(compose(f, g), x) == A.act(g, A.act(f, x))


def test_constancy_at_level_zero():
    # only one class of morphisms into the 0 object, so level-0 pullbacks
    # along any level are canonical
    for M in objects_of_degree(2, 3):
        assert len(hom_theta(M, zero(2))) == 1


def test_yoneda_maps_bijection():
    A = spine(2)
    for M in [zero(1), obj(1, 1), obj(1, 2)]:
        maps = map_enumerate(representable(M), A)
        assert len(maps) == len(A.eval(M))


def test_maps_into_empty():
    assert len(map_enumerate(spine(2), empty_precat(1))) == 0
    assert len(map_enumerate(empty_precat(1), spine(2))) == 1


def test_pushout_spine_from_edges():
    h1 = representable(obj(1, 1))
    pt = point(1)
    t = PrecatMap(pt, h1, (h1.element(0, vclass(1, obj(1, 1), 1)),))
    s = PrecatMap(pt, h1, (h1.element(0, vclass(1, obj(1, 1), 0)),))
    D, into_b, into_c = pushout(t, s)
    assert len(D.eval(obj(1, 1))) == 5
    assert len(D.eval(zero(1))) == 3
    assert level_censuses(D, 3) == level_censuses(spine(2), 3)


def test_pushout_universal_property():
    h1 = representable(obj(1, 1))
    pt = point(1)
    t = PrecatMap(pt, h1, (h1.element(0, vclass(1, obj(1, 1), 1)),))
    s = PrecatMap(pt, h1, (h1.element(0, vclass(1, obj(1, 1), 0)),))
    D, into_b, into_c = pushout(t, s)
    Z = representable(obj(1, 2))
    maps_d = map_enumerate(D, Z)
    pairs = 0
    for mb in map_enumerate(h1, Z):
        for mc in map_enumerate(h1, Z):
            if all(mb.apply(t.images[i]) == mc.apply(s.images[i])
                   for i in range(len(pt.generators))):
                pairs += 1
    assert len(maps_d) == pairs


def test_pushout_symmetry():
    h1 = representable(obj(1, 1))
    pt = point(1)
    t = PrecatMap(pt, h1, (h1.element(0, vclass(1, obj(1, 1), 1)),))
    s = PrecatMap(pt, h1, (h1.element(0, vclass(1, obj(1, 1), 0)),))
    D1, _, _ = pushout(t, s)
    D2, _, _ = pushout(s, t)
    assert level_censuses(D1, 3) == level_censuses(D2, 3)


def test_pushout_along_identity():
    A = spine(2)
    ida = identity_map(A)
    D, _, into_c = pushout(ida, ida)
    assert level_censuses(D, 3) == level_censuses(A, 3)


def test_coproduct_counts():
    A, B = spine(2), representable(obj(1, 1))
    AB = coproduct(A, B)
    for M in objects_of_degree(1, 2):
        assert len(AB.eval(M)) == len(A.eval(M)) + len(B.eval(M))
    assert len(coproduct(point(1), point(1)).eval(zero(1))) == 2


def test_product_eval_counts():
    h1 = representable(obj(1, 1))
    assert len(product_eval(h1, h1, obj(1, 1))) == 9
    T = product_table(tabulate(h1, 2), tabulate(point(1), 2))
    assert len(T.eval(obj(1, 1))) == 3


def test_tabulate_matches_eval_and_action():
    A = spine(2)
    T = tabulate(A, 2)
    for M in objects_of_degree(1, 2):
        assert T.eval(M) == tuple(A.eval(M))
    for M in objects_of_degree(1, 2):
        for N in objects_of_degree(1, 2):
            for f in hom_theta(M, N):
                for x in T.eval(N):
                    assert T.act(f, x) == A.act(f, x)
    with pytest.raises(BoundExceeded):
        T.eval(obj(1, 3))


def test_present_table_roundtrip():
    A = spine(2)
    T = tabulate(A, 2)
    P = present_table(T)
    for M in objects_of_degree(1, 2):
        assert len(P.eval(M)) == len(T.eval(M))
    # beyond the bound the presented object extends, at stored levels exact
    Tp = tabulate(representable(obj(1, 2)), 3)
    Pp = present_table(Tp)
    for M in objects_of_degree(1, 3):
        assert len(Pp.eval(M)) == len(Tp.eval(M))


def test_fullsub_two_chain_endpoints():
    # nerve of the 2-chain is h(2); keeping the endpoint objects leaves
    # the two identities and the long edge at level (1)
    T = tabulate(representable(obj(1, 2)), 2)
    verts = {x for x in T.eval(zero(1))}
    v0 = min(verts, key=lambda e: e.sort_key)
    v2 = max(verts, key=lambda e: e.sort_key)
    sub = fullsub(T, {v0, v2})
    assert len(sub.eval(zero(1))) == 2
    assert len(sub.eval(obj(1, 1))) == 3
    assert len(fullsub(T, verts).eval(obj(1, 1))) == len(T.eval(obj(1, 1)))
    assert len(fullsub(T, set()).eval(obj(1, 1))) == 0


def test_oplus_representables():
    # h(u) oplus h(M) = h(u, M) levelwise within the bound
    for u, m in [(1, 1), (2, 1), (1, 2), (2, 2)]:
        D = tabulate(representable(obj(1, u)), 4)
        C = tabulate(representable(obj(1, m)), 4)
        T = oplus(D, C, 4)
        H = representable(obj(2, u, m))
        for M in T.objects():
            assert len(T.eval(M)) == len(H.eval(M)), (u, m, M)


def test_oplus_with_point_is_suspension_of_levels():
    D = tabulate(spine(2), 3)
    C = tabulate(point(1), 3)
    T = oplus(D, C, 3)
    for M in T.objects():
        p = M.components[0] if len(M) else 0
        assert len(T.eval(M)) == len(D.eval(obj(1, p) if p else zero(1))), M


def test_oplus_distributes_over_pushout():
    # X oplus (B cup^A C) = (X oplus B) cup^{X oplus A} (X oplus C) levelwise,
    # on the spine pushout h(1) cup^{h(0)} h(1)
    bound = 3
    X = tabulate(representable(obj(1, 1)), bound)
    h1 = representable(obj(1, 1))
    pt = point(1)
    t = PrecatMap(pt, h1, (h1.element(0, vclass(1, obj(1, 1), 1)),))
    s = PrecatMap(pt, h1, (h1.element(0, vclass(1, obj(1, 1), 0)),))
    P, into_b, into_c = pushout(t, s)

    TA = tabulate(pt, bound)
    TB = tabulate(h1, bound)
    TP = tabulate(P, bound)
    XB = oplus(X, TB, bound)
    XA = oplus(X, TA, bound)
    XP = oplus(X, TP, bound)

    tm_t = tabulate_map(t, bound, source_table=TA, target_table=TB)
    tm_s = tabulate_map(s, bound, source_table=TA, target_table=TB)

    def lift_oplus(tm, src_o, tgt_o):
        def fn(M, x):
            if x[0] == "o":
                return ("o", x[1])
            tail = ThetaObject(tm.source.n, M.components[1:])
            if x[0] == "d":
                return ("d", x[1])
            return ("c", x[1], tm(tail, x[2]))
        return table_map(src_o, tgt_o, fn)

    f1 = lift_oplus(tm_t, XA, XB)
    f2 = lift_oplus(tm_s, XA, XB)
    POT, _, _ = pushout_table(f1, f2)
    for M in POT.objects():
        assert len(POT.eval(M)) == len(XP.eval(M)), M


def test_cofibration_checks():
    A = spine(2)
    assert is_cofibration_bounded(identity_map(A), 3)
    fold_src = coproduct(point(1), point(1))
    fold = PrecatMap(fold_src, point(1),
                     (point(1).generator_element(0), point(1).generator_element(0)))
    assert not is_cofibration_bounded(fold, 3)


def test_set_pushout():
    labels, bm, cm = set_pushout({1, 2}, {"a"}, [1], ["a"])
    assert len(labels) == 2
    assert bm[1] == cm["a"]


def test_multi_pushout_adds_cells():
    A = spine(2)
    h2 = representable(obj(1, 2))
    # attach a 2-cell along the spine inclusion
    smap = None
    for pm in map_enumerate(A, A):
        pass
    from precat.theta import project
    p1 = ThetaMorphism(obj(1, 1), obj(1, 2), (DeltaMap(1, 2, (0, 1)),))
    p2 = ThetaMorphism(obj(1, 1), obj(1, 2), (DeltaMap(1, 2, (1, 2)),))
    phi = PrecatMap(A, h2, (h2.element(0, p1), h2.element(0, p2)))
    s = identity_map(A)
    D, incl = multi_pushout(A, [(s, phi)])
    assert len(D.eval(obj(1, 1))) == 6
    assert len(D.eval(obj(1, 2))) == 10
