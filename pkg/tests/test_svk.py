import pytest

from precat.theta import obj, zero
from precat.presheaf import level_censuses, map_enumerate, present_table, tabulate
from precat.fincat import cat1_exact, hom_data
from precat.structure import weak_equiv_bounded
from precat.svk import (
    ComboComplex, PresentedGroupoid, complex, complex_to_precat,
    cohomology_classes, contract_tree, cyclic_group_model, functors_into,
    group_nerve_table, groupoid_equiv_bounded, hom_bounded, hom_restriction,
    inclusion_precat_map, pi1, pi1_presented, svk_pushout, table_pi0,
)


def circle():
    return complex(["v"], [("e", "v", "v")])


def circle_two_arcs():
    return complex(["p", "q"], [("a", "p", "q"), ("b", "q", "p")])


def disk():
    return complex(["v"], [("e", "v", "v")], [("f", [("e", 1)])])


def k_z2():
    return complex(["v"], [("e", "v", "v")], [("f", [("e", 1), ("e", 1)])])


def wedge_two_circles():
    return complex(["p", "q1", "q2"],
                   [("c1", "p", "q1"), ("d1", "q1", "p"),
                    ("c2", "p", "q2"), ("d2", "q2", "p")])


def test_complex_validation():
    with pytest.raises(Exception):
        complex(["v"], [("e", "v", "w")])
    with pytest.raises(Exception):
        complex(["v", "w"], [("e", "v", "w")], [("f", [("e", 1), ("e", 1)])])


def test_pi1_trivial():
    G = pi1(complex(["v"], []))
    assert G.endo_census("v", 4) == 1


def test_pi1_circle_census():
    G = pi1(circle())
    for L in range(1, 7):
        assert G.endo_census("v", L) == 2 * L + 1


def test_pi1_disk_trivial():
    G = pi1(disk())
    reps, und = G.hom_classes("v", "v", 3)
    assert not und and len(reps) == 1


def test_complex_to_precat_categorifies_to_pi1():
    # the exact engine on the complex presentation gives the same censuses
    # as the directly presented groupoid
    pg = pi1_presented(circle())
    for L in range(1, 5):
        assert pg.endo_census("v", L) == 2 * L + 1
    pg2 = pi1_presented(disk())
    reps, und = pg2.groupoid.hom_classes(pg2.vertex("v"), pg2.vertex("v"), 3)
    assert not und and len(reps) == 1


def test_svk_circle_two_arcs():
    U = complex(["p", "q"], [("a", "p", "q")])
    V = complex(["p", "q"], [("b", "q", "p")])
    W = complex(["p", "q"], [])
    pg = svk_pushout(U, V, W)
    # loops at p have even edge length 2k; census within 2L is 2L+1
    for L in range(1, 7):
        assert pg.endo_census("p", 2 * L) == 2 * L + 1


def test_svk_identity_cover():
    X = circle_two_arcs()
    pg = svk_pushout(X, X, X)
    direct = pi1_presented(X)
    v = groupoid_equiv_bounded(pg.groupoid, direct.groupoid, 6)
    assert v.value == "yes"


def test_svk_wedge_free_group_census():
    U = complex(["p", "q1"], [("c1", "p", "q1"), ("d1", "q1", "p")])
    V = complex(["p", "q2"], [("c2", "p", "q2"), ("d2", "q2", "p")])
    W = complex(["p"], [])
    pg = svk_pushout(U, V, W)
    # reduced loops of edge length <= 2L match free-group words of length <= L
    for L in range(0, 5):
        expect = 1 + sum(4 * 3 ** (k - 1) for k in range(1, L + 1))
        assert pg.endo_census("p", 2 * L) == expect


def test_groupoid_equiv_bounded():
    G = pi1(circle())
    assert groupoid_equiv_bounded(G, G, 5).value == "yes"
    D = pi1(disk())
    assert groupoid_equiv_bounded(G, D, 5).value == "no"
    # refinement invariance: two-arc and three-arc circles agree
    two = svk_pushout(complex(["p", "q"], [("a", "p", "q")]),
                      complex(["p", "q"], [("b", "q", "p")]),
                      complex(["p", "q"], []))
    three = pi1_presented(complex(["p", "q", "r"],
                                  [("a", "p", "q"), ("b", "q", "r"),
                                   ("c", "r", "p")]))
    assert groupoid_equiv_bounded(two.groupoid, three.groupoid, 6).value == "yes"
    assert groupoid_equiv_bounded(two.groupoid, G, 6).value == "yes"


def test_contract_tree_wedge():
    pg = pi1_presented(wedge_two_circles())
    C = contract_tree(pg.groupoid)
    assert len(C.objects) == 1
    assert C.is_free_groupoid
    assert len(C.inverses) == 2      # free of rank 2


def test_hom_point_coefficient():
    A = complex_to_precat(circle())[0]
    pt_model_nerve = group_nerve_table(1, 2)
    H = hom_bounded(A, present_table(pt_model_nerve), 2)
    assert all(len(H.eval(M)) == 1 for M in H.objects())


def test_hom_objects_are_functors():
    # objects of Hom(nerve C, nerve D) biject with functors C -> D
    from precat.presheaf import representable
    nerve_c = representable(obj(1, 2))        # free category on the 2-chain
    nerve_d = group_nerve_table(2, 2)
    H = hom_bounded(nerve_c, present_table(nerve_d), 2)
    # functors from the 2-chain into B(Z/2): each generator can map to
    # either group element: 4 functors
    assert len(H.eval(zero(1))) == 4


def test_hom_coproduct_is_product():
    from precat.presheaf import coproduct, point, product_table
    A = coproduct(point(1), point(1))
    B = group_nerve_table(2, 2)
    Bp = present_table(B)
    H = hom_bounded(A, Bp, 2)
    HB = hom_bounded(point(1), Bp, 2)
    for M in H.objects():
        assert len(H.eval(M)) == len(HB.eval(M)) ** 2


def test_exponential_law_small():
    from precat.presheaf import point, representable
    S = representable(obj(1, 1))
    A = point(1)
    Bp = present_table(group_nerve_table(2, 2))
    H = hom_bounded(A, Bp, 2)
    lhs = map_enumerate(S, H)
    TS, TA = tabulate(S, 2), tabulate(A, 2)
    from precat.presheaf import product_table, table_of_presented
    P, _ = table_of_presented(product_table(TS, TA))
    rhs = map_enumerate(P, Bp)
    assert len(lhs) == len(rhs)


def test_cohomology_circle_z2():
    classes = cohomology_classes(circle(), cyclic_group_model(2))
    assert len(classes) == 2


def test_cohomology_kz2_z2():
    classes = cohomology_classes(k_z2(), cyclic_group_model(2))
    assert len(classes) == 2


def test_cohomology_point_coefficient():
    classes = cohomology_classes(circle(), cyclic_group_model(1))
    assert len(classes) == 1


def test_cohomology_wedge_z3():
    # free group on 2 generators into Z/3: 9 homs, abelian so 9 classes
    classes = cohomology_classes(wedge_two_circles(), cyclic_group_model(3))
    assert len(classes) == 9


def test_mayer_vietoris_census():
    X = circle_two_arcs()
    U = complex(["p", "q"], [("a", "p", "q")])
    V = complex(["p", "q"], [("b", "q", "p")])
    W = complex(["p", "q"], [])
    for k in (2, 3):
        coeff = present_table(group_nerve_table(k, 2))
        PU = complex_to_precat(U)[0]
        PV = complex_to_precat(V)[0]
        PW = complex_to_precat(W)[0]
        HU = hom_bounded(PU, coeff, 2, level_bound=1)
        HV = hom_bounded(PV, coeff, 2, level_bound=1)
        HW = hom_bounded(PW, coeff, 2, level_bound=1)
        iu, _, _ = inclusion_precat_map(W, U)
        iv, _, _ = inclusion_precat_map(W, V)
        ru = hom_restriction(HU, HW, iu)
        rv = hom_restriction(HV, HW, iv)
        from precat.model import fiber_product_table
        FP, _, _ = fiber_product_table(ru, rv)
        classes = cohomology_classes(X, cyclic_group_model(k))
        assert len(table_pi0(FP)) == len(classes) == k


def test_table_pi0():
    T = group_nerve_table(3, 2)
    assert len(table_pi0(T)) == 1
