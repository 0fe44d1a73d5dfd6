"""Acceptance criteria, one test per criterion.

Every check is exact (set/census equality or a decided verdict); each test
enforces its wall-clock budget and prints one PASS line when it holds.
Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import itertools
import time
from math import comb

import pytest

from precat.theta import hom_delta, hom_theta, obj, objects_of_degree, zero
from precat.presheaf import (
    PrecatMap, Presentation, coproduct, level_censuses, levelwise_isomorphic,
    map_enumerate, point, present_table, product_table, pushout,
    representable, table_of_presented, tabulate,
)
from precat.standard import SigmaShape, phi, sigma, spine
from precat.engine import EngineConfig, bigcat_bounded, cat_bounded
from precat.fincat import cat1_exact, hom_data
from precat.structure import (
    is_equivalence, model_from_hom_data, model_map_1, product_model,
    segal_map, weak_equiv_bounded,
)
from precat.model import factor_cm51_bounded, factor_cm52, properness_counterexample
from precat.corpus import random_map, random_ordered_precat
from precat.svk import (
    cohomology_classes, complex, complex_to_precat, cyclic_group_model,
    group_nerve_table, hom_bounded, hom_restriction, inclusion_precat_map,
    pi1, pi1_presented, svk_pushout, table_pi0,
)
from precat.presheaf import is_cofibration_bounded


class Budget:
    def __init__(self, name, seconds):
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.start = time.time()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.time() - self.start
        if exc_type is None:
            status = "PASS" if elapsed < self.seconds else "FAIL (over budget)"
            print(f"{status}: {self.name} ({elapsed:.2f}s < {self.seconds}s)")
            assert elapsed < self.seconds, f"{self.name} exceeded {self.seconds}s"
        else:
            print(f"FAIL: {self.name} ({elapsed:.2f}s)")
        return False


def brute_force_theta2_count(M, N):
    lifts = list(itertools.product(*[hom_delta(M.padded(i), N.padded(i))
                                     for i in range(2)]))

    def related(a, b):
        for j in range(2):
            if a[j] != b[j]:
                return False
            if a[j].is_constant():
                return True
        return a == b

    classes = {l: {l} for l in lifts}
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(lifts, 2):
            if related(a, b) and classes[a] is not classes[b]:
                merged = classes[a] | classes[b]
                for x in merged:
                    classes[x] = merged
                changed = True
    return len({id(c) for c in classes.values()})


def test_theta_site_soundness():
    with Budget("Theta^n soundness", 1.0):
        for p in range(1, 6):
            for q in range(1, 6):
                assert len(hom_theta(obj(1, p), obj(1, q))) == \
                    comb(p + q + 1, p + 1)
        assert len(hom_theta(obj(2, 1, 1), obj(2, 1, 1))) == 5 == \
            brute_force_theta2_count(obj(2, 1, 1), obj(2, 1, 1))
        assert len(hom_theta(obj(2, 1, 1), obj(2, 2, 1))) == 12 == \
            brute_force_theta2_count(obj(2, 1, 1), obj(2, 2, 1))


def chain_path_counts(p):
    """Independent oracle: composable p-tuples in the free category on
    0 -> 1 -> 2, with hom sizes obtained by explicit path enumeration."""
    edges = {0: [1], 1: [2], 2: []}

    def paths(i, j):
        if i == j:
            return 1
        return sum(paths(k, j) for k in edges[i])

    total = 0
    for seq in itertools.product(range(3), repeat=p + 1):
        prod = 1
        for a, b in zip(seq, seq[1:]):
            prod *= paths(a, b)
        total += prod
    return total


def test_categorification_exactness_n1():
    with Budget("categorification exactness at n=1", 5.0):
        A = spine(1, 2)
        cfg = EngineConfig(degree_bound=2, stage_bound=6, m_max=2)
        out, _, stable = cat_bounded(A, cfg)
        assert stable
        assert len(out.eval(obj(1, 1))) == 6 == chain_path_counts(1)
        assert len(out.eval(obj(1, 2))) == 10 == chain_path_counts(2)
        verdict, _ = segal_map(out, 2, bound=2)
        assert verdict == "bijective"


def test_reordering_idempotence():
    with Budget("reordering / idempotence of bigcat", 30.0):
        fixtures = [(spine(1, 2), 1), (spine(2, 2), 2)]
        for A, n in fixtures:
            for order in ("canonical", "reversed"):
                cfg = EngineConfig(degree_bound=3, stage_bound=8, m_max=3,
                                   order=order)
                b1, _, s1 = bigcat_bounded(A, cfg)
                b2, _, s2 = bigcat_bounded(b1, cfg)
                assert s1 and s2
                assert level_censuses(b1, 3) == level_censuses(b2, 3)
                assert levelwise_isomorphic(b1, b2, 2), (n, order)


def test_pushout_lemma_instances():
    with Budget("pushout along trivial cofibrations preserves w.e.", 60.0):
        shapes = [SigmaShape(1, (), m, k) for m in (2, 3) for k in (-1, 0)]
        assert all(s.degree <= 3 for s in shapes)
        for seed in range(10):
            C = random_ordered_precat(seed)
            for shape in shapes:
                maps = map_enumerate(sigma(shape), C)
                if not maps:
                    continue
                smap = maps[seed % len(maps)]
                D, _, into_c = pushout(phi(shape), smap)
                incl = PrecatMap(C, D, into_c.images)
                assert weak_equiv_bounded(incl).value == "yes", (seed, shape)


def test_theorem_ce_instance():
    with Budget("Cat(A x B) equivalent to Cat(A) x Cat(B)", 60.0):
        A = spine(1, 2)
        res_a = cat1_exact(A)
        data_a = hom_data(res_a.category, 6)
        model_a = model_from_hom_data(res_a.category, data_a)
        right = product_model(model_a, model_a)

        TP = product_table(tabulate(A, 2), tabulate(A, 2))
        P, label_elem = table_of_presented(TP)
        res_l = cat1_exact(P)
        data_l = hom_data(res_l.category, 6)
        assert data_l is not None          # both sides finite
        left = model_from_hom_data(res_l.category, data_l)

        rev = {v: k for k, v in label_elem.items()}
        arrow_elem = {w[0]: e for e, (s, w) in res_l.word_of if len(w) == 1}

        def factor_pair(edge_element):
            # a generating left arrow comes from a pair of spine edges
            _, (ea, eb) = rev[edge_element]
            sa, wa = res_a.word(ea)
            sb, wb = res_a.word(eb)
            ra = data_a.class_of(sa, wa)
            rb = data_a.class_of(sb, wb)
            ta = res_a.category.target(sa, wa)
            tb = res_a.category.target(sb, wb)
            return (ra, rb), (ta, tb)

        def obj_fn(x):
            _, pair = rev[x]
            return pair

        def arrow_fn(x, y, rep):
            src = obj_fn(x)
            at = src
            val = right.ident(at)
            for name in rep:
                npair, nxt = factor_pair(arrow_elem[name])
                val = right.compose_obj(src, at, nxt, val, npair)
                at = nxt
            return val

        fm = model_map_1(left, right, obj_fn, arrow_fn)
        assert is_equivalence(fm)


def test_cm52_construction():
    with Budget("CM5(2) on seeded morphisms", 60.0):
        for seed in range(10):
            A = random_ordered_precat(seed, max_simplices=2, max_dim=2,
                                      vertices=3)
            B = random_ordered_precat(seed + 100, max_simplices=2, max_dim=2,
                                      vertices=3)
            f = random_map(seed, A, B)
            j, q, M = factor_cm52(f, bound=2)
            assert is_cofibration_bounded(j, 2), seed
            assert weak_equiv_bounded(q).value == "yes", seed


def test_properness_counterexample():
    with Budget("right-properness counterexample", 5.0):
        bundle = properness_counterexample()
        assert bundle["C_hom_x0_x2"] == 2
        assert bundle["D_hom_x0_x2"] == 1
        assert bundle["B_to_A_weak_equivalence"] == "yes"
        assert bundle["C_to_A_bounded_fibration"] is True
        assert bundle["D_to_C_verdict"] == "no"


def test_seifert_van_kampen():
    with Budget("Seifert-Van Kampen censuses", 30.0):
        U = complex(["p", "q"], [("a", "p", "q")])
        V = complex(["p", "q"], [("b", "q", "p")])
        W = complex(["p", "q"], [])
        pg = svk_pushout(U, V, W)
        G = pi1(complex(["v"], [("e", "v", "v")]))
        for L in range(1, 7):
            assert pg.endo_census("p", 2 * L) == 2 * L + 1 == \
                G.endo_census("v", L)
        # wedge of two circles: free group on two generators
        U2 = complex(["p", "q1"], [("c1", "p", "q1"), ("d1", "q1", "p")])
        V2 = complex(["p", "q2"], [("c2", "p", "q2"), ("d2", "q2", "p")])
        W2 = complex(["p"], [])
        wedge = svk_pushout(U2, V2, W2)
        for L in range(0, 5):
            expect = 1 + sum(4 * 3 ** (k - 1) for k in range(1, L + 1))
            assert wedge.endo_census("p", 2 * L) == expect


def test_nonabelian_cohomology():
    with Budget("nonabelian cohomology censuses", 30.0):
        kz2 = complex(["v"], [("e", "v", "v")], [("f", [("e", 1), ("e", 1)])])
        assert len(cohomology_classes(kz2, cyclic_group_model(2))) == 2
        # Mayer-Vietoris on the circle cover
        X = complex(["p", "q"], [("a", "p", "q"), ("b", "q", "p")])
        U = complex(["p", "q"], [("a", "p", "q")])
        V = complex(["p", "q"], [("b", "q", "p")])
        W = complex(["p", "q"], [])
        PU = complex_to_precat(U)[0]
        PV = complex_to_precat(V)[0]
        PW = complex_to_precat(W)[0]
        iu, _, _ = inclusion_precat_map(W, U)
        iv, _, _ = inclusion_precat_map(W, V)
        for k in (2, 3):
            coeff = present_table(group_nerve_table(k, 2))
            HU = hom_bounded(PU, coeff, 2, level_bound=1)
            HV = hom_bounded(PV, coeff, 2, level_bound=1)
            HW = hom_bounded(PW, coeff, 2, level_bound=1)
            ru = hom_restriction(HU, HW, iu)
            rv = hom_restriction(HV, HW, iv)
            from precat.model import fiber_product_table
            FP, _, _ = fiber_product_table(ru, rv)
            classes = cohomology_classes(X, cyclic_group_model(k))
            assert len(table_pi0(FP)) == len(classes) == k


def test_internal_hom_exponential_law():
    with Budget("internal Hom exponential law", 60.0):
        checked = 0
        seed = 0
        while checked < 20:
            S = random_ordered_precat(seed, max_simplices=1, max_dim=2,
                                      vertices=3)
            A = random_ordered_precat(seed + 50, max_simplices=1, max_dim=1,
                                      vertices=2)
            B = random_ordered_precat(seed + 200, max_simplices=1, max_dim=2,
                                      vertices=3)
            seed += 1
            bound = 3 if checked % 4 == 0 else 2
            H = hom_bounded(A, B, bound)
            lhs = map_enumerate(S, H)
            P, _ = table_of_presented(product_table(tabulate(S, bound),
                                                    tabulate(A, bound)))
            rhs = map_enumerate(P, B)
            assert len(lhs) == len(rhs), (seed - 1, len(lhs), len(rhs))
            checked += 1
