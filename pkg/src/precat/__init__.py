"""Desk-scale computations with presheaves on Theta^n.

The site and its normal forms live in `theta`; finite colimit
presentations with exact evaluation in `presheaf`; the named generating
objects in `standard`; the saturation engine in `engine`; presented
categories, groupoids and the bounded word service in `fincat`; strict
models, truncations and equivalence verdicts in `structure`; the
closed-model machinery in `model`; complexes, Seifert-Van Kampen and
nonabelian cohomology in `svk`; JSON formats in `io` and the `precat`
command line in `cli`.

Everything operates on immutable values and behaves as pure functions,
so concurrent readers need no coordination.
"""

from .theta import (
    DeltaMap, ThetaError, ThetaMorphism, ThetaObject, compose, hom_delta,
    hom_theta, identity, is_principal, obj, objects_of_degree, project, zero,
)
from .presheaf import (
    BoundExceeded, Element, PrecatError, PrecatMap, Presentation, RelationArc,
    SearchCeiling, Table, TableMap, coproduct, empty_precat, evaluate,
    fullsub, identity_map, is_cofibration_bounded, level_censuses,
    levelwise_isomorphic, map_enumerate, multi_pushout, oplus, point,
    present_table, product_eval, product_table, pushout, pushout_table,
    representable, tables_isomorphic, tabulate,
)
from .standard import (
    SigmaShape, indiscrete_table, interval_bar, interval_chain, interval_I,
    phi, sigma, sigma_nu, sigma_nu_map, spine, upsilon,
)
from .engine import (
    EngineConfig, MarkEntry, Marking, bigcat_bounded, cat_bounded,
    enumerate_sigma_maps, find_extension, fix_bounded, gen_m_bounded,
    gen_schedule_bounded, inclusion_into, raj,
)
from .fincat import (
    Arrow, FinCategory, Relation, UndecidedError, cat1_exact,
    finite_hom_data, groupoid_presentation, hom_data, nerve_table,
    with_inverses,
)
from .structure import (
    ModelMap, StrictModel, Verdict, category_model, induce_table,
    is_1_free_ordered, is_easy_bounded, is_equivalence, product_model,
    segal_map, set_model, slice_table, truncate_brutal, truncate_good,
    weak_equiv_bounded,
)
from .model import (
    LiftingProblem, RetractDiagram, factor_cm51_bounded, factor_cm52,
    fiber_product_table, is_fibration_bounded, lift_search,
    properness_counterexample, retract_transfer_check,
)
from .svk import (
    ComboComplex, Edge, Face, complex, complex_to_precat, cohomology_classes,
    cyclic_group_model, group_nerve_table, groupoid_equiv_bounded,
    hom_bounded, hom_restriction, pi1, pi1_presented, svk_pushout, table_pi0,
)
