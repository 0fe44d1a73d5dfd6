"""Seeded corpora of small 1-precats for the property suites.

Generated presentations glue representable simplices onto a strictly
ordered global vertex set, so the categories they generate are finite
and every bounded word problem terminates.  All randomness flows through
an explicit seed.
"""

from __future__ import annotations

import random

from .theta import ThetaObject, obj, zero
from .presheaf import (
    PrecatMap, Presentation, RelationArc, coproduct, map_enumerate, point,
)
from .standard import theta_map


def random_ordered_precat(seed: int, max_simplices: int = 3, max_dim: int = 3,
                          vertices: int = 4) -> Presentation:
    """A presentation of simplices attached along strictly increasing vertex
    sequences over an ordered vertex pool (hence acyclic and finite)."""
    rng = random.Random(seed)
    v_count = rng.randint(2, vertices)
    gens: list[ThetaObject] = [zero(1)] * v_count
    rels: list[RelationArc] = []
    n_simplices = rng.randint(1, max_simplices)
    for _ in range(n_simplices):
        p = rng.randint(1, min(max_dim, v_count - 1))
        seq = sorted(rng.sample(range(v_count), p + 1))
        gen_idx = len(gens)
        cell = obj(1, p)
        gens.append(cell)
        for pos, v in enumerate(seq):
            rels.append(RelationArc(
                zero(1),
                gen_idx, theta_map(1, zero(1), cell, [(pos,)]),
                v, theta_map(1, zero(1), zero(1), [(0,)])))
    return Presentation(1, tuple(gens), tuple(rels))


def random_map(seed: int, A: Presentation, B: Presentation,
               ceiling: int = 20000) -> PrecatMap:
    """A seeded map A -> B, falling back to B + point which always admits one."""
    rng = random.Random(seed)
    try:
        maps = map_enumerate(A, B, ceiling=ceiling)
    except Exception:
        maps = ()
    if maps:
        return maps[rng.randrange(len(maps))]
    B2 = coproduct(B, point(1))
    maps = map_enumerate(A, B2, ceiling=ceiling)
    return maps[rng.randrange(len(maps))]


def corpus(seeds, **kw):
    return [random_ordered_precat(s, **kw) for s in seeds]
