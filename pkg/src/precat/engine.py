"""The saturation engine.

One stage enumerates every map out of a generating Sigma within the
configured bounds, in canonical fingerprint order.  Maps that already
extend along phi are marked with a chosen extension; the rest are pushed
out simultaneously as one batched multi-pushout, and the new cells enter
the marking with their tautological extensions.  Iterating to a stage
with nothing left to push gives an easy n-category within bounds
("stabilized"); running out of stages instead reports stabilized=False
rather than silently truncating.

`cat_bounded` carries the marking across stages; `bigcat_bounded`
re-derives it from scratch each stage.  `fix_bounded` restricts to shapes
with nonempty prefix (saturating inside the hom levels only) and
`gen_m_bounded` performs the two-step schedule: first saturate the
level-one part, then one batch of prefix-free pushouts in a fixed degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .theta import ThetaObject, identity, obj, objects_of_degree, zero
from .presheaf import (
    Element, PrecatError, PrecatMap, Presentation, evaluate, level_censuses,
    map_enumerate, multi_pushout,
)
from .standard import SigmaShape, phi, sigma


@dataclass(frozen=True)
class EngineConfig:
    degree_bound: int = 3
    stage_bound: int = 8
    m_max: int = 3
    strategy: str = "full"          # full | fix | gen:<m>
    order: str = "canonical"        # canonical | reversed (reordering tests)

    def __post_init__(self):
        if self.degree_bound < 1 or self.stage_bound < 1 or self.m_max < 1:
            raise PrecatError("engine bounds must be >= 1")
        if self.order not in ("canonical", "reversed"):
            raise PrecatError("order must be canonical or reversed")
        if self.strategy not in ("full", "fix") and not self.strategy.startswith("gen:"):
            raise PrecatError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class MarkEntry:
    shape: SigmaShape
    images: tuple[Element, ...]        # the Sigma-map, generator by generator
    extension: Element                 # an element of A at the h-object level

    def fingerprint(self) -> str:
        imgs = ";".join(x.text() for x in self.images)
        return f"{self.shape.text()}::{imgs}"


@dataclass(frozen=True)
class Marking:
    entries: tuple[MarkEntry, ...] = ()

    def fingerprints(self):
        return {e.fingerprint() for e in self.entries}

    def __len__(self):
        return len(self.entries)

    def check(self, A: Presentation) -> None:
        """Every stored extension restricts along phi to the marked map."""
        for e in self.entries:
            pm = phi(e.shape)
            for i in range(len(e.images)):
                if A.act(pm.images[i].rep, e.extension) != e.images[i]:
                    raise PrecatError(f"marking violates phi-restriction: "
                                      f"{e.fingerprint()}")


def sigma_shapes(n: int, cfg: EngineConfig, prefix_filter=None):
    """All shapes with h-object degree within the bound, canonically ordered."""
    shapes = []
    for M in objects_of_degree(n, cfg.degree_bound, max_len=n - 1):
        for m in range(2, cfg.m_max + 1):
            for k in range(-1, n - len(M)):
                try:
                    s = SigmaShape(n, M.components, m, k)
                except PrecatError:
                    continue
                if s.degree > cfg.degree_bound:
                    continue
                if prefix_filter is not None and not prefix_filter(s):
                    continue
                shapes.append(s)
    return sorted(shapes, key=lambda s: (s.degree, s.text()))


def enumerate_sigma_maps(A: Presentation, cfg: EngineConfig, prefix_filter=None):
    """All (shape, PrecatMap Sigma -> A) within bounds, deterministic order."""
    out = []
    for shape in sigma_shapes(A.n, cfg, prefix_filter):
        S = sigma(shape)
        for pm in map_enumerate(S, A):
            out.append((shape, pm))
    return out


def find_extension(A: Presentation, shape: SigmaShape, smap: PrecatMap) -> Element | None:
    """First element of A at the h-level whose phi-restriction is `smap`."""
    pm = phi(shape)
    for cand in A.eval(shape.h_object()):
        if all(A.act(pm.images[i].rep, cand) == smap.images[i]
               for i in range(len(smap.images))):
            return cand
    return None


def _transport_entries(entries, incl: PrecatMap):
    out = []
    for e in entries:
        images = tuple(incl.apply(x) for x in e.images)
        out.append(MarkEntry(e.shape, images, incl.apply(e.extension)))
    return out


def raj(A: Presentation, marking: Marking, cfg: EngineConfig, prefix_filter=None):
    """One saturation stage.

    Shapes are processed in ascending degree, each one as a simultaneous
    batch against the current object, so composites added by lower cells
    are visible before their higher fillers are considered (the paper's
    reordering principle licenses any order; this one terminates).
    Returns (A', marking', pushed).  Unmarked maps that already extend are
    auto-marked instead of pushed; the literal stage would re-push them
    too, which cannot terminate at desk scale and only adds cells that
    later collapse.
    """
    current = A
    known = marking.fingerprints()
    entries = list(marking.entries)
    pushed_total = 0
    for shape in sigma_shapes(A.n, cfg, prefix_filter):
        S = sigma(shape)
        to_push = []
        for smap in map_enumerate(S, current):
            key = MarkEntry(shape, smap.images, smap.images[0]).fingerprint()
            if key in known:
                continue
            ext = find_extension(current, shape, smap)
            if ext is not None:
                entries.append(MarkEntry(shape, smap.images, ext))
                known.add(key)
            else:
                to_push.append(smap)
        if not to_push:
            continue
        if cfg.order == "reversed":
            to_push.reverse()
        legs = [(smap, phi(shape)) for smap in to_push]
        D, incl = multi_pushout(current, legs)
        entries = _transport_entries(entries, incl)
        base = len(current.generators)
        for t, smap in enumerate(to_push):
            images = tuple(incl.apply(x) for x in smap.images)
            ext = D.element(base + t, identity(shape.h_object()))
            entries.append(MarkEntry(shape, images, ext))
        known = {e.fingerprint() for e in entries}
        current = D
        pushed_total += len(to_push)
    return current, Marking(tuple(entries)), pushed_total


def cat_bounded(A: Presentation, cfg: EngineConfig, marking: Marking = Marking()):
    """Iterate raj with carried markings; stabilized means no unmarked map
    within bounds remained."""
    current, marks = A, marking
    for _ in range(cfg.stage_bound):
        current, marks, pushed = raj(current, marks, cfg)
        if pushed == 0:
            return current, marks, True
    # one final stage to see whether the last push finished the job
    final, final_marks, more = raj(current, marks, cfg)
    if more == 0:
        return final, final_marks, True
    return current, marks, False


def bigcat_bounded(A: Presentation, cfg: EngineConfig):
    """As cat_bounded but markings are discarded each stage: extendability
    is re-derived from scratch, nothing else is remembered."""
    current = A
    for _ in range(cfg.stage_bound):
        current, _, pushed = raj(current, Marking(), cfg)
        if pushed == 0:
            return current, Marking(), True
    final, _, more = raj(current, Marking(), cfg)
    if more == 0:
        return final, Marking(), True
    return current, Marking(), False


def _nonempty_prefix(shape: SigmaShape) -> bool:
    return len(shape.prefix) >= 1


def fix_bounded(A: Presentation, cfg: EngineConfig) -> Presentation:
    """Saturate along shapes with nonempty prefix only (the hom levels)."""
    if A.n < 2:
        raise PrecatError("fix_bounded needs n >= 2")
    current = A
    for _ in range(cfg.stage_bound):
        current, _, pushed = raj(current, Marking(), cfg, prefix_filter=_nonempty_prefix)
        if pushed == 0:
            break
    return current


def gen_m_bounded(A: Presentation, m: int, cfg: EngineConfig) -> Presentation:
    """The two-step schedule for one simplicial degree m: saturate the
    level-one slices, then one batched prefix-free pushout stage at m."""
    if m < 2 or A.n < 2:
        raise PrecatError("gen_m_bounded needs m >= 2 and n >= 2")
    def level_one(shape: SigmaShape) -> bool:
        return len(shape.prefix) >= 1 and shape.prefix[0] == 1
    current = A
    for _ in range(cfg.stage_bound):
        current, _, pushed = raj(current, Marking(), cfg, prefix_filter=level_one)
        if pushed == 0:
            break
    def degree_m(shape: SigmaShape) -> bool:
        return len(shape.prefix) == 0 and shape.m == m
    current, _, _ = raj(current, Marking(), cfg, prefix_filter=degree_m)
    return current


def gen_schedule_bounded(A: Presentation, cfg: EngineConfig) -> Presentation:
    """Fix, then Fix(Gen[i](...)) for i = 2..m_max, iterated to stability."""
    current = fix_bounded(A, cfg)
    for _ in range(cfg.stage_bound):
        before = level_censuses(current, cfg.degree_bound)
        for i in range(2, cfg.m_max + 1):
            current = fix_bounded(gen_m_bounded(current, i, cfg), cfg)
        if level_censuses(current, cfg.degree_bound) == before:
            break
    return current


def inclusion_into(A: Presentation, B: Presentation) -> PrecatMap:
    """The map sending A's generators to the same-indexed generators of B
    (valid when B extends A, e.g. any engine output)."""
    return PrecatMap(A, B, tuple(B.element(i, identity(N))
                                 for i, N in enumerate(A.generators)))


def canonical_map_to_bigcat(A: Presentation, cat_out: Presentation,
                            big_out: Presentation, cfg: EngineConfig) -> PrecatMap | None:
    """Some map cat(A) -> bigcat(A) extending the two inclusions of A."""
    from .presheaf import search_ceiling
    incl_big = inclusion_into(A, big_out)
    base = len(A.generators)
    fixed = list(incl_big.images)
    gens = cat_out.generators
    choices = [big_out.eval(N) for N in gens[base:]]
    total = 1
    for c in choices:
        total *= max(len(c), 1)
        if total > search_ceiling():
            return None
    for tail in itertools.product(*choices):
        try:
            return PrecatMap(cat_out, big_out, tuple(fixed) + tail)
        except PrecatError:
            continue
    return None
