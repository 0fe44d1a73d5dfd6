"""Builders for the named objects of the theory.

The generating pair is phi: Sigma -> h.  Sigma(M,[m],<k,k+1>) is the
universal precat carrying parallel k-morphisms a, b over the prefix M
together with an m-tuple v of (k+1)-cells running from the spine image
of a to that of b; h = h(M,m,1^{k+1}) carries the universal single
(k+1)-cell.  Pushing out along phi either adds a composite/filler or,
in the top boundary case (where h is taken one level down), identifies
two parallel top cells.

All builders return immutable presentations or bounded tables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .theta import (
    DeltaMap, ThetaError, ThetaMorphism, ThetaObject, hom_theta, project, zero,
)
from .presheaf import (
    PrecatError, PrecatMap, Presentation, RelationArc, Table, make_table,
    representable,
)


# ---------------------------------------------------------------------------
# morphism helpers

def theta_map(n: int, src: ThetaObject, tgt: ThetaObject, comps) -> ThetaMorphism:
    """Build a morphism from explicit value tuples, padding with constants."""
    lift = []
    for i in range(n):
        p, q = src.padded(i), tgt.padded(i)
        if i < len(comps):
            lift.append(DeltaMap(p, q, tuple(comps[i])))
        else:
            lift.append(DeltaMap.constant(p, q, 0))
    return project(n, lift)


def vertex(n: int, M: ThetaObject, value: int) -> ThetaMorphism:
    """The constant map 0 -> M hitting `value` in the first component."""
    return theta_map(n, zero(n), M, [(value,)])


def obj_concat(n: int, *parts: int) -> ThetaObject:
    return ThetaObject(n, tuple(m for m in parts if m != 0))


def _ids(M: ThetaObject) -> list[tuple[int, ...]]:
    return [tuple(range(m + 1)) for m in M.components]


def st_inclusion(n: int, M: ThetaObject, tail: tuple[int, ...], value: int) -> ThetaMorphism:
    """(M, tail') -> (M, tail) for tail' = tail minus its last 1, i.e. the
    source (value 0) or target (value 1) coface dual in the last direction."""
    src = ThetaObject(n, M.components + tail[:-1])
    tgt = ThetaObject(n, M.components + tail)
    comps = _ids(src) + [(value,)]
    return theta_map(n, src, tgt, comps)


def principal(n: int, M: ThetaObject, m: int, i: int, ones: int) -> ThetaMorphism:
    """(M,1,1^ones) -> (M,m,1^ones): the i-th spine inclusion, 1 <= i <= m."""
    src = ThetaObject(n, M.components + (1,) + (1,) * ones)
    tgt = ThetaObject(n, M.components + (m,) + (1,) * ones)
    comps = [tuple(range(c + 1)) for c in M.components] + [(i - 1, i)] + \
        [(0, 1)] * ones
    return theta_map(n, src, tgt, comps)


# ---------------------------------------------------------------------------
# shapes

@dataclass(frozen=True)
class SigmaShape:
    """Parameters (M, [m], <k,k+1>) of a generating cofibration at level n."""

    n: int
    prefix: tuple[int, ...]
    m: int
    k: int

    def __post_init__(self):
        l = len(self.prefix)
        if any(c < 1 for c in self.prefix) or l > self.n - 1:
            raise PrecatError(f"invalid prefix {self.prefix} at n={self.n}")
        if self.m < 2:
            raise PrecatError("m = 1 shapes are trivial pushouts and are rejected")
        if not (-1 <= self.k <= self.n - l - 1):
            raise PrecatError(f"k={self.k} out of range for prefix length {l}")

    @property
    def is_top(self) -> bool:
        return self.k == self.n - len(self.prefix) - 1

    @property
    def M(self) -> ThetaObject:
        return ThetaObject(self.n, self.prefix)

    def h_object(self) -> ThetaObject:
        ones = self.k if self.is_top else self.k + 1
        return ThetaObject(self.n, self.prefix + (self.m,) + (1,) * ones)

    @property
    def degree(self) -> int:
        return self.h_object().degree

    def text(self) -> str:
        return f"S({','.join(map(str, self.prefix))};[{self.m}];<{self.k},{self.k + 1}>)@{self.n}"


def upsilon(n: int, prefix: tuple[int, ...], m: int, k: int) -> Presentation:
    """Upsilon(M,[m],1^k): m copies of h(M,1,1^k) glued end to end over h(M).

    For m = 1 this is just h(M,1,1^k) itself.
    """
    if m < 1:
        raise PrecatError("upsilon needs m >= 1")
    M = ThetaObject(n, tuple(prefix))
    cell = ThetaObject(n, M.components + (1,) + (1,) * k)
    t_inc = _endpoint(n, M, k, 1)
    s_inc = _endpoint(n, M, k, 0)
    rels = tuple(RelationArc(M, i, t_inc, i + 1, s_inc) for i in range(m - 1))
    return Presentation(n, (cell,) * m, rels)


def _endpoint(n: int, M: ThetaObject, k: int, value: int) -> ThetaMorphism:
    """M -> (M,1,1^k), the endpoint picked by `value` in the edge direction."""
    tgt = ThetaObject(n, M.components + (1,) + (1,) * k)
    comps = _ids(M) + [(value,)]
    return theta_map(n, M, tgt, comps)


def sigma(shape: SigmaShape) -> Presentation:
    """The explicit coequalizer presentation of Sigma(shape)."""
    n, M, m, k = shape.n, shape.M, shape.m, shape.k
    if k == -1:
        return upsilon(n, shape.prefix, m, 0)
    hk = ThetaObject(n, M.components + (m,) + (1,) * k)
    if shape.is_top:
        # two parallel top cells glued along spines (and along s,t when k >= 1)
        gens = (hk, hk)
        rels = []
        for i in range(1, m + 1):
            p = principal(n, M, m, i, k)
            rels.append(RelationArc(p.source, 0, p, 1, p))
        if k >= 1:
            s_map = st_inclusion(n, M, (m,) + (1,) * k, 0)
            t_map = st_inclusion(n, M, (m,) + (1,) * k, 1)
            rels.append(RelationArc(s_map.source, 0, s_map, 1, s_map))
            rels.append(RelationArc(t_map.source, 0, t_map, 1, t_map))
        return Presentation(n, gens, tuple(rels))
    # middle case: Upsilon(M,[m],1^{k+1}) u h^a u h^b with four arc families
    ups = upsilon(n, shape.prefix, m, k + 1)
    a_idx, b_idx = m, m + 1
    gens = ups.generators + (hk, hk)
    rels = list(ups.relations)
    up_cell_s = _cell_coface(n, M, k, 0)       # (M,1,1^k) -> (M,1,1^{k+1})
    up_cell_t = _cell_coface(n, M, k, 1)
    for i in range(1, m + 1):
        p = principal(n, M, m, i, k)
        rels.append(RelationArc(p.source, a_idx, p, i - 1, up_cell_s))
        rels.append(RelationArc(p.source, b_idx, p, i - 1, up_cell_t))
    if k >= 1:
        s_map = st_inclusion(n, M, (m,) + (1,) * k, 0)
        t_map = st_inclusion(n, M, (m,) + (1,) * k, 1)
        rels.append(RelationArc(s_map.source, a_idx, s_map, b_idx, s_map))
        rels.append(RelationArc(t_map.source, a_idx, t_map, b_idx, t_map))
    return Presentation(n, gens, tuple(rels))


def _cell_coface(n: int, M: ThetaObject, k: int, value: int) -> ThetaMorphism:
    """(M,1,1^k) -> (M,1,1^{k+1}) appending the s/t coface."""
    src = ThetaObject(n, M.components + (1,) + (1,) * k)
    tgt = ThetaObject(n, M.components + (1,) + (1,) * (k + 1))
    comps = _ids(src) + [(value,)]
    return theta_map(n, src, tgt, comps)


def phi(shape: SigmaShape) -> PrecatMap:
    """The canonical cofibration Sigma(shape) -> h(shape); in the top case
    it merges the two parallel cells onto the universal one."""
    n, M, m, k = shape.n, shape.M, shape.m, shape.k
    S = sigma(shape)
    h = representable(shape.h_object())
    if k == -1:
        images = tuple(h.element(0, principal(n, M, m, i, 0)) for i in range(1, m + 1))
        return PrecatMap(S, h, images)
    if shape.is_top:
        ident = h.element(0, theta_map(n, shape.h_object(), shape.h_object(),
                                       _ids(shape.h_object())))
        return PrecatMap(S, h, (ident, ident))
    s_inc = st_inclusion(n, M, (m,) + (1,) * (k + 1), 0)
    t_inc = st_inclusion(n, M, (m,) + (1,) * (k + 1), 1)
    images = tuple(h.element(0, principal(n, M, m, i, k + 1)) for i in range(1, m + 1))
    images += (h.element(0, s_inc), h.element(0, t_inc))
    return PrecatMap(S, h, images)


def spine(n: int, m: int) -> Presentation:
    """m composable edges: Upsilon(0,[m],1^0)."""
    return upsilon(n, (), m, 0)


def sigma_nu(n: int, m: int, k: int) -> Presentation:
    """Pushout of m copies of h(1,1^k) over h(0); equals Upsilon with empty
    prefix, with its canonical map to h(m,1^k) given by `sigma_nu_map`."""
    if m < 2:
        raise PrecatError("sigma_nu needs m >= 2")
    return upsilon(n, (), m, k)


def sigma_nu_map(n: int, m: int, k: int) -> PrecatMap:
    S = sigma_nu(n, m, k)
    h = representable(ThetaObject(n, (m,) + (1,) * k))
    images = tuple(h.element(0, principal(n, zero(n), m, i, k)) for i in range(1, m + 1))
    return PrecatMap(S, h, images)


# ---------------------------------------------------------------------------
# intervals and indiscrete nerves

def interval_I(n: int) -> Presentation:
    return representable(ThetaObject(n, (1,)))


def interval_chain(n: int, m: int) -> Presentation:
    """I^(m): the nerve of the ordered (m+1)-chain, which is h((m)); its
    Segal maps are strict bijections at every level."""
    if m < 1:
        raise PrecatError("interval chain needs m >= 1")
    return representable(ThetaObject(n, (m,)))


def indiscrete_table(labels, n: int, bound: int) -> Table:
    """Nerve of the chaotic category on `labels`, tabulated within bound.

    Level (p, M') holds all (p+1)-tuples of labels, constant in M'; the
    action reindexes tuples along the first component.
    """
    import itertools

    from .theta import objects_of_degree

    labels = tuple(labels)
    if not labels:
        raise PrecatError("indiscrete category needs at least one object")
    levels = {}
    for M in objects_of_degree(n, bound):
        p = M.components[0] if len(M) else 0
        levels[M] = tuple(itertools.product(labels, repeat=p + 1))
    action = {}
    for M in levels:
        for N in levels:
            for f in hom_theta(M, N):
                first = f.padded_lift()[0]
                for x in levels[N]:
                    action[(f, x)] = tuple(x[first(i)] for i in range(first.source_size + 1))
    return make_table(n, bound, levels, action)


def interval_bar(n: int, bound: int) -> Table:
    """The indiscrete groupoid on two objects, as a bounded nerve table."""
    return indiscrete_table((0, 1), n, bound)
