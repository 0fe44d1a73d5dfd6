"""The indexing site Theta^n.

Objects are finite sequences M = (m_1, ..., m_k) of strictly positive
integers with k <= n; the empty sequence is the initial/terminal-level
class written 0.  A morphism M -> N is an equivalence class of
componentwise monotone maps between the zero-padded length-n sequences:
two lifts are identified as soon as they agree up to and including an
index whose component is a constant map (a map factoring through the
one-point ordered set).  Every class is stored in a canonical normal
form: the components up to and including the first constant one, with
the remaining components replaced by an implicit sentinel tail.

At n=1 nothing collapses and Theta^1 is the simplex category Delta.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache


class ThetaError(ValueError):
    """Malformed objects, morphisms or incompatible compositions."""


@dataclass(frozen=True)
class DeltaMap:
    """A monotone map [p] -> [q] between the ordered sets {0..p}, {0..q}."""

    source_size: int
    target_size: int
    values: tuple[int, ...]

    def __post_init__(self):
        p, q, v = self.source_size, self.target_size, self.values
        if p < 0 or q < 0:
            raise ThetaError(f"negative simplex size ({p}, {q})")
        if len(v) != p + 1:
            raise ThetaError(f"map [{p}]->[{q}] needs {p + 1} values, got {len(v)}")
        if any(x < 0 or x > q for x in v):
            raise ThetaError(f"values {v} out of range for target [{q}]")
        if any(v[i] > v[i + 1] for i in range(p)):
            raise ThetaError(f"values {v} not weakly increasing")
        object.__setattr__(self, "_h", hash((p, q, v)))

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, DeltaMap):
            return NotImplemented
        return self._h == other._h and self.values == other.values and \
            self.source_size == other.source_size and \
            self.target_size == other.target_size

    def __call__(self, i: int) -> int:
        return self.values[i]

    def is_constant(self) -> bool:
        """True iff the map factors through [0]."""
        return self.values[0] == self.values[-1]

    def compose(self, other: "DeltaMap") -> "DeltaMap":
        """self o other, i.e. apply other first."""
        if other.target_size != self.source_size:
            raise ThetaError("non-composable simplex maps")
        return DeltaMap(other.source_size, self.target_size,
                        tuple(self.values[x] for x in other.values))

    @staticmethod
    def identity(p: int) -> "DeltaMap":
        return DeltaMap(p, p, tuple(range(p + 1)))

    @staticmethod
    def constant(p: int, q: int, value: int) -> "DeltaMap":
        return DeltaMap(p, q, (value,) * (p + 1))

    def __lt__(self, other: "DeltaMap") -> bool:
        return (self.source_size, self.target_size, self.values) < \
            (other.source_size, other.target_size, other.values)

    def digits(self) -> str:
        if self.target_size <= 9:
            return "".join(str(x) for x in self.values)
        return ",".join(str(x) for x in self.values)


@lru_cache(maxsize=None)
def hom_delta(p: int, q: int) -> tuple[DeltaMap, ...]:
    """All monotone maps [p] -> [q], in lexicographic order of value tuples."""
    if p < 0 or q < 0:
        raise ThetaError("hom_delta needs nonnegative sizes")
    return tuple(DeltaMap(p, q, v)
                 for v in itertools.combinations_with_replacement(range(q + 1), p + 1))


@dataclass(frozen=True)
class ThetaObject:
    """An object of Theta^n; the empty component tuple is the class 0."""

    n: int
    components: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ThetaError("level n must be >= 1")
        if len(self.components) > self.n:
            raise ThetaError(f"object {self.components} too long for n={self.n}")
        if any(m < 1 for m in self.components):
            raise ThetaError(
                f"components must be strictly positive, got {self.components}; "
                "the class (M,0,M') is stored as the truncated M")
        object.__setattr__(self, "_h", hash((self.n, self.components)))

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ThetaObject):
            return NotImplemented
        return self._h == other._h and self.n == other.n and \
            self.components == other.components

    @property
    def degree(self) -> int:
        return sum(self.components)

    def padded(self, i: int) -> int:
        """Size of the i-th (0-based) component of the zero-padded sequence."""
        return self.components[i] if i < len(self.components) else 0

    def __len__(self) -> int:
        return len(self.components)

    def __lt__(self, other: "ThetaObject") -> bool:
        return (self.degree, len(self), self.components) < \
            (other.degree, len(other), other.components)

    def text(self) -> str:
        return "(" + ",".join(str(m) for m in self.components) + ")"

    def __str__(self) -> str:
        return self.text()


def obj(n: int, *components: int) -> ThetaObject:
    return ThetaObject(n, tuple(components))


def zero(n: int) -> ThetaObject:
    return ThetaObject(n, ())


@lru_cache(maxsize=None)
def objects_of_degree(n: int, bound: int, max_len: int | None = None) -> tuple[ThetaObject, ...]:
    """All objects of Theta^n with total degree <= bound, 0 included.

    Sorted by (degree, length, components) so enumeration order is canonical.
    """
    top = n if max_len is None else min(max_len, n)
    out = [zero(n)]
    def rec(prefix, left):
        for m in range(1, left + 1):
            nxt = prefix + (m,)
            out.append(ThetaObject(n, nxt))
            if len(nxt) < top:
                rec(nxt, left - m)
    if top >= 1:
        rec((), bound)
    return tuple(sorted(out, key=lambda M: (M.degree, len(M), M.components)))


@dataclass(frozen=True)
class ThetaMorphism:
    """A morphism of Theta^n in canonical normal form.

    `comps` holds the padded components up to and including the first
    constant one; everything after it is the sentinel tail.  When no
    component is constant, `comps` has the full length n.  Equality of
    normal forms coincides with the quotient relation of the site.
    """

    source: ThetaObject
    target: ThetaObject
    comps: tuple[DeltaMap, ...]

    def __post_init__(self):
        if self.source.n != self.target.n:
            raise ThetaError("mixed levels in a morphism")
        n = self.source.n
        if not (1 <= len(self.comps) <= n):
            raise ThetaError("normal form must keep between 1 and n components")
        for i, c in enumerate(self.comps):
            if c.source_size != self.source.padded(i) or c.target_size != self.target.padded(i):
                raise ThetaError(
                    f"component {i} has sizes ({c.source_size},{c.target_size}), "
                    f"objects demand ({self.source.padded(i)},{self.target.padded(i)})")
        for i, c in enumerate(self.comps[:-1]):
            if c.is_constant():
                raise ThetaError("constant component before the truncation point")
        if len(self.comps) < n and not self.comps[-1].is_constant():
            raise ThetaError("truncated normal form must end in a constant component")
        object.__setattr__(self, "_h", hash((self.source, self.target, self.comps)))
        key = tuple(c.values for c in self.comps) + \
            ((),) * (self.source.n - len(self.comps))
        object.__setattr__(self, "_key", key)

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ThetaMorphism):
            return NotImplemented
        return self._h == other._h and self.comps == other.comps and \
            self.source == other.source and self.target == other.target

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def truncated(self) -> bool:
        return len(self.comps) < self.n

    def padded_lift(self) -> tuple[DeltaMap, ...]:
        """A canonical full lift: constant-0 maps on the sentinel tail."""
        tail = tuple(DeltaMap.constant(self.source.padded(i), self.target.padded(i), 0)
                     for i in range(len(self.comps), self.n))
        return self.comps + tail

    def text(self) -> str:
        body = "|".join(c.digits() for c in self.comps)
        if self.truncated:
            body += "|*"
        return f"{self.source.text()} -> {self.target.text()} : [{body}]"

    def __str__(self) -> str:
        return self.text()

    def __lt__(self, other: "ThetaMorphism") -> bool:
        return (self.source, self.target, self.sort_key) < \
            (other.source, other.target, other.sort_key)

    @property
    def sort_key(self):
        return self._key


def project(n: int, lift) -> ThetaMorphism:
    """Quotient a full Delta^n lift down to its Theta^n normal form."""
    lift = tuple(lift)
    if len(lift) != n:
        raise ThetaError(f"lift must have {n} components, got {len(lift)}")
    src_sizes = [c.source_size for c in lift]
    tgt_sizes = [c.target_size for c in lift]
    source = _object_from_padded(n, src_sizes)
    target = _object_from_padded(n, tgt_sizes)
    comps = []
    for c in lift:
        comps.append(c)
        if c.is_constant():
            break
    return ThetaMorphism(source, target, tuple(comps))


def _object_from_padded(n: int, sizes) -> ThetaObject:
    k = n
    while k > 0 and sizes[k - 1] == 0:
        k -= 1
    if any(s == 0 for s in sizes[:k]):
        raise ThetaError(f"padded sizes {tuple(sizes)} contain an interior zero")
    return ThetaObject(n, tuple(sizes[:k]))


def identity(M: ThetaObject) -> ThetaMorphism:
    return project(M.n, [DeltaMap.identity(M.padded(i)) for i in range(M.n)])


@lru_cache(maxsize=1 << 20)
def compose(f: ThetaMorphism, g: ThetaMorphism) -> ThetaMorphism:
    """f o g; requires target(g) == source(f).  Lift-independent."""
    if g.target != f.source:
        raise ThetaError(f"cannot compose {f} after {g}: object mismatch")
    fl, gl = f.padded_lift(), g.padded_lift()
    return project(f.n, [fl[i].compose(gl[i]) for i in range(f.n)])


@lru_cache(maxsize=None)
def hom_theta(M: ThetaObject, N: ThetaObject) -> tuple[ThetaMorphism, ...]:
    """Complete duplicate-free enumeration of Hom(M, N), canonically ordered.

    Normal forms are produced directly: components are chosen left to
    right and a branch closes as soon as a constant component appears.
    """
    if M.n != N.n:
        raise ThetaError("hom between objects of different levels")
    n = M.n
    out: list[ThetaMorphism] = []

    def rec(i: int, acc: list[DeltaMap]):
        if i == n:
            out.append(ThetaMorphism(M, N, tuple(acc)))
            return
        for c in hom_delta(M.padded(i), N.padded(i)):
            if c.is_constant():
                out.append(ThetaMorphism(M, N, tuple(acc) + (c,)))
            else:
                acc.append(c)
                rec(i + 1, acc)
                acc.pop()

    rec(0, [])
    return tuple(sorted(out, key=lambda f: f.sort_key))


def is_principal(f: ThetaMorphism, index: int = 0) -> bool:
    """True iff component `index` is one of the spine inclusions [1] -> [m]."""
    if index >= len(f.comps):
        raise ThetaError("component lies in the sentinel tail")
    c = f.comps[index]
    if c.source_size != 1:
        raise ThetaError(f"component {index} is not a map out of [1]")
    return c.values[1] == c.values[0] + 1
