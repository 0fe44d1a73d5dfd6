"""Finitely presented categories and groupoids with a bounded word service.

Morphisms are words in generating arrows; relations are pairs of parallel
words.  Equality of words is semi-decided by a breadth-first closure under
two-sided rewriting with a length cap: the verdicts are True, False (the
closure saturated without meeting) or None ("bounded-undecided", a first
class outcome).  Presentations whose only relations are inverse laws are
recognized as free groupoids and get exact free-reduction normal forms.

`cat1_exact` turns a finite 1-precat presentation into the category it
generates: objects from level 0, generating arrows from the nondegenerate
level-(1) classes, and one word equation per level-(2) class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .theta import ThetaObject, obj, zero
from .presheaf import Element, PrecatError, Presentation, make_table

Word = tuple[str, ...]


class UndecidedError(PrecatError):
    """The bounded word service could not decide a required equality."""


@dataclass(frozen=True)
class Arrow:
    name: str
    src: object
    dst: object


@dataclass(frozen=True)
class Relation:
    """left = right as words of composable arrows starting at `start`."""

    start: object
    left: Word
    right: Word


@dataclass(frozen=True)
class FinCategory:
    objects: tuple
    arrows: tuple[Arrow, ...]
    relations: tuple[Relation, ...]
    word_bound: int = 8
    cap_slack: int = 4            # closure may exceed the query length by this
    inverses: tuple = ()          # (name, name) pairs for groupoid presentations

    def __post_init__(self):
        for a in self.arrows:
            if a.src not in self.objects or a.dst not in self.objects:
                raise PrecatError(f"arrow {a.name} has unknown endpoints")
        for r in self.relations:
            if self._end(r.start, r.left) != self._end(r.start, r.right):
                raise PrecatError("relation words are not parallel")

    @cached_property
    def _arrow(self) -> dict:
        return {a.name: a for a in self.arrows}

    @cached_property
    def _inv(self) -> dict:
        d = {}
        for a, b in self.inverses:
            d[a] = b
            d[b] = a
        return d

    def _end(self, start, word: Word):
        at = start
        for name in word:
            a = self._arrow.get(name)
            if a is None or a.src != at:
                raise PrecatError(f"word {word} does not compose from {start}")
            at = a.dst
        return at

    def target(self, start, word: Word):
        return self._end(start, word)

    @cached_property
    def is_free_groupoid(self) -> bool:
        """True when every relation is one of the inverse laws, so free
        reduction computes exact normal forms."""
        if not self.inverses:
            return False
        laws = set()
        for a, b in self.inverses:
            laws.add((a, b))
            laws.add((b, a))
        for r in self.relations:
            if r.right != () or len(r.left) != 2 or tuple(r.left) not in laws:
                return False
        return True

    def free_reduce(self, word: Word) -> Word:
        inv = self._inv
        out: list[str] = []
        for name in word:
            if out and inv.get(out[-1]) == name:
                out.pop()
            else:
                out.append(name)
        return tuple(out)

    # -- bounded equality -------------------------------------------------

    def _positions(self, start, word: Word):
        at = start
        yield 0, at
        for i, name in enumerate(word):
            at = self._arrow[name].dst
            yield i + 1, at

    def closure(self, start, word: Word, cap: int, state_cap: int = 20000):
        """All words boundedly equal to `word`; returns (set, overflowed).

        `overflowed` records that some rewrite was cut off by the length or
        state cap, so a miss is inconclusive."""
        seen = {word}
        frontier = [word]
        overflow = False
        while frontier:
            nxt = []
            for w in frontier:
                objects_at = list(self._positions(start, w))
                for rel in self.relations:
                    for a, b in ((rel.left, rel.right), (rel.right, rel.left)):
                        newlen = len(w) - len(a) + len(b)
                        for i, at in objects_at:
                            if at != rel.start or tuple(w[i:i + len(a)]) != a:
                                continue
                            if newlen > cap:
                                overflow = True
                                continue
                            w2 = w[:i] + b + w[i + len(a):]
                            if w2 not in seen:
                                if len(seen) >= state_cap:
                                    overflow = True
                                    continue
                                seen.add(w2)
                                nxt.append(w2)
            frontier = nxt
        return seen, overflow

    def equal(self, start, w1: Word, w2: Word, cap: int | None = None):
        """True / False / None (bounded-undecided)."""
        if self.target(start, w1) != self.target(start, w2):
            return False
        if self.is_free_groupoid:
            return self.free_reduce(w1) == self.free_reduce(w2)
        cap = self._cap(cap, max(len(w1), len(w2)))
        c1, over1 = self.closure(start, w1, cap)
        if w2 in c1:
            return True
        if not over1:
            return False
        c2, over2 = self.closure(start, w2, cap)
        if w1 in c2:
            return True
        return None if over2 else False

    def _cap(self, cap, base):
        return cap if cap is not None else base + self.cap_slack

    # -- censuses ----------------------------------------------------------

    def words_between(self, x, y, length: int):
        out = []
        by_src: dict = {}
        for a in self.arrows:
            by_src.setdefault(a.src, []).append(a)

        def rec(at, acc):
            if at == y:
                out.append(tuple(acc))
            if len(acc) == length:
                return
            for a in by_src.get(at, ()):
                acc.append(a.name)
                rec(a.dst, acc)
                acc.pop()

        rec(x, [])
        return out

    def classes_from(self, x, length: int, cap: int | None = None):
        """Class representatives of words out of `x`, grown by one-arrow
        extensions of known representatives (so the cost scales with the
        number of classes, not the number of raw paths).

        Returns ({target: [reps]}, undecided); `undecided` is True when some
        membership question overflowed its cap, in which case the census is
        a lower bound only.
        """
        by_src: dict = {}
        for a in self.arrows:
            by_src.setdefault(a.src, []).append(a)
        by_target: dict = {x: [()]}
        frontier: list[tuple[Word, object]] = [((), x)]
        undecided = False
        for _ in range(length):
            nxt = []
            for w, at in frontier:
                for a in by_src.get(at, ()):
                    w2 = w + (a.name,)
                    dst = a.dst
                    reps = by_target.setdefault(dst, [])
                    if self.is_free_groupoid:
                        red = self.free_reduce(w2)
                        if red in reps:
                            continue
                        reps.append(red)
                        nxt.append((red, dst))
                        continue
                    c = self._cap(cap, len(w2))
                    cls, over = self.closure(x, w2, c)
                    if any(r in cls for r in reps):
                        continue
                    if over and reps:
                        if any(w2 in self.closure(x, r, c)[0] for r in reps):
                            continue
                        # new class whose separation is not certified
                        undecided = True
                    reps.append(w2)
                    nxt.append((w2, dst))
            frontier = nxt
        return by_target, undecided

    def hom_classes(self, x, y, length: int, cap: int | None = None):
        """Class representatives of words x -> y of length <= `length`."""
        by_target, undecided = self.classes_from(x, length, cap)
        return by_target.get(y, [] if x != y else [()]), undecided

    def class_of(self, start, word: Word, reps, cap: int | None = None):
        if self.is_free_groupoid:
            red = self.free_reduce(word)
            return red if red in set(reps) else None
        cap = self._cap(cap, len(word))
        cls, over = self.closure(start, word, cap)
        for r in reps:
            if r in cls:
                return r
        if over:
            for r in reps:
                c2, _ = self.closure(start, r, cap)
                if word in c2:
                    return r
        return None

    def endo_census(self, x, length: int):
        reps, undecided = self.hom_classes(x, x, length)
        if undecided:
            raise UndecidedError(f"endomorphism census at {x} undecided at {length}")
        return len(reps)

    def components(self):
        """Connected components of the underlying generator graph."""
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in self.arrows:
            ra, rb = find(a.src), find(a.dst)
            if ra != rb:
                parent[ra] = rb
        groups: dict = {}
        for x in self.objects:
            groups.setdefault(find(x), []).append(x)
        return [tuple(g) for g in groups.values()]


def with_inverses(cat: FinCategory) -> FinCategory:
    """Detect mutual-cancellation pairs among the relations and record them,
    enabling exact free reduction when nothing else remains."""
    import dataclasses
    laws = set()
    for r in cat.relations:
        if r.right == () and len(r.left) == 2:
            laws.add(r.left)
    pairs = []
    seen = set()
    for a, b in laws:
        if (b, a) in laws and a not in seen and b not in seen:
            pairs.append((a, b))
            seen.update((a, b))
    return dataclasses.replace(cat, inverses=tuple(pairs))


def groupoid_presentation(objects, edges, face_words, word_bound=8) -> FinCategory:
    """Presented groupoid: one generator pair per edge plus inverse laws,
    one relation per face word (a loop equal to the identity).

    `edges`: iterable of (name, src, dst); `face_words`: iterable of
    (start_object, ((name, sign), ...)).
    """
    arrows = []
    inverses = []
    relations = []
    for name, src, dst in edges:
        inv = name + "~"
        arrows.append(Arrow(name, src, dst))
        arrows.append(Arrow(inv, dst, src))
        inverses.append((name, inv))
        relations.append(Relation(src, (name, inv), ()))
        relations.append(Relation(dst, (inv, name), ()))
    arrow_by_name = {a.name: a for a in arrows}
    for start, word in face_words:
        names = tuple(n if s > 0 else n + "~" for n, s in word)
        relations.append(Relation(start, names, ()))
    cat = FinCategory(tuple(objects), tuple(arrows), tuple(relations),
                      word_bound=word_bound, inverses=tuple(inverses))
    return cat


# ---------------------------------------------------------------------------
# exact categorification at n=1

@dataclass(frozen=True)
class Cat1Result:
    category: FinCategory
    object_of: tuple          # (Element at level 0) -> object label pairs
    word_of: tuple            # (Element at level (1)) -> (start, Word) pairs

    @cached_property
    def _obj(self) -> dict:
        return dict(self.object_of)

    @cached_property
    def _word(self) -> dict:
        return dict(self.word_of)

    def obj(self, x: Element):
        return self._obj[x]

    def word(self, x: Element):
        return self._word[x]


def _edge_maps():
    from .standard import theta_map
    d01 = theta_map(1, obj(1, 1), obj(1, 2), [(0, 1)])
    d12 = theta_map(1, obj(1, 1), obj(1, 2), [(1, 2)])
    d02 = theta_map(1, obj(1, 1), obj(1, 2), [(0, 2)])
    sdeg = theta_map(1, obj(1, 1), zero(1), [(0, 0)])
    v0 = theta_map(1, zero(1), obj(1, 1), [(0,)])
    v1 = theta_map(1, zero(1), obj(1, 1), [(1,)])
    return d01, d12, d02, sdeg, v0, v1


def cat1_exact(A: Presentation, word_bound: int = 8) -> Cat1Result:
    """The finitely presented category generated by a 1-precat.

    Objects are the level-0 classes, generating arrows the nondegenerate
    level-(1) classes, and every level-(2) class contributes the equation
    (long edge) = (second edge) o (first edge).
    """
    if A.n != 1:
        raise PrecatError("cat1_exact needs a 1-precat")
    d01, d12, d02, sdeg, v0, v1 = _edge_maps()
    objects = tuple(A.eval(zero(1)))
    degenerate = {A.act(sdeg, v): v for v in objects}
    arrows = []
    word_of = {}
    for i, e in enumerate(A.eval(obj(1, 1))):
        if e in degenerate:
            word_of[e] = (degenerate[e], ())
        else:
            name = f"a{i}"
            src, dst = A.act(v0, e), A.act(v1, e)
            arrows.append(Arrow(name, src, dst))
            word_of[e] = (src, (name,))
    relations = []
    seen = set()
    for t in A.eval(obj(1, 2)):
        e01, e12, e02 = A.act(d01, t), A.act(d12, t), A.act(d02, t)
        s01, w01 = word_of[e01]
        _, w12 = word_of[e12]
        _, w02 = word_of[e02]
        lhs, rhs = w01 + w12, w02
        if lhs != rhs and (s01, lhs, rhs) not in seen:
            seen.add((s01, lhs, rhs))
            relations.append(Relation(s01, lhs, rhs))
    cat = FinCategory(objects, tuple(arrows), tuple(relations), word_bound=word_bound)
    return Cat1Result(cat, tuple((v, v) for v in objects), tuple(word_of.items()))


# ---------------------------------------------------------------------------
# finite strict data and nerves

class HomData:
    """A closed, relation-validated class table for a finite category.

    Growing representatives by one-arrow extensions yields a candidate
    quotient; once every transition resolves and every relation holds
    pointwise on the table, the table category receives the presented one,
    so distinct table classes are certified distinct and the census is
    exact (any undecided flags raised during growth are discharged)."""

    def __init__(self, cat: FinCategory, homs, trans):
        self.cat = cat
        self.homs = homs          # (x, y) -> [reps]
        self.trans = trans        # (x, rep, arrow name) -> rep

    def walk(self, x, rep: Word, word: Word) -> Word | None:
        at = rep
        for name in word:
            at = self.trans.get((x, at, name))
            if at is None:
                return None
        return at

    def class_of(self, x, word: Word) -> Word | None:
        return self.walk(x, (), word)

    def compose(self, x, r1: Word, r2: Word) -> Word | None:
        return self.walk(x, r1, r2)

    def compose_table(self):
        cat = self.cat
        out = {}
        for x in cat.objects:
            for y in cat.objects:
                for z in cat.objects:
                    table = {}
                    for r1 in self.homs[(x, y)]:
                        for r2 in self.homs[(y, z)]:
                            table[(r1, r2)] = self.compose(x, r1, r2)
                    out[(x, y, z)] = table
        return out


def hom_data(cat: FinCategory, length: int) -> HomData | None:
    """Grow and certify the class table, or None when certification fails."""
    by_src: dict = {}
    for a in cat.arrows:
        by_src.setdefault(a.src, []).append(a)
    homs = {}
    trans = {}
    for x in cat.objects:
        by_target: dict = {x: [()]}
        frontier: list[tuple[Word, object]] = [((), x)]
        for _ in range(length):
            nxt = []
            for w, at in frontier:
                for a in by_src.get(at, ()):
                    w2 = w + (a.name,)
                    dst = a.dst
                    reps = by_target.setdefault(dst, [])
                    hit = _resolve(cat, x, w2, reps)
                    if hit is not None:
                        trans[(x, w, a.name)] = hit
                        continue
                    reps.append(w2)
                    trans[(x, w, a.name)] = w2
                    nxt.append((w2, dst))
            frontier = nxt
        # closure of the table: every rep extension must resolve
        for y, reps in by_target.items():
            for r in reps:
                for a in by_src.get(y, ()):
                    if (x, r, a.name) in trans:
                        continue
                    hit = _resolve(cat, x, r + (a.name,),
                                   by_target.setdefault(a.dst, []))
                    if hit is None:
                        return None
                    trans[(x, r, a.name)] = hit
        for y in cat.objects:
            homs[(x, y)] = by_target.get(y, [] if x != y else [()])
    data = HomData(cat, homs, trans)
    # relation validation on the table
    for rel in cat.relations:
        s = rel.start
        for x in cat.objects:
            for w in data.homs.get((x, s), ()):
                if data.walk(x, w, rel.left) != data.walk(x, w, rel.right):
                    return None
    return data


def _resolve(cat: FinCategory, x, word: Word, reps):
    if cat.is_free_groupoid:
        red = cat.free_reduce(word)
        return red if red in reps else None
    cap = cat._cap(None, len(word))
    cls, over = cat.closure(x, word, cap)
    for r in reps:
        if r in cls:
            return r
    if over:
        for r in reps:
            if word in cat.closure(x, r, cap)[0]:
                return r
    return None


def finite_hom_data(cat: FinCategory, length: int):
    """Hom class reps and a total composition table, or None when the
    bounded service cannot certify the category finite at this length."""
    data = hom_data(cat, length)
    if data is None:
        return None
    return data.homs, data.compose_table()


def nerve_table(cat: FinCategory, n: int, bound: int, length: int):
    """Bounded nerve of a finite category, extended levelwise-constantly
    to an n-precat table.  Labels are (object, word-reps) tuples."""
    data = hom_data(cat, length)
    if data is None:
        raise UndecidedError("category not certified finite within the word bound")
    homs = data.homs

    def simplices(p):
        if p == 0:
            return [(x, ()) for x in cat.objects]
        out = []

        def rec(start, at, acc):
            if len(acc) == p:
                out.append((start, tuple(acc)))
                return
            for y in cat.objects:
                for r in homs[(at, y)]:
                    acc.append((at, r))
                    rec(start, y, acc)
                    acc.pop()

        for x in cat.objects:
            rec(x, x, [])
        return out

    def chain_objects(label):
        start, steps = label
        seq = [start]
        for at, r in steps:
            seq.append(cat.target(at, r))
        return seq

    def reindex(label, dmap):
        # pull a q-simplex back along a monotone [p] -> [q]
        seq = chain_objects(label)
        start, steps = label
        p = dmap.source_size
        new_start = seq[dmap(0)]
        new_steps = []
        for i in range(p):
            lo, hi = dmap(i), dmap(i + 1)
            at = seq[lo]
            word: Word = ()
            for j in range(lo, hi):
                word = word + steps[j][1]
            rep = data.class_of(at, word)
            if rep is None:
                raise UndecidedError("composition escaped the certified census")
            new_steps.append((at, rep))
        return (new_start, tuple(new_steps))

    from .theta import hom_theta, objects_of_degree
    levels = {}
    for M in objects_of_degree(n, bound):
        p = M.components[0] if len(M) else 0
        levels[M] = tuple(simplices(p))
    action = {}
    for M in levels:
        for N in levels:
            for f in hom_theta(M, N):
                first = f.padded_lift()[0]
                for x in levels[N]:
                    action[(f, x)] = reindex(x, first)
    return make_table(n, bound, levels, action)
