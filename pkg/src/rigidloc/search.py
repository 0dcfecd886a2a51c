"""Backtrack searches in permutation groups.

Centralizers, normalizers and transporters are found by pinning down a
conjugating permutation from the images of a few generators, then keeping
only those permutations that lie in the ambient group. Large-degree groups
(for example a group acting on its own elements) are scanned element by
element instead.
"""

from __future__ import annotations

import random
import weakref
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .errors import GuardExceeded, NotInGroup
from .fp import check_relators
from .perm import (Permutation, StabilizerChain, _conj, _cycle_type, _identity,
                   _inv, _is_identity, _mul, _order, build_chain)

MAX_CHAIN_ORDER = 25_000_000
MAX_SOURCE_ORDER = 20_000
MAX_TARGET_DEGREE = 30
MAX_ELEMENTS = 2_000_000
BACKTRACK_DEGREE = 64
BRUTE_FORCE_LIMIT = 500_000
CONJUGATOR_LIMIT = 100_000


# -- element tables ------------------------------------------------------

class ElementData:
    """All elements of a small group, bucketed by order and by cycle type."""

    def __init__(self, chain: StabilizerChain, limit: int = MAX_ELEMENTS):
        self.chain = chain
        self.elements = chain.elements(limit)
        self.by_order: dict[int, list[tuple]] = {}
        self.by_type: dict[tuple, list[tuple]] = {}
        for x in self.elements:
            ct = _cycle_type(x)
            self.by_type.setdefault(ct, []).append(x)
        for ct, xs in self.by_type.items():
            o = _order(xs[0])
            self.by_order.setdefault(o, []).extend(xs)
        for xs in self.by_order.values():
            xs.sort()
        for xs in self.by_type.values():
            xs.sort()
        self._classes: dict[int, list[ConjugacyClass]] = {}

    def classes_of_order(self, order: int) -> list[ConjugacyClass]:
        """Conjugacy classes of elements of the given order, with conjugators."""
        if order not in self._classes:
            gens = [tuple(g) for g in self.chain.generators]
            invs = [_inv(g) for g in gens]
            ident = _identity(self.chain.degree)
            seen: set = set()
            out = []
            for x in self.by_order.get(order, []):
                if x in seen:
                    continue
                members = {x: ident}
                frontier = [x]
                while frontier:
                    y = frontier.pop()
                    gy = members[y]
                    for g, gi in zip(gens, invs):
                        z = _conj(g, y, gi)
                        if z not in members:
                            members[z] = _mul(g, gy)
                            frontier.append(z)
                seen.update(members)
                out.append(ConjugacyClass(x, members))
            self._classes[order] = out
        return self._classes[order]

    def class_reps(self) -> list[tuple]:
        reps = []
        for o in sorted(self.by_order):
            reps.extend(c.rep for c in self.classes_of_order(o))
        return reps


@dataclass
class ConjugacyClass:
    rep: tuple
    members: dict  # member -> g with g rep g^-1 = member

    @property
    def size(self) -> int:
        return len(self.members)


_element_cache: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def element_data(chain: StabilizerChain, limit: int = MAX_ELEMENTS) -> ElementData:
    data = _element_cache.get(chain)
    if data is None:
        data = ElementData(chain, limit)
        _element_cache[chain] = data
    return data


# -- conjugating permutations ---------------------------------------------

def _cycle_len_at(p):
    n = len(p)
    out = [0] * n
    for i in range(n):
        if out[i]:
            continue
        cyc = [i]
        j = p[i]
        while j != i:
            cyc.append(j)
            j = p[j]
        for x in cyc:
            out[x] = len(cyc)
    return out


def conjugating_elements(src: Sequence[Sequence[int]], dst: Sequence[Sequence[int]],
                         limit: int | None = None) -> list[tuple]:
    """Every permutation s with s * src[i] * s^-1 == dst[i] for all i.

    Points are mapped one orbit of <src> at a time; fixing the image of one
    point of an orbit determines the whole orbit through s(x.g) = s(x).d.
    Returns at most ``limit`` solutions when a limit is given.
    """
    src = [tuple(s) for s in src]
    dst = [tuple(d) for d in dst]
    if len(src) != len(dst) or not src:
        raise ValueError("need equally many (and at least one) source and target permutations")
    n = len(src[0])
    if any(len(p) != n for p in src + dst):
        raise ValueError("permutations of different degrees")
    for s, d in zip(src, dst):
        if _cycle_type(s) != _cycle_type(d):
            return []
    sig_s = list(zip(*[_cycle_len_at(s) for s in src]))
    sig_d = list(zip(*[_cycle_len_at(d) for d in dst]))
    pairs = list(zip(src, dst))

    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        orb = [start]
        seen[start] = True
        for x in orb:
            for s in src:
                y = s[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
        orbits.append(orb)
    orbits.sort(key=lambda o: (-len(o), o[0]))
    reps = [o[0] for o in orbits]

    sigma = [-1] * n
    used = [False] * n
    out: list[tuple] = []

    def undo(assigned):
        for x in assigned:
            used[sigma[x]] = False
            sigma[x] = -1

    def assign(p, q):
        sigma[p] = q
        used[q] = True
        assigned = [p]
        stack = [p]
        while stack:
            x = stack.pop()
            sx = sigma[x]
            for s, d in pairs:
                y = s[x]
                z = d[sx]
                cur = sigma[y]
                if cur == -1:
                    if used[z] or sig_s[y] != sig_d[z]:
                        undo(assigned)
                        return None
                    sigma[y] = z
                    used[z] = True
                    assigned.append(y)
                    stack.append(y)
                elif cur != z:
                    undo(assigned)
                    return None
        return assigned

    def rec(k):
        if k == len(reps):
            out.append(tuple(sigma))
            return limit is not None and len(out) >= limit
        p = reps[k]
        want = sig_s[p]
        for q in range(n):
            if used[q] or sig_d[q] != want:
                continue
            assigned = assign(p, q)
            if assigned is None:
                continue
            stop = rec(k + 1)
            undo(assigned)
            if stop:
                return True
        return False

    rec(0)
    return out


# -- helpers ---------------------------------------------------------------

def _check_members(G: StabilizerChain, gens) -> list[tuple]:
    out = []
    for g in gens:
        g = tuple(g)
        if len(g) != G.degree or not G.contains(g):
            raise NotInGroup(f"{Permutation._trusted(g)} is not in the group")
        out.append(g)
    return out


def _use_backtrack(G: StabilizerChain, method: str) -> bool:
    if method not in ("auto", "backtrack", "brute"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        return G.degree <= BACKTRACK_DEGREE
    return method == "backtrack"


def _brute_elements(G: StabilizerChain) -> Iterator[tuple]:
    if G.order() > BRUTE_FORCE_LIMIT:
        raise GuardExceeded(f"element scan of a group of order {G.order()} exceeds {BRUTE_FORCE_LIMIT}")
    return G.iter_elements()


def small_generating_set(chain: StabilizerChain, gens: Sequence[Sequence[int]],
                         seed: int = 0, tries: int = 64) -> list[tuple]:
    """A short generating list for <gens>; two elements whenever a seeded search finds them."""
    n = chain.degree
    kept: list[tuple] = []
    for g in gens:
        g = tuple(g)
        if _is_identity(g):
            continue
        if not kept or not build_chain(kept, n).contains(g):
            kept.append(g)
    if len(kept) <= 2:
        return kept
    order = chain.order()
    rng = random.Random(seed)
    for _ in range(tries):
        pair = [tuple(chain.random_element(rng)), tuple(chain.random_element(rng))]
        if build_chain(pair, n).order() == order:
            return pair
    return kept


def _image_tuples(gens: list[tuple], data: ElementData) -> Iterator[tuple]:
    """Candidate conjugation images of gens inside the group behind ``data``.

    The first image runs over class representatives only, which is enough
    when the conjugating elements may be composed with that group's own
    inner automorphisms. Products g0*gi must keep their cycle type.
    """
    t0 = _cycle_type(gens[0])
    firsts = [r for r in data.class_reps() if _cycle_type(r) == t0]
    later = [data.by_type.get(_cycle_type(g), []) for g in gens[1:]]
    prod_types = [_cycle_type(_mul(gens[0], g)) for g in gens[1:]]

    def rec(prefix, i):
        if i == len(later):
            yield tuple(prefix)
            return
        for y in later[i]:
            if _cycle_type(_mul(prefix[0], y)) != prod_types[i]:
                continue
            prefix.append(y)
            yield from rec(prefix, i + 1)
            prefix.pop()

    for r in firsts:
        yield from rec([r], 0)


def _conjugates_into(g, gens, target: StabilizerChain) -> bool:
    gi = _inv(g)
    return all(target.contains(_conj(g, h, gi)) for h in gens)


# -- centralizer, normalizer, transporter --------------------------------------

def centralizer(G: StabilizerChain, H_gens: Sequence[Sequence[int]], method: str = "auto") -> StabilizerChain:
    """C_G(<H_gens>)."""
    hg = [h for h in _check_members(G, H_gens) if not _is_identity(h)]
    if not hg:
        return G
    n = G.degree
    if _use_backtrack(G, method):
        sols = conjugating_elements(hg, hg, limit=CONJUGATOR_LIMIT + 1)
        if len(sols) <= CONJUGATOR_LIMIT:
            return build_chain([s for s in sols if G.contains(s)], n)
        if method == "backtrack":
            raise GuardExceeded("centralizer in the symmetric group is too large to list")
    found: list[tuple] = []
    current = build_chain([], n)
    for g in _brute_elements(G):
        if all(_mul(g, h) == _mul(h, g) for h in hg) and not current.contains(g):
            found.append(g)
            current = build_chain(found, n)
    return current


def normalizer(G: StabilizerChain, H_gens: Sequence[Sequence[int]], method: str = "auto") -> StabilizerChain:
    """N_G(<H_gens>)."""
    hg = [h for h in _check_members(G, H_gens) if not _is_identity(h)]
    n = G.degree
    if not hg:
        return G
    H = build_chain(hg, n)
    if all(_conjugates_into(tuple(g), hg, H) for g in G.generators):
        return G
    found = list(hg)
    N = build_chain(found, n)
    if _use_backtrack(G, method):
        gens = small_generating_set(H, hg)
        data = element_data(H)
        for images in _image_tuples(gens, data):
            for s in conjugating_elements(gens, images):
                if not N.contains(s) and G.contains(s):
                    found.append(s)
                    N = build_chain(found, n)
        return N
    for g in _brute_elements(G):
        if not N.contains(g) and _conjugates_into(g, hg, H):
            found.append(g)
            N = build_chain(found, n)
    return N


def transporter(G: StabilizerChain, A_gens: Sequence[Sequence[int]], B_gens: Sequence[Sequence[int]],
                method: str = "auto") -> Permutation | None:
    """Some g in G with g <A> g^-1 = <B>, or None when no such element exists."""
    ag = [a for a in _check_members(G, A_gens) if not _is_identity(a)]
    bg = [b for b in _check_members(G, B_gens) if not _is_identity(b)]
    n = G.degree
    A = build_chain(ag, n)
    B = build_chain(bg, n)
    if A.order() != B.order():
        return None
    if all(B.contains(a) for a in ag):
        return Permutation.identity(n)
    if _use_backtrack(G, method):
        gens = small_generating_set(A, ag)
        data = element_data(B)
        for images in _image_tuples(gens, data):
            for s in conjugating_elements(gens, images):
                if G.contains(s):
                    return Permutation._trusted(s)
        return None
    for g in _brute_elements(G):
        if _conjugates_into(g, ag, B):
            return Permutation._trusted(g)
    return None


def same_subgroup(a_gens, b_gens, degree: int) -> bool:
    A = build_chain(a_gens, degree)
    B = build_chain(b_gens, degree)
    return A.order() == B.order() and all(B.contains(a) for a in a_gens)


# -- monomorphisms -------------------------------------------------------------

@dataclass
class Embedding:
    """An injective homomorphism given by the images of the source generators."""

    source: object  # GroupRecord
    target_chain: StabilizerChain
    gen_images: tuple
    certified: bool = False

    def image_chain(self) -> StabilizerChain:
        return build_chain(self.gen_images, self.target_chain.degree)

    def image_of_word(self, word) -> Permutation:
        from .fp import evaluate_word
        return Permutation._trusted(tuple(evaluate_word(word, self.gen_images)))

    def certify(self) -> bool:
        """Relators hold on the images and the image has the source's order."""
        src = self.source
        ok = (all(self.target_chain.contains(g) for g in self.gen_images)
              and check_relators(src.presentation, self.gen_images)
              and self.image_chain().order() == src.order())
        self.certified = ok
        return ok


@dataclass
class MonoClass:
    """Monomorphisms whose first searched generator maps into one target class."""

    first_class: ConjugacyClass
    solutions: list  # image tuples with the first image equal to the class rep

    @property
    def count(self) -> int:
        return self.first_class.size * len(self.solutions)


@dataclass
class MonoSearch:
    source: object
    target: StabilizerChain
    classes: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return sum(c.count for c in self.classes)

    def representatives(self) -> list[tuple]:
        return [s for c in self.classes for s in c.solutions]

    def iter_images(self) -> Iterator[tuple]:
        for c in self.classes:
            for member, g in c.first_class.members.items():
                gi = _inv(g)
                for sol in c.solutions:
                    yield tuple(_conj(g, x, gi) for x in sol)

    def embeddings(self, limit: int = MAX_ELEMENTS) -> list[Embedding]:
        if self.count > limit:
            raise GuardExceeded(f"{self.count} monomorphisms exceed the listing limit {limit}")
        images = sorted(self.iter_images())
        return [Embedding(self.source, self.target,
                          tuple(Permutation._trusted(x) for x in im), True) for im in images]

    def canonical(self) -> Embedding | None:
        """The lexicographically least monomorphism (by generator image tuples)."""
        if not self.classes:
            return None
        best = min(self.iter_images())
        return Embedding(self.source, self.target, tuple(Permutation._trusted(x) for x in best), True)


def search_monomorphisms(H, G: StabilizerChain, *, max_source_order: int = MAX_SOURCE_ORDER,
                         max_target_degree: int = MAX_TARGET_DEGREE,
                         max_elements: int = MAX_ELEMENTS) -> MonoSearch:
    """All injective homomorphisms from the presented group H into G, up to G-conjugacy.

    The generator that is searched first is pinned to class representatives
    of G; the remaining generators run over elements of the right order. A
    branch survives only if every pair product keeps its order (injective
    maps preserve element orders) and, at the leaf, every relator holds.
    """
    if H.presentation is None:
        raise ValueError(f"{H.name} has no presentation")
    h_order = H.order()
    if h_order > max_source_order:
        raise GuardExceeded(f"source order {h_order} exceeds {max_source_order}")
    if G.degree > max_target_degree:
        raise GuardExceeded(f"target degree {G.degree} exceeds {max_target_degree}")
    if G.order() > MAX_CHAIN_ORDER:
        raise GuardExceeded(f"target order {G.order()} exceeds {MAX_CHAIN_ORDER}")
    result = MonoSearch(H, G)
    if G.order() % h_order:
        return result
    data = element_data(G, max_elements)

    hgens = [tuple(g) for g in H.generators]
    k = len(hgens)
    orders = [_order(g) for g in hgens]
    pos = sorted(range(k), key=lambda i: (-orders[i], i))
    # order tests for every pair of already placed generators: x*y and x*y^-1
    tests = []
    for a in range(k):
        for b in range(a):
            i, j = pos[b], pos[a]
            tests.append((a, i, j, False, _order(_mul(hgens[i], hgens[j]))))
            tests.append((a, i, j, True, _order(_mul(hgens[i], _inv(hgens[j])))))
    tests_at = [[t[1:] for t in tests if t[0] == a] for a in range(k)]
    candidates = [data.by_order.get(orders[i], []) for i in pos]
    relators = H.presentation.relators

    def relators_hold(img):
        ident = _identity(G.degree)
        invs = [_inv(x) for x in img]
        for r in relators:
            p = ident
            for x in r:
                p = _mul(p, img[x - 1] if x > 0 else invs[-x - 1])
            if not _is_identity(p):
                return False
        return True

    for cls in data.classes_of_order(orders[pos[0]]):
        img: list = [None] * k
        img[pos[0]] = cls.rep
        sols: list[tuple] = []

        def rec(a):
            if a == k:
                t = tuple(img)
                if relators_hold(t):
                    sols.append(t)
                return
            i = pos[a]
            for y in candidates[a]:
                img[i] = y
                ok = True
                for (u, v, inverse, o) in tests_at[a]:
                    z = _mul(img[u], _inv(img[v]) if inverse else img[v])
                    if _order(z) != o:
                        ok = False
                        break
                if ok:
                    rec(a + 1)
            img[i] = None

        rec(1)
        certified = []
        for s in sols:
            if build_chain(s, G.degree).order() == h_order:
                certified.append(s)
        if certified:
            certified.sort()
            result.classes.append(MonoClass(cls, certified))
    return result


def monomorphisms(H, G: StabilizerChain, **guards) -> list[Embedding]:
    """The complete sorted list of injective homomorphisms H -> G."""
    return search_monomorphisms(H, G, **guards).embeddings()


# -- classes of subgroups -----------------------------------------------------

@dataclass
class SubgroupClass:
    generators: tuple
    class_size: int
    normalizer_order: int
    fusion_class: int | None = None


@dataclass
class SubgroupClassReport:
    classes: list
    fusion: list | None  # partition of class indices under the ambient group

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def n_fused(self) -> int | None:
        return None if self.fusion is None else len(self.fusion)


def _union_find_classes(items, same) -> list[list[int]]:
    parent = list(range(len(items)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(len(items)):
        for j in range(i):
            ri, rj = find(i), find(j)
            if ri != rj and same(items[j], items[i]):
                parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(len(items)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def subgroup_classes(H, G: StabilizerChain, ambient: StabilizerChain | None = None,
                     ambient_map: Callable | None = None, mono: MonoSearch | None = None,
                     method: str = "auto") -> SubgroupClassReport:
    """G-classes of subgroups isomorphic to H, and their fusion under an ambient group.

    ``ambient_map`` carries elements of G into the ambient group's domain
    (identity when omitted). Every subgroup isomorphic to H is the image of
    a monomorphism, and every monomorphism is G-conjugate to one of the
    representatives kept by the search, so scanning those images suffices.
    """
    if mono is None:
        mono = search_monomorphisms(H, G)
    n = G.degree
    distinct: list[tuple] = []
    for sol in mono.representatives():
        if not any(same_subgroup(sol, d, n) for d in distinct):
            distinct.append(sol)
    groups = _union_find_classes(distinct, lambda a, b: transporter(G, a, b, method) is not None)
    classes = []
    for members in groups:
        gens = distinct[members[0]]
        N = normalizer(G, gens, method)
        classes.append(SubgroupClass(tuple(Permutation._trusted(x) for x in gens),
                                     G.order() // N.order(), N.order()))
    fusion = None
    if ambient is not None:
        f = ambient_map or (lambda g: tuple(g))
        mapped = [[f(g) for g in c.generators] for c in classes]
        fusion = _union_find_classes(mapped, lambda a, b: transporter(ambient, a, b) is not None)
        for label, part in enumerate(fusion):
            for i in part:
                classes[i].fusion_class = label
    return SubgroupClassReport(classes, fusion)
