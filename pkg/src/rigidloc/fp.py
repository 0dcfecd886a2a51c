"""Finitely presented groups: words, Todd-Coxeter enumeration, low-index search.

A word is a tuple of nonzero ints: ``k`` is generator ``k`` (1-based) and
``-k`` its inverse. In text, generators are the letters ``a, b, c, ...`` and
capitals denote inverses, e.g. ``"a b A B"``.

Coset tables use one column per letter: column ``2*(k-1)`` for generator k
and ``2*(k-1) + 1`` for its inverse. Entry ``T[c][x]`` is the coset ``c . x``
(right multiplication).
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Sequence

from .errors import CosetOverflow, GuardExceeded, ParseError
from .perm import Permutation, _identity, _inv, _is_identity, _mul

LETTERS = string.ascii_lowercase
LOW_INDEX_GUARD = 10_000
DEFAULT_MAX_COSETS = 2_000_000


Word = tuple


def parse_word(text: str, n_generators: int | None = None) -> Word:
    letters = []
    for token in text.split():
        if token == "1":
            continue
        for ch in token:
            if ch.lower() not in LETTERS:
                raise ParseError(f"bad letter {ch!r} in word {text!r}")
            k = LETTERS.index(ch.lower()) + 1
            if n_generators is not None and k > n_generators:
                raise ParseError(f"letter {ch!r} beyond {n_generators} generators")
            letters.append(k if ch.islower() else -k)
    return tuple(letters)


def format_word(word: Sequence[int]) -> str:
    if not word:
        return "1"
    return " ".join(LETTERS[abs(x) - 1] if x > 0 else LETTERS[abs(x) - 1].upper()
                    for x in word)


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


@dataclass(frozen=True)
class Presentation:
    n_generators: int
    relators: tuple = ()

    def __post_init__(self):
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.n_generators:
                    raise ValueError(f"letter {x} out of range in relator {r}")

    @classmethod
    def from_strings(cls, n_generators: int, relators: Sequence[str]) -> Presentation:
        return cls(n_generators, tuple(parse_word(r, n_generators) for r in relators))


def evaluate_word(word: Sequence[int], images: Sequence[Sequence[int]]):
    """Image of ``word`` under generator images (left-to-right product)."""
    degree = len(images[0]) if images else 0
    inverses: dict[int, tuple] = {}
    g = _identity(degree)
    for x in word:
        k = abs(x) - 1
        if x > 0:
            h = tuple(images[k])
        else:
            h = inverses.get(k)
            if h is None:
                h = inverses[k] = _inv(tuple(images[k]))
        g = _mul(g, h)
    return g


def check_relators(p: Presentation, images: Sequence[Sequence[int]]) -> bool:
    if len(images) != p.n_generators:
        raise ValueError(f"{len(images)} images for {p.n_generators} generators")
    if images:
        degree = len(images[0])
        if any(len(g) != degree for g in images):
            raise ValueError("images of different degrees")
    return all(_is_identity(evaluate_word(r, images)) for r in p.relators)


def _col(x):
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


@dataclass
class CosetTable:
    """A closed coset table.

    ``action[k]`` is the permutation of cosets induced by generator k as a
    homomorphism (left action): coset ``c`` goes to ``c . g_k^{-1}`` in the
    right-coset notation of the raw table. The subgroup is the stabilizer of
    coset 0.
    """

    n_cosets: int
    table: tuple  # rows of column entries, standardized
    subgroup_words: tuple = ()
    action: tuple = field(default=())

    def __post_init__(self):
        if not self.action and self.table:
            ngens = len(self.table[0]) // 2
            self.action = tuple(
                Permutation._trusted(row[2 * k + 1] for row in self.table)
                for k in range(ngens))

    def right_column(self, k: int) -> tuple:
        return tuple(row[2 * k] for row in self.table)

    def key(self):
        return (self.n_cosets, self.table)


class _Enumerator:
    """HLT coset enumeration with lookahead and union-find coincidences."""

    def __init__(self, p: Presentation, subgroup_words, max_cosets):
        self.ncols = 2 * p.n_generators
        self.relators = [tuple(_col(x) for x in r) for r in p.relators if r]
        self.subgroup = [tuple(_col(x) for x in w) for w in subgroup_words if w]
        self.max_cosets = max_cosets
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]

    def define(self, c, x):
        if len(self.table) >= self.max_cosets:
            raise CosetOverflow(f"coset table exceeded {self.max_cosets} cosets")
        n = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(n)
        self.table[c][x] = n
        self.table[n][x ^ 1] = c
        return n

    def rep(self, k):
        parent = self.parent
        r = k
        while parent[r] != r:
            r = parent[r]
        while parent[k] != r:
            parent[k], k = r, parent[k]
        return r

    def merge(self, k, l, queue):
        a, b = self.rep(k), self.rep(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            queue.append(hi)

    def coincidence(self, a, b):
        queue: list[int] = []
        self.merge(a, b, queue)
        T = self.table
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            row = T[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                T[d][x ^ 1] = -1
                mu, nu = self.rep(g), self.rep(d)
                if T[mu][x] >= 0:
                    self.merge(nu, T[mu][x], queue)
                elif T[nu][x ^ 1] >= 0:
                    self.merge(mu, T[nu][x ^ 1], queue)
                else:
                    T[mu][x] = nu
                    T[nu][x ^ 1] = mu

    def scan(self, a, word, fill):
        T = self.table
        f, i = a, 0
        b, j = a, len(word) - 1
        while True:
            while i <= j and T[f][word[i]] >= 0:
                f = T[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and T[b][word[j] ^ 1] >= 0:
                b = T[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                T[f][word[i]] = b
                T[b][word[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, word[i])

    def live(self, c):
        return self.parent[c] == c

    def lookahead(self):
        for c in range(len(self.table)):
            for w in self.relators:
                if not self.live(c):
                    break
                self.scan(c, w, fill=False)

    def run(self):
        for w in self.subgroup:
            self.scan(0, w, fill=True)
        c = 0
        while c < len(self.table):
            if self.live(c):
                try:
                    for w in self.relators:
                        if not self.live(c):
                            break
                        self.scan(c, w, fill=True)
                    if self.live(c):
                        for x in range(self.ncols):
                            if self.table[c][x] < 0:
                                self.define(c, x)
                except CosetOverflow:
                    self.lookahead()
                    self._compact()
                    if len(self.table) >= self.max_cosets:
                        raise
                    c = 0
                    continue
            c += 1
        return self._standardize()

    def _n_live(self):
        return sum(1 for c in range(len(self.table)) if self.parent[c] == c)

    def _compact(self):
        keep = [c for c in range(len(self.table)) if self.parent[c] == c]
        remap = {old: new for new, old in enumerate(keep)}
        self.table = [[remap[e] if e >= 0 else -1 for e in self.table[c]] for c in keep]
        self.parent = list(range(len(keep)))

    def _standardize(self):
        T = self.table
        order = [0]
        new = {0: 0}
        k = 0
        while k < len(order):
            row = T[order[k]]
            for x in range(self.ncols):
                e = row[x]
                if e >= 0 and e not in new:
                    new[e] = len(order)
                    order.append(e)
            k += 1
        rows = []
        for c in order:
            row = T[c]
            if any(e < 0 for e in row):
                raise RuntimeError("enumeration finished with an incomplete table")
            rows.append(tuple(new[e] for e in row))
        return tuple(rows)


def coset_enumerate(p: Presentation, subgroup_words: Sequence[Sequence[int]] = (),
                    max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by ``subgroup_words``.

    Raises :class:`CosetOverflow` (a guard) when the working table would
    exceed ``max_cosets`` even after a lookahead pass.
    """
    words = tuple(tuple(w) for w in subgroup_words)
    rows = _Enumerator(p, words, max_cosets).run()
    return CosetTable(len(rows), rows, words)


# -- low-index subgroups ------------------------------------------------------

class _LowIndex:
    def __init__(self, p: Presentation, n_max: int):
        self.ncols = 2 * p.n_generators
        self.n_max = n_max
        rels = [tuple(_col(x) for x in free_reduce(r)) for r in p.relators]
        self.relators = [r for r in rels if r]
        self.results: list[tuple] = []

    def propagate(self, T, n):
        """Apply relator deductions until stable. Returns False on contradiction."""
        changed = True
        rels = self.relators
        while changed:
            changed = False
            for a in range(n):
                for w in rels:
                    f, i = a, 0
                    b, j = a, len(w) - 1
                    while i <= j and T[f][w[i]] >= 0:
                        f = T[f][w[i]]
                        i += 1
                    if i > j:
                        if f != a:
                            return False
                        continue
                    while j >= i and T[b][w[j] ^ 1] >= 0:
                        b = T[b][w[j] ^ 1]
                        j -= 1
                    if j < i:
                        if f != b:
                            return False
                        continue
                    if i == j:
                        x = w[i]
                        if T[f][x] >= 0 or T[b][x ^ 1] >= 0:
                            return False
                        T[f][x] = b
                        T[b][x ^ 1] = f
                        changed = True
        return True

    def is_first_in_class(self, T, n):
        """False if renumbering from some other coset gives a smaller table."""
        ncols = self.ncols
        for c in range(1, n):
            order = [c]
            new = {c: 0}
            verdict = 0
            r = 0
            while r < len(order) and verdict == 0:
                old_row = T[order[r]]
                orig_row = T[r]
                for x in range(ncols):
                    e = old_row[x]
                    o = orig_row[x]
                    if e < 0 or o < 0:
                        verdict = 2
                        break
                    v = new.get(e)
                    if v is None:
                        v = new[e] = len(order)
                        order.append(e)
                    if v < o:
                        return False
                    if v > o:
                        verdict = 1
                        break
                r += 1
        return True

    def search(self, T, n):
        stack = [(T, n)]
        while stack:
            T, n = stack.pop()
            if not self.is_first_in_class(T, n):
                continue
            pos = None
            for c in range(n):
                row = T[c]
                for x in range(self.ncols):
                    if row[x] < 0:
                        pos = (c, x)
                        break
                if pos:
                    break
            if pos is None:
                self.results.append(tuple(tuple(row) for row in T[:n]))
                continue
            c, x = pos
            branches = []
            for d in range(n):
                if T[d][x ^ 1] < 0:
                    branches.append((d, n))
            if n < self.n_max:
                branches.append((n, n + 1))
            # push in reverse so that branches are explored in increasing order
            for d, n2 in reversed(branches):
                T2 = [list(row) for row in T]
                if n2 > n:
                    T2.append([-1] * self.ncols)
                T2[c][x] = d
                T2[d][x ^ 1] = c
                if self.propagate(T2, n2):
                    stack.append((T2, n2))


def low_index_subgroups(p: Presentation, n_max: int,
                        guard: int = LOW_INDEX_GUARD) -> list[CosetTable]:
    """One coset table per conjugacy class of subgroups of index <= n_max.

    Sims' backtrack over standardized coset tables, keeping only tables that
    are lexicographically least among the renumberings from each coset.
    Results are sorted by (index, table).
    """
    if n_max > guard:
        raise GuardExceeded(f"low-index bound {n_max} exceeds guard {guard}")
    if n_max < 1:
        return []
    li = _LowIndex(p, n_max)
    T = [[-1] * li.ncols]
    if li.propagate(T, 1):
        li.search(T, 1)
    tables = sorted(set(li.results), key=lambda t: (len(t), t))
    return [CosetTable(len(t), t) for t in tables]


def table_is_valid(p: Presentation, ct: CosetTable) -> bool:
    """Relators fix every coset, inverse columns agree, action is transitive."""
    T = ct.table
    n = ct.n_cosets
    for c in range(n):
        for x in range(len(T[c])):
            if T[T[c][x]][x ^ 1] != c:
                return False
    for r in p.relators:
        cols = [_col(x) for x in r]
        for c in range(n):
            d = c
            for x in cols:
                d = T[d][x]
            if d != c:
                return False
    for w in ct.subgroup_words:
        d = 0
        for x in w:
            d = T[d][_col(x)]
        if d != 0:
            return False
    seen = {0}
    frontier = [0]
    while frontier:
        c = frontier.pop()
        for e in T[c]:
            if e not in seen:
                seen.add(e)
                frontier.append(e)
    return len(seen) == n
