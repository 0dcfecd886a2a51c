"""Permutations of {1..n} and permutation groups given by stabilizer chains.

Points are 1-based in text (cycle notation) and 0-based everywhere else.
Products compose like functions: ``(p * q)(i) == p(q(i))``.

Hot loops work on plain tuples through the ``_mul``/``_inv`` helpers; the
:class:`Permutation` type is a tuple subclass, so both mix freely.
"""

from __future__ import annotations

import math
import random
import re
from typing import Iterable, Iterator, Sequence

from .errors import DegreeMismatch, GuardExceeded, ParseError

MAX_DEGREE = 2**20


def _mul(p, q):
    return tuple([p[j] for j in q])


def _inv(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def _identity(n):
    return tuple(range(n))


def _is_identity(p):
    return all(i == j for i, j in enumerate(p))


def _conj(g, h, g_inv=None):
    """Return g h g^-1."""
    if g_inv is None:
        g_inv = _inv(g)
    return tuple([g[h[j]] for j in g_inv])


def _power(p, k):
    if k < 0:
        p, k = _inv(p), -k
    result = _identity(len(p))
    while k:
        if k & 1:
            result = _mul(result, p)
        p = _mul(p, p)
        k >>= 1
    return result


def _cycle_lengths(p):
    seen = [False] * len(p)
    lengths = []
    for i in range(len(p)):
        if seen[i]:
            continue
        n = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            n += 1
        lengths.append(n)
    return lengths


def _order(p):
    return math.lcm(*_cycle_lengths(p)) if p else 1


def _cycle_type(p):
    return tuple(sorted((n for n in _cycle_lengths(p) if n > 1), reverse=True))


class Permutation(tuple):
    """An immutable permutation stored as its 0-based image table."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int] = ()):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images!r}")
        return super().__new__(cls, images)

    @classmethod
    def _trusted(cls, images):
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls._trusted(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        """Build from 1-based cycles; unmentioned points are fixed."""
        images = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a - 1] = b - 1
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        if len(other) != len(self):
            raise DegreeMismatch(f"degrees {len(self)} and {len(other)} differ")
        return Permutation._trusted(self[j] for j in other)

    def __rmul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        return Permutation(other) * self

    def __pow__(self, k: int) -> Permutation:
        return Permutation._trusted(_power(self, k))

    def __call__(self, point: int) -> int:
        return self[point]

    def inverse(self) -> Permutation:
        return Permutation._trusted(_inv(self))

    def is_identity(self) -> bool:
        return _is_identity(self)

    def order(self) -> int:
        return _order(self)

    def cycle_type(self) -> tuple:
        return _cycle_type(self)

    def is_even(self) -> bool:
        return sum(n - 1 for n in _cycle_lengths(self)) % 2 == 0

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its least point."""
        seen = set()
        out = []
        for i in range(len(self)):
            if i in seen or self[i] == i:
                continue
            cycle = [i]
            seen.add(i)
            j = self[i]
            while j != i:
                cycle.append(j)
                seen.add(j)
                j = self[j]
            out.append(tuple(k + 1 for k in cycle))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r}, degree={len(self)})"


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\d+)|(,)|(\S))")


def parse_perm(text: str, degree: int) -> Permutation:
    """Parse cycle notation such as ``"(1 2 3)(4 5)"``; ``"()"`` is the identity.

    Points may be separated by spaces or commas. Errors carry the character
    position of the offending token.
    """
    if degree < 0 or degree > MAX_DEGREE:
        raise ParseError(f"degree {degree} outside 0..{MAX_DEGREE}")
    cycles: list[list[int]] = []
    used: set[int] = set()
    current = None
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        pos = m.end()
        if m.group(1):
            if current is not None:
                raise ParseError("nested '('", start)
            current = []
        elif m.group(2):
            if current is None:
                raise ParseError("unmatched ')'", start)
            if len(current) > 1:
                cycles.append(current)
            current = None
        elif m.group(3):
            if current is None:
                raise ParseError("point outside a cycle", start)
            point = int(m.group(3))
            if point < 1 or point > degree:
                raise ParseError(f"point {point} outside 1..{degree}", start)
            if point in used:
                raise ParseError(f"point {point} repeated", start)
            used.add(point)
            current.append(point)
        elif m.group(4):
            if current is None:
                raise ParseError("',' outside a cycle", start)
        else:
            raise ParseError(f"unexpected character {m.group(5)!r}", start)
    if current is not None:
        raise ParseError("unterminated cycle", len(text))
    if not text.strip():
        raise ParseError("empty permutation text", 0)
    return Permutation.from_cycles(cycles, degree)


def format_perm(p: Sequence[int]) -> str:
    return str(Permutation._trusted(p))


class StabilizerChain:
    """A base and strong generating set with one transversal per base point.

    ``transversals[i]`` maps each point of the i-th fundamental orbit to a
    group element sending ``base[i]`` to that point. Instances are treated
    as immutable once :func:`build_chain` returns them.
    """

    def __init__(self, degree: int):
        self.degree = degree
        self.base: list[int] = []
        self._level_gens: list[list[tuple]] = []
        self.transversals: list[dict[int, tuple]] = []
        self._inv_transversals: list[dict[int, tuple]] = []
        self._orbit_lists: list[list[int]] = []
        self._order = None

    # -- construction (incremental deterministic Schreier-Sims) ----------

    def _new_level(self, point):
        ident = _identity(self.degree)
        self.base.append(point)
        self._level_gens.append([])
        self.transversals.append({point: ident})
        self._inv_transversals.append({point: ident})
        self._orbit_lists.append([point])

    def _sift_from(self, g, level):
        """Strip g through levels >= level; return (residue, drop level)."""
        for i in range(level, len(self.base)):
            b = g[self.base[i]]
            u_inv = self._inv_transversals[i].get(b)
            if u_inv is None:
                return g, i
            g = _mul(u_inv, g)
        return g, len(self.base)

    def _add_generator(self, level, g):
        """Append g (fixing base[:level], not in the level group) and close up."""
        if level == len(self.base):
            moved = next(i for i in range(self.degree) if g[i] != i)
            self._new_level(moved)
        gens = self._level_gens[level]
        gens.append(g)
        orbit = self._orbit_lists[level]
        # pairs (b, g) for points already in the orbit
        for idx in range(len(orbit)):
            self._process_pair(level, orbit[idx], g)
        # new orbit points are handled inside _process_pair

    def _process_pair(self, level, b, s):
        trans = self._inv_transversals[level]
        fwd = self.transversals[level]
        stack = [(b, s)]
        while stack:
            b, s = stack.pop()
            c = s[b]
            u_b = fwd[b]
            if c not in fwd:
                u_c = _mul(s, u_b)
                fwd[c] = u_c
                trans[c] = _inv(u_c)
                self._orbit_lists[level].append(c)
                for t in list(self._level_gens[level]):
                    stack.append((c, t))
                continue
            h = _mul(trans[c], _mul(s, u_b))
            if _is_identity(h):
                continue
            residue, drop = self._sift_from(h, level + 1)
            if _is_identity(residue):
                continue
            for j in range(drop, level, -1):
                self._add_generator(j, residue)
        self._order = None

    # -- queries ----------------------------------------------------------

    @property
    def strong_generators(self) -> list[Permutation]:
        seen = set()
        out = []
        for gens in self._level_gens:
            for g in gens:
                if g not in seen:
                    seen.add(g)
                    out.append(Permutation._trusted(g))
        return out

    @property
    def generators(self) -> list[Permutation]:
        return [Permutation._trusted(g) for g in self._level_gens[0]] if self._level_gens else []

    def basic_orbit_lengths(self) -> list[int]:
        return [len(o) for o in self._orbit_lists]

    def order(self) -> int:
        if self._order is None:
            self._order = math.prod(self.basic_orbit_lengths())
        return self._order

    def sift(self, g) -> tuple:
        if len(g) != self.degree:
            raise DegreeMismatch(f"expected degree {self.degree}, got {len(g)}")
        residue, _ = self._sift_from(tuple(g), 0)
        return residue

    def contains(self, g) -> bool:
        return _is_identity(self.sift(g))

    __contains__ = contains

    def is_trivial(self) -> bool:
        return self.order() == 1

    def orbits(self) -> list[list[int]]:
        """Orbit partition of {0..degree-1} under the group, sorted."""
        gens = self.strong_generators
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            orbit = [start]
            seen[start] = True
            for x in orbit:
                for g in gens:
                    y = g[x]
                    if not seen[y]:
                        seen[y] = True
                        orbit.append(y)
            out.append(sorted(orbit))
        return out

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def random_element(self, rng: random.Random) -> Permutation:
        """Uniformly random element (product of random coset representatives)."""
        g = _identity(self.degree)
        for i in range(len(self.base) - 1, -1, -1):
            orbit = self._orbit_lists[i]
            g = _mul(self.transversals[i][orbit[rng.randrange(len(orbit))]], g)
        return Permutation._trusted(g)

    def iter_elements(self) -> Iterator[tuple]:
        """Yield every element once, as a plain tuple."""
        levels = [[self.transversals[i][b] for b in self._orbit_lists[i]]
                  for i in range(len(self.base))]

        def rec(i, acc):
            if i < 0:
                yield acc
                return
            for u in levels[i]:
                yield from rec(i - 1, _mul(u, acc))

        yield from rec(len(levels) - 1, _identity(self.degree))

    def elements(self, limit: int = 2_000_000) -> list[tuple]:
        if self.order() > limit:
            raise GuardExceeded(f"refusing to list {self.order()} elements (limit {limit})")
        return list(self.iter_elements())

    def __repr__(self):
        return f"<StabilizerChain degree={self.degree} order={self.order()} base={self.base}>"


def build_chain(generators: Sequence[Sequence[int]], degree: int | None = None,
                base: Sequence[int] = ()) -> StabilizerChain:
    """Deterministic Schreier-Sims.

    ``base`` is an optional prefix of base points (0-based); it is extended
    as needed. The degree is taken from the generators unless none are given.
    """
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("degree required when no generators are given")
        degree = len(gens[0])
    if degree > MAX_DEGREE:
        raise GuardExceeded(f"degree {degree} exceeds {MAX_DEGREE}")
    for g in gens:
        if len(g) != degree:
            raise DegreeMismatch(f"generator of degree {len(g)} in a degree-{degree} group")
    chain = StabilizerChain(degree)
    for b in base:
        chain._new_level(b)
    for g in gens:
        residue, drop = chain._sift_from(g, 0)
        if _is_identity(residue):
            continue
        for j in range(drop, -1, -1):
            chain._add_generator(j, residue)
    return chain


def symmetric_chain(degree: int) -> StabilizerChain:
    if degree < 2:
        return build_chain([], degree)
    gens = [tuple([1, 0] + list(range(2, degree))), tuple(list(range(1, degree)) + [0])]
    return build_chain(gens, degree)


def alternating_chain(degree: int) -> StabilizerChain:
    if degree < 3:
        return build_chain([], degree)
    gens = []
    for k in range(2, degree):
        g = list(range(degree))
        g[0], g[1], g[k] = 1, k, 0
        gens.append(tuple(g))
    return build_chain(gens, degree)


def subgroup_chain(gens: Sequence[Sequence[int]], degree: int) -> StabilizerChain:
    return build_chain(gens, degree)
