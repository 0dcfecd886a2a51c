"""Group records: permutation generators, a presentation and tagged metadata.

Line-oriented text format::

    group <name> degree <n>
    gen <cycle notation>        (repeatable)
    rel <word>                  (repeatable, letters a b A B ...)
    sub <label> <word>          (repeatable; words generating a named subgroup)
    meta order <N> <derived|asserted>
    meta out <N> <derived|asserted>
    end

A record without ``gen`` lines is a stub: it carries literature metadata
only and is never used for computation.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import AtlasError, ParseError
from .fp import (CosetOverflow, Presentation, check_relators, coset_enumerate,
                 format_word, parse_word)
from .perm import (StabilizerChain, _conj, _inv, _is_identity,
                   build_chain, parse_perm)

TRIVIAL_ENUMERATION_LIMIT = 10_000
EXHAUSTIVE_SIMPLICITY_LIMIT = 10_000
RANDOM_SIMPLICITY_SAMPLES = 200
TAGS = ("derived", "asserted")


@dataclass(eq=False)
class GroupRecord:
    name: str
    degree: int
    generators: tuple = ()
    presentation: Presentation | None = None
    meta_order: int = 0
    order_tag: str = "asserted"
    meta_out_order: int | None = None
    out_tag: str | None = None
    subgroups: dict = field(default_factory=dict)
    simplicity_status: str = "asserted"
    _chain: StabilizerChain | None = field(default=None, repr=False)

    @property
    def is_stub(self) -> bool:
        return not self.generators

    @property
    def chain(self) -> StabilizerChain:
        if self.is_stub:
            raise AtlasError(f"{self.name} is a metadata-only record")
        if self._chain is None:
            self._chain = build_chain(self.generators, self.degree)
        return self._chain

    def order(self) -> int:
        return self.chain.order() if not self.is_stub else self.meta_order

    def subgroup_words(self, label: str) -> tuple:
        try:
            return self.subgroups[label]
        except KeyError:
            raise AtlasError(f"{self.name} has no subgroup labelled {label!r}") from None


def _parse_tag(tok, lineno):
    if tok not in TAGS:
        raise ParseError(f"provenance tag must be derived or asserted, got {tok!r}", line=lineno)
    return tok


def parse_atlas(text: str) -> list[GroupRecord]:
    """Parse atlas text without validating group-theoretic content."""
    records: list[GroupRecord] = []
    cur = None
    rels: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        toks = rest.split()
        if head == "group":
            if cur is not None:
                raise ParseError("'group' before 'end'", line=lineno)
            if len(toks) != 3 or toks[1] != "degree" or not toks[2].isdigit():
                raise ParseError("expected 'group <name> degree <n>'", line=lineno)
            cur = GroupRecord(name=toks[0], degree=int(toks[2]))
            gens, rels = [], []
            cur.generators = gens
            continue
        if cur is None:
            raise ParseError(f"{head!r} outside a group block", line=lineno)
        try:
            if head == "gen":
                cur.generators.append(parse_perm(rest, cur.degree))
            elif head == "rel":
                rels.append(parse_word(rest))
            elif head == "sub":
                label, _, word = rest.partition(" ")
                if not label:
                    raise ParseError("expected 'sub <label> <word>'", line=lineno)
                cur.subgroups.setdefault(label, []).append(parse_word(word))
            elif head == "meta":
                if len(toks) != 3 or toks[0] not in ("order", "out") or not toks[1].isdigit():
                    raise ParseError("expected 'meta order|out <N> <tag>'", line=lineno)
                value, tag = int(toks[1]), _parse_tag(toks[2], lineno)
                if toks[0] == "order":
                    cur.meta_order, cur.order_tag = value, tag
                else:
                    cur.meta_out_order, cur.out_tag = value, tag
            elif head == "end":
                cur.generators = tuple(cur.generators)
                ngens = len(cur.generators)
                if rels:
                    n = max(ngens, max((abs(x) for r in rels for x in r), default=0))
                    if ngens and n > ngens:
                        raise ParseError(f"relator uses {n} generators, {ngens} given", line=lineno)
                    cur.presentation = Presentation(n, tuple(rels))
                cur.subgroups = {k: tuple(v) for k, v in cur.subgroups.items()}
                if not cur.meta_order:
                    raise ParseError(f"{cur.name}: missing 'meta order'", line=lineno)
                records.append(cur)
                cur = None
            else:
                raise ParseError(f"unknown keyword {head!r}", line=lineno)
        except ParseError as e:
            if e.line is None:
                raise ParseError(str(e), line=lineno) from e
            raise
    if cur is not None:
        raise ParseError(f"{cur.name}: missing 'end'")
    return records


def dump_atlas(records: Iterable[GroupRecord]) -> str:
    out = []
    for r in records:
        out.append(f"group {r.name} degree {r.degree}")
        out.extend(f"gen {g}" for g in r.generators)
        if r.presentation is not None:
            out.extend(f"rel {format_word(w)}" for w in r.presentation.relators)
        for label, words in r.subgroups.items():
            out.extend(f"sub {label} {format_word(w)}" for w in words)
        out.append(f"meta order {r.meta_order} {r.order_tag}")
        if r.meta_out_order is not None:
            out.append(f"meta out {r.meta_out_order} {r.out_tag}")
        out.append("end")
    return "".join(line + "\n" for line in out)


def validate_presentation(r: GroupRecord) -> None:
    """Certify that the presentation defines exactly the permutation group.

    The relators must hold on the generators, so the permutation group is a
    quotient of the presented group. For small groups the trivial subgroup is
    enumerated; otherwise the cosets of a cyclic subgroup <g> with a relator
    g^m give the upper bound m * index.
    """
    p = r.presentation
    if p.n_generators != len(r.generators):
        raise AtlasError(f"{r.name}: presentation has {p.n_generators} generators, "
                         f"record has {len(r.generators)}")
    if not check_relators(p, r.generators):
        raise AtlasError(f"{r.name}: a relator is violated by the permutation generators")
    order = r.chain.order()
    try:
        if order <= TRIVIAL_ENUMERATION_LIMIT:
            n = coset_enumerate(p, (), max_cosets=50 * order).n_cosets
            if n != order:
                raise AtlasError(f"{r.name}: presentation defines a group of order {n}, not {order}")
            return
        best = None
        for rel in p.relators:
            if len(set(rel)) == 1:
                m = len(rel)
                if best is None or m > best[0]:
                    best = (m, (rel[0],))
        if best is None:
            raise AtlasError(f"{r.name}: no power relator available to bound the order")
        m, word = best
        n = coset_enumerate(p, [word], max_cosets=50 * order // m + 1000).n_cosets
        if n * m != order:
            raise AtlasError(f"{r.name}: presentation bound {n * m} differs from order {order}")
    except CosetOverflow as e:
        raise AtlasError(f"{r.name}: coset enumeration overflow ({e})") from e


def conjugacy_class_reps(chain: StabilizerChain) -> list[tuple]:
    """Representatives of the conjugacy classes (element enumeration)."""
    gens = [tuple(g) for g in chain.generators]
    invs = [_inv(g) for g in gens]
    seen = set()
    reps = []
    for x in sorted(chain.iter_elements()):
        if x in seen:
            continue
        reps.append(x)
        seen.add(x)
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g, gi in zip(gens, invs):
                z = _conj(g, y, gi)
                if z not in seen:
                    seen.add(z)
                    frontier.append(z)
    return reps


def normal_closure(chain: StabilizerChain, gens: Sequence[Sequence[int]]) -> StabilizerChain:
    degree = chain.degree
    ngens = [tuple(g) for g in gens if not _is_identity(tuple(g))]
    closure = build_chain(ngens, degree)
    conjugators = [(tuple(g), _inv(tuple(g))) for g in chain.generators]
    changed = True
    while changed:
        changed = False
        for h in list(closure.strong_generators):
            for g, gi in conjugators:
                c = _conj(g, h, gi)
                if not closure.contains(c):
                    ngens.append(c)
                    closure = build_chain(ngens, degree)
                    changed = True
    return closure


@dataclass
class SimplicityResult:
    verified: bool
    witness: StabilizerChain | None = None
    exhaustive: bool = True

    def __bool__(self):
        return self.verified


def verify_simplicity(r: GroupRecord, seed: int = 0) -> SimplicityResult:
    """Normal closure of every class representative must be the whole group.

    Exhaustive over conjugacy classes up to order 10^4; above that, a seeded
    sample of random elements is tested instead.
    """
    chain = r.chain
    order = chain.order()
    if order <= 1:
        raise ValueError("simplicity is undefined for the trivial group")
    if order <= EXHAUSTIVE_SIMPLICITY_LIMIT:
        candidates = conjugacy_class_reps(chain)
        exhaustive = True
    else:
        rng = random.Random(seed)
        candidates = [tuple(chain.random_element(rng)) for _ in range(RANDOM_SIMPLICITY_SAMPLES)]
        exhaustive = False
    for g in candidates:
        if _is_identity(g):
            continue
        closure = normal_closure(chain, [g])
        if closure.order() != order:
            return SimplicityResult(False, closure, exhaustive)
    return SimplicityResult(True, None, exhaustive)


def validate_record(r: GroupRecord) -> None:
    if r.is_stub:
        if r.order_tag != "asserted":
            raise AtlasError(f"{r.name}: metadata-only record must be tagged asserted")
        r.simplicity_status = "asserted"
        return
    order = r.chain.order()
    if order != r.meta_order:
        raise AtlasError(f"{r.name}: generators give order {order}, metadata says {r.meta_order}")
    if r.presentation is not None:
        validate_presentation(r)
    r.simplicity_status = "verified" if verify_simplicity(r) else "failed"


def load_atlas_text(text: str) -> list[GroupRecord]:
    records = parse_atlas(text)
    names = set()
    for r in records:
        if r.name in names:
            raise AtlasError(f"duplicate group name {r.name!r}")
        names.add(r.name)
    for r in records:
        validate_record(r)
    return records


def load_atlas(path) -> list[GroupRecord]:
    """Load and validate an atlas file; fails atomically on any violation."""
    return load_atlas_text(Path(path).read_text())


class Atlas:
    """Read-only catalog of validated records, addressed by name."""

    def __init__(self, records: Iterable[GroupRecord]):
        self._records = {r.name: r for r in records}

    def __getitem__(self, name: str) -> GroupRecord:
        try:
            return self._records[name]
        except KeyError:
            raise AtlasError(f"unknown group {name!r}") from None

    def __contains__(self, name):
        return name in self._records

    def __iter__(self):
        return iter(self._records.values())

    def names(self):
        return list(self._records)


BUNDLED_ATLAS = "atlas.txt"


def bundled_atlas_path() -> Path:
    return Path(str(resources.files("rigidloc") / "data" / BUNDLED_ATLAS))


@functools.lru_cache(maxsize=None)
def _load_cached(path: str, mtime: float) -> Atlas:
    return Atlas(load_atlas(path))


def load_bundled(path=None) -> Atlas:
    p = Path(path) if path else bundled_atlas_path()
    return _load_cached(str(p), p.stat().st_mtime)
