"""Coset permutation representations and the largest-maximal-subgroup test.

A simple group H acting on the n cosets of a subgroup K lands in the
alternating group of degree n. When K has the largest order among proper
subgroups and every index-n subgroup is conjugate to K (n >= 7), that
inclusion is a localization. Both conditions are decided inside H from a
low-index subgroup scan of its presentation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CosetOverflow, GuardExceeded
from .fp import (DEFAULT_MAX_COSETS, CosetTable, _col, check_relators, coset_enumerate,
                 evaluate_word, invert_word, low_index_subgroups)
from .perm import Permutation, StabilizerChain, build_chain
from .search import transporter

PASS, FAIL, UNDECIDED = "pass", "fail", "undecided"
MIN_DEGREE = 7


@dataclass
class CosetEmbedding:
    source: object  # GroupRecord
    stabilizer_words: tuple
    degree: int
    images: tuple
    evenness: bool
    faithful: bool
    table: CosetTable | None = None
    conditions: dict = field(default_factory=lambda: {"order_maximal": UNDECIDED,
                                                      "unique_index_class": UNDECIDED})
    witnesses: dict = field(default_factory=dict)
    primitive: bool | None = None

    def image_chain(self) -> StabilizerChain:
        return build_chain(self.images, self.degree)

    def to_text(self) -> str:
        lines = [f"source {self.source.name}", f"degree {self.degree}",
                 f"evenness {str(self.evenness).lower()}", f"faithful {str(self.faithful).lower()}"]
        lines += [f"image {p}" for p in self.images]
        for k in ("order_maximal", "unique_index_class"):
            lines.append(f"condition {k} {self.conditions[k]}")
        if self.primitive is not None:
            lines.append(f"primitive {str(self.primitive).lower()}")
        if self.table is not None:
            for row in self.table.table:
                lines.append("row " + " ".join(str(c + 1) for c in row))
        return "\n".join(lines) + "\n"


def subgroup_generators(H, table: CosetTable) -> list[Permutation]:
    """Generators of the coset-0 stabilizer, evaluated in H's permutation generators.

    Schreier generators u_c x u_(c.x)^-1 from a breadth-first spanning tree.
    """
    T = table.table
    ngens = len(T[0]) // 2
    letters = [x for k in range(1, ngens + 1) for x in (k, -k)]
    tree = {0: ()}
    order = [0]
    for c in order:
        for x in letters:
            d = T[c][_col(x)]
            if d not in tree:
                tree[d] = tree[c] + (x,)
                order.append(d)
    out = []
    seen = set()
    for c in order:
        for x in range(1, ngens + 1):
            d = T[c][_col(x)]
            w = tree[c] + (x,) + invert_word(tree[d])
            p = Permutation._trusted(tuple(evaluate_word(w, H.generators)))
            if not p.is_identity() and p not in seen:
                seen.add(p)
                out.append(p)
    return out or [Permutation.identity(H.degree)]


def minimal_block(gens, degree: int, a: int, b: int) -> list[int]:
    """The smallest block of imprimitivity containing points a and b."""
    parent = list(range(degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = [(a, b)]
    parent[find(b)] = find(a)
    while queue:
        x, y = queue.pop()
        for g in gens:
            u, v = find(g[x]), find(g[y])
            if u != v:
                parent[v] = u
                queue.append((g[x], g[y]))
    root = find(a)
    return [p for p in range(degree) if find(p) == root]


def is_primitive(chain: StabilizerChain) -> bool:
    n = chain.degree
    if not chain.is_transitive():
        return False
    gens = [tuple(g) for g in chain.generators]
    return all(len(minimal_block(gens, n, 0, b)) == n for b in range(1, n))


def coset_embedding(H, stabilizer_words, max_cosets: int = DEFAULT_MAX_COSETS) -> CosetEmbedding:
    """H acting on the cosets of the subgroup generated by ``stabilizer_words``."""
    if H.presentation is None:
        raise ValueError(f"{H.name} has no presentation")
    words = tuple(tuple(w) for w in stabilizer_words)
    table = coset_enumerate(H.presentation, words, max_cosets=max_cosets)
    images = tuple(table.action)
    n = table.n_cosets
    if not check_relators(H.presentation, images):
        raise AssertionError("coset action violates a relator")
    chain = build_chain(images, n)
    emb = CosetEmbedding(H, words, n, images, all(p.is_even() for p in images),
                         chain.order() == H.order(), table)
    emb.primitive = is_primitive(chain)
    return emb


def check_largest_maximal(H, stabilizer_words, max_cosets: int = DEFAULT_MAX_COSETS) -> CosetEmbedding:
    """Fill in the two subgroup conditions for the coset representation.

    Condition ``order_maximal``: no proper subgroup of index below n.
    Condition ``unique_index_class``: exactly one class of index-n subgroups,
    and it contains the given stabilizer.
    """
    emb = coset_embedding(H, stabilizer_words, max_cosets)
    n = emb.degree
    if n < MIN_DEGREE:
        raise ValueError(f"degree {n} is below {MIN_DEGREE}; the alternating target is too small")
    try:
        tables = low_index_subgroups(H.presentation, n)
    except GuardExceeded as e:
        emb.witnesses["guard"] = str(e)
        return emb
    smaller = [t for t in tables if 1 < t.n_cosets < n]
    if smaller:
        emb.conditions["order_maximal"] = FAIL
        w = smaller[0]
        emb.witnesses["smaller_index"] = w.n_cosets
        emb.witnesses["smaller_subgroup"] = subgroup_generators(H, w)
    else:
        emb.conditions["order_maximal"] = PASS
    same = [t for t in tables if t.n_cosets == n]
    emb.witnesses["index_n_classes"] = len(same)
    if len(same) != 1:
        emb.conditions["unique_index_class"] = FAIL
    else:
        K = subgroup_generators(H, emb.table)
        L = subgroup_generators(H, same[0])
        conj = transporter(H.chain, K, L)
        emb.conditions["unique_index_class"] = PASS if conj is not None else FAIL
    return emb


def verify_theorem21_edge(H, stabilizer_words, max_cosets: int = DEFAULT_MAX_COSETS):
    """Verdict for the coset representation of H; sufficient conditions only."""
    from .localization import Verdict, LOCALIZATION, UNDECIDED as UND
    try:
        emb = check_largest_maximal(H, stabilizer_words, max_cosets)
    except CosetOverflow as e:
        return Verdict(UND, f"coset enumeration guard: {e}", route="theorem21", pair=(H.name, "A?"))
    pair = (H.name, f"A{emb.degree}")
    c = emb.conditions
    if c["order_maximal"] == PASS and c["unique_index_class"] == PASS and emb.faithful:
        v = Verdict(LOCALIZATION, "largest maximal subgroup, unique index class", route="theorem21", pair=pair)
    else:
        failed = [k for k, s in c.items() if s != PASS]
        v = Verdict(UND, "sufficient conditions not met: " + ", ".join(failed), route="theorem21", pair=pair)
    v.embedding = emb
    return v
