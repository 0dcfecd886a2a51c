"""Automorphism groups of small simple groups, realized as permutation groups.

Two realizations are used. The normalizer of G in the symmetric group of
its own domain works whenever every automorphism is induced by a point
permutation. Otherwise automorphisms act on the list of group elements,
which is always faithful but only affordable for small groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import GuardExceeded
from .fp import low_index_subgroups
from .perm import (Permutation, StabilizerChain, _conj, _identity, _inv, _mul,
                   build_chain, symmetric_chain)
from .search import (Embedding, centralizer, normalizer, search_monomorphisms)

MAX_MONO_COUNT_ORDER = 20_000
MAX_ELEMENT_ACTION_ORDER = 20_000

NATURAL = "normalizer-in-symmetric"
ELEMENT_ACTION = "action-on-elements"


@dataclass(frozen=True)
class AutOrder:
    value: int
    tag: str  # derived | asserted
    method: str


def _unique_index_class_certificate(G) -> bool:
    """True when every automorphism of G is induced by a point permutation.

    Requirements: G is transitive of degree n, the point stabilizer fixes
    only its own point, G has a single class of subgroups of index n and
    trivial centralizer in Sym(n). Automorphisms then permute the point
    stabilizers, hence the points, and distinct automorphisms give distinct
    permutations.
    """
    chain = G.chain
    n = chain.degree
    if G.presentation is None or not chain.is_transitive():
        return False
    stab = build_chain(chain.generators, n, base=[0])
    point_stab = _stabilizer_of_first_base_point(stab)
    fixed = [p for p in range(n) if all(g[p] == p for g in point_stab)]
    if fixed != [0]:
        return False
    index_n = [t for t in low_index_subgroups(G.presentation, n) if t.n_cosets == n]
    if len(index_n) != 1:
        return False
    return centralizer(symmetric_chain(n), chain.generators).is_trivial()


def _stabilizer_of_first_base_point(chain: StabilizerChain) -> list[tuple]:
    """Generators of the stabilizer of base[0] (strong generators below level 0)."""
    out = []
    for gens in chain._level_gens[1:]:
        out.extend(gens)
    return out or [_identity(chain.degree)]


def aut_order(G, max_order: int = MAX_MONO_COUNT_ORDER) -> AutOrder:
    """|Aut(G)| by counting monomorphisms G -> G, or by the unique-index-class route."""
    if G.is_stub:
        if G.meta_out_order is None:
            raise GuardExceeded(f"{G.name}: no automorphism data available")
        return AutOrder(G.meta_order * G.meta_out_order, "asserted", "metadata")
    order = G.order()
    if order <= max_order and G.presentation is not None:
        count = search_monomorphisms(G, G.chain, max_source_order=max_order).count
        return AutOrder(count, "derived", "monomorphism count")
    if _unique_index_class_certificate(G):
        n = normalizer(symmetric_chain(G.degree), G.chain.generators).order()
        return AutOrder(n, "derived", "unique index class")
    if G.meta_out_order is None:
        raise GuardExceeded(f"{G.name}: order {order} beyond the automorphism guard and no metadata")
    return AutOrder(order * G.meta_out_order, "asserted", "metadata")


@dataclass
class AutRep:
    base_group: object  # GroupRecord
    realization: StabilizerChain
    mode: str
    aut_order: int
    certificate: dict = field(default_factory=dict)
    embed: Callable = None  # element of G -> element of the realization
    apply: Callable = None  # (automorphism, element of G) -> element of G

    @property
    def certified(self) -> bool:
        return bool(self.certificate.get("certified"))

    @property
    def out_order(self) -> int:
        return self.aut_order // self.base_group.order()


def _natural(G, order: AutOrder) -> AutRep | None:
    n = G.degree
    Sn = symmetric_chain(n)
    N = normalizer(Sn, G.chain.generators)
    C = centralizer(Sn, G.chain.generators)
    cert = {"normalizer_order": N.order(), "centralizer_trivial": C.is_trivial(),
            "aut_order_method": order.method}
    cert["certified"] = C.is_trivial() and N.order() == order.value and order.tag == "derived"
    if not cert["certified"]:
        return None
    return AutRep(G, N, NATURAL, order.value, cert,
                  embed=lambda g: tuple(g),
                  apply=lambda a, g: _conj(tuple(a), tuple(g)))


class _ElementIndex:
    def __init__(self, G):
        self.gens = [tuple(g) for g in G.generators]
        ident = _identity(G.degree)
        # breadth-first words from the identity give each element a path
        self.elements = [ident]
        self.parent = [(-1, -1)]
        self.index = {ident: 0}
        for i, x in enumerate(self.elements):
            for j, g in enumerate(self.gens):
                y = _mul(x, g)
                if y not in self.index:
                    self.index[y] = len(self.elements)
                    self.elements.append(y)
                    self.parent.append((i, j))

    def action_of_automorphism(self, gen_images) -> tuple:
        """Permutation of element indices induced by the automorphism gens -> gen_images."""
        img = [None] * len(self.elements)
        img[0] = self.elements[0]
        for k in range(1, len(self.elements)):
            i, j = self.parent[k]
            img[k] = _mul(img[i], gen_images[j])
        return tuple(self.index[y] for y in img)

    def conjugation(self, g) -> tuple:
        g = tuple(g)
        gi = _inv(g)
        return tuple(self.index[_conj(g, x, gi)] for x in self.elements)


def _element_action(G, order: AutOrder) -> AutRep:
    if G.order() > MAX_ELEMENT_ACTION_ORDER:
        raise GuardExceeded(f"{G.name}: element action needs order <= {MAX_ELEMENT_ACTION_ORDER}")
    idx = _ElementIndex(G)
    m = len(idx.elements)
    mono = search_monomorphisms(G, G.chain, max_source_order=MAX_ELEMENT_ACTION_ORDER)
    gens = [idx.conjugation(g) for g in idx.gens]
    R = build_chain(gens, m)
    # inner automorphisms plus one representative per searched class generate Aut(G)
    for sol in mono.representatives():
        if R.order() == mono.count:
            break
        a = idx.action_of_automorphism(sol)
        if not R.contains(a):
            gens.append(a)
            R = build_chain(gens, m)
    cert = {"mono_count": mono.count, "realization_order": R.order(),
            "aut_order_method": order.method}
    cert["certified"] = R.order() == order.value == mono.count
    elements = idx.elements
    index = idx.index
    return AutRep(G, R, ELEMENT_ACTION, order.value, cert,
                  embed=idx.conjugation,
                  apply=lambda a, g: elements[a[index[tuple(g)]]])


def aut_realization(G, order: AutOrder | None = None) -> AutRep:
    """A certified permutation realization of Aut(G)."""
    if G.is_stub:
        raise GuardExceeded(f"{G.name}: metadata-only record, no realization")
    order = order or aut_order(G)
    if order.tag != "derived":
        raise GuardExceeded(f"{G.name}: automorphism order only asserted")
    rep = _natural(G, order)
    if rep is not None:
        return rep
    rep = _element_action(G, order)
    if not rep.certified:
        raise GuardExceeded(f"{G.name}: no certified automorphism realization")
    return rep


def inner_embedding(rep: AutRep) -> Embedding:
    """G -> Aut(G), g -> conjugation by g, as an embedding into the realization."""
    G = rep.base_group
    images = tuple(Permutation._trusted(rep.embed(g)) for g in G.generators)
    e = Embedding(G, rep.realization, images)
    e.certify()
    return e
