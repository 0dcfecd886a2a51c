"""Deciding whether an inclusion of simple groups H -> G is a localization.

For simple H and G the inclusion is a localization exactly when every
nontrivial homomorphism H -> G extends uniquely to an automorphism of G.
That is checked either through three subgroup conditions inside a realized
Aut(G) (extension of Aut(H), fusion of all copies of H, trivial
centralizer) or directly by counting and comparing restrictions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .atlas import Atlas, GroupRecord, load_bundled
from .aut import AutRep, aut_order, aut_realization
from .errors import AtlasError, GuardExceeded, InvariantBreach, RigidLocError
from .fp import DEFAULT_MAX_COSETS
from .perm import Permutation, _mul, build_chain
from .search import (MAX_CHAIN_ORDER, MAX_TARGET_DEGREE, Embedding, MonoSearch,
                     centralizer, normalizer, search_monomorphisms, subgroup_classes)

LOCALIZATION = "Localization"
NOT_LOCALIZATION = "NotLocalization"
UNDECIDED = "Undecided"
PASS, FAIL, UNDECIDED_COND = "pass", "fail", "undecided"

ROUTES = ("theorem_main", "corollary_complete", "corollary_max", "oracle", "theorem21")
ORACLE_LIMIT = 1_000_000


class NoEmbedding(RigidLocError):
    """H has no injective homomorphism into G."""


@dataclass
class CriterionReport:
    pair: tuple
    route: str
    cond_extension: str = UNDECIDED_COND
    cond_fusion: str = UNDECIDED_COND
    cond_centralizer: str = UNDECIDED_COND
    class_count_observed: int | None = None
    class_count_expected: Fraction | None = None
    provenance: str = "derived"
    witnesses: dict = field(default_factory=dict)

    def conditions(self) -> tuple:
        return (self.cond_extension, self.cond_fusion, self.cond_centralizer)

    def value(self) -> str:
        conds = self.conditions()
        if self.provenance != "derived":
            return UNDECIDED
        if all(c == PASS for c in conds):
            return LOCALIZATION
        if any(c == FAIL for c in conds):
            return NOT_LOCALIZATION
        return UNDECIDED

    def to_text(self) -> str:
        lines = [f"pair {self.pair[0]} {self.pair[1]}", f"route {self.route}",
                 f"cond_extension {self.cond_extension}", f"cond_fusion {self.cond_fusion}",
                 f"cond_centralizer {self.cond_centralizer}",
                 f"class_count_observed {self.class_count_observed}",
                 f"class_count_expected {self.class_count_expected}",
                 f"provenance {self.provenance}"]
        for k in sorted(self.witnesses):
            lines.append(f"witness {k} {self.witnesses[k]}")
        return "\n".join(lines) + "\n"


@dataclass
class Verdict:
    value: str
    reason: str
    report: CriterionReport | None = None
    route: str | None = None
    pair: tuple | None = None
    embedding: object = None
    oracle: object = None

    def to_text(self) -> str:
        head = [f"verdict {self.value}", f"reason {self.reason}"]
        if self.route:
            head.append(f"route {self.route}")
        text = "\n".join(head) + "\n"
        if self.report is not None:
            text += self.report.to_text()
        return text


@dataclass
class Options:
    route: str = "auto"
    cross_check: bool = False
    max_order: int = MAX_CHAIN_ORDER
    max_degree: int = MAX_TARGET_DEGREE
    max_cosets: int = DEFAULT_MAX_COSETS
    embedding: tuple | None = None  # generator images of a chosen copy of H


# -- individual routes --------------------------------------------------------

def _image_gens(emb: Embedding) -> list[tuple]:
    return [tuple(g) for g in emb.gen_images]


def _autgroup_conditions(report: CriterionReport, H, emb: Embedding, autG: AutRep, autH_order: int):
    mapped = [autG.embed(g) for g in _image_gens(emb)]
    C = centralizer(autG.realization, mapped)
    N = normalizer(autG.realization, mapped)
    report.witnesses["aut_centralizer_order"] = C.order()
    report.witnesses["aut_normalizer_order"] = N.order()
    report.witnesses["aut_source_order"] = autH_order
    report.cond_centralizer = PASS if C.is_trivial() else FAIL
    if C.is_trivial():
        report.cond_extension = PASS if N.order() == autH_order else FAIL
    else:
        report.cond_extension = UNDECIDED_COND
    return C, N


def _fusion_and_counts(report: CriterionReport, H, emb: Embedding, autG: AutRep,
                       autH_order: int, mono: MonoSearch):
    G = emb.target_chain
    classes = subgroup_classes(H, G, autG.realization, autG.embed, mono=mono)
    report.cond_fusion = PASS if classes.n_fused == 1 else FAIL
    report.class_count_observed = classes.n_classes
    NG = normalizer(G, _image_gens(emb))
    out_g = Fraction(autG.aut_order, G.order())
    out_h = Fraction(autH_order, H.order())
    report.class_count_expected = out_g / out_h * Fraction(NG.order(), H.order())
    report.witnesses["G_class_sizes"] = [c.class_size for c in classes.classes]
    report.witnesses["aut_classes"] = classes.n_fused
    return classes


def check_criterion(H, emb: Embedding, autG: AutRep, mono: MonoSearch | None = None,
                    autH_order: int | None = None) -> CriterionReport:
    """The three conditions of the main criterion, each decided in the realization of Aut(G)."""
    report = CriterionReport((H.name, autG.base_group.name), "theorem_main")
    if autH_order is None:
        a = aut_order(H)
        autH_order = a.value
        if a.tag != "derived":
            report.provenance = "mixed"
    if mono is None:
        mono = search_monomorphisms(H, emb.target_chain)
    report.witnesses["monomorphisms"] = mono.count
    report.witnesses["aut_target_order"] = autG.aut_order
    _autgroup_conditions(report, H, emb, autG, autH_order)
    _fusion_and_counts(report, H, emb, autG, autH_order, mono)
    _check_count_identity(report)
    return report


def _check_count_identity(report: CriterionReport):
    """When every condition passes the observed class count must match the formula."""
    if all(c == PASS for c in report.conditions()):
        if Fraction(report.class_count_observed) != report.class_count_expected:
            raise InvariantBreach(f"{report.pair}: class count {report.class_count_observed} "
                                  f"!= expected {report.class_count_expected}")


def is_point_stabilizer_of_primitive(G, gens) -> bool:
    """True when <gens> is a full point stabilizer of a primitive group G (hence maximal)."""
    from .embed import is_primitive
    chain = G if not isinstance(G, GroupRecord) else G.chain
    n = chain.degree
    fixed = [p for p in range(n) if all(g[p] == p for g in gens)]
    if not fixed or not chain.is_transitive():
        return False
    if build_chain(gens, n).order() * n != chain.order():
        return False
    return is_primitive(chain)


def check_corollary_max(H, emb: Embedding, autG: AutRep, mono: MonoSearch,
                        autH_order: int) -> CriterionReport:
    """Maximal H: extension, fusion, and the class count |Out G|/|Out H|."""
    report = CriterionReport((H.name, autG.base_group.name), "corollary_max")
    report.witnesses["monomorphisms"] = mono.count
    report.witnesses["aut_target_order"] = autG.aut_order
    C, _ = _autgroup_conditions(report, H, emb, autG, autH_order)
    centralizer_status = report.cond_centralizer
    _fusion_and_counts(report, H, emb, autG, autH_order, mono)
    # maximality forces N_G(H) = H, so the expected count reduces to |Out G|/|Out H|
    count_ok = Fraction(report.class_count_observed) == report.class_count_expected
    report.cond_centralizer = PASS if count_ok else FAIL
    report.witnesses["class_count_condition"] = PASS if count_ok else FAIL
    # given extension and fusion, the count condition is equivalent to a trivial centralizer
    if report.cond_extension == PASS and report.cond_fusion == PASS:
        if count_ok != (centralizer_status == PASS):
            raise InvariantBreach(f"{report.pair}: class count and centralizer disagree")
    return report


def check_corollary_complete(H, emb: Embedding, autG: AutRep, mono: MonoSearch) -> CriterionReport:
    """Complete H and G: one G-class of copies of H and trivial C_G(H)."""
    report = CriterionReport((H.name, autG.base_group.name), "corollary_complete")
    G = emb.target_chain
    gens = _image_gens(emb)
    report.witnesses["monomorphisms"] = mono.count
    report.cond_extension = PASS
    C = centralizer(G, gens)
    report.cond_centralizer = PASS if C.is_trivial() else FAIL
    classes = subgroup_classes(H, G, mono=mono)
    report.class_count_observed = classes.n_classes
    report.class_count_expected = Fraction(normalizer(G, gens).order(), H.order())
    report.cond_fusion = PASS if classes.n_classes == 1 else FAIL
    _check_count_identity(report)
    return report


@dataclass
class OracleResult:
    holds: bool
    monomorphisms: int
    aut_order: int
    distinct_restrictions: int


def oracle_bijection(H, emb: Embedding, autG: AutRep, mono: MonoSearch | None = None) -> OracleResult:
    """Count Hom(H,G) - {0} against Aut(G) and test that restriction to H is injective."""
    if mono is None:
        mono = search_monomorphisms(H, emb.target_chain)
    if autG.aut_order > ORACLE_LIMIT:
        raise GuardExceeded(f"|Aut(G)| = {autG.aut_order} exceeds the oracle limit {ORACLE_LIMIT}")
    gens = _image_gens(emb)
    restrictions = {tuple(autG.apply(a, h) for h in gens) for a in autG.realization.iter_elements()}
    holds = mono.count == autG.aut_order and len(restrictions) == autG.aut_order
    return OracleResult(holds, mono.count, autG.aut_order, len(restrictions))


# -- the driver ----------------------------------------------------------------

_ALT = re.compile(r"A(\d+)$")


def resolve(atlas: Atlas, name: str) -> GroupRecord:
    """Atlas lookup; alternating groups A<n> outside the atlas are built on demand."""
    if name in atlas:
        return atlas[name]
    m = _ALT.match(name)
    if m and int(m.group(1)) >= 5:
        n = int(m.group(1))
        order = math.factorial(n) // 2
        # (1 2 3) with an n-cycle (n odd) or an (n-1)-cycle on 2..n (n even) generate A_n
        cycle = list(range(1, n + 1)) if n % 2 else list(range(2, n + 1))
        gens = (Permutation.from_cycles([(1, 2, 3)], n), Permutation.from_cycles([cycle], n))
        r = GroupRecord(name=name, degree=n, generators=gens,
                        meta_order=order, order_tag="derived",
                        meta_out_order=2 if n != 6 else 4, out_tag="asserted")
        return r
    raise AtlasError(f"unknown group {name!r}")


def _alternating_degree(G: GroupRecord) -> int | None:
    m = _ALT.match(G.name)
    if not m or G.is_stub:
        return None
    n = int(m.group(1))
    if G.degree == n and _known_order(G) == math.factorial(n) // 2:
        return n
    return None


def _known_order(G: GroupRecord) -> int:
    """Order without building a stabilizer chain when a derived value is on record."""
    return G.meta_order if G.order_tag == "derived" and G.meta_order else G.order()


def _is_abelian(r: GroupRecord) -> bool:
    gens = [tuple(g) for g in r.generators]
    return all(_mul(a, b) == _mul(b, a) for a in gens for b in gens)


def _undecided(pair, reason, route=None) -> Verdict:
    return Verdict(UNDECIDED, reason, route=route, pair=pair)


def _largest_maximal_route(H, G, options: Options) -> Verdict | None:
    n = _alternating_degree(G)
    if n is None or n < 7 or H.presentation is None:
        return None
    from .embed import coset_embedding, verify_theorem21_edge
    for label in sorted(H.subgroups):
        words = H.subgroups[label]
        try:
            emb = coset_embedding(H, words, options.max_cosets)
        except GuardExceeded:
            continue
        if emb.degree == n:
            v = verify_theorem21_edge(H, words, options.max_cosets)
            v.pair = (H.name, G.name)
            return v
    return None


def is_localization(H_name: str, G_name: str, options: Options | None = None,
                    atlas: Atlas | None = None) -> Verdict:
    options = options or Options()
    if options.route not in ROUTES + ("auto",):
        raise ValueError(f"unknown route {options.route!r}")
    atlas = atlas if atlas is not None else load_bundled()
    H = resolve(atlas, H_name)
    G = resolve(atlas, G_name)
    pair = (H.name, G.name)
    if H.is_stub or G.is_stub:
        which = ", ".join(r.name for r in (H, G) if r.is_stub)
        return _undecided(pair, f"asserted metadata only ({which}); no verification possible")
    for r in (H, G):
        if r.simplicity_status == "failed":
            raise RigidLocError(f"{r.name} is not simple")
        if _is_abelian(r):
            raise RigidLocError(f"{r.name} is abelian; only non-abelian simple groups are handled")

    note = ""
    if options.route in ("auto", "theorem21"):
        v = _largest_maximal_route(H, G, options)
        if v is not None and (v.value == LOCALIZATION or options.route == "theorem21"):
            return v
        if options.route == "theorem21":
            return _undecided(pair, "no coset representation of matching degree", "theorem21")
        if v is not None:
            note = f"; largest-maximal route: {v.reason}"

    if G.degree > options.max_degree:
        return _undecided(pair, f"guard: target degree {G.degree} exceeds {options.max_degree}{note}")
    if _known_order(G) > options.max_order:
        return _undecided(pair, f"guard: target order {_known_order(G)} exceeds {options.max_order}{note}")
    try:
        mono = search_monomorphisms(H, G.chain, max_target_degree=options.max_degree)
    except GuardExceeded as e:
        return _undecided(pair, f"guard: {e}")
    if mono.count == 0:
        raise NoEmbedding(f"{H.name} does not embed in {G.name}")
    if options.embedding is not None:
        emb = Embedding(H, G.chain, tuple(options.embedding))
        if not emb.certify():
            raise ValueError("supplied generator images do not define an embedding")
    else:
        emb = mono.canonical()

    try:
        autG = aut_realization(G)
        a_h = aut_order(H)
    except GuardExceeded as e:
        return _undecided(pair, f"guard: {e}")
    if a_h.tag != "derived":
        return _undecided(pair, f"asserted metadata: |Aut({H.name})| not derived")

    route = options.route
    if route == "auto":
        out_h = a_h.value // H.order()
        if out_h == 1 and autG.out_order == 1:
            route = "corollary_complete"
        elif is_point_stabilizer_of_primitive(G, _image_gens(emb)):
            route = "corollary_max"
        else:
            route = "theorem_main"

    oracle = None
    if route == "oracle":
        oracle = oracle_bijection(H, emb, autG, mono)
        value = LOCALIZATION if oracle.holds else NOT_LOCALIZATION
        v = Verdict(value, _oracle_reason(oracle), route="oracle", pair=pair, embedding=emb, oracle=oracle)
        return v
    if route == "corollary_complete":
        if a_h.value != H.order() or autG.out_order != 1:
            raise RigidLocError("complete-groups route needs both groups complete")
        report = check_corollary_complete(H, emb, autG, mono)
    elif route == "corollary_max":
        if not is_point_stabilizer_of_primitive(G, _image_gens(emb)):
            raise RigidLocError("maximal-subgroup route needs a verified maximal embedding")
        report = check_corollary_max(H, emb, autG, mono, a_h.value)
    else:
        report = check_criterion(H, emb, autG, mono, a_h.value)
    value = report.value()
    reason = _criterion_reason(report, mono.count, autG.aut_order)

    if options.cross_check:
        try:
            oracle = oracle_bijection(H, emb, autG, mono)
        except GuardExceeded:
            oracle = None
        if oracle is not None and value != UNDECIDED:
            if (value == LOCALIZATION) != oracle.holds:
                raise InvariantBreach(f"{pair}: criterion says {value}, oracle says {oracle.holds}")
            reason += " (criterion+oracle agree)"
    return Verdict(value, reason, report, route=report.route, pair=pair, embedding=emb, oracle=oracle)


def _criterion_reason(report: CriterionReport, monos: int, aut: int) -> str:
    failed = [name for name, c in zip(("extension", "fusion", "centralizer"), report.conditions())
              if c != PASS]
    count = f"{monos} monomorphisms vs |Aut(G)| = {aut}"
    if not failed:
        return f"all conditions hold; {count}"
    return f"conditions not satisfied: {', '.join(failed)}; {count}"


def _oracle_reason(o: OracleResult) -> str:
    return (f"{o.monomorphisms} monomorphisms vs |Aut(G)| = {o.aut_order}; "
            f"{o.distinct_restrictions} distinct restrictions")
