"""Ledger of localization edges between simple groups and its rigid components.

Edge file, one record per line (``#`` starts a comment)::

    alias <name> <canonical name>
    node <name>
    verdict <id> <H> <G> <value> <route>
    edge <H> <G> <verified|asserted> <citation-or-verdict-id>
    chain A <start> <verified|asserted> <citation>

A ``chain`` record stands for every inclusion A_n -> A_(n+1) with
n >= start; it links consecutive alternating nodes present in the graph and
each link weighs the number of steps it covers. Connectivity ignores edge
direction, paths keep it for rendering.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ParseError, RigidLocError

VERIFIED, ASSERTED = "verified", "asserted"
STATUSES = (VERIFIED, ASSERTED)
FILTERS = ("all", "verified_only", "main")
FURTHER_PREFIX = "other/"

_NAME = re.compile(r"^[A-Za-z0-9_'.+-]+$")
_ALT = re.compile(r"^A(\d+)$")

# finite samples of the families joined to the alternating groups; alternating
# nodes are taken from the graph itself
COMPONENT_SAMPLES = {
    "linear_L2": ("L2_4", "L2_5", "L2_7", "L2_8", "L2_9", "L2_11", "L2_13", "L2_16", "L2_17",
                  "L2_19", "L2_23", "L2_25", "L2_27", "L2_29", "L2_31", "L2_32"),
    "unitary_U3": ("U3_3", "U3_4", "U3_5", "U3_7", "U3_8", "U3_9", "U3_11", "U3_13"),
    "g2_odd": ("G2_3", "G2_7", "G2_13"),
    "sporadic": ("M11", "M12", "M22", "M23", "M24", "J1", "J2", "J3", "J4", "HS", "McL", "Suz",
                 "He", "Ru", "Co1", "Co2", "Co3", "Fi22", "Fi23", "Fi24p", "HN", "Ly", "Th",
                 "ON", "B"),
    "other_lie": ("L3_3", "L3_5", "L3_11", "L4_3", "U4_2", "U4_3", "U5_2", "U6_2", "S4_4",
                  "S6_2", "S8_2", "D4_2", "2D4_2", "2D5_2", "3D4_2", "D4_3", "G2_2p", "G2_4",
                  "G2_5", "G2_11", "E6_4", "F4_2", "T"),
}
MONSTER = "M"


class GraphError(RigidLocError, ValueError):
    pass


class UnknownNode(RigidLocError, KeyError):
    pass


@dataclass(frozen=True)
class LocEdge:
    source: str  # the subgroup H
    target: str  # the ambient group G
    status: str
    ref: str  # citation tag, or verdict id for verified edges


@dataclass(frozen=True)
class ChainRecord:
    family: str
    start: int
    status: str
    ref: str


@dataclass(frozen=True)
class VerdictRecord:
    ident: str
    source: str
    target: str
    value: str
    route: str


@dataclass(frozen=True)
class Step:
    start: str
    end: str
    forward: bool  # True when the edge points from start into end
    edge: LocEdge
    weight: int


class RigidGraph:
    def __init__(self):
        self._aliases: dict[str, str] = {}
        self._declared: list[str] = []
        self._verdicts: dict[str, VerdictRecord] = {}
        self._edges: list[LocEdge] = []
        self._chains: list[ChainRecord] = []

    # -- construction ---------------------------------------------------------

    def copy(self) -> RigidGraph:
        g = RigidGraph()
        g._aliases = dict(self._aliases)
        g._declared = list(self._declared)
        g._verdicts = dict(self._verdicts)
        g._edges = list(self._edges)
        g._chains = list(self._chains)
        return g

    def _add_alias(self, name: str, canonical: str):
        if self.canonical(canonical) == name:
            raise GraphError(f"alias cycle through {name}")
        self._aliases[name] = canonical

    def _add_node(self, name: str):
        if name not in self._declared:
            self._declared.append(name)

    def _add_verdict(self, v: VerdictRecord):
        if v.ident in self._verdicts:
            raise GraphError(f"duplicate verdict id {v.ident}")
        self._verdicts[v.ident] = v

    def _add_edge(self, e: LocEdge):
        if e.status not in STATUSES:
            raise GraphError(f"edge status must be verified or asserted, got {e.status!r}")
        if not e.ref:
            raise GraphError(f"edge {e.source} -> {e.target} carries no citation")
        if e.status == VERIFIED:
            v = self._verdicts.get(e.ref)
            if v is None:
                raise GraphError(f"verified edge {e.source} -> {e.target}: no stored verdict {e.ref}")
            if v.value != "Localization":
                raise GraphError(f"verified edge {e.source} -> {e.target}: verdict {e.ref} is {v.value}")
            if (self.canonical(v.source), self.canonical(v.target)) != \
                    (self.canonical(e.source), self.canonical(e.target)):
                raise GraphError(f"verdict {e.ref} concerns {v.source} -> {v.target}")
        self._edges.append(e)

    def _add_chain(self, c: ChainRecord):
        if c.family != "A":
            raise GraphError(f"unknown chain family {c.family}")
        if c.status == VERIFIED or not c.ref:
            raise GraphError("a chain must be asserted with a citation")
        self._chains.append(c)

    def add_edge(self, e: LocEdge) -> RigidGraph:
        g = self.copy()
        g._add_edge(e)
        return g

    def add_verdict(self, v: VerdictRecord) -> RigidGraph:
        g = self.copy()
        g._add_verdict(v)
        return g

    def add_node(self, name: str) -> RigidGraph:
        g = self.copy()
        g._add_node(name)
        return g

    # -- queries --------------------------------------------------------------

    def canonical(self, name: str) -> str:
        seen = set()
        while name in self._aliases and name not in seen:
            seen.add(name)
            name = self._aliases[name]
        return name

    @property
    def edges(self) -> tuple:
        return tuple(self._edges)

    @property
    def verdicts(self) -> dict:
        return dict(self._verdicts)

    @property
    def nodes(self) -> frozenset:
        out = {self.canonical(n) for n in self._declared}
        for e in self._edges:
            out.add(self.canonical(e.source))
            out.add(self.canonical(e.target))
        return frozenset(out)

    def __contains__(self, name: str) -> bool:
        return self.canonical(name) in self.nodes

    def _chain_links(self) -> list[tuple[LocEdge, int]]:
        alt = sorted(int(m.group(1)) for m in map(_ALT.match, self.nodes) if m)
        links = []
        for c in self._chains:
            present = [n for n in alt if n >= c.start]
            for a, b in zip(present, present[1:]):
                links.append((LocEdge(f"A{a}", f"A{b}", c.status, c.ref), b - a))
        return links

    def weighted_edges(self, filter: str = "all") -> list[tuple[LocEdge, int]]:
        if filter not in FILTERS:
            raise ValueError(f"unknown edge filter {filter!r}")
        out = [(e, 1) for e in self._edges] + self._chain_links()
        if filter == "verified_only":
            out = [(e, w) for e, w in out if e.status == VERIFIED]
        elif filter == "main":
            out = [(e, w) for e, w in out if not e.ref.startswith(FURTHER_PREFIX)]
        return out


# -- components and paths -----------------------------------------------------

def components(g: RigidGraph, filter: str = "all") -> list[list[str]]:
    """Partition of the nodes under the chosen edges, each block sorted, blocks by least name."""
    parent = {n: n for n in g.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, _ in g.weighted_edges(filter):
        a, b = find(g.canonical(e.source)), find(g.canonical(e.target))
        if a != b:
            # keep the lexicographically least name as root
            if b < a:
                a, b = b, a
            parent[b] = a
    blocks: dict[str, list[str]] = {}
    for n in g.nodes:
        blocks.setdefault(find(n), []).append(n)
    return [sorted(blocks[r]) for r in sorted(blocks)]


def component_of(g: RigidGraph, name: str, filter: str = "all") -> list[str]:
    name = g.canonical(name)
    if name not in g.nodes:
        raise UnknownNode(name)
    return next(c for c in components(g, filter) if name in c)


def zigzag_path(g: RigidGraph, x: str, y: str, filter: str = "main") -> list[Step] | None:
    """Lightest undirected path from x to y; chain links weigh their step count."""
    x, y = g.canonical(x), g.canonical(y)
    for n in (x, y):
        if n not in g.nodes:
            raise UnknownNode(n)
    adj: dict[str, list] = {}
    for e, w in g.weighted_edges(filter):
        s, t = g.canonical(e.source), g.canonical(e.target)
        adj.setdefault(s, []).append((t, w, e, True))
        adj.setdefault(t, []).append((s, w, e, False))
    for lst in adj.values():
        lst.sort(key=lambda item: (item[0], item[1], item[3], item[2].ref))
    dist = {x: 0}
    back: dict[str, Step] = {}
    heap = [(0, x)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == y:
            break
        for v, w, e, fwd in adj.get(u, ()):
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                back[v] = Step(u, v, fwd, e, w)
                heapq.heappush(heap, (nd, v))
    if y not in done:
        return None
    steps = []
    cur = y
    while cur != x:
        s = back[cur]
        steps.append(s)
        cur = s.start
    return steps[::-1]


def render_path(steps: list[Step], start: str | None = None) -> str:
    if not steps:
        return start or ""
    parts = [steps[0].start]
    for s in steps:
        parts.append("↪" if s.forward else "↩")
        parts.append(s.end)
    return " ".join(parts)


def component_samples(g: RigidGraph) -> list[str]:
    """Every sampled group expected in the alternating component, canonicalized."""
    names = sorted(n for n in g.nodes if _ALT.match(n) and int(n[1:]) >= 5)
    for group in COMPONENT_SAMPLES.values():
        names.extend(g.canonical(n) for n in group)
    return sorted(set(names))


# -- text format --------------------------------------------------------------

def _check_name(tok: str, lineno: int) -> str:
    if not _NAME.match(tok):
        raise ParseError(f"bad group name {tok!r}", line=lineno)
    return tok


def parse_graph(text: str) -> RigidGraph:
    aliases, nodes, verdicts, edges, chains = [], [], [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        if kw == "alias" and len(tok) == 3:
            aliases.append((_check_name(tok[1], lineno), _check_name(tok[2], lineno)))
        elif kw == "node" and len(tok) == 2:
            nodes.append(_check_name(tok[1], lineno))
        elif kw == "verdict" and len(tok) == 6:
            verdicts.append((lineno, VerdictRecord(tok[1], _check_name(tok[2], lineno),
                                                   _check_name(tok[3], lineno), tok[4], tok[5])))
        elif kw == "edge" and len(tok) == 5:
            edges.append((lineno, LocEdge(_check_name(tok[1], lineno), _check_name(tok[2], lineno),
                                          tok[3], tok[4])))
        elif kw == "chain" and len(tok) == 5:
            if not tok[2].isdigit():
                raise ParseError(f"chain start must be an integer, got {tok[2]!r}", line=lineno)
            chains.append((lineno, ChainRecord(tok[1], int(tok[2]), tok[3], tok[4])))
        else:
            raise ParseError(f"unrecognized record {line!r}", line=lineno)
    g = RigidGraph()
    for a, b in aliases:
        g._add_alias(a, b)
    for n in nodes:
        g._add_node(n)
    for items, add in ((verdicts, g._add_verdict), (edges, g._add_edge), (chains, g._add_chain)):
        for lineno, rec in items:
            try:
                add(rec)
            except GraphError as exc:
                raise ParseError(str(exc), line=lineno) from None
    return g


def dump_graph(g: RigidGraph) -> str:
    lines = [f"alias {a} {b}" for a, b in g._aliases.items()]
    lines += [f"node {n}" for n in g._declared]
    lines += [f"verdict {v.ident} {v.source} {v.target} {v.value} {v.route}"
              for v in g._verdicts.values()]
    lines += [f"edge {e.source} {e.target} {e.status} {e.ref}" for e in g._edges]
    lines += [f"chain {c.family} {c.start} {c.status} {c.ref}" for c in g._chains]
    return "\n".join(lines) + "\n" if lines else ""


def to_dot(g: RigidGraph) -> str:
    out = ["digraph rigid {"]
    for n in sorted(g.nodes):
        out.append(f'  "{n}";')
    for e, w in g.weighted_edges("all"):
        style = "solid" if e.status == VERIFIED else "dashed"
        label = e.ref if w == 1 else f"{e.ref} x{w}"
        out.append(f'  "{g.canonical(e.source)}" -> "{g.canonical(e.target)}" '
                   f'[style={style}, label="{label}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def export(g: RigidGraph, format: str = "structured") -> bytes:
    if format == "dot":
        return to_dot(g).encode()
    if format in ("structured", "text"):
        return dump_graph(g).encode()
    raise ValueError(f"unknown export format {format!r}")


def load_graph(path) -> RigidGraph:
    return parse_graph(Path(path).read_text())


def bundled_edges_path() -> Path:
    return Path(str(resources.files("rigidloc") / "data" / "edges.txt"))


def bundled_graph() -> RigidGraph:
    return load_graph(bundled_edges_path())


def recheck_verdicts(g: RigidGraph, atlas=None) -> list[tuple[VerdictRecord, object]]:
    """Recompute each stored verdict along its recorded route."""
    from .localization import Options, is_localization
    out = []
    for v in g._verdicts.values():
        out.append((v, is_localization(v.source, v.target, Options(route=v.route), atlas)))
    return out
