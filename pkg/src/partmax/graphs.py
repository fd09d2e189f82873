"""Graph views of a MaxSAT formula and modularity-based partition derivation.

Three representations are built from all clauses, hard and soft:

- vig: one node per variable; each clause with n >= 2 distinct variables
  adds 1/C(n,2) to the edge weight of every variable pair it contains.
- cvig: bipartite variable/clause incidence; each (variable, clause)
  incidence carries weight 1/|clause|.
- res: one node per clause; clause pairs whose resolvent is non-trivial are
  joined with weight 1/|resolvent|.

Communities found by greedy modularity maximization over these graphs are
then mapped to soft-clause partition labels. Edge weights accumulate as
exact fractions so graph construction is independent of clause order.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb

from .cnf import TAUTOLOGY, MaxSatInstance, PartitionedInstance, resolve

VAR_NODE = "v"
CLAUSE_NODE = "c"


class ResolutionGraphTooLarge(Exception):
    """Raised when the candidate clause-pair count exceeds the configured cap."""


@dataclass
class WeightedGraph:
    """Undirected weighted graph; nodes are (kind, index) tuples."""

    adj: dict = field(default_factory=dict)

    def add_node(self, node) -> None:
        self.adj.setdefault(node, {})

    def add_edge(self, u, v, w) -> None:
        if u == v:
            raise ValueError("self-loops are not allowed")
        if w <= 0:
            raise ValueError("edge weights must be positive")
        self.adj.setdefault(u, {})
        self.adj.setdefault(v, {})
        self.adj[u][v] = self.adj[u].get(v, Fraction(0)) + w
        self.adj[v][u] = self.adj[v].get(u, Fraction(0)) + w

    def nodes(self):
        return list(self.adj)

    def edges(self):
        out = []
        for u, nbrs in self.adj.items():
            for v, w in nbrs.items():
                if u < v:
                    out.append((u, v, w))
        return out

    def total_weight(self):
        return sum(w for _, _, w in self.edges())


def _all_clauses(inst: MaxSatInstance):
    return list(inst.hard) + [s.lits for s in inst.soft]


def build_vig(inst: MaxSatInstance) -> WeightedGraph:
    g = WeightedGraph()
    for v in range(1, inst.n_vars + 1):
        g.add_node((VAR_NODE, v))
    for cl in _all_clauses(inst):
        vs = sorted({abs(l) for l in cl})
        n = len(vs)
        if n < 2:
            continue
        w = Fraction(1, comb(n, 2))
        for i in range(n):
            for j in range(i + 1, n):
                g.add_edge((VAR_NODE, vs[i]), (VAR_NODE, vs[j]), w)
    return g


def build_cvig(inst: MaxSatInstance) -> WeightedGraph:
    g = WeightedGraph()
    for v in range(1, inst.n_vars + 1):
        g.add_node((VAR_NODE, v))
    for ci, cl in enumerate(_all_clauses(inst)):
        g.add_node((CLAUSE_NODE, ci))
        if not cl:
            continue
        w = Fraction(1, len(cl))
        for v in {abs(l) for l in cl}:
            g.add_edge((VAR_NODE, v), (CLAUSE_NODE, ci), w)
    return g


def build_res(inst: MaxSatInstance, max_pairs: int | None = None) -> WeightedGraph:
    """Resolution graph. Examines only clause pairs sharing a complementary
    literal; raises ResolutionGraphTooLarge past max_pairs candidate pairs."""
    clauses = _all_clauses(inst)
    g = WeightedGraph()
    for ci in range(len(clauses)):
        g.add_node((CLAUSE_NODE, ci))
    pos: dict = {}
    neg: dict = {}
    for ci, cl in enumerate(clauses):
        for lit in cl:
            (pos if lit > 0 else neg).setdefault(abs(lit), []).append(ci)
    n_pairs = 0
    seen_pairs = set()
    for v in sorted(set(pos) & set(neg)):
        n_pairs += len(pos[v]) * len(neg[v])
        if max_pairs is not None and n_pairs > max_pairs:
            raise ResolutionGraphTooLarge(
                f"more than {max_pairs} clause pairs share complementary literals"
            )
        for ci in pos[v]:
            for cj in neg[v]:
                key = (ci, cj) if ci < cj else (cj, ci)
                if key in seen_pairs:
                    continue
                seen_pairs.add(key)
                r = resolve(clauses[ci], clauses[cj], v)
                if r is TAUTOLOGY:
                    continue
                # contradictory units resolve to the empty clause; clamp the
                # denominator so the maximally-related pair keeps an edge
                w = Fraction(1, max(len(r), 1))
                g.add_edge((CLAUSE_NODE, key[0]), (CLAUSE_NODE, key[1]), w)
    return g


def dump_edges(g: WeightedGraph) -> str:
    """Debug edge list: one "node node weight" line per edge."""
    lines = []
    for u, v, w in sorted(g.edges()):
        lines.append(f"{u[0]}{u[1]} {v[0]}{v[1]} {float(w):g}")
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class CommunityAssignment:
    """node -> contiguous 0-based community id, plus the modularity reached."""

    communities: dict
    q: float
    phase_q: tuple = ()

    @property
    def n_communities(self) -> int:
        return len(set(self.communities.values())) if self.communities else 0


def modularity(g: WeightedGraph, communities: dict) -> float:
    m = float(g.total_weight())
    if m == 0:
        return 0.0
    internal: dict = {}
    degree: dict = {}
    for u, v, w in g.edges():
        if communities[u] == communities[v]:
            internal[communities[u]] = internal.get(communities[u], 0.0) + float(w)
    for u, nbrs in g.adj.items():
        degree[communities[u]] = degree.get(communities[u], 0.0) + float(sum(nbrs.values()))
    q = 0.0
    for c in set(communities.values()):
        q += internal.get(c, 0.0) / m - (degree.get(c, 0.0) / (2 * m)) ** 2
    return q


def _one_level(adj, degs, m2, order):
    """One pass of greedy local moves; returns (community array, moved?)."""
    n = len(adj)
    com = list(range(n))
    com_tot = degs[:]
    moved_any = False
    while True:
        n_moves = 0
        for i in order:
            ci = com[i]
            ncw: dict = {}
            for j, w in adj[i].items():
                cj = com[j]
                ncw[cj] = ncw.get(cj, 0.0) + w
            com_tot[ci] -= degs[i]
            best_c = ci
            best_gain = ncw.get(ci, 0.0) - com_tot[ci] * degs[i] / m2
            for c in sorted(ncw):
                gain = ncw[c] - com_tot[c] * degs[i] / m2
                if gain > best_gain + 1e-12:
                    best_c, best_gain = c, gain
            com_tot[best_c] += degs[i]
            com[i] = best_c
            if best_c != ci:
                n_moves += 1
                moved_any = True
        if n_moves == 0:
            return com, moved_any


def detect_communities(g: WeightedGraph, seed: int = 0) -> CommunityAssignment:
    """Greedy modularity maximization (local moves + aggregation phases).

    Deterministic for a fixed seed: nodes are visited in ascending order
    shuffled by the seed. A graph with zero total edge weight puts every
    node in its own community with Q = 0.
    """
    nodes = sorted(g.adj)
    if not nodes:
        raise ValueError("cannot detect communities of an empty graph")
    index = {node: i for i, node in enumerate(nodes)}
    adj = [dict() for _ in nodes]
    for u, v, w in g.edges():
        adj[index[u]][index[v]] = float(w)
        adj[index[v]][index[u]] = float(w)
    m2 = 2.0 * float(g.total_weight())
    if m2 == 0:
        communities = {node: i for i, node in enumerate(nodes)}
        return CommunityAssignment(communities, 0.0, (0.0,))
    rng = random.Random(seed)
    loops = [0.0] * len(nodes)
    assign = list(range(len(nodes)))  # original node -> current supernode
    phase_q = []
    while True:
        n = len(adj)
        degs = [2 * loops[i] + sum(adj[i].values()) for i in range(n)]
        order = list(range(n))
        rng.shuffle(order)
        com, moved = _one_level(adj, degs, m2, order)
        labels = sorted(set(com))
        relabel = {c: k for k, c in enumerate(labels)}
        com = [relabel[c] for c in com]
        assign = [com[assign[i]] for i in range(len(assign))]
        communities = {node: assign[i] for i, node in enumerate(nodes)}
        phase_q.append(modularity(g, communities))
        if not moved or len(labels) == n:
            break
        # aggregate communities into supernodes
        new_loops = [0.0] * len(labels)
        new_adj = [dict() for _ in labels]
        for i in range(n):
            ci = com[i]
            new_loops[ci] += loops[i]
            for j, w in adj[i].items():
                cj = com[j]
                if ci == cj:
                    if i < j:
                        new_loops[ci] += w
                else:
                    new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
        adj, loops = new_adj, new_loops
    # contiguous ids by first appearance over the sorted node order
    remap: dict = {}
    communities = {}
    for i, node in enumerate(nodes):
        c = assign[i]
        if c not in remap:
            remap[c] = len(remap)
        communities[node] = remap[c]
    return CommunityAssignment(communities, phase_q[-1], tuple(phase_q))


def _renumber(inst: MaxSatInstance, raw_labels, hard_raw=None):
    present = sorted(set(raw_labels))
    relabel = {c: k + 1 for k, c in enumerate(present)}
    soft = [replace(s, part=relabel[raw_labels[i]]) for i, s in enumerate(inst.soft)]
    hard_labels = None
    if hard_raw is not None:
        hard_labels = [relabel.get(c, 1) for c in hard_raw]
    base = MaxSatInstance(inst.n_vars, list(inst.hard), soft, inst.top)
    return PartitionedInstance(base=base, n_part=len(present), hard_labels=hard_labels)


def derive_partitions(
    inst: MaxSatInstance, ca: CommunityAssignment, repr_kind: str
) -> PartitionedInstance:
    """Map communities to soft-clause partitions.

    vig: a soft clause goes to the community holding the most of its
    variables (ties to the lowest community id). cvig/res: a soft clause
    goes to its own clause node's community. Empty partitions are dropped
    and labels renumbered 1..n_part. Hard clauses receive advisory labels
    the same way.
    """
    if repr_kind not in ("vig", "cvig", "res"):
        raise ValueError(f"unknown representation {repr_kind!r}")
    n_hard = len(inst.hard)
    if repr_kind == "vig":

        def community_of(lits):
            counts: dict = {}
            for v in {abs(l) for l in lits}:
                c = ca.communities[(VAR_NODE, v)]
                counts[c] = counts.get(c, 0) + 1
            if not counts:
                return -1  # empty clause touches no community
            best = max(counts.values())
            return min(c for c, k in counts.items() if k == best)

        raw = [community_of(s.lits) for s in inst.soft]
        hard_raw = [community_of(cl) if cl else 0 for cl in inst.hard]
    else:
        raw = [ca.communities[(CLAUSE_NODE, n_hard + i)] for i in range(len(inst.soft))]
        hard_raw = [ca.communities[(CLAUSE_NODE, i)] for i in range(n_hard)]
    return _renumber(inst, raw, hard_raw)


def partition_by_graph(
    inst: MaxSatInstance,
    repr_kind: str,
    seed: int = 0,
    max_pairs: int | None = None,
) -> PartitionedInstance:
    """Build the requested graph, find communities, derive partitions.

    Degenerate cases (no soft clauses, an oversized resolution graph) fall
    back to a single partition with a warning.
    """
    if not inst.soft:
        return PartitionedInstance.single_block(inst)
    try:
        if repr_kind == "vig":
            g = build_vig(inst)
        elif repr_kind == "cvig":
            g = build_cvig(inst)
        elif repr_kind == "res":
            g = build_res(inst, max_pairs=max_pairs)
        else:
            raise ValueError(f"unknown representation {repr_kind!r}")
    except ResolutionGraphTooLarge as exc:
        warnings.warn(f"{exc}; falling back to a single partition", stacklevel=2)
        return PartitionedInstance.single_block(inst)
    ca = detect_communities(g, seed=seed)
    return derive_partitions(inst, ca, repr_kind)


def random_partition(inst: MaxSatInstance, k: int, seed: int = 0) -> PartitionedInstance:
    """Assign soft clauses to k buckets uniformly at random (empty buckets
    dropped, labels renumbered); deterministic per seed."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not inst.soft:
        return PartitionedInstance.single_block(inst)
    rng = random.Random(seed)
    raw = [rng.randrange(k) for _ in inst.soft]
    return _renumber(inst, raw)
