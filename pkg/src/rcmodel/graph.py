"""Depth-bounded crystal graph generation, comparison and export."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .cartan import Weight, canonicalize_weight, format_weight, label_sort_key
from .combinators import CrystalElement, RCElement, TensorElement, as_element
from .rigged import encode, horizontal_display

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """Node budget exhausted; ``partial`` holds the graph generated so far."""

    def __init__(self, budget: int, partial: "CrystalGraph"):
        super().__init__(f"node budget of {budget} exceeded after {len(partial.nodes)} nodes")
        self.budget = budget
        self.partial = partial


class TruncatedGraphError(ValueError):
    pass


@dataclass
class CrystalGraph:
    nodes: list
    edges: list
    root: int = 0
    depth: int | None = None
    exhaustive: bool = False
    elements: list | None = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.nodes)

    @property
    def labels(self) -> list:
        return sorted({a for _, a, _ in self.edges}, key=label_sort_key)


def node_encoding(x: CrystalElement):
    if isinstance(x, RCElement):
        return encode(x.rc)
    return x.to_json()


def _has_raising(x: CrystalElement) -> bool:
    return any(x.epsilon(a) > 0 for a in x.datum.labels)


def generate(start, depth: int | None = None, budget: int = DEFAULT_BUDGET, include_e: bool | None = None) -> CrystalGraph:
    """Breadth-first closure of ``start`` under the lowering operators.

    Labels are tried in ascending order.  Raising moves are added when the start
    element is not highest weight.  ``depth=None`` means run until closed.
    """
    if depth is not None and depth < 0:
        raise ValueError("depth must be nonnegative")
    start = as_element(start)
    labels = start.datum.labels
    if include_e is None:
        include_e = _has_raising(start)
    index = {start: 0}
    elements = [start]
    edges = set()
    queue = deque([(start, 0)])
    last_level = []
    outside = False

    def partial():
        return _assemble(elements, edges, depth, False)

    while queue:
        u, d = queue.popleft()
        ui = index[u]
        if depth is not None and d >= depth:
            last_level.append(u)
            continue
        for a in labels:
            v = u.f(a)
            if v is not None:
                if v not in index:
                    index[v] = len(elements)
                    elements.append(v)
                    queue.append((v, d + 1))
                    if len(elements) > budget:
                        raise BudgetExceeded(budget, partial())
                edges.add((ui, a, index[v]))
            if include_e:
                w = u.e(a)
                if w is not None:
                    if w not in index:
                        index[w] = len(elements)
                        elements.append(w)
                        queue.append((w, d + 1))
                        if len(elements) > budget:
                            raise BudgetExceeded(budget, partial())
                    edges.add((index[w], a, ui))
    # boundary: keep edges between retained nodes, and note whether anything was cut off
    for u in last_level:
        ui = index[u]
        for a in labels:
            v = u.f(a)
            if v is not None:
                if v in index:
                    edges.add((ui, a, index[v]))
                else:
                    outside = True
            if include_e:
                w = u.e(a)
                if w is not None:
                    if w in index:
                        edges.add((index[w], a, ui))
                    else:
                        outside = True
    return _assemble(elements, edges, depth, not outside)


def _assemble(elements, edges, depth, exhaustive) -> CrystalGraph:
    ordered = sorted(edges, key=lambda t: (t[0], label_sort_key(t[1]), t[2]))
    return CrystalGraph(
        nodes=[node_encoding(x) for x in elements],
        edges=[list(t) for t in ordered],
        root=0,
        depth=depth,
        exhaustive=exhaustive,
        elements=list(elements),
    )


def check_edges(graph: CrystalGraph) -> list:
    """Edges whose target does not raise back to the source."""
    bad = []
    for u, a, v in graph.edges:
        if graph.elements[v].e(a) != graph.elements[u] or graph.elements[u].f(a) != graph.elements[v]:
            bad.append((u, a, v))
    return bad


def character(graph: CrystalGraph) -> dict:
    """Weight multiplicities (fundamental-weight form in finite type)."""
    if not graph.exhaustive:
        raise TruncatedGraphError("character needs an exhaustive graph")
    out: dict = {}
    for x in graph.elements:
        w = x.wt()
        if x.datum.is_finite:
            w = canonicalize_weight(x.datum, w)
        out[w] = out.get(w, 0) + 1
    return out


def count(graph: CrystalGraph) -> int:
    return len(graph.nodes)


# ---------------------------------------------------------------------------
# canonical comparison
# ---------------------------------------------------------------------------


def canonical_order(graph: CrystalGraph) -> list:
    """Node indices in canonical BFS order from the root (out-edges then in-edges, labels ascending)."""
    out_adj: dict = {}
    in_adj: dict = {}
    for u, a, v in graph.edges:
        out_adj.setdefault(u, []).append((label_sort_key(a), v))
        in_adj.setdefault(v, []).append((label_sort_key(a), u))
    order = [graph.root]
    seen = {graph.root}
    q = deque([graph.root])
    while q:
        u = q.popleft()
        nbrs = [v for _, v in sorted(out_adj.get(u, []))] + [w for _, w in sorted(in_adj.get(u, []))]
        for v in nbrs:
            if v not in seen:
                seen.add(v)
                order.append(v)
                q.append(v)
    return order


def canonical_form(graph: CrystalGraph):
    order = canonical_order(graph)
    relabel = {old: new for new, old in enumerate(order)}
    edges = sorted(
        ((relabel[u], label_sort_key(a), relabel[v]) for u, a, v in graph.edges if u in relabel and v in relabel)
    )
    return len(graph.nodes), len(order), tuple(edges)


def same_graph(g1: CrystalGraph, g2: CrystalGraph) -> bool:
    """Rooted edge-labeled isomorphism test."""
    return canonical_form(g1) == canonical_form(g2)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def node_label(x: CrystalElement) -> str:
    if isinstance(x, RCElement):
        return horizontal_display(x.rc)
    if isinstance(x, TensorElement):
        return " (x) ".join(node_label(y) for y in x.factors)
    return repr(x)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\l") + ("\\l" if "\n" in text else "")


def to_dot(graph: CrystalGraph, name: str = "crystal") -> str:
    lines = [f"digraph {name} {{", '  node [shape=box, fontname="monospace"];']
    for k, node in enumerate(graph.nodes):
        if graph.elements is not None:
            text = node_label(graph.elements[k])
        else:
            text = json.dumps(node, sort_keys=True)
        lines.append(f'  n{k} [label="{_dot_escape(text)}"];')
    for u, a, v in graph.edges:
        lines.append(f'  n{u} -> n{v} [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(graph: CrystalGraph) -> str:
    doc = {
        "nodes": graph.nodes,
        "edges": graph.edges,
        "root": graph.root,
        "depth": graph.depth,
        "exhaustive": graph.exhaustive,
    }
    return json.dumps(doc, sort_keys=True)


def from_json(text: str) -> CrystalGraph:
    doc = json.loads(text)
    try:
        return CrystalGraph(
            nodes=doc["nodes"],
            edges=[list(e) for e in doc["edges"]],
            root=doc["root"],
            depth=doc["depth"],
            exhaustive=doc.get("exhaustive", False),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed graph document: {exc}") from None


def weight_text(w: Weight) -> str:
    return format_weight(w)
