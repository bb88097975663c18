"""Built-in worked examples with known answers, run by ``rc verify-paper``."""
from __future__ import annotations

from dataclasses import dataclass, field
from .cartan import (
    MultiplicityArray,
    Weight,
    build_cartan,
    canonicalize_weight,
    folding_for,
    pairing_vector,
    parse_weight,
)
from .kashiwara import e, epsilon_vector, f, f_string, phi_vector
from .rigged import (
    Model,
    RiggedConfiguration,
    highest_weight_empty,
    horizontal_display,
    infinity_empty,
    is_highest_weight,
    is_valid,
    vacancy,
    weight,
)
from .virtualization import embed_weight, virtualize

COMPLETE_GRAPH_4 = [[2, -1, -1, -1], [-1, 2, -1, -1], [-1, -1, 2, -1], [-1, -1, -1, 2]]


@dataclass
class CheckResult:
    name: str
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


class _Collector:
    def __init__(self):
        self.mismatches = []

    def eq(self, what, expected, actual):
        if expected != actual:
            self.mismatches.append((what, expected, actual))


def _parts(rc) -> dict:
    return {a: list(p.strings) for a, p in zip(rc.datum.labels, rc.parts) if p}


def d5_highest_weight_element():
    D5 = build_cartan("D5")
    L = MultiplicityArray({(1, 2): 1, (2, 1): 1, (3, 1): 1})
    return RiggedConfiguration.from_parts(
        D5,
        {
            1: [(2, -1), (2, -1)],
            2: [(2, 1), (2, 1), (1, 1)],
            3: [(2, 0), (2, -2), (1, 0), (1, 0)],
            4: [(2, 0), (1, 0)],
            5: [(2, 0), (1, 0)],
        },
        L,
        Model.HIGHEST_WEIGHT,
    )


def a5_infinity_element():
    return RiggedConfiguration.from_parts(
        build_cartan("A5"),
        {1: [(1, -1)], 2: [(2, -1)], 3: [(1, 1)], 4: [(1, -1)], 5: [(2, -1)]},
    )


def _check_d5_vacancies(c: _Collector):
    rc = d5_highest_weight_element()
    expected = {(1, 2): -1, (2, 2): 1, (2, 1): 1, (3, 2): 0, (3, 1): 0, (4, 2): 0, (4, 1): 0, (5, 2): 0, (5, 1): 0}
    for (a, i), p in expected.items():
        c.eq(f"p_{i}^({a})", p, vacancy(rc, a, i))


def _check_d5_weight(c: _Collector):
    rc = d5_highest_weight_element()
    D5 = rc.datum
    c.eq("valid", True, is_valid(rc))
    c.eq("highest weight", False, is_highest_weight(rc))
    c.eq("weight", Weight({1: 2, 2: 1, 3: 1}, {1: -4, 2: -5, 3: -6, 4: -3, 5: -3}), weight(rc))
    c.eq("canonical weight", parse_weight("-La[1]+La[2]"), canonicalize_weight(D5, weight(rc)))


def _check_d5_e3(c: _Collector):
    rc = d5_highest_weight_element()
    out = e(3, rc)
    c.eq("e_3 parts", {
        1: [(2, -1), (2, -1)],
        2: [(2, 0), (2, 0), (1, 1)],
        # the shortened string keeps rigging -2 + 1; the other three keep their colabels
        3: [(2, 2), (1, 0), (1, 0), (1, -1)],
        4: [(2, -1), (1, 0)],
        5: [(2, -1), (1, 0)],
    }, _parts(out) if out else None)
    if out:
        c.eq("e_3 weight", parse_weight("-La[1]+2*La[3]-La[4]-La[5]"), canonicalize_weight(rc.datum, weight(out)))


def _check_d5_f2(c: _Collector):
    rc = d5_highest_weight_element()
    out = f(2, rc)
    c.eq("f_2 parts", {
        1: [(2, 0), (2, 0)],
        2: [(2, -1), (2, -1), (1, -1), (1, -1)],
        3: [(2, 1), (2, -1), (1, 1), (1, 1)],
        4: [(2, 0), (1, 0)],
        5: [(2, 0), (1, 0)],
    }, _parts(out) if out else None)
    if out:
        c.eq("f_2 weight", parse_weight("-La[2]+La[3]"), canonicalize_weight(rc.datum, weight(out)))


def _check_a5(c: _Collector):
    rc = a5_infinity_element()
    c.eq("weight", Weight((), {1: -1, 2: -2, 3: -1, 4: -1, 5: -2}), weight(rc))
    c.eq("vacancies", [-1, -2, 0, 0, -3], [vacancy(rc, a, p.strings[0][0]) for a, p in zip(rc.datum.labels, rc.parts)])
    up = e(2, rc)
    c.eq("e_2 part 2", [(1, 0)], list(up.part(2).strings) if up else None)
    down = f(2, rc)
    c.eq("f_2 part 2", [(3, -2)], list(down.part(2).strings) if down else None)
    if down:
        c.eq("f_2 vacancy", -4, vacancy(down, 2, 3))


def _check_complete_graph_body(c: _Collector):
    H = build_cartan(COMPLETE_GRAPH_4, labels=(1, 2, 3, 4))
    rc = f_string(infinity_empty(H), [1, 2, 4, 4, 4, 3, 1, 2, 2, 4])
    c.eq("parts", {1: [(1, 2), (1, 1)], 2: [(2, -1), (1, 1)], 3: [(1, 2)], 4: [(3, -1), (1, -1)]}, _parts(rc))
    c.eq("vacancies", [1, 1, 0, 1, 4, -2, 1], [
        vacancy(rc, 1, 1), vacancy(rc, 1, 1), vacancy(rc, 2, 2), vacancy(rc, 2, 1),
        vacancy(rc, 3, 1), vacancy(rc, 4, 3), vacancy(rc, 4, 1),
    ])


def _check_d5_transcript(c: _Collector):
    rc = f_string(infinity_empty(build_cartan("D5")), [4, 5, 2, 1, 4, 4, 3, 2, 4, 5, 5, 1, 3])
    c.eq("display", "-2[ ][ ]-1   -2[ ]-1   2[ ][ ]-1   -6[ ][ ][ ][ ]-2   -4[ ][ ][ ]-1\n             -2[ ]-1",
         horizontal_display(rc))
    c.eq("epsilon", (1, 1, 1, 2, 1), epsilon_vector(rc))
    c.eq("phi", (-1, 1, 6, -4, -3), phi_vector(rc))


def _check_e7_transcript(c: _Collector):
    rc = f_string(infinity_empty(build_cartan("E7")), [1, 3, 4, 2, 5, 6, 7, 4])
    c.eq("display", "-1[ ]0   0[ ]0   1[ ]1   -1[ ]-1   1[ ]1   0[ ]0   -1[ ]-1\n                         -1[ ]-1",
         horizontal_display(rc))
    c.eq("epsilon", (0, 0, 0, 1, 0, 0, 1), epsilon_vector(rc))
    c.eq("phi", (-1, 0, 1, 0, 1, 0, 0), phi_vector(rc))


def _check_complete_graph_transcript(c: _Collector):
    H = build_cartan(COMPLETE_GRAPH_4)
    rc = f_string(infinity_empty(H), [0, 1, 2, 3, 2, 1, 2, 0, 3, 3, 3, 1, 2])
    c.eq("display", "3[ ]4   0[ ]0   1[ ][ ][ ]2   1[ ][ ][ ]-1\n3[ ]2   0[ ]0   3[ ]-1        3[ ]1\n        0[ ]0",
         horizontal_display(rc))
    c.eq("epsilon", (0, 0, 1, 1), epsilon_vector(rc))
    c.eq("phi", (7, 4, 2, 2), phi_vector(rc))
    c.eq("weight", Weight((), {0: -2, 1: -3, 2: -4, 3: -4}), weight(rc))
    # the transcript prints the pairing vector of this weight with the opposite sign
    c.eq("weight pairings", tuple(-v for v in (-7, -4, -1, -1)), pairing_vector(H, weight(rc)))


def _check_affine_a2_strings(c: _Collector):
    start = highest_weight_empty(build_cartan("A2~"), parse_weight("La[0]"))
    cases = {
        (0,): "-1[ ]-1   (/)   (/)",
        (0, 1): "0[ ]0   -1[ ]-1   (/)",
        (0, 1, 0): None,
        (0, 1, 1): None,
        (0, 1, 2): "1[ ]1   0[ ]0   0[ ]-1",
    }
    for word, shown in cases.items():
        rc = f_string(start, list(word))
        c.eq(f"f_string {list(word)}", shown, None if rc is None else horizontal_display(rc))


# node rows (vacancy, length, rigging) per part, and labeled edges between them
AFFINE_A2_NODES = {
    "empty": ((), (), ()),
    "a": (((-1, 1, -1),), (), ()),
    "b": (((0, 1, 0),), ((-1, 1, -1),), ()),
    "c": (((0, 1, 0),), (), ((-1, 1, -1),)),
    "d": (((1, 1, 1),), ((0, 1, 0),), ((0, 1, -1),)),
    "e": (((1, 1, 1),), ((0, 1, -1),), ((0, 1, 0),)),
    "g": (((1, 1, 1),), ((0, 1, 0),), ((-2, 2, -2),)),
    "h": (((1, 1, 1),), ((-2, 2, -2),), ((0, 1, 0),)),
    "i": (((-1, 1, -1), (-1, 1, -1)), ((1, 1, 1),), ((1, 1, 0),)),
    "j": (((-1, 1, -1), (-1, 1, -1)), ((1, 1, 0),), ((1, 1, 1),)),
}
AFFINE_A2_EDGES = [
    ("empty", 0, "a"), ("a", 1, "b"), ("a", 2, "c"), ("b", 2, "d"), ("c", 1, "e"),
    ("d", 2, "g"), ("d", 0, "i"), ("e", 0, "j"), ("e", 1, "h"),
]


def _node_rows(rc) -> tuple:
    return tuple(
        tuple((vacancy(rc, a, i), i, x) for i, x in p.strings) for a, p in zip(rc.datum.labels, rc.parts)
    )


def _check_affine_a2_graph(c: _Collector):
    from .graph import generate

    g = generate(highest_weight_empty(build_cartan("A2~"), parse_weight("La[0]")), 4)
    rows = [_node_rows(x.rc) for x in g.elements]
    c.eq("node count", len(AFFINE_A2_NODES), len(rows))
    names = {}
    for name, want in AFFINE_A2_NODES.items():
        hits = [k for k, r in enumerate(rows) if r == want]
        c.eq(f"node {name} present once", 1, len(hits))
        if hits:
            names[hits[0]] = name
    got = sorted((names.get(u), a, names.get(v)) for u, a, v in g.edges)
    c.eq("edges", sorted(AFFINE_A2_EDGES), got)


def _check_virtualization(c: _Collector):
    C2 = build_cartan("C2")
    fold = folding_for("C2")
    rc = RiggedConfiguration.from_parts(C2, {1: [(2, 1)], 2: [(1, -1), (1, -1)]}, {(1, 1): 1, (2, 1): 1},
                                        Model.HIGHEST_WEIGHT)
    c.eq("source vacancies", (1, -1), (vacancy(rc, 1, 2), vacancy(rc, 2, 1)))
    c.eq("source weight", parse_weight("La[1]-La[2]"), canonicalize_weight(C2, weight(rc)))
    v = virtualize(rc, fold)
    c.eq("virtual parts", {1: [(2, 1)], 2: [(2, -2), (2, -2)], 3: [(2, 1)]}, _parts(v))
    c.eq("virtual multiplicities", MultiplicityArray({(1, 1): 1, (3, 1): 1, (2, 2): 1}), v.L)
    want = parse_weight("La[1]+La[3]-2*La[2]")
    c.eq("virtual weight", want, canonicalize_weight(fold.target, weight(v)))
    c.eq("embedded weight", want, embed_weight(parse_weight("La[1]-La[2]"), fold))


CHECKS: list = [
    ("D5 highest-weight element: vacancy numbers", _check_d5_vacancies),
    ("D5 highest-weight element: validity and weight", _check_d5_weight),
    ("D5 highest-weight element: e_3", _check_d5_e3),
    ("D5 highest-weight element: f_2", _check_d5_f2),
    ("A5 infinity element: weight, e_2, f_2", _check_a5),
    ("complete graph K4 (labels 1..4): lowering word", _check_complete_graph_body),
    ("D5 infinity transcript: display, epsilon, phi", _check_d5_transcript),
    ("E7 infinity transcript: display, epsilon, phi", _check_e7_transcript),
    ("complete graph K4 (labels 0..3) transcript: weight, epsilon, phi", _check_complete_graph_transcript),
    ("A2~ RC(La[0]) lowering words", _check_affine_a2_strings),
    ("A2~ RC(La[0]) graph to depth 4", _check_affine_a2_graph),
    ("C2 -> A3 virtualization", _check_virtualization),
]


def run_checks(checks: list | None = None) -> list:
    results = []
    for name, fn in checks or CHECKS:
        col = _Collector()
        try:
            fn(col)
        except Exception as exc:  # a crash is reported as a failure of that case
            col.mismatches.append(("exception", "no exception", f"{type(exc).__name__}: {exc}"))
        results.append(CheckResult(name, col.mismatches))
    return results


def format_results(results: list) -> str:
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.ok else 'FAIL'}  {r.name}")
        for what, want, got in r.mismatches:
            lines.append(f"    {what}:")
            lines.append(f"      - expected {want!r}")
            lines.append(f"      + actual   {got!r}")
    passed = sum(r.ok for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
