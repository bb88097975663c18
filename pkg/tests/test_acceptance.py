"""Acceptance criteria 1-8, each timed against its runtime limit.

Run with pytest (a summary line per criterion is printed at the end) or directly:
``python3 tests/test_acceptance.py``.
"""
import json
import random
import time
from pathlib import Path

from rcmodel.cartan import MultiplicityArray, build_cartan, folding, pairing, parse_weight, weyl_dimension
from rcmodel.combinators import RCElement, TensorElement, project, recognition_check, shifted_infinity_start
from rcmodel.graph import from_json, generate, same_graph
from rcmodel.kashiwara import e, epsilon, f, lift, phi
from rcmodel.properties import crystal_axiom_violations
from rcmodel.reference_checks import run_checks
from rcmodel.rigged import Model, highest_weight_empty, infinity_empty, is_valid, vacancy, weight
from rcmodel.virtualization import devirtualize, embed_weight, in_virtual_image, virtual_e, virtual_f, virtualize

FIXTURE = Path(__file__).parent / "fixtures" / "affine_a2_la0_depth4.json"
K4 = [[2, -1, -1, -1], [-1, 2, -1, -1], [-1, -1, 2, -1], [-1, -1, -1, 2]]

# criterion number -> (passed, detail); filled in as tests run
RESULTS: dict = {}

DIMENSION_CASES = (
    [("A1", f"{k}*La[1]") for k in range(1, 7)]
    + [("A2", w) for w in ("La[1]", "La[2]", "La[1]+La[2]", "2*La[1]")]
    + [("A3", "La[2]")]
    + [(t, w) for t in ("B2", "C2", "G2") for w in ("La[1]", "La[2]")]
    + [("D4", "La[1]")]
)
INFINITY_TYPES = [("A3", "A3"), ("D5", "D5"), ("C2", "C2"), ("G2", "G2"), ("A2~", "A2~"), ("H1(4)", K4)]


def timed(number: int, limit: float, body):
    start = time.perf_counter()
    try:
        detail = body()
        ok = True
    except AssertionError as exc:
        ok, detail = False, f"assertion failed: {exc}"
    elapsed = time.perf_counter() - start
    if ok and elapsed >= limit:
        ok, detail = False, f"{detail}; over the {limit:g} s limit"
    RESULTS[number] = (ok, f"{detail} ({elapsed:.2f} s, limit {limit:g} s)")
    assert ok, RESULTS[number][1]


# -- 1 ---------------------------------------------------------------------------


def _worked_examples():
    results = run_checks()
    failed = [r.name for r in results if not r.ok]
    assert not failed, f"failed checks: {failed}"
    return f"{len(results)} worked-example checks match exactly"


def test_criterion_1_worked_examples():
    timed(1, 1.0, _worked_examples)


# -- 2 ---------------------------------------------------------------------------


def _affine_a2_graph():
    doc = json.loads(FIXTURE.read_text())
    ref = from_json(json.dumps(doc))
    d = build_cartan(doc["type"])
    g = generate(highest_weight_empty(d, parse_weight(doc["highest_weight"])), depth=doc["depth"])
    assert same_graph(g, ref), "generated graph differs from the fixture"
    assert len(g.edges) == 9
    return f"same_graph against fixture: {len(g.nodes)} nodes, {len(g.edges)} edges"


def test_criterion_2_affine_a2_graph():
    timed(2, 1.0, _affine_a2_graph)


# -- 3 ---------------------------------------------------------------------------


def _dimensions():
    for name, lam in DIMENSION_CASES:
        d = build_cartan(name)
        w = parse_weight(lam)
        g = generate(highest_weight_empty(d, w))
        assert g.exhaustive
        assert len(g.nodes) == weyl_dimension(d, w), f"{name} {lam}: {len(g.nodes)} != {weyl_dimension(d, w)}"
    return f"{len(DIMENSION_CASES)} highest weights match the Weyl dimension formula"


def test_criterion_3_dimensions():
    timed(3, 30.0, _dimensions)


# -- 4 ---------------------------------------------------------------------------


def _axioms():
    total = 0
    for label, spec in INFINITY_TYPES:
        g = generate(infinity_empty(build_cartan(spec)), depth=5)
        bad = crystal_axiom_violations([x.rc for x in g.elements])
        assert not bad, f"{label}: {bad[:3]}"
        total += len(g.nodes)
    for name, lam in DIMENSION_CASES:
        g = generate(highest_weight_empty(build_cartan(name), parse_weight(lam)))
        bad = crystal_axiom_violations([x.rc for x in g.elements])
        assert not bad, f"{name} {lam}: {bad[:3]}"
        total += len(g.nodes)
    return f"0 violations on {total} elements"


def test_criterion_4_axioms():
    timed(4, 60.0, _axioms)


# -- 5 ---------------------------------------------------------------------------


def _virtualization_failures(x, fold) -> list:
    bad = []
    v = virtualize(x, fold)
    if not in_virtual_image(v, fold) or devirtualize(v, fold) != x:
        bad.append("image membership")
    if embed_weight(weight(x), fold) != weight(v):
        bad.append("weight square")
    g = fold.gamma
    for a in fold.source.labels:
        for b in fold.fiber(a):
            if epsilon(b, v) != g[a] * epsilon(a, x) or phi(b, v) != g[a] * phi(a, x):
                bad.append(f"eps/phi scaling at {a}")
            for i, _ in x.part(a).strings:
                if vacancy(v, b, g[a] * i) != g[a] * vacancy(x, a, i):
                    bad.append(f"vacancy at ({a}, {i})")
        for op, vop in ((f, virtual_f), (e, virtual_e)):
            want, got = op(a, x), vop(a, v, fold)
            if (want is None) != (got is None):
                bad.append(f"{op.__name__}_{a} null mismatch")
            elif want is not None:
                if virtualize(want, fold) != got:
                    bad.append(f"{op.__name__}_{a} commutation")
                if not in_virtual_image(got, fold):
                    bad.append(f"{op.__name__}_{a} leaves the image")
    return bad


def _virtualization():
    total = 0
    for key, depth in (("C2->A3", 4), ("B3->D4", 4), ("G2->D4", 4), ("F4->E6", 3)):
        fold = folding(key)
        g = generate(infinity_empty(fold.source), depth=depth)
        for x in g.elements:
            bad = _virtualization_failures(x.rc, fold)
            assert not bad, f"{key}: {bad[:3]}"
        total += len(g.nodes)
    return f"0 violations on {total} elements over 4 foldings"


def test_criterion_5_virtualization():
    timed(5, 120.0, _virtualization)


# -- 6 ---------------------------------------------------------------------------


def _projection():
    for name, lam, depth in (("A2", "La[1]+La[2]", None), ("C2", "La[1]", None), ("A2~", "La[0]", 4)):
        d = build_cartan(name)
        w = parse_weight(lam)
        comp = generate(shifted_infinity_start(d, w), depth=depth)
        target = generate(highest_weight_empty(d, w), depth=depth)
        assert same_graph(comp, target), f"{name} {lam}: component is not isomorphic"
        for x in comp.elements:
            rc = project(x)
            assert rc is not None
            free = rc.with_model(MultiplicityArray(), Model.INFINITY)
            for a in d.labels:
                lowered = TensorElement(x.factors[:2] + (RCElement(f(a, free)),), d)
                invalid = project(lowered) is None
                assert invalid == (f(a, rc) is None), f"{name} {lam}: validity and f-null disagree"
    return "3 components isomorphic; invalidity coincides with f-null"


def test_criterion_6_projection():
    timed(6, 10.0, _projection)


# -- 7 ---------------------------------------------------------------------------


def _random_elements(d, lam, n, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        cur = highest_weight_empty(d, lam)
        for _ in range(rng.randint(0, 8)):
            nxt = f(rng.choice(d.labels), cur)
            if nxt is None:
                break
            cur = nxt
        out.append(cur)
    return out


def _lift():
    for name, lam, mu in (("A2", "La[1]", "La[2]"), ("D4", "La[1]", "La[1]")):
        d = build_cartan(name)
        lam, mu = parse_weight(lam), parse_weight(mu)
        for rc in _random_elements(d, lam, 100, seed=7):
            up = lift(rc, mu)
            assert up.parts == rc.parts and is_valid(up)
            for a in d.labels:
                assert epsilon(a, up) == epsilon(a, rc)
                assert phi(a, up) == phi(a, rc) + pairing(d, a, mu)
                down = e(a, rc)
                assert e(a, up) == (None if down is None else lift(down, mu))
                low = f(a, rc)
                if low is not None:
                    assert f(a, up) == lift(low, mu)
    return "0 violations on 200 random elements"


def test_criterion_7_lift():
    timed(7, 10.0, _lift)


# -- 8 ---------------------------------------------------------------------------


def _recognition():
    for label, spec in INFINITY_TYPES:
        rep = recognition_check(generate(infinity_empty(build_cartan(spec)), depth=5))
        assert rep.passed, f"{label}: {rep.summary()}"
    return f"conditions hold on {len(INFINITY_TYPES)} depth-5 truncations"


def test_criterion_8_recognition():
    timed(8, 30.0, _recognition)


def summary_lines() -> list:
    return [
        f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
        for n, (ok, detail) in sorted(RESULTS.items())
    ]


if __name__ == "__main__":
    import sys

    cases = [
        (1, 1.0, _worked_examples), (2, 1.0, _affine_a2_graph), (3, 30.0, _dimensions), (4, 60.0, _axioms),
        (5, 120.0, _virtualization), (6, 10.0, _projection), (7, 10.0, _lift), (8, 30.0, _recognition),
    ]
    for number, limit, body in cases:
        try:
            timed(number, limit, body)
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
