import random
import zlib

import pytest

from rcmodel.cartan import MultiplicityArray, Weight, build_cartan, canonicalize_weight, folding, parse_weight
from rcmodel.combinators import ZElement
from rcmodel.graph import generate
from rcmodel.kashiwara import e, epsilon, f, phi
from rcmodel.rigged import Model, RiggedConfiguration, highest_weight_empty, infinity_empty, vacancy, weight
from rcmodel.virtualization import (
    VirtualizationError,
    devirtualize,
    embed_weight,
    identity_folding,
    in_virtual_image,
    lookup_folding,
    virtual_e,
    virtual_f,
    virtual_image_violation,
    virtualize,
    virtualize_elementary,
)


def parts_of(rc):
    return {a: list(p.strings) for a, p in zip(rc.datum.labels, rc.parts) if p}


def c2_element():
    C2 = build_cartan("C2")
    return RiggedConfiguration.from_parts(
        C2, {1: [(2, 1)], 2: [(1, -1), (1, -1)]}, {(1, 1): 1, (2, 1): 1}, Model.HIGHEST_WEIGHT
    )


def test_c2_example():
    fold = folding("C2->A3")
    rc = c2_element()
    assert (vacancy(rc, 1, 2), vacancy(rc, 2, 1)) == (1, -1)
    v = virtualize(rc, fold)
    assert parts_of(v) == {1: [(2, 1)], 2: [(2, -2), (2, -2)], 3: [(2, 1)]}
    assert v.L == MultiplicityArray({(1, 1): 1, (3, 1): 1, (2, 2): 1})
    assert v.mode is Model.HIGHEST_WEIGHT
    want = parse_weight("La[1]+La[3]-2*La[2]")
    assert canonicalize_weight(fold.target, weight(v)) == want
    assert embed_weight(parse_weight("La[1]-La[2]"), fold) == want
    assert devirtualize(v, fold) == rc
    # vacancies scale by gamma
    assert vacancy(v, 2, 2) == 2 * vacancy(rc, 2, 1)
    assert vacancy(v, 1, 2) == vacancy(v, 3, 2) == vacancy(rc, 1, 2)


def test_empty_and_identity():
    fold = folding("C2->A3")
    empty = infinity_empty(fold.source)
    assert virtualize(empty, fold) == infinity_empty(fold.target)
    assert devirtualize(infinity_empty(fold.target), fold) == empty
    for a in fold.source.labels:
        assert virtual_e(a, virtualize(empty, fold), fold) is None
    A1 = build_cartan("A1")
    ident = identity_folding(A1)
    x = f(1, f(1, infinity_empty(A1)))
    assert virtualize(x, ident) == x
    assert embed_weight(Weight(), fold) == Weight()


def test_image_rejections():
    fold = folding("C2->A3")
    v = virtualize(c2_element(), fold)
    fiber_mismatch = RiggedConfiguration(
        v.datum, (v.parts[0].__class__(((2, 3),)),) + v.parts[1:], v.L, v.mode
    )
    assert not in_virtual_image(fiber_mismatch, fold)
    assert "condition (1)" in virtual_image_violation(fiber_mismatch, fold)
    odd_rigging = RiggedConfiguration.from_parts(
        fold.target, {1: [(2, 1)], 2: [(2, -1), (2, -2)], 3: [(2, 1)]}, v.L, v.mode
    )
    assert "condition (2)" in virtual_image_violation(odd_rigging, fold)
    odd_length = RiggedConfiguration.from_parts(fold.target, {2: [(1, 0)]})
    assert "condition (3)" in virtual_image_violation(odd_length, fold)
    with pytest.raises(VirtualizationError):
        devirtualize(odd_length, fold)
    with pytest.raises(VirtualizationError):
        virtual_f(1, odd_length, fold)
    with pytest.raises(VirtualizationError):
        virtualize(infinity_empty(build_cartan("B2")), fold)
    with pytest.raises(VirtualizationError):
        lookup_folding("Q7->A1")


def _random_infinity(datum, n, depth, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        cur = infinity_empty(datum)
        for _ in range(rng.randint(0, depth)):
            cur = f(rng.choice(datum.labels), cur)
        out.append(cur)
    return out


def _commutation_failures(x, fold):
    bad = []
    v = virtualize(x, fold)
    if not in_virtual_image(v, fold) or devirtualize(v, fold) != x:
        bad.append("round trip")
    if embed_weight(weight(x), fold) != weight(v):
        bad.append("weight square")
    g = fold.gamma
    for a in fold.source.labels:
        for b in fold.fiber(a):
            if epsilon(b, v) != g[a] * epsilon(a, x) or phi(b, v) != g[a] * phi(a, x):
                bad.append(f"scaling at {a}->{b}")
            for i, _ in x.part(a).strings:
                if vacancy(v, b, g[a] * i) != g[a] * vacancy(x, a, i):
                    bad.append(f"vacancy at {a}->{b}, {i}")
        for op, vop in ((f, virtual_f), (e, virtual_e)):
            want = op(a, x)
            got = vop(a, v, fold)
            if (want is None) != (got is None) or (want is not None and virtualize(want, fold) != got):
                bad.append(f"{op.__name__}_{a} commutation")
    return bad


INFINITY_CASES = [
    "C2->A3", "C3->A5", "B3->D4", "B2->A3:natural", "C3->D4:natural", "G2->D4", "G2->D4:natural",
    "C2~->A3~", "B3~->D4~", "G2~->D4~", "A2^2->D4~", "A2^2->D4~:alt", "A4^2->A3~", "D3^2->A3~",
    "D4^3->D4~", "A1~->A3~", "K2,3",
]


@pytest.mark.parametrize("key", INFINITY_CASES)
def test_commutation_on_infinity(key):
    fold = folding(key)
    for x in _random_infinity(fold.source, 60, 6, seed=zlib.crc32(key.encode())):
        assert _commutation_failures(x, fold) == []


def test_commutation_on_f4():
    fold = folding("F4->E6")
    for x in _random_infinity(fold.source, 25, 5, seed=2):
        assert _commutation_failures(x, fold) == []


@pytest.mark.parametrize("key, lam", [
    ("C2->A3", "La[1]"), ("C2->A3", "La[2]"), ("B3->D4", "La[3]"), ("G2->D4", "La[1]"), ("G2->D4", "La[2]"),
])
def test_commutation_on_highest_weight(key, lam):
    fold = folding(key)
    g = generate(highest_weight_empty(fold.source, parse_weight(lam)))
    assert g.exhaustive
    for x in g.elements:
        assert _commutation_failures(x.rc, fold) == []


@pytest.mark.parametrize("key", ["C2->A3", "B3->D4"])
def test_fiber_order_is_irrelevant(key):
    fold = folding(key)
    for x in _random_infinity(fold.source, 200, 6, seed=9):
        v = virtualize(x, fold)
        for a in fold.source.labels:
            rev = list(reversed(sorted(fold.fiber(a), key=fold.target.index)))
            assert virtual_f(a, v, fold) == virtual_f(a, v, fold, order=rev)
            assert virtual_e(a, v, fold) == virtual_e(a, v, fold, order=rev)


def test_elementary_virtualization():
    fold = folding("C2->A3")
    assert [y.m for y in virtualize_elementary(ZElement(fold.source, 2, 0), fold).factors] == [0]
    assert [y.m for y in virtualize_elementary(ZElement(fold.source, 1, 0), fold).factors] == [0, 0]
    # the long-root node 1 has fiber {1, 3} in A3
    z1 = ZElement(fold.source, 1, -2)
    img = virtualize_elementary(z1, fold)
    assert [y.node for y in img.factors] == [1, 3]
    up = img
    for b in fold.fiber(1):
        for _ in range(fold.gamma[1]):
            up = up.e(b)
    assert up == virtualize_elementary(z1.e(1), fold)
    for b in fold.fiber(1):
        assert img.epsilon(b) == fold.gamma[1] * z1.epsilon(1)
        assert img.phi(b) == fold.gamma[1] * z1.phi(1)


def test_elementary_scaling_with_large_gamma():
    fold = folding("A2^2->D4~")
    a = next(x for x in fold.source.labels if fold.gamma[x] == 4)
    for m in range(-3, 4):
        z = ZElement(fold.source, a, m)
        img = virtualize_elementary(z, fold)
        for b in fold.fiber(a):
            assert img.epsilon(b) == 4 * z.epsilon(a)
            assert img.phi(b) == 4 * z.phi(a)
