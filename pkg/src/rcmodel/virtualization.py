"""Virtual rigged configurations: realize a folded type inside its simply-laced cover."""
from __future__ import annotations

from .cartan import CartanDatum, CartanError, FoldingDatum, MultiplicityArray, Weight
from .combinators import TensorElement, ZElement
from . import kashiwara as K
from .rigged import RiggedConfiguration, RiggedPartition


class VirtualizationError(ValueError):
    pass


def identity_folding(datum: CartanDatum) -> FoldingDatum:
    """Trivial folding of a simply-laced datum onto itself."""
    name = datum.name or "matrix"
    return FoldingDatum(f"{name}->{name}", datum, datum, tuple((a, (a,)) for a in datum.labels))


def _check_source(rc: RiggedConfiguration, fold: FoldingDatum):
    if rc.datum != fold.source:
        raise VirtualizationError(
            f"configuration is over {rc.datum!r}, but folding {fold.key} has source {fold.source!r}"
        )


def virtualize_multiplicities(L: MultiplicityArray, fold: FoldingDatum) -> MultiplicityArray:
    g = fold.gamma
    return MultiplicityArray(
        [((b, g[a] * i), m) for (a, i), m in L.items() for b in fold.fiber(a)]
    )


def virtualize(rc: RiggedConfiguration, fold: FoldingDatum) -> RiggedConfiguration:
    """Each string ``(i, x)`` at ``a`` becomes ``(gamma_a i, gamma_a x)`` at every node over ``a``."""
    _check_source(rc, fold)
    g = fold.gamma
    target = fold.target
    parts: dict = {b: () for b in target.labels}
    for a, part in zip(rc.datum.labels, rc.parts):
        scaled = tuple((g[a] * i, g[a] * x) for i, x in part.strings)
        for b in fold.fiber(a):
            parts[b] = scaled
    return RiggedConfiguration(
        target,
        tuple(RiggedPartition(parts[b]) for b in target.labels),
        virtualize_multiplicities(rc.L, fold),
        rc.mode,
    )


def virtual_image_violation(rc_hat: RiggedConfiguration, fold: FoldingDatum) -> str | None:
    """Name of the first failed image condition, or None when ``rc_hat`` is a virtual image."""
    if rc_hat.datum != fold.target:
        return f"configuration is not over the folding target {fold.target!r}"
    g = fold.gamma
    for a in fold.source.labels:
        fib = fold.fiber(a)
        first = rc_hat.part(fib[0])
        for b in fib[1:]:
            if rc_hat.part(b) != first:
                return f"condition (1): parts {fib[0]!r} and {b!r} over node {a!r} differ"
        for i, x in first.strings:
            if i % g[a]:
                return f"condition (3): length {i} at node {fib[0]!r} is not a multiple of {g[a]}"
            if x % g[a]:
                return f"condition (2): rigging {x} at node {fib[0]!r} is not a multiple of {g[a]}"
        Lfirst = rc_hat.L.node(fib[0])
        for b in fib[1:]:
            if rc_hat.L.node(b) != Lfirst:
                return f"multiplicity array differs between {fib[0]!r} and {b!r} over node {a!r}"
        for i, _m in Lfirst:
            if i % g[a]:
                return f"multiplicity array has index {i} at node {fib[0]!r}, not a multiple of {g[a]}"
    return None


def in_virtual_image(rc_hat: RiggedConfiguration, fold: FoldingDatum) -> bool:
    return virtual_image_violation(rc_hat, fold) is None


def devirtualize(rc_hat: RiggedConfiguration, fold: FoldingDatum) -> RiggedConfiguration:
    bad = virtual_image_violation(rc_hat, fold)
    if bad is not None:
        raise VirtualizationError(f"not in the virtual image: {bad}")
    g = fold.gamma
    parts = []
    L = []
    for a in fold.source.labels:
        b = fold.fiber(a)[0]
        parts.append(RiggedPartition(tuple((i // g[a], x // g[a]) for i, x in rc_hat.part(b).strings)))
        L.extend(((a, i // g[a]), m) for i, m in rc_hat.L.node(b))
    return RiggedConfiguration(fold.source, tuple(parts), MultiplicityArray(L), rc_hat.mode)


def _virtual_op(op, a, rc_hat, fold, order):
    bad = virtual_image_violation(rc_hat, fold)
    if bad is not None:
        raise VirtualizationError(f"virtual operator needs a virtual image: {bad}")
    fold.source.index(a)
    fib = sorted(fold.fiber(a), key=lambda b: fold.target.index(b))
    if order is not None:
        fib = list(order)
    cur = rc_hat
    for b in fib:
        for _ in range(fold.gamma[a]):
            cur = op(b, cur)
            if cur is None:
                return None
    return cur


def virtual_e(a, rc_hat: RiggedConfiguration, fold: FoldingDatum, order=None):
    """Product over the fiber of ``e_b^gamma_a`` (ascending target order unless ``order`` is given)."""
    return _virtual_op(K.e, a, rc_hat, fold, order)


def virtual_f(a, rc_hat: RiggedConfiguration, fold: FoldingDatum, order=None):
    return _virtual_op(K.f, a, rc_hat, fold, order)


def embed_weight(w: Weight, fold: FoldingDatum) -> Weight:
    """``Lambda_a -> gamma_a sum Lambda_b`` and ``alpha_a -> gamma_a sum alpha_b`` over the fiber."""
    g = fold.gamma
    lam = [(b, g[a] * c) for a, c in w.lambda_part.items() for b in fold.fiber(a)]
    alpha = [(b, g[a] * c) for a, c in w.alpha_part.items() for b in fold.fiber(a)]
    return Weight(lam, alpha)


def virtualize_elementary(z: ZElement, fold: FoldingDatum) -> TensorElement:
    """``z_a(m)`` goes to the tensor of ``z_b(gamma_a m)`` over the fiber, in ascending order."""
    if z.datum != fold.source:
        raise VirtualizationError("elementary element is not over the folding source")
    g = fold.gamma[z.node]
    fib = sorted(fold.fiber(z.node), key=lambda b: fold.target.index(b))
    return TensorElement([ZElement(fold.target, b, g * z.m) for b in fib], fold.target)


def lookup_folding(key: str) -> FoldingDatum:
    from .cartan import folding

    try:
        return folding(key)
    except CartanError as exc:
        raise VirtualizationError(str(exc)) from None
