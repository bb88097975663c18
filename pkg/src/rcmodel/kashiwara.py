"""Kashiwara operators on rigged configurations."""
from __future__ import annotations

import re
from typing import Iterable, Sequence

from .cartan import CartanDatum, CartanError, MultiplicityArray, Weight, pairing, pairing_vector
from .rigged import (
    Model,
    RiggedConfiguration,
    RiggedPartition,
    is_valid,
    vacancy,
    weight,
)

# symmetric types may use the closed-form rigging shifts instead of a full recompute
USE_FAST_PATH = True


def _rebuild(rc: RiggedConfiguration, k: int, old_string, new_string, fast: bool) -> RiggedConfiguration:
    """Swap one string in part ``k`` and readjust every other rigging so colabels stay fixed.

    ``old_string`` is None when a string is added; ``new_string`` is None when it is removed.
    """
    datum = rc.datum
    labels = datum.labels
    if fast and USE_FAST_PATH and datum.is_symmetric:
        return _rebuild_fast(rc, k, old_string, new_string)
    # colabels of the untouched strings, with new lengths in part k
    tagged = []
    for b, part in enumerate(rc.parts):
        strings = list(part.strings)
        if b == k and old_string is not None:
            strings.remove(old_string)
        tagged.append([(i, vacancy(rc, labels[b], i) - x) for i, x in strings])
    shape = []
    for b, rows in enumerate(tagged):
        lens = [(i, 0) for i, _ in rows]
        if b == k and new_string is not None:
            lens.append((new_string[0], 0))
        shape.append(RiggedPartition(tuple(lens)))
    probe = RiggedConfiguration(datum, tuple(shape), rc.L, rc.mode)
    new_parts = []
    for b, rows in enumerate(tagged):
        strings = [(i, vacancy(probe, labels[b], i) - c) for i, c in rows]
        if b == k and new_string is not None:
            strings.append(new_string)
        new_parts.append(RiggedPartition(tuple(strings)))
    out = RiggedConfiguration(datum, tuple(new_parts), rc.L, rc.mode)
    out._vac.update(probe._vac)
    return out


def _rebuild_fast(rc, k, old_string, new_string) -> RiggedConfiguration:
    """Simply-laced shifts: a length change ell -> ell' moves p_i^(b) by -A_ab (min(i, ell') - min(i, ell))."""
    row = rc.datum.matrix[k]
    old_len = old_string[0] if old_string is not None else 0
    new_len = new_string[0] if new_string is not None else 0
    new_parts = []
    for b, part in enumerate(rc.parts):
        Aab = row[b]
        strings = list(part.strings)
        if b == k and old_string is not None:
            strings.remove(old_string)
        if Aab:
            strings = [(i, x - Aab * (min(i, new_len) - min(i, old_len))) for i, x in strings]
        if b == k and new_string is not None:
            strings.append(new_string)
        new_parts.append(RiggedPartition(tuple(strings)))
    return RiggedConfiguration(rc.datum, tuple(new_parts), rc.L, rc.mode)


def f(a, rc: RiggedConfiguration, fast: bool = True) -> RiggedConfiguration | None:
    """Lowering operator; in the highest-weight model invalid results become None."""
    k = rc.datum.index(a)
    part = rc.parts[k]
    x = part.min_rigging()
    if x is None or x > 0:
        out = _rebuild(rc, k, None, (1, -1), fast)
    else:
        ell = max(i for i, y in part.strings if y == x)
        out = _rebuild(rc, k, (ell, x), (ell + 1, x - 1), fast)
    if rc.mode is Model.HIGHEST_WEIGHT and not is_valid(out):
        return None
    return out


def e(a, rc: RiggedConfiguration, fast: bool = True) -> RiggedConfiguration | None:
    """Raising operator; None when every rigging of part ``a`` is nonnegative."""
    k = rc.datum.index(a)
    part = rc.parts[k]
    x = part.min_rigging()
    if x is None or x >= 0:
        return None
    ell = min(i for i, y in part.strings if y == x)
    new = (ell - 1, x + 1) if ell > 1 else None
    return _rebuild(rc, k, (ell, x), new, fast)


def epsilon(a, rc: RiggedConfiguration) -> int:
    x = rc.part(a).min_rigging()
    return 0 if x is None or x >= 0 else -x


def phi(a, rc: RiggedConfiguration) -> int:
    return pairing(rc.datum, a, weight(rc)) + epsilon(a, rc)


def epsilon_vector(rc: RiggedConfiguration) -> tuple:
    return tuple(epsilon(a, rc) for a in rc.datum.labels)


def phi_vector(rc: RiggedConfiguration) -> tuple:
    wt = weight(rc)
    return tuple(pairing(rc.datum, a, wt) + epsilon(a, rc) for a in rc.datum.labels)


def epsilon_iterative(a, rc: RiggedConfiguration, limit: int = 10_000) -> int:
    n = 0
    cur = e(a, rc, fast=False)
    while cur is not None:
        n += 1
        if n > limit:
            raise RuntimeError("raising string did not terminate")
        cur = e(a, cur, fast=False)
    return n


def phi_iterative(a, rc: RiggedConfiguration, limit: int = 10_000) -> int:
    """Length of the f-string; only meaningful in the highest-weight model."""
    if rc.mode is not Model.HIGHEST_WEIGHT:
        raise ValueError("phi by iteration needs the highest-weight model (f is total otherwise)")
    n = 0
    cur = f(a, rc, fast=False)
    while cur is not None:
        n += 1
        if n > limit:
            raise RuntimeError("lowering string did not terminate")
        cur = f(a, cur, fast=False)
    return n


# ---------------------------------------------------------------------------
# operator strings
# ---------------------------------------------------------------------------


_OP_RE = re.compile(r"^([ef]?)(-?\w+)$")


def coerce_label(datum: CartanDatum, raw):
    """Map a text token to a datum label (ints stay ints when the datum uses ints)."""
    if raw in datum.labels:
        return raw
    text = str(raw)
    for a in datum.labels:
        if str(a) == text:
            return a
    raise CartanError(f"unknown node label {raw!r}; labels are {datum.labels}")


def parse_ops(text: str, datum: CartanDatum) -> list:
    """``"f4,f2,e3"`` or ``"4,2,3"`` (bare labels mean f) -> [("f", 4), ("f", 2), ("e", 3)]."""
    ops = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        m = _OP_RE.match(tok)
        if not m:
            raise ValueError(f"bad operator token {tok!r}")
        direction = m.group(1) or "f"
        ops.append((direction, coerce_label(datum, m.group(2))))
    return ops


def apply_string(rc: RiggedConfiguration | None, ops: Iterable) -> RiggedConfiguration | None:
    """Apply ``ops`` left to right; each op is ``("e" | "f", label)``."""
    for direction, a in ops:
        if rc is None:
            return None
        if direction == "f":
            rc = f(a, rc)
        elif direction == "e":
            rc = e(a, rc)
        else:
            raise ValueError(f"unknown direction {direction!r}")
    return rc


def f_string(rc: RiggedConfiguration, labels: Sequence) -> RiggedConfiguration | None:
    """Apply f to each label in order (the leftmost label acts first)."""
    return apply_string(rc, [("f", a) for a in labels])


def e_string(rc: RiggedConfiguration, labels: Sequence) -> RiggedConfiguration | None:
    return apply_string(rc, [("e", a) for a in labels])


# ---------------------------------------------------------------------------
# lift between highest-weight models
# ---------------------------------------------------------------------------


def lift(rc: RiggedConfiguration, mu: Weight) -> RiggedConfiguration:
    """Same strings and riggings, viewed in the model shifted by the dominant weight ``mu``."""
    if mu.alpha_part:
        raise CartanError("lift expects a weight in the fundamental-weight basis")
    if any(v < 0 for v in pairing_vector(rc.datum, mu)):
        raise CartanError("lift needs a dominant weight")
    if rc.mode is not Model.HIGHEST_WEIGHT:
        raise ValueError("lift acts on the highest-weight model")
    extra = MultiplicityArray.from_weight(rc.datum, mu)
    return rc.with_model(rc.L + extra, Model.HIGHEST_WEIGHT)
