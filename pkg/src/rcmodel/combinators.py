"""Auxiliary crystals, tensor products and the projection onto highest-weight crystals.

Tensor factors are stored as written, ``b_t (x) ... (x) b_1``, so ``factors[-1]``
is the rightmost factor ``b_1``.  With this ordering the two-factor rule reads

    e(b2 (x) b1) = e(b2) (x) b1   if eps(b2) > phi(b1),  else b2 (x) e(b1)
    f(b2 (x) b1) = f(b2) (x) b1   if eps(b2) >= phi(b1), else b2 (x) f(b1)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cartan import CartanDatum, MultiplicityArray, Weight, pairing
from . import kashiwara as K
from .rigged import Model, RiggedConfiguration, encode, is_valid, weight as rc_weight


class _NegInf:
    """Minus infinity for epsilon/phi values: absorbs addition, sorts below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    def __add__(self, other):
        if isinstance(other, int) or other is self:
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return self
        return NotImplemented

    def __lt__(self, other):
        if other is self:
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __le__(self, other):
        if other is self or isinstance(other, int):
            return True
        return NotImplemented

    def __gt__(self, other):
        if other is self or isinstance(other, int):
            return False
        return NotImplemented

    def __ge__(self, other):
        if other is self:
            return True
        if isinstance(other, int):
            return False
        return NotImplemented

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf")

    def __int__(self):
        raise ValueError("minus infinity has no integer value")

    __index__ = __int__


NEG_INF = _NegInf()


def is_finite_value(v) -> bool:
    return v is not NEG_INF


# ---------------------------------------------------------------------------
# crystal elements
# ---------------------------------------------------------------------------


class CrystalElement:
    """Common interface: ``e``, ``f``, ``epsilon``, ``phi``, ``wt`` and a hashable ``key``."""

    datum: CartanDatum

    def e(self, a):
        raise NotImplementedError

    def f(self, a):
        raise NotImplementedError

    def epsilon(self, a):
        raise NotImplementedError

    def phi(self, a):
        raise NotImplementedError

    def wt(self) -> Weight:
        raise NotImplementedError

    def key(self):
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


class RCElement(CrystalElement):
    __slots__ = ("rc",)

    def __init__(self, rc: RiggedConfiguration):
        self.rc = rc

    @property
    def datum(self):
        return self.rc.datum

    def e(self, a):
        r = K.e(a, self.rc)
        return None if r is None else RCElement(r)

    def f(self, a):
        r = K.f(a, self.rc)
        return None if r is None else RCElement(r)

    def epsilon(self, a):
        return K.epsilon(a, self.rc)

    def phi(self, a):
        return K.phi(a, self.rc)

    def wt(self):
        return rc_weight(self.rc)

    def key(self):
        return ("rc", self.rc.parts, self.rc.L, self.rc.mode)

    def to_json(self):
        return {"rc": encode(self.rc)}

    def __repr__(self):
        return f"RCElement({self.rc.parts})"


class TElement(CrystalElement):
    """The one-element crystal of weight ``lam`` with eps = phi = -inf."""

    __slots__ = ("datum", "lam")

    def __init__(self, datum: CartanDatum, lam: Weight):
        self.datum = datum
        self.lam = lam

    def e(self, a):
        return None

    def f(self, a):
        return None

    def epsilon(self, a):
        return NEG_INF

    def phi(self, a):
        return NEG_INF

    def wt(self):
        return self.lam

    def key(self):
        return ("t", self.lam)

    def to_json(self):
        return {"t": self.lam.to_json()}

    def __repr__(self):
        return f"TElement({self.lam!r})"


class CElement(CrystalElement):
    """The one-element crystal with eps = phi = 0 and weight 0."""

    __slots__ = ("datum",)

    def __init__(self, datum: CartanDatum):
        self.datum = datum

    def e(self, a):
        return None

    def f(self, a):
        return None

    def epsilon(self, a):
        return 0

    def phi(self, a):
        return 0

    def wt(self):
        return Weight()

    def key(self):
        return ("c",)

    def to_json(self):
        return {"c": None}

    def __repr__(self):
        return "CElement()"


class ZElement(CrystalElement):
    """``z_a(m)`` in the elementary crystal at node ``a``."""

    __slots__ = ("datum", "node", "m")

    def __init__(self, datum: CartanDatum, node, m: int):
        datum.index(node)
        self.datum = datum
        self.node = node
        self.m = int(m)

    def e(self, a):
        return ZElement(self.datum, self.node, self.m + 1) if a == self.node else None

    def f(self, a):
        return ZElement(self.datum, self.node, self.m - 1) if a == self.node else None

    def epsilon(self, a):
        return -self.m if a == self.node else NEG_INF

    def phi(self, a):
        return self.m if a == self.node else NEG_INF

    def wt(self):
        return Weight.simple_root(self.node, self.m)

    def key(self):
        return ("z", self.node, self.m)

    def to_json(self):
        return {"z": [self.node, self.m]}

    def __repr__(self):
        return f"ZElement({self.node!r}, {self.m})"


class TensorElement(CrystalElement):
    """``factors[0] (x) ... (x) factors[-1]``, written left to right."""

    __slots__ = ("datum", "factors")

    def __init__(self, factors: Sequence[CrystalElement], datum: CartanDatum | None = None):
        factors = tuple(factors)
        if not factors:
            raise ValueError("a tensor product needs at least one factor")
        self.factors = factors
        self.datum = datum if datum is not None else factors[0].datum

    def e(self, a):
        return tensor_e(a, self)

    def f(self, a):
        return tensor_f(a, self)

    def epsilon(self, a):
        return tensor_eps(a, self)

    def phi(self, a):
        return tensor_phi(a, self)

    def wt(self):
        return tensor_wt(self)

    def key(self):
        return ("tensor",) + tuple(x.key() for x in self.factors)

    def to_json(self):
        return {"tensor": [x.to_json() for x in self.factors]}

    def replace(self, j: int, x: CrystalElement) -> "TensorElement":
        fs = list(self.factors)
        fs[j] = x
        return TensorElement(fs, self.datum)

    def __repr__(self):
        return " (x) ".join(repr(x) for x in self.factors)


def as_element(x) -> CrystalElement:
    if isinstance(x, CrystalElement):
        return x
    if isinstance(x, RiggedConfiguration):
        return RCElement(x)
    raise TypeError(f"not a crystal element: {x!r}")


# ---------------------------------------------------------------------------
# tensor rules
# ---------------------------------------------------------------------------


def _is_regular(x: CrystalElement, a) -> bool:
    ep, ph = x.epsilon(a), x.phi(a)
    return ep is not NEG_INF and ph is not NEG_INF and ep >= 0 and ph >= 0


def _split(t: TensorElement):
    """View a tensor of length >= 2 as ``left (x) rest``."""
    left = t.factors[0]
    rest = t.factors[1] if len(t.factors) == 2 else TensorElement(t.factors[1:], t.datum)
    return left, rest


def _rejoin(t: TensorElement, left, rest) -> TensorElement:
    tail = rest.factors if len(t.factors) > 2 else (rest,)
    return TensorElement((left,) + tuple(tail), t.datum)


def signature(a, factors: Sequence[CrystalElement]):
    """Reduced signature of ``factors`` at node ``a``.

    Each factor contributes ``+`` (phi times) then ``-`` (eps times); adjacent
    ``- +`` pairs cancel.  Returns (unmatched plus positions, unmatched minus positions)
    as factor indices in left-to-right order.
    """
    plus: list = []
    minus: list = []  # stack of [factor index, count]
    for j, x in enumerate(factors):
        p = x.phi(a)
        while p and minus:
            top = minus[-1]
            used = min(p, top[1])
            p -= used
            top[1] -= used
            if top[1] == 0:
                minus.pop()
        plus.extend([j] * p)
        m = x.epsilon(a)
        if m:
            minus.append([j, m])
    minus_positions = [j for j, c in minus for _ in range(c)]
    return plus, minus_positions


def _use_signature(a, t: TensorElement) -> bool:
    return len(t.factors) >= 3 and all(_is_regular(x, a) for x in t.factors)


def tensor_eps(a, t: TensorElement):
    if len(t.factors) == 1:
        return t.factors[0].epsilon(a)
    if _use_signature(a, t):
        return len(signature(a, t.factors)[1])
    b2, b1 = _split(t)
    return max(b1.epsilon(a), b2.epsilon(a) - pairing(t.datum, a, b1.wt()))


def tensor_phi(a, t: TensorElement):
    if len(t.factors) == 1:
        return t.factors[0].phi(a)
    if _use_signature(a, t):
        return len(signature(a, t.factors)[0])
    b2, b1 = _split(t)
    return max(b2.phi(a), b1.phi(a) + pairing(t.datum, a, b2.wt()))


def tensor_wt(t: TensorElement) -> Weight:
    total = Weight()
    for x in t.factors:
        total = total + x.wt()
    return total


def tensor_e(a, t: TensorElement):
    if len(t.factors) == 1:
        x = t.factors[0].e(a)
        return None if x is None else TensorElement((x,), t.datum)
    if _use_signature(a, t):
        _, minus = signature(a, t.factors)
        if not minus:
            return None
        j = minus[0]
        x = t.factors[j].e(a)
        return None if x is None else t.replace(j, x)
    b2, b1 = _split(t)
    if b2.epsilon(a) > b1.phi(a):
        x = b2.e(a)
        return None if x is None else _rejoin(t, x, b1)
    x = b1.e(a)
    return None if x is None else _rejoin(t, b2, x)


def tensor_f(a, t: TensorElement):
    if len(t.factors) == 1:
        x = t.factors[0].f(a)
        return None if x is None else TensorElement((x,), t.datum)
    if _use_signature(a, t):
        plus, _ = signature(a, t.factors)
        if not plus:
            return None
        j = plus[-1]
        x = t.factors[j].f(a)
        return None if x is None else t.replace(j, x)
    b2, b1 = _split(t)
    if b2.epsilon(a) >= b1.phi(a):
        x = b2.f(a)
        return None if x is None else _rejoin(t, x, b1)
    x = b1.f(a)
    return None if x is None else _rejoin(t, b2, x)


def tensor_e_pairwise(a, t: TensorElement):
    """Right-nested two-factor rule regardless of the number of factors."""
    if len(t.factors) == 1:
        x = t.factors[0].e(a)
        return None if x is None else TensorElement((x,), t.datum)
    b2, b1 = _split(t)
    rest_phi = b1.phi(a) if not isinstance(b1, TensorElement) else _phi_pairwise(a, b1)
    if b2.epsilon(a) > rest_phi:
        x = b2.e(a)
        return None if x is None else _rejoin(t, x, b1)
    x = tensor_e_pairwise(a, b1) if isinstance(b1, TensorElement) else b1.e(a)
    return None if x is None else _rejoin(t, b2, x)


def tensor_f_pairwise(a, t: TensorElement):
    if len(t.factors) == 1:
        x = t.factors[0].f(a)
        return None if x is None else TensorElement((x,), t.datum)
    b2, b1 = _split(t)
    rest_phi = b1.phi(a) if not isinstance(b1, TensorElement) else _phi_pairwise(a, b1)
    if b2.epsilon(a) >= rest_phi:
        x = b2.f(a)
        return None if x is None else _rejoin(t, x, b1)
    x = tensor_f_pairwise(a, b1) if isinstance(b1, TensorElement) else b1.f(a)
    return None if x is None else _rejoin(t, b2, x)


def _eps_pairwise(a, t: TensorElement):
    if len(t.factors) == 1:
        return t.factors[0].epsilon(a)
    b2, b1 = _split(t)
    e1 = _eps_pairwise(a, b1) if isinstance(b1, TensorElement) else b1.epsilon(a)
    return max(e1, b2.epsilon(a) - pairing(t.datum, a, b1.wt()))


def _phi_pairwise(a, t: TensorElement):
    if len(t.factors) == 1:
        return t.factors[0].phi(a)
    b2, b1 = _split(t)
    p1 = _phi_pairwise(a, b1) if isinstance(b1, TensorElement) else b1.phi(a)
    return max(b2.phi(a), p1 + pairing(t.datum, a, b2.wt()))


def tensor(*factors: CrystalElement) -> TensorElement:
    return TensorElement([as_element(x) for x in factors])


# ---------------------------------------------------------------------------
# projection onto RC(lambda)
# ---------------------------------------------------------------------------


def shifted_infinity_start(datum: CartanDatum, lam: Weight) -> TensorElement:
    """``c (x) t_lam (x) empty`` with the empty element of RC(infinity)."""
    return TensorElement(
        (CElement(datum), TElement(datum, lam), RCElement(RiggedConfiguration.empty(datum))), datum
    )


def project(x: TensorElement) -> RiggedConfiguration | None:
    """Send ``c (x) t_lam (x) rc`` to ``rc`` read in RC(lam); None when that is invalid."""
    if not (isinstance(x, TensorElement) and len(x.factors) == 3):
        raise TypeError("project expects c (x) t_lam (x) rc")
    c, t, r = x.factors
    if not (isinstance(c, CElement) and isinstance(t, TElement) and isinstance(r, RCElement)):
        raise TypeError("project expects c (x) t_lam (x) rc")
    L = MultiplicityArray.from_weight(x.datum, t.lam)
    out = r.rc.with_model(L, Model.HIGHEST_WEIGHT)
    return out if is_valid(out) else None


# ---------------------------------------------------------------------------
# recognition conditions
# ---------------------------------------------------------------------------


@dataclass
class RecognitionReport:
    count: int
    depth: int | None
    conditions: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def summary(self) -> str:
        lines = [f"{self.count} elements, depth {self.depth}"]
        for name, ok in self.conditions.items():
            lines.append(f"  {'PASS' if ok else 'FAIL'} {name}")
        lines.extend(f"  ! {msg}" for msg in self.failures[:20])
        return "\n".join(lines)


def _in_negative_root_cone(w: Weight) -> bool:
    return not w.lambda_part and all(c <= 0 for c in w.alpha_part.values())


def recognition_check(crystal, depth: int | None = None, root=None) -> RecognitionReport:
    """Check the weight, uniqueness, epsilon and generation conditions on a truncation.

    ``crystal`` is a generated graph (anything with ``elements`` and ``root``) or an
    iterable of elements together with ``root``.
    """
    if hasattr(crystal, "elements"):
        elements = list(crystal.elements)
        root_el = elements[crystal.root] if root is None else root
        depth = crystal.depth if depth is None else depth
    else:
        elements = [as_element(x) for x in crystal]
        root_el = as_element(root) if root is not None else elements[0]
    elements = [as_element(x) for x in elements]
    root_el = as_element(root_el)
    datum = root_el.datum
    labels = datum.labels
    rep = RecognitionReport(len(elements), depth)

    bad_wt = [x for x in elements if not _in_negative_root_cone(x.wt())]
    rep.conditions["weights lie in the negative root cone"] = not bad_wt
    rep.failures += [f"weight {x.wt()!r} of {x!r} is not in -Q_+" for x in bad_wt[:5]]

    zero = [x for x in elements if x.wt().is_zero()]
    unique = len(zero) == 1 and zero[0] == root_el
    rep.conditions["unique weight-zero element is the root"] = unique
    if not unique:
        rep.failures.append(f"{len(zero)} elements of weight zero")

    eps0 = [a for a in labels if root_el.epsilon(a) != 0]
    rep.conditions["epsilon vanishes on the root"] = not eps0
    rep.failures += [f"epsilon_{a}(root) = {root_el.epsilon(a)}" for a in eps0]

    non_int = [(x, a) for x in elements for a in labels if not isinstance(x.epsilon(a), int)]
    rep.conditions["epsilon is integer valued"] = not non_int
    rep.failures += [f"epsilon_{a} of {x!r} is {x.epsilon(a)!r}" for x, a in non_int[:5]]

    stuck = []
    for x in elements:
        cur, steps = x, 0
        while cur is not None and cur != root_el:
            a = next((b for b in labels if cur.epsilon(b) > 0), None)
            if a is None:
                break
            cur = cur.e(a)
            steps += 1
            if steps > 10_000:
                cur = None
        if cur != root_el:
            stuck.append(x)
    rep.conditions["raising descent reaches the root"] = not stuck
    rep.failures += [f"raising descent from {x!r} does not reach the root" for x in stuck[:5]]
    return rep
