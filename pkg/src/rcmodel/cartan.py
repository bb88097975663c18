"""Generalized Cartan matrices, weights, diagram foldings and finite-type oracles.

Conventions
-----------
``A[a][b] = <h_a, alpha_b>``.  For an edge between a long root ``l`` and a short
root ``s`` the short coroot pairs strongly: ``A[s][l] = -k``, ``A[l][s] = -1``.
Named families use Bourbaki numbering; the affine node is ``0``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Label = Union[int, str]


class CartanError(ValueError):
    """Raised for malformed Cartan data, unknown types or unsupported foldings."""


def label_sort_key(a: Label):
    return (1, a) if isinstance(a, str) else (0, a)


# ---------------------------------------------------------------------------
# Cartan datum
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CartanDatum:
    """A symmetrizable generalized Cartan matrix with node labels and gamma factors."""

    labels: tuple
    matrix: tuple
    gamma: tuple
    name: str = ""
    symmetrizer: tuple = field(init=False, repr=False)
    kind: str = field(init=False, repr=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        matrix = tuple(tuple(int(v) for v in row) for row in self.matrix)
        gamma = tuple(int(g) for g in self.gamma)
        n = len(labels)
        if len(set(labels)) != n:
            raise CartanError(f"duplicate labels in {labels}")
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise CartanError("Cartan matrix must be square and match the labels")
        if len(gamma) != n:
            raise CartanError("gamma must have one entry per label")
        for a in range(n):
            if matrix[a][a] != 2:
                raise CartanError(f"diagonal entry at {labels[a]!r} is {matrix[a][a]}, not 2")
            for b in range(n):
                if a == b:
                    continue
                if matrix[a][b] > 0:
                    raise CartanError(f"positive off-diagonal entry at ({labels[a]!r}, {labels[b]!r})")
                if (matrix[a][b] == 0) != (matrix[b][a] == 0):
                    raise CartanError(f"zero pattern not symmetric at ({labels[a]!r}, {labels[b]!r})")
        if any(g < 1 for g in gamma):
            raise CartanError("gamma factors must be positive integers")
        sym = _symmetrizer(labels, matrix)
        if all(matrix[a][b] == matrix[b][a] for a in range(n) for b in range(n)):
            if any(g != 1 for g in gamma):
                raise CartanError("gamma must be identically 1 for a symmetric matrix")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "symmetrizer", sym)
        object.__setattr__(self, "kind", _classify(matrix, sym))
        object.__setattr__(self, "_index", {a: k for k, a in enumerate(labels)})
        nbrs = tuple(
            tuple((b, matrix[a][b]) for b in range(n) if matrix[a][b] != 0) for a in range(n)
        )
        object.__setattr__(self, "_neighbors", nbrs)

    # identity is structural
    def _key(self):
        return (self.labels, self.matrix, self.gamma)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, CartanDatum):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def is_symmetric(self) -> bool:
        n = self.rank
        return all(self.matrix[a][b] == self.matrix[b][a] for a in range(n) for b in range(n))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def index(self, a: Label) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise CartanError(f"unknown node label {a!r}; labels are {self.labels}") from None

    def entry(self, a: Label, b: Label) -> int:
        return self.matrix[self.index(a)][self.index(b)]

    def gamma_of(self, a: Label) -> int:
        return self.gamma[self.index(a)]

    def with_gamma(self, gamma: Sequence[int]) -> "CartanDatum":
        return CartanDatum(self.labels, self.matrix, tuple(gamma), self.name)

    def __repr__(self):
        name = f" {self.name}" if self.name else ""
        return f"<CartanDatum{name} labels={self.labels} gamma={self.gamma}>"


def _symmetrizer(labels, matrix) -> tuple:
    """Positive rationals d with d_a A[a][b] = d_b A[b][a]; raises on failure."""
    n = len(labels)
    d: list = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            a = stack.pop()
            for b in range(n):
                if b == a or matrix[a][b] == 0:
                    continue
                want = d[a] * matrix[a][b] / matrix[b][a]
                if d[b] is None:
                    d[b] = want
                    stack.append(b)
                elif d[b] != want:
                    raise CartanError(
                        f"matrix is not symmetrizable: violated at ({labels[a]!r}, {labels[b]!r})"
                    )
    return tuple(d)


def _det(rows) -> Fraction:
    m = [[Fraction(v) for v in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                factor = m[r][c] / m[c][c]
                for k in range(c, n):
                    m[r][k] -= factor * m[c][k]
    return det


def _components(matrix) -> list:
    n = len(matrix)
    seen, comps = set(), []
    for s in range(n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in range(n):
                if b not in seen and matrix[a][b] != 0:
                    seen.add(b)
                    stack.append(b)
        comps.append(sorted(comp))
    return comps


def _classify(matrix, sym) -> str:
    kinds = []
    for comp in _components(matrix):
        s = [[sym[a] * matrix[a][b] for b in comp] for a in comp]
        k = len(comp)
        leading = [_det([row[:j] for row in s[:j]]) for j in range(1, k + 1)]
        if all(x > 0 for x in leading):
            kinds.append("finite")
            continue
        # indecomposable affine: singular, every proper principal submatrix positive definite
        proper_ok = all(
            _classify_sub(s, [x for x in range(k) if x != drop]) for drop in range(k)
        )
        if leading[-1] == 0 and proper_ok:
            kinds.append("affine")
        else:
            kinds.append("indefinite")
    if all(k == "finite" for k in kinds):
        return "finite"
    if all(k in ("finite", "affine") for k in kinds):
        return "affine"
    return "indefinite"


def _classify_sub(s, idx) -> bool:
    return all(_det([[s[a][b] for b in idx[:j]] for a in idx[:j]]) > 0 for j in range(1, len(idx) + 1))


# ---------------------------------------------------------------------------
# Type registry
# ---------------------------------------------------------------------------


def _matrix_from_edges(labels, edges) -> list:
    """Edges are (i, j, k): k == 1 simple bond; k > 1 arrow pointing at the short node j."""
    idx = {a: n for n, a in enumerate(labels)}
    n = len(labels)
    m = [[2 if a == b else 0 for b in range(n)] for a in range(n)]
    for i, j, k in edges:
        m[idx[j]][idx[i]] = -k
        m[idx[i]][idx[j]] = -1
    return m


def _path(nodes):
    return [(nodes[t], nodes[t + 1], 1) for t in range(len(nodes) - 1)]


def _finite_edges(family: str, n: int):
    labels = list(range(1, n + 1))
    if family == "A" and n >= 1:
        return labels, _path(labels)
    if family == "B" and n >= 2:
        return labels, _path(labels[:-1]) + [(n - 1, n, 2)]
    if family == "C" and n >= 2:
        return labels, _path(labels[:-1]) + [(n, n - 1, 2)]
    if family == "D" and n >= 3:
        return labels, _path(labels[:-1]) + [(n - 2, n, 1)]
    if family == "E" and n in (6, 7, 8):
        return labels, [(1, 3, 1), (2, 4, 1)] + _path(labels[2:])
    if family == "F" and n == 4:
        return labels, [(1, 2, 1), (2, 3, 2), (3, 4, 1)]
    if family == "G" and n == 2:
        return labels, [(2, 1, 3)]
    raise CartanError(f"unknown finite type {family}{n}")


_AFFINE_ATTACH = {"B": 2, "D": 2, "F": 1, "G": 2}
_E_AFFINE_ATTACH = {6: 2, 7: 1, 8: 8}


def _untwisted_edges(family: str, n: int):
    labels, edges = _finite_edges(family, n)
    labels = [0] + labels
    if family == "A":
        if n == 1:
            return labels, None  # [[2,-2],[-2,2]] handled separately
        edges = edges + [(0, 1, 1), (0, n, 1)]
    elif family == "C":
        edges = edges + [(0, 1, 2)]
    elif family == "E":
        edges = edges + [(0, _E_AFFINE_ATTACH[n], 1)]
    elif family in _AFFINE_ATTACH:
        if family == "B" and n < 3 or family == "D" and n < 4:
            raise CartanError(f"untwisted affine {family}{n}~ needs a larger rank")
        edges = edges + [(0, _AFFINE_ATTACH[family], 1)]
    return labels, edges


def _twisted_matrix(family: str, n: int, r: int, dagger: bool = False):
    """Twisted affine types in Kac's labeling: names X{n}^{r} with X{n} the simply-laced type."""
    if family == "A" and r == 2 and n % 2 == 0:
        m = n // 2
        labels = list(range(m + 1))
        if m == 1:
            edges = [(0, 1, 4)] if dagger else [(1, 0, 4)]
        elif dagger:
            edges = [(0, 1, 2)] + _path(labels[1:-1]) + [(m - 1, m, 2)]
        else:
            edges = [(1, 0, 2)] + _path(labels[1:-1]) + [(m, m - 1, 2)]
        return labels, _matrix_from_edges(labels, edges)
    if dagger:
        raise CartanError("only A_{2n}^(2) has a dagger variant")
    if family == "A" and r == 2 and n % 2 == 1 and n >= 5:
        m = (n + 1) // 2
        labels = list(range(m + 1))
        edges = [(0, 2, 1)] + _path(labels[1:]) [:-1] + [(m, m - 1, 2)]
        return labels, _matrix_from_edges(labels, edges)
    if family == "D" and r == 2 and n >= 3:
        m = n - 1
        labels = list(range(m + 1))
        edges = [(1, 0, 2)] + _path(labels[1:-1]) + [(m - 1, m, 2)]
        return labels, _matrix_from_edges(labels, edges)
    if family == "E" and r == 2 and n == 6:
        labels = [0, 1, 2, 3, 4]
        return labels, _matrix_from_edges(labels, [(0, 1, 1), (1, 2, 1), (3, 2, 2), (3, 4, 1)])
    if family == "D" and r == 3 and n == 4:
        labels = [0, 1, 2]
        return labels, _matrix_from_edges(labels, [(0, 1, 1), (2, 1, 3)])
    raise CartanError(f"unknown twisted type {family}{n}^{r}")


_TYPE_RE = re.compile(r"^([A-G])(\d+)(~|\^(\d)(\*)?)?$")


def _named_matrix(family: str, n: int, suffix: str | None, r: str | None, dagger: bool):
    if not suffix:
        labels, edges = _finite_edges(family, n)
        return labels, _matrix_from_edges(labels, edges)
    if suffix == "~":
        labels, edges = _untwisted_edges(family, n)
        if edges is None:
            return labels, [[2, -2], [-2, 2]]
        return labels, _matrix_from_edges(labels, edges)
    return _twisted_matrix(family, n, int(r), dagger)


def normalize_type_name(spec: str) -> str:
    return spec.strip().replace(" ", "")


def build_cartan(spec, gamma: Sequence[int] | None = None, labels: Sequence[Label] | None = None) -> CartanDatum:
    """Build a CartanDatum from a type name (``"A5"``, ``"A2~"``, ``"A2^2"``),
    a ``"matrix:"`` string, or an explicit square matrix.

    Named non-simply-laced types take their gamma factors from the default
    folding table; explicit matrices default to gamma = 1.
    """
    if isinstance(spec, CartanDatum):
        return spec
    if isinstance(spec, str):
        text = normalize_type_name(spec)
        if text.startswith("matrix:"):
            return _parse_matrix_spec(text[len("matrix:"):], gamma, labels)
        m = _TYPE_RE.match(text)
        if not m:
            raise CartanError(f"cannot parse type {spec!r}")
        family, n, suffix, r, dagger = m.group(1), int(m.group(2)), m.group(3), m.group(4), bool(m.group(5))
        if suffix and suffix.startswith("^") and r == "1":
            suffix, r = "~", None
        lab, matrix = _named_matrix(family, n, suffix, r, dagger)
        name = canonical_name(text)
        if gamma is None:
            gamma = _default_gamma(name, len(lab))
        return CartanDatum(tuple(lab), matrix, tuple(gamma), name)
    matrix = [list(row) for row in spec]
    if labels is None:
        labels = tuple(range(len(matrix)))
    if gamma is None:
        gamma = (1,) * len(matrix)
    return CartanDatum(tuple(labels), matrix, tuple(gamma), "")


def canonical_name(text: str) -> str:
    m = _TYPE_RE.match(text)
    if not m:
        return text
    family, n, suffix, r, dagger = m.group(1), m.group(2), m.group(3), m.group(4), m.group(5)
    if not suffix:
        return f"{family}{n}"
    if suffix == "~" or r == "1":
        return f"{family}{n}~"
    return f"{family}{n}^{r}{'*' if dagger else ''}"


def _parse_matrix_spec(body: str, gamma, labels) -> CartanDatum:
    try:
        data = json.loads(body)
    except json.JSONDecodeError as exc:
        raise CartanError(f"matrix spec is not valid JSON: {exc}") from None
    if isinstance(data, dict):
        matrix = data.get("matrix")
        gamma = data.get("gamma", gamma)
        labels = data.get("labels", labels)
    else:
        matrix = data
    if not isinstance(matrix, list) or not all(isinstance(row, list) for row in matrix):
        raise CartanError("matrix spec must be a JSON list of lists")
    if not all(isinstance(v, int) for row in matrix for v in row):
        raise CartanError("matrix entries must be integers")
    return build_cartan(matrix, gamma=gamma, labels=tuple(labels) if labels is not None else None)


def _default_gamma(name: str, n: int) -> tuple:
    if name in _DEFAULT_FOLDING_KEY or _family_default_folding(name) is not None:
        fold = folding_for(name)
        return fold.source.gamma
    return (1,) * n


def _family_default_folding(name: str):
    m = _TYPE_RE.match(name)
    if not m:
        return None
    family = m.group(1)
    suffix = m.group(3)
    if not suffix and family in "BCFG":
        return name
    if suffix == "~" and family in "BCFG":
        return name
    if suffix and suffix.startswith("^"):
        return name
    return None


# ---------------------------------------------------------------------------
# Weights and multiplicity arrays
# ---------------------------------------------------------------------------


def _clean(items) -> tuple:
    acc: dict = {}
    for a, c in items:
        acc[a] = acc.get(a, 0) + int(c)
    return tuple(sorted(((a, c) for a, c in acc.items() if c != 0), key=lambda t: label_sort_key(t[0])))


class Weight:
    """``sum lam[a] * Lambda_a + sum alpha[a] * alpha_a`` with integer coefficients."""

    __slots__ = ("_lam", "_alpha", "_hash")

    def __init__(self, lambda_part: Mapping | Iterable = (), alpha_part: Mapping | Iterable = ()):
        if isinstance(lambda_part, Mapping):
            lambda_part = lambda_part.items()
        if isinstance(alpha_part, Mapping):
            alpha_part = alpha_part.items()
        self._lam = _clean(lambda_part)
        self._alpha = _clean(alpha_part)
        self._hash = None

    @classmethod
    def fundamental(cls, a: Label, coeff: int = 1) -> "Weight":
        return cls({a: coeff})

    @classmethod
    def simple_root(cls, a: Label, coeff: int = 1) -> "Weight":
        return cls((), {a: coeff})

    @property
    def lambda_part(self) -> dict:
        return dict(self._lam)

    @property
    def alpha_part(self) -> dict:
        return dict(self._alpha)

    def lam(self, a: Label) -> int:
        return dict(self._lam).get(a, 0)

    def alpha(self, a: Label) -> int:
        return dict(self._alpha).get(a, 0)

    def is_zero(self) -> bool:
        return not self._lam and not self._alpha

    def __add__(self, other: "Weight") -> "Weight":
        if not isinstance(other, Weight):
            return NotImplemented
        return Weight(self._lam + other._lam, self._alpha + other._alpha)

    def __neg__(self) -> "Weight":
        return Weight(((a, -c) for a, c in self._lam), ((a, -c) for a, c in self._alpha))

    def __sub__(self, other: "Weight") -> "Weight":
        if not isinstance(other, Weight):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k: int) -> "Weight":
        return Weight(((a, k * c) for a, c in self._lam), ((a, k * c) for a, c in self._alpha))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Weight):
            return NotImplemented
        return self._lam == other._lam and self._alpha == other._alpha

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._lam, self._alpha))
        return self._hash

    def __repr__(self):
        return f"Weight({format_weight(self)})"

    def to_json(self) -> dict:
        return {
            "Lambda": [[a, c] for a, c in self._lam],
            "alpha": [[a, c] for a, c in self._alpha],
        }


def format_weight(w: Weight) -> str:
    """Render as ``-7*Lambda[0] - 4*Lambda[1] + alpha[2]``."""
    terms = [(f"Lambda[{a}]", c) for a, c in w._lam] + [(f"alpha[{a}]", c) for a, c in w._alpha]
    if not terms:
        return "0"
    out = []
    for k, (sym, c) in enumerate(terms):
        mag = abs(c)
        body = sym if mag == 1 else f"{mag}*{sym}"
        if k == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out)


_WEIGHT_TERM = re.compile(r"([+-]?)\s*(?:(\d+)\s*\*?\s*)?(La|Lambda|alpha|al)\[\s*([^\]]+?)\s*\]")


def parse_weight(text: str, datum: CartanDatum | None = None) -> Weight:
    """Parse ``"La[0]+2*La[3]-alpha[1]"``; labels are coerced to the datum's label type."""
    s = text.replace(" ", "")
    if s in ("", "0"):
        return Weight()
    pos, lam, alpha = 0, {}, {}
    while pos < len(s):
        m = _WEIGHT_TERM.match(s, pos)
        if not m or (pos > 0 and not m.group(1)):
            raise ValueError(f"cannot parse weight {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = sign * int(m.group(2) or 1)
        raw = m.group(4)
        label: Label = int(raw) if re.fullmatch(r"-?\d+", raw) else raw
        if datum is not None:
            datum.index(label)
        target = lam if m.group(3) in ("La", "Lambda") else alpha
        target[label] = target.get(label, 0) + coeff
        pos = m.end()
    return Weight(lam, alpha)


def pairing(datum: CartanDatum, a: Label, w: Weight) -> int:
    """``<h_a, w> = lam[a] + sum_b A[a][b] alpha[b]``."""
    k = datum.index(a)
    row = datum.matrix[k]
    total = w.lam(a)
    for b, c in w._alpha:
        total += row[datum.index(b)] * c
    return total


def pairing_vector(datum: CartanDatum, w: Weight) -> tuple:
    return tuple(pairing(datum, a, w) for a in datum.labels)


def canonicalize_weight(datum: CartanDatum, w: Weight) -> Weight:
    """Rewrite in the fundamental-weight basis (finite type only)."""
    if not datum.is_finite:
        raise CartanError(f"canonical weight form needs finite type, got {datum.kind}")
    return Weight(dict(zip(datum.labels, pairing_vector(datum, w))))


def is_dominant(datum: CartanDatum, w: Weight) -> bool:
    return all(v >= 0 for v in pairing_vector(datum, w))


class MultiplicityArray:
    """Finitely supported ``L[(a, i)] >= 0``."""

    __slots__ = ("_items", "_hash")

    def __init__(self, entries: Mapping | Iterable = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        acc: dict = {}
        for key, m in entries:
            a, i = key
            if not isinstance(i, int) or i < 1:
                raise ValueError(f"multiplicity array index must be a positive integer, got {i!r}")
            if m < 0:
                raise ValueError("multiplicities must be nonnegative")
            acc[(a, i)] = acc.get((a, i), 0) + int(m)
        self._items = tuple(
            sorted(((k, m) for k, m in acc.items() if m), key=lambda t: (label_sort_key(t[0][0]), t[0][1]))
        )
        self._hash = None

    @classmethod
    def from_weight(cls, datum: CartanDatum, lam: Weight) -> "MultiplicityArray":
        """Single-column choice ``L_1^(a) = <h_a, lam>``; lam must be dominant."""
        if lam.alpha_part:
            raise CartanError("expected a weight in the fundamental-weight basis")
        vals = pairing_vector(datum, lam)
        if any(v < 0 for v in vals):
            raise CartanError(f"weight {format_weight(lam)} is not dominant")
        return cls({(a, 1): v for a, v in zip(datum.labels, vals)})

    def get(self, a: Label, i: int) -> int:
        for (b, j), m in self._items:
            if b == a and j == i:
                return m
        return 0

    def items(self):
        return self._items

    def node(self, a: Label) -> tuple:
        return tuple((i, m) for (b, i), m in self._items if b == a)

    def weight(self) -> Weight:
        return Weight([(a, i * m) for (a, i), m in self._items])

    def __add__(self, other: "MultiplicityArray") -> "MultiplicityArray":
        return MultiplicityArray(self._items + other._items)

    def __bool__(self):
        return bool(self._items)

    def __eq__(self, other):
        if not isinstance(other, MultiplicityArray):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __repr__(self):
        return f"MultiplicityArray({dict(self._items)})"


# ---------------------------------------------------------------------------
# Finite-type oracles
# ---------------------------------------------------------------------------


def positive_roots(datum: CartanDatum) -> list:
    """Positive roots (alpha coordinates) by closing the simple roots under reflections."""
    if not datum.is_finite:
        raise CartanError(f"positive roots are only enumerated in finite type, got {datum.kind}")
    n = datum.rank
    A = datum.matrix
    simple = [tuple(1 if k == a else 0 for k in range(n)) for a in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for a in range(n):
                c = sum(A[a][b] * beta[b] for b in range(n))
                if c == 0:
                    continue
                gamma = tuple(beta[k] - (c if k == a else 0) for k in range(n))
                if gamma not in seen and all(v >= 0 for v in gamma):
                    seen.add(gamma)
                    nxt.append(gamma)
        frontier = nxt
    return sorted(seen, key=lambda r: (sum(r), tuple(-v for v in r)))


def weyl_dimension(datum: CartanDatum, lam: Weight) -> int:
    """Dimension of the irreducible module of highest weight ``lam``."""
    vals = pairing_vector(datum, lam)
    if any(v < 0 for v in vals):
        raise CartanError(f"weight {format_weight(lam)} is not dominant")
    d = datum.symmetrizer
    dim = Fraction(1)
    for beta in positive_roots(datum):
        num = sum(c * d[a] * (vals[a] + 1) for a, c in enumerate(beta))
        den = sum(c * d[a] for a, c in enumerate(beta))
        dim *= Fraction(num) / Fraction(den)
    assert dim.denominator == 1, dim
    return int(dim)


# ---------------------------------------------------------------------------
# Foldings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FoldingDatum:
    """A diagram folding of a simply-laced ``target`` onto ``source``.

    ``fibers[a]`` is the tuple of target labels folded onto source label ``a``.
    The scaling factors live on ``source.gamma``.
    """

    key: str
    source: CartanDatum
    target: CartanDatum
    fibers: tuple  # ((a, (b, ...)), ...) aligned with source.labels
    delta_coefficient: object = None

    def __post_init__(self):
        covered = [b for _, fib in self.fibers for b in fib]
        if sorted(covered, key=label_sort_key) != sorted(self.target.labels, key=label_sort_key):
            raise CartanError(f"fibers of {self.key} do not partition the target labels")
        if not self.target.is_symmetric:
            raise CartanError("folding target must be simply laced")
        for a, fib in self.fibers:
            for b in fib:
                for b2 in fib:
                    if b != b2 and self.target.entry(b, b2) != 0:
                        raise CartanError(f"fiber of {a!r} in {self.key} contains adjacent nodes {b!r}, {b2!r}")
        bad = folded_matrix_mismatch(self)
        if bad is not None:
            raise CartanError(f"folding {self.key} is inconsistent with the source matrix at {bad}")

    def fiber(self, a: Label) -> tuple:
        return self.fibers[self.source.index(a)][1]

    @property
    def gamma(self) -> dict:
        return dict(zip(self.source.labels, self.source.gamma))

    def preimage(self) -> dict:
        return {b: a for a, fib in self.fibers for b in fib}


def folded_matrix_mismatch(fold: FoldingDatum):
    """Check ``A[a][c] = (gamma_c / gamma_a) * sum_{d in fiber(c)} Ahat[b][d]`` for all b in fiber(a)."""
    src, tgt = fold.source, fold.target
    for a in src.labels:
        ga = src.gamma_of(a)
        for c in src.labels:
            gc = src.gamma_of(c)
            for b in fold.fiber(a):
                s = sum(tgt.entry(b, d) for d in fold.fiber(c))
                if Fraction(gc * s, ga) != src.entry(a, c):
                    return (a, c)
    return None


def _fold_classical(family: str, n: int, natural: bool):
    """Fibers for the classical foldings; returns (target name, fibers, gamma)."""
    if family == "C" and not natural:
        fibers = [(a, (a, 2 * n - a)) for a in range(1, n)] + [(n, (n,))]
        return f"A{2 * n - 1}", fibers, [1] * (n - 1) + [2]
    if family == "B" and not natural:
        fibers = [(a, (a,)) for a in range(1, n)] + [(n, (n, n + 1))]
        return f"D{n + 1}", fibers, [2] * (n - 1) + [1]
    if family == "B" and natural:
        fibers = [(a, (a, 2 * n - a)) for a in range(1, n)] + [(n, (n,))]
        return f"A{2 * n - 1}", fibers, [1] * n
    if family == "C" and natural:
        fibers = [(a, (a,)) for a in range(1, n)] + [(n, (n, n + 1))]
        return f"D{n + 1}", fibers, [1] * n
    if family == "F" and not natural:
        return "E6", [(1, (2,)), (2, (4,)), (3, (3, 5)), (4, (1, 6))], [2, 2, 1, 1]
    if family == "F" and natural:
        return "E6", [(1, (1, 6)), (2, (3, 5)), (3, (4,)), (4, (2,))], [1, 1, 1, 1]
    if family == "G" and not natural:
        return "D4", [(1, (1, 3, 4)), (2, (2,))], [1, 3]
    if family == "G" and natural:
        return "D4", [(1, (2,)), (2, (1, 3, 4))], [1, 1]
    raise CartanError(f"no classical folding for {family}{n}")


def _fold_affine(name: str):
    """Table-1 style affine foldings; returns (target name, fibers, gamma)."""
    m = _TYPE_RE.match(name)
    family, n, suffix, r, dagger = m.group(1), int(m.group(2)), m.group(3), m.group(4), bool(m.group(5))
    twisted = suffix != "~"
    if not twisted and family == "A" and n == 1:
        return "A3~", [(0, (0, 2)), (1, (1, 3))], [1, 1]
    if twisted and family == "A" and n == 2 and r == "2" and not dagger:
        return "D4~", [(0, (0, 1, 3, 4)), (1, (2,))], [1, 4]
    if (not twisted and family == "C") or (twisted and family == "A" and r == "2" and n % 2 == 0) or (
        twisted and family == "D" and r == "2"
    ):
        k = n if not twisted and family == "C" else (n // 2 if family == "A" else n - 1)
        if k < 2:
            raise CartanError(f"no Table 1 folding for {name}")
        fibers = [(0, (0,))] + [(a, (a, 2 * k - a)) for a in range(1, k)] + [(k, (k,))]
        if family == "C":
            gamma = [2] + [1] * (k - 1) + [2]
        elif family == "A" and dagger:
            gamma = [2] + [1] * k
        elif family == "A":
            gamma = [1] * k + [2]
        else:
            gamma = [1] * (k + 1)
        return f"A{2 * k - 1}~", fibers, gamma
    if (not twisted and family == "B") or (twisted and family == "A" and r == "2" and n % 2 == 1):
        k = n if family == "B" else (n + 1) // 2
        fibers = [(a, (a,)) for a in range(k)] + [(k, (k, k + 1))]
        gamma = [2] * k + [1] if family == "B" else [1] * (k + 1)
        return f"D{k + 1}~", fibers, gamma
    if (not twisted and family == "F") or (twisted and family == "E"):
        fibers = [(0, (0,)), (1, (2,)), (2, (4,)), (3, (3, 5)), (4, (1, 6))]
        gamma = [2, 2, 2, 1, 1] if family == "F" else [1] * 5
        return "E6~", fibers, gamma
    if not twisted and family == "G":
        return "D4~", [(0, (0,)), (1, (1, 3, 4)), (2, (2,))], [3, 1, 3]
    if twisted and family == "D" and r == "3":
        return "D4~", [(0, (0,)), (1, (2,)), (2, (1, 3, 4))], [1, 1, 1]
    raise CartanError(f"no Table 1 folding for {name}")


_DEFAULT_FOLDING_KEY: dict = {}


def _make_folding(key: str, source_name: str, target_name: str, fibers, gamma, delta=None) -> FoldingDatum:
    m = _TYPE_RE.match(source_name)
    family, n, suffix, r, dagger = m.group(1), int(m.group(2)), m.group(3), m.group(4), bool(m.group(5))
    lab, matrix = _named_matrix(family, n, suffix, r, dagger)
    source = CartanDatum(tuple(lab), matrix, tuple(gamma), source_name)
    target = build_cartan(target_name)
    return FoldingDatum(key, source, target, tuple((a, tuple(f)) for a, f in fibers), delta)


def folding(key: str) -> FoldingDatum:
    """Look up a folding by key, e.g. ``"C2->A3"``, ``"A2^2->D4~"``, ``"G2->D4:natural"``."""
    key = normalize_type_name(key)
    m = re.fullmatch(r"K(\d+),(\d+)", key)
    if m:
        return _bipartite_folding(int(m.group(1)), int(m.group(2)))
    src, sep, rest = key.partition("->")
    if not sep:
        raise CartanError(f"folding key must look like 'C2->A3', got {key!r}; supported: {supported_foldings()}")
    tgt, _, variant = rest.partition(":")
    src = canonical_name(src)
    for fold_key in _candidate_keys(src):
        fold = _build_folding(fold_key)
        if fold is not None and fold.key == f"{src}->{canonical_name(tgt)}" + (f":{variant}" if variant else ""):
            return fold
    raise CartanError(f"unsupported folding {key!r}; supported: {supported_foldings()}")


def _candidate_keys(src: str):
    return [src, src + ":natural", src + ":alt"]


def _build_folding(spec: str):
    src, _, variant = spec.partition(":")
    m = _TYPE_RE.match(src)
    if not m:
        return None
    family, n, suffix = m.group(1), int(m.group(2)), m.group(3)
    try:
        if not suffix:
            tgt, fibers, gamma = _fold_classical(family, n, natural=(variant == "natural"))
            if variant not in ("", "natural"):
                return None
            delta = None
        else:
            if variant == "alt" and src == "A2^2":
                return _make_folding("A2^2->D4~:alt", src, "D4~", [(0, (2,)), (1, (0, 1, 3, 4))], [1, 1],
                                     delta="c_phi(0) gamma_phi(0)")
            if variant:
                return None
            tgt, fibers, gamma = _fold_affine(src)
            delta = "c_0 gamma_0"
    except CartanError:
        return None
    key = f"{src}->{tgt}" + (f":{variant}" if variant else "")
    return _make_folding(key, src, tgt, fibers, gamma, delta)


def _bipartite_folding(x: int, y: int) -> FoldingDatum:
    """Fold the complete bipartite graph onto ``[[2,-x],[-y,2]]`` with gamma = (1, 1)."""
    if x < 1 or y < 1:
        raise CartanError("bipartite folding needs x, y >= 1")
    fib1 = tuple(range(1, y + 1))
    fib2 = tuple(range(y + 1, x + y + 1))
    n = x + y
    tmat = [[2 if a == b else 0 for b in range(n)] for a in range(n)]
    for a in fib1:
        for b in fib2:
            tmat[a - 1][b - 1] = tmat[b - 1][a - 1] = -1
    target = CartanDatum(tuple(range(1, n + 1)), tmat, (1,) * n, f"K{y},{x}")
    source = CartanDatum((1, 2), [[2, -x], [-y, 2]], (1, 1), "")
    return FoldingDatum(f"K{x},{y}", source, target, ((1, fib1), (2, fib2)))


def folding_for(source) -> FoldingDatum:
    """Default folding for a type name, or for a rank-2 datum/matrix via K_{x,y}."""
    if isinstance(source, CartanDatum) and not source.name:
        source = source.matrix
    if not isinstance(source, str):
        mat = [list(r) for r in source]
        if len(mat) == 2:
            fold = _bipartite_folding(-mat[0][1], -mat[1][0])
            return fold
        raise CartanError(f"no folding registered for matrix {mat}; supported: {supported_foldings()}")
    name = canonical_name(normalize_type_name(source.name if isinstance(source, CartanDatum) else source))
    if name in _DEFAULT_FOLDING_KEY:
        return _DEFAULT_FOLDING_KEY[name]
    fold = _build_folding(name)
    if fold is None:
        raise CartanError(f"no folding registered for {name}; supported: {supported_foldings()}")
    _DEFAULT_FOLDING_KEY[name] = fold
    return fold


def supported_foldings() -> list:
    return [
        "C{n}->A{2n-1}", "B{n}->D{n+1}", "F4->E6", "G2->D4",
        "B{n}->A{2n-1}:natural", "C{n}->D{n+1}:natural", "F4->E6:natural", "G2->D4:natural",
        "C{n}~->A{2n-1}~", "B{n}~->D{n+1}~", "F4~->E6~", "G2~->D4~",
        "A{2n}^2->A{2n-1}~", "A{2n}^2*->A{2n-1}~", "D{n+1}^2->A{2n-1}~", "A{2n-1}^2->D{n+1}~",
        "E6^2->E6~", "D4^3->D4~", "A1~->A3~", "A2^2->D4~", "A2^2->D4~:alt", "K{x},{y}",
    ]


# ---------------------------------------------------------------------------
# gamma from the arrow rules (cross-check for the stored tables)
# ---------------------------------------------------------------------------


def arrows(datum: CartanDatum) -> list:
    """Multiple bonds as (tail, head) with the arrow pointing at the short node."""
    out = []
    n = datum.rank
    for a in range(n):
        for b in range(a + 1, n):
            if datum.matrix[a][b] * datum.matrix[b][a] > 1:
                head = a if abs(datum.matrix[a][b]) > 1 else b
                tail = b if head == a else a
                out.append((datum.labels[tail], datum.labels[head]))
    return out


def gamma_from_arrow_rules(fold: FoldingDatum) -> tuple:
    """Recompute gamma for one-arrow and two-arrow affine diagrams from the arrow rules."""
    src = fold.source
    arr = arrows(src)
    order = max(len(f) for _, f in fold.fibers)
    if len(arr) == 1:
        tail, head = arr[0]
        comp = _component_without_edge(src, 0, tail, head)
        if head in comp:
            return (1,) * src.rank
        return tuple(order if a in comp else 1 for a in src.labels)
    if len(arr) == 2:
        ends = {0, max(a for a in src.labels if isinstance(a, int))}
        gamma = []
        for a in src.labels:
            if a not in ends:
                gamma.append(1)
                continue
            (tail, head), = [e for e in arr if a in e]
            gamma.append(2 if head != a else 1)
        return tuple(gamma)
    raise CartanError(f"arrow rules need one or two arrows, {src.name} has {len(arr)}")


def _component_without_edge(datum: CartanDatum, start, u, v) -> set:
    seen = {start}
    stack = [start]
    while stack:
        a = stack.pop()
        for b in datum.labels:
            if b in seen or b == a or datum.entry(a, b) == 0:
                continue
            if {a, b} == {u, v}:
                continue
            seen.add(b)
            stack.append(b)
    return seen
