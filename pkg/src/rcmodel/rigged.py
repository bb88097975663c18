"""Rigged partitions, rigged configurations, vacancy numbers and serialization."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .cartan import CartanDatum, MultiplicityArray, Weight, build_cartan, label_sort_key, pairing


class Model(enum.Enum):
    """Whether lowering operators are restricted to valid configurations."""

    HIGHEST_WEIGHT = "highest_weight"
    INFINITY = "infinity"


HighestWeightModel = Model.HIGHEST_WEIGHT
InfinityModel = Model.INFINITY


def _string_key(s):
    return (-s[0], -s[1])


@dataclass(frozen=True)
class RiggedPartition:
    """Multiset of ``(length, rigging)`` strings, kept sorted by decreasing (length, rigging)."""

    strings: tuple = ()

    def __post_init__(self):
        strings = tuple(sorted(((int(i), int(x)) for i, x in self.strings), key=_string_key))
        for i, _ in strings:
            if i < 1:
                raise ValueError(f"string lengths must be positive, got {i}")
        object.__setattr__(self, "strings", strings)

    def __len__(self):
        return len(self.strings)

    def __iter__(self):
        return iter(self.strings)

    def __bool__(self):
        return bool(self.strings)

    @property
    def size(self) -> int:
        return sum(i for i, _ in self.strings)

    def multiplicity(self, i: int) -> int:
        return sum(1 for j, _ in self.strings if j == i)

    def multiplicities(self) -> dict:
        out: dict = {}
        for i, _ in self.strings:
            out[i] = out.get(i, 0) + 1
        return out

    def lengths(self) -> tuple:
        return tuple(i for i, _ in self.strings)

    def riggings(self) -> tuple:
        return tuple(x for _, x in self.strings)

    def rigging_sets(self) -> dict:
        """Per-length multiset view ``i -> sorted riggings``."""
        out: dict = {}
        for i, x in self.strings:
            out.setdefault(i, []).append(x)
        return {i: tuple(sorted(xs)) for i, xs in out.items()}

    def min_rigging(self):
        return min((x for _, x in self.strings), default=None)


EMPTY_PARTITION = RiggedPartition()


@dataclass(frozen=True)
class RiggedConfiguration:
    """One rigged partition per node of ``datum`` (aligned with ``datum.labels``)."""

    datum: CartanDatum
    parts: tuple
    L: MultiplicityArray = field(default_factory=MultiplicityArray)
    mode: Model = Model.INFINITY
    _vac: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        parts = tuple(p if isinstance(p, RiggedPartition) else RiggedPartition(p) for p in self.parts)
        if len(parts) != self.datum.rank:
            raise ValueError(f"expected {self.datum.rank} parts, got {len(parts)}")
        for (a, _), _m in self.L.items():
            self.datum.index(a)
        object.__setattr__(self, "parts", parts)

    @classmethod
    def empty(cls, datum: CartanDatum, L: MultiplicityArray | None = None, mode: Model = Model.INFINITY):
        return cls(datum, (EMPTY_PARTITION,) * datum.rank, L or MultiplicityArray(), mode)

    @classmethod
    def from_parts(cls, datum: CartanDatum, parts: Mapping, L=None, mode: Model = Model.INFINITY):
        """Build from ``{label: [(length, rigging), ...]}``; missing labels are empty."""
        for a in parts:
            datum.index(a)
        seq = tuple(RiggedPartition(tuple(parts.get(a, ()))) for a in datum.labels)
        if L is not None and not isinstance(L, MultiplicityArray):
            L = MultiplicityArray(L)
        return cls(datum, seq, L or MultiplicityArray(), mode)

    @property
    def lambda_shift(self) -> Weight:
        return self.L.weight()

    def part(self, a) -> RiggedPartition:
        return self.parts[self.datum.index(a)]

    def replace_parts(self, parts) -> "RiggedConfiguration":
        return RiggedConfiguration(self.datum, tuple(parts), self.L, self.mode)

    def with_model(self, L: MultiplicityArray, mode: Model) -> "RiggedConfiguration":
        return RiggedConfiguration(self.datum, self.parts, L, mode)

    def is_empty(self) -> bool:
        return not any(self.parts)

    def __str__(self):
        return horizontal_display(self)


# ---------------------------------------------------------------------------
# vacancy numbers
# ---------------------------------------------------------------------------


def _vacancy_at(rc: RiggedConfiguration, k: int, i: int) -> int:
    datum = rc.datum
    a = datum.labels[k]
    total = 0
    for j, m in rc.L.node(a):
        total += min(i, j) * m
    ga = datum.gamma[k]
    frac = Fraction(0)
    for b, Aab in datum._neighbors[k]:
        part = rc.parts[b]
        if not part:
            continue
        gb = datum.gamma[b]
        s = 0
        for j, _x in part.strings:
            s += min(ga * i, gb * j)
        if gb == 1:
            total -= Aab * s
        else:
            frac -= Fraction(Aab * s, gb)
    if frac.denominator != 1:
        raise ArithmeticError(
            f"non-integral vacancy number at node {a!r}, length {i}: the gamma factors {datum.gamma} "
            f"are inconsistent with the Cartan matrix"
        )
    return total + int(frac)


def vacancy(rc: RiggedConfiguration, a, i: int) -> int:
    """Vacancy number ``p_i^(a)``; ``i = 0`` gives 0."""
    k = rc.datum.index(a)
    if i < 0:
        raise ValueError("vacancy index must be nonnegative")
    if i == 0:
        return 0
    key = (k, i)
    cache = rc._vac
    v = cache.get(key)
    if v is None:
        v = _vacancy_at(rc, k, i)
        cache[key] = v
    return v


def vacancy_at_infinity(rc: RiggedConfiguration, a) -> int:
    """Large-length limit of the vacancy numbers, equal to ``<h_a, wt>``."""
    return pairing(rc.datum, a, weight(rc))


def colabel(rc: RiggedConfiguration, a, string) -> int:
    i, x = string
    return vacancy(rc, a, i) - x


def is_valid(rc: RiggedConfiguration) -> bool:
    for k, part in enumerate(rc.parts):
        a = rc.datum.labels[k]
        for i, x in part.strings:
            if x > vacancy(rc, a, i):
                return False
    return True


def is_highest_weight(rc: RiggedConfiguration) -> bool:
    return all(x >= 0 for part in rc.parts for _, x in part.strings)


def weight(rc: RiggedConfiguration) -> Weight:
    """``sum i L_i^(a) Lambda_a - sum |nu^(a)| alpha_a``."""
    return Weight(
        [(a, i * m) for (a, i), m in rc.L.items()],
        [(a, -p.size) for a, p in zip(rc.datum.labels, rc.parts)],
    )


# ---------------------------------------------------------------------------
# display
# ---------------------------------------------------------------------------


def _part_rows(rc, a, part) -> list:
    if not part:
        return ["(/)"]
    return [f"{vacancy(rc, a, i)}{'[ ]' * i}{x}" for i, x in part.strings]


def horizontal_display(rc: RiggedConfiguration) -> str:
    """Side-by-side rows ``vacancy[ ][ ]rigging``, empty parts as ``(/)``."""
    cols = [_part_rows(rc, a, p) for a, p in zip(rc.datum.labels, rc.parts)]
    if not cols:
        return ""
    height = max(len(c) for c in cols)
    widths = [max(len(r) for r in c) for c in cols]
    lines = []
    for r in range(height):
        cells = [(c[r] if r < len(c) else "").ljust(w) for c, w in zip(cols, widths)]
        lines.append("   ".join(cells).rstrip())
    return "\n".join(lines)


def compact_label(rc: RiggedConfiguration) -> str:
    """Single-line rendering with parts separated by ``|``."""
    pieces = []
    for a, p in zip(rc.datum.labels, rc.parts):
        pieces.append(" ".join(_part_rows(rc, a, p)))
    return " | ".join(pieces)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


class DecodeError(ValueError):
    pass


def encode(rc: RiggedConfiguration) -> dict:
    parts = {}
    for a, p in zip(rc.datum.labels, rc.parts):
        if p:
            parts[str(a)] = [[i, x] for i, x in p.strings]
    lam = {str(a): c for a, c in sorted(rc.lambda_shift.lambda_part.items(), key=lambda t: label_sort_key(t[0]))}
    return {
        "parts": parts,
        "L": [[a, i, m] for (a, i), m in rc.L.items()],
        "lambda": lam,
        "mode": rc.mode.value,
    }


def dumps(rc: RiggedConfiguration) -> str:
    return json.dumps(encode(rc), separators=(",", ":"))


def _label_lookup(datum: CartanDatum) -> dict:
    return {str(a): a for a in datum.labels}


def decode(doc, datum: CartanDatum, L: MultiplicityArray | None = None, lam: Weight | None = None,
           mode: Model | None = None) -> RiggedConfiguration:
    """Inverse of :func:`encode`.  Explicit ``L``/``mode`` override the document."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or "parts" not in doc:
        raise DecodeError("document must be an object with a 'parts' entry")
    lookup = _label_lookup(datum)
    raw_parts = doc["parts"]
    if not isinstance(raw_parts, dict):
        raise DecodeError("'parts' must map labels to string lists")
    parts = {}
    for key, strings in raw_parts.items():
        if key not in lookup:
            raise DecodeError(f"unknown label {key!r}")
        if not isinstance(strings, list):
            raise DecodeError(f"part {key!r} must be a list of [length, rigging] pairs")
        checked = []
        for s in strings:
            if not (isinstance(s, list) and len(s) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in s)):
                raise DecodeError(f"malformed string {s!r} in part {key!r}")
            if s[0] < 1:
                raise DecodeError(f"string length must be positive, got {s[0]} in part {key!r}")
            checked.append((s[0], s[1]))
        parts[lookup[key]] = checked
    if L is None:
        entries = []
        for item in doc.get("L", []):
            if not (isinstance(item, list) and len(item) == 3):
                raise DecodeError(f"malformed L entry {item!r}")
            a, i, m = item
            if str(a) not in lookup:
                raise DecodeError(f"unknown label {a!r} in L")
            if not isinstance(i, int) or i < 1 or not isinstance(m, int) or m < 0:
                raise DecodeError(f"malformed L entry {item!r}")
            entries.append(((lookup[str(a)], i), m))
        L = MultiplicityArray(entries)
    elif not isinstance(L, MultiplicityArray):
        L = MultiplicityArray(L)
    if lam is not None:
        # explicit weight with no explicit multiplicities: single-column choice
        if not L:
            L = MultiplicityArray.from_weight(datum, lam)
        elif L.weight() != lam:
            raise DecodeError("lambda does not match the multiplicity array")
    elif "lambda" in doc:
        raw = doc["lambda"]
        if not isinstance(raw, dict) or any(str(k) not in lookup for k in raw):
            raise DecodeError("'lambda' must map known labels to integers")
        if Weight({lookup[str(k)]: v for k, v in raw.items()}) != L.weight():
            raise DecodeError("'lambda' does not match 'L'")
    if mode is None:
        try:
            mode = Model(doc.get("mode", Model.INFINITY.value))
        except ValueError:
            raise DecodeError(f"unknown mode {doc.get('mode')!r}") from None
    return RiggedConfiguration.from_parts(datum, parts, L, mode)


def loads(text: str, datum: CartanDatum, **kw) -> RiggedConfiguration:
    return decode(json.loads(text), datum, **kw)


def highest_weight_empty(datum, lam: Weight) -> RiggedConfiguration:
    """The empty element of RC(lam) with the single-column multiplicity array."""
    datum = build_cartan(datum)
    return RiggedConfiguration.empty(datum, MultiplicityArray.from_weight(datum, lam), Model.HIGHEST_WEIGHT)


def infinity_empty(datum) -> RiggedConfiguration:
    datum = build_cartan(datum)
    return RiggedConfiguration.empty(datum)


def configuration_identity_holds(rc: RiggedConfiguration) -> bool:
    """Check the weight identity by recomputing both sides from scratch."""
    lhs = Weight(
        [(a, i * m) for (a, i), m in rc.L.items()],
        [(a, -sum(i * mult for i, mult in p.multiplicities().items())) for a, p in zip(rc.datum.labels, rc.parts)],
    )
    return lhs == weight(rc)


def all_strings(rc: RiggedConfiguration) -> Iterable:
    for a, p in zip(rc.datum.labels, rc.parts):
        for s in p.strings:
            yield a, s
