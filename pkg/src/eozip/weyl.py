"""Type C Weyl group as signed permutations and its Siegel parabolic S_g.

Conventions:

* ``w.images[i-1] = w(i)``; ``w(-i) = -w(i)``; ``compose(a, b) = a o b``.
* Simple reflections: ``s0`` negates the first letter, ``s_i`` swaps letters
  ``i`` and ``i+1``.
* ``W_P = S_g`` acts on the left (it relabels absolute values), so a right
  coset ``W_P w`` is determined by which positions carry a minus sign.
* The minimal representative with negative positions ``j_1 < ... < j_k`` has
  length ``j_1 + ... + j_k``; its strict partition is those positions in
  decreasing order.  Codimension of a stratum is the sum of its parts.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterator

from .poly_core import Polynomial


class GenusMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SignedPermutation:
    images: tuple[int, ...]

    def __post_init__(self):
        g = len(self.images)
        if sorted(abs(x) for x in self.images) != list(range(1, g + 1)):
            raise ValueError(f"{self.images} is not a signed permutation")

    @property
    def genus(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        v = self.images[abs(i) - 1]
        return v if i > 0 else -v

    def __str__(self) -> str:
        return "[" + ",".join(str(x) for x in self.images) + "]"

    @classmethod
    def identity(cls, g: int) -> "SignedPermutation":
        return cls(tuple(range(1, g + 1)))

    @classmethod
    def longest(cls, g: int) -> "SignedPermutation":
        return cls(tuple(-i for i in range(1, g + 1)))

    def negative_positions(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, x in enumerate(self.images) if x < 0)

    def to_json(self) -> list[int]:
        return list(self.images)


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    if a.genus != b.genus:
        raise GenusMismatch(f"genus {a.genus} vs {b.genus}")
    return SignedPermutation(tuple(a(x) for x in b.images))


def inverse(w: SignedPermutation) -> SignedPermutation:
    out = [0] * w.genus
    for i, x in enumerate(w.images, start=1):
        out[abs(x) - 1] = i if x > 0 else -i
    return SignedPermutation(tuple(out))


def simple_reflections(g: int) -> list[SignedPermutation]:
    """``[s0, s1, ..., s_{g-1}]``."""
    s0 = SignedPermutation((-1,) + tuple(range(2, g + 1)))
    out = [s0]
    for i in range(1, g):
        im = list(range(1, g + 1))
        im[i - 1], im[i] = im[i], im[i - 1]
        out.append(SignedPermutation(tuple(im)))
    return out


def length(w: SignedPermutation) -> int:
    """Coxeter length: inversions minus the sum of the negative values."""
    v = w.images
    inv = sum(1 for i in range(len(v)) for j in range(i + 1, len(v)) if v[i] > v[j])
    return inv - sum(x for x in v if x < 0)


def all_elements(g: int) -> Iterator[SignedPermutation]:
    for perm in itertools.permutations(range(1, g + 1)):
        for signs in itertools.product((1, -1), repeat=g):
            yield SignedPermutation(tuple(s * x for s, x in zip(signs, perm)))


def bfs_lengths(g: int) -> dict[SignedPermutation, int]:
    """Word lengths by breadth-first search in the Cayley graph."""
    gens = simple_reflections(g)
    start = SignedPermutation.identity(g)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for s in gens:
            x = compose(w, s)
            if x not in dist:
                dist[x] = dist[w] + 1
                queue.append(x)
    return dist


def group_order(g: int) -> int:
    out = 2**g
    for i in range(2, g + 1):
        out *= i
    return out


@dataclass(frozen=True, order=True)
class EOType:
    """A strict partition with parts in ``{1..g}``."""

    genus: int
    parts: tuple[int, ...]

    def __post_init__(self):
        p = self.parts
        if any(not 1 <= x <= self.genus for x in p) or any(p[i] <= p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"{list(p)} is not a strict partition inside the genus-{self.genus} staircase")

    @property
    def codimension(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "[" + ",".join(str(x) for x in self.parts) + "]"

    def to_json(self) -> dict:
        return {"g": self.genus, "parts": list(self.parts)}

    @classmethod
    def from_json(cls, obj) -> "EOType":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["g"]), tuple(int(x) for x in obj["parts"]))

    @classmethod
    def parse(cls, g: int, text: str) -> "EOType":
        body = text.strip().strip("[]").strip()
        parts = tuple(int(x) for x in body.split(",")) if body else ()
        return cls(g, parts)

    @classmethod
    def all(cls, g: int) -> list["EOType"]:
        out = []
        for k in range(g + 1):
            for c in itertools.combinations(range(g, 0, -1), k):
                out.append(cls(g, c))
        return sorted(out, key=lambda t: (t.codimension, t.parts))


def coset_key(w: SignedPermutation) -> tuple[int, ...]:
    """Invariant of the right coset ``W_P w``."""
    return w.negative_positions()


def coset_rep(g: int, negative_positions: tuple[int, ...]) -> SignedPermutation:
    """Minimal-length element with the given negative positions."""
    neg = sorted(negative_positions)
    k = len(neg)
    images = [0] * g
    for m, pos in enumerate(neg):
        images[pos - 1] = -(k - m)
    nxt = k + 1
    for i in range(g):
        if images[i] == 0:
            images[i] = nxt
            nxt += 1
    return SignedPermutation(tuple(images))


def eo_type_of_rep(w: SignedPermutation) -> EOType:
    return EOType(w.genus, tuple(sorted(w.negative_positions(), reverse=True)))


def rep_of_eo_type(t: EOType) -> SignedPermutation:
    return coset_rep(t.genus, t.parts)


@dataclass(frozen=True)
class CosetRow:
    rep: SignedPermutation
    length: int
    eo_type: EOType


@dataclass(frozen=True)
class CosetTable:
    genus: int
    rows: tuple[CosetRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def lengths(self) -> list[int]:
        return [r.length for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rep", "length", "partition"])
        for r in self.rows:
            w.writerow([str(r.rep), r.length, str(r.eo_type)])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "g": self.genus,
            "count": len(self.rows),
            "reps": [
                {"rep": r.rep.to_json(), "length": r.length, "partition": list(r.eo_type.parts)}
                for r in self.rows
            ],
        }


@lru_cache(maxsize=None)
def min_coset_reps(g: int) -> CosetTable:
    if g < 1:
        raise ValueError("need g >= 1")
    rows = []
    for k in range(g + 1):
        for neg in itertools.combinations(range(1, g + 1), k):
            w = coset_rep(g, neg)
            rows.append(CosetRow(w, length(w), eo_type_of_rep(w)))
    rows.sort(key=lambda r: (r.length, r.eo_type.parts))
    for r in rows:
        if r.length != r.eo_type.codimension:
            raise AssertionError(f"length/codimension mismatch at {r.rep}")
    return CosetTable(g, tuple(rows))


def min_coset_reps_brute(g: int) -> dict[tuple[int, ...], list[SignedPermutation]]:
    """Minimal-length elements of every coset, by enumerating all of W."""
    best: dict[tuple[int, ...], tuple[int, list[SignedPermutation]]] = {}
    for w in all_elements(g):
        key = coset_key(w)
        ln = length(w)
        cur = best.get(key)
        if cur is None or ln < cur[0]:
            best[key] = (ln, [w])
        elif ln == cur[0]:
            cur[1].append(w)
    return {k: v[1] for k, v in best.items()}


def poincare_WP(g: int) -> Polynomial:
    """Length generating polynomial of the minimal coset representatives.

    Raises if it fails to equal the product of ``(1 + t^i)``.
    """
    hist: dict[int, int] = {}
    for row in min_coset_reps(g).rows:
        hist[row.length] = hist.get(row.length, 0) + 1
    poly = Polynomial({(d,): c for d, c in hist.items()}, (1,), var="t")
    expected = Polynomial.constant(1, (1,), var="t")
    for i in range(1, g + 1):
        expected = expected * (Polynomial.monomial((i,), (1,), var="t") + 1)
    if poly != expected:
        raise AssertionError(f"coset Poincare polynomial {poly} != {expected}")
    return poly


def coefficients(p: Polynomial) -> list[int]:
    d = p.degree()
    return [int(p.coefficient((i,))) for i in range(d + 1)]


# Degeneration embedding of strata indices.


def iota_conjectured(g: int, r: int, t: EOType) -> EOType:
    """CONJECTURE: parts are carried over unchanged from genus g-r to genus g.

    Checked against the finite-field table wherever that table exists; used
    on its own only for genera the table does not cover.
    """
    _check_iota_args(g, r, t)
    return EOType(g, t.parts)


def _check_iota_args(g: int, r: int, t: EOType) -> None:
    if not 1 <= r <= g - 1:
        raise ValueError(f"r must satisfy 1 <= r <= g-1, got r={r}, g={g}")
    if t.genus != g - r:
        raise ValueError(f"type {t} has genus {t.genus}, expected {g - r}")


@lru_cache(maxsize=None)
def iota_table() -> dict[tuple[int, int], dict[tuple[int, ...], tuple[int, ...]]]:
    """Shipped table, derived by :func:`eozip.zip_oracle.derive_iota`."""
    raw = json.loads(resources.files("eozip.data").joinpath("iota_table.json").read_text())
    out = {}
    for entry in raw["tables"]:
        out[(entry["g"], entry["r"])] = {tuple(a): tuple(b) for a, b in entry["map"]}
    return out


def iota_embedding(g: int, r: int, t: EOType, *, allow_conjecture: bool = True) -> EOType:
    _check_iota_args(g, r, t)
    table = iota_table().get((g, r))
    if table is not None:
        return EOType(g, table[t.parts])
    if not allow_conjecture:
        raise LookupError(f"no verified iota table for g={g}, r={r}")
    return iota_conjectured(g, r, t)


def iota_is_verified(g: int, r: int) -> bool:
    return (g, r) in iota_table()
