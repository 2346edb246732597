"""Per-degree linear algebra for quotients of weighted polynomial rings.

Degree ``d`` of ``A/I`` is built from the already known lower degrees.  Every
degree-``d`` class is ``u_j * b`` with ``b`` a basis monomial of degree
``d - w_j``, so the space is spanned by tagged pairs ``(j, b)``.  The only
relations among them are

* the Koszul moves ``(j, u_k b) - (k, u_j b)`` for ``b`` a basis monomial of
  degree ``d - w_j - w_k``, each side rewritten in normal form, and
* the relation generators of degree ``d``, lifted to tagged pairs.

Row-reducing with columns in decreasing monomial order leaves exactly the
standard monomials of ``I`` as free columns, which is the same basis the
Macaulay-matrix route (:func:`macaulay_basis`) produces.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Sequence

from .poly_core import (
    ArityError,
    Monomial,
    Polynomial,
    monomial_degree,
    monomials_of_degree,
    rref_rows,
)

Vector = dict[int, Fraction]


class NotFiniteError(RuntimeError):
    """The quotient did not vanish within the degree cap."""


class DegreeSlice:
    """Basis of one graded piece plus the multiplication-by-generator maps."""

    __slots__ = ("degree", "basis", "index", "tag_classes")

    def __init__(self, degree: int, basis: list[Monomial], tag_classes: dict[tuple[int, Monomial], Vector]):
        self.degree = degree
        self.basis = basis
        self.index = {m: i for i, m in enumerate(basis)}
        # (j, b) -> coordinates of u_j * b in this slice; j is 0-based
        self.tag_classes = tag_classes

    def __len__(self) -> int:
        return len(self.basis)


class GradedQuotient:
    """``Q[u_1..u_n] / (relations)`` with homogeneous relations.

    Degrees are computed lazily up to ``degree_cap``.  The quotient is known to
    be finite once ``max(weights)`` consecutive graded pieces are zero: every
    monomial of larger degree is then divisible by a monomial that already
    vanishes.
    """

    def __init__(self, weights: Sequence[int], relations: Sequence[Polynomial], degree_cap: int, var: str = "u"):
        self.weights = tuple(weights)
        self.var = var
        self.degree_cap = degree_cap
        self.relations_by_degree: dict[int, list[Polynomial]] = {}
        for r in relations:
            if r.weights != self.weights:
                raise ArityError("relation does not live in this ring")
            if r.is_zero():
                continue
            if not r.is_homogeneous():
                raise ValueError(f"relation {r} is not homogeneous")
            d = r.degree()
            if d == 0:
                raise ValueError("a nonzero constant relation kills the ring")
            self.relations_by_degree.setdefault(d, []).append(r)
        self._slices: list[DegreeSlice] = [DegreeSlice(0, [(0,) * len(self.weights)], {})]
        self._nf_cache: dict[Monomial, Vector] = {self._slices[0].basis[0]: {0: Fraction(1)}}
        self._lock = threading.RLock()
        self._top: int | None = None

    # building

    def _build_next(self) -> None:
        d = len(self._slices)
        tags: list[tuple[int, Monomial]] = []
        for j, w in enumerate(self.weights):
            if d - w >= 0:
                for b in self._slices[d - w].basis:
                    tags.append((j, b))
        # column order: decreasing product monomial, then generator index
        def prod(tag):
            j, b = tag
            m = list(b)
            m[j] += 1
            return tuple(m)

        tags.sort(key=lambda t: (prod(t), -t[0]), reverse=True)
        col = {t: i for i, t in enumerate(tags)}

        rows: list[list[Fraction]] = []

        def embed(j: int, vec: Vector, lower: DegreeSlice, coeff: Fraction, row: list[Fraction]) -> None:
            for i, c in vec.items():
                row[col[(j, lower.basis[i])]] += coeff * c

        n = len(self.weights)
        for j in range(n):
            for k in range(j + 1, n):
                e = d - self.weights[j] - self.weights[k]
                if e < 0:
                    continue
                for b in self._slices[e].basis:
                    row = [Fraction(0)] * len(tags)
                    # (j, u_k b) - (k, u_j b)
                    sj = self._slices[d - self.weights[j]]
                    sk = self._slices[d - self.weights[k]]
                    embed(j, sj.tag_classes[(k, b)], sj, Fraction(1), row)
                    embed(k, sk.tag_classes[(j, b)], sk, Fraction(-1), row)
                    if any(row):
                        rows.append(row)
        for r in self.relations_by_degree.get(d, ()):
            row = [Fraction(0)] * len(tags)
            for m, c in r.term_map().items():
                j = max(i for i, e in enumerate(m) if e)
                y = list(m)
                y[j] -= 1
                lower = self._slices[d - self.weights[j]]
                embed(j, self._nf_vector(tuple(y)), lower, c, row)
            if any(row):
                rows.append(row)

        reduced, pivots = rref_rows(rows, len(tags)) if rows else ([], [])
        pivot_set = set(pivots)
        free = [c for c in range(len(tags)) if c not in pivot_set]
        basis = [prod(tags[c]) for c in free]
        if len(set(basis)) != len(basis):
            raise AssertionError(f"degree {d}: two free columns share a monomial")
        free_pos = {c: i for i, c in enumerate(free)}
        tag_classes: dict[tuple[int, Monomial], Vector] = {}
        for c in free:
            tag_classes[tags[c]] = {free_pos[c]: Fraction(1)}
        for row, c in zip(reduced, pivots):
            tag_classes[tags[c]] = {free_pos[f]: -row[f] for f in free if row[f] != 0}
        self._slices.append(DegreeSlice(d, basis, tag_classes))

    def _ensure(self, d: int) -> None:
        if d < len(self._slices):
            return
        with self._lock:
            while len(self._slices) <= d:
                self._build_next()

    def _nf_vector(self, m: Monomial) -> Vector:
        """Coordinates of the class of monomial ``m`` in its degree's basis."""
        hit = self._nf_cache.get(m)
        if hit is not None:
            return hit
        d = monomial_degree(m, self.weights)
        self._ensure(d)
        j = max(i for i, e in enumerate(m) if e)
        y = list(m)
        y[j] -= 1
        y = tuple(y)
        lower = self._slices[d - self.weights[j]]
        here = self._slices[d]
        out: Vector = {}
        for i, c in self._nf_vector(y).items():
            for k, v in here.tag_classes[(j, lower.basis[i])].items():
                out[k] = out.get(k, 0) + c * v
        out = {k: v for k, v in out.items() if v != 0}
        self._nf_cache[m] = out
        return out

    # public surface

    def top_degree(self) -> int:
        """Largest degree with a nonzero piece; raises if not finite by the cap."""
        if self._top is not None:
            return self._top
        window = max(self.weights)
        zeros = 0
        d = 0
        while d <= self.degree_cap:
            self._ensure(d)
            if self._slices[d].basis:
                zeros = 0
            else:
                zeros += 1
                if zeros == window:
                    self._top = d - window
                    return self._top
            d += 1
        raise NotFiniteError(f"quotient has nonzero pieces up to the cap {self.degree_cap}")

    def is_finite(self) -> bool:
        try:
            self.top_degree()
        except NotFiniteError:
            return False
        return True

    def slice(self, d: int) -> DegreeSlice:
        if d < 0:
            return DegreeSlice(d, [], {})
        if self._top is not None and d > self._top:
            return DegreeSlice(d, [], {})
        self._ensure(d)
        return self._slices[d]

    def basis(self, d: int) -> list[Monomial]:
        return list(self.slice(d).basis)

    def hilbert_function(self, d_max: int | None = None) -> list[int]:
        """Dimensions of the graded pieces 0..d_max (default: up to the top degree)."""
        if d_max is None:
            d_max = self.top_degree()
        return [len(self.slice(d)) for d in range(d_max + 1)]

    def reduce_monomial(self, m: Monomial) -> Polynomial:
        m = tuple(m)
        d = monomial_degree(m, self.weights)
        if self._top is not None and d > self._top:
            return Polynomial.zero(self.weights, self.var)
        sl = self.slice(d)
        vec = self._nf_vector(m)
        return Polynomial({sl.basis[i]: c for i, c in vec.items()}, self.weights, self.var)

    def normal_form(self, p: Polynomial) -> Polynomial:
        if p.weights != self.weights:
            raise ArityError(f"polynomial weights {p.weights} != ring weights {self.weights}")
        acc: dict[Monomial, Fraction] = {}
        for m, c in p.term_map().items():
            for bm, v in self.reduce_monomial(m).term_map().items():
                acc[bm] = acc.get(bm, 0) + c * v
        return Polynomial(acc, self.weights, self.var)


def macaulay_basis(weights: Sequence[int], relations: Sequence[Polynomial], d: int) -> tuple[list[Monomial], dict[Monomial, Polynomial]]:
    """Standard monomials of degree ``d`` via the full Macaulay matrix.

    Rows are ``m * r`` for every relation ``r`` and every monomial ``m`` of the
    complementary degree; columns are all degree-``d`` monomials in decreasing
    order.  Returns the non-pivot monomials and the normal form of each
    monomial.  Cost grows with the number of monomials; meant as a cross-check.
    """
    weights = tuple(weights)
    cols = monomials_of_degree(weights, d)
    idx = {m: i for i, m in enumerate(cols)}
    rows = []
    for r in relations:
        rd = r.degree()
        if rd > d or r.is_zero():
            continue
        for m in monomials_of_degree(weights, d - rd):
            row = [Fraction(0)] * len(cols)
            for rm, c in r.term_map().items():
                row[idx[tuple(a + b for a, b in zip(rm, m))]] += c
            rows.append(row)
    reduced, pivots = rref_rows(rows, len(cols)) if rows else ([], [])
    pset = set(pivots)
    basis = [cols[c] for c in range(len(cols)) if c not in pset]
    nf: dict[Monomial, Polynomial] = {}
    for c, m in enumerate(cols):
        if c not in pset:
            nf[m] = Polynomial.monomial(m, weights)
    for row, c in zip(reduced, pivots):
        nf[cols[c]] = Polynomial(
            {cols[f]: -row[f] for f in range(len(cols)) if f not in pset and row[f] != 0},
            weights,
        )
    return basis, nf
