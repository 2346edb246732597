"""Exact rational arithmetic: sparse weighted-graded polynomials and row reduction.

Coefficients are :class:`fractions.Fraction`, which is always stored in lowest
terms with a positive denominator, so nothing here ever rounds.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


class ArityError(ValueError):
    """Raised when polynomials over different generator sets are combined."""


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass an int, str or Fraction")
    return Fraction(x)


def monomial_degree(m: Monomial, weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(m, weights))


class Polynomial:
    """An immutable sparse polynomial in generators of positive integer weight.

    Monomials are ordered first by weighted degree, then lexicographically by
    exponent vector.  ``terms()`` and the text form list terms in decreasing
    order.
    """

    __slots__ = ("_terms", "weights", "var", "_hash")

    def __init__(
        self,
        terms: Mapping[Monomial, object] | Iterable[tuple[Monomial, object]] = (),
        weights: Sequence[int] = (1,),
        var: str = "u",
    ):
        weights = tuple(int(w) for w in weights)
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        n = len(weights)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Fraction] = {}
        for mono, c in items:
            mono = tuple(int(e) for e in mono)
            if len(mono) != n:
                raise ArityError(f"monomial {mono} does not match {n} generators")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            acc[mono] = acc.get(mono, Fraction(0)) + as_rational(c)
        self._terms = {m: c for m, c in acc.items() if c != 0}
        self.weights = weights
        self.var = var
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, weights: Sequence[int], var: str = "u") -> "Polynomial":
        return cls({}, weights, var)

    @classmethod
    def constant(cls, c, weights: Sequence[int], var: str = "u") -> "Polynomial":
        return cls({(0,) * len(weights): c}, weights, var)

    @classmethod
    def generator(cls, i: int, weights: Sequence[int], var: str = "u") -> "Polynomial":
        """The generator with 1-based index ``i``."""
        if not 1 <= i <= len(weights):
            raise ArityError(f"no generator {var}{i} among {len(weights)}")
        m = [0] * len(weights)
        m[i - 1] = 1
        return cls({tuple(m): 1}, weights, var)

    @classmethod
    def monomial(cls, m: Monomial, weights: Sequence[int], var: str = "u", c=1) -> "Polynomial":
        return cls({tuple(m): c}, weights, var)

    def _like(self, terms) -> "Polynomial":
        p = Polynomial.__new__(Polynomial)
        p._terms = terms
        p.weights = self.weights
        p.var = self.var
        p._hash = None
        return p

    # inspection

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def sort_key(self, m: Monomial) -> tuple:
        return (monomial_degree(m, self.weights), m)

    def terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in decreasing monomial order."""
        return sorted(self._terms.items(), key=lambda t: self.sort_key(t[0]), reverse=True)

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.terms()]

    def term_map(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def degree(self) -> int:
        """Largest weighted degree of a term; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(monomial_degree(m, self.weights) for m in self._terms)

    def is_homogeneous(self) -> bool:
        return len({monomial_degree(m, self.weights) for m in self._terms}) <= 1

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms()[0]

    # arithmetic

    def _check(self, other: "Polynomial") -> None:
        if self.weights != other.weights:
            raise ArityError(
                f"generator weights differ: {self.weights} vs {other.weights}"
            )

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(as_rational(other), self.weights, self.var)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return self._like({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        if c == 0:
            return self._like({})
        return self._like({m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        return poly_mul(self, other)

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.weights, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.weights == other.weights and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self.weights, self.var)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.weights, frozenset(self._terms.items())))
        return self._hash

    # graded structure

    def graded_component(self, d: int) -> "Polynomial":
        return graded_component(self, d)

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict] = {}
        for m, c in self._terms.items():
            parts.setdefault(monomial_degree(m, self.weights), {})[m] = c
        return {d: self._like(t) for d, t in sorted(parts.items())}

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace generator i by ``images[i]`` (all images share one ring)."""
        if len(images) != self.nvars:
            raise ArityError(f"need {self.nvars} images, got {len(images)}")
        target = images[0]
        for im in images[1:]:
            target._check(im)
        result = Polynomial.zero(target.weights, target.var)
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(1, target.weights, target.var)} for _ in images]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        for m, c in self._terms.items():
            t = Polynomial.constant(c, target.weights, target.var)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            result = result + t
        return result

    def embed(self, weights: Sequence[int]) -> "Polynomial":
        """View this polynomial in a ring with extra trailing generators."""
        weights = tuple(weights)
        if weights[: self.nvars] != self.weights:
            raise ArityError("target weights must extend the current ones")
        pad = (0,) * (len(weights) - self.nvars)
        return Polynomial({m + pad: c for m, c in self._terms.items()}, weights, self.var)

    # serialization

    def _mono_text(self, m: Monomial) -> str:
        parts = []
        for i, e in enumerate(m):
            if e == 1:
                parts.append(f"{self.var}{i + 1}")
            elif e > 1:
                parts.append(f"{self.var}{i + 1}^{e}")
        return "*".join(parts)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for k, (m, c) in enumerate(self.terms()):
            mono = self._mono_text(m)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("- " if c < 0 else "+ ") + body)
        return " ".join(out)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r}, weights={self.weights})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"exp": list(m), "num": str(c.numerator), "den": str(c.denominator)}
                for m, c in self.terms()
            ],
            "weights": list(self.weights),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj, var: str = "u") -> "Polynomial":
        if isinstance(obj, str):
            obj = json.loads(obj)
        terms = {
            tuple(t["exp"]): Fraction(int(t["num"]), int(t["den"])) for t in obj["terms"]
        }
        return cls(terms, obj["weights"], var)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    out: dict[Monomial, Fraction] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return a._like({m: c for m, c in out.items() if c != 0})


def graded_component(p: Polynomial, d: int) -> Polynomial:
    """Sum of the terms of ``p`` of weighted degree exactly ``d``."""
    return p._like(
        {m: c for m, c in p._terms.items() if monomial_degree(m, p.weights) == d}
    )


def monomials_of_degree(weights: Sequence[int], d: int) -> list[Monomial]:
    """All exponent vectors of weighted degree ``d``, in decreasing order."""
    weights = tuple(weights)
    n = len(weights)
    out: list[Monomial] = []

    def rec(i: int, left: int, prefix: list[int]) -> None:
        if i == n - 1:
            if left % weights[i] == 0:
                out.append(tuple(prefix + [left // weights[i]]))
            return
        for e in range(left // weights[i], -1, -1):
            rec(i + 1, left - e * weights[i], prefix + [e])

    if d < 0:
        return []
    if n == 0:
        return [()] if d == 0 else []
    rec(0, d, [])
    return out


def count_monomials(weights: Sequence[int], d_max: int) -> list[int]:
    counts = [1] + [0] * d_max
    for w in weights:
        for d in range(w, d_max + 1):
            counts[d] += counts[d - w]
    return counts


class ExactMatrix:
    """A dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[object]], cols: int | None = None):
        self.entries = tuple(tuple(as_rational(x) for x in row) for row in entries)
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != cols for r in self.entries):
            raise ValueError("ragged matrix")
        self.cols = cols

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(col) for col in zip(*self.entries)] if self.rows else [], self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"ExactMatrix({[[str(x) for x in r] for r in self.entries]})"

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


def _rref_sparse(rows: Iterable[dict[int, Fraction]]) -> dict[int, dict[int, Fraction]]:
    """Reduced echelon form of sparse rows, as ``{pivot column: row}``.

    Rows are eliminated by leading column as they arrive, then back-substituted
    from the last pivot upwards.  Zero entries are never touched.
    """
    piv: dict[int, dict[int, Fraction]] = {}
    for r in rows:
        r = {k: v for k, v in r.items() if v != 0}
        while r:
            c = min(r)
            p = piv.get(c)
            if p is None:
                inv = 1 / r[c]
                piv[c] = {k: v * inv for k, v in r.items()}
                break
            f = r[c]
            for k, v in p.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    for c in sorted(piv, reverse=True):
        row = piv[c]
        for k in sorted(k for k in row if k != c and k in piv):
            f = row.get(k)
            if not f:
                continue
            for kk, v in piv[k].items():
                nv = row.get(kk, 0) - f * v
                if nv:
                    row[kk] = nv
                else:
                    row.pop(kk, None)
    return piv


def _rref_rows(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    piv = _rref_sparse({i: x for i, x in enumerate(r) if x != 0} for r in rows)
    pivots = sorted(piv)
    out = []
    for c in pivots:
        dense = [Fraction(0)] * ncols
        for k, v in piv[c].items():
            dense[k] = v
        out.append(dense)
    out.extend([Fraction(0)] * ncols for _ in range(len(rows) - len(pivots)))
    return out, pivots


def row_reduce(m: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Reduced row-echelon form and the list of pivot columns."""
    rows, pivots = _rref_rows([list(r) for r in m.entries], m.cols)
    return ExactMatrix(rows, m.cols), pivots


def rank(m: ExactMatrix) -> int:
    return len(row_reduce(m)[1])


def rref_rows(rows: Sequence[Sequence[object]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Row-reduce a list of rows; returns only the nonzero rows and pivots."""
    reduced, pivots = _rref_rows([[as_rational(x) for x in r] for r in rows], ncols)
    return reduced[: len(pivots)], pivots


def sparse_rank(rows: Iterable[Mapping[int, object]]) -> int:
    """Rank of rows given as ``{column: value}`` maps."""
    piv: dict[int, dict[int, Fraction]] = {}
    for r in rows:
        r = {k: as_rational(v) for k, v in r.items() if v != 0}
        while r:
            c = min(r)
            p = piv.get(c)
            if p is None:
                inv = 1 / r[c]
                piv[c] = {k: v * inv for k, v in r.items()}
                break
            f = r[c]
            for k, v in p.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return len(piv)
