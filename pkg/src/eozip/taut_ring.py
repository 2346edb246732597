"""The graded ring Q[u_1..u_g]/I, with u_i of degree i.

``I`` is generated by the graded pieces of
``(1 + u_1 + ... + u_g)(1 - u_1 + u_2 - ... + (-1)^g u_g) - 1``.  The class of
``u_i`` is what the rest of the package calls ``lambda_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .graded import GradedQuotient, macaulay_basis
from .poly_core import ArityError, ExactMatrix, Monomial, Polynomial, graded_component, rank

MAX_GENUS = 8


def top_degree(g: int) -> int:
    return g * (g + 1) // 2


def weights(g: int) -> tuple[int, ...]:
    return tuple(range(1, g + 1))


def master_relation(g: int) -> Polynomial:
    w = weights(g)
    plus = Polynomial.constant(1, w)
    minus = Polynomial.constant(1, w)
    for i in range(1, g + 1):
        u = Polynomial.generator(i, w)
        plus = plus + u
        minus = minus + u.scale((-1) ** i)
    return plus * minus - 1


@dataclass(frozen=True)
class Presentation:
    genus: int
    weights: tuple[int, ...]
    relations: tuple[Polynomial, ...]
    master: Polynomial | None = None
    label: str = "taut"

    @property
    def relation_degrees(self) -> list[int]:
        return [r.degree() for r in self.relations]

    def to_json(self) -> dict:
        return {
            "g": self.genus,
            "weights": list(self.weights),
            "relations": [{"degree": r.degree(), "text": r.to_text()} for r in self.relations],
            "master": self.master.to_text() if self.master is not None else None,
        }


def build_presentation(g: int) -> Presentation:
    if g < 1:
        raise ValueError("genus must be at least 1")
    m = master_relation(g)
    rels = tuple(
        c for d in range(1, 2 * g + 1) if not (c := graded_component(m, d)).is_zero()
    )
    return Presentation(g, weights(g), rels, m)


def corrupted_presentation(g: int) -> Presentation:
    """Negative-control fixture: the degree-2 relation loses its ``u_1^2`` term.

    For ``g = 1`` (no ``u_2``) the relation becomes zero instead.
    """
    p = build_presentation(g)
    u1_sq = (2,) + (0,) * (g - 1)
    rels = []
    for r in p.relations:
        if r.degree() == 2:
            r = r - Polynomial.monomial(u1_sq, p.weights, c=r.coefficient(u1_sq))
        rels.append(r)
    return Presentation(g, p.weights, tuple(rels), p.master, label="corrupted")


@dataclass(frozen=True)
class GradedBasis:
    genus: int
    by_degree: tuple[tuple[Monomial, ...], ...]

    def __len__(self) -> int:
        return sum(len(b) for b in self.by_degree)

    def hilbert(self) -> list[int]:
        return [len(b) for b in self.by_degree]


class TautRing:
    """Normal forms and multiplication in the quotient defined by a presentation."""

    def __init__(self, presentation: Presentation, degree_cap: int | None = None):
        self.presentation = presentation
        self.genus = presentation.genus
        self.weights = presentation.weights
        if degree_cap is None:
            degree_cap = top_degree(self.genus) + 2 * max(self.weights)
        self.quotient = GradedQuotient(self.weights, presentation.relations, degree_cap)

    def top_degree(self) -> int:
        return self.quotient.top_degree()

    def graded_basis(self, d_max: int | None = None) -> GradedBasis:
        if d_max is None:
            d_max = self.top_degree()
        return GradedBasis(self.genus, tuple(tuple(self.quotient.basis(d)) for d in range(d_max + 1)))

    def hilbert_function(self, d_max: int | None = None) -> list[int]:
        return self.quotient.hilbert_function(d_max)

    def element(self, p: Polynomial) -> "RingElement":
        if p.weights != self.weights:
            raise ArityError(f"expected generators of weights {self.weights}, got {p.weights}")
        return RingElement(self.genus, self.quotient.normal_form(p), self)

    def lam(self, i: int) -> "RingElement":
        if i == 0:
            return self.one()
        return self.element(Polynomial.generator(i, self.weights))

    def one(self) -> "RingElement":
        return self.element(Polynomial.constant(1, self.weights))

    def zero(self) -> "RingElement":
        return self.element(Polynomial.zero(self.weights))

    def basis_elements(self) -> list["RingElement"]:
        top = self.top_degree()
        return [
            self.element(Polynomial.monomial(m, self.weights))
            for d in range(top + 1)
            for m in self.quotient.basis(d)
        ]


@dataclass(frozen=True, eq=False)
class RingElement:
    genus: int
    poly: Polynomial
    ring: TautRing = field(repr=False, compare=False)

    def _same(self, other: "RingElement") -> None:
        if not isinstance(other, RingElement) or other.genus != self.genus:
            raise ArityError("ring elements of different genus")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._same(other)
        return RingElement(self.genus, self.poly + other.poly, self.ring)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._same(other)
        return RingElement(self.genus, self.poly - other.poly, self.ring)

    def __neg__(self) -> "RingElement":
        return RingElement(self.genus, -self.poly, self.ring)

    def __mul__(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            self._same(other)
            return self.ring.element(self.poly * other.poly)
        return RingElement(self.genus, self.poly.scale(other), self.ring)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RingElement":
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, RingElement):
            return self.genus == other.genus and self.poly == other.poly
        if isinstance(other, (int, Fraction)):
            return self.poly == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.genus, self.poly))

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def degree(self) -> int:
        return self.poly.degree()

    def to_text(self) -> str:
        return self.poly.to_text()

    __str__ = to_text


@lru_cache(maxsize=None)
def ring(g: int) -> TautRing:
    """The ring of genus ``g``; construction is deterministic, so a racing
    duplicate build is harmless."""
    if not 1 <= g <= MAX_GENUS:
        raise ValueError(f"genus must be in 1..{MAX_GENUS}")
    return TautRing(build_presentation(g))


def graded_basis(g: int, d_max: int | None = None) -> GradedBasis:
    return ring(g).graded_basis(d_max)


def normal_form(g: int, p: Polynomial) -> RingElement:
    return ring(g).element(p)


def multiply(g: int, a: RingElement, b: RingElement) -> RingElement:
    if a.genus != g or b.genus != g:
        raise ArityError("genus mismatch")
    return a * b


def hilbert_function(g: int) -> list[int]:
    return ring(g).hilbert_function()


def is_zero(g: int, e: RingElement) -> bool:
    if e.genus != g:
        raise ArityError("genus mismatch")
    return e.is_zero()


def lam(g: int, i: int) -> RingElement:
    return ring(g).lam(i)


def macaulay_hilbert_function(presentation: Presentation, d_max: int) -> list[int]:
    """Hilbert function by the full Macaulay matrix in each degree (slow)."""
    return [len(macaulay_basis(presentation.weights, presentation.relations, d)[0]) for d in range(d_max + 1)]


@dataclass
class QuotientReport:
    g: int
    hilbert_quotient: list[int]
    hilbert_lower: list[int]
    dims_equal: bool
    images_independent: bool
    products_checked: int
    multiplicative: bool
    failures: list[str]

    @property
    def ok(self) -> bool:
        return self.dims_equal and self.images_independent and self.multiplicative

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "hilbert_quotient": self.hilbert_quotient,
            "hilbert_lower": self.hilbert_lower,
            "dims_equal": self.dims_equal,
            "images_independent": self.images_independent,
            "products_checked": self.products_checked,
            "multiplicative": self.multiplicative,
            "ok": self.ok,
        }


def quotient_presentation(g: int) -> Presentation:
    p = build_presentation(g)
    ug = Polynomial.generator(g, p.weights)
    return Presentation(g, p.weights, p.relations + (ug,), p.master, label="mod-top-lambda")


def quotient_by_top_lambda(g: int) -> tuple[Presentation, QuotientReport]:
    """Quotient by ``u_g`` and compare it, degree by degree and product by
    product, with the ring of genus ``g - 1`` under ``u_i -> u_i``."""
    if g < 2:
        raise ValueError("need g >= 2")
    pres = quotient_presentation(g)
    q = GradedQuotient(pres.weights, pres.relations, top_degree(g) + 2 * g)
    lower = ring(g - 1)
    h_low = lower.hilbert_function()
    h_q = q.hilbert_function()
    dims_equal = h_q == h_low

    def image(poly: Polynomial) -> Polynomial:
        return q.normal_form(poly.embed(pres.weights))

    independent = True
    for d, size in enumerate(h_low):
        imgs = [image(Polynomial.monomial(m, lower.weights)) for m in lower.quotient.basis(d)]
        cols = q.basis(d)
        if len(cols) != size:
            independent = False
            continue
        mat = ExactMatrix([[p.coefficient(c) for c in cols] for p in imgs], len(cols)) if imgs else None
        if mat is not None and rank(mat) != size:
            independent = False

    basis = [Polynomial.monomial(m, lower.weights) for d in range(len(h_low)) for m in lower.quotient.basis(d)]
    failures = []
    checked = 0
    for i, a in enumerate(basis):
        for b in basis[i:]:
            checked += 1
            prod_low = lower.quotient.normal_form(a * b)
            if image(prod_low) != q.normal_form((a * b).embed(pres.weights)):
                failures.append(f"{a.to_text()} * {b.to_text()}")
    report = QuotientReport(g, h_q, h_low, dims_equal, independent, checked, not failures, failures)
    return pres, report


def lambda_relation_holds(g: int) -> bool:
    """``(1 + sum lambda_i)(1 - lambda_1 + ... ) = 1`` in the ring."""
    r = ring(g)
    total = r.one()
    alt = r.one()
    for i in range(1, g + 1):
        total = total + r.lam(i)
        alt = alt + r.lam(i) * ((-1) ** i)
    return total * alt == r.one()
