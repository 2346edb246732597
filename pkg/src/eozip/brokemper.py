"""Borel and twisted presentations of the same graded ring.

Everything lives in the symmetric polynomials in ``x_1..x_g`` (weight 1).  A
symmetric polynomial is determined by its coefficients on ``x^lam`` for
partitions ``lam``, so those coefficients serve as coordinates when ranks of
ideal slices are compared.

The W-invariants are generated as an algebra by ``e_j(x_1^2, ..., x_g^2)``,
so those ``g`` polynomials generate the ideal of positive-degree invariants in
every degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import gf
from .poly_core import Polynomial, sparse_rank
from .taut_ring import build_presentation, hilbert_function, top_degree
from .weyl import SignedPermutation


@dataclass(frozen=True)
class CharacterRing:
    genus: int

    @property
    def weights(self) -> tuple[int, ...]:
        return (1,) * self.genus

    def x(self, i: int) -> Polynomial:
        return Polynomial.generator(i, self.weights, var="x")

    def one(self) -> Polynomial:
        return Polynomial.constant(1, self.weights, var="x")

    def elementary(self, j: int, squares: bool = False) -> Polynomial:
        return _elementary(self.genus, j, squares)

    def act(self, w: SignedPermutation, f: Polynomial) -> Polynomial:
        """``(w f)(x) = f(w^-1 x)``; ``x_i`` goes to ``sign * x_|w(i)|``."""
        images = []
        for i in range(1, self.genus + 1):
            v = w(i)
            images.append(self.x(abs(v)).scale(1 if v > 0 else -1))
        return f.substitute(images)

    def is_symmetric(self, f: Polynomial) -> bool:
        return all(self.act(s, f) == f for s in _transpositions(self.genus))

    def is_weyl_invariant(self, f: Polynomial) -> bool:
        return self.is_symmetric(f) and self.act(SignedPermutation((-1,) + tuple(range(2, self.genus + 1))), f) == f


def _transpositions(g: int) -> list[SignedPermutation]:
    out = []
    for i in range(1, g):
        im = list(range(1, g + 1))
        im[i - 1], im[i] = im[i], im[i - 1]
        out.append(SignedPermutation(tuple(im)))
    return out


@lru_cache(maxsize=None)
def _elementary(g: int, j: int, squares: bool) -> Polynomial:
    w = (1,) * g
    if j == 0:
        return Polynomial.constant(1, w, var="x")
    k = 2 if squares else 1
    terms = {}
    for s in combinations(range(g), j):
        m = [0] * g
        for i in s:
            m[i] = k
        terms[tuple(m)] = 1
    return Polynomial(terms, w, var="x")


@dataclass(frozen=True)
class TwistData:
    """``f -> f(p * w(x))``: Frobenius scaling composed with a Weyl element
    (by default the longest one, which negates every coordinate)."""

    genus: int
    p: int
    weyl_element: SignedPermutation | None = None

    def apply(self, f: Polynomial) -> Polynomial:
        ring = CharacterRing(self.genus)
        w = self.weyl_element or SignedPermutation.longest(self.genus)
        return ring.act(w, f).substitute([ring.x(i).scale(self.p) for i in range(1, self.genus + 1)])


def borel_ideal_gens(g: int, d_max: int | None = None) -> list[Polynomial]:
    """``e_j(x^2)`` for ``j = 1..g`` (those of degree at most ``d_max``)."""
    if d_max is None:
        d_max = 2 * g
    return [_elementary(g, j, True) for j in range(1, g + 1) if 2 * j <= d_max]


def twisted_ideal_gens(g: int, p: int, d_max: int | None = None) -> list[Polynomial]:
    """``f - phi(f)`` for the Borel generators ``f``, with ``phi`` applied by
    substitution; each equals ``(1 - p^deg f) f``."""
    if not gf.is_prime(p):
        raise ValueError(f"{p} is not prime")
    twist = TwistData(g, p)
    out = []
    for f in borel_ideal_gens(g, d_max):
        t = f - twist.apply(f)
        if t != f.scale(1 - p ** f.degree()):
            raise AssertionError(f"twist does not scale {f} by p^{f.degree()}")
        out.append(t)
    return out


def _partitions(d: int, parts: int, largest: int | None = None) -> list[tuple[int, ...]]:
    """Partitions of ``d`` into at most ``parts`` parts, padded with zeros."""
    if largest is None:
        largest = d
    if d == 0:
        return [(0,) * parts]
    if parts == 0:
        return []
    out = []
    for first in range(min(d, largest), 0, -1):
        for rest in _partitions(d - first, parts - 1, first):
            out.append((first,) + rest)
    return out


def symmetric_dimension(g: int, d: int) -> int:
    return len(_partitions(d, g))


@lru_cache(maxsize=None)
def _e_product(g: int, mu: tuple[int, ...]) -> Polynomial:
    if not mu:
        return _elementary(g, 0, False)
    return _e_product(g, mu[:-1]) * _elementary(g, mu[-1], False)


def _e_products(g: int, d: int) -> list[Polynomial]:
    """A spanning set of degree-d symmetric polynomials: products of ``e_j(x)``."""
    mus = [tuple(x for x in lam if x) for lam in _partitions(d, d)] if d else [()]
    return [_e_product(g, mu) for mu in mus if all(x <= g for x in mu)]


def _coords(f: Polynomial, index: dict[tuple[int, ...], int]) -> dict[int, object]:
    return {index[m]: c for m, c in f.term_map().items() if m in index}


def _ideal_rows(g: int, gens: list[Polynomial], d: int, index) -> list[dict[int, object]]:
    return [
        _coords(f * c, index) for f in gens if f.degree() <= d for c in _e_products(g, d - f.degree())
    ]


def ideal_rank(g: int, gens: list[Polynomial], d: int) -> int:
    """Dimension of the degree-d part of the ideal the generators span inside
    the symmetric polynomials."""
    index = {lam: i for i, lam in enumerate(_partitions(d, g))}
    return sparse_rank(_ideal_rows(g, gens, d, index))


def in_ideal(g: int, gens: list[Polynomial], f: Polynomial) -> bool:
    """Membership of a homogeneous symmetric polynomial, by rank."""
    if f.is_zero():
        return True
    d = f.degree()
    index = {lam: i for i, lam in enumerate(_partitions(d, g))}
    rows = _ideal_rows(g, gens, d, index)
    return sparse_rank(rows) == sparse_rank(rows + [_coords(f, index)])


@dataclass
class DegreeRow:
    d: int
    rank_borel: int
    rank_twisted: int
    rank_joint: int

    @property
    def equal(self) -> bool:
        return self.rank_borel == self.rank_twisted == self.rank_joint

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "rank_borel": self.rank_borel,
            "rank_twisted": self.rank_twisted,
            "rank_joint": self.rank_joint,
            "equal": self.equal,
        }


@dataclass
class IdealComparison:
    g: int
    p: int
    degrees: list[DegreeRow]

    @property
    def ok(self) -> bool:
        return all(r.equal for r in self.degrees)

    def to_json(self) -> dict:
        return {"g": self.g, "p": self.p, "degrees": [r.to_json() for r in self.degrees], "ok": self.ok}


def ideals_equal_by_degree(g: int, p: int, d_max: int | None = None) -> IdealComparison:
    """Compare the Borel and twisted ideal slices degree by degree.

    The two slices are equal exactly when both ranks agree with the rank of
    their sum.
    """
    if d_max is None:
        d_max = top_degree(g)
    borel = borel_ideal_gens(g, d_max)
    twisted = twisted_ideal_gens(g, p, d_max)
    rows = []
    for d in range(d_max + 1):
        rb = ideal_rank(g, borel, d)
        rt = ideal_rank(g, twisted, d)
        joint = ideal_rank(g, borel + twisted, d)
        rows.append(DegreeRow(d, rb, rt, joint))
    return IdealComparison(g, p, rows)


def borel_quotient_dims(g: int, d_max: int) -> list[int]:
    gens = borel_ideal_gens(g, d_max)
    return [symmetric_dimension(g, d) - ideal_rank(g, gens, d) for d in range(d_max + 1)]


@dataclass
class ChernMapReport:
    g: int
    d_max: int
    image_matches: bool
    in_ideal: bool
    quotient_dims: list[int]
    ring_dims: list[int]

    @property
    def dims_match(self) -> bool:
        return self.quotient_dims == self.ring_dims

    @property
    def ok(self) -> bool:
        return self.image_matches and self.in_ideal and self.dims_match

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "d_max": self.d_max,
            "image_matches": self.image_matches,
            "in_ideal": self.in_ideal,
            "quotient_dims": self.quotient_dims,
            "ring_dims": self.ring_dims,
            "ok": self.ok,
        }


def chern_image(g: int, f: Polynomial) -> Polynomial:
    """Image of a polynomial in ``u_1..u_g`` under ``u_i -> e_i(x)``."""
    return f.substitute([_elementary(g, i, False) for i in range(1, g + 1)])


def chern_map_check(g: int, d_max: int | None = None) -> ChernMapReport:
    if d_max is None:
        d_max = top_degree(g)
    ring = CharacterRing(g)
    pres = build_presentation(g)
    image = chern_image(g, pres.master)
    target = ring.one()
    for i in range(1, g + 1):
        target = target * (ring.one() - ring.x(i) * ring.x(i))
    target = target - 1
    # prod(1 - x_i^2) - 1 = sum_j (-1)^j e_j(x^2), an explicit ideal combination
    combo = Polynomial.zero(ring.weights, var="x")
    for j in range(1, g + 1):
        combo = combo + _elementary(g, j, True).scale((-1) ** j)
    member = combo == target
    # and degree by degree through ranks, for each relation generator
    gens = borel_ideal_gens(g)
    for rel in pres.relations:
        member = member and in_ideal(g, gens, chern_image(g, rel))
    hf = hilbert_function(g)
    ring_dims = [hf[d] if d < len(hf) else 0 for d in range(d_max + 1)]
    return ChernMapReport(g, d_max, image == target, member, borel_quotient_dims(g, d_max), ring_dims)
