"""Classes of p-rank loci in the tautological ring.

The locus of p-rank at most ``f`` has class
``(p - 1)(p^2 - 1)...(p^(g-f) - 1) * lambda_(g-f)``, so every ``lambda_i`` is a
positive rational multiple of an effective cycle class.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from . import gf
from .taut_ring import RingElement, ring

MAX_PRIME = 2**16


@dataclass(frozen=True)
class StratumClassRecord:
    genus: int
    p: int
    f: int
    cls: RingElement
    coefficient: int

    @property
    def codimension(self) -> int:
        return self.genus - self.f

    def to_json(self) -> dict:
        return {
            "g": self.genus,
            "p": self.p,
            "f": self.f,
            "codim": self.codimension,
            "coefficient": self.coefficient,
            "class": self.cls.to_text(),
        }


def coefficient(g: int, f: int, p: int) -> int:
    out = 1
    for i in range(1, g - f + 1):
        out *= p**i - 1
    return out


def _check(g: int, p: int) -> None:
    if not gf.is_prime(p) or p > MAX_PRIME:
        raise ValueError(f"p must be a prime up to {MAX_PRIME}, got {p}")
    ring(g)  # validates g


def p_rank_locus_class(g: int, f: int, p: int) -> StratumClassRecord:
    _check(g, p)
    if not 0 <= f <= g:
        raise ValueError(f"need 0 <= f <= g, got f={f}, g={g}")
    c = coefficient(g, f, p)
    cls = ring(g).lam(g - f) * c
    if cls.is_zero():
        raise AssertionError(f"class of V_{f} vanishes at g={g}")
    return StratumClassRecord(g, p, f, cls, c)


@dataclass
class ClassTable:
    g: int
    p: int
    rows: list[StratumClassRecord]

    def to_json(self) -> dict:
        return {"g": self.g, "p": self.p, "rows": [r.to_json() for r in self.rows]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["g", "p", "f", "codim", "coefficient", "class"])
        for r in self.rows:
            w.writerow([r.genus, r.p, r.f, r.codimension, r.coefficient, r.cls.to_text()])
        return buf.getvalue()


def class_table(g: int, p: int) -> ClassTable:
    """Rows for ``f = g, g-1, ..., 0`` (increasing codimension)."""
    return ClassTable(g, p, [p_rank_locus_class(g, f, p) for f in range(g, -1, -1)])


@dataclass
class Certification:
    i: int
    scalar: Fraction  # lambda_i = scalar * [V_(g-i)]
    nonzero: bool

    @property
    def ok(self) -> bool:
        return self.scalar > 0 and self.nonzero

    def to_json(self) -> dict:
        return {"i": self.i, "scalar": str(self.scalar), "nonzero": self.nonzero, "ok": self.ok}


@dataclass
class EffectivityReport:
    g: int
    p: int
    certifications: list[Certification]
    oracle_checked: bool
    oracle_p_ranks: list[int] | None

    @property
    def oracle_ok(self) -> bool:
        if not self.oracle_checked:
            return True
        return self.oracle_p_ranks == list(range(self.g + 1))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.certifications) and self.oracle_ok

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "p": self.p,
            "certifications": [c.to_json() for c in self.certifications],
            "oracle_checked": self.oracle_checked,
            "oracle_p_ranks": self.oracle_p_ranks,
            "ok": self.ok,
        }


def effectivity_check(g: int, p: int, with_oracle: bool | None = None) -> EffectivityReport:
    """Write each ``lambda_i`` as a positive multiple of ``[V_(g-i)]``.

    When the enumeration is small enough (or ``with_oracle`` is set) the zip
    oracle confirms that every p-rank ``0..g`` actually occurs, so each locus
    is nonempty.
    """
    _check(g, p)
    r = ring(g)
    certs = []
    for i in range(1, g + 1):
        rec = p_rank_locus_class(g, g - i, p)
        scalar = Fraction(1, rec.coefficient)
        if rec.cls * scalar != r.lam(i):
            raise AssertionError(f"lambda_{i} is not [V_{g - i}] / {rec.coefficient}")
        certs.append(Certification(i, scalar, not r.lam(i).is_zero()))
    if with_oracle is None:
        with_oracle = g == 1 or (g == 2 and p == 2)
    ranks = None
    if with_oracle:
        from .zip_oracle import orbit_decomposition

        ranks = sorted(orbit_decomposition(g, p).p_rank_histogram())
    return EffectivityReport(g, p, certs, with_oracle, ranks)
