"""Brute-force zips over small prime fields.

A zip of genus g over F_p is stored as one endomorphism F of F_p^{2g} (column
vectors, standard symplectic basis e_1..e_g, f_1..f_g) with rank g and
Lagrangian kernel and image.  Over a prime field Frobenius fixes every scalar,
so Frobenius-linear maps are ordinary matrices.

Subspaces are handled as boolean masks over all p^{2g} vectors, which keeps
image, preimage and intersection to one numpy call each.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import gf
from .weyl import EOType

MAX_GENUS = 3
MAX_PRIME = 13
DEFAULT_MAX_POINTS = 2_000_000


class ResourceGuardError(RuntimeError):
    """The requested enumeration exceeds the configured limits."""


class OracleError(AssertionError):
    """An internal consistency check of the oracle failed."""


def check_guard(g: int, p: int, points: int | None = None, max_points: int = DEFAULT_MAX_POINTS) -> None:
    if not gf.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= g <= MAX_GENUS or p > MAX_PRIME:
        raise ResourceGuardError(f"oracle supports g <= {MAX_GENUS}, p <= {MAX_PRIME}; got g={g}, p={p}")
    if points is not None and points > max_points:
        raise ResourceGuardError(f"enumeration of {points} points exceeds the limit {max_points}")


# --- subspaces ---------------------------------------------------------------


@dataclass(frozen=True)
class Lagrangian:
    g: int
    p: int
    basis: tuple[tuple[int, ...], ...]  # RREF, g x 2g

    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.g, 2 * self.g)

    @classmethod
    def from_rows(cls, g: int, p: int, rows: np.ndarray) -> "Lagrangian":
        b = gf.row_space(rows, p)
        if b.shape[0] != g:
            raise ValueError("rows do not span a g-dimensional subspace")
        return cls(g, p, tuple(map(tuple, b.tolist())))


def _rref_cells(g: int) -> Iterable[tuple[tuple[int, ...], list[tuple[int, int]]]]:
    for piv in itertools.combinations(range(2 * g), g):
        free = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, 2 * g) if c not in piv]
        yield piv, free


def lagrangian_matrices(g: int, p: int, max_points: int = DEFAULT_MAX_POINTS) -> np.ndarray:
    """Every Lagrangian subspace once, as a stack of RREF g x 2g matrices."""
    check_guard(g, p, gf.gaussian_binomial(2 * g, g, p), max_points)
    j = gf.standard_form(g)
    found = []
    for piv, free in _rref_cells(g):
        vals = gf.all_vectors(len(free), p)
        m = np.zeros((len(vals), g, 2 * g), dtype=np.int64)
        for i, pc in enumerate(piv):
            m[:, i, pc] = 1
        for k, (i, c) in enumerate(free):
            m[:, i, c] = vals[:, k]
        gram = np.einsum("nik,kl,njl->nij", m, j, m) % p
        found.append(m[~gram.any(axis=(1, 2))])
    out = np.concatenate(found)
    if len(out) != gf.lagrangian_count(g, p):
        raise OracleError(f"found {len(out)} Lagrangians, expected {gf.lagrangian_count(g, p)}")
    return out


def enumerate_lagrangians(g: int, p: int) -> list[Lagrangian]:
    return [Lagrangian(g, p, tuple(map(tuple, m.tolist()))) for m in lagrangian_matrices(g, p)]


# --- zips ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Zip:
    g: int
    p: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.int64) % self.p
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if m.shape != (2 * self.g, 2 * self.g):
            raise ValueError(f"expected a {2 * self.g}x{2 * self.g} matrix")

    def key(self) -> bytes:
        return self.matrix.tobytes()

    def __eq__(self, other) -> bool:
        return isinstance(other, Zip) and (self.g, self.p) == (other.g, other.p) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.g, self.p, self.key()))

    def is_valid(self) -> bool:
        return is_zip_matrix(self.matrix, self.g, self.p)

    def kernel(self) -> Lagrangian:
        return Lagrangian.from_rows(self.g, self.p, gf.nullspace(self.matrix, self.p))

    def image(self) -> Lagrangian:
        return Lagrangian.from_rows(self.g, self.p, self.matrix.T)

    def triple(self) -> tuple[Lagrangian, Lagrangian, np.ndarray]:
        """``(L1, L2, phi)`` with phi the matrix of H/L1 -> L2.

        H/L1 gets coordinates ``x -> B1 J x`` and L2 the rows of its RREF
        basis B2, so ``F = B2^T phi B1 J``.
        """
        l1, l2 = self.kernel(), self.image()
        b1, b2 = l1.matrix(), l2.matrix()
        q = (b1 @ gf.standard_form(self.g)) % self.p
        # solve F = b2^T phi q for phi, using right and left inverses
        q_right = _right_inverse(q, self.p)
        b2t_left = _right_inverse(b2, self.p).T
        phi = (b2t_left @ self.matrix @ q_right) % self.p
        return l1, l2, phi


def _right_inverse(m: np.ndarray, p: int) -> np.ndarray:
    """``r`` with ``m @ r == I`` for a full-row-rank ``m``."""
    k, n = m.shape
    cols = gf.rref(m, p)[1]
    r = np.zeros((n, k), dtype=np.int64)
    r[cols, :] = gf.inverse(m[:, cols], p)
    return r


def zip_from_triple(l1: Lagrangian, l2: Lagrangian, phi: np.ndarray) -> Zip:
    g, p = l1.g, l1.p
    f = l2.matrix().T @ phi @ l1.matrix() @ gf.standard_form(g)
    return Zip(g, p, f % p)


def is_zip_matrix(f: np.ndarray, g: int, p: int) -> bool:
    j = gf.standard_form(g)
    if (f.T @ j @ f % p).any():  # image isotropic
        return False
    if (f @ j @ f.T % p).any():  # kernel isotropic
        return False
    return gf.rank(f, p) == g


def zip_count(g: int, p: int) -> int:
    return gf.lagrangian_count(g, p) ** 2 * gf.gl_order(g, p)


def zip_matrices(g: int, p: int, max_points: int = DEFAULT_MAX_POINTS) -> np.ndarray:
    """All zips as an (n, 2g, 2g) array, ordered by (kernel, image, phi)."""
    check_guard(g, p, zip_count(g, p), max_points)
    lag = lagrangian_matrices(g, p)
    q = (lag @ gf.standard_form(g)) % p  # coordinates on H/L1
    gl = gf.general_linear(g, p)
    if len(gl) != gf.gl_order(g, p):
        raise OracleError("GL_g enumeration has the wrong size")
    # F[a, b, c] = L_b^T gl_c q_a
    f = np.einsum("bki,ckl,alj->abcij", lag, gl, q, optimize=True) % p
    return f.reshape(-1, 2 * g, 2 * g)


def enumerate_zips(g: int, p: int, max_points: int = DEFAULT_MAX_POINTS) -> list[Zip]:
    return [Zip(g, p, m) for m in zip_matrices(g, p, max_points)]


# --- canonical filtration -------------------------------------------------------


@dataclass(frozen=True, order=True)
class ZipInvariant:
    """Dimensions of the refined Hodge chain C, the refined conjugate chain D,
    and ``dim(C_i & D_j)`` (both chains listed by increasing dimension)."""

    c_dims: tuple[int, ...]
    d_dims: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    def key(self) -> str:
        rows = "/".join(",".join(str(x) for x in r) for r in self.matrix)
        return f"C{','.join(map(str, self.c_dims))};D{','.join(map(str, self.d_dims))};M{rows}"

    __str__ = key

    @classmethod
    def parse(cls, s: str) -> "ZipInvariant":
        c, d, m = s.split(";")
        return cls(
            tuple(int(x) for x in c[1:].split(",")),
            tuple(int(x) for x in d[1:].split(",")),
            tuple(tuple(int(x) for x in row.split(",")) for row in m[1:].split("/")),
        )


class Space:
    """All vectors of a standard symplectic space over F_p, with mask helpers."""

    def __init__(self, g: int, p: int):
        self.g, self.p = g, p
        self.n = 2 * g
        self.vectors = gf.all_vectors(self.n, p)
        self.N = len(self.vectors)
        self.powers = p ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        self.J = gf.standard_form(g)
        self.zero = np.zeros(self.N, dtype=bool)
        self.zero[0] = True
        self.full = np.ones(self.N, dtype=bool)
        self._dim = {p**k: k for k in range(self.n + 1)}
        self._perp: dict[bytes, np.ndarray] = {}

    def table(self, m: np.ndarray) -> np.ndarray:
        """``t[code(v)] = code(m v)``."""
        return ((self.vectors @ m.T) % self.p) @ self.powers

    def image(self, tab: np.ndarray, u: np.ndarray) -> np.ndarray:
        out = np.zeros(self.N, dtype=bool)
        out[tab[u]] = True
        return out

    @staticmethod
    def preimage(tab: np.ndarray, u: np.ndarray) -> np.ndarray:
        return u[tab]

    def perp(self, u: np.ndarray) -> np.ndarray:
        key = u.tobytes()
        out = self._perp.get(key)
        if out is None:
            basis = gf.row_space(self.vectors[u], self.p)
            if basis.shape[0] == 0:
                out = self.full.copy()
            else:
                out = ~((self.vectors @ (self.J @ basis.T)) % self.p).any(axis=1)
            self._perp[key] = out
        return out

    def dim(self, u: np.ndarray) -> int:
        return self._dim[int(u.sum())]

    def adjoint(self, f: np.ndarray) -> np.ndarray:
        """``V`` with ``<F x, y> = <x, V y>``."""
        return (-self.J @ f.T @ self.J) % self.p


@lru_cache(maxsize=None)
def space(g: int, p: int) -> Space:
    return Space(g, p)


def _closure(sp: Space, ops, cap: int) -> list[np.ndarray]:
    members = {sp.zero.tobytes(): sp.zero, sp.full.tobytes(): sp.full}
    frontier = list(members.values())
    for _ in range(cap):
        new = []
        for u in frontier:
            for op in ops:
                v = op(u)
                k = v.tobytes()
                if k not in members:
                    members[k] = v
                    new.append(v)
        if not new:
            return sorted(members.values(), key=lambda m: int(m.sum()))
        frontier = new
    raise OracleError(f"canonical filtration did not stabilize within {cap} rounds")


def _assert_chain(chain: list[np.ndarray], name: str) -> None:
    for a, b in zip(chain, chain[1:]):
        if (a & ~b).any():
            raise OracleError(f"{name} is not a chain")


@dataclass(frozen=True)
class ZipAnalysis:
    invariant: ZipInvariant
    eo_type: EOType
    elementary_sequence: tuple[int, ...]
    p_rank: int


def analyze_matrix(f: np.ndarray, g: int, p: int) -> ZipAnalysis:
    sp = space(g, p)
    ft = sp.table(f)
    vt = sp.table(sp.adjoint(f))
    cap = 4 * g
    perp = sp.perp
    c_chain = _closure(sp, (lambda u: sp.image(vt, u), lambda u: sp.preimage(ft, u), perp), cap)
    d_chain = _closure(sp, (lambda u: sp.image(ft, u), lambda u: sp.preimage(vt, u), perp), cap)
    _assert_chain(c_chain, "C")
    _assert_chain(d_chain, "D")
    cm = np.array(c_chain, dtype=np.int64)
    dm = np.array(d_chain, dtype=np.int64)
    counts = cm @ dm.T
    dims = tuple(tuple(sp._dim[int(x)] for x in row) for row in counts)
    inv = ZipInvariant(
        tuple(sp.dim(u) for u in c_chain), tuple(sp.dim(u) for u in d_chain), dims
    )
    # final sequence on the Hodge-side chain: psi(dim U) = dim V(U)
    psi = {sp.dim(u): sp.dim(sp.image(vt, u)) for u in c_chain}
    seq = _extend_final_sequence(psi, g)
    eo = eo_type_from_sequence(seq)
    # p-rank: stable rank of F
    u = sp.full
    for _ in range(2 * g):
        u = sp.image(ft, u)
    return ZipAnalysis(inv, eo, seq, sp.dim(u))


def _extend_final_sequence(psi: dict[int, int], g: int) -> tuple[int, ...]:
    known = sorted(psi)
    out = []
    for i in range(1, g + 1):
        if i in psi:
            out.append(psi[i])
            continue
        a = max(k for k in known if k < i)
        b = min(k for k in known if k > i)
        if psi[b] == psi[a]:
            out.append(psi[a])
        elif psi[b] - psi[a] == b - a:
            out.append(psi[a] + i - a)
        else:
            raise OracleError(f"final sequence {psi} is not of canonical type")
    return tuple(out)


def eo_type_from_sequence(seq: Sequence[int]) -> EOType:
    """Strict partition from an elementary sequence ``(psi(1), ..., psi(g))``:
    a part ``g + 1 - j`` for every ``j`` with ``psi(j) == psi(j - 1)``."""
    g = len(seq)
    prev = 0
    parts = []
    for j, v in enumerate(seq, start=1):
        if v == prev:
            parts.append(g + 1 - j)
        elif v != prev + 1:
            raise OracleError(f"{tuple(seq)} is not an elementary sequence")
        prev = v
    return EOType(g, tuple(parts))


def zip_invariant(z: Zip) -> ZipInvariant:
    return analyze_matrix(z.matrix, z.g, z.p).invariant


def p_rank(z: Zip) -> int:
    return gf.rank(np.linalg.matrix_power(z.matrix, 2 * z.g) % z.p, z.p)


def eo_type(z: Zip) -> EOType:
    return analyze_matrix(z.matrix, z.g, z.p).eo_type


def _analyze_chunk(args) -> list[ZipAnalysis]:
    mats, g, p = args
    return [analyze_matrix(m, g, p) for m in mats]


def analyze_batch(mats: np.ndarray, g: int, p: int, jobs: int = 1) -> list[ZipAnalysis]:
    """Analyse a stack of zips, optionally across ``jobs`` processes."""
    if jobs <= 1 or len(mats) < 4096:
        return _analyze_chunk((mats, g, p))
    from concurrent.futures import ProcessPoolExecutor

    chunks = np.array_split(mats, jobs * 4)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_analyze_chunk, [(c, g, p) for c in chunks])
        return [a for part in parts for a in part]


# --- the symplectic group -------------------------------------------------------


def transvection(v: np.ndarray, g: int, p: int) -> np.ndarray:
    """``x -> x + <x, v> v``."""
    v = np.asarray(v, dtype=np.int64).reshape(-1, 1)
    j = gf.standard_form(g)
    return (np.eye(2 * g, dtype=np.int64) - v @ v.T @ j) % p


def sp_generators(g: int, p: int) -> list[np.ndarray]:
    """Transvections along e_i, f_i, e_i + e_{i+1} and f_i + f_{i+1}."""
    n = 2 * g
    vecs = []
    for i in range(g):
        for k in (i, g + i):
            v = np.zeros(n, dtype=np.int64)
            v[k] = 1
            vecs.append(v)
    for i in range(g - 1):
        for off in (0, g):
            v = np.zeros(n, dtype=np.int64)
            v[off + i] = v[off + i + 1] = 1
            vecs.append(v)
    return [transvection(v, g, p) for v in vecs]


def is_symplectic(s: np.ndarray, g: int, p: int) -> bool:
    j = gf.standard_form(g)
    return not ((s.T @ j @ s - j) % p).any()


def generated_group_order(g: int, p: int, limit: int = 200_000) -> int:
    """Size of the group generated by :func:`sp_generators` (breadth-first)."""
    gens = sp_generators(g, p)
    start = np.eye(2 * g, dtype=np.int64)
    seen = {start.tobytes()}
    frontier = [start]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = (a @ s) % p
                k = b.tobytes()
                if k not in seen:
                    seen.add(k)
                    nxt.append(b)
                    if len(seen) > limit:
                        raise ResourceGuardError("group too large to enumerate")
        frontier = nxt
    return len(seen)


def _codes(mats: np.ndarray, p: int) -> np.ndarray:
    flat = mats.reshape(len(mats), -1)
    if flat.shape[1] * math.log2(p) >= 63:
        raise ResourceGuardError("matrix codes would overflow 64 bits")
    pw = p ** np.arange(flat.shape[1] - 1, -1, -1, dtype=np.int64)
    return flat @ pw


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def orbit_labels(mats: np.ndarray, g: int, p: int, action_gens: list[np.ndarray]) -> np.ndarray:
    """Orbit index of each zip under ``F -> s F s^-1``; orbits numbered by
    their first member."""
    codes = _codes(mats, p)
    order = np.argsort(codes)
    sorted_codes = codes[order]
    uf = UnionFind(len(mats))
    for s in action_gens:
        s_inv = gf.inverse(s, p)
        moved = np.einsum("ij,njk,kl->nil", s, mats, s_inv) % p
        mc = _codes(moved, p)
        pos = np.searchsorted(sorted_codes, mc)
        if (pos >= len(codes)).any() or (sorted_codes[np.minimum(pos, len(codes) - 1)] != mc).any():
            raise OracleError("the group action left the zip set")
        targets = order[pos]
        for a, b in zip(range(len(mats)), targets.tolist()):
            uf.union(a, b)
    roots = np.array([uf.find(i) for i in range(len(mats))])
    _, labels = np.unique(roots, return_inverse=True)
    return labels


# --- orbit report ---------------------------------------------------------------


@dataclass
class InvariantClass:
    invariant: ZipInvariant
    eo_type: EOType
    p_rank: int
    points: int
    orbit_sizes: list[int]

    @property
    def orbits(self) -> int:
        return len(self.orbit_sizes)

    def to_json(self) -> dict:
        return {
            "invariant": self.invariant.key(),
            "eo_type": list(self.eo_type.parts),
            "codim": self.eo_type.codimension,
            "points": self.points,
            "orbits": self.orbits,
            "orbit_sizes": self.orbit_sizes,
            "p_rank": self.p_rank,
        }


@dataclass
class OrbitReport:
    g: int
    p: int
    zip_count: int
    expected_count: int
    classes: list[InvariantClass]
    invariant_constant_on_orbits: bool

    @property
    def distinct_invariants(self) -> int:
        return len(self.classes)

    @property
    def orbit_count(self) -> int:
        return sum(c.orbits for c in self.classes)

    def p_rank_histogram(self) -> dict[int, int]:
        h: Counter = Counter()
        for c in self.classes:
            h[c.p_rank] += c.points
        return dict(sorted(h.items()))

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "p": self.p,
            "zip_count": self.zip_count,
            "expected_count": self.expected_count,
            "distinct_invariants": self.distinct_invariants,
            "orbit_count": self.orbit_count,
            "invariant_constant_on_orbits": self.invariant_constant_on_orbits,
            "classes": [c.to_json() for c in self.classes],
        }


def orbit_decomposition(g: int, p: int, max_points: int = DEFAULT_MAX_POINTS, jobs: int = 1) -> OrbitReport:
    mats = zip_matrices(g, p, max_points)
    analyses = analyze_batch(mats, g, p, jobs)
    labels = orbit_labels(mats, g, p, sp_generators(g, p))
    per_orbit: dict[int, set[ZipInvariant]] = defaultdict(set)
    for lab, a in zip(labels.tolist(), analyses):
        per_orbit[lab].add(a.invariant)
    constant = all(len(s) == 1 for s in per_orbit.values())
    by_inv: dict[ZipInvariant, list] = {}
    for lab, a in zip(labels.tolist(), analyses):
        entry = by_inv.setdefault(a.invariant, [a, Counter(), set(), set()])
        entry[1][lab] += 1
        entry[2].add(a.eo_type)
        entry[3].add(a.p_rank)
    classes = []
    for inv, (a, orbits, eos, ranks) in by_inv.items():
        if len(eos) != 1 or len(ranks) != 1:
            raise OracleError(f"EO type or p-rank not constant on invariant class {inv.key()}")
        classes.append(
            InvariantClass(inv, a.eo_type, a.p_rank, sum(orbits.values()), sorted(orbits.values()))
        )
    classes.sort(key=lambda c: (c.eo_type.codimension, c.eo_type.parts))
    if len({c.eo_type for c in classes}) != len(classes):
        raise OracleError("two invariant classes received the same EO type")
    return OrbitReport(g, p, len(mats), zip_count(g, p), classes, constant)


# --- degeneration along an isotropic subspace -----------------------------------


def _blocks(g: int, r: int) -> tuple[list[int], list[int], list[int]]:
    """Coordinates of I = <e_1..e_r>, of H' = I^perp / I, and of f_1..f_r."""
    idx_i = list(range(r))
    idx_h = list(range(r, g)) + list(range(g + r, 2 * g))
    idx_f = list(range(g, g + r))
    return idx_i, idx_h, idx_f


def _check_r(g: int, r: int) -> None:
    if not 1 <= r <= g - 1:
        raise ValueError(f"need 1 <= r <= g-1, got r={r} for g={g}")


def in_isotropic_locus(f: np.ndarray, g: int, r: int, p: int) -> bool:
    """F kills I, preserves I^perp and induces the identity on H / I^perp."""
    idx_i, idx_h, idx_f = _blocks(g, r)
    perp_idx = idx_i + idx_h
    f = f % p
    if f[:, idx_i].any():
        return False
    if f[np.ix_(idx_f, perp_idx)].any():
        return False
    return bool((f[np.ix_(idx_f, idx_f)] == np.eye(r, dtype=np.int64)).all())


def isotropic_zip_matrices(g: int, r: int, p: int, max_points: int = DEFAULT_MAX_POINTS) -> np.ndarray:
    """Every zip in the locus of :func:`in_isotropic_locus`.

    Candidates are built from a zip on H' plus free blocks, filtered by the
    isotropy conditions, and each survivor is re-validated as a zip.
    """
    _check_r(g, r)
    check_guard(g, p)
    idx_i, idx_h, idx_f = _blocks(g, r)
    h = 2 * (g - r)
    sub = zip_matrices(g - r, p, max_points)
    nfree = r * h + r * r + h * r
    per = p**nfree
    check_guard(g, p, len(sub) * per, max_points * 4)
    free = gf.all_vectors(nfree, p)
    a = free[:, : r * h].reshape(-1, r, h)
    b = free[:, r * h : r * h + r * r].reshape(-1, r, r)
    c = free[:, r * h + r * r :].reshape(-1, h, r)
    base = np.zeros((per, 2 * g, 2 * g), dtype=np.int64)
    base[:, np.ix_(idx_i, idx_h)[0], np.ix_(idx_i, idx_h)[1]] = a
    base[:, np.ix_(idx_i, idx_f)[0], np.ix_(idx_i, idx_f)[1]] = b
    base[:, np.ix_(idx_h, idx_f)[0], np.ix_(idx_h, idx_f)[1]] = c
    base[:, np.ix_(idx_f, idx_f)[0], np.ix_(idx_f, idx_f)[1]] = np.eye(r, dtype=np.int64)
    j = gf.standard_form(g)
    out = []
    hh = np.ix_(idx_h, idx_h)
    for fp in sub:
        cand = base.copy()
        cand[:, hh[0], hh[1]] = fp
        img = np.einsum("nki,kl,nlj->nij", cand, j, cand) % p
        ker = np.einsum("nik,kl,njl->nij", cand, j, cand) % p
        ok = ~(img.any(axis=(1, 2)) | ker.any(axis=(1, 2)))
        out.append(cand[ok])
    res = np.concatenate(out) if out else np.zeros((0, 2 * g, 2 * g), dtype=np.int64)
    for f in res:
        if not is_zip_matrix(f, g, p):
            raise OracleError("a member of the isotropic locus is not a zip")
    return res


def zips_with_isotropic(g: int, p: int, r: int, max_points: int = DEFAULT_MAX_POINTS) -> list[Zip]:
    return [Zip(g, p, m) for m in isotropic_zip_matrices(g, r, p, max_points)]


def induced_matrix(f: np.ndarray, g: int, r: int, p: int) -> np.ndarray:
    if not in_isotropic_locus(f, g, r, p):
        raise ValueError("zip does not lie over the isotropic subspace I")
    _, idx_h, _ = _blocks(g, r)
    return f[np.ix_(idx_h, idx_h)] % p


def induced_zip(z: Zip, r: int) -> Zip:
    _check_r(z.g, r)
    out = Zip(z.g - r, z.p, induced_matrix(z.matrix, z.g, r, z.p))
    if not out.is_valid():
        raise OracleError("induced endomorphism is not a zip")
    return out


def pad_zip(zp: Zip, r: int) -> Zip:
    """The zip on H that is zero on I, ``zp`` on H' and the identity on f_1..f_r."""
    g = zp.g + r
    idx_i, idx_h, idx_f = _blocks(g, r)
    f = np.zeros((2 * g, 2 * g), dtype=np.int64)
    f[np.ix_(idx_h, idx_h)] = zp.matrix
    f[np.ix_(idx_f, idx_f)] = np.eye(r, dtype=np.int64)
    return Zip(g, zp.p, f)


@dataclass
class IotaDerivation:
    g: int
    r: int
    p: int
    points: int
    table: dict[ZipInvariant, ZipInvariant]
    eo_table: dict[EOType, EOType]
    fiber_sizes: dict[bytes, int]
    lemma_violations: int

    def constant_fibers(self) -> bool:
        return len(set(self.fiber_sizes.values())) == 1

    def parts_table(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        return {a.parts: b.parts for a, b in self.eo_table.items()}

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "points": self.points,
            "table": sorted([[a.key(), b.key()] for a, b in self.table.items()]),
            "eo_table": sorted([[list(a.parts), list(b.parts)] for a, b in self.eo_table.items()]),
            "fiber_sizes": sorted(set(self.fiber_sizes.values())),
        }


def derive_iota(g: int, r: int, p: int, max_points: int = DEFAULT_MAX_POINTS) -> IotaDerivation:
    """Record (invariant of the induced zip, invariant of the zip) over the
    whole locus; fail hard unless this is an injective function."""
    mats = isotropic_zip_matrices(g, r, p, max_points)
    rel: dict[ZipInvariant, set[ZipInvariant]] = defaultdict(set)
    eo_rel: dict[EOType, set[EOType]] = defaultdict(set)
    fibers: Counter = Counter()
    sub_cache: dict[bytes, ZipAnalysis] = {}
    pairs = []
    for f in mats:
        fp = induced_matrix(f, g, r, p)
        k = fp.tobytes()
        fibers[k] += 1
        if k not in sub_cache:
            sub_cache[k] = analyze_matrix(fp, g - r, p)
        lo = sub_cache[k]
        hi = analyze_matrix(f, g, p)
        rel[lo.invariant].add(hi.invariant)
        eo_rel[lo.eo_type].add(hi.eo_type)
        pairs.append((lo.invariant, hi.invariant))
    for k, v in rel.items():
        if len(v) != 1:
            raise OracleError(f"induced type {k.key()} lies under {len(v)} different types")
    for k, v in eo_rel.items():
        if len(v) != 1:
            raise OracleError(f"EO type {k} lies under {len(v)} different EO types")
    table = {k: next(iter(v)) for k, v in rel.items()}
    if len(set(table.values())) != len(table):
        raise OracleError("the derived map on invariants is not injective")
    eo_table = {k: next(iter(v)) for k, v in eo_rel.items()}
    if len(set(eo_table.values())) != len(eo_table):
        raise OracleError("the derived map on EO types is not injective")
    violations = sum(1 for lo, hi in pairs if table[lo] != hi)
    return IotaDerivation(g, r, p, len(mats), table, eo_table, dict(fibers), violations)


def lemma_check(g: int, r: int, p: int, iota=None, max_points: int = DEFAULT_MAX_POINTS) -> tuple[int, int]:
    """Count zips in the locus whose EO type differs from ``iota`` applied to
    the EO type of the induced zip.  Returns (checked, violations)."""
    if iota is None:
        from .weyl import iota_embedding as iota
    mats = isotropic_zip_matrices(g, r, p, max_points)
    sub_cache: dict[bytes, EOType] = {}
    bad = 0
    for f in mats:
        fp = induced_matrix(f, g, r, p)
        k = fp.tobytes()
        if k not in sub_cache:
            sub_cache[k] = analyze_matrix(fp, g - r, p).eo_type
        if analyze_matrix(f, g, p).eo_type != iota(g, r, sub_cache[k]):
            bad += 1
    return len(mats), bad


def isotropic_subspaces_transitive(g: int, r: int, p: int) -> bool:
    """Whether Sp(H) moves the standard I onto every r-dimensional isotropic
    subspace (orbit of I under the generators vs. brute-force list)."""
    _check_r(g, r)
    sp = space(g, p)
    std = np.zeros((r, 2 * g), dtype=np.int64)
    std[np.arange(r), np.arange(r)] = 1
    key = lambda rows: tuple(map(tuple, gf.row_space(rows, p).tolist()))  # noqa: E731
    seen = {key(std)}
    frontier = [std]
    gens = sp_generators(g, p)
    while frontier:
        nxt = []
        for u in frontier:
            for s in gens:
                v = (u @ s.T) % p
                k = key(v)
                if k not in seen:
                    seen.add(k)
                    nxt.append(v)
        frontier = nxt
    # brute force: all r-subsets of vectors spanning isotropic r-spaces
    allsub = set()
    vecs = sp.vectors[1:]
    for combo in itertools.combinations(range(len(vecs)), r):
        rows = vecs[list(combo)]
        if gf.rank(rows, p) == r and not ((rows @ sp.J @ rows.T) % p).any():
            allsub.add(key(rows))
    return seen == allsub


@dataclass
class PointCounts:
    g: int
    primes: list[int]
    counts: dict[tuple[int, ...], dict[int, int]]

    def dimension_estimates(self) -> dict[tuple[int, ...], dict[int, float]]:
        """``log_p(points)``; informational only."""
        return {
            t: {p: round(math.log(n, p), 3) for p, n in per.items()} for t, per in self.counts.items()
        }

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "primes": self.primes,
            "classes": [
                {
                    "eo_type": list(t),
                    "points": {str(p): n for p, n in per.items()},
                    "log_p_points": {str(p): v for p, v in self.dimension_estimates()[t].items()},
                }
                for t, per in sorted(self.counts.items(), key=lambda kv: (sum(kv[0]), kv[0]))
            ],
        }


def orbit_point_counts(g: int, p_list: Sequence[int]) -> PointCounts:
    if g > 2 or any(p not in (2, 3, 5) for p in p_list):
        raise ResourceGuardError("point counts are limited to g <= 2, p in {2, 3, 5}")
    counts: dict[tuple[int, ...], dict[int, int]] = defaultdict(dict)
    for p in p_list:
        mats = zip_matrices(g, p)
        for t, n in Counter(a.eo_type.parts for a in analyze_batch(mats, g, p)).items():
            counts[t][p] = n
    return PointCounts(g, list(p_list), dict(counts))


IOTA_CASES = ((2, 1, (2, 3)), (3, 2, (2,)), (3, 1, (2,)))


def iota_table_payload(cases=IOTA_CASES) -> dict:
    """The derived EO-type tables in the shipped JSON layout; raises if a
    table depends on the prime."""
    tables = []
    for g, r, primes in cases:
        seen = None
        for p in primes:
            d = derive_iota(g, r, p)
            if d.lemma_violations:
                raise OracleError(f"lemma violated at g={g}, r={r}, p={p}")
            t = sorted([list(a), list(b)] for a, b in d.parts_table().items())
            if seen is not None and t != seen:
                raise OracleError(f"iota table for g={g}, r={r} depends on the prime")
            seen = t
        tables.append({"g": g, "r": r, "primes": list(primes), "map": seen})
    return {"tables": tables}
