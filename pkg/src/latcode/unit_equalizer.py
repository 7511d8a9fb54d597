"""Unit-group equalization for diagonal channels.

The group of units of O_K, pushed through u -> (log|sigma_1(u)|^2, ...,
log|sigma_n(u)|^2), is a lattice in the sum-zero hyperplane of R^n.
Quantizing the log-magnitudes of a normalized diagonal channel onto this
lattice absorbs ill-conditioned realizations into a unit multiplication;
the leftover error matrix has Frobenius norm at most sqrt(n) e^rho.

Fundamental units are found by bounded coordinate search, reduced to an
independent system with exact unit arithmetic, and certified by checking
that no sub-multiple log vector is realized by a unit.

Regulator and radius conventions (rank 1, n = 2): R_K is the coordinate
amplitude |log|sigma_1(u_1)|^2| of the fundamental generator and
rho = R_K / 2, which makes the worst-case error exactly sqrt(2 cosh rho)
at the deep hole.  For rank >= 2 the regulator is the volume of the
embedded log lattice and rho its Euclidean covering radius.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .lattice_core import Lattice, cvp, enumerate_ball
from .numberfield import FieldElement, NumberField

__all__ = [
    "LogLattice",
    "UnitQuantization",
    "UnitSearchError",
    "log_embed",
    "build_log_lattice",
    "quantize_channel",
]


class UnitSearchError(Exception):
    """Unit search budget exhausted without a certified fundamental system."""


def log_embed(u: FieldElement) -> np.ndarray:
    """(log|sigma_1(u)|^2, ..., log|sigma_n(u)|^2); coordinate sum is 0 for units."""
    if not u.is_unit():
        raise ValueError("log embedding is defined for units")
    return np.log(np.abs(u.embed()) ** 2)


def _unit_candidates(field: NumberField, bound: int):
    """All units with integral-basis coordinates in [-bound, bound]."""
    d = field.degree
    rng_axis = np.arange(-bound, bound + 1)
    grids = np.meshgrid(*([rng_axis] * d), indexing="ij")
    coords = np.stack([g.ravel() for g in grids], axis=1)
    coords = coords[np.any(coords != 0, axis=1)]
    vals = coords @ field.embed_all_matrix.T
    absn = np.abs(np.prod(vals, axis=1))
    cand = coords[np.abs(absn - 1.0) < 0.3]
    units = []
    for row in sorted(map(tuple, cand.tolist())):
        x = field.element_from_coords(row)
        if x.is_unit():
            units.append(x)
    return units


def _is_torsion(u: FieldElement) -> bool:
    if np.max(np.abs(np.abs(u.embed_all()) - 1.0)) > 1e-9:
        return False
    one = u.field.one()
    w = u
    for _ in range(12):
        if w == one:
            return True
        w = w * u
    return False


def _reduce_against(u, basis):
    """Subtract rounded integer combinations of basis log vectors, exactly."""
    lv = log_embed(u)
    for _ in range(40):
        if not basis:
            break
        G = np.array([log_embed(b) for b in basis])
        z, *_ = np.linalg.lstsq(G.T, lv, rcond=None)
        zr = np.round(z).astype(int)
        if not np.any(zr):
            break
        for b, k in zip(basis, zr):
            if k:
                u = u * b.pow(-int(k))
        lv = log_embed(u)
    return u, lv


def _independent_system(field, units, rank):
    """Greedy exact reduction of found units to an independent generating system."""
    pool = sorted(units, key=lambda x: float(np.linalg.norm(log_embed(x))))
    basis: list = []
    for u in pool:
        u_red, lv = _reduce_against(u, basis)
        if np.linalg.norm(lv) < 1e-8:
            continue
        basis.append(u_red)
        # keep the system short: re-reduce everything until stable
        for _ in range(10):
            changed = False
            basis.sort(key=lambda x: float(np.linalg.norm(log_embed(x))))
            for i in range(len(basis)):
                others = basis[:i] + basis[i + 1:]
                red, lvr = _reduce_against(basis[i], others)
                if np.linalg.norm(lvr) < 1e-8:
                    basis.pop(i)
                    changed = True
                    break
                if red != basis[i]:
                    basis[i] = red
                    changed = True
            if not changed:
                break
    if len(basis) != rank:
        raise UnitSearchError(
            f"found unit rank {len(basis)}, expected {rank}; widen the search bound")
    return basis


def _unit_with_log(field: NumberField, target: np.ndarray, bound: int = 6):
    """A unit whose log embedding matches `target`, or None.

    Totally real fields admit a direct solve (conjugate magnitudes determine
    the element up to signs); otherwise fall back to bounded search.
    """
    if field.is_totally_real:
        mags = np.exp(np.asarray(target) / 2.0)
        M = field.embed_all_matrix.real
        for signs in itertools.product((1.0, -1.0), repeat=field.degree):
            vals = np.array(signs) * mags
            coords = np.linalg.solve(M, vals)
            rounded = np.round(coords)
            if np.max(np.abs(coords - rounded)) > 1e-6:
                continue
            x = field.element_from_coords([int(v) for v in rounded])
            if x.is_unit() and np.linalg.norm(log_embed(x) - target) < 1e-6:
                return x
        return None
    for u in _unit_candidates(field, bound):
        if np.linalg.norm(log_embed(u) - target) < 1e-6:
            return u
    return None


def _in_group(field, u, basis):
    red, lv = _reduce_against(u, basis)
    return np.linalg.norm(lv) < 1e-8 and _is_torsion(red)


def _torsion_generator(field, units):
    best = field.element_from_coords([-1] + [0] * (field.degree - 1))
    best_order = 2
    for u in units:
        if not _is_torsion(u):
            continue
        order, w = 1, u
        while w != field.one() and order <= 12:
            w = w * u
            order += 1
        if order > best_order:
            best, best_order = u, order
    return best, best_order


def _covering_radius_voronoi(lat: Lattice) -> float:
    """Euclidean covering radius from Voronoi-cell vertices (rank <= 3)."""
    r = lat.rank
    q, rr = np.linalg.qr(lat.basis.T)
    span = Lattice(rr.T)
    red, _, _, rfac = span.reduced()
    rho_ub = 0.5 * math.sqrt(float(np.sum(red ** 2)))
    cands = [np.asarray(c, dtype=np.int64) @ span.basis
             for c, d in enumerate_ball(span, 2 * rho_ub * (1 + 1e-9)) if d > 1e-18]
    if len(cands) > 400:
        raise UnitSearchError("voronoi candidate explosion; basis too skewed")
    best = 0.0
    for subset in itertools.combinations(range(len(cands)), r):
        A = np.array([cands[i] for i in subset])
        b = 0.5 * np.sum(A * A, axis=1)
        try:
            x = np.linalg.solve(A, b)
        except np.linalg.LinAlgError:
            continue
        ok = all(float(x @ v) <= 0.5 * float(v @ v) + 1e-9 for v in cands)
        if ok:
            best = max(best, float(np.linalg.norm(x)))
    return best


@dataclass(frozen=True)
class LogLattice:
    """Embedded unit-group lattice with regulator and covering data."""

    field: NumberField
    fundamental_units: tuple
    torsion_generator: FieldElement
    torsion_order: int
    generators: np.ndarray      # (rank, n), rows are log embeddings
    lattice: Lattice
    regulator: float
    covering_radius: float

    @property
    def rank(self) -> int:
        return self.generators.shape[0]

    @property
    def n(self) -> int:
        return self.generators.shape[1]

    def unit_from_exponents(self, exponents) -> FieldElement:
        u = self.field.one()
        for b, k in zip(self.fundamental_units, exponents):
            if k:
                u = u * b.pow(int(k))
        return u


_DEFAULT_BOUNDS = {2: 16, 4: 8}


def build_log_lattice(field: NumberField, search_bound: int | None = None) -> LogLattice:
    """Fundamental units by bounded search, with sub-multiple certification.

    Raises UnitSearchError if the search cannot produce (or certify) a
    full-rank system within the budget.
    """
    r1, r2 = field.signature
    rank = r1 + r2 - 1
    if rank < 1:
        raise ValueError("unit group has rank 0; no log lattice to build")
    bound = search_bound or _DEFAULT_BOUNDS[field.degree]
    units = _unit_candidates(field, bound)
    basis = _independent_system(field, units, rank)

    # certify: no unit realizes a proper fraction of a lattice vector
    for _ in range(8):
        G = np.array([log_embed(b) for b in basis])
        extra = None
        for qprime in (2, 3, 5, 7):
            for cls in itertools.product(range(qprime), repeat=rank):
                if not any(cls):
                    continue
                target = (np.array(cls, dtype=float) @ G) / qprime
                u = _unit_with_log(field, target)
                if u is not None and not _in_group(field, u, basis):
                    extra = u
                    break
            if extra is not None:
                break
        if extra is None:
            break
        basis = _independent_system(field, basis + [extra], rank)
    else:
        raise UnitSearchError("sub-multiple certification did not stabilize")

    # deterministic orientation: first nonzero coordinate positive, sorted rows
    oriented = []
    for b in basis:
        lv = log_embed(b)
        lead = lv[np.argmax(np.abs(lv) > 1e-12)]
        if lead < 0:
            b = b.inv()
            lv = -lv
        oriented.append((tuple(np.round(lv, 9)), b))
    oriented.sort()
    basis = [b for _, b in oriented]

    G = np.array([log_embed(b) for b in basis])
    if np.max(np.abs(G.sum(axis=1))) > 1e-9:
        raise ArithmeticError("log vectors do not sum to zero; non-unit slipped in")
    lat = Lattice(G)
    n = G.shape[1]
    if rank == 1 and n == 2:
        reg = float(np.linalg.norm(G[0]) / math.sqrt(2.0))
        rho = reg / 2.0
    else:
        reg = lat.volume
        rho = _covering_radius_voronoi(lat)
    zeta, order = _torsion_generator(field, units)
    return LogLattice(field, tuple(basis), zeta, order, G, lat, reg, rho)


@dataclass(frozen=True)
class UnitQuantization:
    """Result of absorbing a normalized diagonal channel into a unit."""

    unit: FieldElement
    exponents: tuple
    unit_diag: np.ndarray
    error_diag: np.ndarray
    error_norm: float

    def error_matrix(self) -> np.ndarray:
        return np.diag(self.error_diag)

    def unit_matrix(self) -> np.ndarray:
        return np.diag(self.unit_diag)


def quantize_channel(h_diag, loglat: LogLattice, det_tol: float = 1e-6) -> UnitQuantization:
    """Nearest-unit decode of a normalized diagonal channel.

    h_diag: the diagonal entries (or a diagonal matrix) with
    |prod h_i|^2 = 1.  The log-magnitude vector is decoded in the log
    lattice; ties inherit the deterministic lexicographic break of cvp.
    Satisfies ||E||_F <= sqrt(n) e^rho, and for n = 2 the tight bound
    sqrt(2 cosh rho).
    """
    h = np.asarray(h_diag)
    if h.ndim == 2:
        if np.max(np.abs(h - np.diag(np.diag(h)))) > 1e-12:
            raise ValueError("channel must be diagonal")
        h = np.diag(h)
    n = loglat.n
    if h.shape[0] != n:
        raise ValueError(f"channel size {h.shape[0]} != log lattice components {n}")
    logs = np.log(np.abs(h) ** 2)
    total = float(np.sum(logs))
    if abs(total) > det_tol * n:
        raise ValueError(f"channel is not determinant-normalized (sum of log|h|^2 = {total:.3g})")
    _, coords = cvp(loglat.lattice, logs)
    u = loglat.unit_from_exponents(coords)
    udiag = u.embed()
    ediag = h / udiag
    enorm = float(np.sqrt(np.sum(np.abs(ediag) ** 2)))
    return UnitQuantization(u, tuple(int(c) for c in coords), udiag, ediag, enorm)
