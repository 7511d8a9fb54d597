"""Complex lattices and their real equivalents.

Geometry all happens on real generator matrices: LLL reduction, exact
closest-vector enumeration (Fincke-Pohst / Schnorr-Euchner schedule),
theta series with a certified truncation bound, the flatness factor, and
randomized-rounding discrete Gaussian sampling.

Conventions used throughout the package:
  * psi(x) = (Re x, Im x) identifies C^m with R^2m.
  * A ComplexLattice stores its complex generator with columns as the free
    abelian generators; the equivalent real generator stacks real over
    imaginary parts.
  * Gaussian widths follow the complex-noise convention: the Gaussian
    weight is exp(-||x - c||^2 / sigma^2), i.e. variance sigma^2 per
    complex dimension (sigma^2 / 2 per real coordinate).

Lattice objects are immutable after construction; cvp/theta are pure and
sampling takes a caller-supplied numpy Generator.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

__all__ = [
    "Lattice",
    "ComplexLattice",
    "EnumerationBudgetError",
    "SamplerValidityError",
    "psi",
    "psi_inv",
    "lll_reduce",
    "cvp",
    "theta",
    "flatness",
    "volume_vnr",
    "sample_dgauss",
    "sample_dgauss_batch",
]

DEFAULT_NODE_CAP = 5_000_000


class EnumerationBudgetError(Exception):
    """Enumeration exceeded its node budget or point cap."""


class SamplerValidityError(Exception):
    """sigma is below the sampler's validity threshold for this basis."""


def psi(x: np.ndarray) -> np.ndarray:
    """C^m -> R^2m, stacking real over imaginary parts."""
    x = np.asarray(x)
    return np.concatenate([x.real, x.imag])


def psi_inv(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    m = v.shape[0] // 2
    return v[:m] + 1j * v[m:]


# -- LLL ---------------------------------------------------------------------


def lll_reduce(basis: np.ndarray, delta: float = 0.99):
    """LLL-reduce the rows of `basis`; returns (reduced, U) with reduced = U @ basis."""
    B = np.array(basis, dtype=float)
    n = B.shape[0]
    U = np.eye(n, dtype=np.int64)
    mu = np.zeros((n, n))
    norms = np.zeros(n)

    def gso_from(start):
        bstar = np.array(B, dtype=float)
        for i in range(n):
            for j in range(i):
                mu[i, j] = B[i] @ bstar[j] / norms[j]
                bstar[i] -= mu[i, j] * bstar[j]
            norms[i] = bstar[i] @ bstar[i]

    gso_from(0)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q:
                B[k] -= q * B[j]
                U[k] -= q * U[j]
                mu[k, :j] -= q * mu[j, :j]
                mu[k, j] -= q
        if norms[k] >= (delta - mu[k, k - 1] ** 2) * norms[k - 1]:
            k += 1
            continue
        B[[k - 1, k]] = B[[k, k - 1]]
        U[[k - 1, k]] = U[[k, k - 1]]
        m_old = mu[k, k - 1]
        b_new = norms[k] + m_old ** 2 * norms[k - 1]
        mu_new = m_old * norms[k - 1] / b_new
        norms[k] = norms[k - 1] * norms[k] / b_new
        norms[k - 1] = b_new
        for i in range(k + 1, n):
            t = mu[i, k]
            mu[i, k] = mu[i, k - 1] - m_old * t
            mu[i, k - 1] = t + mu_new * mu[i, k]
        mu[[k - 1, k], : k - 1] = mu[[k, k - 1], : k - 1]
        mu[k, k - 1] = mu_new
        k = max(k - 1, 1)
    return B, U


# -- core lattice ------------------------------------------------------------


class Lattice:
    """Real lattice; rows of `basis` are the free abelian generators."""

    def __init__(self, basis):
        self.basis = np.array(basis, dtype=float)
        if self.basis.ndim != 2:
            raise ValueError("basis must be a matrix")
        self.rank = self.basis.shape[0]
        self.ambient_dim = self.basis.shape[1]
        gram = self.basis @ self.basis.T
        det = np.linalg.det(gram)
        if det <= 1e-300:
            raise ValueError("rank-deficient generator matrix")
        self.volume = float(np.sqrt(det))
        self._reduced = None

    def reduced(self):
        """Cached LLL-reduced basis with its unimodular transform."""
        if self._reduced is None:
            R, U = lll_reduce(self.basis)
            q, r = np.linalg.qr(R.T)
            # orient the triangular factor with a positive diagonal
            sgn = np.sign(np.diag(r))
            sgn[sgn == 0] = 1.0
            r = (r.T * sgn).T
            q = q * sgn
            self._reduced = (R, U, q, r)
        return self._reduced

    def scale(self, c: float) -> "Lattice":
        return Lattice(self.basis * c)

    def dual(self) -> "Lattice":
        gram = self.basis @ self.basis.T
        return Lattice(np.linalg.solve(gram, self.basis))

    def gso_norms(self, reduce_first: bool = True) -> np.ndarray:
        if reduce_first:
            _, _, _, r = self.reduced()
            return np.abs(np.diag(r))
        q, r = np.linalg.qr(self.basis.T)
        return np.abs(np.diag(r))

    def point(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=float) @ self.basis

    def __repr__(self):
        return f"Lattice(rank={self.rank}, dim={self.ambient_dim}, vol={self.volume:.6g})"


class ComplexLattice:
    """Complex lattice: generator columns in C^m plus the equivalent real lattice."""

    def __init__(self, generator_c: np.ndarray, label: str = ""):
        Bc = np.array(generator_c, dtype=complex)
        m, k = Bc.shape
        if k != 2 * m:
            raise ValueError("complex generator must be m x 2m")
        self.generator_c = Bc
        self.real_generator = np.vstack([Bc.real, Bc.imag])
        self.real_lattice = Lattice(self.real_generator.T)
        self.volume = self.real_lattice.volume
        self.m = m
        self.label = label

    @classmethod
    def from_zi_generator(cls, B: np.ndarray, label: str = "") -> "ComplexLattice":
        """Z[i]-lattice with square complex generator B: free generators (B | iB)."""
        B = np.array(B, dtype=complex)
        return cls(np.hstack([B, 1j * B]), label=label)

    @classmethod
    def from_real_rows(cls, rows: np.ndarray, label: str = "") -> "ComplexLattice":
        rows = np.asarray(rows, dtype=float)
        n = rows.shape[1]
        if rows.shape[0] != n or n % 2:
            raise ValueError("need a square real basis of even dimension")
        m = n // 2
        Bc = (rows[:, :m] + 1j * rows[:, m:]).T
        return cls(Bc, label=label)

    def point(self, coords) -> np.ndarray:
        return self.generator_c @ np.asarray(coords, dtype=float)

    def scale(self, c: float) -> "ComplexLattice":
        return ComplexLattice(self.generator_c * c, label=self.label)

    def dual(self) -> "ComplexLattice":
        """Dual under the pairing Re(y^H x); real equivalent is the real dual."""
        dual_rows = self.real_lattice.dual().basis
        return ComplexLattice.from_real_rows(dual_rows, label=f"{self.label}*")

    def __repr__(self):
        return f"ComplexLattice(m={self.m}, vol={self.volume:.6g}, label={self.label!r})"


def _as_real_lattice(lat) -> Lattice:
    return lat.real_lattice if isinstance(lat, ComplexLattice) else lat


# -- enumeration -------------------------------------------------------------


def _enum_prepare(lat: Lattice, target_ambient):
    R_red, U, q, r = lat.reduced()
    t = q.T @ np.asarray(target_ambient, dtype=float)
    resid = np.asarray(target_ambient, dtype=float) - q @ t
    return r, t, float(resid @ resid), U


def _enumerate(r, t, radius2, node_cap, collect, best_only):
    """Depth-first enumeration of ||r z - t||^2 <= radius2, r upper triangular.

    collect: list receiving (dist2, z tuple). best_only keeps the running
    minimum (plus exact ties within a relative 1e-12 band).
    """
    n = r.shape[0]
    z = np.zeros(n, dtype=np.int64)
    # partial[i] = squared distance accumulated from levels > i
    centers = np.zeros(n)
    steps = np.zeros(n, dtype=np.int64)
    partial = np.zeros(n + 1)
    residual = np.zeros((n, n))
    residual[n - 1] = t
    best = radius2
    nodes = 0
    i = n - 1

    def center(i):
        return residual[i][i] / r[i, i]

    centers[i] = center(i)
    z[i] = round(centers[i])
    steps[i] = 1 if centers[i] >= z[i] else -1
    while True:
        nodes += 1
        if nodes > node_cap:
            raise EnumerationBudgetError(f"enumeration exceeded {node_cap} nodes")
        d = residual[i][i] - z[i] * r[i, i]
        dist = partial[i + 1] + d * d
        tol = 1e-12 * max(1.0, best)
        if dist <= best + tol:
            if i == 0:
                collect.append((dist, tuple(z)))
                if best_only and dist < best:
                    best = dist
            else:
                partial[i] = dist
                residual[i - 1, :i] = residual[i, :i] - z[i] * r[:i, i]
                i -= 1
                centers[i] = center(i)
                z[i] = round(centers[i])
                steps[i] = 1 if centers[i] >= z[i] else -1
                continue
        else:
            if i == n - 1:
                return best
            i += 1
        # zigzag to the next candidate at level i
        z[i] += steps[i]
        steps[i] = -steps[i] - (1 if steps[i] > 0 else -1)
        # after first move: step sequence c, c+1, c-1, c+2, ...
    return best


def cvp(lat, target, node_cap: int = DEFAULT_NODE_CAP):
    """Exact closest lattice point; ties broken by the lexicographically
    smallest coordinate vector in the reduced basis.

    Accepts a Lattice with a real target or a ComplexLattice with a complex
    target.  Returns (point, coords) with coords in the original basis.
    """
    complex_in = isinstance(lat, ComplexLattice)
    real = _as_real_lattice(lat)
    t_amb = psi(target) if complex_in else np.asarray(target, dtype=float)
    r, t, _, U = _enum_prepare(real, t_amb)
    # initial radius from the rounding (Babai) point, slightly padded
    zb = np.zeros(real.rank)
    c = t.copy()
    for i in range(real.rank - 1, -1, -1):
        zb[i] = round(c[i] / r[i, i])
        c[: i + 1] -= zb[i] * r[: i + 1, i]
    radius2 = float(c @ c) * (1 + 1e-9) + 1e-12
    found: list = []
    _enumerate(r, t, radius2, node_cap, found, best_only=True)
    best = min(d for d, _ in found)
    ties = [z for d, z in found if d <= best + 1e-12 * max(1.0, best)]
    z = np.array(min(ties), dtype=np.int64)
    coords = z @ U
    point = coords @ real.basis
    if complex_in:
        return psi_inv(point), coords
    return point, coords


def enumerate_ball(lat, radius: float, node_cap: int = DEFAULT_NODE_CAP):
    """All (coords, dist2) with ||x|| <= radius, coords in the original basis."""
    real = _as_real_lattice(lat)
    r, t, _, U = _enum_prepare(real, np.zeros(real.ambient_dim))
    found: list = []
    _enumerate(r, t, radius * radius * (1 + 1e-12), node_cap, found, best_only=False)
    out = []
    for d, z in found:
        out.append((np.array(z, dtype=np.int64) @ U, d))
    return out


def shortest_vector(lat, node_cap: int = DEFAULT_NODE_CAP):
    """A shortest nonzero vector (point, norm^2)."""
    real = _as_real_lattice(lat)
    start = float(min(np.sum(real.basis ** 2, axis=1)))
    pts = enumerate_ball(real, math.sqrt(start) * (1 + 1e-12), node_cap)
    best = None
    for coords, d in pts:
        if d > 1e-18 and (best is None or d < best[1]):
            best = (coords, d)
    return best[0] @ real.basis, best[1]


# -- theta series and flatness ------------------------------------------------


def _theta_tail_bound(lat: Lattice, tau: float, radius: float) -> float:
    """Upper bound on sum_{||x|| > R} exp(-pi tau ||x||^2).

    Uses the ball-counting bound N(r) <= vol(B_{r + mu0}) / V with
    mu0 = (1/2) sqrt(sum ||b_i||^2) (a covering-radius bound for the
    reduced basis), integrated against the Gaussian shell weight.
    """
    n = lat.rank
    R_red, _, _, _ = lat.reduced()
    mu0 = 0.5 * math.sqrt(float(np.sum(R_red ** 2)))
    ball_const = math.pi ** (n / 2) / math.gamma(n / 2 + 1) / lat.volume

    def integrand(r):
        return 2 * math.pi * tau * r * math.exp(-math.pi * tau * r * r) \
            * ball_const * (r + mu0) ** n

    # beyond hi the integrand's log-derivative is <= -pi tau r, so the
    # remaining mass is at most integrand(hi) / (pi tau hi)
    hi = radius + 2.0 * math.sqrt((n + 1) / (math.pi * tau)) + 10 * mu0 + 10
    val, _ = integrate.quad(integrand, radius, hi, limit=200)
    tail_beyond_hi = integrand(hi) / (math.pi * tau * hi)
    return float(val + tail_beyond_hi)


def theta(lat, tau: float, tol: float = 1e-9, node_cap: int = DEFAULT_NODE_CAP) -> float:
    """Theta series sum_{x in L} exp(-pi tau ||x||^2), truncated below `tol`."""
    if tau <= 0 or tol <= 0:
        raise ValueError("tau and tol must be positive")
    real = _as_real_lattice(lat)
    radius = math.sqrt(max(real.volume ** (2.0 / real.rank), 1.0) / tau)
    for _ in range(60):
        if _theta_tail_bound(real, tau, radius) < tol:
            break
        radius *= 1.3
    else:
        raise EnumerationBudgetError("theta truncation bound did not converge")
    pts = enumerate_ball(real, radius, node_cap)
    dists = np.array([d for _, d in pts])
    return float(np.sum(np.exp(-math.pi * tau * dists)))


def volume_vnr(lat, sigma: float):
    """(volume, VNR, normalized log density) in the complex-dimension convention.

    VNR = V^(1/m) / sigma^2 and delta = log(V) / m with m = (real rank)/2
    complex dimensions.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    real = _as_real_lattice(lat)
    if real.rank % 2:
        raise ValueError("VNR needs an even-rank (complexifiable) lattice")
    m = real.rank // 2
    v = real.volume
    return v, v ** (1.0 / m) / sigma ** 2, math.log(v) / m


def flatness(lat, sigma: float, tol: float = 1e-8) -> float:
    """Flatness factor via both theta expressions; returns the dual-side value.

    The primal form (VNR/pi)^m * Theta(1/(pi sigma^2)) - 1 and the dual form
    Theta_dual(pi sigma^2) - 1 are both evaluated; disagreement beyond the
    combined truncation tolerance signals an enumeration bug and raises.
    """
    real = _as_real_lattice(lat)
    if real.rank % 2:
        raise ValueError("flatness uses the complex-dimension convention; need even rank")
    if real.rank != real.ambient_dim:
        raise ValueError("flatness needs a full-rank lattice")
    m = real.rank // 2
    _, gamma, _ = volume_vnr(real, sigma)
    factor = (gamma / math.pi) ** m
    tol_primal = tol / (4 * max(factor, 1.0))
    tol_dual = tol / 4
    primal = factor * theta(real, 1.0 / (math.pi * sigma ** 2), tol_primal) - 1.0
    dual_val = theta(real.dual(), math.pi * sigma ** 2, tol_dual) - 1.0
    gap = abs(primal - dual_val)
    allowed = tol + 1e-12 * max(1.0, abs(dual_val))
    if gap > allowed:
        raise ArithmeticError(
            f"flatness expressions disagree: {primal} vs {dual_val} (tol {allowed})")
    return dual_val


# -- discrete Gaussian sampling ------------------------------------------------


def _dgauss_int_batch(s, c, rng):
    """Batched exact sampling from D_{Z, s, c} with weight exp(-(z-c)^2/s^2)."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    n = c.shape[0]
    halfwidth = int(math.ceil(10.0 * s)) + 2
    base = np.round(c).astype(np.int64)
    offsets = np.arange(-halfwidth, halfwidth + 1)
    zs = base[:, None] + offsets[None, :]
    logw = -((zs - c[:, None]) ** 2) / (s * s)
    logw -= logw.max(axis=1, keepdims=True)
    w = np.exp(logw)
    w /= w.sum(axis=1, keepdims=True)
    u = rng.random(n)
    idx = (np.cumsum(w, axis=1) < u[:, None]).sum(axis=1)
    idx = np.minimum(idx, zs.shape[1] - 1)
    return zs[np.arange(n), idx]


def sampler_validity_threshold(lat, eta: float = 1.0) -> float:
    real = _as_real_lattice(lat)
    return eta * float(np.max(real.gso_norms()))


def sample_dgauss_batch(lat, sigma: float, n: int, rng, center=None, eta: float = 1.0):
    """n samples from the discrete Gaussian D_{L, sigma, c} (Klein/GPV rounding).

    Randomized rounding on the Gram-Schmidt decomposition of the reduced
    basis; requires sigma >= eta * max_i ||b_i*||.  Returns (points, coords)
    with coords in the original basis; points are rows in the real ambient
    space (complex rows for a ComplexLattice input).
    """
    complex_in = isinstance(lat, ComplexLattice)
    real = _as_real_lattice(lat)
    thresh = sampler_validity_threshold(real, eta)
    if sigma < thresh:
        raise SamplerValidityError(
            f"sigma={sigma} below validity threshold {thresh:.6g} for this basis")
    R_red, U, q, r = real.reduced()
    k = real.rank
    if center is None:
        t = np.zeros(k)
    else:
        c_amb = psi(center) if complex_in else np.asarray(center, dtype=float)
        t = q.T @ c_amb
    z = np.zeros((n, k), dtype=np.int64)
    resid = np.tile(t, (n, 1))
    for i in range(k - 1, -1, -1):
        ci = resid[:, i] / r[i, i]
        si = sigma / abs(r[i, i])
        z[:, i] = _dgauss_int_batch(si, ci, rng)
        resid[:, :i] -= z[:, i][:, None] * r[:i, i][None, :]
    coords = z @ U
    pts = coords @ real.basis
    if complex_in:
        m = real.ambient_dim // 2
        return pts[:, :m] + 1j * pts[:, m:], coords
    return pts, coords


def sample_dgauss(lat, sigma: float, rng, center=None, eta: float = 1.0):
    """Single discrete Gaussian sample; see sample_dgauss_batch."""
    pts, coords = sample_dgauss_batch(lat, sigma, 1, rng, center=center, eta=eta)
    return pts[0], coords[0]
