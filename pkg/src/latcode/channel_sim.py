"""Channel models, Monte-Carlo trial runner, and the command-line interface.

Channel kinds:
  * compound-bf: diagonal real channels with |det H^H H| = D, drawn by
    renormalizing iid log-normal magnitudes; an adversarial switch produces
    the fixed worst-case diag(1/p^2, p^2, ...) realization.
  * compound-mimo: dense complex channels renormalized to the same
    determinant constraint.
  * ergodic: iid unit-power Rayleigh coefficients, one per channel use.

Simulations are a pure function of SimConfig (seed included).  Trials draw
independent substreams keyed by (seed, stream, chunk), so results do not
depend on chunking or execution order.  Error counting always means exact
message equality, never Euclidean proximity.

VNR conventions: reported VNRs are complex-dimension (V^(1/m)/sigma^2)
unless suffixed _real; the ergodic threshold is reported in both the
pi*e (complex) and 2*pi*e (real) normalizations since the two appear side
by side in the source material.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import integrate

from . import numberfield as nf
from .construction_a import LinearCode, lift_compound, lift_ergodic, random_code
from .lattice_core import (ComplexLattice, EnumerationBudgetError, Lattice, cvp,
                           enumerate_ball, flatness, sample_dgauss_batch, theta,
                           volume_vnr)
from .mimo_codec import decoupled_decode, decoupled_params, gap_bound, map_decode, mmse_matrices
from .unit_equalizer import build_log_lattice

__all__ = [
    "ConfigError",
    "ChannelModel",
    "SimConfig",
    "SimResult",
    "gen_channel",
    "capacity",
    "capacity_ergodic_mc",
    "wilson_ci",
    "run_trials",
    "sweep",
    "main",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ["seed", "T", "p", "k", "snr_db", "rate_nats", "capacity_nats",
               "vnr", "wer", "wer_ci_lo", "wer_ci_hi"]

_TRIAL_CHUNK = 250


class ConfigError(Exception):
    """Invalid simulation configuration."""


# -- channel models -------------------------------------------------------------


@dataclass(frozen=True)
class ChannelModel:
    kind: str = "compound-bf"          # compound-bf | compound-mimo | ergodic
    m: int = 2
    det_constraint: float = 1.0        # D in |det H^H H| = D
    snr: float | None = None           # rho for capacity reporting
    adversarial: bool = False
    adversarial_p: float = 10.0
    log_spread: float = 1.0            # std of iid log-magnitudes before renorm
    fading: str = "rayleigh"

    def validate(self):
        if self.kind not in ("compound-bf", "compound-mimo", "ergodic"):
            raise ConfigError(f"unknown channel kind {self.kind!r}")
        if self.det_constraint <= 0:
            raise ConfigError("det constraint must be positive")
        if self.kind == "ergodic" and self.fading != "rayleigh":
            raise ConfigError("only Rayleigh ergodic fading is shipped")


def gen_channel(model: ChannelModel, rng, size: int | None = None):
    """One channel realization (or a batch of diagonal ones for compound-bf).

    compound-bf returns positive diagonal entries with prod h_i^2 = D;
    compound-mimo a complex matrix with |det H^H H| = D; ergodic a vector
    of iid CN(0, 1) coefficients.
    """
    m = model.m
    D = model.det_constraint
    if model.kind == "compound-bf":
        if model.adversarial:
            q = model.adversarial_p
            h = np.concatenate([[1.0 / q ** 2, q ** 2],
                                np.full(m - 2, D ** (1.0 / (m - 2)) if m > 2 else 1.0)])[:m]
            h = h * (D ** (1 / (2 * m)) / np.exp(np.mean(np.log(h))))
            return np.tile(h, (size, 1)) if size else h
        n = size or 1
        g = rng.normal(size=(n, m)) * model.log_spread
        g = g - g.mean(axis=1, keepdims=True)
        h = np.exp(g) * D ** (1 / (2 * m))
        return h if size else h[0]
    if model.kind == "compound-mimo":
        H = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        d = abs(np.linalg.det(H.conj().T @ H))
        return H * (D / d) ** (1 / (2 * m))
    # ergodic
    n = size or 1
    h = (rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))) / math.sqrt(2)
    return h if size else h[0]


def capacity(model: ChannelModel, H=None, snr: float | None = None) -> float:
    """White-input capacity in nats per channel use.

    compound: log det(I + snr H^H H); ergodic: E[log(1 + |h|^2 snr)] by
    Gauss quadrature of the exponential magnitude distribution.
    """
    rho = snr if snr is not None else model.snr
    if rho is None:
        raise ConfigError("capacity needs an SNR")
    if model.kind == "ergodic":
        val, _ = integrate.quad(lambda t: math.exp(-t) * math.log1p(t * rho),
                                0, np.inf, limit=200)
        return float(val)
    if H is None:
        raise ConfigError("compound capacity needs a channel realization")
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    if H.shape[0] == 1 or H.ndim == 1:
        H = np.diag(np.ravel(H)).astype(complex)
    m = H.shape[1]
    return float(np.log(abs(np.linalg.det(np.eye(m) + rho * (H.conj().T @ H)))))


def capacity_ergodic_mc(snr: float, samples: int, rng) -> float:
    h2 = rng.exponential(size=samples)
    return float(np.mean(np.log1p(h2 * snr)))


def wilson_ci(errors: int, trials: int, z: float = 1.959964) -> tuple:
    """95% Wilson score interval for an error count."""
    if trials <= 0:
        return (0.0, 1.0)
    phat = errors / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials ** 2)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


# -- configuration ----------------------------------------------------------------


@dataclass
class SimConfig:
    """A full experiment description; results are a pure function of it."""

    channel: ChannelModel
    code_field: str = "golden"
    p: int = 29
    T: int = 16
    k: int = 1
    mode: str = "infinite"             # infinite | power
    decoder: str = "decoupled"         # map | decoupled | zf | mod-p
    sigma_w: float | None = None
    sigma_s: float | None = None
    vnr_margin_db: float | None = None
    trials: int = 1000
    seed: int | None = None
    window: int = 1                    # half-width of the uniform coset window

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        d = dict(d)
        ch = d.pop("channel", {})
        try:
            return cls(channel=ChannelModel(**ch), **d)
        except TypeError as e:
            raise ConfigError(f"bad config key: {e}") from e

    def to_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "channel"}
        out["channel"] = dict(self.channel.__dict__)
        return out

    def validate(self):
        self.channel.validate()
        if self.seed is None:
            raise ConfigError("seed is mandatory")
        if self.trials <= 0 or self.T <= 0 or self.k < 0:
            raise ConfigError("counts must be positive")
        if self.mode not in ("infinite", "power"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.decoder not in ("map", "decoupled", "zf", "mod-p"):
            raise ConfigError(f"unknown decoder {self.decoder!r}")
        if self.channel.kind == "ergodic":
            if self.decoder != "map":
                raise ConfigError("ergodic simulations ship with the map decoder")
            if self.sigma_w is None:
                raise ConfigError("ergodic simulations need sigma_w")
        elif self.mode == "infinite":
            if (self.sigma_w is None) == (self.vnr_margin_db is None):
                raise ConfigError("infinite mode needs exactly one of sigma_w, vnr_margin_db")
        else:
            if self.sigma_w is None or self.sigma_s is None:
                raise ConfigError("power mode needs sigma_w and sigma_s")


@dataclass
class SimResult:
    config: dict
    trials: int
    errors: int
    wer: float
    wer_ci: tuple
    rate_nats: float
    capacity_nats: float
    vnr: float
    vnr_margin_db: float
    log_density: float
    log_density_threshold: float
    wall_time_s: float
    extras: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["wer_ci"] = list(self.wer_ci)
        return d

    def csv_row(self) -> list:
        cfg = self.config
        snr_db = self.extras.get("snr_db", float("nan"))
        return [cfg.get("seed"), cfg.get("T"), cfg.get("p"), cfg.get("k"),
                snr_db, self.rate_nats, self.capacity_nats, self.vnr,
                self.wer, self.wer_ci[0], self.wer_ci[1]]


def _stream(seed: int, *key) -> np.random.Generator:
    return np.random.default_rng([seed] + [int(x) & 0x7FFFFFFF for x in key])


# -- batched exact CVP on a small fixed lattice -----------------------------------


class _BatchedCVP:
    """Exact batched CVP on a fixed low-dimensional lattice.

    Babai nearest-plane on the reduced basis followed by an offset search:
    the offset set contains every lattice vector within (covering radius +
    Babai residual bound), so the minimum over candidates is the true
    closest point.
    """

    def __init__(self, rows: np.ndarray):
        self.lat = Lattice(rows)
        red, U, q, r = self.lat.reduced()
        self.red, self.U, self.q, self.r = red, U, q, r
        bound = math.sqrt(float(np.sum(np.abs(np.diag(r)) ** 2)))  # 2 * (1/2)*sqrt(sum)
        offs = enumerate_ball(Lattice(red), bound * (1 + 1e-9))
        self.off_coords = np.array([c for c, _ in offs], dtype=np.int64)
        self.off_points = self.off_coords @ red

    def decode(self, targets: np.ndarray):
        """targets: (N, dim) real.  Returns (coords in original basis, dist^2)."""
        n = targets.shape[0]
        rank = self.red.shape[0]
        t = targets @ self.q
        z = np.zeros((n, rank), dtype=np.int64)
        c = t.copy()
        for i in range(rank - 1, -1, -1):
            z[:, i] = np.round(c[:, i] / self.r[i, i])
            c[:, : i + 1] -= z[:, i][:, None] * self.r[: i + 1, i][None, :]
        base_pts = z @ self.red
        cand = base_pts[:, None, :] + self.off_points[None, :, :]
        # compare against the in-span projection; the orthogonal part is common
        proj = t @ self.q.T
        d2 = np.sum((cand - proj[:, None, :]) ** 2, axis=2)
        j = np.argmin(d2, axis=1)
        coords = (z + self.off_coords[j]) @ self.U
        perp = np.sum(targets * targets, axis=1) - np.sum(proj * proj, axis=1)
        return coords, d2[np.arange(n), j] + np.maximum(perp, 0.0)


# -- structured decoders ------------------------------------------------------------


class _AlgebraicSystem:
    """Compound Construction-A code with an exact per-component coset decoder."""

    def __init__(self, cfg: SimConfig):
        field = nf.get_field(cfg.code_field)
        if field.signature[0] != 0:
            raise ConfigError("compound codes need a totally complex field")
        self.field = field
        self.split = nf.split_prime(field, cfg.p)
        code_rng = _stream(cfg.seed, 0)
        self.code = random_code(cfg.p, self.split.residue_degree, cfg.T, cfg.k, code_rng)
        self.cal = lift_compound(field, self.split, self.code)
        self.m = field.n_components
        self.T = cfg.T
        self.scale = self.cal.volume ** (-1.0 / (2 * self.m * self.T))
        self.lattice = self.cal.lattice.scale(self.scale)

        q = self.code.gf.order
        self.lift_emb = np.array([self.split.lift(s).embed() for s in range(q)],
                                 dtype=complex) * self.scale
        g = self.split.generator
        kernel = [(b * g).embed() for b in field.basis()]
        self.kernel_emb = np.array(kernel, dtype=complex) * self.scale
        base_rows = np.hstack([self.kernel_emb.real, self.kernel_emb.imag])
        self.base_cvp = _BatchedCVP(base_rows)
        self.codewords = self.code.codewords()
        self.loglat = build_log_lattice(field)
        # rank-1 fast quantization data
        gvec = self.loglat.generators[0]
        self.log_gen = gvec
        self.unit_diag = self.loglat.fundamental_units[0].embed()

    def transmit(self, rng, n: int, window: int):
        """n uniform window points: returns (messages, X (n, m*T) complex)."""
        M = self.codewords.shape[0]
        ci = rng.integers(0, M, size=n)
        kco = rng.integers(-window, window + 1, size=(n, self.T, self.field.degree))
        cw = self.codewords[ci]
        pts = self.lift_emb[cw] + np.einsum("ntd,dm->ntm", kco, self.kernel_emb)
        X = np.swapaxes(pts, 1, 2).reshape(n, self.m * self.T)
        return (ci, kco), X

    def quantize(self, h: np.ndarray):
        """Rank-1 log-lattice quantization of positive diagonal magnitudes."""
        logs = np.log(h ** 2)
        zexp = int(round(float(logs @ self.log_gen) / float(self.log_gen @ self.log_gen)))
        udiag = self.unit_diag ** zexp
        return zexp, udiag, h / udiag

    def decode_coset(self, Y: np.ndarray):
        """Exact CVP in the scaled code lattice via per-component cosets."""
        q = self.code.gf.order
        Yc = Y.reshape(self.m, self.T).T
        diffs = Yc[:, None, :] - self.lift_emb[None, :, :]
        flat = diffs.reshape(-1, self.m)
        targets = np.hstack([flat.real, flat.imag])
        coords, d2 = self.base_cvp.decode(targets)
        D = d2.reshape(self.T, q)
        scores = D[np.arange(self.T)[None, :], self.codewords].sum(axis=1)
        ci = int(np.argmin(scores))
        cw = self.codewords[ci]
        sel = np.arange(self.T) * q + cw
        kco = coords[sel]
        pts = self.lift_emb[cw] + kco @ self.kernel_emb
        xhat = pts.T.reshape(-1)
        return ci, kco, xhat


class _ModPSystem:
    """Mod-p baseline: a random code over F_p lifted through Z^N, decoded by
    exact per-dimension coset ML."""

    def __init__(self, cfg: SimConfig):
        self.m = cfg.channel.m
        self.T = cfg.T
        self.N = 2 * self.m * self.T
        self.p = cfg.p
        k = max(cfg.k, 1)
        self.code = random_code(cfg.p, 1, self.N, k, _stream(cfg.seed, 0))
        self.scale = float(self.p) ** (-(self.N - k) / self.N)  # volume 1
        self.codewords = self.code.codewords()

    def gains_real(self, h: np.ndarray) -> np.ndarray:
        per_complex = np.repeat(h, self.T)
        return np.concatenate([per_complex, per_complex])

    def transmit(self, rng, n: int, window: int):
        M = self.codewords.shape[0]
        ci = rng.integers(0, M, size=n)
        z = rng.integers(-window, window + 1, size=(n, self.N))
        x = self.scale * (self.codewords[ci] + self.p * z)
        return (ci, z), x

    def decode(self, y: np.ndarray, gains: np.ndarray):
        """Exact ML in the faded lattice: per-dimension distances, coset sums."""
        a = gains * self.scale
        s = np.arange(self.p)
        r = y[:, None] - a[:, None] * s[None, :]
        period = a[:, None] * self.p
        zmat = np.round(r / period)
        d = (r - zmat * period) ** 2
        scores = d[np.arange(self.N)[None, :], self.codewords].sum(axis=1)
        ci = int(np.argmin(scores))
        cw = self.codewords[ci]
        z = zmat[np.arange(self.N), cw].astype(np.int64)
        return ci, z


# -- trial runner -----------------------------------------------------------------


def _infinite_sigma(cfg: SimConfig) -> float:
    D = cfg.channel.det_constraint
    m = cfg.channel.m
    if cfg.sigma_w is not None:
        return cfg.sigma_w
    margin = 10 ** (cfg.vnr_margin_db / 10)
    return math.sqrt(D ** (1 / m) / (math.pi * math.e * margin))


def _run_infinite_compound(cfg: SimConfig) -> SimResult:
    t0 = time.time()
    model = cfg.channel
    sigma_w = _infinite_sigma(cfg)
    m = model.m
    D = model.det_constraint
    if cfg.decoder == "mod-p":
        system = _ModPSystem(cfg)
    else:
        system = _AlgebraicSystem(cfg)
        if model.m != system.m:
            raise ConfigError("channel m must match the field's component count")

    errors = 0
    done = 0
    while done < cfg.trials:
        n = min(_TRIAL_CHUNK, cfg.trials - done)
        chunk = done // _TRIAL_CHUNK
        rng_ch = _stream(cfg.seed, 1, chunk)
        rng_no = _stream(cfg.seed, 2, chunk)
        rng_da = _stream(cfg.seed, 3, chunk)
        hs = gen_channel(model, rng_ch, size=n)
        msgs, X = system.transmit(rng_da, n, cfg.window)
        if cfg.decoder == "mod-p":
            noise = rng_no.normal(size=(n, system.N)) * (sigma_w / math.sqrt(2))
            for i in range(n):
                gains = system.gains_real(hs[i])
                y = gains * X[i] + noise[i]
                ci, z = system.decode(y, gains)
                if ci != msgs[0][i] or not np.array_equal(z, msgs[1][i]):
                    errors += 1
        else:
            noise = (rng_no.normal(size=(n, m * cfg.T))
                     + 1j * rng_no.normal(size=(n, m * cfg.T))) * (sigma_w / math.sqrt(2))
            for i in range(n):
                h = hs[i]
                y = np.repeat(h, cfg.T) * X[i] + noise[i]
                if cfg.decoder == "zf":
                    yhat = y / np.repeat(h, cfg.T)
                    ci, kco, _ = system.decode_coset(yhat)
                    if ci != msgs[0][i] or not np.array_equal(kco, msgs[1][i]):
                        errors += 1
                    continue
                # decoupled: absorb the channel into a unit, decode in the
                # fixed lattice, undo the unit, compare as lattice points
                # (distinct points of the volume-1 lattice are macroscopically
                # separated, so the numeric comparison is exact)
                zexp, udiag, ediag = system.quantize(h)
                yhat = y / np.repeat(ediag, cfg.T)
                ci, kco, xtilde = system.decode_coset(yhat)
                xhat = np.repeat(1.0 / udiag, cfg.T) * xtilde
                if np.max(np.abs(xhat - X[i])) > 1e-6:
                    errors += 1
        done += n

    wer = errors / cfg.trials
    vol = 1.0
    gamma = vol ** (1.0 / (m * cfg.T)) / sigma_w ** 2
    threshold = math.pi * math.e / D ** (1 / m)
    margin_db = 10 * math.log10(gamma / threshold)
    cap = capacity(model, gen_channel(model, _stream(cfg.seed, 1, 0), size=1)[0],
                   snr=model.snr) if model.snr else float("nan")
    res = SimResult(
        config=cfg.to_dict(), trials=cfg.trials, errors=errors, wer=wer,
        wer_ci=wilson_ci(errors, cfg.trials),
        rate_nats=float("nan"), capacity_nats=cap,
        vnr=gamma, vnr_margin_db=margin_db,
        log_density=0.0, log_density_threshold=math.log(threshold),
        wall_time_s=time.time() - t0,
        extras={"sigma_w": sigma_w, "snr_db": float("nan"),
                "decoder": cfg.decoder})
    return res


def _run_power_compound(cfg: SimConfig) -> SimResult:
    t0 = time.time()
    model = cfg.channel
    system = _AlgebraicSystem(cfg)
    lat = system.lattice
    nreal = 2 * system.m * cfg.T
    if nreal > 32:
        raise ConfigError("power-mode map decoding ships for small blocks (<= 32 real dims)")
    sigma_w, sigma_s = cfg.sigma_w, cfg.sigma_s
    rho = sigma_s ** 2 / sigma_w ** 2
    loglat = system.loglat
    errors = 0
    done = 0
    cap_acc = 0.0
    while done < cfg.trials:
        n = min(_TRIAL_CHUNK, cfg.trials - done)
        chunk = done // _TRIAL_CHUNK
        rng_ch = _stream(cfg.seed, 1, chunk)
        rng_no = _stream(cfg.seed, 2, chunk)
        rng_da = _stream(cfg.seed, 3, chunk)
        hs = gen_channel(model, rng_ch, size=n)
        pts, coords = sample_dgauss_batch(lat, sigma_s, n, rng_da)
        noise = (rng_no.normal(size=(n, system.m * cfg.T))
                 + 1j * rng_no.normal(size=(n, system.m * cfg.T))) * (sigma_w / math.sqrt(2))
        for i in range(n):
            H = np.diag(hs[i]).astype(complex)
            y = np.repeat(hs[i], cfg.T) * pts[i] + noise[i]
            cap_acc += capacity(model, H, snr=rho)
            if cfg.decoder == "map":
                filt = mmse_matrices(H, rho, sigma_w)
                _, chat = map_decode(y, lat, filt, T=cfg.T)
            else:
                filt, params = decoupled_params(H, rho, loglat)
                _, chat = decoupled_decode(y, lat, params, filt, T=cfg.T)
            if not np.array_equal(chat, coords[i]):
                errors += 1
        done += n

    V = lat.volume
    rate = system.m * math.log(math.pi * math.e * sigma_s ** 2) - math.log(V) / cfg.T
    cap = cap_acc / cfg.trials
    _, gamma, delta = volume_vnr(lat, sigma_w)
    # Eq-(20)-style margin for the filtered lattice: det(R^H R) = rho^-m e^C
    gamma_r = (math.exp(cap) * rho ** (-system.m)) ** (1.0 / system.m) * \
        V ** (1.0 / (system.m * cfg.T)) / sigma_w ** 2
    res = SimResult(
        config=cfg.to_dict(), trials=cfg.trials, errors=errors,
        wer=errors / cfg.trials, wer_ci=wilson_ci(errors, cfg.trials),
        rate_nats=rate, capacity_nats=cap,
        vnr=gamma_r, vnr_margin_db=10 * math.log10(gamma_r / (math.pi * math.e)),
        log_density=delta, log_density_threshold=math.log(math.pi * math.e),
        wall_time_s=time.time() - t0,
        extras={"snr_db": 10 * math.log10(rho), "rho": rho,
                "vnr_unfiltered": gamma, "decoder": cfg.decoder})
    return res


def _run_ergodic(cfg: SimConfig) -> SimResult:
    t0 = time.time()
    model = cfg.channel
    field = nf.get_field(cfg.code_field)
    if not field.is_totally_real:
        raise ConfigError("ergodic simulations ship for totally real fields")
    split = nf.split_prime(field, cfg.p)
    n = field.n_components
    code = random_code(cfg.p, 1, n, min(cfg.k, n), _stream(cfg.seed, 0))
    cal = lift_ergodic(field, split, code)
    lat0 = cal.lattice
    scale = lat0.volume ** (-1.0 / n)
    lat = lat0.scale(scale)
    sigma_w = cfg.sigma_w
    sigma_s = cfg.sigma_s if cfg.sigma_s is not None else sigma_w
    rho = sigma_s ** 2 / sigma_w ** 2
    errors = 0
    done = 0
    while done < cfg.trials:
        nn = min(_TRIAL_CHUNK, cfg.trials - done)
        chunk = done // _TRIAL_CHUNK
        rng_ch = _stream(cfg.seed, 1, chunk)
        rng_no = _stream(cfg.seed, 2, chunk)
        rng_da = _stream(cfg.seed, 3, chunk)
        hs = np.abs(gen_channel(model, rng_ch, size=nn))
        if cfg.mode == "power":
            pts, coords = sample_dgauss_batch(lat, sigma_s, nn, rng_da)
        else:
            coords = rng_da.integers(-cfg.window, cfg.window + 1, size=(nn, n))
            pts = coords @ lat.basis
        noise = rng_no.normal(size=(nn, n)) * (sigma_w / math.sqrt(2))
        for i in range(nn):
            h = hs[i]
            y = h * pts[i] + noise[i]
            rdiag = np.sqrt(rho * h ** 2 + 1.0)
            fdiag = rho * h / rdiag
            rlat = Lattice(lat.basis * rdiag[None, :])
            _, chat = cvp(rlat, fdiag * y)
            if not np.array_equal(chat, coords[i]):
                errors += 1
        done += nn

    cap = capacity(model, snr=rho)
    rate = math.log(2 * math.pi * math.e * sigma_s ** 2) - (2.0 / n) * math.log(lat.volume)
    _, gamma, delta = volume_vnr(lat, sigma_w)
    gamma_real = lat.volume ** (2.0 / n) / (sigma_w ** 2 / 2)
    mu = -0.5772156649015329 / 2  # E[log|h|] for unit-power Rayleigh
    res = SimResult(
        config=cfg.to_dict(), trials=cfg.trials, errors=errors,
        wer=errors / cfg.trials, wer_ci=wilson_ci(errors, cfg.trials),
        rate_nats=rate, capacity_nats=cap,
        vnr=gamma, vnr_margin_db=float("nan"),
        log_density=delta, log_density_threshold=math.log(math.pi * math.e) - 2 * mu,
        wall_time_s=time.time() - t0,
        extras={"snr_db": 10 * math.log10(rho), "vnr_real": gamma_real,
                "vnr_star_real": math.exp(-2 * mu) * 2 * math.pi * math.e,
                "vnr_star_complex": math.exp(-2 * mu) * math.pi * math.e,
                "decoder": cfg.decoder})
    return res


def run_trials(cfg: SimConfig) -> SimResult:
    """Monte-Carlo word-error simulation; deterministic under cfg.seed."""
    cfg.validate()
    if cfg.channel.kind == "ergodic":
        return _run_ergodic(cfg)
    if cfg.channel.kind == "compound-mimo":
        raise ConfigError("compound-mimo simulation ships via map decoding on "
                          "small blocks; use compound-bf for the trial runner")
    if cfg.mode == "infinite":
        return _run_infinite_compound(cfg)
    return _run_power_compound(cfg)


def sweep(cfg: SimConfig, grid: dict) -> list:
    """Run one SimResult per grid point (cartesian product, sorted keys)."""
    for key in grid:
        if key not in ("T", "k", "p", "sigma_w", "sigma_s", "trials",
                       "vnr_margin_db", "window", "decoder"):
            raise ConfigError(f"unsupported sweep parameter {key!r}")
    results = []
    keys = sorted(grid)
    if not keys:
        return results

    def rec(idx, overrides):
        if idx == len(keys):
            d = cfg.to_dict()
            d.update(overrides)
            results.append(run_trials(SimConfig.from_dict(d)))
            return
        for v in grid[keys[idx]]:
            rec(idx + 1, {**overrides, keys[idx]: v})

    rec(0, {})
    return results


def write_csv(results, path: str):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in results:
            w.writerow(r.csv_row())


# -- CLI ---------------------------------------------------------------------------


def _cmd_field_info(args) -> int:
    K = nf.get_field(args.name)
    info = {
        "name": args.name,
        "kind": K.kind,
        "degree": K.degree,
        "radicands": list(K.radicands),
        "integral_basis": K.basis_names,
        "discriminant": K.discriminant,
        "signature": list(K.signature),
        "components": K.n_components,
        "embeddings": [{"signs": list(s)} for s in K._sign_patterns],
    }
    print(json.dumps(info, indent=2))
    return 0


def _cmd_lattice_build(args) -> int:
    K = nf.get_field(args.field)
    split = nf.split_prime(K, args.p)
    code = random_code(args.p, split.residue_degree, args.T, args.k,
                       np.random.default_rng(args.seed))
    cal = lift_compound(K, split, code)
    header = {
        "field": args.field, "p": args.p, "l": split.residue_degree,
        "T": args.T, "k": args.k,
        "volume": cal.volume, "formula_volume": cal.formula_volume,
    }
    print(json.dumps(header))
    rows = cal.lattice.real_lattice.basis

    def emit(fh):
        writer = csv.writer(fh)
        for row in rows.T:  # rows of the real generator matrix B_r
            writer.writerow([f"{v:.12g}" for v in row])

    if args.out is None:
        emit(sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            emit(fh)
    return 0


def _lattice_for_cli(args):
    if args.zn:
        return Lattice(np.eye(args.zn))
    if not args.field:
        raise ConfigError("need --zn N or --field NAME")
    K = nf.get_field(args.field)
    rows = np.array([b.embed() for b in K.basis()])
    if K.is_totally_real:
        return Lattice(rows)
    return ComplexLattice(np.array(rows, dtype=complex).T)


def _cmd_flatness(args) -> int:
    lat = _lattice_for_cli(args)
    val = flatness(lat, args.sigma, args.tol)
    print(json.dumps({"sigma": args.sigma, "flatness": val}))
    return 0


def _cmd_theta(args) -> int:
    lat = _lattice_for_cli(args)
    val = theta(lat, args.tau, args.tol)
    print(json.dumps({"tau": args.tau, "theta": val}))
    return 0


def _cmd_gap(args) -> int:
    K = nf.get_field(args.field)
    L = build_log_lattice(K)
    rep = gap_bound(L)
    out = {
        "field": args.field,
        "regulator": L.regulator,
        "covering_radius": L.covering_radius,
        "gap_general_nats": rep.general_nats,
        "gap_tight_n2_nats": rep.tight_nats,
        "catalog": {
            "quartic_min_nats": gap_bound("quartic-min").tight_nats,
            "mimo_2x2_nats": gap_bound("mimo-2x2").tight_nats,
        },
    }
    print(json.dumps(out, indent=2))
    return 0


def _load_config(path: str, seed: int | None):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config: {e}") from e
    grid = doc.pop("grid", None)
    cfg = SimConfig.from_dict(doc)
    if seed is not None:
        cfg.seed = seed
    cfg.validate()
    return cfg, grid


def _cmd_simulate(args) -> int:
    cfg, _ = _load_config(args.config, args.seed)
    res = run_trials(cfg)
    print(json.dumps(res.to_dict(), default=float))
    if args.out:
        write_csv([res], args.out)
    return 0


def _cmd_sweep(args) -> int:
    cfg, grid = _load_config(args.config, args.seed)
    if not grid:
        grid = {}
    results = sweep(cfg, grid)
    print(json.dumps([r.to_dict() for r in results], default=float))
    if args.out:
        write_csv(results, args.out)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="latcode",
                                     description="algebraic lattice code simulator")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_field = sub.add_parser("field", help="number field catalog")
    field_sub = p_field.add_subparsers(dest="fieldcmd", required=True)
    p_info = field_sub.add_parser("info")
    p_info.add_argument("name")
    p_info.set_defaults(func=_cmd_field_info)

    p_lat = sub.add_parser("lattice", help="lattice construction")
    lat_sub = p_lat.add_subparsers(dest="latcmd", required=True)
    p_build = lat_sub.add_parser("build")
    p_build.add_argument("--field", required=True)
    p_build.add_argument("--p", type=int, required=True)
    p_build.add_argument("--T", type=int, required=True)
    p_build.add_argument("--k", type=int, required=True)
    p_build.add_argument("--seed", type=int, default=0)
    p_build.add_argument("--out", default=None)
    p_build.set_defaults(func=_cmd_lattice_build)

    for name, fn in (("flatness", _cmd_flatness), ("theta", _cmd_theta)):
        pp = sub.add_parser(name)
        pp.add_argument("--zn", type=int, default=0)
        pp.add_argument("--field", default=None)
        pp.add_argument("--sigma", type=float, default=1.0)
        pp.add_argument("--tau", type=float, default=1.0)
        pp.add_argument("--tol", type=float, default=1e-8 if name == "flatness" else 1e-9)
        pp.set_defaults(func=fn)

    p_gap = sub.add_parser("gap")
    p_gap.add_argument("--field", required=True)
    p_gap.set_defaults(func=_cmd_gap)

    for name, fn in (("simulate", _cmd_simulate), ("sweep", _cmd_sweep)):
        pp = sub.add_parser(name)
        pp.add_argument("--config", required=True)
        pp.add_argument("--seed", type=int, required=True)
        pp.add_argument("--out", default=None)
        pp.set_defaults(func=fn)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except EnumerationBudgetError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
