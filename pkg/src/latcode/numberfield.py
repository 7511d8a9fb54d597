"""Exact arithmetic in quadratic and bi-quadratic number fields.

Supports the small catalog of fields the code constructions need: real and
complex quadratic fields Q(sqrt(d)), and bi-quadratic quartic fields
Q(sqrt(a), sqrt(b)).  Elements are stored with exact rational coordinates
over a fixed integral basis, so norms, traces, inverses and residue maps
are computed without rounding.  Floating point enters only through the
canonical embedding.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

__all__ = [
    "NumberField",
    "FieldElement",
    "ResidueField",
    "PrimeSplit",
    "NotSplitError",
    "split_prime",
    "get_field",
    "FIELD_CATALOG",
]


class NotSplitError(Exception):
    """Raised when a prime has no usable factor in the field."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _frac_det(m):
    """Exact determinant of a small square matrix of Fractions."""
    n = len(m)
    a = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = Fraction(1) / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return det


def _frac_solve(m, rhs):
    """Solve m @ x = rhs exactly; m invertible square matrix of Fractions."""
    n = len(m)
    a = [m[r][:] + [rhs[r]] for r in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [vr - factor * vc for vr, vc in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


class NumberField:
    """A quadratic or bi-quadratic number field with a fixed integral basis.

    Immutable after construction; safe for concurrent reads.  Internally an
    element is a rational vector over ``integral_basis``; multiplication uses
    precomputed structure constants derived from an exact symbolic power
    basis {1, sqrt(a)} or {1, sqrt(a), sqrt(b), sqrt(ab)}.
    """

    def __init__(self, kind, radicands, basis_power, basis_names):
        self.kind = kind
        self.radicands = tuple(radicands)
        self.degree = len(basis_power)
        self.basis_names = list(basis_names)
        self._basis_power = [[Fraction(v) for v in row] for row in basis_power]

        # Power-basis multiplication: index radicals as products of sqrt terms.
        self._power_mult = self._build_power_mult()
        self.mult_table = self._build_mult_table()

        # All embeddings: one per sign pattern on the radicals.
        self._sign_patterns = list(itertools.product((1, -1), repeat=len(radicands)))
        self.embed_all_matrix = self._build_embedding_matrix()

        r1, r2, comps = self._signature_and_components()
        self.signature = (r1, r2)
        self.n_components = len(comps)
        self._component_idx = comps
        self.is_totally_real = r2 == 0
        self.embed_matrix = self.embed_all_matrix[comps, :]
        if self.is_totally_real:
            self.embed_matrix = self.embed_matrix.real.copy()

        self.discriminant = self._trace_form_discriminant()

    # -- construction -----------------------------------------------------

    @classmethod
    def quadratic(cls, d: int) -> "NumberField":
        """Q(sqrt(d)) for square-free d != 0, 1; ring of integers per d mod 4."""
        if d in (0, 1) or _has_square_factor(d):
            raise ValueError(f"d={d} must be square-free and != 0, 1")
        kind = "real-quadratic" if d > 0 else "complex-quadratic"
        if d % 4 == 1:
            # w = (1 + sqrt(d))/2
            basis = [[1, 0], [Fraction(1, 2), Fraction(1, 2)]]
            names = ["1", "w"]
        else:
            basis = [[1, 0], [0, 1]]
            names = ["1", f"sqrt{d}"]
        return cls(kind, (d,), basis, names)

    @classmethod
    def biquadratic(cls, a: int, b: int) -> "NumberField":
        """Q(sqrt(a), sqrt(b)) with a = 2,3 mod 4, b = 1 mod 4, coprime discriminants.

        The integral basis is the product basis {1, sqrt(a), w, sqrt(a) w},
        w = (1 + sqrt(b))/2, valid because disc(Q(sqrt(a))) = 4a and
        disc(Q(sqrt(b))) = b are coprime.
        """
        if _has_square_factor(a) or _has_square_factor(b):
            raise ValueError("radicands must be square-free")
        if b % 4 != 1:
            raise ValueError("second radicand must be 1 mod 4")
        if a % 4 == 1:
            raise ValueError("first radicand must be 2 or 3 mod 4")
        if math.gcd(4 * abs(a), abs(b)) != 1:
            raise ValueError("quadratic discriminants must be coprime")
        kind = "bi-quadratic" if (a < 0 or b < 0) else "real-bi-quadratic"
        half = Fraction(1, 2)
        # power basis order: 1, sqrt(a), sqrt(b), sqrt(ab)
        basis = [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [half, 0, half, 0],
            [0, half, 0, half],
        ]
        ra = "i" if a == -1 else f"sqrt{a}"
        w = "w"
        names = ["1", ra, w, f"{ra}*{w}"]
        return cls(kind, (a, b), basis, names)

    def _build_power_mult(self):
        # product of power-basis monomials -> power-basis vector
        if len(self.radicands) == 1:
            (a,) = self.radicands
            table = {
                (0, 0): {0: 1},
                (0, 1): {1: 1},
                (1, 1): {0: a},
            }
        else:
            a, b = self.radicands
            table = {
                (0, 0): {0: 1},
                (0, 1): {1: 1},
                (0, 2): {2: 1},
                (0, 3): {3: 1},
                (1, 1): {0: a},
                (1, 2): {3: 1},
                (1, 3): {2: a},
                (2, 2): {0: b},
                (2, 3): {1: b},
                (3, 3): {0: a * b},
            }
        return table

    def _power_product(self, u, v):
        d = self.degree
        out = [Fraction(0)] * d
        for i in range(d):
            if u[i] == 0:
                continue
            for j in range(d):
                if v[j] == 0:
                    continue
                key = (i, j) if i <= j else (j, i)
                for k, coef in self._power_mult[key].items():
                    out[k] += u[i] * v[j] * coef
        return out

    def _build_mult_table(self):
        d = self.degree
        basis_mat = [[self._basis_power[j][i] for j in range(d)] for i in range(d)]
        table = []
        for i in range(d):
            row = []
            for j in range(d):
                prod_pow = self._power_product(self._basis_power[i], self._basis_power[j])
                row.append(_frac_solve(basis_mat, prod_pow))
            table.append(row)
        return table

    def _power_values(self, signs):
        vals = [1.0 + 0.0j]
        rads = self.radicands
        roots = []
        for s, r in zip(signs, rads):
            root = math.sqrt(r) if r > 0 else 1j * math.sqrt(-r)
            roots.append(s * root)
        if len(rads) == 1:
            vals.append(roots[0])
        else:
            vals += [roots[0], roots[1], roots[0] * roots[1]]
        return np.array(vals, dtype=complex)

    def _build_embedding_matrix(self):
        mat = np.zeros((len(self._sign_patterns), self.degree), dtype=complex)
        for e, signs in enumerate(self._sign_patterns):
            pv = self._power_values(signs)
            for j in range(self.degree):
                mat[e, j] = sum(float(c) * pv[k] for k, c in enumerate(self._basis_power[j]))
        return mat

    def _signature_and_components(self):
        real_idx, comps, seen = [], [], set()
        for e in range(len(self._sign_patterns)):
            row = self.embed_all_matrix[e]
            if np.max(np.abs(row.imag)) < 1e-12:
                real_idx.append(e)
        if len(real_idx) == self.degree:
            return self.degree, 0, list(range(self.degree))
        # totally complex: pick one representative per conjugate pair
        for e in range(len(self._sign_patterns)):
            if e in seen:
                continue
            comps.append(e)
            row = self.embed_all_matrix[e]
            for f in range(e + 1, len(self._sign_patterns)):
                if f not in seen and np.allclose(self.embed_all_matrix[f], row.conjugate()):
                    seen.add(f)
                    break
            seen.add(e)
        return 0, len(comps), comps

    def _trace_form_discriminant(self):
        d = self.degree
        gram = [[self.element_from_coords(self.mult_table[i][j]).trace()
                 for j in range(d)] for i in range(d)]
        det = _frac_det(gram)
        assert det.denominator == 1
        return int(det)

    # -- elements ----------------------------------------------------------

    def element_from_coords(self, coords) -> "FieldElement":
        if len(coords) != self.degree:
            raise ValueError("coordinate length mismatch")
        return FieldElement(self, tuple(Fraction(c) for c in coords))

    def element(self, *coords) -> "FieldElement":
        return self.element_from_coords(coords)

    def zero(self) -> "FieldElement":
        return self.element_from_coords([0] * self.degree)

    def one(self) -> "FieldElement":
        return self.element_from_coords([1] + [0] * (self.degree - 1))

    def gen(self, i: int) -> "FieldElement":
        coords = [0] * self.degree
        coords[i] = 1
        return self.element_from_coords(coords)

    def basis(self):
        return [self.gen(i) for i in range(self.degree)]

    def automorphism_matrix(self, signs):
        """Exact coordinate matrix of the automorphism flipping radical signs."""
        d = self.degree
        if len(self.radicands) == 1:
            diag = [1, signs[0]]
        else:
            diag = [1, signs[0], signs[1], signs[0] * signs[1]]
        basis_mat = [[self._basis_power[j][i] for j in range(d)] for i in range(d)]
        cols = []
        for j in range(d):
            img_pow = [self._basis_power[j][k] * diag[k] for k in range(d)]
            cols.append(_frac_solve(basis_mat, img_pow))
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def apply_automorphism(self, x: "FieldElement", signs) -> "FieldElement":
        m = self.automorphism_matrix(signs)
        d = self.degree
        coords = [sum(m[i][j] * x.coords[j] for j in range(d)) for i in range(d)]
        return self.element_from_coords(coords)

    def embed_coords_array(self, coord_mat: np.ndarray) -> np.ndarray:
        """Batched canonical embedding of integer coordinate rows."""
        return coord_mat @ self.embed_matrix.T

    def __repr__(self):
        return f"NumberField({self.kind}, radicands={self.radicands})"

    def __eq__(self, other):
        return (isinstance(other, NumberField)
                and self.kind == other.kind and self.radicands == other.radicands)

    def __hash__(self):
        return hash((self.kind, self.radicands))


def _has_square_factor(n: int) -> bool:
    n = abs(n)
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return True
        f += 1
    return False


class FieldElement:
    """Element with exact rational coordinates over the integral basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        self.field = field
        self.coords = tuple(coords)

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("elements from different fields")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        self._check(other)
        d = self.field.degree
        table = self.field.mult_table
        out = [Fraction(0)] * d
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                if b == 0:
                    continue
                ab = a * b
                tij = table[i][j]
                for k in range(d):
                    if tij[k] != 0:
                        out[k] += ab * tij[k]
        return FieldElement(self.field, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, FieldElement) and self.field == other.field
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.field, self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def mult_matrix(self):
        """Matrix of y -> x*y over the integral basis (exact)."""
        d = self.field.degree
        cols = [(self * self.field.gen(j)).coords for j in range(d)]
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def norm(self) -> Fraction:
        return _frac_det(self.mult_matrix())

    def trace(self) -> Fraction:
        m = self.mult_matrix()
        return sum(m[i][i] for i in range(self.field.degree))

    def inv(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero")
        rhs = [Fraction(1)] + [Fraction(0)] * (self.field.degree - 1)
        return FieldElement(self.field, _frac_solve(self.mult_matrix(), rhs))

    def pow(self, k: int) -> "FieldElement":
        base = self if k >= 0 else self.inv()
        k = abs(k)
        out = self.field.one()
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    def embed(self) -> np.ndarray:
        """Canonical embedding: one value per conjugate pair (all, if totally real)."""
        v = np.array([float(c) for c in self.coords])
        return self.field.embed_matrix @ v

    def embed_all(self) -> np.ndarray:
        v = np.array([float(c) for c in self.coords])
        return self.field.embed_all_matrix @ v

    def __repr__(self):
        parts = []
        for c, name in zip(self.coords, self.field.basis_names):
            if c == 0:
                continue
            parts.append(f"{c}" if name == "1" else f"{c}*{name}")
        return " + ".join(parts) if parts else "0"


# -- residue fields ---------------------------------------------------------


class ResidueField:
    """F_{p^l} for l in {1, 2}; elements are integer codes a0 + a1*p.

    For l = 2 the field is F_p[t]/(t^2 - u t - v), with (u, v) = (1, 1) when
    x^2 - x - 1 is irreducible mod p, else (0, r) for the smallest
    quadratic non-residue r.
    """

    def __init__(self, p: int, l: int):
        if l not in (1, 2):
            raise ValueError("only residue degrees 1 and 2 are supported")
        self.p = p
        self.l = l
        self.order = p ** l
        if l == 2:
            if all((b * b - b - 1) % p != 0 for b in range(p)):
                self.u, self.v = 1, 1
            else:
                r = next(r for r in range(2, p)
                         if all((b * b - r) % p != 0 for b in range(p)))
                self.u, self.v = 0, r
        else:
            self.u = self.v = 0

    def split(self, x):
        return x % self.p, x // self.p

    def join(self, a0, a1):
        return (a0 % self.p) + (a1 % self.p) * self.p

    def add(self, x, y):
        x0, x1 = self.split(x)
        y0, y1 = self.split(y)
        return self.join(x0 + y0, x1 + y1)

    def neg(self, x):
        x0, x1 = self.split(x)
        return self.join(-x0, -x1)

    def mul(self, x, y):
        if self.l == 1:
            return (x * y) % self.p
        x0, x1 = self.split(x)
        y0, y1 = self.split(y)
        cross = x1 * y1
        return self.join(x0 * y0 + self.v * cross, x0 * y1 + x1 * y0 + self.u * cross)

    def scalar_mul(self, k, x):
        x0, x1 = self.split(x)
        return self.join(k * x0, k * x1)

    def inv(self, x):
        if x % self.order == 0:
            raise ZeroDivisionError("inversion of zero residue")
        if self.l == 1:
            return pow(x, self.p - 2, self.p)
        # x^(q-2) via square and multiply
        out, base, e = 1, x % self.order, self.order - 2
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def elements(self):
        return range(self.order)

    # numpy-vectorized versions operating on integer code arrays
    def add_arr(self, x, y):
        if self.l == 1:
            return (x + y) % self.p
        return (x % self.p + y % self.p) % self.p + ((x // self.p + y // self.p) % self.p) * self.p

    def mul_arr(self, x, y):
        if self.l == 1:
            return (x * y) % self.p
        x0, x1 = x % self.p, x // self.p
        y0, y1 = y % self.p, y // self.p
        cross = x1 * y1
        a0 = (x0 * y0 + self.v * cross) % self.p
        a1 = (x0 * y1 + x1 * y0 + self.u * cross) % self.p
        return a0 + a1 * self.p

    def neg_arr(self, x):
        if self.l == 1:
            return (-x) % self.p
        return (-(x % self.p)) % self.p + ((-(x // self.p)) % self.p) * self.p

    def __repr__(self):
        return f"F_{self.p}^{self.l}" if self.l > 1 else f"F_{self.p}"

    def __eq__(self, other):
        return isinstance(other, ResidueField) and (self.p, self.l) == (other.p, other.l)

    def __hash__(self):
        return hash((self.p, self.l))


class PrimeSplit:
    """A verified prime ideal above p with its residue map O_K -> F_{p^l}."""

    def __init__(self, field, p, l, gf, basis_images, generator, splits_completely, n_degree1_homs):
        self.field = field
        self.p = p
        self.residue_degree = l
        self.gf = gf
        self.basis_images = tuple(basis_images)
        self.generator = generator
        self.splits_completely = splits_completely
        self.n_degree1_homs = n_degree1_homs
        self._lift_cache = {}

    def reduce(self, x: FieldElement):
        """phi(pi(x)) for integral x, as a residue-field code."""
        if x.field != self.field:
            raise ValueError("element from a different field")
        if not x.is_integral():
            raise ValueError("reduce requires an integral element")
        acc = 0
        for c, img in zip(x.coords, self.basis_images):
            acc = self.gf.add(acc, self.gf.scalar_mul(int(c), img))
        return acc

    def reduce_vec(self, xs):
        return [self.reduce(x) for x in xs]

    def _span_table(self):
        # prefix spans: residues reachable using only coordinates < j
        if hasattr(self, "_spans"):
            return self._spans
        d = self.field.degree
        spans = [None] * (d + 1)
        spans[0] = {0}
        for j in range(d):
            prev = spans[j]
            img = self.basis_images[j]
            cur = set()
            for a in range(self.p):
                term = self.gf.scalar_mul(a, img)
                for s in prev:
                    cur.add(self.gf.add(term, s))
            spans[j + 1] = cur
        self._spans = spans
        return spans

    def lift(self, residue: int) -> FieldElement:
        """Canonical integral preimage with coordinates in [0, p).

        Minimal in lexicographic order read from the last basis coordinate
        down, so a rational residue class lifts to its rational integer
        representative (in particular lift of the unit class is 1).
        """
        residue %= self.gf.order
        if residue in self._lift_cache:
            return self._lift_cache[residue]
        spans = self._span_table()
        d = self.field.degree
        target = residue
        coords = [0] * d
        for j in range(d - 1, -1, -1):
            for a in range(self.p):
                rem = self.gf.add(target, self.gf.neg(self.gf.scalar_mul(a, self.basis_images[j])))
                if rem in spans[j]:
                    coords[j] = a
                    target = rem
                    break
            else:
                raise RuntimeError("residue map is not surjective")
        elem = self.field.element_from_coords(coords)
        self._lift_cache[residue] = elem
        return elem

    def __repr__(self):
        return (f"PrimeSplit(p={self.p}, l={self.residue_degree}, "
                f"gen={self.generator!r})")


def _min_poly_coeffs(field, i):
    """x^2 = t*x + s for basis generator e_i; returns (t, s) as ints."""
    sq = field.mult_table[i][i]
    t = sq[i]
    s = sq[0]
    rest = [sq[k] for k in range(field.degree) if k not in (0, i)]
    if any(r != 0 for r in rest):
        raise RuntimeError("basis generator has non-quadratic square")
    return int(t), int(s)


def _roots_mod(gf: ResidueField, t: int, s: int):
    """Roots of x^2 - t x - s in the residue field (vectorized scan)."""
    xs = np.arange(gf.order, dtype=np.int64)
    val = gf.add_arr(gf.mul_arr(xs, xs), gf.mul_arr(np.full_like(xs, (-t) % gf.p), xs))
    val = gf.add_arr(val, np.full_like(xs, (-s) % gf.p))
    return [int(x) for x in xs[val == 0]]


def _candidate_homs(field: NumberField, gf: ResidueField):
    """All ring homomorphisms O_K -> gf, as basis-image tuples, verified exactly."""
    d = field.degree
    if d == 2:
        t, s = _min_poly_coeffs(field, 1)
        cands = [(1 % gf.p if gf.l == 1 else 1, b) for b in _roots_mod(gf, t, s)]
    else:
        t1, s1 = _min_poly_coeffs(field, 1)
        t2, s2 = _min_poly_coeffs(field, 2)
        cands = []
        for b1 in _roots_mod(gf, t1, s1):
            for b2 in _roots_mod(gf, t2, s2):
                cands.append((1, b1, b2, gf.mul(b1, b2)))
    homs = []
    for images in cands:
        ok = True
        for i in range(d):
            for j in range(d):
                lhs = gf.mul(images[i], images[j])
                rhs = 0
                for k, coef in enumerate(field.mult_table[i][j]):
                    if coef != 0:
                        assert coef.denominator == 1
                        rhs = gf.add(rhs, gf.scalar_mul(int(coef), images[k]))
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            homs.append(tuple(int(v) for v in images))
    return sorted(set(homs))


def _find_generator(field, p, l, gf, images, max_shell=8):
    """Small-coordinate integral element with |N| = p^l lying in the hom kernel."""
    d = field.degree
    target = p ** l
    emb = field.embed_all_matrix
    for shell in range(1, max_shell + 1):
        rng = np.arange(-shell, shell + 1)
        grids = np.meshgrid(*([rng] * d), indexing="ij")
        coords = np.stack([g.ravel() for g in grids], axis=1)
        mask = np.max(np.abs(coords), axis=1) == shell
        coords = coords[mask]
        vals = coords @ emb.T
        norms = np.abs(np.prod(vals, axis=1))
        close = np.abs(norms - target) < 0.5
        cand = coords[close]
        cand = sorted(map(tuple, cand.tolist()))
        for c in cand:
            x = field.element_from_coords(c)
            nrm = x.norm()
            if abs(nrm) != target:
                continue
            acc = 0
            for cc, img in zip(c, images):
                acc = gf.add(acc, gf.scalar_mul(int(cc), img))
            if acc == 0:
                return x
    raise NotSplitError(f"no generator of norm +-{target} within coordinate bound {max_shell}")


def split_prime(field: NumberField, p: int) -> PrimeSplit:
    """Factor data for a prime ideal above p, with verified generator and residue map.

    Search strategy: count ring homomorphisms into F_p via roots of the basis
    generators' minimal polynomials; fall back to F_{p^2} when none exist.
    The ideal is pinned by a generator of norm +-p^l found by bounded search
    and verified by exact arithmetic.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if field.discriminant % p == 0:
        raise NotSplitError(f"{p} ramifies in {field!r}")
    homs1 = _candidate_homs(field, ResidueField(p, 1))
    if homs1:
        gf = ResidueField(p, 1)
        homs, l = homs1, 1
    else:
        gf = ResidueField(p, 2)
        homs = [h for h in _candidate_homs(field, gf) if any(v >= p for v in h)]
        if not homs:
            raise NotSplitError(f"{p} has residue degree > 2 in {field!r}")
        l = 2
    images = homs[0]
    if l == 2 and field.degree == 2:
        generator = field.element_from_coords([p] + [0] * (field.degree - 1))
    else:
        generator = _find_generator(field, p, l, gf, images)
    return PrimeSplit(field, p, l, gf, images, generator,
                      splits_completely=(l == 1 and len(homs1) == field.degree),
                      n_degree1_homs=len(homs1))


# -- field catalog -----------------------------------------------------------

FIELD_CATALOG = {
    "q5": lambda: NumberField.quadratic(5),
    "q13": lambda: NumberField.quadratic(13),
    "golden": lambda: NumberField.biquadratic(-1, 5),
    "q2q5": lambda: NumberField.biquadratic(2, 5),
}

_field_cache: dict = {}


def get_field(name: str) -> NumberField:
    """Catalog lookup: q5, q13, golden = Q(i, sqrt5), q2q5 = Q(sqrt2, sqrt5)."""
    if name not in FIELD_CATALOG:
        raise KeyError(f"unknown field {name!r}; choices: {sorted(FIELD_CATALOG)}")
    if name not in _field_cache:
        _field_cache[name] = FIELD_CATALOG[name]()
    return _field_cache[name]
