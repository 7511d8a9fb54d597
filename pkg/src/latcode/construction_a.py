"""Construction A over rings of integers.

Lifts linear codes over F_{p^l} through the residue map of a prime ideal:
the compound variant produces a complex lattice in C^(mT) (one codeword
symbol per channel use, embedded through all conjugate pairs), the ergodic
variant a lattice whose dimension equals the number of embedding
components.  Both keep an exact O_K-module generator description next to
the floating real basis, so volumes and memberships can be cross-checked
against the closed-form predictions.

Constructors are pure and the resulting objects immutable.
"""

from __future__ import annotations

import numpy as np

from .lattice_core import ComplexLattice, Lattice
from .numberfield import FieldElement, NumberField, PrimeSplit, ResidueField

__all__ = [
    "LinearCode",
    "ConstructionALattice",
    "random_code",
    "lift_compound",
    "lift_ergodic",
    "unit_twist",
    "embedding_row",
]


# -- linear codes -------------------------------------------------------------


def gf_rref(gf: ResidueField, mat):
    """Reduced row echelon form over F_{p^l}; returns (rows, pivot_columns)."""
    rows = [list(r) for r in mat]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c] % gf.order != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = gf.inv(rows[r][c])
        rows[r] = [gf.mul(inv, v) for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] % gf.order != 0:
                f = rows[i][c]
                rows[i] = [gf.add(vi, gf.neg(gf.mul(f, vr)))
                           for vi, vr in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [rows[i] for i in range(r)], pivots


class LinearCode:
    """A linear (T, k) code over F_{p^l}, generator rows as residue codes."""

    def __init__(self, gf: ResidueField, generator):
        self.gf = gf
        self.generator = np.array(generator, dtype=np.int64) % gf.order
        if self.generator.ndim != 2:
            raise ValueError("generator must be a k x T matrix")
        self.k, self.length = self.generator.shape
        rows, pivots = gf_rref(gf, self.generator.tolist())
        if len(rows) != self.k:
            raise ValueError("generator matrix is rank deficient")
        self.echelon = np.array(rows, dtype=np.int64)
        self.pivots = pivots
        self._words = None

    @property
    def p(self):
        return self.gf.p

    @property
    def l(self):
        return self.gf.l

    def codewords(self) -> np.ndarray:
        """All p^(lk) codewords, one per row (cached)."""
        if self._words is None:
            q = self.gf.order
            msgs = np.indices((q,) * self.k).reshape(self.k, -1).T
            acc = np.zeros((msgs.shape[0], self.length), dtype=np.int64)
            for j in range(self.k):
                term = self.gf.mul_arr(msgs[:, j][:, None], self.generator[j][None, :])
                acc = self.gf.add_arr(acc, term)
            self._words = acc
        return self._words

    def contains(self, word) -> bool:
        word = np.asarray(word, dtype=np.int64) % self.gf.order
        w = word.copy()
        for row, piv in zip(self.echelon, self.pivots):
            coef = int(w[piv])
            if coef:
                term = self.gf.mul_arr(np.full_like(w, coef), row)
                w = self.gf.add_arr(w, self.gf.neg_arr(term))
        return not np.any(w % self.gf.order)

    def scale_symbols(self, factors) -> "LinearCode":
        """Columnwise scaling by nonzero residues (Hamming-equivalent code)."""
        factors = np.asarray(factors, dtype=np.int64)
        gen = self.gf.mul_arr(self.generator, factors[None, :])
        return LinearCode(self.gf, gen)

    def __repr__(self):
        return f"LinearCode(q={self.gf.order}, T={self.length}, k={self.k})"


def random_code(p: int, l: int, T: int, k: int, rng) -> LinearCode:
    """Uniformly random rank-k generator over F_{p^l}; rejection on rank deficiency."""
    if k > T:
        raise ValueError("k must not exceed T")
    gf = ResidueField(p, l)
    while True:
        gen = rng.integers(0, gf.order, size=(k, T))
        try:
            return LinearCode(gf, gen)
        except ValueError:
            continue


# -- embedding helpers ---------------------------------------------------------


def embedding_row(field: NumberField, elems, T: int, antenna_major: bool = True) -> np.ndarray:
    """Embed a length-T vector over O_K into C^(mT), antenna-major layout.

    Position i*T + t carries conjugate component i of symbol t, matching the
    matrix-form representation X[i, t].
    """
    m = field.n_components
    out = np.zeros(m * T, dtype=complex)
    for t, x in enumerate(elems):
        if x is None:
            continue
        emb = x.embed()
        for i in range(m):
            out[i * T + t] = emb[i]
    return out


def _component_automorphisms(field: NumberField):
    """Sign patterns realizing each embedding component as a field automorphism."""
    return [field._sign_patterns[i] for i in field._component_idx]


# -- construction A lattices ----------------------------------------------------


class ConstructionALattice:
    """A code lattice with its exact module description and volume bookkeeping."""

    def __init__(self, field, split, code, variant, lattice, ok_rows, formula_volume,
                 alpha=1.0):
        self.field = field
        self.split = split
        self.code = code
        self.variant = variant
        self.lattice = lattice
        self.ok_rows = ok_rows
        self.formula_volume = formula_volume
        self.alpha = float(alpha)

    @property
    def volume(self) -> float:
        """Numeric volume of the unscaled lattice."""
        return self.lattice.volume

    def scaled(self):
        """The lattice with the stored scaling alpha applied."""
        return self.lattice.scale(self.alpha)

    @property
    def is_complex(self) -> bool:
        return isinstance(self.lattice, ComplexLattice)

    def contains_field_vector(self, xs) -> bool:
        """Membership through the residue map: all components integral and
        the reduced word a codeword."""
        if self.variant == "compound":
            if not all(x.is_integral() for x in xs):
                return False
            word = [self.split.reduce(x) for x in xs]
            return self.code.contains(word)
        sigs = _component_automorphisms(self.field)
        x = xs[0] if isinstance(xs, (list, tuple)) else xs
        if not x.is_integral():
            return False
        word = [self.split.reduce(self.field.apply_automorphism(x, s)) for s in sigs]
        return self.code.contains(word)

    def __repr__(self):
        return (f"ConstructionALattice({self.variant}, q={self.code.gf.order}, "
                f"T={self.code.length}, k={self.code.k}, vol={self.volume:.6g})")


def _sigma_volume(field: NumberField) -> float:
    """Volume of sigma(O_K): 2^-r2 sqrt(|disc|)."""
    return 2.0 ** (-field.signature[1]) * np.sqrt(abs(field.discriminant))


def lift_compound(field: NumberField, split: PrimeSplit, code: LinearCode,
                  alpha: float = 1.0) -> ConstructionALattice:
    """Lift a (T, k) code over F_{p^l} to the complex lattice in C^(mT).

    Generators, as an O_K-module: the echelon code rows lifted by canonical
    coset representatives, plus g * e_t at every non-pivot position, where g
    generates the prime ideal.  Volume satisfies
    V = p^{l(T-k)} * vol(sigma(O_K))^T = 2^{-mT} p^{l(T-k)} sqrt(disc)^T
    for totally complex fields.
    """
    if field.signature[0] != 0:
        raise ValueError("compound construction needs a totally complex field")
    if split.field != field:
        raise ValueError("split belongs to a different field")
    if split.gf != code.gf:
        raise ValueError(f"code alphabet {code.gf} does not match residue field {split.gf}")
    T, k = code.length, code.k
    m = field.n_components
    zero, g = field.zero(), split.generator

    ok_rows = []
    for t in range(T):
        if t in code.pivots:
            continue
        row = [zero] * T
        row[t] = g
        ok_rows.append(row)
    for r in code.echelon:
        ok_rows.append([split.lift(int(c)) for c in r])

    rows = []
    for okrow in ok_rows:
        for b in field.basis():
            rows.append(embedding_row(field, [b * x for x in okrow], T))
    bc = np.array(rows, dtype=complex).T  # columns are generators
    lattice = ComplexLattice(bc, label=f"consA(q={code.gf.order},T={T},k={k})")
    formula = split.p ** (split.residue_degree * (T - k)) * _sigma_volume(field) ** T
    return ConstructionALattice(field, split, code, "compound", lattice, ok_rows,
                                formula, alpha)


def lift_ergodic(field: NumberField, split: PrimeSplit, code: LinearCode,
                 alpha: float = 1.0) -> ConstructionALattice:
    """Lift an (n, k) code over F_p to the lattice sigma(x), componentwise reduction.

    n must equal the number of embedding components and the prime must have
    residue degree 1.  Volume is p^(n-k) * vol(sigma(O_K)).
    """
    if split.residue_degree != 1:
        raise ValueError("ergodic construction needs a completely split prime (l = 1)")
    if code.gf != split.gf:
        raise ValueError("code alphabet does not match residue field")
    n = field.n_components
    if code.length != n:
        raise ValueError(f"code length {code.length} != number of components {n}")
    p = split.p
    d = field.degree
    sigs = _component_automorphisms(field)
    # reduction matrix M over F_p: component i of basis element j
    M = np.zeros((n, d), dtype=np.int64)
    for j, b in enumerate(field.basis()):
        for i, s in enumerate(sigs):
            M[i, j] = split.reduce(field.apply_automorphism(b, s))

    subspace = _preimage_basis(M, code, p)
    gens = [[p if i == j else 0 for j in range(d)] for i in range(d)]
    gens += [[int(v) for v in row] for row in subspace]
    hnf = _hnf_rows(gens, d)

    ok_rows = [field.element_from_coords(r) for r in hnf]
    emb_rows = [x.embed() for x in ok_rows]
    if field.is_totally_real:
        lattice = Lattice(np.array(emb_rows, dtype=float))
    else:
        bc = np.array(emb_rows, dtype=complex).T
        lattice = ComplexLattice(bc, label=f"ergodic(p={p},k={code.k})")
    formula = float(p ** (n - code.k)) * _sigma_volume(field)
    return ConstructionALattice(field, split, code, "ergodic", lattice, ok_rows,
                                formula, alpha)


def unit_twist(lat: ConstructionALattice, u: FieldElement) -> ConstructionALattice:
    """Twist an ergodic lattice by the diagonal embedding of a unit.

    sigma(u) * Lambda(C1) = Lambda(C2) where C2 scales each coordinate of C1
    by the residue of the matching conjugate of u; dimensions agree and the
    volume is unchanged since |N(u)| = 1.
    """
    if lat.variant != "ergodic":
        raise ValueError("unit twists apply to the ergodic variant")
    if not u.is_unit():
        raise ValueError("twisting element must be a unit")
    field, split = lat.field, lat.split
    sigs = _component_automorphisms(field)
    factors = [split.reduce(field.apply_automorphism(u, s)) for s in sigs]
    if any(f % split.gf.order == 0 for f in factors):
        raise ValueError("unit reduces to zero; split is inconsistent")
    code2 = lat.code.scale_symbols(factors)
    ok_rows = [u * x for x in lat.ok_rows]
    emb_rows = [x.embed() for x in ok_rows]
    if field.is_totally_real:
        lattice = Lattice(np.array(emb_rows, dtype=float))
    else:
        lattice = ComplexLattice(np.array(emb_rows, dtype=complex).T,
                                 label=lat.lattice.label + "*u")
    return ConstructionALattice(field, split, code2, "ergodic", lattice, ok_rows,
                                lat.formula_volume, lat.alpha)


# -- integer linear algebra helpers ---------------------------------------------


def _modinv(a: int, p: int) -> int:
    return pow(a % p, p - 2, p)


def _preimage_basis(M: np.ndarray, code: LinearCode, p: int):
    """F_p-basis of { v : M v in C } as integer rows (entries in [0, p))."""
    n, d = M.shape
    # nullspace of M
    A = M.copy() % p
    rows, pivots = _rref_modp(A, p)
    free = [j for j in range(d) if j not in pivots]
    basis = []
    for f in free:
        v = np.zeros(d, dtype=np.int64)
        v[f] = 1
        for r, c in zip(rows, pivots):
            v[c] = (-r[f]) % p
        basis.append(v)
    # particular preimages of the code generators
    for gen_row in code.generator:
        v = _solve_modp(M, np.asarray(gen_row, dtype=np.int64), p)
        basis.append(v)
    return basis


def _rref_modp(A: np.ndarray, p: int):
    A = A.copy() % p
    nr, nc = A.shape
    pivots, r = [], 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if A[i, c] % p), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * _modinv(int(A[r, c]), p)) % p
        for i in range(nr):
            if i != r and A[i, c] % p:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return A[:r], pivots


def _solve_modp(M: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray:
    n, d = M.shape
    aug = np.concatenate([M % p, rhs[:, None] % p], axis=1)
    rows, pivots = _rref_modp(aug, p)
    v = np.zeros(d, dtype=np.int64)
    for row, c in zip(rows, pivots):
        if c == d:
            raise ValueError("inconsistent residue system")
        v[c] = row[d] % p
    return v


def _hnf_rows(rows, d: int):
    """Echelon integer basis of the row lattice via round-division Euclid (exact)."""
    work = [list(map(int, r)) for r in rows if any(r)]
    basis = []
    for col in range(d):
        while True:
            nz = [r for r in work if r[col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = round(r[col] / piv[col])
                if q:
                    for j in range(d):
                        r[j] -= q * piv[j]
            work = [r for r in work if any(r)]
        nz = [r for r in work if r[col] != 0]
        if not nz:
            continue
        piv = nz[0]
        if piv[col] < 0:
            piv[:] = [-v for v in piv]
        basis.append(piv)
        work.remove(piv)
    if len(basis) != d:
        raise ValueError("row lattice is not full rank")
    return basis
