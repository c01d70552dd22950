"""Matrix extensions M_n(A) and M_n(M), and the block calculus on them.

Basis layout: M_n(A) has basis (base element k) placed in matrix block (i, j),
flattened as (i*n + j)*d + k; M_n(M) is laid out the same way.  Multiplication
is (a x E_ij)(b x E_kl) = [j=k] (ab x E_il), with matching left/right module
actions.  Rows and columns of the n x n grid are 0-based in code; printed
labels use the usual 1-based matrix-unit names.

Core operations: embedding base elements into blocks, lifting a base
derivation to act entrywise, extracting component maps (i,j|r,s) of a
derivation of the matrix pair, splitting such a derivation into an inner part
plus a lifted base derivation, checking the standard component identities,
and the reblocking isomorphism M_{rk}(A) ~ M_r(M_k(A)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algcore import Algebra, Bimodule, act, multiply, regular_bimodule
from .dercalc import Derivation, LinearMap, certify, leibniz_failures
from .exactlin import Matrix, Vector, ZERO, basis_vec, vadd, zero_vec


class DecompositionError(RuntimeError):
    """An internal recomposition identity failed; never returned silently."""


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixAlgebra:
    """M_n(base) with its flat basis indexing."""

    base: Algebra
    n: int
    algebra: Algebra

    def flat(self, i: int, j: int, k: int) -> int:
        self._check_block(i, j)
        if not 0 <= k < self.base.dim:
            raise ValueError(f"base index {k} out of range")
        return (i * self.n + j) * self.base.dim + k

    def unflat(self, t: int) -> tuple[int, int, int]:
        d = self.base.dim
        block, k = divmod(t, d)
        i, j = divmod(block, self.n)
        return i, j, k

    def _check_block(self, i: int, j: int) -> None:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"block index ({i},{j}) out of range for n={self.n}")

    def embed(self, x: Sequence[Fraction], i: int, j: int) -> Vector:
        """Base element x placed in block (i, j), zero elsewhere."""
        self._check_block(i, j)
        if len(x) != self.base.dim:
            raise ValueError("element length does not match base dimension")
        out = [ZERO] * self.algebra.dim
        off = (i * self.n + j) * self.base.dim
        for k, c in enumerate(x):
            out[off + k] = Fraction(c)
        return tuple(out)

    def entry(self, big: Sequence[Fraction], i: int, j: int) -> Vector:
        """Block (i, j) of a matrix-algebra element, in base coordinates."""
        self._check_block(i, j)
        if len(big) != self.algebra.dim:
            raise ValueError("element length does not match matrix algebra dimension")
        off = (i * self.n + j) * self.base.dim
        return tuple(big[off:off + self.base.dim])


@dataclass(frozen=True)
class MatrixBimodule:
    """M_n(base module) as a bimodule over the matching M_n(A)."""

    base: Bimodule
    n: int
    bimodule: Bimodule

    def flat(self, i: int, j: int, p: int) -> int:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"block index ({i},{j}) out of range for n={self.n}")
        if not 0 <= p < self.base.dim:
            raise ValueError(f"base index {p} out of range")
        return (i * self.n + j) * self.base.dim + p

    def embed(self, f: Sequence[Fraction], i: int, j: int) -> Vector:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"block index ({i},{j}) out of range for n={self.n}")
        if len(f) != self.base.dim:
            raise ValueError("element length does not match base module dimension")
        out = [ZERO] * self.bimodule.dim
        off = (i * self.n + j) * self.base.dim
        for p, c in enumerate(f):
            out[off + p] = Fraction(c)
        return tuple(out)

    def entry(self, big: Sequence[Fraction], i: int, j: int) -> Vector:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"block index ({i},{j}) out of range for n={self.n}")
        if len(big) != self.bimodule.dim:
            raise ValueError("element length does not match matrix module dimension")
        off = (i * self.n + j) * self.base.dim
        return tuple(big[off:off + self.base.dim])


def matrix_algebra(a: Algebra, n: int) -> MatrixAlgebra:
    """M_n(a) for n >= 2, with unit sum_i 1 x E_ii."""
    if n < 2:
        raise ValueError("matrix extension needs n >= 2")
    d = a.dim
    dim = n * n * d
    labels = tuple(f"{a.labels[k]}*E{i + 1}{j + 1}"
                   for i in range(n) for j in range(n) for k in range(d))
    mult = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(n):
        for j in range(n):
            for q in range(n):
                # (e_k x E_ij)(e_l x E_jq) = sum_t c[k][l][t] e_t x E_iq
                out_off = (i * n + q) * d
                row_off = (i * n + j) * d
                col_off = (j * n + q) * d
                for kk in range(d):
                    plane = mult[row_off + kk]
                    pairs = a._pairs[kk]
                    for ll in range(d):
                        row = plane[col_off + ll]
                        for t, c in pairs[ll]:
                            row[out_off + t] = c
    unit = [ZERO] * dim
    for i in range(n):
        off = (i * n + i) * d
        for k, c in enumerate(a.unit):
            unit[off + k] = c
    big = Algebra(dim, labels, tuple(unit),
                  tuple(tuple(tuple(r) for r in plane) for plane in mult))
    return MatrixAlgebra(a, n, big)


def matrix_bimodule(m: Bimodule, n: int) -> MatrixBimodule:
    """M_n(m) over M_n(A): (a x E_ij).(f x E_kl) = [j=k] (a.f x E_il) and
    (f x E_kl).(a x E_ij) = [l=i] (f.a x E_kj)."""
    if n < 2:
        raise ValueError("matrix extension needs n >= 2")
    d, md = m.algebra_dim, m.dim
    adim, mdim = n * n * d, n * n * md
    left = [[[ZERO] * mdim for _ in range(mdim)] for _ in range(adim)]
    right = [[[ZERO] * mdim for _ in range(adim)] for _ in range(mdim)]
    for i in range(n):
        for j in range(n):
            for l in range(n):
                a_off = (i * n + j) * d
                f_off = (j * n + l) * md
                out_off = (i * n + l) * md
                for aa in range(d):
                    plane = left[a_off + aa]
                    pairs = m._left_pairs[aa]
                    for pp in range(md):
                        row = plane[f_off + pp]
                        for q, c in pairs[pp]:
                            row[out_off + q] = c
    for kk in range(n):
        for i in range(n):
            for j in range(n):
                f_off = (kk * n + i) * md
                a_off = (i * n + j) * d
                out_off = (kk * n + j) * md
                for pp in range(md):
                    plane = right[f_off + pp]
                    pairs = m._right_pairs[pp]
                    for aa in range(d):
                        row = plane[a_off + aa]
                        for q, c in pairs[aa]:
                            row[out_off + q] = c
    big = Bimodule(mdim, adim,
                   tuple(tuple(tuple(r) for r in plane) for plane in left),
                   tuple(tuple(tuple(r) for r in plane) for plane in right))
    return MatrixBimodule(m, n, big)


def matrix_pair(a: Algebra, m: Bimodule, n: int) -> tuple[MatrixAlgebra, MatrixBimodule]:
    if m.algebra_dim != a.dim:
        raise ValueError("bimodule is not over this algebra")
    return matrix_algebra(a, n), matrix_bimodule(m, n)


# ---------------------------------------------------------------------------
# lift and components
# ---------------------------------------------------------------------------

def lift(delta: Derivation, ma: MatrixAlgebra, mm: MatrixBimodule) -> Derivation:
    """Entrywise extension: (a_ij) -> (delta(a_ij)) on the matrix pair."""
    if not delta.certified:
        raise ValueError("lift requires a certified derivation")
    if (delta.linmap.algebra_dim != ma.base.dim
            or delta.linmap.module_dim != mm.base.dim):
        raise ValueError("derivation shape does not match the base pair")
    if ma.n != mm.n:
        raise ValueError("matrix sizes differ")
    n, d, md = ma.n, ma.base.dim, mm.base.dim
    small = delta.matrix
    rows = [[ZERO] * ma.algebra.dim for _ in range(mm.bimodule.dim)]
    for i in range(n):
        for j in range(n):
            a_off = (i * n + j) * d
            m_off = (i * n + j) * md
            for q in range(md):
                out = rows[m_off + q]
                srow = small.entries[q]
                for k in range(d):
                    if srow[k]:
                        out[a_off + k] = srow[k]
    big_map = LinearMap(Matrix(mm.bimodule.dim, ma.algebra.dim,
                               tuple(tuple(r) for r in rows)))
    return certify(ma.algebra, mm.bimodule, big_map)


def component(D: Derivation, ma: MatrixAlgebra, mm: MatrixBimodule,
              i: int, j: int, r: int, s: int) -> LinearMap:
    """The base-pair map a -> [D(a x E_rs)]_(i,j)."""
    if not D.certified:
        raise ValueError("component requires a certified derivation")
    ma._check_block(i, j)
    ma._check_block(r, s)
    d, md = ma.base.dim, mm.base.dim
    big = D.matrix
    m_off = (i * ma.n + j) * md
    a_off = (r * ma.n + s) * d
    rows = tuple(tuple(big.entries[m_off + q][a_off + k] for k in range(d))
                 for q in range(md))
    return LinearMap(Matrix(md, d, rows))


@dataclass(frozen=True)
class Decomposition:
    """D = inner_part + lifted_part with inner witness B and base derivation
    delta = the (0,0|0,0) component."""

    witness: Vector
    delta: Derivation
    inner_part: Derivation
    lifted_part: Derivation


def decompose(D: Derivation, ma: MatrixAlgebra, mm: MatrixBimodule) -> Decomposition:
    """Split a derivation of the matrix pair as inner-by-B plus a lifted base
    derivation.  B has blocks B_ij = [D(1 x E_j0)]_(i,0); delta is the
    (0,0|0,0) component.  The recomposition is checked exactly and a failure
    raises DecompositionError."""
    if not D.certified:
        raise ValueError("decompose requires a certified derivation")
    if (D.linmap.algebra_dim != ma.algebra.dim
            or D.linmap.module_dim != mm.bimodule.dim):
        raise ValueError("derivation shape does not match the matrix pair")
    n = ma.n
    from .dercalc import inner_derivation
    witness = [ZERO] * mm.bimodule.dim
    for j in range(n):
        image = D.apply(ma.embed(ma.base.unit, j, 0))
        for i in range(n):
            block = mm.entry(image, i, 0)
            off = (i * n + j) * mm.base.dim
            for p, c in enumerate(block):
                witness[off + p] = c
    witness_v = tuple(witness)
    base_a = ma.base
    base_m = mm.base
    delta = certify(base_a, base_m, component(D, ma, mm, 0, 0, 0, 0))
    inner_part = inner_derivation(ma.algebra, mm.bimodule, witness_v)
    lifted_part = lift(delta, ma, mm)
    if (inner_part.matrix + lifted_part.matrix).entries != D.matrix.entries:
        raise DecompositionError(
            "recomposition failed: inner part plus lifted part != D")
    return Decomposition(witness_v, delta, inner_part, lifted_part)


# ---------------------------------------------------------------------------
# component identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityResult:
    name: str
    passed: bool
    counterexample: tuple | None


@dataclass(frozen=True)
class Lemma22Report:
    results: tuple[IdentityResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def verify_lemma22(D: Derivation, ma: MatrixAlgebra, mm: MatrixBimodule) -> Lemma22Report:
    """Check the five standard component identities of a derivation on the
    matrix pair; each result carries the first offending index tuple."""
    if not D.certified:
        raise ValueError("verify_lemma22 requires a certified derivation")
    n, d = ma.n, ma.base.dim
    base_m = mm.base
    unit = ma.base.unit
    comp: dict[tuple[int, int, int, int], LinearMap] = {}
    for i in range(n):
        for j in range(n):
            for r in range(n):
                for s in range(n):
                    comp[(i, j, r, s)] = component(D, ma, mm, i, j, r, s)
    of_unit = {key: c.apply(unit) for key, c in comp.items()}
    results = []

    # (i) zero component when both rows and both columns differ
    bad = None
    for i in range(n):
        for j in range(n):
            for r in range(n):
                for s in range(n):
                    if i != r and j != s and not comp[(i, j, r, s)].is_zero():
                        bad = (i, j, r, s)
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    results.append(IdentityResult("i", bad is None, bad))

    # (ii) off-diagonal rows: (i,j|r,j) is right multiplication by the
    # unit value of (i,m|r,m), independent of the column index
    bad = None
    for i in range(n):
        for r in range(n):
            if i == r:
                continue
            for j in range(n):
                cij = comp[(i, j, r, j)]
                for m_ in range(n):
                    g = of_unit[(i, m_, r, m_)]
                    for k in range(d):
                        lhs = cij.matrix.col(k)
                        if (lhs != comp[(i, m_, r, m_)].matrix.col(k)
                                or lhs != act(base_m, "right", basis_vec(d, k), g)):
                            bad = (i, j, r, m_, k)
                            break
                    if bad:
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    results.append(IdentityResult("ii", bad is None, bad))

    # (iii) off-diagonal columns: (i,j|i,s) is left multiplication by the
    # unit value of (m,j|m,s), independent of the row index
    bad = None
    for j in range(n):
        for s in range(n):
            if j == s:
                continue
            for i in range(n):
                cis = comp[(i, j, i, s)]
                for m_ in range(n):
                    g = of_unit[(m_, j, m_, s)]
                    for k in range(d):
                        lhs = cis.matrix.col(k)
                        if (lhs != comp[(m_, j, m_, s)].matrix.col(k)
                                or lhs != act(base_m, "left", basis_vec(d, k), g)):
                            bad = (i, j, s, m_, k)
                            break
                    if bad:
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    results.append(IdentityResult("iii", bad is None, bad))

    # (iv) antisymmetry of the unit values across the diagonal
    bad = None
    for i in range(n):
        for j in range(n):
            for m_ in range(n):
                if of_unit[(i, m_, j, m_)] != tuple(-x for x in of_unit[(m_, j, m_, i)]):
                    bad = (i, j, m_)
                    break
            if bad:
                break
        if bad:
            break
    results.append(IdentityResult("iv", bad is None, bad))

    # (v) diagonal components differ from the corner component by an inner
    # derivation of unit values
    bad = None
    for i in range(n):
        for j in range(n):
            for m_ in range(n):
                gi = of_unit[(i, m_, i, m_)]
                gj = of_unit[(j, m_, j, m_)]
                dm = comp[(m_, m_, m_, m_)]
                cij = comp[(i, j, i, j)]
                for k in range(d):
                    ek = basis_vec(d, k)
                    want = vadd(tuple(x - y for x, y in
                                      zip(act(base_m, "right", ek, gi),
                                          act(base_m, "left", ek, gj))),
                                dm.matrix.col(k))
                    if cij.matrix.col(k) != want:
                        bad = (i, j, m_, k)
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    results.append(IdentityResult("v", bad is None, bad))

    return Lemma22Report(tuple(results))


# ---------------------------------------------------------------------------
# reblocking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReblockIso:
    """Basis bijection M_{rk}(A) -> M_r(M_k(A)):
    e x E_{ik+p, jk+q}  |->  (e x E_pq) x E_ij."""

    source: MatrixAlgebra
    inner: MatrixAlgebra
    target: MatrixAlgebra
    forward: tuple[int, ...]
    backward: tuple[int, ...]

    def apply(self, x: Sequence[Fraction]) -> Vector:
        if len(x) != self.source.algebra.dim:
            raise ValueError("element length does not match source algebra")
        out = [ZERO] * self.target.algebra.dim
        for t, c in enumerate(x):
            if c:
                out[self.forward[t]] = c
        return tuple(out)

    def inverse(self, y: Sequence[Fraction]) -> Vector:
        if len(y) != self.target.algebra.dim:
            raise ValueError("element length does not match target algebra")
        out = [ZERO] * self.source.algebra.dim
        for t, c in enumerate(y):
            if c:
                out[self.backward[t]] = c
        return tuple(out)


def reblock_iso(a: Algebra, r: int, k: int) -> ReblockIso:
    """The reblocking isomorphism for n = r*k; needs r, k >= 2 (single-row or
    single-column reblocking is excluded by the n >= 2 rule of
    matrix_algebra)."""
    if r < 2 or k < 2:
        raise ValueError("reblocking needs r >= 2 and k >= 2")
    whole = matrix_algebra(a, r * k)
    inner = matrix_algebra(a, k)
    outer = matrix_algebra(inner.algebra, r)
    n = r * k
    d = a.dim
    forward = [0] * whole.algebra.dim
    for row in range(n):
        i, p = divmod(row, k)
        for col in range(n):
            j, q = divmod(col, k)
            for t in range(d):
                src = (row * n + col) * d + t
                forward[src] = outer.flat(i, j, inner.flat(p, q, t))
    backward = [0] * whole.algebra.dim
    for src, dst in enumerate(forward):
        backward[dst] = src
    return ReblockIso(whole, inner, outer, tuple(forward), tuple(backward))


def transport_derivation(iso: ReblockIso, D: Derivation) -> Derivation:
    """Conjugate a derivation of the source regular pair by the reblocking
    permutation; returns a certified derivation of the target regular pair."""
    if not D.certified:
        raise ValueError("transport requires a certified derivation")
    dim = iso.source.algebra.dim
    if D.linmap.algebra_dim != dim or D.linmap.module_dim != dim:
        raise ValueError("derivation is not on the source regular pair")
    big = D.matrix
    rows = tuple(tuple(big.entries[iso.backward[u]][iso.backward[v]]
                       for v in range(dim)) for u in range(dim))
    tgt = iso.target.algebra
    return certify(tgt, regular_bimodule(tgt), LinearMap(Matrix(dim, dim, rows)))
