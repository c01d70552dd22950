"""Independent oracles used to cross-check the package's linear algebra.

Everything here deliberately avoids the package's constraint assembly and
echelon kernel: constraints are built element-by-element with multiply/act
over a small spanning set (all basis vectors, all pairwise sums, and the
unit), and ranks come from a plain textbook Gaussian elimination over
Fraction.  Agreement of dimensions computed along both routes is the point;
do not "simplify" by delegating to the package.
"""

from fractions import Fraction
from typing import Sequence

from matderiv import Algebra, Bimodule, act, basis_vec, multiply, vadd


def gauss_rank(rows: list[list[Fraction]]) -> int:
    """Row-reduce a dense rational matrix in place and return its rank."""
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = Fraction(1) / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def spanning_set(a: Algebra) -> list[tuple[Fraction, ...]]:
    """Basis vectors, all pairwise sums e_i + e_j (i < j), and the unit."""
    out = [basis_vec(a.dim, i) for i in range(a.dim)]
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            out.append(vadd(basis_vec(a.dim, i), basis_vec(a.dim, j)))
    out.append(a.unit)
    return out


def _leibniz_rows(a: Algebra, m: Bimodule, x, y, jordan: bool) -> list[list[Fraction]]:
    """Rows of the constraint 'F(xy) = F(x).y + x.F(y)' on the unknown matrix
    F (m.dim rows, a.dim columns), unknown (p, k) at index p * a.dim + k.
    With jordan=True the constraint is symmetrized in (x, y)."""
    nunk = m.dim * a.dim
    coeff = [[Fraction(0)] * nunk for _ in range(m.dim)]

    def add_image(z, sign):
        # sign * F(z): coefficient of F[p][k] at output coordinate p is z_k
        for k, zk in enumerate(z):
            if zk:
                for p in range(m.dim):
                    coeff[p][p * a.dim + k] += sign * zk

    def add_acted(z, side, other, sign):
        # sign * (F(z) acted on by 'other' from 'side'):
        # F[p][k] contributes z_k * act(other, f_p) at its output coordinates
        for p in range(m.dim):
            moved = act(m, side, other, basis_vec(m.dim, p))
            for k, zk in enumerate(z):
                if zk:
                    for q, mq in enumerate(moved):
                        if mq:
                            coeff[q][p * a.dim + k] += sign * zk * mq

    if jordan:
        z = vadd(multiply(a, x, y), multiply(a, y, x))
        add_image(z, Fraction(1))
        add_acted(x, "right", y, Fraction(-1))
        add_acted(y, "left", x, Fraction(-1))
        add_acted(y, "right", x, Fraction(-1))
        add_acted(x, "left", y, Fraction(-1))
    else:
        add_image(multiply(a, x, y), Fraction(1))
        add_acted(x, "right", y, Fraction(-1))
        add_acted(y, "left", x, Fraction(-1))
    return coeff


def derivation_dim_oracle(a: Algebra, m: Bimodule, jordan: bool = False) -> int:
    """Dimension of the (Jordan) derivation space, from constraints over all
    ordered pairs of the spanning set."""
    span = spanning_set(a)
    rows: list[list[Fraction]] = []
    for x in span:
        for y in span:
            rows.extend(_leibniz_rows(a, m, x, y, jordan))
    return m.dim * a.dim - gauss_rank(rows)


def inner_dim_oracle(a: Algebra, m: Bimodule) -> int:
    """Rank of w -> (x -> wx - xw), columns built element-by-element."""
    rows = []
    for p in range(m.dim):
        w = basis_vec(m.dim, p)
        flat: list[Fraction] = []
        for k in range(a.dim):
            e_k = basis_vec(a.dim, k)
            img = [wi - xi for wi, xi in zip(act(m, "right", e_k, w),
                                             act(m, "left", e_k, w))]
            flat.extend(img)
        rows.append(flat)
    return gauss_rank(rows)


def h1_dim_oracle(a: Algebra, m: Bimodule) -> int:
    return derivation_dim_oracle(a, m) - inner_dim_oracle(a, m)


def commutant_dim_oracle(s: list[list[Fraction]]) -> int:
    """dim {X : XS = SX} inside full n-by-n rational matrices, by direct
    elimination on the n^2 unknowns X[i][j]."""
    n = len(s)
    rows = []
    for i in range(n):
        for j in range(n):
            row = [Fraction(0)] * (n * n)
            # (XS - SX)[i][j] = sum_k X[i][k] S[k][j] - S[i][k] X[k][j]
            for k in range(n):
                row[i * n + k] += s[k][j]
                row[k * n + j] -= s[i][k]
            rows.append(row)
    return n * n - gauss_rank(rows)
