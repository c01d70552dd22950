"""Finite-dimensional unital associative algebras over Q, by structure constants.

An Algebra stores the full multiplication tensor c[i][j][k] (e_i e_j =
sum_k c[i][j][k] e_k) together with the coordinates of its unit.  A Bimodule
over an algebra stores left and right action tensors the same way.  Elements
are plain tuples of Fraction over the owning basis.

Validators check the defining axioms on every basis tuple and report each
violation with the offending indices and both expansions; everything else in
the package assumes its inputs have already been validated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlin import ONE, ZERO, Vector, basis_vec, vadd, vscale, zero_vec

Tensor3 = tuple[tuple[Vector, ...], ...]

SparseEntry = tuple[int, Fraction]


def _dense3(dim0: int, dim1: int, dim2: int,
            triples: Mapping[tuple[int, int, int], Fraction]) -> Tensor3:
    cube = [[[ZERO] * dim2 for _ in range(dim1)] for _ in range(dim0)]
    for (i, j, k), c in triples.items():
        if not (0 <= i < dim0 and 0 <= j < dim1 and 0 <= k < dim2):
            raise ValueError(f"structure constant index {(i, j, k)} out of range")
        cube[i][j][k] = Fraction(c)
    return tuple(tuple(tuple(r) for r in plane) for plane in cube)


def _sparse_pairs(tensor: Tensor3) -> tuple[tuple[tuple[SparseEntry, ...], ...], ...]:
    return tuple(
        tuple(tuple((k, c) for k, c in enumerate(row) if c) for row in plane)
        for plane in tensor)


@dataclass(frozen=True)
class Algebra:
    """Unital associative algebra given by basis labels, unit and mult tensor."""

    dim: int
    labels: tuple[str, ...]
    unit: Vector
    mult: Tensor3
    # sparse view of mult, rebuilt in __post_init__; never part of equality
    _pairs: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("algebra dimension must be positive")
        if len(self.labels) != self.dim or len(self.unit) != self.dim:
            raise ValueError("labels/unit length does not match dim")
        if len(self.mult) != self.dim:
            raise ValueError("mult tensor shape mismatch")
        for plane in self.mult:
            if len(plane) != self.dim or any(len(row) != self.dim for row in plane):
                raise ValueError("mult tensor shape mismatch")
        object.__setattr__(self, "_pairs", _sparse_pairs(self.mult))

    @classmethod
    def from_sparse(cls, dim: int, labels: Sequence[str], unit: Sequence,
                    triples: Mapping[tuple[int, int, int], Fraction]) -> "Algebra":
        return cls(dim, tuple(labels), tuple(Fraction(u) for u in unit),
                   _dense3(dim, dim, dim, triples))

    def basis_element(self, i: int) -> Vector:
        return basis_vec(self.dim, i)


@dataclass(frozen=True)
class Bimodule:
    """Bimodule over an Algebra: left tensor L[i][p][q] (e_i . f_p), right
    tensor R[p][i][q] (f_p . e_i)."""

    dim: int
    algebra_dim: int
    left: Tensor3
    right: Tensor3
    _left_pairs: tuple = field(default=None, compare=False, repr=False)
    _right_pairs: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.dim < 1 or self.algebra_dim < 1:
            raise ValueError("dimensions must be positive")
        if len(self.left) != self.algebra_dim or any(
                len(plane) != self.dim or any(len(row) != self.dim for row in plane)
                for plane in self.left):
            raise ValueError("left tensor shape mismatch")
        if len(self.right) != self.dim or any(
                len(plane) != self.algebra_dim or any(len(row) != self.dim for row in plane)
                for plane in self.right):
            raise ValueError("right tensor shape mismatch")
        object.__setattr__(self, "_left_pairs", _sparse_pairs(self.left))
        object.__setattr__(self, "_right_pairs", _sparse_pairs(self.right))

    def basis_element(self, p: int) -> Vector:
        return basis_vec(self.dim, p)


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def multiply(a: Algebra, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    """Product of two elements in a's basis coordinates."""
    if len(x) != a.dim or len(y) != a.dim:
        raise ValueError("element length does not match algebra dimension")
    acc = [ZERO] * a.dim
    pairs = a._pairs
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = pairs[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            s = xi * yj
            for k, c in row[j]:
                acc[k] += s * c
    return tuple(acc)


def act(m: Bimodule, side: str, a_coords: Sequence[Fraction],
        f_coords: Sequence[Fraction]) -> Vector:
    """Left action a.f (side="left") or right action f.a (side="right")."""
    if len(a_coords) != m.algebra_dim or len(f_coords) != m.dim:
        raise ValueError("element length mismatch in module action")
    acc = [ZERO] * m.dim
    if side == "left":
        for i, ai in enumerate(a_coords):
            if not ai:
                continue
            plane = m._left_pairs[i]
            for p, fp in enumerate(f_coords):
                if not fp:
                    continue
                s = ai * fp
                for q, c in plane[p]:
                    acc[q] += s * c
    elif side == "right":
        for p, fp in enumerate(f_coords):
            if not fp:
                continue
            plane = m._right_pairs[p]
            for i, ai in enumerate(a_coords):
                if not ai:
                    continue
                s = fp * ai
                for q, c in plane[i]:
                    acc[q] += s * c
    else:
        raise ValueError(f"unknown side {side!r}")
    return tuple(acc)


def regular_bimodule(a: Algebra) -> Bimodule:
    """The algebra acting on itself on both sides."""
    left = a.mult
    right = tuple(
        tuple(tuple(a.mult[p][i][q] for q in range(a.dim)) for i in range(a.dim))
        for p in range(a.dim))
    # right[p][i][q] = coeff of e_q in e_p e_i
    return Bimodule(a.dim, a.dim, left, right)


def commutes(a: Algebra, m: Bimodule) -> bool:
    """True iff x.f = f.x for all basis x of a and basis f of m."""
    if m.algebra_dim != a.dim:
        raise ValueError("bimodule is not over this algebra")
    for i in range(a.dim):
        for p in range(m.dim):
            if m.left[i][p] != m.right[p][i]:
                return False
    return True


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: tuple[int, ...]
    lhs: Vector
    rhs: Vector

    def describe(self, labels: Sequence[str] | None = None) -> str:
        if labels:
            where = ",".join(labels[i] for i in self.indices)
        else:
            where = ",".join(str(i) for i in self.indices)
        lhs = " ".join(str(c) for c in self.lhs)
        rhs = " ".join(str(c) for c in self.rhs)
        return f"{self.axiom} violated at ({where}): lhs=[{lhs}] rhs=[{rhs}]"


def validate_algebra(a: Algebra) -> list[Violation]:
    """Check both unit laws and associativity on all basis triples.

    Returns an empty list exactly when a is a unital associative algebra.
    Unit laws are checked first so a broken unit is reported before the
    associativity failures it usually drags along.
    """
    out: list[Violation] = []
    dim = a.dim
    for j in range(dim):
        ej = a.basis_element(j)
        lhs = multiply(a, a.unit, ej)
        if lhs != ej:
            out.append(Violation("left unit law", (j,), lhs, ej))
        rhs = multiply(a, ej, a.unit)
        if rhs != ej:
            out.append(Violation("right unit law", (j,), rhs, ej))
    pairs = a._pairs
    for i in range(dim):
        for j in range(dim):
            ij = pairs[i][j]
            for k in range(dim):
                lhs = [ZERO] * dim
                for t, c in ij:
                    for s, c2 in pairs[t][k]:
                        lhs[s] += c * c2
                rhs = [ZERO] * dim
                for t, c in pairs[j][k]:
                    for s, c2 in pairs[i][t]:
                        rhs[s] += c * c2
                if lhs != rhs:
                    out.append(Violation("associativity", (i, j, k),
                                         tuple(lhs), tuple(rhs)))
    return out


def validate_bimodule(a: Algebra, m: Bimodule) -> list[Violation]:
    """Check the four bimodule axioms on all basis tuples:
    (xy).f = x.(y.f), f.(xy) = (f.x).y, (x.f).y = x.(f.y), 1.f = f = f.1.
    """
    if m.algebra_dim != a.dim:
        raise ValueError("bimodule is not over this algebra")
    out: list[Violation] = []
    dim, mdim = a.dim, m.dim
    for p in range(mdim):
        fp = m.basis_element(p)
        lhs = act(m, "left", a.unit, fp)
        if lhs != fp:
            out.append(Violation("left unit action", (p,), lhs, fp))
        rhs = act(m, "right", a.unit, fp)
        if rhs != fp:
            out.append(Violation("right unit action", (p,), rhs, fp))
    for i in range(dim):
        ei = a.basis_element(i)
        for j in range(dim):
            ej = a.basis_element(j)
            prod = multiply(a, ei, ej)
            for p in range(mdim):
                fp = m.basis_element(p)
                lhs = act(m, "left", prod, fp)
                rhs = act(m, "left", ei, act(m, "left", ej, fp))
                if lhs != rhs:
                    out.append(Violation("left associativity", (i, j, p), lhs, rhs))
                lhs = act(m, "right", prod, fp)
                rhs = act(m, "right", ej, act(m, "right", ei, fp))
                if lhs != rhs:
                    out.append(Violation("right associativity", (p, i, j), lhs, rhs))
                lhs = act(m, "right", ej, act(m, "left", ei, fp))
                rhs = act(m, "left", ei, act(m, "right", ej, fp))
                if lhs != rhs:
                    out.append(Violation("mixed associativity", (i, p, j), lhs, rhs))
    return out


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

F1 = Fraction(1)


def _field() -> Algebra:
    return Algebra.from_sparse(1, ("1",), (1,), {(0, 0, 0): F1})


def _dual_numbers() -> Algebra:
    # basis 1, eps with eps^2 = 0
    return Algebra.from_sparse(
        2, ("1", "eps"), (1, 0),
        {(0, 0, 0): F1, (0, 1, 1): F1, (1, 0, 1): F1})


def _group_algebra_c2() -> Algebra:
    # basis 1, g with g^2 = 1
    return Algebra.from_sparse(
        2, ("1", "g"), (1, 0),
        {(0, 0, 0): F1, (0, 1, 1): F1, (1, 0, 1): F1, (1, 1, 0): F1})


def _matrix_units(n: int) -> dict[tuple[int, int, int], Fraction]:
    # basis E_{ij} flattened as i*n+j; E_{ab} E_{cd} = [b=c] E_{ad}
    triples = {}
    for a in range(n):
        for b in range(n):
            for d in range(n):
                triples[(a * n + b, b * n + d, a * n + d)] = F1
    return triples


def _full_matrix_2() -> Algebra:
    labels = ("E11", "E12", "E21", "E22")
    unit = (1, 0, 0, 1)
    return Algebra.from_sparse(4, labels, unit, _matrix_units(2))


def _upper_triangular_2() -> Algebra:
    # basis E11, E12, E22
    labels = ("E11", "E12", "E22")
    triples = {
        (0, 0, 0): F1,  # E11 E11
        (0, 1, 1): F1,  # E11 E12
        (1, 2, 1): F1,  # E12 E22
        (2, 2, 2): F1,  # E22 E22
    }
    return Algebra.from_sparse(3, labels, (1, 0, 1), triples)


def direct_sum(a: Algebra, b: Algebra) -> Algebra:
    """Product algebra with componentwise operations and unit (1_a, 1_b)."""
    dim = a.dim + b.dim
    labels = tuple(f"({lab},0)" for lab in a.labels) + tuple(f"(0,{lab})" for lab in b.labels)
    unit = tuple(a.unit) + tuple(b.unit)
    triples: dict[tuple[int, int, int], Fraction] = {}
    for i in range(a.dim):
        for j in range(a.dim):
            for k, c in enumerate(a.mult[i][j]):
                if c:
                    triples[(i, j, k)] = c
    off = a.dim
    for i in range(b.dim):
        for j in range(b.dim):
            for k, c in enumerate(b.mult[i][j]):
                if c:
                    triples[(off + i, off + j, off + k)] = c
    return Algebra.from_sparse(dim, labels, unit, triples)


_BUILDERS = {
    "field": _field,
    "dual_numbers": _dual_numbers,
    "group_algebra_C2": _group_algebra_c2,
    "full_matrix_2": _full_matrix_2,
    "upper_triangular_2": _upper_triangular_2,
}

CATALOG_NAMES = tuple(_BUILDERS) + ("direct_sum(x,y)",)

_DIRECT_SUM_RE = re.compile(r"^direct_sum\((.*)\)$")


def _split_args(body: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for t, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(body[start:t])
            start = t + 1
    parts.append(body[start:])
    return [p.strip() for p in parts]


def catalog_algebra(name: str) -> Algebra:
    name = name.strip()
    if name in _BUILDERS:
        return _BUILDERS[name]()
    m = _DIRECT_SUM_RE.match(name)
    if m:
        args = _split_args(m.group(1))
        if len(args) != 2:
            raise ValueError(f"direct_sum takes two arguments, got {args!r}")
        return direct_sum(catalog_algebra(args[0]), catalog_algebra(args[1]))
    raise ValueError(f"unknown catalog algebra {name!r}")


def catalog(name: str) -> tuple[Algebra, Bimodule]:
    """Named example algebra with its regular bimodule."""
    a = catalog_algebra(name)
    return a, regular_bimodule(a)
