"""Signless Laplacian matrices, their spectra and derived statistics.

The central quantities are the two largest eigenvalues ``q1 >= q2`` of
``Q(G) = A + D``, their sum ``s2 = q1 + q2`` and the gap
``f = e + 3 - s2``, which is nonnegative for every graph. Dense symmetric
eigensolving is delegated to LAPACK through ``numpy.linalg.eigvalsh``; the
backward-error bound actually achieved is recorded on each spectrum so
downstream certification can reason about it.

Exact integer characteristic polynomials (for quotient matrices of small
order) are computed with the Faddeev-LeVerrier recurrence over Python
ints, which are arbitrary precision, so no overflow is possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, ParameterError, SolverError
from .graphs import MAX_VERTICES, Graph, edge_count

#: Default absolute eigenvalue tolerance requested from the solver.
DEFAULT_TOL = 1e-10

#: Order cap for exact characteristic polynomials.
CHAR_POLY_MAX = 16


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense symmetric matrix with exact (integer) entries."""

    order: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.order < 1 or len(self.entries) != self.order:
            raise ParameterError("entry rows do not match the declared order")
        for i, row in enumerate(self.entries):
            if len(row) != self.order:
                raise ParameterError(f"row {i} has wrong length")
        for i in range(self.order):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ParameterError(f"entries ({i},{j}) and ({j},{i}) differ")

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.float64)

    def trace(self) -> int:
        return sum(self.entries[i][i] for i in range(self.order))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in non-increasing order plus the achieved error bound."""

    values: tuple[float, ...]
    tol: float

    def __post_init__(self) -> None:
        if not self.values:
            raise ParameterError("empty spectrum")
        for a, b in zip(self.values, self.values[1:]):
            if a < b:
                raise ParameterError("spectrum not sorted non-increasingly")

    @property
    def q1(self) -> float:
        return self.values[0]

    @property
    def q2(self) -> float:
        if len(self.values) < 2:
            raise ParameterError("q2 needs at least two eigenvalues")
        return self.values[1]

    def total(self) -> float:
        return float(sum(self.values))


def signless_laplacian(g: Graph) -> SymmetricMatrix:
    """``Q(G) = A + D``: degrees on the diagonal, 1 for each edge."""
    rows = []
    for v in range(g.n):
        row = [(g.adj[v] >> u) & 1 for u in range(g.n)]
        row[v] = g.degree(v)
        rows.append(tuple(row))
    return SymmetricMatrix(g.n, tuple(rows))


def eigenvalues(m: SymmetricMatrix, tol: float = DEFAULT_TOL) -> Spectrum:
    """All eigenvalues of ``m``, sorted non-increasingly.

    Raises :class:`SolverError` if LAPACK fails to converge or if the
    achieved backward-error bound exceeds the requested ``tol``.
    """
    if tol <= 0:
        raise ParameterError("tolerance must be positive")
    if m.order > MAX_VERTICES:
        raise CapacityError(f"order {m.order} exceeds {MAX_VERTICES}")
    try:
        w = np.linalg.eigvalsh(m.as_array())
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver did not converge: {exc}") from exc
    scale = max(1.0, float(np.abs(w).max()))
    achieved = np.finfo(np.float64).eps * m.order * scale
    if achieved > tol:
        raise SolverError(
            f"achieved bound {achieved:.3e} exceeds requested tolerance {tol:.3e}"
        )
    return Spectrum(tuple(float(x) for x in w[::-1]), achieved)


def q_spectrum(g: Graph, tol: float = DEFAULT_TOL) -> Spectrum:
    """Spectrum of the signless Laplacian of ``g``."""
    return eigenvalues(signless_laplacian(g), tol)


def s2(g: Graph, tol: float = DEFAULT_TOL) -> float:
    """Sum of the two largest signless Laplacian eigenvalues."""
    if g.n < 2:
        raise ParameterError("s2 needs at least 2 vertices")
    spec = q_spectrum(g, tol)
    return spec.q1 + spec.q2


def f_gap(g: Graph, tol: float = DEFAULT_TOL) -> float:
    """Gap ``e + 3 - s2``; nonnegative for every graph."""
    return edge_count(g) + 3 - s2(g, tol)


def multiplicity(spec: Spectrum, lam: float, eps: float) -> int:
    """Number of eigenvalues within ``eps`` of ``lam``.

    ``eps`` must dominate the spectrum's own error bound, otherwise the
    count would be meaningless.
    """
    if eps < spec.tol:
        raise ParameterError("eps must be at least the spectrum tolerance")
    return sum(1 for v in spec.values if abs(v - lam) <= eps)


# ---------------------------------------------------------------------------
# exact integer polynomials


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with exact integer coefficients, degree-descending."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ParameterError("polynomial needs at least one coefficient")
        if self.coefficients[0] == 0:
            raise ParameterError("leading coefficient must be nonzero")
        for c in self.coefficients:
            if not isinstance(c, int):
                raise ParameterError("coefficients must be exact integers")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = self.coefficients[0] + x * 0  # promote to the argument's type
        for c in self.coefficients[1:]:
            acc = acc * x + c
        return acc

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def same_up_to_sign(self, other: "IntPolynomial") -> bool:
        return (
            self.coefficients == other.coefficients
            or self.coefficients == tuple(-c for c in other.coefficients)
        )

    def __str__(self) -> str:
        terms = []
        d = self.degree
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            power = d - k
            body = "" if power == 0 else ("x" if power == 1 else f"x^{power}")
            mag = abs(c)
            coeff = "" if (mag == 1 and power > 0) else str(mag)
            terms.append(("-" if c < 0 else ("+" if terms else "")) + coeff + body)
        return " ".join(terms) if terms else "0"


def char_poly_exact(matrix) -> IntPolynomial:
    """Exact characteristic polynomial ``det(xI - M)`` of an integer matrix.

    Uses the Faddeev-LeVerrier recurrence: the trace divisions it performs
    are exact over the integers, and Python ints never overflow.
    """
    rows = _int_rows(matrix)
    n = len(rows)
    if n > CHAR_POLY_MAX:
        raise CapacityError(f"exact characteristic polynomial limited to order {CHAR_POLY_MAX}")
    coeffs = [1]
    aux = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        prod = _mat_mul(rows, aux)
        tr = sum(prod[i][i] for i in range(n))
        if tr % k:
            raise ArithmeticError("trace division not exact; non-integer input?")
        ck = -(tr // k)
        coeffs.append(ck)
        for i in range(n):
            prod[i][i] += ck
        aux = prod
    return IntPolynomial(tuple(coeffs))


def _int_rows(matrix) -> list[list[int]]:
    if isinstance(matrix, SymmetricMatrix):
        raw: Sequence[Sequence] = matrix.entries
    elif hasattr(matrix, "entries"):
        raw = matrix.entries
    elif isinstance(matrix, np.ndarray):
        raw = matrix.tolist()
    else:
        raw = matrix
    rows = []
    for row in raw:
        cur = []
        for x in row:
            ix = int(x)
            if ix != x or isinstance(x, float):
                raise ParameterError("exact characteristic polynomial needs integer entries")
            cur.append(ix)
        rows.append(cur)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ParameterError("matrix must be square and non-empty")
    return rows


def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]
