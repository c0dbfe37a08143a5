"""Consensus admissibility of graph matrices over GF(p).

A graph matrix E is admissible when it is row-stochastic, its characteristic
polynomial is (λ - 1)λ^(N-1), and its left eigenvector at the eigenvalue 1
has a nonzero sum. Then x(k+1) = E x(k) reaches α·1 in finitely many steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotAdmissible, ShapeError, SingularMatrix
from .ffmatrix import (CharPoly, FMatrix, Vector, char_poly, classify, left_nullspace,
                       mat_inv)
from .field import FieldSpec, field_inv


@dataclass(frozen=True)
class GraphSpec:
    """Adjacency matrix of a graph with GF(p) edge weights."""

    E: FMatrix

    def __post_init__(self):
        if not self.E.is_square:
            raise ShapeError(f"graph matrix must be square, got {self.E.shape}")

    @property
    def field(self) -> FieldSpec:
        return self.E.field

    @property
    def N(self) -> int:
        return self.E.rows

    def edges(self) -> list[tuple[int, int, int]]:
        """(i, j, weight) for every nonzero entry."""
        return [(i, j, w) for i, row in enumerate(self.E.data) for j, w in enumerate(row) if w]


@dataclass(frozen=True)
class AdmissibilityReport:
    row_stochastic: bool
    charpoly_ok: bool
    left_eigvec: Vector | None
    p_dot_one: int
    admissible: bool
    laplacian: FMatrix
    nilpotent: bool = False
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def as_text(self) -> str:
        eig = "none" if self.left_eigvec is None else ",".join(map(str, self.left_eigvec))
        lines = [
            f"admissible={str(self.admissible).lower()}",
            f"row_stochastic={str(self.row_stochastic).lower()}",
            f"charpoly_ok={str(self.charpoly_ok).lower()}",
            f"nilpotent={str(self.nilpotent).lower()}",
            f"left_eigvec={eig}",
            f"p_dot_one={self.p_dot_one}",
            "laplacian=" + ";".join(",".join(map(str, r)) for r in self.laplacian.data),
        ]
        lines += [f"warning={w}" for w in self.warnings]
        return "\n".join(lines) + "\n"


def consensus_charpoly(N: int, field: FieldSpec) -> CharPoly:
    """(λ - 1) λ^(N-1)."""
    return CharPoly.from_roots([1] + [0] * (N - 1), field)


def _normalize(v: Sequence[int], field: FieldSpec) -> Vector:
    lead = next(x for x in v if x)
    s = field_inv(lead, field)
    return tuple(x * s % field.p for x in v)


def laplacian(E: FMatrix) -> FMatrix:
    if not E.is_square:
        raise ShapeError(f"Laplacian needs a square matrix, got {E.shape}")
    return FMatrix.identity(E.rows, E.field) - E


def check_admissible(E: FMatrix) -> AdmissibilityReport:
    if not E.is_square:
        raise ShapeError(f"graph matrix must be square, got {E.shape}")
    N, F = E.rows, E.field
    flags = classify(E)
    L = laplacian(E)
    charpoly_ok = char_poly(E) == consensus_charpoly(N, F)

    # left eigenvectors at eigenvalue 1: v (E - I) = 0
    null = left_nullspace(E - FMatrix.identity(N, F))
    eig = _normalize(null[0], F) if len(null) == 1 else None
    p_dot_one = sum(eig) % F.p if eig is not None else 0

    warnings = []
    # a simple eigenvalue 1 forces p^T 1 != 0, so this needs a defective eigenvalue 1
    if eig is not None and p_dot_one == 0 and flags.row_stochastic:
        warnings.append("p^T 1 = 0: consensus only for initial states with p^T x(0) = 0")
    admissible = flags.row_stochastic and charpoly_ok and eig is not None and p_dot_one != 0
    return AdmissibilityReport(
        row_stochastic=flags.row_stochastic,
        charpoly_ok=charpoly_ok,
        left_eigvec=eig,
        p_dot_one=p_dot_one,
        admissible=admissible,
        laplacian=L,
        nilpotent=flags.nilpotent,
        warnings=tuple(warnings),
    )


def consensus_alpha(E: FMatrix, x0: Sequence[int]) -> int:
    """Final consensus value (p^T x0) / (p^T 1)."""
    rep = check_admissible(E)
    if not rep.admissible:
        raise NotAdmissible(f"graph matrix {E} is not admissible")
    if len(x0) != E.rows:
        raise ShapeError(f"initial state of length {len(x0)} for N={E.rows}")
    p = E.p
    num = sum(a * b for a, b in zip(rep.left_eigvec, x0)) % p
    return num * field_inv(rep.p_dot_one, E.field) % p


def similar_transform(E: FMatrix, T: FMatrix) -> FMatrix:
    """T^-1 E T."""
    try:
        Tinv = mat_inv(T)
    except SingularMatrix:
        raise SingularMatrix(f"transformation {T} is singular") from None
    return Tinv @ E @ T


def lemma_q(N: int, field: FieldSpec) -> FMatrix:
    """Q = [I_{N-1} 1; 0 1], which maps e_N onto 1_N."""
    return FMatrix.from_rows(
        [[int(i == j) for j in range(N - 1)] + [1] for i in range(N - 1)] + [[0] * (N - 1) + [1]],
        field)


def seed_admissible(N: int, field: FieldSpec) -> FMatrix:
    """Admissible E = Q J Q^-1 built from the Jordan form J = diag(0, ..., 0, 1)."""
    if N < 2:
        raise ShapeError("seed graph needs N >= 2")
    J = FMatrix.from_rows([[int(i == j == N - 1) for j in range(N)] for i in range(N)], field)
    Q = lemma_q(N, field)
    return Q @ J @ mat_inv(Q)


def orbit(E: FMatrix, group: Sequence[FMatrix]) -> list[FMatrix]:
    """Distinct T^-1 E T over ``group``, in first-seen order."""
    seen: dict[FMatrix, None] = {}
    for T in group:
        seen.setdefault(similar_transform(E, T), None)
    return list(seen)
