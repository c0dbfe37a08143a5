"""Row-stochastic transformation matrices: generators, enumeration, counting.

The transformations T of interest are the invertible row-stochastic matrices
G^RS (those with T 1 = 1 and det T != 0) that are not permutations. Similarity
by any such T maps an admissible graph matrix to another admissible one.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Literal, Sequence

from .admissibility import lemma_q
from .errors import (BudgetExceeded, GenerationExhausted, ImpossibleConfig, ShapeError,
                     FieldMismatch)
from .ffmatrix import (FMatrix, Vector, classify, is_permutation, mat_det, mat_inv)
from .field import FieldSpec

Variant = Literal["sar", "tf_upper", "tf_lower", "stabilizer"]
VARIANTS = ("sar", "tf_upper", "tf_lower", "stabilizer")

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class GenConfig:
    N: int
    field: FieldSpec
    seed: int = 0
    max_attempts: int = 10**6
    variant: Variant = "sar"
    # reject only true permutations instead of every T with T^T T = I
    strict_permutation: bool = False

    def __post_init__(self):
        if self.N < 2:
            raise ShapeError("generators need N >= 2")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be positive")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")

    def rng(self) -> random.Random:
        return random.Random(self.seed)


# -- permutation equivalence ----------------------------------------------

def _check_pair(T1: FMatrix, T2: FMatrix):
    if T1.field != T2.field:
        raise FieldMismatch(f"{T1.field} vs {T2.field}")
    if T1.shape != T2.shape:
        raise ShapeError(f"shapes differ: {T1.shape} vs {T2.shape}")


def perm_equiv_naive(T1: FMatrix, T2: FMatrix) -> bool:
    """Is T1 = T2 P for a permutation P? Greedy column matching, O(N^3)."""
    _check_pair(T1, T2)
    used: set[int] = set()
    cols2 = T2.columns()
    for col in T1.columns():
        for j, c2 in enumerate(cols2):
            if j not in used and c2 == col:
                used.add(j)
                break
        else:
            return False
    return True


def sorted_columns(T: FMatrix) -> list[Vector]:
    # tuple comparison is exactly the lexicographic order on residues
    return sorted(T.columns())


def perm_equiv_lex(T1: FMatrix, T2: FMatrix) -> bool:
    """Is T1 = T2 P for a permutation P? Compares lexicographically sorted columns."""
    _check_pair(T1, T2)
    return sorted_columns(T1) == sorted_columns(T2)


def row_perm_equiv(T1: FMatrix, T2: FMatrix) -> bool:
    """Is T1 = P T2 for a permutation P?"""
    return perm_equiv_lex(T1.T, T2.T)


def coset_representatives(mats: Sequence[FMatrix]) -> list[FMatrix]:
    """One matrix per left coset T P_N, keeping the first one seen."""
    kept: list[FMatrix] = []
    for T in mats:
        if not any(perm_equiv_lex(T, K) for K in kept):
            kept.append(T)
    return kept


# -- sampling and rejection -------------------------------------------------

def sample_row_stochastic(N: int, field: FieldSpec, rng: random.Random) -> FMatrix:
    """Uniform draw from M^RS: N-1 free entries per row, last entry closes the sum."""
    p = field.p
    rows = []
    for _ in range(N):
        free = [rng.randrange(p) for _ in range(N - 1)]
        rows.append(free + [(1 - sum(free)) % p])
    return FMatrix.from_rows(rows, field)


def is_orthogonal(T: FMatrix) -> bool:
    return T.T @ T == FMatrix.identity(T.rows, T.field)


def sar_accepts(T: FMatrix, strict_permutation: bool = False) -> bool:
    if mat_det(T) == 0:
        return False
    return not (is_permutation(T) if strict_permutation else is_orthogonal(T))


def gen_sar(cfg: GenConfig, rng: random.Random | None = None) -> FMatrix:
    rng = rng or cfg.rng()
    if cardinalities(cfg.N, cfg.field).delta == 0:
        raise ImpossibleConfig(f"no admissible T exists for N={cfg.N}, p={cfg.field.p}")
    for _ in range(cfg.max_attempts):
        T = sample_row_stochastic(cfg.N, cfg.field, rng)
        if sar_accepts(T, cfg.strict_permutation):
            return T
    raise GenerationExhausted(f"no acceptable T in {cfg.max_attempts} attempts")


def sar_acceptance_rate(N: int, field: FieldSpec, attempts: int, seed: int,
                        strict_permutation: bool = False) -> Fraction:
    """Empirical per-attempt success frequency of the rejection test."""
    rng = random.Random(seed)
    hits = sum(sar_accepts(sample_row_stochastic(N, field, rng), strict_permutation)
               for _ in range(attempts))
    return Fraction(hits, attempts)


# -- triangular form --------------------------------------------------------

def _sample_upper(N: int, field: FieldSpec, rng: random.Random) -> FMatrix:
    p = field.p
    T = [[0] * N for _ in range(N)]
    for i in range(N - 1):
        T[i][i] = rng.randrange(1, p)
    for i in range(N - 2):
        for j in range(i + 1, N - 1):
            T[i][j] = rng.randrange(p)
    for i in range(N - 1):
        T[i][N - 1] = (1 - sum(T[i][i:N - 1])) % p
    T[N - 1][N - 1] = 1
    return FMatrix.from_rows(T, field)


def reverse(T: FMatrix) -> FMatrix:
    """J T J with J the reversal permutation: maps upper to lower triangular."""
    return FMatrix(T.field, tuple(row[::-1] for row in T.data[::-1]))


def gen_tf(cfg: GenConfig, rng: random.Random | None = None) -> FMatrix:
    """Triangular, invertible, row-stochastic, not the identity. No determinant needed."""
    rng = rng or cfg.rng()
    if upper_rs_count(cfg.N, cfg.field.p) < 1:
        raise ImpossibleConfig(f"only the identity is triangular RS for N={cfg.N}, p={cfg.field.p}")
    identity = FMatrix.identity(cfg.N, cfg.field)
    for _ in range(cfg.max_attempts):
        T = _sample_upper(cfg.N, cfg.field, rng)
        if T != identity:
            return reverse(T) if cfg.variant == "tf_lower" else T
    raise GenerationExhausted(f"no non-identity T in {cfg.max_attempts} attempts")


# -- stabilizer conjugation ---------------------------------------------------

@dataclass(frozen=True)
class StabilizerConstruction:
    A_block: FMatrix
    c_row: Vector
    Q: FMatrix
    T: FMatrix

    @property
    def A(self) -> FMatrix:
        return assemble_stabilizer(self.A_block, self.c_row)


def assemble_stabilizer(A_block: FMatrix, c_row: Sequence[int]) -> FMatrix:
    """A = [A_block 0; c^T 1], which fixes e_N."""
    n = A_block.rows
    if not A_block.is_square or len(c_row) != n:
        raise ShapeError("A_block must be square with a matching c row")
    rows = [list(r) + [0] for r in A_block.data] + [list(c_row) + [1]]
    return FMatrix.from_rows(rows, A_block.field)


def stabilizer_from_parts(A_block: FMatrix, c_row: Sequence[int]) -> StabilizerConstruction:
    A = assemble_stabilizer(A_block, c_row)
    Q = lemma_q(A.rows, A.field)
    T = Q @ A @ mat_inv(Q)
    return StabilizerConstruction(A_block, tuple(c % A.p for c in c_row), Q, T)


def gen_stabilizer(cfg: GenConfig, rng: random.Random | None = None) -> StabilizerConstruction:
    rng = rng or cfg.rng()
    p, n = cfg.field.p, cfg.N - 1
    for _ in range(cfg.max_attempts):
        A_block = FMatrix.from_rows(
            [[rng.randrange(p) for _ in range(n)] for _ in range(n)], cfg.field)
        if mat_det(A_block):
            c = [rng.randrange(p) for _ in range(n)]
            return stabilizer_from_parts(A_block, c)
    raise GenerationExhausted(f"no invertible A_block in {cfg.max_attempts} attempts")


def generate(cfg: GenConfig, count: int, dedup_cosets: bool = False) -> list[FMatrix]:
    """``count`` draws from one seeded stream; dedup keeps one per left coset."""
    rng = cfg.rng()
    if cfg.variant == "sar":
        draw = lambda: gen_sar(cfg, rng)
    elif cfg.variant in ("tf_upper", "tf_lower"):
        draw = lambda: gen_tf(cfg, rng)
    else:
        draw = lambda: gen_stabilizer(cfg, rng).T
    out = [draw() for _ in range(count)]
    return coset_representatives(out) if dedup_cosets else out


# -- enumeration oracles ------------------------------------------------------

def iter_row_stochastic(N: int, field: FieldSpec) -> Iterator[FMatrix]:
    """All of M^RS in odometer order over the free entries."""
    p = field.p
    for free in product(range(p), repeat=N * (N - 1)):
        rows = []
        for i in range(N):
            r = list(free[i * (N - 1):(i + 1) * (N - 1)])
            rows.append(tuple(r) + ((1 - sum(r)) % p,))
        yield FMatrix(field, tuple(rows))


def iter_all_matrices(N: int, field: FieldSpec) -> Iterator[FMatrix]:
    p = field.p
    for flat in product(range(p), repeat=N * N):
        yield FMatrix(field, tuple(flat[i * N:(i + 1) * N] for i in range(N)))


def _is_triangular(T: FMatrix, upper: bool) -> bool:
    n = T.rows
    return all(T[i, j] == 0 for i in range(n) for j in range(n) if (j < i if upper else j > i))


@dataclass
class EnumeratedSets:
    N: int
    field: FieldSpec
    m_rs: list[FMatrix] = field(default_factory=list)
    g_rs: list[FMatrix] = field(default_factory=list)
    g_rs_nonperm: list[FMatrix] = field(default_factory=list)
    u_rs_upper: list[FMatrix] = field(default_factory=list)
    u_rs_lower: list[FMatrix] = field(default_factory=list)
    perms: list[FMatrix] = field(default_factory=list)
    # members of G^RS with T^T T = I; compared against perms
    orthogonal: list[FMatrix] = field(default_factory=list)
    # members the literal SAR test accepts
    sar_accepted: list[FMatrix] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        return {k: len(getattr(self, k)) for k in
                ("m_rs", "g_rs", "g_rs_nonperm", "u_rs_upper", "u_rs_lower", "perms",
                 "orthogonal", "sar_accepted")}


def enumerate_sets(N: int, field: FieldSpec, budget: int = DEFAULT_BUDGET) -> EnumeratedSets:
    size = field.p ** (N * (N - 1))
    if size > budget:
        raise BudgetExceeded(f"|M^RS| = {size} exceeds budget {budget}")
    out = EnumeratedSets(N, field)
    for T in iter_row_stochastic(N, field):
        out.m_rs.append(T)
        cls = classify(T)
        if not cls.invertible:
            continue
        out.g_rs.append(T)
        if cls.permutation:
            out.perms.append(T)
        else:
            out.g_rs_nonperm.append(T)
        orth = is_orthogonal(T)
        if orth:
            out.orthogonal.append(T)
        else:
            out.sar_accepted.append(T)
        if not cls.identity:
            if _is_triangular(T, upper=True):
                out.u_rs_upper.append(T)
            if _is_triangular(T, upper=False):
                out.u_rs_lower.append(T)
    return out


def count_gl(N: int, field: FieldSpec, budget: int = DEFAULT_BUDGET) -> int:
    """|GL_N(GF(p))| by brute force over all p^(N^2) matrices."""
    size = field.p ** (N * N)
    if size > budget:
        raise BudgetExceeded(f"|M_N| = {size} exceeds budget {budget}")
    return sum(1 for M in iter_all_matrices(N, field) if mat_det(M))


# -- closed forms -------------------------------------------------------------

def gl_order(N: int, p: int) -> int:
    return math.prod(p**N - p**i for i in range(N))


def grs_order(N: int, p: int) -> int:
    return p ** (N - 1) * math.prod(p ** (N - 1) - p**i for i in range(N - 1))


def upper_rs_count(N: int, p: int) -> int:
    """Triangular invertible row-stochastic matrices other than I."""
    return (p - 1) ** (N - 1) * p ** ((N - 1) * (N - 2) // 2) - 1


def delta_product_form(N: int, p: int) -> Fraction:
    """∏_{i=1}^{N-1} (1 - p^-i) - N!/p^(N(N-1))."""
    prod = Fraction(1)
    for i in range(1, N):
        prod *= 1 - Fraction(1, p**i)
    return prod - Fraction(math.factorial(N), p ** (N * (N - 1)))


@dataclass(frozen=True)
class CardinalityReport:
    N: int
    p: int
    m_all: int
    gl: int
    m_rs: int
    g_rs: int
    u_rs: int
    perms: int
    delta_num: int  # g_rs - N!, over m_rs
    delta: Fraction

    def as_lines(self, approx: bool = False) -> str:
        lines = [f"N={self.N}", f"p={self.p}"]
        for name in ("m_all", "gl", "m_rs", "g_rs", "u_rs", "perms"):
            lines.append(f"{name}={getattr(self, name)}")
        lines.append(f"delta={self.delta.numerator}/{self.delta.denominator}")
        if approx:
            lines.append(f"delta_approx={float(self.delta):.6f}")
        return "\n".join(lines) + "\n"


def cardinalities(N: int, field: FieldSpec | int) -> CardinalityReport:
    p = field.p if isinstance(field, FieldSpec) else field
    if N < 1:
        raise ShapeError("N must be positive")
    m_rs = p ** (N * (N - 1))
    g_rs = grs_order(N, p)
    perms = math.factorial(N)
    return CardinalityReport(
        N=N, p=p,
        m_all=p ** (N * N),
        gl=gl_order(N, p),
        m_rs=m_rs,
        g_rs=g_rs,
        u_rs=upper_rs_count(N, p),
        perms=perms,
        delta_num=g_rs - perms,
        delta=Fraction(g_rs - perms, m_rs),
    )
