"""Dense matrices over GF(p) with exact residue entries.

Matrices are immutable and hashable, so they can be collected into sets and
used as dictionary keys by the enumeration code. Entries are plain Python
ints reduced into ``[0, p)`` after every ring operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FieldMismatch, ParseError, ShapeError, SingularMatrix
from .field import FieldSpec, field_inv, is_prime

Vector = tuple[int, ...]


@dataclass(frozen=True)
class FMatrix:
    field: FieldSpec
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        p = self.field.p
        width = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != width:
                raise ShapeError("ragged rows")
            for e in row:
                if not 0 <= e < p:
                    raise ValueError(f"entry {e} outside [0, {p})")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], field: FieldSpec) -> FMatrix:
        p = field.p
        return cls(field, tuple(tuple(int(e) % p for e in row) for row in rows))

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> FMatrix:
        return cls(field, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> FMatrix:
        return cls(field, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def ones(cls, n: int, field: FieldSpec) -> FMatrix:
        """The all-ones column vector 1_n as an n x 1 matrix."""
        return cls(field, tuple((1,) for _ in range(n)))

    @classmethod
    def basis(cls, i: int, n: int, field: FieldSpec) -> FMatrix:
        """Column basis vector e_i (0-based index) as an n x 1 matrix."""
        if not 0 <= i < n:
            raise ShapeError(f"basis index {i} outside dimension {n}")
        return cls(field, tuple((int(r == i),) for r in range(n)))

    @classmethod
    def column(cls, v: Sequence[int], field: FieldSpec) -> FMatrix:
        return cls.from_rows(((e,) for e in v), field)

    @classmethod
    def row(cls, v: Sequence[int], field: FieldSpec) -> FMatrix:
        return cls.from_rows((v,), field)

    # -- shape ------------------------------------------------------------

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> Vector:
        return tuple(e for row in self.data for e in row)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def row_vec(self, i: int) -> Vector:
        return self.data[i]

    def col_vec(self, j: int) -> Vector:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[Vector]:
        return [self.col_vec(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.data]

    # -- arithmetic -------------------------------------------------------

    def _check_field(self, other: FMatrix):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: FMatrix) -> FMatrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        p = self.p
        return FMatrix(self.field, tuple(
            tuple((a + b) % p for a, b in zip(r1, r2)) for r1, r2 in zip(self.data, other.data)))

    def __sub__(self, other: FMatrix) -> FMatrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {other.shape} from {self.shape}")
        p = self.p
        return FMatrix(self.field, tuple(
            tuple((a - b) % p for a, b in zip(r1, r2)) for r1, r2 in zip(self.data, other.data)))

    def __neg__(self) -> FMatrix:
        p = self.p
        return FMatrix(self.field, tuple(tuple((-a) % p for a in row) for row in self.data))

    def scale(self, c: int) -> FMatrix:
        p = self.p
        return FMatrix(self.field, tuple(tuple((c * a) % p for a in row) for row in self.data))

    def __matmul__(self, other: FMatrix) -> FMatrix:
        self._check_field(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.p
        ocols = other.columns()
        return FMatrix(self.field, tuple(
            tuple(sum(a * b for a, b in zip(row, col)) % p for col in ocols) for row in self.data))

    def apply(self, v: Sequence[int]) -> Vector:
        """M v for a plain column vector ``v``."""
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        p = self.p
        return tuple(sum(a * b for a, b in zip(row, v)) % p for row in self.data)

    def left_apply(self, v: Sequence[int]) -> Vector:
        """v^T M for a plain row vector ``v``."""
        if len(v) != self.rows:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        p = self.p
        return tuple(sum(v[i] * self.data[i][j] for i in range(self.rows)) % p
                     for j in range(self.cols))

    @property
    def T(self) -> FMatrix:
        return FMatrix(self.field, tuple(zip(*self.data)) if self.data else ())

    def __pow__(self, k: int) -> FMatrix:
        if not self.is_square:
            raise ShapeError("power of non-square matrix")
        if k < 0:
            return mat_inv(self) ** (-k)
        result = FMatrix.identity(self.rows, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.data)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> FMatrix:
        return FMatrix(self.field, tuple(row[c0:c1] for row in self.data[r0:r1]))

    def __str__(self):
        return "[" + "; ".join(" ".join(map(str, row)) for row in self.data) + "]"


def mat(rows, p: int | FieldSpec) -> FMatrix:
    """Shorthand: ``mat([[2, 2], [0, 1]], 3)``."""
    field = p if isinstance(p, FieldSpec) else FieldSpec(p)
    return FMatrix.from_rows(rows, field)


def hstack(blocks: Sequence[FMatrix]) -> FMatrix:
    field = blocks[0].field
    for b in blocks:
        if b.field != field:
            raise FieldMismatch("hstack over different fields")
        if b.rows != blocks[0].rows:
            raise ShapeError("hstack row mismatch")
    return FMatrix(field, tuple(sum((b.data[i] for b in blocks), ()) for i in range(blocks[0].rows)))


def vstack(blocks: Sequence[FMatrix]) -> FMatrix:
    field = blocks[0].field
    for b in blocks:
        if b.field != field:
            raise FieldMismatch("vstack over different fields")
        if b.cols != blocks[0].cols:
            raise ShapeError("vstack column mismatch")
    return FMatrix(field, sum((b.data for b in blocks), ()))


def _require_square(T: FMatrix, what: str):
    if not T.is_square:
        raise ShapeError(f"{what} needs a square matrix, got {T.shape}")


# -- elimination ------------------------------------------------------------

def rref(T: FMatrix) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over GF(p); returns (rows, pivot columns)."""
    p = T.p
    m = T.tolist()
    pivots: list[int] = []
    r = 0
    for c in range(T.cols):
        if r == T.rows:
            break
        piv = next((i for i in range(r, T.rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field_inv(m[r][c], T.field)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(T.rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(T: FMatrix) -> int:
    return len(rref(T)[1])


def mat_det(T: FMatrix) -> int:
    _require_square(T, "determinant")
    p = T.p
    m = T.tolist()
    n = T.rows
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = field_inv(m[c][c], T.field)
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return det % p


def mat_inv(T: FMatrix) -> FMatrix:
    _require_square(T, "inverse")
    n = T.rows
    aug = hstack([T, FMatrix.identity(n, T.field)])
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix(f"matrix {T} is singular over GF({T.p})")
    return FMatrix(T.field, tuple(tuple(row[n:]) for row in m))


def left_nullspace(T: FMatrix) -> list[Vector]:
    """Basis of {v : v T = 0}. Each vector has a 1 at its free coordinate."""
    Tt = T.T
    m, pivots = rref(Tt)
    p = T.p
    n = T.rows
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-m[r][f]) % p
        basis.append(tuple(v))
    return basis


def kron(A: FMatrix, B: FMatrix) -> FMatrix:
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    p = A.p
    return FMatrix(A.field, tuple(
        tuple(a * b % p for a in arow for b in brow)
        for arow in A.data for brow in B.data))


# -- characteristic polynomial ---------------------------------------------

@dataclass(frozen=True)
class CharPoly:
    """Monic polynomial, coefficients from the leading power down to λ^0."""

    coeffs: tuple[int, ...]
    field: FieldSpec

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def monomial(cls, n: int, field: FieldSpec) -> CharPoly:
        return cls((1,) + (0,) * n, field)

    @classmethod
    def from_roots(cls, roots: Sequence[int], field: FieldSpec) -> CharPoly:
        """∏ (λ - r) over the given roots."""
        out = cls((1,), field)
        for r in roots:
            out = out * cls((1, (-r) % field.p), field)
        return out

    def __mul__(self, other: CharPoly) -> CharPoly:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return CharPoly(poly_mul(self.coeffs, other.coeffs, self.field.p), self.field)

    def __pow__(self, k: int) -> CharPoly:
        out = CharPoly((1,), self.field)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x: int) -> int:
        acc = 0
        for c in self.coeffs:
            acc = (acc * x + c) % self.field.p
        return acc

    def __str__(self):
        n = self.degree
        terms = []
        for k, c in enumerate(self.coeffs):
            e = n - k
            if c == 0:
                continue
            mono = "" if e == 0 else ("λ" if e == 1 else f"λ^{e}")
            coef = "" if (c == 1 and e) else str(c)
            terms.append(coef + mono)
        return " + ".join(terms) or "0"


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def char_poly(T: FMatrix) -> CharPoly:
    """det(λI - T) by Berkowitz's division-free recursion."""
    _require_square(T, "characteristic polynomial")
    p = T.p
    a = T.data
    coeffs = [1]
    for r in range(T.rows):
        # leading block A_r is r x r; bordered by column S, row R, corner a_rr
        S = [a[i][r] for i in range(r)]
        R = a[r][:r]
        toeplitz = [1, (-a[r][r]) % p]
        w = S
        for _ in range(r):
            toeplitz.append((-sum(x * y for x, y in zip(R, w))) % p)
            w = [sum(a[i][j] * w[j] for j in range(r)) % p for i in range(r)]
        coeffs = [sum(toeplitz[i - j] * coeffs[j] for j in range(min(i, r) + 1)) % p
                  for i in range(r + 2)]
    return CharPoly(tuple(coeffs), T.field)


# -- classification --------------------------------------------------------

@dataclass(frozen=True)
class MatrixClass:
    row_stochastic: bool
    invertible: bool
    permutation: bool
    nilpotent: bool
    identity: bool


def is_row_stochastic(T: FMatrix) -> bool:
    p = T.p
    return all(sum(row) % p == 1 for row in T.data)


def is_permutation(T: FMatrix) -> bool:
    if not T.is_square:
        return False
    for row in T.data:
        if any(e not in (0, 1) for e in row) or sum(row) != 1:
            return False
    return all(sum(col) == 1 for col in T.columns())


def is_nilpotent(T: FMatrix) -> bool:
    """T^k = 0 for some k <= N, decided by repeated squaring."""
    _require_square(T, "nilpotency")
    M, e = T, 1
    while e < T.rows:
        M = M @ M
        e *= 2
    return M.is_zero()


def is_identity(T: FMatrix) -> bool:
    return T.is_square and T == FMatrix.identity(T.rows, T.field)


def classify(T: FMatrix) -> MatrixClass:
    _require_square(T, "classify")
    return MatrixClass(
        row_stochastic=is_row_stochastic(T),
        invertible=mat_det(T) != 0,
        permutation=is_permutation(T),
        nilpotent=is_nilpotent(T),
        identity=is_identity(T),
    )


# -- text format -----------------------------------------------------------

def format_matrix(M: FMatrix) -> str:
    lines = [f"{M.p} {M.rows} {M.cols}"]
    lines += [" ".join(map(str, row)) for row in M.data]
    return "\n".join(lines) + "\n"


def format_matrices(mats: Iterable[FMatrix]) -> str:
    return "\n".join(format_matrix(M) for M in mats)


def _parse_ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"non-integer token in {line!r}", lineno) from None


def _parse_record(lines: list[tuple[int, str]]) -> FMatrix:
    lineno, header = lines[0]
    head = _parse_ints(header, lineno)
    if len(head) != 3:
        raise ParseError("header must be 'p ROWS COLS'", lineno)
    p, nrows, ncols = head
    if not is_prime(p):
        raise ParseError(f"modulus {p} is not prime", lineno)
    if nrows < 1 or ncols < 1:
        raise ParseError("dimensions must be positive", lineno)
    body = lines[1:]
    if len(body) != nrows:
        raise ParseError(f"expected {nrows} rows, found {len(body)}",
                         body[-1][0] if body else lineno)
    rows = []
    for lineno, text in body:
        vals = _parse_ints(text, lineno)
        if len(vals) != ncols:
            raise ParseError(f"expected {ncols} entries, found {len(vals)}", lineno)
        for v in vals:
            if not 0 <= v < p:
                raise ParseError(f"entry {v} out of range [0, {p})", lineno)
        rows.append(tuple(vals))
    return FMatrix(FieldSpec(p), tuple(rows))


def parse_matrices(text: str) -> list[FMatrix]:
    """Parse blank-line separated matrix records. Lines starting with '#' are skipped."""
    records: list[list[tuple[int, str]]] = []
    current: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            continue
        if not stripped:
            if current:
                records.append(current)
                current = []
            continue
        current.append((lineno, stripped))
    if current:
        records.append(current)
    return [_parse_record(rec) for rec in records]


def parse_matrix(text: str) -> FMatrix:
    mats = parse_matrices(text)
    if len(mats) != 1:
        raise ParseError(f"expected exactly one matrix record, found {len(mats)}")
    return mats[0]
