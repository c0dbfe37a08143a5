"""Deadbeat gain synthesis and exact simulation of networked agents.

Each agent runs x_i(k+1) = A x_i(k) + B u_i(k) with the cooperative input
u_i = -K Σ_j L_ij x_j, L = I - E. With E admissible and A - BK nilpotent the
agents synchronize in finitely many steps onto a trajectory of A.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .admissibility import check_admissible, consensus_alpha, laplacian
from .errors import (BadGain, MissingGain, NotAdmissible, NotStabilizable, ShapeError,
                     Unsupported, FieldMismatch)
from .ffmatrix import (CharPoly, FMatrix, Vector, char_poly, hstack, is_nilpotent, kron,
                       mat_inv, rref)
from .field import FieldSpec, field_inv

GAIN_SEARCH_LIMIT = 10**6


@dataclass(frozen=True)
class AgentSystem:
    A: FMatrix
    B: FMatrix
    K: FMatrix | None = None

    def __post_init__(self):
        if not self.A.is_square:
            raise ShapeError(f"A must be square, got {self.A.shape}")
        if self.B.rows != self.A.rows:
            raise ShapeError(f"B has {self.B.rows} rows, A is {self.A.rows}x{self.A.rows}")
        if self.A.field != self.B.field:
            raise FieldMismatch("A and B over different fields")
        if self.K is not None and self.K.shape != (self.B.cols, self.A.rows):
            raise ShapeError(f"K must be {self.B.cols}x{self.A.rows}, got {self.K.shape}")

    @property
    def field(self) -> FieldSpec:
        return self.A.field

    @property
    def n(self) -> int:
        return self.A.rows

    @property
    def m(self) -> int:
        return self.B.cols

    def closed_loop_agent(self) -> FMatrix:
        if self.K is None:
            raise MissingGain("system has no feedback gain")
        return self.A - self.B @ self.K

    def with_gain(self, K: FMatrix | None = None) -> AgentSystem:
        return AgentSystem(self.A, self.B, K if K is not None else stabilizing_gain(self.A, self.B))


@dataclass(frozen=True)
class StabilizabilityVerdict:
    controllable_dim: int
    stabilizable: bool
    reason: str


@dataclass(frozen=True)
class Staircase:
    verdict: StabilizabilityVerdict
    # invertible; its first ``controllable_dim`` columns span the controllable subspace
    basis: FMatrix


def _check_pair(A: FMatrix, B: FMatrix):
    if A.field != B.field:
        raise ShapeError("A and B over different fields")
    if not A.is_square or B.rows != A.rows:
        raise ShapeError(f"incompatible shapes A {A.shape}, B {B.shape}")


def controllability_matrix(A: FMatrix, B: FMatrix) -> FMatrix:
    """[B, AB, ..., A^(n-1) B]."""
    blocks = [B]
    for _ in range(A.rows - 1):
        blocks.append(A @ blocks[-1])
    return hstack(blocks)


def staircase(A: FMatrix, B: FMatrix) -> Staircase:
    """Split GF(p)^n into the controllable subspace and a complement."""
    _check_pair(A, B)
    n, F = A.rows, A.field
    C = controllability_matrix(A, B)
    _, pivots = rref(C)
    r = len(pivots)
    cols = [C.col_vec(j) for j in pivots]
    # complete with standard basis vectors, keeping independence
    for i in range(n):
        if len(cols) == n:
            break
        e = tuple(int(k == i) for k in range(n))
        trial = FMatrix.from_rows(zip(*(cols + [e])), F)
        if len(rref(trial)[1]) == len(cols) + 1:
            cols.append(e)
    basis = FMatrix.from_rows(zip(*cols), F)
    At = mat_inv(basis) @ A @ basis
    A_u = At.block(r, n, r, n)
    if r == n:
        ok, why = True, "controllable"
    elif is_nilpotent(A_u):
        ok, why = True, "uncontrollable block is nilpotent"
    else:
        ok, why = False, "uncontrollable block is not nilpotent"
    return Staircase(StabilizabilityVerdict(r, ok, why), basis)


def deadbeat_gain_siso(A: FMatrix, b: FMatrix) -> FMatrix:
    """Ackermann gain for a controllable single-input pair: K = e_n^T C^-1 A^n."""
    n, F = A.rows, A.field
    C = controllability_matrix(A, b)
    last = FMatrix.row([0] * (n - 1) + [1], F)
    return last @ mat_inv(C) @ (A ** n)


def nilpotent_gains(A: FMatrix, B: FMatrix, limit: int = GAIN_SEARCH_LIMIT) -> list[FMatrix]:
    """Every K with A - BK nilpotent, by exhaustive search over GF(p)^(m x n)."""
    _check_pair(A, B)
    n, m, F = A.rows, B.cols, A.field
    if F.p ** (m * n) > limit:
        raise Unsupported(f"gain search space p^(mn) = {F.p ** (m * n)} exceeds {limit}")
    found = []
    for flat in product(range(F.p), repeat=m * n):
        K = FMatrix(F, tuple(flat[i * n:(i + 1) * n] for i in range(m)))
        if is_nilpotent(A - B @ K):
            found.append(K)
    return found


def stabilizing_gain(A: FMatrix, B: FMatrix) -> FMatrix:
    """K with A - BK nilpotent (characteristic polynomial λ^n)."""
    sc = staircase(A, B)
    if not sc.verdict.stabilizable:
        raise NotStabilizable(sc.verdict.reason)
    n, m, F = A.rows, B.cols, A.field
    r = sc.verdict.controllable_dim
    if r == 0:
        return FMatrix.zeros(m, n, F)
    if m == 1:
        S = sc.basis
        Sinv = mat_inv(S)
        At = Sinv @ A @ S
        Bt = Sinv @ B
        Kc = deadbeat_gain_siso(At.block(0, r, 0, r), Bt.block(0, r, 0, 1))
        Kt = hstack([Kc, FMatrix.zeros(1, n - r, F)]) if r < n else Kc
        return Kt @ Sinv
    gains = nilpotent_gains(A, B)
    if not gains:
        raise NotStabilizable("exhaustive search found no nilpotent-placing gain")
    return gains[0]


def closed_loop(E: FMatrix, sys: AgentSystem) -> FMatrix:
    """I_N ⊗ A - (I_N - E) ⊗ BK."""
    if sys.K is None:
        raise MissingGain("system has no feedback gain")
    if not E.is_square:
        raise ShapeError(f"graph matrix must be square, got {E.shape}")
    F = sys.field
    N = E.rows
    return kron(FMatrix.identity(N, F), sys.A) - kron(laplacian(E), sys.B @ sys.K)


def verify_closed_loop_spectrum(E: FMatrix, sys: AgentSystem) -> bool:
    """char_poly(closed loop) == char_poly(A) · λ^((N-1)n)."""
    big = closed_loop(E, sys)
    expected = char_poly(sys.A) * CharPoly.monomial((E.rows - 1) * sys.n, sys.field)
    return char_poly(big) == expected


# -- simulation ---------------------------------------------------------------

@dataclass
class SimulationTrace:
    """states[k][i] is agent i's state (a tuple of length n) at step k."""

    states: list[list[Vector]]
    sync_step: int | None
    alpha_traj: list[Vector] | None = None
    p: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def kmax(self) -> int:
        return len(self.states) - 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "agent", "dim", "value"])
        for k, agents in enumerate(self.states):
            for i, x in enumerate(agents):
                for d, v in enumerate(x):
                    w.writerow([k, i, d, v])
            if self.alpha_traj is not None:
                for d, v in enumerate(self.alpha_traj[k]):
                    w.writerow([k, "alpha", d, v])
        return buf.getvalue()


def _sync_step(states: list[list[Vector]], require_constant: bool = False) -> int | None:
    """First k from which all agents agree (and, optionally, stop moving) to the end.

    A synchronization at the very last recorded step is not confirmed, since
    agreement has to hold at k and k+1.
    """
    def agree(k):
        first = states[k][0]
        return all(x == first for x in states[k])

    last = len(states) - 1
    k = last
    while k >= 0 and agree(k) and (not require_constant or states[k] == states[last]):
        k -= 1
    k += 1
    return k if k < last else None


def _split(X: Sequence[int], N: int, n: int) -> list[Vector]:
    return [tuple(X[i * n:(i + 1) * n]) for i in range(N)]


def simulate_scalar(E: FMatrix, x0: Sequence[int], kmax: int | None = None) -> SimulationTrace:
    """Iterate x(k+1) = E x(k). sync_step marks x(k) = α1 held fixed thereafter."""
    if not E.is_square:
        raise ShapeError(f"graph matrix must be square, got {E.shape}")
    N = E.rows
    if len(x0) != N:
        raise ShapeError(f"initial state of length {len(x0)} for N={N}")
    kmax = N + 2 if kmax is None else kmax
    if kmax < N:
        raise ValueError(f"kmax={kmax} shorter than N={N}")
    x = tuple(v % E.p for v in x0)
    xs = [x]
    for _ in range(kmax):
        x = E.apply(x)
        xs.append(x)
    states = [[(v,) for v in x] for x in xs]
    sync = _sync_step(states, require_constant=True)
    alpha = None
    meta = {}
    rep = check_admissible(E)
    if rep.admissible:
        a = consensus_alpha(E, xs[0])
        alpha = [(a,)] * len(xs)
        meta["alpha"] = a
        meta["alpha_matches"] = sync is not None and xs[sync] == (a,) * N
    return SimulationTrace(states, sync, alpha, E.p, meta)


def simulate_lti(E: FMatrix, sys: AgentSystem, X0: Sequence[int],
                 kmax: int | None = None) -> SimulationTrace:
    """Iterate the stacked closed loop and track α(k) = Σ p_i x_i(k) / Σ p_i."""
    rep = check_admissible(E)
    if not rep.admissible:
        raise NotAdmissible(f"graph matrix {E} is not admissible")
    if sys.K is None:
        raise MissingGain("system has no feedback gain")
    if not is_nilpotent(sys.closed_loop_agent()):
        raise BadGain("A - BK is not nilpotent")
    N, n, F = E.rows, sys.n, sys.field
    p = F.p
    if len(X0) != N * n:
        raise ShapeError(f"stacked state of length {len(X0)}, expected {N * n}")
    kmax = N * n + 2 if kmax is None else kmax
    if kmax < N * n:
        raise ValueError(f"kmax={kmax} shorter than N*n={N * n}")

    big = closed_loop(E, sys)
    weights = rep.left_eigvec
    inv_sum = field_inv(rep.p_dot_one, F)

    def alpha_of(agents):
        return tuple(sum(w * x[d] for w, x in zip(weights, agents)) * inv_sum % p
                     for d in range(n))

    X = tuple(v % p for v in X0)
    states = [_split(X, N, n)]
    for _ in range(kmax):
        X = big.apply(X)
        states.append(_split(X, N, n))
    alpha = [alpha_of(a) for a in states]
    recursion_ok = all(alpha[k + 1] == sys.A.apply(alpha[k]) for k in range(kmax))
    sync = _sync_step(states)
    return SimulationTrace(states, sync, alpha, p, {"alpha_recursion": recursion_ok})
