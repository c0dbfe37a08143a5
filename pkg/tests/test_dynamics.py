import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from ffconsensus import (AgentSystem, FMatrix, FieldSpec, closed_loop, mat, simulate_lti,
                         simulate_scalar, stabilizing_gain, staircase,
                         verify_closed_loop_spectrum)
from ffconsensus.admissibility import check_admissible, seed_admissible, similar_transform
from ffconsensus.dynamics import nilpotent_gains
from ffconsensus.errors import (BadGain, MissingGain, NotAdmissible, NotStabilizable,
                                Unsupported)
from ffconsensus.ffmatrix import is_nilpotent, mat_det, mat_inv
from ffconsensus.generators import GenConfig, gen_stabilizer

from oracles import all_vectors

E0 = mat([[0, 1], [0, 1]], 3)
A0 = mat([[0, 1], [1, 0]], 3)
B0 = mat([[0], [1]], 3)
K0 = mat([[1, 0]], 3)
SYS0 = AgentSystem(A0, B0, K0)


def random_system(n, m, F, rng):
    A = FMatrix.from_rows([[rng.randrange(F.p) for _ in range(n)] for _ in range(n)], F)
    B = FMatrix.from_rows([[rng.randrange(F.p) for _ in range(m)] for _ in range(n)], F)
    return A, B


def test_staircase_examples():
    v = staircase(A0, B0).verdict
    assert v.controllable_dim == 2 and v.stabilizable
    v = staircase(mat([[0, 1], [0, 0]], 3), mat([[0], [0]], 3)).verdict
    assert v.controllable_dim == 0 and v.stabilizable
    v = staircase(FMatrix.identity(2, FieldSpec(3)), mat([[0], [0]], 3)).verdict
    assert not v.stabilizable


def test_staircase_basis_splits_system():
    A = mat([[1, 1, 0], [0, 1, 0], [0, 0, 0]], 5)
    B = mat([[0], [1], [0]], 5)
    sc = staircase(A, B)
    r = sc.verdict.controllable_dim
    assert r == 2 and mat_det(sc.basis)
    At = mat_inv(sc.basis) @ A @ sc.basis
    assert At.block(r, 3, 0, r).is_zero()


def test_gain_examples():
    assert stabilizing_gain(A0, B0) == K0
    assert (A0 - B0 @ K0) ** 2 == FMatrix.zeros(2, 2, FieldSpec(3))
    assert stabilizing_gain(mat([[0, 1], [0, 0]], 3), mat([[0], [0]], 3)) == mat([[0, 0]], 3)
    assert stabilizing_gain(mat([[1]], 3), mat([[1]], 3)) == mat([[1]], 3)
    with pytest.raises(NotStabilizable):
        stabilizing_gain(FMatrix.identity(2, FieldSpec(3)), mat([[0], [0]], 3))


@pytest.mark.parametrize("p", [2, 3])
def test_gain_against_brute_force_n2(p):
    F = FieldSpec(p)
    for flat in product(range(p), repeat=6):
        A = mat([flat[0:2], flat[2:4]], p)
        B = mat([[flat[4]], [flat[5]]], p)
        gains = nilpotent_gains(A, B)
        if staircase(A, B).verdict.stabilizable:
            K = stabilizing_gain(A, B)
            assert K in gains
        else:
            assert gains == []


@given(st.integers(1, 4), st.integers(1, 2), st.sampled_from([2, 3, 5, 7]),
       st.randoms(use_true_random=False))
def test_gain_is_nilpotent_placing(n, m, p, rng):
    F = FieldSpec(p)
    A, B = random_system(n, m, F, rng)
    if p ** (m * n) > 10**5:
        m = 1
        B = B.block(0, n, 0, 1)
    if not staircase(A, B).verdict.stabilizable:
        with pytest.raises(NotStabilizable):
            stabilizing_gain(A, B)
        return
    K = stabilizing_gain(A, B)
    assert (A - B @ K) ** n == FMatrix.zeros(n, n, F)


def test_multi_input_search_limit():
    F = FieldSpec(7)
    A = FMatrix.identity(6, F)
    B = FMatrix.identity(6, F).block(0, 6, 0, 2)
    with pytest.raises(Unsupported):
        nilpotent_gains(A, B)


def test_closed_loop_examples():
    expected = mat([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 1, 0]], 3)
    assert closed_loop(E0, SYS0) == expected
    no_gain = AgentSystem(A0, B0, mat([[0, 0]], 3))
    assert closed_loop(E0, no_gain) == mat(
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], 3)
    assert closed_loop(mat([[1]], 3), SYS0) == A0
    with pytest.raises(MissingGain):
        closed_loop(E0, AgentSystem(A0, B0))


def test_spectrum_examples():
    assert verify_closed_loop_spectrum(E0, SYS0)
    assert not verify_closed_loop_spectrum(E0, AgentSystem(A0, B0, mat([[0, 0]], 3)))
    assert verify_closed_loop_spectrum(mat([[1]], 3), SYS0)


def test_scalar_examples():
    t = simulate_scalar(E0, [2, 1])
    assert [tuple(x[0] for x in s) for s in t.states[:3]] == [(2, 1), (1, 1), (1, 1)]
    assert t.sync_step == 1 and t.meta["alpha"] == 1
    t = simulate_scalar(E0, [2, 2])
    assert t.sync_step == 0 and t.meta["alpha"] == 2
    t = simulate_scalar(mat([[2, 2], [2, 2]], 3), [1, 2])
    assert t.states[1] == [(0,), (0,)] and t.sync_step == 1 and t.meta["alpha"] == 0


def test_lti_example():
    t = simulate_lti(E0, SYS0, [1, 2, 2, 1])
    assert t.states[1] == [(2, 2), (1, 2)]
    assert t.sync_step == 2 and t.states[2] == [(2, 1), (2, 1)]
    for k in range(2, t.kmax):
        assert t.states[k + 1][0] == A0.apply(t.states[k][0])
    # p^T = [0, 1], so α(k) is agent 2's state
    assert all(t.alpha_traj[k] == t.states[k][1] for k in range(t.kmax + 1))
    assert t.meta["alpha_recursion"]


def test_lti_trivial_inputs():
    t = simulate_lti(E0, SYS0, [1, 2, 1, 2])
    assert t.sync_step == 0
    assert t.states[1][0] == A0.apply((1, 2))
    t = simulate_lti(E0, SYS0, [0, 0, 0, 0])
    assert t.sync_step == 0 and all(x == (0, 0) for s in t.states for x in s)


def test_lti_errors():
    with pytest.raises(NotAdmissible):
        simulate_lti(FMatrix.identity(2, FieldSpec(3)), SYS0, [0] * 4)
    with pytest.raises(BadGain):
        simulate_lti(E0, AgentSystem(A0, B0, mat([[0, 0]], 3)), [0] * 4)


def test_scalar_is_lti_with_unit_agents():
    one = mat([[1]], 3)
    sys1 = AgentSystem(one, one, one)
    for E in (E0, mat([[2, 2], [2, 2]], 3), mat([[1, 0], [1, 0]], 3)):
        assert closed_loop(E, sys1) == E
        for x0 in all_vectors(2, 3):
            assert simulate_lti(E, sys1, x0).states == simulate_scalar(E, x0).states


@pytest.mark.parametrize("N,n,p", [(2, 2, 3), (3, 2, 2), (3, 3, 5), (4, 2, 7)])
def test_synchronization_properties(N, n, p):
    rng = random.Random(N * 100 + n * 10 + p)
    F = FieldSpec(p)
    graphs = [seed_admissible(N, F)]
    for s in range(3):
        T = gen_stabilizer(GenConfig(N, F, seed=s)).T
        graphs.append(similar_transform(graphs[0], T))
    done = 0
    while done < 4:
        A, B = random_system(n, 1, F, rng)
        if staircase(A, B).verdict.stabilizable and not is_nilpotent(A):
            done += 1
            sys_ = AgentSystem(A, B).with_gain()
            for E in graphs:
                assert check_admissible(E).admissible
                assert verify_closed_loop_spectrum(E, sys_)
                rep = check_admissible(E)
                for _ in range(5):
                    X0 = [rng.randrange(p) for _ in range(N * n)]
                    t = simulate_lti(E, sys_, X0)
                    assert t.sync_step is not None and t.sync_step <= N * n
                    assert t.meta["alpha_recursion"]
                    for k in range(t.kmax):
                        # conserved combination Σ p_i x_i
                        s = [sum(w * x[d] for w, x in zip(rep.left_eigvec, t.states[k])) % p
                             for d in range(n)]
                        s1 = [sum(w * x[d] for w, x in zip(rep.left_eigvec, t.states[k + 1])) % p
                              for d in range(n)]
                        assert tuple(s1) == A.apply(s)
                    for k in range(t.sync_step, t.kmax + 1):
                        assert all(x == t.alpha_traj[k] for x in t.states[k])


def test_trace_csv_layout():
    csv = simulate_scalar(E0, [2, 1], kmax=2).to_csv().splitlines()
    assert csv[0] == "k,agent,dim,value"
    assert csv[1:4] == ["0,0,0,2", "0,1,0,1", "0,alpha,0,1"]
    assert len(csv) == 1 + 3 * 3
