#!/usr/bin/env python3
"""Walk through the two-agent GF(3) example end to end and print every intermediate."""

import random

from ffconsensus import FieldSpec, mat
from ffconsensus.admissibility import check_admissible, lemma_q, seed_admissible, similar_transform
from ffconsensus.dynamics import AgentSystem, simulate_lti, stabilizing_gain
from ffconsensus.generators import (GenConfig, cardinalities, coset_representatives,
                                    enumerate_sets, gen_sar, gen_tf)

F = FieldSpec(3)
sets = enumerate_sets(2, F)
print(f"|M^RS| = {len(sets.m_rs)}, |G^RS| = {len(sets.g_rs)}, "
      f"non-permutation = {len(sets.g_rs_nonperm)}")
print("delta =", cardinalities(2, F).delta)

rng = random.Random(0)
draws = [gen_sar(GenConfig(2, F), rng) for _ in range(500)]
print("SAR hits:", sorted({str(T) for T in draws}))
print("TF upper:", gen_tf(GenConfig(2, F, variant="tf_upper")),
      " TF lower:", gen_tf(GenConfig(2, F, variant="tf_lower")))
reps = coset_representatives(sets.g_rs_nonperm)
print("coset representatives:", [str(T) for T in reps])

E = seed_admissible(2, F)
print(f"seed E = Q J Q^-1 with Q = {lemma_q(2, F)}: {E}")
for T in sets.g_rs_nonperm:
    Et = similar_transform(E, T)
    print(f"  T = {T} -> {Et}  admissible={check_admissible(Et).admissible}")

A, B = mat([[0, 1], [1, 0]], 3), mat([[0], [1]], 3)
sys_ = AgentSystem(A, B, stabilizing_gain(A, B))
print("K =", sys_.K)
trace = simulate_lti(E, sys_, [1, 2, 2, 1])
for k, agents in enumerate(trace.states):
    print(f"  k={k}: {agents}  alpha={trace.alpha_traj[k]}")
print("sync_step =", trace.sync_step)
