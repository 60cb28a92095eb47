"""Seeded bulk checks of the algebraic laws the whole toolkit leans on.

Each law runs over 1000 random planar configurations (random pointed
cones, random generator clouds, random positive scalars) at a 1e-10
tolerance.  Set equalities are checked both as generator-containment
equalities and through support functions on random dual directions.
"""

import numpy as np

from setopt.oracle import random_cone_2d
from setopt.uppersets import (UpperSet, equals, lattice_inf, oplus, scale,
                              support)

TOL = 1e-10
CASES = 1000


def random_upper_set(rng, cone, max_gens=5, empty_rate=0.0):
    if rng.random() < empty_rate:
        return UpperSet.empty(cone)
    k = int(rng.integers(1, max_gens + 1))
    return UpperSet(cone, rng.normal(0.0, 2.0, size=(k, 2)))


def random_dual_dirs(rng, cone, count=4):
    w = rng.uniform(0.05, 1.0, size=(count, cone.dual.shape[0]))
    dirs = w @ cone.dual
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def support_gap(a, b, dirs):
    worst = 0.0
    for z in dirs:
        sa, sb = support(a, z), support(b, z)
        if np.isinf(sa) and np.isinf(sb) and sa == sb:
            continue
        worst = max(worst, abs(sa - sb))
    return worst


def test_scaling_splits_over_positive_sums():
    # (s + t) A equals sA + tA for every convex upper set A
    rng = np.random.default_rng(101)
    for _ in range(CASES):
        cone = random_cone_2d(rng)
        a = random_upper_set(rng, cone)
        s, t = rng.uniform(0.1, 3.0, size=2)
        lhs = scale(s + t, a)
        rhs = oplus(scale(s, a), scale(t, a))
        assert equals(lhs, rhs, TOL)
        assert support_gap(lhs, rhs, random_dual_dirs(rng, cone)) <= TOL


def test_translation_distributes_over_infima():
    # w + inf(family) equals inf of the translated family
    rng = np.random.default_rng(202)
    for _ in range(CASES):
        cone = random_cone_2d(rng)
        fam = [random_upper_set(rng, cone, empty_rate=0.15)
               for _ in range(int(rng.integers(2, 6)))]
        w = UpperSet.from_point(cone, rng.normal(0.0, 2.0, size=2))
        lhs = oplus(w, lattice_inf(fam))
        rhs = lattice_inf([oplus(w, v) for v in fam])
        assert equals(lhs, rhs, TOL)
        assert support_gap(lhs, rhs, random_dual_dirs(rng, cone)) <= TOL


def test_support_adds_over_sums():
    # support(A + B) = support(A) + support(B) on the dual cone
    rng = np.random.default_rng(303)
    for _ in range(CASES):
        cone = random_cone_2d(rng)
        a = random_upper_set(rng, cone, empty_rate=0.1)
        b = random_upper_set(rng, cone, empty_rate=0.1)
        ab = oplus(a, b)
        for z in random_dual_dirs(rng, cone):
            lhs = support(ab, z)
            rhs = support(a, z) + support(b, z)
            if np.isinf(lhs) or np.isinf(rhs):
                assert lhs == rhs
            else:
                assert abs(lhs - rhs) <= TOL * max(1.0, abs(rhs))


def test_support_of_infimum_is_minimum_of_supports():
    rng = np.random.default_rng(404)
    for _ in range(CASES):
        cone = random_cone_2d(rng)
        fam = [random_upper_set(rng, cone, empty_rate=0.1)
               for _ in range(int(rng.integers(2, 6)))]
        inf_v = lattice_inf(fam)
        for z in random_dual_dirs(rng, cone):
            lhs = support(inf_v, z)
            rhs = min(support(v, z) for v in fam)
            if np.isinf(lhs) or np.isinf(rhs):
                assert lhs == rhs
            else:
                assert abs(lhs - rhs) <= TOL * max(1.0, abs(rhs))
