import random

import pytest

from nilkit import oracle
from nilkit.families import abelian, heisenberg, random_class2, random_element
from nilkit.presentation import NilpotentPresentation
from nilkit.subgroups import full_form, membership, subgroup_order, trivial_subgroup, whole_group
from nilkit.torsion import IsolatorStats, isolator, power_witness, torsion_order, torsion_subgroup

H3 = heisenberg()
# H3 whose centre is cut down to Z/2
H3_Z2 = NilpotentPresentation([None, None, 2], {(0, 1): {2: -1}}, {2: {}})


class TestTorsion:
    def test_split_abelian(self):
        T = torsion_subgroup(abelian([2, None]))
        assert T.subgroup.rows == ((1, 0),) and T.order == 2

    def test_torsion_free(self):
        T = torsion_subgroup(H3)
        assert T.subgroup == trivial_subgroup(H3) and T.order == 1

    def test_central_z2(self):
        T = torsion_subgroup(H3_Z2)
        assert T.subgroup.rows == ((0, 0, 1),) and T.order == 2

    def test_orders(self):
        assert torsion_order(abelian([2, 4])) == 8
        assert torsion_order(H3) == 1
        assert torsion_order(H3_Z2) == 2

    def test_finite_group_is_all_torsion(self):
        P = heisenberg(3)
        assert torsion_subgroup(P).subgroup == whole_group(P) and torsion_order(P) == 27

    def test_power_tails(self):
        # a1^2 = a2^3 gives Z^2/<(2,-3)>, which is infinite cyclic
        assert torsion_order(NilpotentPresentation([2, None], {}, {0: {1: 3}})) == 1
        # a1^2 = a2^2 leaves a1 a2^-1 of order 2
        P = NilpotentPresentation([2, None], {}, {0: {1: 2}})
        T = torsion_subgroup(P)
        assert T.order == 2 and membership(P, T.subgroup, (1, -1)) is not None

    @pytest.mark.parametrize("seed", range(6))
    def test_random_class2(self, seed):
        rng = random.Random(seed)
        P = random_class2(rng)
        T = torsion_subgroup(P)
        # soundness: every row has finite order dividing |T|
        for r in T.subgroup.rows:
            assert not any(P.power(r, T.order))
        assert subgroup_order(P, T.subgroup) == T.order
        # normality
        for i in range(P.m):
            for r in T.subgroup.rows:
                assert membership(P, T.subgroup, P.conjugate(r, P.generator(i))) is not None
        # completeness within a box
        box = oracle.box_torsion(P, [2] * P.m)
        assert all(membership(P, T.subgroup, g) is not None for g in box)
        # G/T has no torsion: powers of random elements outside T stay outside
        for _ in range(100):
            g = random_element(P, rng, 4)
            if membership(P, T.subgroup, g) is not None:
                continue
            assert all(membership(P, T.subgroup, P.power(g, n)) is None for n in range(2, 13))


class TestIsolator:
    def test_finite_index_in_z(self):
        Z = abelian([None])
        assert isolator(Z, full_form(Z, [(4,)])) == whole_group(Z)

    def test_whole_group(self):
        assert isolator(H3, whole_group(H3)) == whole_group(H3)

    def test_squares_in_h3(self):
        H = full_form(H3, [(2, 0, 0), (0, 2, 0)])
        assert isolator(H3, H) == whole_group(H3)
        assert [power_witness(H3, H, g, 10) for g in ((1, 0, 0), (0, 1, 0), (0, 0, 1))] == [2, 2, 4]

    def test_cyclic_in_h3(self):
        I = isolator(H3, full_form(H3, [(3, 0, 0)]))
        assert I == full_form(H3, [(1, 0, 0)])

    def test_trivial_subgroup_gives_torsion(self):
        I = isolator(H3_Z2, trivial_subgroup(H3_Z2))
        assert I == torsion_subgroup(H3_Z2).subgroup

    def test_tower_reaches_group(self):
        stats = IsolatorStats()
        isolator(H3, full_form(H3, [(1, 0, 0)]), stats)
        assert stats.tower[-1] == whole_group(H3) and len(stats.tower) - 1 <= H3.c

    @pytest.mark.parametrize("seed", range(4))
    def test_properties(self, seed):
        rng = random.Random(40 + seed)
        P = [H3, H3_Z2, random_class2(rng), random_class2(rng)][seed]
        H = full_form(P, [P.power(random_element(P, rng, 2), rng.randint(1, 3)) for _ in range(2)], track=False)
        I = isolator(P, H)
        assert all(membership(P, I, r) is not None for r in H.rows)
        bound = 1
        for o in P.orders:
            bound *= o or 1
        for r in I.rows:
            assert power_witness(P, H, r, 64 * bound) is not None
        for _ in range(60):
            g = random_element(P, rng, 3)
            if any(membership(P, I, P.power(g, n)) is not None for n in (2, 3)):
                assert membership(P, I, g) is not None

    def test_against_oracle(self):
        P = heisenberg(3)
        T = oracle.enumerate_group(P)
        rng = random.Random(50)
        for _ in range(10):
            H = full_form(P, [random_element(P, rng)], track=False)
            assert oracle.brute_closure(T, isolator(P, H).rows) == oracle.brute_isolator(T, oracle.brute_closure(T, H.rows))
