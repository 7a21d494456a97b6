import random

import pytest

from nilkit import oracle
from nilkit.conjugacy import (RecursionStats, conjugate_commuting_tuples, conjugate_tuples, normalizer,
                              subgroup_conjugacy)
from nilkit.families import abelian, free_nilpotent_mod, heisenberg, random_class2, random_element
from nilkit.homs import centralizer
from nilkit.magnus import free_nilpotent
from nilkit.subgroups import (conjugate_subgroup, full_form, max_series_level, membership,
                              trivial_subgroup, whole_group)

H3 = heisenberg()
A1, A2, A3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def same_subgroup(P, A, B):
    return all(membership(P, B, r) is not None for r in A.rows) and \
        all(membership(P, A, r) is not None for r in B.rows)


class TestCommutingTuples:
    def test_equal_tuples(self):
        B = [(1, 0, 0), (3, 0, 5)]
        res = conjugate_commuting_tuples(H3, B, B)
        assert res.witness == H3.identity
        assert same_subgroup(H3, res.stabilizer, centralizer(H3, B))

    def test_singleton(self):
        res = conjugate_commuting_tuples(H3, [A1], [(1, 0, 3)])
        assert res and H3.conjugate(A1, res.witness) == (1, 0, 3)
        # a2^-1 a1 a2 = a1 a3 here, so the witness carries a2^3 up to centralizer elements
        assert res.witness[1] == 3

    def test_abelian_inequality(self):
        Z2 = abelian([None, None])
        assert not conjugate_commuting_tuples(Z2, [(1, 0)], [(0, 1)])

    def test_rejects_non_commuting(self):
        with pytest.raises(ValueError):
            conjugate_commuting_tuples(H3, [A1, A2], [A1, A2])

    def test_ambient(self):
        amb = full_form(H3, [A1, (0, 2, 0), A3])
        assert not conjugate_commuting_tuples(H3, [A1], [(1, 0, 1)], amb)
        res = conjugate_commuting_tuples(H3, [A1], [(1, 0, 2)], amb)
        assert res and membership(H3, amb, res.witness) is not None

    def test_against_oracle(self):
        P = heisenberg(5)
        T = oracle.enumerate_group(P)
        rng = random.Random(11)
        for _ in range(30):
            a = random_element(P, rng)
            A = [a, P.power(a, 2)]
            if rng.random() < 0.5:
                g = random_element(P, rng)
                B = [P.conjugate(x, g) for x in A]
            else:
                B = [P.multiply(a, (0, 0, rng.randrange(5))), P.power(a, 2)]
            res = conjugate_commuting_tuples(P, A, B)
            brute = oracle.brute_conjugacy(T, A, B)
            assert bool(res) == bool(brute)
            if res:
                assert res.witness in brute
                assert oracle.brute_closure(T, res.stabilizer.rows) == oracle.brute_centralizer(T, B)


class TestSubgroupConjugacy:
    def test_self(self):
        K = full_form(H3, [A1])
        res = subgroup_conjugacy(H3, K, K)
        assert res.witness == H3.identity
        assert same_subgroup(H3, res.stabilizer, full_form(H3, [A1, A3]))

    def test_shifted_generator(self):
        H, K = full_form(H3, [A1]), full_form(H3, [(1, 0, 1)])
        res = subgroup_conjugacy(H3, H, K)
        assert res and conjugate_subgroup(H3, H, res.witness) == K

    def test_abelianization_obstruction(self):
        assert not subgroup_conjugacy(H3, full_form(H3, [A1]), full_form(H3, [A2]))

    def test_trivial(self):
        E = trivial_subgroup(H3)
        res = subgroup_conjugacy(H3, E, E)
        assert res.witness == H3.identity and res.stabilizer == whole_group(H3)

    def test_level_condition(self):
        rng = random.Random(5)
        P = free_nilpotent(2, 3).presentation()
        for _ in range(40):
            H = full_form(P, [random_element(P, rng, 2) for _ in range(rng.randint(1, 2))], track=False)
            K = full_form(P, [random_element(P, rng, 2) for _ in range(rng.randint(1, 2))], track=False)
            if max_series_level(P, H) != max_series_level(P, K):
                assert not subgroup_conjugacy(P, H, K)

    def test_depth_bounded_by_class(self):
        rng = random.Random(6)
        P = free_nilpotent(2, 3).presentation()
        for _ in range(20):
            H = full_form(P, [random_element(P, rng, 2)], track=False)
            stats = RecursionStats()
            g = random_element(P, rng, 3)
            assert subgroup_conjugacy(P, H, conjugate_subgroup(P, H, g), stats=stats)
            assert stats.max_depth <= P.c

    @pytest.mark.parametrize("seed", range(3))
    def test_invariance_under_conjugation(self, seed):
        rng = random.Random(100 + seed)
        P = [H3, free_nilpotent(2, 3).presentation(), random_class2(rng)][seed]
        for _ in range(100):
            H = full_form(P, [random_element(P, rng, 3) for _ in range(rng.randint(1, 2))], track=False)
            g = random_element(P, rng, 4)
            K = conjugate_subgroup(P, H, g)
            res = subgroup_conjugacy(P, H, K)
            assert res and conjugate_subgroup(P, H, res.witness) == K

    def test_against_oracle(self):
        P = free_nilpotent_mod(2, 3, 3)
        T = oracle.enumerate_group(P)
        rng = random.Random(8)
        for _ in range(15):
            H = full_form(P, [random_element(P, rng)], track=False)
            K = conjugate_subgroup(P, H, random_element(P, rng)) if rng.random() < 0.5 else \
                full_form(P, [random_element(P, rng)], track=False)
            res = subgroup_conjugacy(P, H, K)
            Hs, Ks = oracle.brute_closure(T, H.rows), oracle.brute_closure(T, K.rows)
            brute = oracle.brute_subgroup_conjugacy(T, Hs, Ks)
            assert bool(res) == bool(brute)
            if res:
                assert res.witness in brute
                assert oracle.brute_closure(T, res.stabilizer.rows) == oracle.brute_normalizer(T, Ks)


class TestNormalizer:
    def test_examples(self):
        assert normalizer(H3, trivial_subgroup(H3)) == whole_group(H3)
        assert normalizer(H3, full_form(H3, [A3])) == whole_group(H3)
        assert same_subgroup(H3, normalizer(H3, full_form(H3, [A1])), full_form(H3, [A1, A3]))

    def test_h3_mod_5(self):
        P = heisenberg(5)
        T = oracle.enumerate_group(P)
        N = normalizer(P, full_form(P, [A1]))
        assert oracle.brute_closure(T, N.rows) == {(x, 0, z) for x in range(5) for z in range(5)}


class TestTuples:
    def test_single(self):
        res = conjugate_tuples(H3, [A1], [(1, 0, 4)])
        assert res and H3.conjugate(A1, res.witness) == (1, 0, 4)
        assert same_subgroup(H3, res.stabilizer, centralizer(H3, [(1, 0, 4)]))

    def test_equal(self):
        A = [A1, A2]
        res = conjugate_tuples(H3, A, A)
        assert res and all(H3.conjugate(a, res.witness) == a for a in A)
        assert same_subgroup(H3, res.stabilizer, full_form(H3, [A3]))

    def test_pair(self):
        res = conjugate_tuples(H3, [A1, A2], [(1, 0, 1), A2])
        assert res
        assert H3.conjugate(A1, res.witness) == (1, 0, 1) and H3.conjugate(A2, res.witness) == A2

    def test_against_oracle(self):
        P = heisenberg(5)
        T = oracle.enumerate_group(P)
        rng = random.Random(9)
        for _ in range(30):
            A = [random_element(P, rng) for _ in range(2)]
            if rng.random() < 0.5:
                g = random_element(P, rng)
                B = [P.conjugate(a, g) for a in A]
            else:
                B = [P.conjugate(a, random_element(P, rng)) for a in A]
            res = conjugate_tuples(P, A, B)
            brute = oracle.brute_conjugacy(T, A, B)
            assert bool(res) == bool(brute)
            if res:
                assert res.witness in brute
                assert oracle.brute_closure(T, res.stabilizer.rows) == oracle.brute_centralizer(T, B)
