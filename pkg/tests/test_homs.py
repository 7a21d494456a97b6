import random

import pytest

from nilkit import oracle
from nilkit.builder import QuotientPresentation
from nilkit.families import abelian, heisenberg, random_element
from nilkit.homs import Homomorphism, centralizer, conjugacy_element, direct_product, kernel, preimage
from nilkit.subgroups import full_form, membership, subgroup_order, whole_group

H3 = heisenberg()
E = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def same_subgroup(P, A, B):
    return all(membership(P, B, r) is not None for r in A.rows) and \
        all(membership(P, A, r) is not None for r in B.rows)


class TestKernel:
    def test_sum_map(self):
        Z2 = abelian([None, None])
        phi = Homomorphism(Z2, [(1, 0), (0, 1)], abelian([None]), [(1,), (1,)])
        assert same_subgroup(Z2, kernel(phi), full_form(Z2, [(1, -1)]))

    def test_identity(self):
        assert kernel(Homomorphism(H3, E, H3, E)).rows == ()

    def test_h3_onto_klein(self):
        V = abelian([2, 2])
        phi = Homomorphism(H3, E, V, [(1, 0), (0, 1), (0, 0)])
        assert same_subgroup(H3, kernel(phi), full_form(H3, [(2, 0, 0), (0, 2, 0), (0, 0, 1)]))
        for r in kernel(phi).rows:
            assert phi(r) == (0, 0)

    def test_ill_defined(self):
        # a1, a2 commute in Z^2, so sending them to non-commuting elements is no homomorphism
        Z2 = abelian([None, None])
        with pytest.raises(ValueError):
            Homomorphism(Z2, [(1, 0), (0, 1)], H3, [E[0], E[1]])

    def test_kernel_complete_on_finite_domain(self):
        P = heisenberg(3)
        V = abelian([3])
        phi = Homomorphism(P, E, V, [(1,), (2,), (0,)])
        T = oracle.enumerate_group(P)
        brute = {g for g in T if phi(g) == (0,)}
        assert oracle.brute_closure(T, kernel(phi).rows) == brute


class TestPreimage:
    def test_doubling(self):
        Z = abelian([None])
        phi = Homomorphism(Z, [(1,)], Z, [(2,)])
        assert preimage(phi, (6,)) == (3,)
        assert preimage(phi, (5,)) is None

    def test_identity(self):
        phi = Homomorphism(H3, E, H3, E)
        assert preimage(phi, (4, -2, 9)) == (4, -2, 9)

    def test_quotient_map(self):
        q = QuotientPresentation(H3, full_form(H3, [E[2]]))
        phi = Homomorphism(H3, E, q.target, [q.project(e) for e in E])
        k = preimage(phi, (1, 1))
        assert phi(k) == (1, 1) and k[:2] == (1, 1)

    def test_subgroup_domain(self):
        gens = [(2, 0, 0), (0, 3, 0)]
        phi = Homomorphism(H3, gens, H3, gens)
        assert preimage(phi, (1, 0, 0)) is None
        assert preimage(phi, (2, 3, 0)) == (2, 3, 0)

    def test_direct_product_relations(self):
        D = direct_product(H3, abelian([2]))
        assert D.m == 4 and D.check_consistency()
        assert D.multiply((0, 1, 0, 1), (1, 0, 0, 1)) == (1, 1, -1, 0)


class TestCentralizer:
    def test_central(self):
        assert centralizer(H3, [E[2]]) == whole_group(H3)

    def test_a1(self):
        assert same_subgroup(H3, centralizer(H3, [E[0]]), full_form(H3, [E[0], E[2]]))

    def test_abelian(self):
        Z3 = abelian([None, 4, None])
        assert centralizer(Z3, [(1, 2, 3), (0, 1, 0)]) == whole_group(Z3)

    def test_against_oracle(self):
        P = heisenberg(5)
        T = oracle.enumerate_group(P)
        rng = random.Random(3)
        for _ in range(25):
            gens = [random_element(P, rng) for _ in range(rng.randint(1, 2))]
            C = centralizer(P, gens)
            assert oracle.brute_closure(T, C.rows) == oracle.brute_centralizer(T, gens)

    def test_inside_ambient(self):
        A = full_form(H3, [(2, 0, 0), (0, 1, 0)])
        C = centralizer(H3, [(2, 0, 0)], A)
        # A meets the centre in <a3^2> only
        assert same_subgroup(H3, C, full_form(H3, [(2, 0, 0), (0, 0, 2)]))


class TestConjugacyElement:
    def test_equal(self):
        assert conjugacy_element(H3, (3, 1, 4), (3, 1, 4)) == H3.identity

    def test_shift(self):
        x = conjugacy_element(H3, E[0], (1, 0, 7))
        assert x is not None and H3.conjugate(E[0], x) == (1, 0, 7)

    def test_not_conjugate(self):
        assert conjugacy_element(H3, E[0], E[2]) is None
        assert conjugacy_element(H3, (2, 0, 0), (2, 0, 1)) is None

    def test_against_oracle(self):
        P = heisenberg(5)
        T = oracle.enumerate_group(P)
        rng = random.Random(4)
        for _ in range(40):
            g = random_element(P, rng)
            h = P.conjugate(g, random_element(P, rng)) if rng.random() < 0.5 else random_element(P, rng)
            x = conjugacy_element(P, g, h)
            brute = oracle.brute_conjugacy(T, [g], [h])
            assert (x is None) == (not brute)
            if x is not None:
                assert x in brute
