import random

import pytest
from hypothesis import given, settings, strategies as st

from nilkit.families import abelian, heisenberg, random_element
from nilkit.presentation import (NilpotentPresentation, check_consistency, collect, evaluate_compressed,
                                 format_presentation, inverse, multiply, parse_presentation, power)
from nilkit.words import (BinExpWord, Coordinates, ParseError, StraightLineProgram, Word, parse_binexp,
                          parse_word)

H3 = heisenberg()
Z2Z = abelian([2, None])
Z2 = abelian([2])

coord = st.integers(-10 ** 6, 10 ** 6)
h3_elt = st.tuples(coord, coord, coord)
z2z_elt = st.tuples(st.integers(0, 1), coord)


class TestExamples:
    def test_collect(self):
        assert collect(H3, parse_word("a2 a1", 3)) == (1, 1, -1)
        assert collect(H3, Word(())) == (0, 0, 0)
        assert collect(Z2, parse_word("a1^5", 1)) == (1,)

    def test_multiply(self):
        assert multiply(H3, (1, 2, 0), (3, 0, 0)) == (4, 2, -6)
        assert multiply(H3, (5, -3, 2), (0, 0, 0)) == (5, -3, 2)
        assert multiply(Z2Z, (1, 5), (1, -2)) == (0, 3)

    def test_product_rule(self):
        rng = random.Random(0)
        for _ in range(200):
            x1, y1, z1, x2, y2, z2 = (rng.randint(-50, 50) for _ in range(6))
            assert H3.multiply((x1, y1, z1), (x2, y2, z2)) == (x1 + x2, y1 + y2, z1 + z2 - x2 * y1)

    def test_inverse(self):
        assert inverse(H3, (1, 1, 0)) == (-1, -1, -1)
        assert inverse(H3, (0, 0, 0)) == (0, 0, 0)
        assert inverse(Z2, (1,)) == (1,)

    def test_power(self):
        assert power(H3, (1, 1, 0), 2) == (2, 2, -1)
        assert power(H3, (3, -4, 7), 1) == (3, -4, 7)
        assert power(Z2, (1,), 2 ** 40) == (0,)

    def test_evaluate(self):
        Z = abelian([None])
        k = 50
        slp = StraightLineProgram((("gen", 1, 1),) + tuple((i, i) for i in range(k)))
        assert evaluate_compressed(Z, slp) == (2 ** k,)
        assert evaluate_compressed(H3, Coordinates((0, 0, 5))) == (0, 0, 5)
        assert evaluate_compressed(H3, parse_binexp("(a1 a2)^8", 3)) == (8, 8, -28)

    def test_coordinates_canonicalised(self):
        assert evaluate_compressed(Z2Z, Coordinates((3, 4))) == (1, 4)

    def test_huge_binexp(self):
        n = 10 ** 30
        assert H3.evaluate(parse_binexp(f"(a1 a2)^{n}", 3)) == (n, n, -n * (n - 1) // 2)


class TestConsistency:
    def test_h3(self):
        assert check_consistency(H3)

    def test_power_into_next(self):
        P = NilpotentPresentation([2, 2], {}, {0: {1: 1}, 1: {}})
        assert check_consistency(P)
        assert P.power((1, 0), 2) == (0, 1)
        assert P.order() == 4

    def test_missing_power_relation(self):
        with pytest.raises(ValueError):
            NilpotentPresentation([3], {}, {})

    def test_inconsistent(self):
        # a1 of order 2 acting on a2 with an infinite central tail
        P = NilpotentPresentation([2, None, None], {(0, 1): {2: 1}}, {0: {}})
        assert not check_consistency(P)

    def test_tail_support_enforced(self):
        with pytest.raises(ValueError):
            NilpotentPresentation([None, None], {(0, 1): {0: 1}})

    def test_unit_order_retained(self):
        P = NilpotentPresentation([1, None], {}, {0: {}})
        assert P.m == 2 and P.multiply((0, 3), P.generator(0)) == (0, 3)


class TestAxioms:
    @settings(max_examples=300)
    @given(h3_elt, h3_elt, h3_elt)
    def test_h3(self, x, y, z):
        P = H3
        assert P.multiply(P.multiply(x, y), z) == P.multiply(x, P.multiply(y, z))
        assert P.multiply(x, P.inverse(x)) == P.identity == P.multiply(P.inverse(x), x)

    @settings(max_examples=300)
    @given(z2z_elt, z2z_elt, z2z_elt)
    def test_z2z(self, x, y, z):
        P = Z2Z
        xy = P.multiply(x, y)
        assert P.is_canonical(xy)
        assert P.multiply(xy, z) == P.multiply(x, P.multiply(y, z))

    def test_power_matches_repeated_multiply(self):
        rng = random.Random(1)
        for P in (H3, Z2Z, heisenberg(7)):
            u = random_element(P, rng, 20)
            x = P.identity
            for n in range(65):
                assert P.power(u, n) == x
                assert P.power(u, -n) == P.inverse(x)
                x = P.multiply(x, u)


def _relators(P):
    """Every defining relator as a letter list."""
    out = []
    for i in range(P.m):
        for j in range(i + 1, P.m):
            tail = P.conjugate_tail(i, j)
            out.append([(j + 1, 1), (i + 1, 1)] +
                       [(k + 1, -e) for k, e in reversed(list(enumerate(tail))) if e] +
                       [(j + 1, -1), (i + 1, -1)])
        if P.orders[i] is not None:
            tail = P.power_tail(i)
            out.append([(i + 1, P.orders[i])] + [(k + 1, -e) for k, e in reversed(list(enumerate(tail))) if e])
    return out


def test_relator_insertion():
    rng = random.Random(2)
    P = NilpotentPresentation([3, None, 3, None], {(0, 1): {2: 1}}, {0: {3: 1}, 2: {}})
    assert P.check_consistency()
    for Q in (H3, Z2Z, P):
        rels = _relators(Q)
        for _ in range(200):
            w = [(rng.randint(1, Q.m), rng.choice((-2, -1, 1, 2))) for _ in range(rng.randint(0, 12))]
            k = rng.randint(0, len(w))
            r = rng.choice(rels)
            assert Q.collect(Word(w)) == Q.collect(Word(w[:k] + r + w[k:]))


def test_polynomial_coordinate_growth():
    rng = random.Random(3)

    def max_coord(L):
        best = 0
        for _ in range(5):
            w = Word((rng.randint(1, 3), rng.choice((-1, 1))) for _ in range(L))
            best = max(best, max(abs(x) for x in H3.collect(w)))
        return best

    C = max(max_coord(64), 1) / 64 ** 2
    for L in (256, 1024, 4096):
        assert max_coord(L) <= 4 * C * L ** 2


def test_canonical_range_everywhere():
    rng = random.Random(4)
    P = heisenberg(6)
    for _ in range(500):
        x, y = random_element(P, rng), random_element(P, rng)
        for v in (P.multiply(x, y), P.inverse(x), P.power(x, rng.randint(-100, 100))):
            assert all(0 <= a < 6 for a in v)


class TestTextFormat:
    def test_round_trip(self):
        for P in (H3, Z2Z, heisenberg(5), NilpotentPresentation([2, 2], {}, {0: {1: 1}, 1: {}})):
            assert parse_presentation(format_presentation(P)) == P
            assert parse_presentation(format_presentation(P, with_inverse=False)) == P

    def test_spec_lines(self):
        text = ("nilpotent m=3 c=2\na1 order=inf level=1\na2 order=inf level=1\n"
                "a3 order=2 level=2\na2 a1 = a1 a2 a3^-1\na3^2 = 1\n")
        P = parse_presentation(text)
        assert P.orders == (None, None, 2) and P.collect(parse_word("a2 a1", 3)) == (1, 1, 1)

    @pytest.mark.parametrize("text", [
        "",
        "nilpotent m=1\n",
        "nilpotent m=2 c=1\na1 order=inf level=1\n",
        "nilpotent m=2 c=1\na1 order=inf level=1\na2 order=inf level=1\na1 a2 = a2 a1\n",
        "nilpotent m=1 c=1\na1 order=3 level=1\n",
        "nilpotent m=1 c=1\na1 order=3 level=1\na1^2 = 1\n",
        "nilpotent m=2 c=2\na1 order=inf level=1\na2 order=inf level=2\na2^-1 a1 = a1 a2^-1 a2\n",
    ])
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_presentation(text)
