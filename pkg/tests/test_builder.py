import itertools
import random

import pytest

from nilkit import oracle
from nilkit.builder import (ClassBoundError, QuotientPresentation, build_nilpotent_presentation,
                            evaluate_with, parse_finite_presentation, quotient_presentation)
from nilkit.families import abelian, heisenberg
from nilkit.magnus import FreeNilpotent, free_nilpotent, lyndon_words
from nilkit.subgroups import full_form, series_term, trivial_subgroup
from nilkit.words import ParseError

H3 = heisenberg()


def build(text, c=None):
    F = parse_finite_presentation(text)
    return F, build_nilpotent_presentation(F, c)


def round_trips(F, conv):
    Q = conv.target
    return Q.check_consistency() and \
        all(not any(conv.source_to_target(w)) for w in F.relators) and \
        all(evaluate_with(Q, conv.phi[k], conv.embed) == Q.generator(k) for k in range(Q.m))


class TestBuild:
    def test_cyclic(self):
        F, conv = build("group x | x^3", 1)
        assert conv.target.orders == (3,) and round_trips(F, conv)

    def test_free_class_two(self):
        F, conv = build("group x y | [[x,y],x], [[x,y],y]", 2)
        assert conv.target == H3
        assert conv.embed == [(1, 0, 0), (0, 1, 0)]
        assert round_trips(F, conv)

    def test_klein(self):
        F, conv = build("group x y | x^2, y^2, [x,y]")
        assert conv.target.orders == (2, 2) and round_trips(F, conv)

    def test_invariant_factors(self):
        F, conv = build("group x y | x^4, y^6, [x,y]")
        assert sorted(conv.target.orders) == [2, 12] and conv.target.order() == 24
        assert round_trips(F, conv)

    def test_free_group_is_not_nilpotent(self):
        F = parse_finite_presentation("group x y |")
        with pytest.raises(ClassBoundError):
            build_nilpotent_presentation(F, 2)
        with pytest.raises(ClassBoundError):
            build_nilpotent_presentation(F)

    def test_class_detection(self):
        F, conv = build("group x y | x^8, y^2, (x y)^2")
        assert conv.target.c == 3 and conv.target.order() == 16 and round_trips(F, conv)

    @pytest.mark.parametrize("text,order", [
        ("group x y | x^4, y^2, (x y)^2", 8),
        ("group x y | x^4, x^2 y^-2, y^-1 x y x", 8),
        ("group x y | x^3, y^3, [[x,y],x], [[x,y],y]", 27),
        ("group x y z | x^2, y^2, z^2, [x,y], [x,z], [y,z]", 8),
    ])
    def test_finite_orders_match_enumeration(self, text, order):
        F, conv = build(text)
        T = oracle.enumerate_group(conv.target)
        assert T.order == order and round_trips(F, conv)

    def test_levels_sorted(self):
        F, conv = build("group x y | [[x,y],x], [[x,y],y]^2, [[[x,y],y],y]")
        assert list(conv.target.levels) == sorted(conv.target.levels)
        assert round_trips(F, conv)

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            parse_finite_presentation("grp x | x")
        with pytest.raises(ParseError):
            parse_finite_presentation("group x x | x")
        with pytest.raises(ParseError):
            parse_finite_presentation("group x | y^2")


class TestQuotient:
    def test_center(self):
        q = QuotientPresentation(H3, full_form(H3, [(0, 0, 1)]))
        assert q.target.orders == (None, None) and q.target.is_abelian()

    def test_trivial(self):
        assert quotient_presentation(H3, trivial_subgroup(H3)).target == H3

    def test_cyclic(self):
        Z = abelian([None])
        q = quotient_presentation(Z, full_form(Z, [(3,)]))
        assert q.target.orders == (3,)

    def test_not_normal(self):
        with pytest.raises(ValueError):
            QuotientPresentation(H3, full_form(H3, [(1, 0, 0)]))

    def test_homomorphism_property(self):
        rng = random.Random(0)
        N = full_form(H3, [(2, 0, 0), (0, 2, 0), (0, 0, 2)])
        q = QuotientPresentation(H3, N)
        for _ in range(100):
            x = tuple(rng.randint(-20, 20) for _ in range(3))
            y = tuple(rng.randint(-20, 20) for _ in range(3))
            assert q.project(H3.multiply(x, y)) == q.target.multiply(q.project(x), q.project(y))
            assert q.project(q.lift(q.project(x))) == q.project(x)

    def test_h3_mod_center_by_enumeration(self):
        P = heisenberg(5)
        q = QuotientPresentation(P, series_term(P, 2))
        assert oracle.enumerate_group(q.target).order == 25


class TestMagnus:
    def test_lyndon_counts(self):
        # Witt's formula for rank 2: 2, 1, 2, 3, 6
        counts = [len(lyndon_words(2, n)) for n in range(1, 6)]
        assert counts == [2, 1, 2, 3, 6]

    def test_free_nilpotent_presentation(self):
        P = free_nilpotent(2, 2).presentation()
        assert P == H3
        assert free_nilpotent(3, 3).presentation().check_consistency()

    def test_truncated_group_law(self):
        F = FreeNilpotent(2, 3)
        P = F.presentation()
        rng = random.Random(1)
        for _ in range(30):
            x = tuple(rng.randint(-4, 4) for _ in range(P.m))
            y = tuple(rng.randint(-4, 4) for _ in range(P.m))
            assert F.coordinates(F.alg.mul(F.element(x), F.element(y))) == P.multiply(x, y)
