import random

import pytest
from hypothesis import given, settings, strategies as st

from nilkit.words import (BinExpWord, ExpansionLimitError, ParseError, StraightLineProgram, Word,
                          expand_slp, parse_binexp, parse_slp, parse_word, slp_from_word, slp_length,
                          slp_size, slp_to_text)


def doubling(n):
    return StraightLineProgram((("gen", 1, 1),) + tuple((i, i) for i in range(n - 1)))


class TestParseWord:
    def test_simple(self):
        assert parse_word("a1 a2^-3", 3).letters == ((1, 1), (2, -3))

    def test_zero_exponent_elided(self):
        assert parse_word("a1^0", 3).letters == ()

    def test_parenthesised_power(self):
        w = parse_word("(a1 a2)^4", 2)
        assert len(w) == 8
        assert w.letters[:2] == ((1, 1), (2, 1))

    def test_nested_form_is_kept_in_binexp(self):
        b = parse_binexp("(a1 a2)^4", 2)
        assert len(b.factors) == 1 and b.factors[0][1] == 4

    def test_adjacent_merge(self):
        assert parse_word("a1 a1^2 a1^-3 a2", 2).letters == ((2, 1),)

    def test_big_exponent(self):
        assert parse_word("a1^123456789012345678901234567890", 1).letters[0][1] == 123456789012345678901234567890

    def test_commutator(self):
        assert parse_word("[a1,a2]", 2).letters == ((1, -1), (2, -1), (1, 1), (2, 1))

    def test_names(self):
        assert parse_word("x y^2", 2, names=["x", "y"]).letters == ((1, 1), (2, 2))

    def test_identity(self):
        assert parse_word("1", 2).letters == () and parse_word("", 2).letters == ()

    @pytest.mark.parametrize("text", ["a4", "a0", "b1", "a1^", "(a1", "a1)", "a1 ^ x", "[a1 a2]"])
    def test_errors_carry_position(self, text):
        with pytest.raises(ParseError) as e:
            parse_word(text, 3)
        assert isinstance(e.value.pos, int)

    @settings(max_examples=300)
    @given(st.text(alphabet="a0123456789^-()[], xy", max_size=25))
    def test_total_on_fuzz(self, text):
        try:
            parse_word(text, 3, limit=10_000)
        except (ParseError, ExpansionLimitError):
            pass


class TestSLP:
    def test_doubling_expansion(self):
        p = StraightLineProgram((("gen", 1, 1), (0, 0), (1, 1)))
        assert expand_slp(p).letters == ((1, 4),)
        assert slp_size(p) == 3

    def test_empty_root(self):
        assert expand_slp(StraightLineProgram((None,))).letters == ()

    def test_single_terminal_size(self):
        assert slp_size(StraightLineProgram((("gen", 2, -1),))) == 1

    def test_limit(self):
        n = 12
        with pytest.raises(ExpansionLimitError):
            expand_slp(doubling(n), limit=2 ** (n - 2))
        assert slp_length(doubling(n)) == 2 ** (n - 1)

    def test_unreachable_rejected(self):
        with pytest.raises(ValueError):
            StraightLineProgram((("gen", 1, 1), ("gen", 2, 1), (0, 0)))
        with pytest.raises(ParseError):
            parse_slp("A1 = a1\nA2 = a2\nA3 = A1 A1", 2)

    def test_forward_reference_rejected(self):
        with pytest.raises(ParseError):
            parse_slp("A1 = A1 A1", 2)

    def test_parse_print_round_trip(self):
        p = parse_slp("A1 = a1\nA2 = a2^-1\nA3 = A1 A2\nA4 = A3 A3", 2)
        assert parse_slp(slp_to_text(p), 2) == p
        assert expand_slp(p).letters == ((1, 1), (2, -1), (1, 1), (2, -1))

    @settings(max_examples=200)
    @given(st.lists(st.tuples(st.integers(1, 3), st.integers(-5, 5)), max_size=20))
    def test_from_word_round_trip(self, letters):
        w = Word(letters)
        assert expand_slp(slp_from_word(w)) == w

    def test_length_table_random(self):
        rng = random.Random(0)
        for _ in range(100):
            n = rng.randint(1, 30)
            rules = [("gen", rng.randint(1, 3), rng.choice((1, -1)))]
            for i in range(1, n):
                rules.append(("gen", rng.randint(1, 3), 1) if rng.random() < 0.2
                             else (rng.randrange(i), rng.randrange(i)))
            try:
                p = StraightLineProgram(tuple(rules))
            except ValueError:  # unreachable rules
                continue
            if slp_length(p) <= 1 << 16:
                assert len(expand_slp(p, 1 << 16).letters) <= slp_length(p)
                assert sum(abs(e) for _, e in expand_slp(p, 1 << 16).letters) <= slp_length(p)


class TestBinExp:
    def test_inverse(self):
        b = parse_binexp("(a1 a2^2)^3 a3", 3)
        assert (b * b.inverse()).expand() == Word(())

    def test_text_round_trip(self):
        b = parse_binexp("(a1 a2^2)^3 a3^-1", 3)
        assert parse_binexp(b.to_text(), 3).expand() == b.expand()

    def test_from_word(self):
        w = parse_word("a1 a2^-1", 2)
        assert BinExpWord.from_word(w).expand() == w
