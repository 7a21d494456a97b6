"""Group words in plain, binary-exponent and straight-line-program encodings.

Generators are 1-based indices into the alphabet of the enclosing presentation.
Exponents are Python ints, so they are never bounded by a machine word.

Text grammar accepted by :func:`parse_word` and :func:`parse_binexp`::

    word := term+
    term := gen ('^' int)? | '(' word ')' ('^' int)? | '[' word ',' word ']' ('^' int)?
    gen  := 'a' index | declared-name
    int  := '-'? [0-9]+

``[u,v]`` is the commutator ``u^-1 v^-1 u v``. A lone ``1`` denotes the empty word.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

__all__ = [
    "ParseError",
    "ExpansionLimitError",
    "Word",
    "BinExpWord",
    "StraightLineProgram",
    "Coordinates",
    "parse_word",
    "parse_binexp",
    "parse_slp",
    "expand_slp",
    "slp_size",
    "slp_from_word",
    "slp_length",
]


class ParseError(ValueError):
    """Malformed text input; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int = 0, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} (at position {pos})")


class ExpansionLimitError(ValueError):
    pass


def _merge(letters: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


class Word:
    """A normalized product of generator powers ``a_g^e``.

    Adjacent equal generators are merged and zero exponents dropped; no other
    rewriting happens (collection is the presentation's job).
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[int, int]] = ()):
        self.letters = _merge((int(g), int(e)) for g, e in letters)

    @classmethod
    def gen(cls, g: int, e: int = 1) -> "Word":
        return cls([(g, e)])

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.letters))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(self.letters * n)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)!r})"

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=0)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            name = names[g - 1] if names else f"a{g}"
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)


@dataclass(frozen=True)
class BinExpWord:
    """A word whose factors carry binary exponents and may nest.

    Each factor is ``(base, exponent)`` where ``base`` is a generator index or
    another :class:`BinExpWord`. ``(a1 a2)^8`` stays a single factor.
    """

    factors: tuple[tuple[Union[int, "BinExpWord"], int], ...] = ()

    def expand(self, limit: int | None = None) -> Word:
        letters: list[tuple[int, int]] = []
        total = 0

        def walk(node: BinExpWord, sign: int):
            nonlocal total
            seq = node.factors if sign > 0 else tuple(reversed(node.factors))
            for base, e in seq:
                e *= sign
                if isinstance(base, int):
                    total += 1
                    if limit is not None and total > limit:
                        raise ExpansionLimitError(f"expansion exceeds {limit} letters")
                    letters.append((base, e))
                else:
                    s = 1 if e > 0 else -1
                    for _ in range(abs(e)):
                        walk(base, s)

        walk(self, 1)
        return Word(letters)

    def inverse(self) -> "BinExpWord":
        return BinExpWord(((self, -1),))

    def __mul__(self, other: "BinExpWord") -> "BinExpWord":
        return BinExpWord(self.factors + other.factors)

    @classmethod
    def from_word(cls, w: Word) -> "BinExpWord":
        return cls(tuple(w.letters))

    def max_generator(self) -> int:
        best = 0
        for base, _ in self.factors:
            best = max(best, base if isinstance(base, int) else base.max_generator())
        return best

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if not self.factors:
            return "1"
        parts = []
        for base, e in self.factors:
            if isinstance(base, int):
                s = names[base - 1] if names else f"a{base}"
            else:
                s = f"({base.to_text(names)})"
            parts.append(s if e == 1 else f"{s}^{e}")
        return " ".join(parts)


@dataclass(frozen=True)
class Coordinates:
    """Mal'cev coordinates given directly; canonicalized on evaluation."""

    coords: tuple[int, ...]


# ---------------------------------------------------------------------------
# text parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[\^()\[\],*]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, alphabet_size: int, names: Sequence[str] | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.m = alphabet_size
        self.names = {name: k + 1 for k, name in enumerate(names)} if names else {}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.peek()[2] if pos is None else pos, self.text)

    def parse(self) -> BinExpWord:
        kind, val, pos = self.peek()
        if kind == "int" and val == "1" and self.toks[self.i + 1][0] == "end":
            self.i += 1
            return BinExpWord()
        if kind == "end":
            return BinExpWord()
        w = self.word(stop=("end",))
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return w

    def word(self, stop) -> BinExpWord:
        factors = []
        while True:
            kind, val, pos = self.peek()
            if kind == "end" or (kind == "sym" and val in (")", "]", ",")):
                break
            if kind == "sym" and val == "*":
                self.take()
                continue
            factors.append(self.term())
        if not factors:
            self.error("empty word")
        return BinExpWord(tuple(factors))

    def exponent(self) -> int:
        if self.peek() == ("sym", "^", self.peek()[2]):
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                self.error("expected integer exponent", pos)
            return int(val)
        return 1

    def term(self):
        kind, val, pos = self.take()
        if kind == "name":
            g = self.generator(val, pos)
            return (g, self.exponent())
        if kind == "sym" and val == "(":
            inner = self.word(stop=(")",))
            if self.take()[1] != ")":
                self.error("expected ')'", pos)
            return (inner, self.exponent())
        if kind == "sym" and val == "[":
            u = self.word(stop=(",",))
            if self.take()[1] != ",":
                self.error("expected ',' in commutator", pos)
            v = self.word(stop=("]",))
            if self.take()[1] != "]":
                self.error("expected ']'", pos)
            comm = BinExpWord(((u, -1), (v, -1), (u, 1), (v, 1)))
            return (comm, self.exponent())
        if kind == "int" and val == "1":
            return (BinExpWord(), 1)
        self.error(f"unexpected token {val!r}", pos)

    def generator(self, name: str, pos: int) -> int:
        if name in self.names:
            return self.names[name]
        m = re.fullmatch(r"a(\d+)", name)
        if m is None:
            self.error(f"unknown generator {name!r}", pos)
        g = int(m.group(1))
        if not 1 <= g <= self.m:
            self.error(f"generator index {g} out of range 1..{self.m}", pos)
        return g


def parse_binexp(text: str, alphabet_size: int, names: Sequence[str] | None = None) -> BinExpWord:
    """Parse ``text`` keeping parenthesized powers nested."""
    return _Parser(text, alphabet_size, names).parse()


def parse_word(text: str, alphabet_size: int, names: Sequence[str] | None = None,
               limit: int | None = 1 << 20) -> Word:
    """Parse ``text`` into a flat normalized :class:`Word`.

    >>> parse_word("a1 a2^-3", 3)
    Word([(1, 1), (2, -3)])
    """
    return parse_binexp(text, alphabet_size, names).expand(limit)


# ---------------------------------------------------------------------------
# straight-line programs


@dataclass(frozen=True)
class StraightLineProgram:
    """Rules ``A_1..A_n``; each rule is ``(j, k)`` (0-based, both < i),
    ``("gen", g, ±1)`` or ``None`` for the empty word. ``A_n`` is the root."""

    rules: tuple

    def __post_init__(self):
        if not self.rules:
            raise ValueError("a straight-line program needs at least one rule")
        for i, rule in enumerate(self.rules):
            if rule is None:
                continue
            if rule[0] == "gen":
                _, g, e = rule
                if e not in (1, -1) or g < 1:
                    raise ValueError(f"rule {i + 1}: terminal must be a generator to the power ±1")
            else:
                j, k = rule
                if not (0 <= j < i and 0 <= k < i):
                    raise ValueError(f"rule {i + 1} references a nonterminal that is not smaller")
        reach = [False] * len(self.rules)
        reach[-1] = True
        for i in range(len(self.rules) - 1, -1, -1):
            rule = self.rules[i]
            if reach[i] and rule is not None and rule[0] != "gen":
                reach[rule[0]] = reach[rule[1]] = True
        if not all(reach):
            bad = reach.index(False) + 1
            raise ValueError(f"nonterminal A{bad} is unreachable from the root")

    def max_generator(self) -> int:
        return max((r[1] for r in self.rules if r is not None and r[0] == "gen"), default=0)


def slp_size(p: StraightLineProgram) -> int:
    return len(p.rules)


def slp_length(p: StraightLineProgram) -> int:
    """Length of the expansion, from a bottom-up table."""
    lens = []
    for rule in p.rules:
        if rule is None:
            lens.append(0)
        elif rule[0] == "gen":
            lens.append(1)
        else:
            lens.append(lens[rule[0]] + lens[rule[1]])
    return lens[-1]


def expand_slp(p: StraightLineProgram, limit: int = 1 << 20) -> Word:
    if slp_length(p) > limit:
        raise ExpansionLimitError(f"expansion of length {slp_length(p)} exceeds limit {limit}")
    words: list[tuple[tuple[int, int], ...]] = []
    for rule in p.rules:
        if rule is None:
            words.append(())
        elif rule[0] == "gen":
            words.append(((rule[1], rule[2]),))
        else:
            words.append(words[rule[0]] + words[rule[1]])
    return Word(words[-1])


def slp_from_word(w: Word) -> StraightLineProgram:
    """A (not minimal) program for ``w``: powers by doubling, then a left spine."""
    rules: list = []
    terminals: dict[tuple[int, int], int] = {}

    def add(rule) -> int:
        rules.append(rule)
        return len(rules) - 1

    def power(g: int, e: int) -> int:
        s = 1 if e > 0 else -1
        key = (g, s)
        if key not in terminals:
            terminals[key] = add(("gen", g, s))
        base = terminals[key]
        n = abs(e)
        acc = None
        bit = base
        while True:
            if n & 1:
                acc = bit if acc is None else add((acc, bit))
            n >>= 1
            if not n:
                break
            bit = add((bit, bit))
        return acc

    if not w.letters:
        return StraightLineProgram((None,))
    pieces = [power(g, e) for g, e in w.letters]
    root = pieces[0]
    for piece in pieces[1:]:
        root = add((root, piece))
    assert root == len(rules) - 1
    return _prune(rules)


def _prune(rules: list) -> StraightLineProgram:
    n = len(rules)
    reach = [False] * n
    reach[-1] = True
    for i in range(n - 1, -1, -1):
        r = rules[i]
        if reach[i] and r is not None and r[0] != "gen":
            reach[r[0]] = reach[r[1]] = True
    index = {}
    out = []
    for i, r in enumerate(rules):
        if not reach[i]:
            continue
        index[i] = len(out)
        if r is None or r[0] == "gen":
            out.append(r)
        else:
            out.append((index[r[0]], index[r[1]]))
    return StraightLineProgram(tuple(out))


_SLP_LINE = re.compile(r"\s*A(\d+)\s*=\s*(.*?)\s*$")


def parse_slp(text: str, alphabet_size: int, names: Sequence[str] | None = None) -> StraightLineProgram:
    """Parse one rule per line: ``Ai = Aj Ak``, ``Ai = gen^±1`` or ``Ai = 1``.

    Lines must define ``A1, A2, ...`` in order; ``;`` also separates rules.
    """
    rules = []
    offset = 0
    for raw in re.split(r"[\n;]", text):
        line = raw.split("#", 1)[0]
        here = offset
        offset += len(raw) + 1
        if not line.strip():
            continue
        m = _SLP_LINE.match(line)
        if m is None:
            raise ParseError("expected 'Ai = ...'", here, text)
        i = int(m.group(1))
        if i != len(rules) + 1:
            raise ParseError(f"expected rule A{len(rules) + 1}, found A{i}", here, text)
        rhs = m.group(2)
        rhs_pos = here + m.start(2)
        refs = re.fullmatch(r"A(\d+)\s+A(\d+)", rhs)
        if refs:
            j, k = int(refs.group(1)), int(refs.group(2))
            if not (1 <= j < i and 1 <= k < i):
                raise ParseError(f"rule A{i} must reference smaller nonterminals", rhs_pos, text)
            rules.append((j - 1, k - 1))
        elif rhs == "1":
            rules.append(None)
        else:
            w = parse_word(rhs, alphabet_size, names)
            if len(w.letters) != 1 or abs(w.letters[0][1]) != 1:
                raise ParseError(f"rule A{i}: terminal must be a single generator^±1", rhs_pos, text)
            g, e = w.letters[0]
            rules.append(("gen", g, e))
    if not rules:
        raise ParseError("empty program", 0, text)
    try:
        return StraightLineProgram(tuple(rules))
    except ValueError as exc:
        raise ParseError(str(exc), 0, text) from None


def slp_to_text(p: StraightLineProgram, names: Sequence[str] | None = None) -> str:
    lines = []
    for i, r in enumerate(p.rules, start=1):
        if r is None:
            rhs = "1"
        elif r[0] == "gen":
            name = names[r[1] - 1] if names else f"a{r[1]}"
            rhs = f"{name}^{r[2]}"
        else:
            rhs = f"A{r[0] + 1} A{r[1] + 1}"
        lines.append(f"A{i} = {rhs}")
    return "\n".join(lines)
