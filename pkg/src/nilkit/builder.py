"""Converting finite presentations into consistent nilpotent presentations, and quotients.

The conversion works inside a free nilpotent group: relators are evaluated
there, their normal closure is factored out, and each lower-central section
of the quotient is rebased by Smith normal form so that its basis realizes
the invariant-factor decomposition.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

from .intmath import inverse_unimodular, smith_normal_form
from .magnus import free_nilpotent
from .presentation import NilpotentPresentation
from .subgroups import (FullFormSequence, full_form, is_normal, membership, normal_closure,
                        series_term)
from .words import BinExpWord, ParseError, Word, parse_binexp

__all__ = [
    "FinitePresentation",
    "PresentationConversion",
    "QuotientPresentation",
    "ClassBoundError",
    "parse_finite_presentation",
    "build_nilpotent_presentation",
    "quotient_presentation",
    "series_term",
    "evaluate_with",
]

AnyWord = Union[Word, BinExpWord]


class ClassBoundError(ValueError):
    """The presented group is not nilpotent of the stated class."""


@dataclass(frozen=True)
class FinitePresentation:
    names: tuple[str, ...]
    relators: tuple[AnyWord, ...]

    @property
    def rank(self) -> int:
        return len(self.names)


_GROUP = re.compile(r"\s*group\b(.*?)(?:\|(.*))?$", re.S)


def parse_finite_presentation(text: str) -> FinitePresentation:
    """Read ``group x y | x^2, [x,y]``; relators may span lines and use ``[u,v]``."""
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    m = _GROUP.match(body)
    if m is None:
        raise ParseError("expected 'group <names> | <relators>'", 0, text)
    names = tuple(m.group(1).split())
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
            raise ParseError(f"bad generator name {n!r}", m.start(1), text)
    if len(set(names)) != len(names):
        raise ParseError("repeated generator name", m.start(1), text)
    rels: list[AnyWord] = []
    rel_text = m.group(2) or ""
    start = m.start(2) if m.group(2) is not None else len(body)
    depth = 0
    piece_start = 0
    pieces = []
    for k, ch in enumerate(rel_text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            pieces.append((piece_start, rel_text[piece_start:k]))
            piece_start = k + 1
    pieces.append((piece_start, rel_text[piece_start:]))
    for off, piece in pieces:
        if not piece.strip():
            continue
        try:
            rels.append(parse_binexp(piece, len(names), names))
        except ParseError as exc:
            raise ParseError(str(exc).split(" (at")[0], start + off + exc.pos, text) from None
    return FinitePresentation(names, tuple(rels))


def evaluate_with(P: NilpotentPresentation, w: AnyWord, images: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Value of a word over ``x_1..x_n`` under ``x_i -> images[i-1]``."""
    if isinstance(w, Word):
        x = [0] * P.m
        for g, e in w.letters:
            x = P._mul(x, P._pow(images[g - 1], e))
        return tuple(x)
    memo: dict[int, list[int]] = {}

    def ev(node: BinExpWord) -> list[int]:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        x = [0] * P.m
        for base, e in node.factors:
            v = images[base - 1] if isinstance(base, int) else ev(base)
            x = P._mul(x, P._pow(v, e))
        memo[id(node)] = x
        return x

    return tuple(ev(w))


class PresentationConversion:
    """A consistent nilpotent presentation with translation maps.

    ``embed[i]`` is the coordinate vector of source generator ``i``; ``phi[k]``
    writes target basis element ``k`` as a word in the source generators.
    """

    def __init__(self, target: NilpotentPresentation, embed: Sequence[tuple[int, ...]],
                 phi: Sequence[BinExpWord], source_names: Sequence[str] | None = None):
        self.target = target
        self.embed = [tuple(v) for v in embed]
        self.phi = list(phi)
        self.source_names = tuple(source_names) if source_names is not None else tuple(
            f"x{i + 1}" for i in range(len(self.embed)))

    def source_to_target(self, w: AnyWord) -> tuple[int, ...]:
        return evaluate_with(self.target, w, self.embed)


# ----------------------------------------------------------------------
# quotients


class QuotientPresentation(PresentationConversion):
    """``G/N`` for a normal subgroup ``N`` in full form.

    Coset representatives are reduced by right-multiplying rows of ``N`` so
    that pivot columns lie in ``[0, pivot)``; columns with pivot entry 1
    disappear and the remaining columns form the quotient basis.
    """

    def __init__(self, P: NilpotentPresentation, N: FullFormSequence, check_normal: bool = True):
        if check_normal and not is_normal(P, N):
            raise ValueError("subgroup is not normal")
        self.ambient = P
        self.N = N
        piv = dict(zip(N.pivots, N.pivot_entries()))
        self.keep = [i for i in range(P.m) if piv.get(i) != 1 and P.orders[i] != 1]
        self._pos = {c: k for k, c in enumerate(self.keep)}
        orders = []
        for i in self.keep:
            orders.append(piv[i] if i in piv else P.orders[i])
        n = len(self.keep)
        conj, powers = {}, {}
        gens = [P.generator(i) for i in self.keep]
        for j in range(n):
            for i in range(j):
                t = self.project(P.commutator(gens[j], gens[i]))
                if any(t):
                    conj[(i, j)] = t
            if orders[j] is not None:
                powers[j] = self.project(P.power(gens[j], orders[j]))
        levels = [P.levels[i] for i in self.keep]
        target = NilpotentPresentation(orders, conj, powers, levels, P.c)
        embed = [self.project(P.generator(i)) for i in range(P.m)]
        phi = [BinExpWord(((i + 1, 1),)) for i in self.keep]
        super().__init__(target, embed, phi, [f"a{i + 1}" for i in range(P.m)])

    def reduce(self, g: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of ``gN``."""
        P = self.ambient
        x = list(g)
        for r, p in zip(self.N.rows, self.N.pivots):
            q = x[p] // r[p]
            if q:
                x = P._mul(x, P._pow(r, -q))
        return tuple(x)

    def project(self, g: Sequence[int]) -> tuple[int, ...]:
        x = self.reduce(g)
        return tuple(x[i] for i in self.keep)

    def lift(self, v: Sequence[int]) -> tuple[int, ...]:
        v = self.target.canonical(v)
        x = [0] * self.ambient.m
        for k, i in enumerate(self.keep):
            x[i] = v[k]
        return tuple(x)

    def lift_subgroup(self, H: FullFormSequence) -> FullFormSequence:
        """Full preimage of a subgroup of the quotient."""
        return full_form(self.ambient, [self.lift(r) for r in H.rows] + list(self.N.rows), track=False)

    def project_subgroup(self, H: FullFormSequence) -> FullFormSequence:
        return full_form(self.target, [self.project(r) for r in H.rows], track=False)


def quotient_presentation(P: NilpotentPresentation, N: FullFormSequence, check_normal: bool = True) -> QuotientPresentation:
    return QuotientPresentation(P, N, check_normal)


# ----------------------------------------------------------------------
# building from a finite presentation


class _Rebase:
    """Per-level Smith normal form change of basis for a nilpotent presentation."""

    def __init__(self, Q: NilpotentPresentation):
        self.Q = Q
        self.blocks = []  # (cols, V, kept [(d, element)])
        maxlev = max(Q.levels, default=0)
        self.new_elements: list[tuple[int, ...]] = []
        self.new_orders: list[int | None] = []
        self.new_levels: list[int] = []
        self.combos: list[list[tuple[int, int]]] = []  # new element -> [(Q column, exponent)]
        for w in range(1, maxlev + 1):
            cols = [i for i in range(Q.m) if Q.levels[i] == w]
            if not cols:
                continue
            k = len(cols)
            rel = []
            for a, i in enumerate(cols):
                o = Q.orders[i]
                if o is None:
                    continue
                row = [0] * k
                row[a] = o
                tail = Q.power_tail(i)
                for b, c in enumerate(cols):
                    row[b] -= tail[c]
                rel.append(row)
            if rel:
                D, _, V = smith_normal_form(rel, k)
                diag = [D[j][j] if j < len(D) else 0 for j in range(k)]
            else:
                V = [[int(a == b) for b in range(k)] for a in range(k)]
                diag = [0] * k
            Vinv = inverse_unimodular(V)
            kept = []
            for j in range(k):
                d = diag[j]
                if d == 1:
                    continue
                vec = [0] * Q.m
                for b, c in enumerate(cols):
                    vec[c] = Vinv[j][b]
                elem = Q.canonical(vec)
                kept.append((j, d, len(self.new_elements)))
                self.new_elements.append(elem)
                self.new_orders.append(d if d else None)
                self.new_levels.append(w)
                self.combos.append([(c, Vinv[j][b]) for b, c in enumerate(cols) if Vinv[j][b]])
            self.blocks.append((cols, V, kept))

    def convert(self, u: Sequence[int]) -> tuple[int, ...]:
        Q = self.Q
        out = [0] * len(self.new_elements)
        x = list(u)
        for cols, V, kept in self.blocks:
            xs = [x[c] for c in cols]
            if not any(xs) and not any(x):
                break
            block = [0] * Q.m
            for j, d, pos in kept:
                y = sum(xs[b] * V[b][j] for b in range(len(cols)))
                if d:
                    y %= d
                out[pos] = y
                if y:
                    block = Q._mul(block, Q._pow(self.new_elements[pos], y))
            x = Q._mul(Q._inv(block), x)
            if any(x[c] for c in cols):
                raise AssertionError("section change of basis failed")
        if any(x):
            raise AssertionError("element not exhausted by rebased basis")
        return tuple(out)

    def presentation(self, c: int) -> NilpotentPresentation:
        Q = self.Q
        n = len(self.new_elements)
        els = self.new_elements
        conj, powers = {}, {}
        for j in range(n):
            for i in range(j):
                t = self.convert(Q.commutator(els[j], els[i]))
                if any(t):
                    conj[(i, j)] = t
            if self.new_orders[j] is not None:
                powers[j] = self.convert(Q.power(els[j], self.new_orders[j]))
        return NilpotentPresentation(self.new_orders, conj, powers, self.new_levels, c)


def _word_power(w: BinExpWord, e: int) -> BinExpWord:
    return w if e == 1 else BinExpWord(((w, e),))


def build_nilpotent_presentation(F: FinitePresentation, c: int | None = None, verify: bool = True,
                                 max_class: int = 6) -> PresentationConversion:
    """Consistent nilpotent presentation of ``<X | R>`` of class at most ``c``.

    With ``verify`` the construction runs one class higher and rejects input
    whose lower central series does not stop by ``c``. Without ``c`` the
    class is detected by increasing it until the series stops.
    """
    if c is None:
        for cc in range(1, max_class + 1):
            try:
                return build_nilpotent_presentation(F, cc, verify=True)
            except ClassBoundError:
                continue
        raise ClassBoundError(f"no class bound up to {max_class} found")
    if c < 1:
        raise ValueError("class bound must be positive")
    r = F.rank
    cc = c + 1 if verify else c
    free = free_nilpotent(r, cc)
    FP = free.presentation()
    gens = [FP.generator(i) for i in range(r)]
    rel_vals = [evaluate_with(FP, w, gens) for w in F.relators]
    N = normal_closure(FP, rel_vals)
    quo = QuotientPresentation(FP, N, check_normal=False)
    Q = quo.target
    if verify and any(lv > c for lv in Q.levels):
        raise ClassBoundError(f"presented group is not nilpotent of class <= {c}")
    Q = NilpotentPresentation(Q.orders, Q.relation_data()[1], Q.relation_data()[2], Q.levels, c)
    rb = _Rebase(Q)
    target = rb.presentation(c)
    embed = [rb.convert(quo.project(g)) for g in gens]
    qwords = [free.commutator_word(i) for i in quo.keep]
    phi = []
    for combo in rb.combos:
        factors = tuple((qwords[col], e) for col, e in combo)
        phi.append(BinExpWord(factors) if len(factors) != 1 or factors[0][1] != 1 else factors[0][0])
    conv = PresentationConversion(target, embed, phi, F.names)
    if not target.check_consistency():
        raise AssertionError("constructed presentation is inconsistent")
    for w in F.relators:
        if any(conv.source_to_target(w)):
            raise AssertionError("a relator survives in the constructed presentation")
    return conv
