"""Free nilpotent groups through the truncated Magnus embedding.

``x_i -> 1 + X_i`` embeds the free group into power series in non-commuting
variables; truncating at degree ``c`` gives the free nilpotent group of class
``c``. Its Mal'cev basis is the basic commutators indexed by Lyndon words
(ordered by weight, then lexicographically). The degree-``w`` part of the
commutator for Lyndon word ``l`` is ``l`` plus lexicographically larger words,
which makes coordinate extraction triangular.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

from .presentation import NilpotentPresentation
from .words import BinExpWord

Series = dict  # word tuple -> int coefficient


def lyndon_words(r: int, n: int) -> list[tuple[int, ...]]:
    """Lyndon words of length exactly ``n`` over ``0..r-1`` in lexicographic order (Duval)."""
    out = []
    if r == 0:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == n:
            out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == r - 1:
            w.pop()
    return out


def standard_factorization(w: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for k in range(1, len(w)):
        v = w[k:]
        if _is_lyndon(v):
            return w[:k], v
    raise ValueError("single letters have no factorization")


def _is_lyndon(w) -> bool:
    return all(w < w[k:] + w[:k] for k in range(1, len(w))) and all(w < w[k:] for k in range(1, len(w)))


class Truncated:
    """Arithmetic in the free associative algebra modulo words longer than ``c``."""

    def __init__(self, c: int):
        self.c = c

    def mul(self, a: Series, b: Series) -> Series:
        out: Series = {}
        c = self.c
        for u, x in a.items():
            lu = len(u)
            for v, y in b.items():
                if lu + len(v) > c:
                    continue
                w = u + v
                s = out.get(w, 0) + x * y
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return out

    def power(self, a: Series, n: int) -> Series:
        """``a^n`` for a group-like ``a = 1 + Y`` via the binomial series."""
        y = {w: x for w, x in a.items() if w}
        out: Series = {(): 1}
        term: Series = {(): 1}
        for k in range(1, self.c + 1):
            term = self.mul(term, y)
            if not term:
                break
            b = _binom(n, k)
            if b:
                for w, x in term.items():
                    s = out.get(w, 0) + b * x
                    if s:
                        out[w] = s
                    else:
                        out.pop(w, None)
        return out

    def inverse(self, a: Series) -> Series:
        return self.power(a, -1)

    def commutator(self, a: Series, b: Series) -> Series:
        return self.mul(self.inverse(self.mul(b, a)), self.mul(a, b))


def _binom(n: int, k: int) -> int:
    if n >= 0:
        return comb(n, k)
    # generalized binomial for negative n
    return (-1) ** k * comb(k - n - 1, k)


class FreeNilpotent:
    """Free nilpotent group of rank ``r`` and class ``c`` with its Lyndon basis."""

    def __init__(self, r: int, c: int):
        self.r, self.c = r, c
        self.alg = Truncated(c)
        self.basis: list[tuple[int, ...]] = []
        self.weight_blocks: list[list[int]] = []
        for w in range(1, c + 1):
            block = []
            for lw in lyndon_words(r, w):
                block.append(len(self.basis))
                self.basis.append(lw)
            self.weight_blocks.append(block)
        self.index = {lw: k for k, lw in enumerate(self.basis)}
        self.images: list[Series] = []
        for lw in self.basis:
            if len(lw) == 1:
                self.images.append({(): 1, lw: 1})
            else:
                u, v = standard_factorization(lw)
                self.images.append(self.alg.commutator(self.images[self.index[u]], self.images[self.index[v]]))
        self._presentation = None

    @property
    def m(self) -> int:
        return len(self.basis)

    def element(self, coords) -> Series:
        x: Series = {(): 1}
        for k, e in enumerate(coords):
            if e:
                x = self.alg.mul(x, self.alg.power(self.images[k], e))
        return x

    def coordinates(self, a: Series) -> tuple[int, ...]:
        coords = [0] * self.m
        u = dict(a)
        for w, block in enumerate(self.weight_blocks, start=1):
            if not block:
                continue
            part = {word: x for word, x in u.items() if len(word) == w}
            xs = {}
            for k in block:
                lw = self.basis[k]
                x = part.get(lw, 0)
                if x:
                    xs[k] = x
                    for word, y in self.images[k].items():
                        if len(word) == w:
                            s = part.get(word, 0) - x * y
                            if s:
                                part[word] = s
                            else:
                                part.pop(word, None)
            if part:
                raise AssertionError("element is not group-like in the truncated algebra")
            if xs:
                block_elem: Series = {(): 1}
                for k in block:
                    if k in xs:
                        coords[k] = xs[k]
                        block_elem = self.alg.mul(block_elem, self.alg.power(self.images[k], xs[k]))
                u = self.alg.mul(self.alg.inverse(block_elem), u)
        if u != {(): 1}:
            raise AssertionError("coordinate extraction left a residue")
        return tuple(coords)

    def presentation(self) -> NilpotentPresentation:
        if self._presentation is None:
            conj = {}
            for j in range(self.m):
                for i in range(j):
                    comm = self.alg.commutator(self.images[j], self.images[i])
                    t = self.coordinates(comm)
                    if any(t):
                        conj[(i, j)] = t
            levels = [len(lw) for lw in self.basis]
            self._presentation = NilpotentPresentation([None] * self.m, conj, {}, levels, self.c)
        return self._presentation

    def commutator_word(self, k: int) -> BinExpWord:
        """Basis element ``k`` as an iterated commutator word in ``x_1..x_r``."""
        return _commutator_word(self.basis[k])


@lru_cache(maxsize=None)
def _commutator_word(lw: tuple[int, ...]) -> BinExpWord:
    if len(lw) == 1:
        return BinExpWord(((lw[0] + 1, 1),))
    u, v = standard_factorization(lw)
    a, b = _commutator_word(u), _commutator_word(v)
    return BinExpWord(((a, -1), (b, -1), (a, 1), (b, 1)))


@lru_cache(maxsize=32)
def free_nilpotent(r: int, c: int) -> FreeNilpotent:
    return FreeNilpotent(r, c)
