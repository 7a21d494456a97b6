"""Nilpotent presentations and exact Mal'cev-coordinate arithmetic.

A presentation has basis ``a_1..a_m`` (0-based internally), relative orders
``e_i`` (``None`` for infinite), a central-series level per generator and the
tables

* ``a_i^-1 a_j a_i = a_j * tail``  for ``i < j``   (tail supported right of ``j``)
* ``a_i^e_i = tail``               for finite ``e_i`` (tail supported right of ``i``)

Elements are coordinate tuples ``(x_1, .., x_m)`` meaning ``a_1^x_1 ... a_m^x_m``
with ``0 <= x_i < e_i`` for finite ``e_i``.

Multiplication is collection from the left with the collected prefix kept in
normal form: multiplying ``x`` by ``a_l^k`` conjugates the part of ``x`` to the
right of ``l`` by ``a_l^k``. Conjugation by ``a_l^k`` is an automorphism of
``<a_{l+1}, .., a_m>``; its generator images are computed by repeated squaring,
so cost depends on the bit size of ``k`` rather than on ``k``.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .words import (BinExpWord, Coordinates, ParseError, StraightLineProgram, Word,
                    parse_word)

__all__ = [
    "NilpotentPresentation",
    "collect",
    "multiply",
    "inverse",
    "power",
    "evaluate_compressed",
    "check_consistency",
    "parse_presentation",
    "format_presentation",
]

_CACHE_CAP = 20000


def _tail_vector(m: int, tail, name: str) -> list[int]:
    if tail is None:
        return [0] * m
    if isinstance(tail, Mapping):
        v = [0] * m
        for k, e in tail.items():
            v[k] = int(e)
        return v
    v = [int(x) for x in tail]
    if len(v) != m:
        raise ValueError(f"{name}: tail has length {len(v)}, expected {m}")
    return v


class NilpotentPresentation:
    """A nilpotent (polycyclic) presentation with a central series.

    Parameters
    ----------
    orders:
        relative order per generator, ``None`` for infinite.
    conjugates:
        mapping ``(i, j) -> tail`` (0-based, ``i < j``) for
        ``a_i^-1 a_j a_i = a_j * tail``; missing pairs commute. A tail is a
        length-``m`` exponent list or a ``{index: exponent}`` dict.
    powers:
        mapping ``i -> tail`` for ``a_i^e_i = tail``; required for every
        finite ``e_i``.
    levels:
        1-based central-series level per generator. Computed when omitted.
    """

    def __init__(self, orders: Sequence[int | None], conjugates: Mapping | None = None,
                 powers: Mapping | None = None, levels: Sequence[int] | None = None,
                 c: int | None = None):
        m = len(orders)
        self.m = m
        self.orders: tuple[int | None, ...] = tuple(None if o is None else int(o) for o in orders)
        for i, o in enumerate(self.orders):
            if o is not None and o < 1:
                raise ValueError(f"a{i + 1}: relative order must be a positive integer or infinite")
        conjugates = dict(conjugates or {})
        powers = dict(powers or {})
        for (i, j) in conjugates:
            if not 0 <= i < j < m:
                raise ValueError(f"conjugation relation ({i + 1},{j + 1}) needs i < j <= m")
        for i in powers:
            if not 0 <= i < m:
                raise ValueError(f"power relation for a{i + 1} out of range")
            if self.orders[i] is None:
                raise ValueError(f"a{i + 1} has infinite order but a power relation was given")
        for i, o in enumerate(self.orders):
            if o is not None and i not in powers:
                raise ValueError(f"a{i + 1} has order {o} but no power relation")

        raw_conj = {}
        for (i, j), tail in conjugates.items():
            v = _tail_vector(m, tail, f"a{j + 1}^a{i + 1}")
            if any(v[: j + 1]):
                raise ValueError(f"tail of a{j + 1}^a{i + 1} must be supported right of a{j + 1}")
            if any(v):
                raw_conj[(i, j)] = v
        raw_pow = {}
        for i, tail in powers.items():
            v = _tail_vector(m, tail, f"a{i + 1}^{self.orders[i]}")
            if any(v[: i + 1]):
                raise ValueError(f"tail of a{i + 1}^{self.orders[i]} must be supported right of a{i + 1}")
            raw_pow[i] = v

        # tables filled bottom-up so that canonicalizing a tail only uses
        # generators already finished
        self._conj: list[list] = [[None] * m for _ in range(m)]
        self._conj_inv: list[list] = [[None] * m for _ in range(m)]
        self._power: list = [None] * m
        self._comm_mask = [(1 << m) - 1] * m
        self._cache: dict = {}
        self._gen_vecs: list = [None] * m
        self._trivial_conj = [True] * m
        for j in range(m - 1, -1, -1):
            if self.orders[j] is not None:
                self._power[j] = self._canon(raw_pow[j])
            gj = self._gen_vec(j)
            for i in range(j):
                t = raw_conj.get((i, j))
                if t is None:
                    continue
                img = self._mul(gj, t)
                if img != gj:
                    self._conj[i][j] = img
                    self._comm_mask[i] &= ~(1 << j)
                    self._comm_mask[j] &= ~(1 << i)
                    self._trivial_conj[i] = False
            # inverse-conjugation images for generators right of j-1 are now
            # complete for every i >= j; derive for i = j - 1 lazily below
        for i in range(m - 1, -1, -1):
            self._derive_inverse(i)

        if levels is None:
            levels = self._auto_levels()
        self.levels: tuple[int, ...] = tuple(int(x) for x in levels)
        if len(self.levels) != m:
            raise ValueError("one level per generator is required")
        self.c = int(c) if c is not None else max(self.levels, default=0)
        self._validate_levels()

    # ------------------------------------------------------------------
    # construction helpers

    def _gen_vec(self, j: int) -> list[int]:
        v = self._gen_vecs[j]
        if v is None:
            if self.orders[j] == 1:
                v = list(self._power[j])
            else:
                v = [0] * self.m
                v[j] = 1
            self._gen_vecs[j] = v
        return v

    def _canon(self, v: Sequence[int]) -> list[int]:
        x = [0] * self.m
        for p, e in enumerate(v):
            if e:
                x = self._mul_gen(x, p, e)
        return x

    def _derive_inverse(self, l: int):
        # y_p = a_p^(a_l^-1) = a_p * c^-1(d_p)^-1 with d_p = a_p^-1 c(a_p)
        m = self.m
        if self._trivial_conj[l]:
            return
        ys: list = [None] * m
        for p in range(m - 1, l, -1):
            img = self._conj[l][p]
            if img is None:
                continue
            gp = self._gen_vec(p)
            d = self._mul(self._inv(gp), img)
            back = self._apply(ys, d, l)
            ys[p] = self._mul(gp, self._inv(back))
        self._conj_inv[l] = ys

    def _auto_levels(self) -> list[int]:
        m = self.m
        lev = [1] * m
        changed = True
        while changed:
            changed = False
            for j in range(m):
                if j and lev[j] < lev[j - 1]:
                    lev[j] = lev[j - 1]
                    changed = True
                for i in range(j):
                    for table in (self._conj, self._conj_inv):
                        img = table[i][j]
                        if img is None:
                            continue
                        d = self._mul(self._inv(self._gen_vec(j)), img)
                        for l, e in enumerate(d):
                            if e and lev[l] < lev[j] + 1:
                                lev[l] = lev[j] + 1
                                changed = True
                                if lev[l] > m:
                                    raise ValueError("conjugation tables admit no central series")
        return lev

    def _validate_levels(self):
        lev = self.levels
        for j in range(self.m):
            if lev[j] < 1 or lev[j] > self.c:
                raise ValueError(f"a{j + 1}: level {lev[j]} outside 1..{self.c}")
            if j and lev[j] < lev[j - 1]:
                raise ValueError("levels must be nondecreasing")
        for i in range(self.m):
            for j in range(i + 1, self.m):
                for table in (self._conj, self._conj_inv):
                    img = table[i][j]
                    if img is None:
                        continue
                    d = self._mul(self._inv(self._gen_vec(j)), img)
                    for l, e in enumerate(d):
                        if e and lev[l] <= lev[j]:
                            raise ValueError(
                                f"levels do not form a central series: [a{j + 1}, a{i + 1}] involves a{l + 1}")

    # ------------------------------------------------------------------
    # arithmetic kernel (lists in, lists out)

    def _support_commutes(self, v: Sequence[int], start: int = 0) -> bool:
        mask = 0
        for p in range(start, self.m):
            if v[p]:
                mask |= 1 << p
        bits = mask
        while bits:
            low = bits & -bits
            p = low.bit_length() - 1
            if mask & ~self._comm_mask[p]:
                return False
            bits ^= low
        return True

    def _mul_gen(self, x: list[int], l: int, k: int) -> list[int]:
        """``x * a_l^k`` for canonical ``x``."""
        if k == 0:
            return x
        m = self.m
        suffix_live = False
        for p in range(l + 1, m):
            if x[p]:
                suffix_live = True
                break
        if suffix_live and not self._trivial_conj[l]:
            mask = self._comm_mask[l]
            needs = False
            for p in range(l + 1, m):
                if x[p] and not (mask >> p) & 1:
                    needs = True
                    break
            if needs:
                images = self._conj_power(l, k)
                suffix = self._apply(images, x, l)
            else:
                suffix = x
        else:
            suffix = x
        e = x[l] + k
        o = self.orders[l]
        if o is not None and not 0 <= e < o:
            q, e = divmod(e, o)
            head = self._pow(self._power[l], q)
            if suffix_live:
                tail = [0] * (l + 1) + list(suffix[l + 1:])
                suffix = self._mul(head, tail)
            else:
                suffix = head
        out = x[:l]
        out.append(e)
        out.extend(suffix[l + 1:])
        return out

    def _apply(self, images: Sequence, w: Sequence[int], l: int) -> list[int]:
        """Image of the part of ``w`` right of ``l`` under the automorphism
        given by generator images (``None`` = fixed)."""
        res = [0] * self.m
        for p in range(l + 1, self.m):
            e = w[p]
            if not e:
                continue
            img = images[p]
            if img is None:
                res = self._mul_gen(res, p, e)
            else:
                res = self._mul(res, self._pow(img, e))
        return res

    def _conj_power(self, l: int, k: int) -> list:
        if k == 1:
            return self._conj[l]
        if k == -1:
            return self._conj_inv[l]
        key = (l, k)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        base = self._conj[l] if k > 0 else self._conj_inv[l]
        n = abs(k)
        result = None
        while True:
            if n & 1:
                result = base if result is None else self._compose(result, base, l)
            n >>= 1
            if not n:
                break
            base = self._compose(base, base, l)
        if len(self._cache) > _CACHE_CAP:
            self._cache.clear()
        self._cache[key] = result
        return result

    def _compose(self, f: Sequence, g: Sequence, l: int) -> list:
        """Images of ``x -> f(g(x))`` on generators right of ``l``."""
        out: list = [None] * self.m
        for p in range(l + 1, self.m):
            gp = g[p]
            if gp is None:
                out[p] = f[p]
            else:
                img = self._apply(f, gp, l)
                out[p] = None if img == self._gen_vec(p) else img
        return out

    def _mul(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        x = list(u)
        for p, e in enumerate(v):
            if e:
                x = self._mul_gen(x, p, e)
        return x

    def _inv(self, u: Sequence[int]) -> list[int]:
        x = [0] * self.m
        for p in range(self.m - 1, -1, -1):
            if u[p]:
                x = self._mul_gen(x, p, -u[p])
        return x

    def _pow(self, v: Sequence[int], n: int) -> list[int]:
        if n == 0 or not any(v):
            return [0] * self.m
        if n == 1:
            return list(v)
        if n < 0:
            v = self._inv(v)
            n = -n
        if self._support_commutes(v):
            x = [0] * self.m
            for p, e in enumerate(v):
                if e:
                    x = self._mul_gen(x, p, e * n)
            return x
        result = None
        base = list(v)
        while True:
            if n & 1:
                result = base if result is None else self._mul(result, base)
            n >>= 1
            if not n:
                break
            base = self._mul(base, base)
        return result

    # ------------------------------------------------------------------
    # public arithmetic (tuples)

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.m

    @property
    def torsion_set(self) -> frozenset[int]:
        return frozenset(i for i, o in enumerate(self.orders) if o is not None)

    def generator(self, i: int) -> tuple[int, ...]:
        """Normal form of ``a_{i+1}`` (0-based ``i``)."""
        return tuple(self._gen_vec(i))

    def generators(self) -> list[tuple[int, ...]]:
        return [self.generator(i) for i in range(self.m)]

    def multiply(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        return tuple(self._mul(u, v))

    def product(self, *elements: Sequence[int]) -> tuple[int, ...]:
        x = [0] * self.m
        for e in elements:
            x = self._mul(x, e)
        return tuple(x)

    def inverse(self, u: Sequence[int]) -> tuple[int, ...]:
        return tuple(self._inv(u))

    def power(self, u: Sequence[int], n: int) -> tuple[int, ...]:
        return tuple(self._pow(u, int(n)))

    def conjugate(self, u: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
        """``u^x = x^-1 u x``."""
        return tuple(self._mul(self._mul(self._inv(x), u), x))

    def commutator(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        """``[u, v] = u^-1 v^-1 u v``."""
        return tuple(self._mul(self._inv(self._mul(v, u)), self._mul(u, v)))

    def canonical(self, v: Sequence[int]) -> tuple[int, ...]:
        """Normal form of ``a_1^v_1 ... a_m^v_m`` for arbitrary integers ``v``."""
        if len(v) != self.m:
            raise ValueError(f"expected {self.m} coordinates, got {len(v)}")
        return tuple(self._canon(v))

    def is_canonical(self, v: Sequence[int]) -> bool:
        return len(v) == self.m and all(o is None or 0 <= x < o for x, o in zip(v, self.orders))

    def collect(self, w: Word | Iterable[tuple[int, int]]) -> tuple[int, ...]:
        x = [0] * self.m
        for g, e in (w.letters if isinstance(w, Word) else w):
            if not 1 <= g <= self.m:
                raise ValueError(f"generator a{g} outside 1..{self.m}")
            x = self._mul_gen(x, g - 1, e)
        return tuple(x)

    def evaluate(self, w) -> tuple[int, ...]:
        """Coordinates of any word encoding."""
        if isinstance(w, Word):
            return self.collect(w)
        if isinstance(w, BinExpWord):
            return tuple(self._eval_binexp(w))
        if isinstance(w, StraightLineProgram):
            return self._eval_slp(w)
        if isinstance(w, Coordinates):
            return self.canonical(w.coords)
        if isinstance(w, str):
            return self.collect(parse_word(w, self.m))
        raise TypeError(f"cannot evaluate {type(w).__name__}")

    def _eval_binexp(self, w: BinExpWord, memo: dict | None = None) -> list[int]:
        # nested words may be shared objects; each is evaluated once
        if memo is None:
            memo = {}
        hit = memo.get(id(w))
        if hit is not None:
            return hit
        x = [0] * self.m
        for base, e in w.factors:
            if isinstance(base, int):
                if not 1 <= base <= self.m:
                    raise ValueError(f"generator a{base} outside 1..{self.m}")
                x = self._mul_gen(x, base - 1, e)
            else:
                x = self._mul(x, self._pow(self._eval_binexp(base, memo), e))
        memo[id(w)] = x
        return x

    def _eval_slp(self, p: StraightLineProgram) -> tuple[int, ...]:
        vals: list = []
        for rule in p.rules:
            if rule is None:
                vals.append([0] * self.m)
            elif rule[0] == "gen":
                _, g, e = rule
                if not 1 <= g <= self.m:
                    raise ValueError(f"generator a{g} outside 1..{self.m}")
                vals.append(self._mul_gen([0] * self.m, g - 1, e))
            else:
                vals.append(self._mul(vals[rule[0]], vals[rule[1]]))
        return tuple(vals[-1])

    # ------------------------------------------------------------------
    # tables

    def conjugate_tail(self, i: int, j: int) -> tuple[int, ...]:
        """Tail ``t`` in ``a_i^-1 a_j a_i = a_j t`` (``i < j``)."""
        img = self._conj[i][j] or self._gen_vec(j)
        return tuple(self._mul(self._inv(self._gen_vec(j)), img))

    def inverse_tail(self, i: int, j: int) -> tuple[int, ...]:
        """Tail ``t`` in ``a_i^-1 a_j^-1 a_i = a_j^-1 t`` (``i < j``)."""
        gj = self._gen_vec(j)
        img = self._conj[i][j] or gj
        return tuple(self._mul(gj, self._inv(img)))

    def power_tail(self, i: int) -> tuple[int, ...] | None:
        return None if self._power[i] is None else tuple(self._power[i])

    def commutes(self, i: int, j: int) -> bool:
        return bool((self._comm_mask[i] >> j) & 1)

    def relation_data(self):
        """``(orders, conjugates, powers, levels, c)`` reconstructing this presentation."""
        conj = {}
        for i in range(self.m):
            for j in range(i + 1, self.m):
                if self._conj[i][j] is not None:
                    conj[(i, j)] = self.conjugate_tail(i, j)
        pw = {i: tuple(self._power[i]) for i in range(self.m) if self._power[i] is not None}
        return self.orders, conj, pw, self.levels, self.c

    def __eq__(self, other) -> bool:
        if not isinstance(other, NilpotentPresentation):
            return NotImplemented
        return (self.orders == other.orders and self.levels == other.levels and self.c == other.c
                and self._conj == other._conj and self._power == other._power)

    def __hash__(self):
        return hash((self.orders, self.levels))

    def __repr__(self) -> str:
        orders = ",".join("inf" if o is None else str(o) for o in self.orders)
        return f"NilpotentPresentation(m={self.m}, c={self.c}, orders=({orders}))"

    def is_abelian(self) -> bool:
        return all(self._trivial_conj)

    def is_finite(self) -> bool:
        return all(o is not None for o in self.orders)

    def order(self) -> int | None:
        """Group order, ``None`` when infinite."""
        if not self.is_finite():
            return None
        n = 1
        for o in self.orders:
            n *= o
        return n

    # ------------------------------------------------------------------

    def check_consistency(self) -> bool:
        """True iff every overlap of the rewriting rules resolves identically."""
        m = self.m
        g = [self._gen_vec(i) for i in range(m)]
        inv = [self._inv(v) for v in g]
        mul = self._mul
        T = [i for i in range(m) if self.orders[i] is not None]

        def power_naive(i, n):
            x = [0] * m
            for _ in range(n):
                x = mul(x, g[i])
            return x

        for k in range(m):
            for j in range(k):
                for i in range(j):
                    if mul(mul(g[k], g[j]), g[i]) != mul(g[k], mul(g[j], g[i])):
                        return False
        for j in T:
            ej = self.orders[j]
            pj = self._power[j]
            for i in range(j):
                if mul(pj, g[i]) != mul(self._pow_letters(j, ej - 1), mul(g[j], g[i])):
                    return False
        for i in T:
            ei = self.orders[i]
            pi = self._power[i]
            for j in range(i + 1, m):
                if mul(g[j], pi) != mul(mul(g[j], g[i]), self._pow_letters(i, ei - 1)):
                    return False
            if mul(g[i], pi) != mul(pi, g[i]):
                return False
            if ei <= 64 and power_naive(i, ei) != list(pi):
                return False
        for i in range(m):
            if self.orders[i] is not None:
                continue
            for j in range(i + 1, m):
                if mul(mul(g[j], inv[i]), g[i]) != g[j]:
                    return False
                if mul(mul(g[j], g[i]), inv[i]) != g[j]:
                    return False
        for j in range(m):
            if self.orders[j] is not None:
                continue
            for i in range(j):
                if mul(g[j], mul(inv[j], g[i])) != g[i]:
                    return False
        return True

    def _pow_letters(self, i: int, n: int) -> list[int]:
        # a_i^n as a letter sequence with exponents kept below e_i
        x = [0] * self.m
        if n:
            x[i] = n
        return x


# ----------------------------------------------------------------------
# functional surface


def collect(P: NilpotentPresentation, w) -> tuple[int, ...]:
    return P.collect(w) if isinstance(w, Word) else P.evaluate(w)


def multiply(P: NilpotentPresentation, u, v) -> tuple[int, ...]:
    return P.multiply(u, v)


def inverse(P: NilpotentPresentation, u) -> tuple[int, ...]:
    return P.inverse(u)


def power(P: NilpotentPresentation, u, n: int) -> tuple[int, ...]:
    return P.power(u, n)


def evaluate_compressed(P: NilpotentPresentation, w) -> tuple[int, ...]:
    return P.evaluate(w)


def check_consistency(P: NilpotentPresentation) -> bool:
    return P.check_consistency()


# ----------------------------------------------------------------------
# text format

_HEADER = re.compile(r"nilpotent\s+m\s*=\s*(\d+)\s+c\s*=\s*(\d+)\s*$")
_GEN = re.compile(r"a(\d+)\s+order\s*=\s*(inf|\d+)\s+level\s*=\s*(\d+)\s*$")
_CONJ = re.compile(r"a(\d+)(\^-1)?\s+a(\d+)\s*=\s*a(\d+)\s+a(\d+)(\^-1)?(.*)$")
_POW = re.compile(r"a(\d+)\^(\d+)\s*=(.*)$")


def _tail_from_text(text: str, m: int, after: int, pos: int, src: str) -> list[int]:
    text = text.strip()
    v = [0] * m
    if not text or text == "1":
        return v
    try:
        w = parse_word(text, m)
    except ParseError as exc:
        raise ParseError(str(exc).split(" (at")[0], pos + exc.pos, src) from None
    last = after
    for g, e in w.letters:
        if g - 1 <= last:
            raise ParseError("tail generators must be increasing and right of the relation's generator", pos, src)
        v[g - 1] = e
        last = g - 1
    return v


def parse_presentation(text: str) -> NilpotentPresentation:
    """Read the ``nilpotent m=.. c=..`` text format."""
    lines = []
    offset = 0
    for raw in text.splitlines(keepends=True):
        body = raw.split("#", 1)[0].rstrip("\n")
        if body.strip():
            lines.append((offset + len(body) - len(body.lstrip()), body.strip()))
        offset += len(raw)
    if not lines:
        raise ParseError("empty presentation", 0, text)
    pos, head = lines[0]
    hm = _HEADER.match(head)
    if hm is None:
        raise ParseError("expected header 'nilpotent m=<int> c=<int>'", pos, text)
    m, c = int(hm.group(1)), int(hm.group(2))
    orders: list = [None] * m
    levels = [0] * m
    seen = set()
    conj: dict = {}
    inverse_rel: dict = {}
    pw: dict = {}
    for pos, line in lines[1:]:
        gm = _GEN.match(line)
        if gm:
            i = int(gm.group(1))
            if not 1 <= i <= m or i in seen:
                raise ParseError(f"bad or repeated generator line a{i}", pos, text)
            seen.add(i)
            orders[i - 1] = None if gm.group(2) == "inf" else int(gm.group(2))
            levels[i - 1] = int(gm.group(3))
            continue
        cm = _CONJ.match(line)
        if cm:
            j, inv1, i, i2, j2, inv2 = cm.group(1, 2, 3, 4, 5, 6)
            j, i, i2, j2 = int(j), int(i), int(i2), int(j2)
            if not (i == i2 and j == j2 and bool(inv1) == bool(inv2) and 1 <= i < j <= m):
                raise ParseError("expected 'aj ai = ai aj tail' with i < j", pos, text)
            tail = _tail_from_text(cm.group(7), m, j - 1, pos + cm.start(7), text)
            (inverse_rel if inv1 else conj)[(i - 1, j - 1)] = (tail, pos)
            continue
        pm = _POW.match(line)
        if pm:
            i, e = int(pm.group(1)), int(pm.group(2))
            if not 1 <= i <= m:
                raise ParseError(f"generator a{i} out of range", pos, text)
            pw[i - 1] = (e, _tail_from_text(pm.group(3), m, i - 1, pos + pm.start(3), text), pos)
            continue
        raise ParseError("unrecognized line", pos, text)
    if len(seen) != m:
        missing = min(set(range(1, m + 1)) - seen)
        raise ParseError(f"missing generator line for a{missing}", 0, text)
    for i, (e, _, pos) in pw.items():
        if orders[i] != e:
            raise ParseError(f"power relation a{i + 1}^{e} does not match declared order", pos, text)
    try:
        P = NilpotentPresentation(orders, {k: v[0] for k, v in conj.items()},
                                  {k: v[1] for k, v in pw.items()}, levels, c)
    except ValueError as exc:
        raise ParseError(str(exc), 0, text) from None
    for (i, j), (tail, pos) in inverse_rel.items():
        if P.canonical(tail) != P.inverse_tail(i, j):
            raise ParseError(f"inverse relation for (a{j + 1}^-1, a{i + 1}) contradicts the conjugation table", pos, text)
    return P


def _tail_text(v: Sequence[int]) -> str:
    parts = [f"a{k + 1}" if e == 1 else f"a{k + 1}^{e}" for k, e in enumerate(v) if e]
    return " ".join(parts)


def format_presentation(P: NilpotentPresentation, with_inverse: bool = True) -> str:
    lines = [f"nilpotent m={P.m} c={P.c}"]
    for i in range(P.m):
        o = "inf" if P.orders[i] is None else str(P.orders[i])
        lines.append(f"a{i + 1} order={o} level={P.levels[i]}")
    for i in range(P.m):
        for j in range(i + 1, P.m):
            if P.commutes(i, j):
                continue
            tail = _tail_text(P.conjugate_tail(i, j))
            lines.append(f"a{j + 1} a{i + 1} = a{i + 1} a{j + 1}" + (f" {tail}" if tail else ""))
            if with_inverse:
                tail = _tail_text(P.inverse_tail(i, j))
                lines.append(f"a{j + 1}^-1 a{i + 1} = a{i + 1} a{j + 1}^-1" + (f" {tail}" if tail else ""))
    for i in range(P.m):
        if P.orders[i] is not None:
            tail = _tail_text(P.power_tail(i))
            lines.append(f"a{i + 1}^{P.orders[i]} = {tail or '1'}")
    return "\n".join(lines) + "\n"
