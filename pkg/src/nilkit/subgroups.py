"""Full-form subgroup sequences, constructive membership and derived presentations.

A full-form sequence is an echelon basis ``h_1..h_s`` of a subgroup: pivots
strictly increase, pivot entries are positive (dividing ``e_pi`` in torsion
columns) and entries above later pivots are reduced into ``[0, pivot)``.
Every element of the subgroup is uniquely ``h_1^b_1 ... h_s^b_s`` with
``0 <= b_i < e_pi / pivot`` for torsion pivots. The sequence is canonical, so
two subgroups are equal exactly when their row tuples are equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .intmath import xgcd
from .presentation import NilpotentPresentation
from .words import BinExpWord

__all__ = [
    "Expr",
    "FullFormSequence",
    "full_form",
    "membership",
    "contains",
    "is_subgroup",
    "join",
    "intersect_series",
    "max_series_level",
    "series_term",
    "whole_group",
    "trivial_subgroup",
    "conjugate_subgroup",
    "normal_closure",
    "is_normal",
    "express",
    "subgroup_order",
    "SubgroupPresentation",
    "subgroup_presentation",
]


class Expr:
    """Lazy product expression over a list of input generators.

    Nodes never expand; ``evaluate`` walks the DAG once with memoization.
    """

    __slots__ = ("op", "a", "b")

    def __init__(self, op: str, a=None, b=None):
        self.op, self.a, self.b = op, a, b

    @staticmethod
    def gen(i: int) -> "Expr":
        return Expr("g", i)

    def __mul__(self, other: "Expr") -> "Expr":
        if self.op == "1":
            return other
        if other.op == "1":
            return self
        return Expr("*", self, other)

    def __pow__(self, n: int) -> "Expr":
        if n == 1 or self.op == "1":
            return self
        if n == 0:
            return ONE
        return Expr("^", self, n)

    def inverse(self) -> "Expr":
        return self ** -1

    def evaluate(self, P: NilpotentPresentation, gens: Sequence[Sequence[int]]) -> tuple[int, ...]:
        memo: dict[int, list[int]] = {}

        def ev(node: Expr) -> list[int]:
            hit = memo.get(id(node))
            if hit is not None:
                return hit
            if node.op == "1":
                v = [0] * P.m
            elif node.op == "g":
                v = list(gens[node.a])
            elif node.op == "*":
                v = P._mul(ev(node.a), ev(node.b))
            else:
                v = P._pow(ev(node.a), node.b)
            memo[id(node)] = v
            return v

        return tuple(ev(self))

    def to_binexp(self) -> BinExpWord:
        """Binary-exponent word over generator symbols ``1..n`` (shared subtrees stay shared)."""
        memo: dict[int, BinExpWord] = {}

        def tr(node: Expr) -> BinExpWord:
            hit = memo.get(id(node))
            if hit is not None:
                return hit
            if node.op == "1":
                w = BinExpWord(())
            elif node.op == "g":
                w = BinExpWord(((node.a + 1, 1),))
            elif node.op == "*":
                w = BinExpWord(((tr(node.a), 1), (tr(node.b), 1)))
            else:
                w = BinExpWord(((tr(node.a), node.b),))
            memo[id(node)] = w
            return w

        return tr(self)


def expression_program(exprs: Sequence[Expr]) -> tuple[list[str], list[str]]:
    """Shared straight-line listing of several expressions.

    Returns ``(lines, roots)``: ``lines`` define ``E1, E2, ...`` from inputs
    ``g1, g2, ...``; ``roots[k]`` names the symbol holding ``exprs[k]``.
    """
    names: dict[int, str] = {}
    lines: list[str] = []

    def nm(node: Expr) -> str:
        hit = names.get(id(node))
        if hit is not None:
            return hit
        if node.op == "1":
            rhs = "1"
        elif node.op == "g":
            names[id(node)] = f"g{node.a + 1}"
            return names[id(node)]
        elif node.op == "*":
            rhs = f"{nm(node.a)} {nm(node.b)}"
        else:
            rhs = f"{nm(node.a)}^{node.b}"
        lines.append(f"E{len(lines) + 1} = {rhs}")
        names[id(node)] = f"E{len(lines)}"
        return names[id(node)]

    roots = [nm(e) for e in exprs]
    return lines, roots


ONE = Expr("1")


@dataclass(frozen=True, eq=False)
class FullFormSequence:
    rows: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]
    exprs: tuple[Expr, ...] | None = field(default=None, repr=False)
    sources: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FullFormSequence):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    @property
    def is_trivial(self) -> bool:
        return not self.rows

    def pivot_entries(self) -> tuple[int, ...]:
        return tuple(r[p] for r, p in zip(self.rows, self.pivots))

    def expression(self, k: int) -> BinExpWord:
        if self.exprs is None:
            raise ValueError("this sequence carries no expressions")
        return self.exprs[k].to_binexp()


def _pivot(v: Sequence[int]) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    return -1


class _Builder:
    """Mutable echelon state used while closing a generating set."""

    def __init__(self, P: NilpotentPresentation, track: bool):
        self.P = P
        self.track = track
        self.rows: dict[int, tuple[list[int], Expr | None]] = {}
        self.queue: list[tuple[list[int], Expr | None]] = []
        self.version = 0

    def push(self, v, ex):
        if any(v):
            self.queue.append((list(v), ex))

    def _ex_mul(self, a, b):
        return a * b if self.track else None

    def _ex_pow(self, a, n):
        return a ** n if self.track else None

    def drain(self):
        P = self.P
        while self.queue:
            x, ex = self.queue.pop()
            while True:
                p = _pivot(x)
                if p < 0:
                    break
                o = P.orders[p]
                if p not in self.rows:
                    if o is None:
                        if x[p] < 0:
                            x, ex = P._inv(x), self._ex_pow(ex, -1)
                        self.rows[p] = (x, ex)
                        self.version += 1
                    else:
                        g, s, _ = xgcd(x[p], o)
                        if g != x[p]:
                            # x^s has pivot entry gcd(x_p, e); keep x for later sifting
                            self.queue.append((x, ex))
                            x, ex = P._pow(x, s % o), self._ex_pow(ex, s % o)
                        self.rows[p] = (x, ex)
                        self.version += 1
                        # pivot power closure
                        self.push(P._pow(x, o // x[p]), self._ex_pow(ex, o // x[p]))
                    break
                r, rex = self.rows[p]
                a, b = x[p], r[p]
                q = a // b
                if q:
                    x = P._mul(P._pow(r, -q), x)
                    ex = self._ex_mul(self._ex_pow(rex, -q), ex)
                if x[p] == 0:
                    continue
                # remainder in (0, b): x takes over the pivot, r is sifted again
                del self.rows[p]
                self.version += 1
                self.queue.append((r, rex))

    def close(self):
        P = self.P
        done: set = set()
        self.drain()
        while True:
            before = self.version
            items = [self.rows[p] for p in sorted(self.rows)]
            for i, (ri, ei) in enumerate(items):
                ti = tuple(ri)
                o = P.orders[_pivot(ri)]
                if o is not None and ("pow", ti) not in done:
                    done.add(("pow", ti))
                    k = o // ri[_pivot(ri)]
                    self.push(P._pow(ri, k), self._ex_pow(ei, k))
                for j in range(i):
                    rj, ej = items[j]
                    key = (ti, tuple(rj))
                    if key in done:
                        continue
                    done.add(key)
                    for sign in (1, -1):
                        y = rj if sign == 1 else P._inv(rj)
                        ey = ej if sign == 1 else self._ex_pow(ej, -1)
                        # [ri, y] = ri^-1 y^-1 ri y
                        c = P._mul(P._inv(P._mul(y, ri)), P._mul(ri, y))
                        if any(c):
                            ec = None
                            if self.track:
                                ec = (ey * ei).inverse() * (ei * ey)
                            self.push(c, ec)
                self.drain()
            if self.version == before and not self.queue:
                break

    def finish(self) -> FullFormSequence:
        P = self.P
        pivots = sorted(self.rows)
        rows = [list(self.rows[p][0]) for p in pivots]
        exprs = [self.rows[p][1] for p in pivots]
        # above-pivot reduction, left to right
        for i in range(len(rows)):
            for k in range(i + 1, len(rows)):
                pk = pivots[k]
                q = rows[i][pk] // rows[k][pk]
                if q:
                    rows[i] = P._mul(rows[i], P._pow(rows[k], -q))
                    if self.track:
                        exprs[i] = exprs[i] * exprs[k] ** -q
        return FullFormSequence(tuple(tuple(r) for r in rows), tuple(pivots),
                                tuple(exprs) if self.track else None)


def full_form(P: NilpotentPresentation, gens: Sequence[Sequence[int]], track: bool = True) -> FullFormSequence:
    """Full-form sequence of ``<gens>``; with ``track`` each row carries an
    expression in the input generators."""
    b = _Builder(P, track)
    canon = [P.canonical(g) for g in gens]
    for i, g in enumerate(canon):
        b.push(g, Expr.gen(i) if track else None)
    b.close()
    H = b.finish()
    if track:
        return FullFormSequence(H.rows, H.pivots, H.exprs, tuple(canon))
    return H


def membership(P: NilpotentPresentation, H: FullFormSequence, g: Sequence[int]) -> tuple[int, ...] | None:
    """Exponents ``b`` with ``g = h_1^b_1 ... h_s^b_s`` (canonical ranges) or ``None``."""
    x = list(g)
    betas = []
    k = 0
    s = len(H.rows)
    for p in range(P.m):
        if k < s and H.pivots[k] == p:
            b = H.rows[k][p]
            q, r = divmod(x[p], b)
            if r:
                return None
            betas.append(q)
            if q:
                x = P._mul(P._pow(H.rows[k], -q), x)
            k += 1
        elif x[p]:
            return None
    return tuple(betas)


def contains(P: NilpotentPresentation, H: FullFormSequence, g: Sequence[int]) -> bool:
    return membership(P, H, g) is not None


def express(P: NilpotentPresentation, H: FullFormSequence, betas: Sequence[int]) -> tuple[int, ...]:
    x = [0] * P.m
    for r, b in zip(H.rows, betas):
        if b:
            x = P._mul(x, P._pow(r, b))
    return tuple(x)


def is_subgroup(P: NilpotentPresentation, H: FullFormSequence, K: FullFormSequence) -> bool:
    """``H <= K``."""
    return all(membership(P, K, r) is not None for r in H.rows)


def join(P: NilpotentPresentation, H: FullFormSequence, K: FullFormSequence, track: bool = False) -> FullFormSequence:
    return full_form(P, list(H.rows) + list(K.rows), track)


def whole_group(P: NilpotentPresentation) -> FullFormSequence:
    return series_term(P, 1)


def trivial_subgroup(P: NilpotentPresentation) -> FullFormSequence:
    return FullFormSequence((), ())


def series_term(P: NilpotentPresentation, j: int) -> FullFormSequence:
    """Full form of ``Gamma_j``."""
    if j < 1:
        raise ValueError("series index starts at 1")
    rows, piv = [], []
    for i in range(P.m):
        if P.levels[i] >= j and P.orders[i] != 1:
            v = [0] * P.m
            v[i] = 1
            rows.append(tuple(v))
            piv.append(i)
    return FullFormSequence(tuple(rows), tuple(piv))


def intersect_series(P: NilpotentPresentation, H: FullFormSequence, j: int) -> FullFormSequence:
    keep = [k for k, p in enumerate(H.pivots) if P.levels[p] >= j]
    return FullFormSequence(tuple(H.rows[k] for k in keep), tuple(H.pivots[k] for k in keep))


def max_series_level(P: NilpotentPresentation, H: FullFormSequence) -> int:
    if not H.rows:
        raise ValueError("the trivial subgroup has no maximal series level")
    return P.levels[H.pivots[-1]]


def conjugate_subgroup(P: NilpotentPresentation, H: FullFormSequence, g: Sequence[int]) -> FullFormSequence:
    """``H^g``."""
    return full_form(P, [P.conjugate(r, g) for r in H.rows], track=False)


def normal_closure(P: NilpotentPresentation, gens: Sequence[Sequence[int]]) -> FullFormSequence:
    """Smallest normal subgroup containing ``gens``."""
    H = full_form(P, gens, track=False)
    conj = [P.generator(i) for i in range(P.m)] + [P.inverse(P.generator(i)) for i in range(P.m)]
    while True:
        extra = []
        for r in H.rows:
            for a in conj:
                c = P.conjugate(r, a)
                if membership(P, H, c) is None:
                    extra.append(c)
        if not extra:
            return H
        H = full_form(P, list(H.rows) + extra, track=False)


def is_normal(P: NilpotentPresentation, H: FullFormSequence, ambient: FullFormSequence | None = None) -> bool:
    conj = ambient.rows if ambient is not None else [P.generator(i) for i in range(P.m)]
    for r in H.rows:
        for a in conj:
            if membership(P, H, P.conjugate(r, a)) is None:
                return False
            if membership(P, H, P.conjugate(r, P.inverse(a))) is None:
                return False
    return True


def subgroup_order(P: NilpotentPresentation, H: FullFormSequence) -> int | None:
    n = 1
    for r, p in zip(H.rows, H.pivots):
        o = P.orders[p]
        if o is None:
            return None
        n *= o // r[p]
    return n


class SubgroupPresentation:
    """Consistent presentation of a subgroup on its full-form rows.

    ``target`` basis element ``i`` is ``H.rows[i]``; ``to_ambient`` and
    ``from_ambient`` translate coordinates.
    """

    def __init__(self, P: NilpotentPresentation, H: FullFormSequence):
        self.ambient = P
        self.subgroup = H
        s = len(H.rows)
        orders = []
        for r, p in zip(H.rows, H.pivots):
            o = P.orders[p]
            orders.append(None if o is None else o // r[p])
        conj = {}
        for j in range(s):
            for i in range(j):
                c = P.commutator(H.rows[j], H.rows[i])
                if any(c):
                    conj[(i, j)] = self._coords(c)
        powers = {}
        for i in range(s):
            if orders[i] is not None:
                powers[i] = self._coords(P.power(H.rows[i], orders[i]))
        levels = [P.levels[p] for p in H.pivots]
        self.target = NilpotentPresentation(orders, conj, powers, levels, max(P.c, 1) if s else P.c)
        # embed: subgroup generator i -> target unit vector; phi: length-one words
        self.embed = [self.target.generator(i) for i in range(s)]
        self.phi = [BinExpWord(((i + 1, 1),)) for i in range(s)]

    def _coords(self, g) -> tuple[int, ...]:
        b = membership(self.ambient, self.subgroup, g)
        if b is None:
            raise AssertionError("full-form sequence is not closed")
        return b

    def to_ambient(self, v: Sequence[int]) -> tuple[int, ...]:
        return express(self.ambient, self.subgroup, self.target.canonical(v))

    def from_ambient(self, g: Sequence[int]) -> tuple[int, ...] | None:
        return membership(self.ambient, self.subgroup, g)


def subgroup_presentation(P: NilpotentPresentation, H: FullFormSequence) -> SubgroupPresentation:
    return SubgroupPresentation(P, H)
