"""Torsion subgroup through the tower ``T_i`` of central torsion, and isolators
through the normalizer tower ``N^0 = H, N^i = N_G(N^(i-1))``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .builder import QuotientPresentation
from .conjugacy import normalizer
from .homs import centralizer
from .intmath import inverse_unimodular, smith_normal_form
from .presentation import NilpotentPresentation
from .subgroups import (FullFormSequence, SubgroupPresentation, full_form, membership,
                        trivial_subgroup, whole_group)

__all__ = ["TorsionData", "torsion_subgroup", "torsion_order", "isolator", "IsolatorStats",
           "power_witness", "abelian_torsion"]


@dataclass(frozen=True)
class TorsionData:
    subgroup: FullFormSequence
    presentation: SubgroupPresentation
    order: int
    iterations: int


def abelian_torsion(P: NilpotentPresentation, A: FullFormSequence) -> FullFormSequence:
    """Torsion part of an abelian subgroup ``A``, via Smith normal form of its relations."""
    if not A.rows:
        return A
    SP = SubgroupPresentation(P, A)
    S = SP.target
    k = S.m
    rel = []
    for i in range(k):
        o = S.orders[i]
        if o is None:
            continue
        row = [-x for x in S.power_tail(i)]
        row[i] += o
        rel.append(row)
    if not rel:
        return trivial_subgroup(P)
    D, _, V = smith_normal_form(rel, k)
    Vinv = inverse_unimodular(V)
    gens = []
    for j in range(min(len(D), k)):
        if D[j][j] > 1:
            gens.append(SP.to_ambient(S.canonical(Vinv[j])))
    return full_form(P, gens, track=False)


def _order(P: NilpotentPresentation, T: FullFormSequence) -> int:
    n = 1
    for r, p in zip(T.rows, T.pivots):
        o = P.orders[p]
        if o is None:
            raise AssertionError("torsion row pivots on an infinite column")
        n *= o // r[p]
    return n


def torsion_subgroup(P: NilpotentPresentation) -> TorsionData:
    """Full form, presentation and order of the torsion subgroup."""
    T = trivial_subgroup(P)
    steps = 0
    while True:
        quo = QuotientPresentation(P, T, check_normal=False)
        Q = quo.target
        Z = centralizer(Q, Q.generators())
        tz = abelian_torsion(Q, Z)
        new = full_form(P, list(T.rows) + [quo.lift(r) for r in tz.rows], track=False)
        if new == T:
            break
        T = new
        steps += 1
        if steps > max(P.c, 1):
            raise AssertionError("torsion tower exceeded the class bound")
    order = _order(P, T)
    for r in T.rows:
        if any(P.power(r, order)):
            raise AssertionError("torsion generator has infinite order")
    return TorsionData(T, SubgroupPresentation(P, T), order, steps)


def torsion_order(P: NilpotentPresentation) -> int:
    return torsion_subgroup(P).order


class IsolatorStats:
    def __init__(self):
        self.tower: list[FullFormSequence] = []


def isolator(P: NilpotentPresentation, H: FullFormSequence, stats: IsolatorStats | None = None) -> FullFormSequence:
    """Full form of ``{g : g^n in H for some n != 0}``."""
    G = whole_group(P)
    tower = [H]
    while tower[-1] != G:
        nxt = normalizer(P, tower[-1])
        if nxt == tower[-1]:
            raise AssertionError("normalizer tower stalled below the whole group")
        tower.append(nxt)
        if len(tower) - 1 > max(P.c, 1):
            raise AssertionError("normalizer tower longer than the class")
    if stats is not None:
        stats.tower = tower
    Y = H
    for i in range(1, len(tower)):
        prev, cur = tower[i - 1], tower[i]
        SPi = SubgroupPresentation(P, cur)
        inner = full_form(SPi.target, [SPi.from_ambient(r) for r in prev.rows], track=False)
        q1 = QuotientPresentation(SPi.target, inner)
        T1 = torsion_subgroup(q1.target).subgroup
        Zi = full_form(P, list(prev.rows) + [SPi.to_ambient(q1.lift(t)) for t in T1.rows], track=False)
        SPz = SubgroupPresentation(P, Zi)
        ysub = full_form(SPz.target, [SPz.from_ambient(r) for r in Y.rows], track=False)
        q2 = QuotientPresentation(SPz.target, ysub)
        T2 = torsion_subgroup(q2.target).subgroup
        Y = full_form(P, list(Y.rows) + [SPz.to_ambient(q2.lift(t)) for t in T2.rows], track=False)
    for r in H.rows:
        if membership(P, Y, r) is None:
            raise AssertionError("isolator lost a generator of H")
    return Y


def power_witness(P: NilpotentPresentation, H: FullFormSequence, g: Sequence[int], bound: int) -> int | None:
    """Least ``1 <= n <= bound`` with ``g^n`` in ``H``."""
    x = P.identity
    for n in range(1, bound + 1):
        x = P.multiply(x, g)
        if membership(P, H, x) is not None:
            return n
    return None
