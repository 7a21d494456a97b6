"""Intersection of cosets ``g1 H`` and ``g2 K`` by induction on the class.

Abelian groups are handled through ``<H, K>`` membership and the kernel of
``Z^n -> G/K``. Otherwise the problem is solved modulo the last nontrivial
series term ``Gamma_c`` (which is central) and corrected inside ``Gamma_c``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .builder import QuotientPresentation
from .homs import Homomorphism
from .presentation import NilpotentPresentation
from .subgroups import (FullFormSequence, SubgroupPresentation, full_form, intersect_series,
                        membership, series_term)

__all__ = ["CosetIntersection", "coset_intersection", "subgroup_intersection"]


@dataclass(frozen=True)
class CosetIntersection:
    """``representative * intersection`` when nonempty; both ``None`` when empty."""

    representative: tuple[int, ...] | None
    intersection: FullFormSequence | None

    @property
    def empty(self) -> bool:
        return self.representative is None

    def __bool__(self) -> bool:
        return not self.empty


EMPTY = CosetIntersection(None, None)


def _free_abelian(n: int) -> NilpotentPresentation:
    return NilpotentPresentation([None] * n, {}, {}, [1] * n, 1)


def _unit(n: int, i: int) -> tuple[int, ...]:
    v = [0] * n
    v[i] = 1
    return tuple(v)


def _top_level(P: NilpotentPresentation) -> int:
    return max((lv for lv, o in zip(P.levels, P.orders) if o != 1), default=0)


def _abelian_case(P, g1, H, g2, K) -> CosetIntersection:
    n = len(H.rows)
    J = full_form(P, list(H.rows) + list(K.rows), track=True)
    d = P.multiply(P.inverse(g2), g1)
    betas = membership(P, J, d)
    if betas is None:
        return EMPTY
    # d = h k; the H-part is read off the row expressions with K's rows set to 1
    src = list(H.rows) + [P.identity] * len(K.rows)
    h = P.identity
    for row_expr, b in zip(J.exprs, betas):
        if b:
            h = P.multiply(h, P.power(row_expr.evaluate(P, src), b))
    rep = P.multiply(g1, P.inverse(h))
    # H meet K = phi(ker(Z^n -> G/K))
    quo = QuotientPresentation(P, K, check_normal=False)
    Zn = _free_abelian(n)
    phi = Homomorphism(Zn, [_unit(n, i) for i in range(n)], quo.target,
                       [quo.project(r) for r in H.rows], check=False)
    ker = phi.kernel()
    inter = []
    for p in ker.rows:
        x = P.identity
        for r, a in zip(H.rows, p):
            if a:
                x = P.multiply(x, P.power(r, a))
        inter.append(x)
    return CosetIntersection(rep, full_form(P, inter, track=False))


def _intersect(P: NilpotentPresentation, g1, H: FullFormSequence, g2, K: FullFormSequence) -> CosetIntersection:
    c = _top_level(P)
    if c <= 1 or P.is_abelian():
        return _abelian_case(P, g1, H, g2, K)
    Gc = series_term(P, c)
    bar = QuotientPresentation(P, Gc, check_normal=False)
    Q = bar.target
    rec = _intersect(Q, bar.project(g1), bar.project_subgroup(H), bar.project(g2), bar.project_subgroup(K))
    if rec.empty:
        return EMPTY
    gamma = rec.representative
    phiH = Homomorphism(P, H.rows, Q, [bar.project(r) for r in H.rows], check=False)
    phiK = Homomorphism(P, K.rows, Q, [bar.project(r) for r in K.rows], check=False)
    x1 = phiH.preimage(Q.multiply(Q.inverse(bar.project(g1)), gamma))
    x2 = phiK.preimage(Q.multiply(Q.inverse(bar.project(g2)), gamma))
    if x1 is None or x2 is None:
        raise AssertionError("coset representative has no preimage")
    gp = P.multiply(g1, x1)
    c0 = P.multiply(P.inverse(gp), P.multiply(g2, x2))
    if membership(P, Gc, c0) is None:
        raise AssertionError("correction term is outside the last series term")
    u_pre, v_pre = [], []
    for w in rec.intersection.rows:
        u, v = phiH.preimage(w), phiK.preimage(w)
        if u is None or v is None:
            raise AssertionError("intersection generator has no preimage")
        u_pre.append(u)
        v_pre.append(v)
    LH = full_form(P, u_pre + list(intersect_series(P, H, c).rows), track=False)
    LK = full_form(P, v_pre + list(intersect_series(P, K, c).rows), track=False)
    top_h = [r for r, p in zip(LH.rows, LH.pivots) if P.levels[p] < c]
    ys = [r for r, p in zip(LH.rows, LH.pivots) if P.levels[p] >= c]
    top_k = [r for r, p in zip(LK.rows, LK.pivots) if P.levels[p] < c]
    zs = [r for r, p in zip(LK.rows, LK.pivots) if P.levels[p] >= c]
    if len(top_h) != len(top_k):
        raise AssertionError("the two sequences disagree above the last series term")
    cs = []
    for u, v in zip(top_h, top_k):
        ci = P.multiply(P.inverse(v), u)
        if membership(P, Gc, ci) is None:
            raise AssertionError("row difference is outside the last series term")
        cs.append(ci)
    n, t = len(top_h), len(ys)
    # abelian bookkeeping inside Gamma_c modulo <z>
    GcP = SubgroupPresentation(P, Gc)
    A = GcP.target
    Zsub = full_form(A, [GcP.from_ambient(z) for z in zs], track=False)
    mod = QuotientPresentation(A, Zsub, check_normal=False)
    Zn = _free_abelian(n + t)
    psi = Homomorphism(Zn, [_unit(n + t, i) for i in range(n + t)], mod.target,
                       [mod.project(GcP.from_ambient(e)) for e in cs + ys], check=False)
    pre = psi.preimage(mod.project(GcP.from_ambient(c0)))
    if pre is None:
        return EMPTY
    gens = top_h + ys

    def theta(vec):
        x = P.identity
        for r, a in zip(gens, vec):
            if a:
                x = P.multiply(x, P.power(r, a))
        return x

    rep = P.multiply(gp, theta(pre))
    inter = full_form(P, [theta(p) for p in psi.kernel().rows], track=False)
    return CosetIntersection(rep, inter)


def coset_intersection(P: NilpotentPresentation, g1: Sequence[int], H: FullFormSequence,
                       g2: Sequence[int], K: FullFormSequence, verify: bool = True) -> CosetIntersection:
    """``g1 H`` meet ``g2 K`` as ``representative * (H meet K)``, or empty."""
    g1, g2 = P.canonical(g1), P.canonical(g2)
    res = _intersect(P, g1, H, g2, K)
    if verify and not res.empty:
        g = res.representative
        if membership(P, H, P.multiply(P.inverse(g1), g)) is None or \
                membership(P, K, P.multiply(P.inverse(g2), g)) is None:
            raise AssertionError("coset representative failed verification")
        for r in res.intersection.rows:
            if membership(P, H, r) is None or membership(P, K, r) is None:
                raise AssertionError("intersection generator failed verification")
    return res


def subgroup_intersection(P: NilpotentPresentation, H: FullFormSequence, K: FullFormSequence) -> FullFormSequence:
    return coset_intersection(P, P.identity, H, P.identity, K).intersection
