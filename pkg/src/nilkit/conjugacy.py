"""Conjugacy of commuting tuples, of subgroups (with normalizers) and of arbitrary tuples."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .builder import QuotientPresentation
from .cosets import coset_intersection
from .homs import Homomorphism, conjugacy_with_centralizer
from .presentation import NilpotentPresentation
from .subgroups import (FullFormSequence, SubgroupPresentation, conjugate_subgroup, full_form,
                        intersect_series, max_series_level, membership, series_term, whole_group)

__all__ = [
    "ConjugacyOutcome",
    "conjugate_commuting_tuples",
    "subgroup_conjugacy",
    "normalizer",
    "conjugate_tuples",
    "RecursionStats",
]


@dataclass(frozen=True)
class ConjugacyOutcome:
    """``witness`` conjugates the first argument onto the second; ``stabilizer`` is the
    centralizer (tuples) or normalizer (subgroups) of the second argument."""

    witness: tuple[int, ...] | None
    stabilizer: FullFormSequence | None

    @property
    def conjugate(self) -> bool:
        return self.witness is not None

    def __bool__(self) -> bool:
        return self.conjugate


NOT_CONJUGATE = ConjugacyOutcome(None, None)


class RecursionStats:
    """Counts nontrivial levels entered by :func:`subgroup_conjugacy` (instrumentation)."""

    def __init__(self):
        self.depth = 0
        self.max_depth = 0


def _check_commuting(P, T, name):
    for i in range(len(T)):
        for j in range(i):
            if any(P.commutator(T[i], T[j])):
                raise ValueError(f"tuple {name} is not pairwise commuting")


def _cct(Q: NilpotentPresentation, A, B) -> ConjugacyOutcome:
    if not A:
        return ConjugacyOutcome(Q.identity, whole_group(Q))
    x, C = conjugacy_with_centralizer(Q, A[0], B[0])
    if x is None:
        return NOT_CONJUGATE
    if len(A) == 1:
        return ConjugacyOutcome(x, C)
    SP = SubgroupPresentation(Q, C)
    A2 = [SP.from_ambient(Q.conjugate(a, x)) for a in A[1:]]
    B2 = [SP.from_ambient(b) for b in B[1:]]
    if any(v is None for v in A2 + B2):
        raise AssertionError("tuple entries left the centralizer")
    r = _cct(SP.target, A2, B2)
    if not r:
        return NOT_CONJUGATE
    y = SP.to_ambient(r.witness)
    stab = full_form(Q, [SP.to_ambient(row) for row in r.stabilizer.rows], track=False)
    return ConjugacyOutcome(Q.multiply(x, y), stab)


def conjugate_commuting_tuples(P: NilpotentPresentation, A: Sequence, B: Sequence,
                               ambient: FullFormSequence | None = None, verify: bool = True) -> ConjugacyOutcome:
    """``g`` in ``ambient`` with ``a_i^g = b_i`` for pairwise commuting tuples, plus ``C(B)``."""
    if len(A) != len(B):
        raise ValueError("tuples must have equal length")
    A = [P.canonical(a) for a in A]
    B = [P.canonical(b) for b in B]
    _check_commuting(P, A, "A")
    _check_commuting(P, B, "B")
    if ambient is None or ambient == whole_group(P):
        res = _cct(P, A, B)
    else:
        SP = SubgroupPresentation(P, ambient)
        A2 = [SP.from_ambient(a) for a in A]
        B2 = [SP.from_ambient(b) for b in B]
        if any(v is None for v in A2 + B2):
            raise ValueError("tuple entries must lie in the ambient subgroup")
        r = _cct(SP.target, A2, B2)
        if not r:
            return NOT_CONJUGATE
        res = ConjugacyOutcome(SP.to_ambient(r.witness),
                               full_form(P, [SP.to_ambient(v) for v in r.stabilizer.rows], track=False))
    if verify and res:
        for a, b in zip(A, B):
            if P.conjugate(a, res.witness) != b:
                raise AssertionError("tuple conjugator failed verification")
        for r in res.stabilizer.rows:
            if any(any(P.commutator(r, b)) for b in B):
                raise AssertionError("centralizer row failed verification")
    return res


def _subconj(Q: NilpotentPresentation, H: FullFormSequence, K: FullFormSequence,
             stats: RecursionStats) -> ConjugacyOutcome:
    if H.is_trivial or K.is_trivial:
        if H.is_trivial and K.is_trivial:
            return ConjugacyOutcome(Q.identity, whole_group(Q))
        return NOT_CONJUGATE
    stats.depth += 1
    stats.max_depth = max(stats.max_depth, stats.depth)
    try:
        j = max_series_level(Q, H)
        if j != max_series_level(Q, K):
            return NOT_CONJUGATE
        Hj = intersect_series(Q, H, j)
        Kj = intersect_series(Q, K, j)
        bar = QuotientPresentation(Q, series_term(Q, j + 1), check_normal=False)
        if bar.project_subgroup(Hj) != bar.project_subgroup(Kj):
            return NOT_CONJUGATE
        phi = Homomorphism(Q, Kj.rows, bar.target, [bar.project(k) for k in Kj.rows], check=False)
        ks = []
        for h in Hj.rows:
            k = phi.preimage(bar.project(h))
            if k is None:
                raise AssertionError("aligned generator has no preimage")
            ks.append(k)
        r = _cct(Q, list(Hj.rows), ks)
        if not r:
            return NOT_CONJUGATE
        x, Y = r.witness, r.stabilizer
        Hx = conjugate_subgroup(Q, H, x)
        SP = SubgroupPresentation(Q, Y)
        N = SP.target

        def into(rows):
            out = []
            for v in rows:
                w = SP.from_ambient(v)
                if w is None:
                    raise AssertionError("subgroup escaped the normalizer of its top layer")
                out.append(w)
            return out

        KjN = full_form(N, into(Kj.rows), track=False)
        hat = QuotientPresentation(N, KjN, check_normal=False)
        Hhat = full_form(hat.target, [hat.project(v) for v in into(Hx.rows)], track=False)
        Khat = full_form(hat.target, [hat.project(v) for v in into(K.rows)], track=False)
        r2 = _subconj(hat.target, Hhat, Khat, stats)
        if not r2:
            return NOT_CONJUGATE
        y = SP.to_ambient(hat.lift(r2.witness))
        zs = [SP.to_ambient(hat.lift(z)) for z in r2.stabilizer.rows] + list(Kj.rows)
        return ConjugacyOutcome(Q.multiply(x, y), full_form(Q, zs, track=False))
    finally:
        stats.depth -= 1


def subgroup_conjugacy(P: NilpotentPresentation, H: FullFormSequence, K: FullFormSequence,
                       verify: bool = True, stats: RecursionStats | None = None) -> ConjugacyOutcome:
    """``g`` with ``H^g = K`` together with ``N_G(K)``, or not conjugate."""
    stats = stats if stats is not None else RecursionStats()
    res = _subconj(P, H, K, stats)
    if stats.max_depth > max(P.c, 1):
        raise AssertionError("subgroup conjugacy recursed deeper than the class")
    if verify and res:
        g = res.witness
        if conjugate_subgroup(P, H, g) != K:
            raise AssertionError("subgroup conjugator failed verification")
        gi = P.inverse(g)
        for z in res.stabilizer.rows:
            zi = P.inverse(z)
            for k in K.rows:
                if membership(P, K, P.conjugate(k, z)) is None or membership(P, K, P.conjugate(k, zi)) is None:
                    raise AssertionError("normalizer row failed verification")
        for k in K.rows:
            if membership(P, H, P.conjugate(k, gi)) is None:
                raise AssertionError("inverse conjugation failed verification")
    return res


def normalizer(P: NilpotentPresentation, K: FullFormSequence) -> FullFormSequence:
    return subgroup_conjugacy(P, K, K).stabilizer


def conjugate_tuples(P: NilpotentPresentation, A: Sequence, B: Sequence, verify: bool = True) -> ConjugacyOutcome:
    """Simultaneous conjugacy of arbitrary tuples through iterated coset intersection."""
    if len(A) != len(B):
        raise ValueError("tuples must have equal length")
    A = [P.canonical(a) for a in A]
    B = [P.canonical(b) for b in B]
    rep, sub = P.identity, whole_group(P)
    for a, b in zip(A, B):
        x, C = conjugacy_with_centralizer(P, a, b)
        if x is None:
            return NOT_CONJUGATE
        r = coset_intersection(P, rep, sub, x, C)
        if r.empty:
            return NOT_CONJUGATE
        rep, sub = r.representative, r.intersection
    res = ConjugacyOutcome(rep, sub)
    if verify:
        for a, b in zip(A, B):
            if P.conjugate(a, rep) != b:
                raise AssertionError("tuple conjugator failed verification")
            for z in sub.rows:
                if any(P.commutator(z, b)):
                    raise AssertionError("joint centralizer row failed verification")
    return res
