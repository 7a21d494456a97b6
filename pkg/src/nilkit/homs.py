"""Homomorphisms given on generators: kernel, preimage; centralizers and element conjugacy.

Kernel and preimage use the graph ``<(phi(k_i), k_i)>`` inside a direct
product with the codomain coordinates first: rows whose codomain block is
zero span the kernel, and sifting ``(h, 1)`` through the codomain pivots
yields a preimage.

Centralizers and conjugators are found one central-series level at a time.
``D_k`` (elements commuting with the inputs modulo ``Gamma_k``) maps
homomorphically to the section ``Gamma_k / Gamma_(k+1)`` by ``z -> [h, z]``;
its kernel is ``D_(k+1)`` and a preimage lifts a conjugator one level.
"""
from __future__ import annotations

from typing import Sequence

from .presentation import NilpotentPresentation
from .subgroups import (FullFormSequence, SubgroupPresentation, full_form, membership,
                        whole_group)

__all__ = [
    "direct_product",
    "Homomorphism",
    "kernel",
    "preimage",
    "section_presentation",
    "centralizer",
    "conjugacy_element",
    "conjugacy_with_centralizer",
]


def direct_product(P1: NilpotentPresentation, P2: NilpotentPresentation) -> NilpotentPresentation:
    """``P1 x P2`` with ``P1`` coordinates first; ``P2`` levels are shifted past ``P1``'s."""
    m1 = P1.m
    orders = list(P1.orders) + list(P2.orders)
    conj, powers = {}, {}
    for P, off in ((P1, 0), (P2, m1)):
        o, c, p, _, _ = P.relation_data()
        pad_l, pad_r = [0] * off, [0] * (P1.m + P2.m - off - P.m)
        for (i, j), t in c.items():
            conj[(i + off, j + off)] = pad_l + list(t) + pad_r
        for i, t in p.items():
            powers[i + off] = pad_l + list(t) + pad_r
    shift = P1.c
    levels = list(P1.levels) + [lv + shift for lv in P2.levels]
    return NilpotentPresentation(orders, conj, powers, levels, P1.c + P2.c)


class Homomorphism:
    """``phi: K -> G1`` given by images of generators of ``K <= G``."""

    def __init__(self, domain: NilpotentPresentation, gens: Sequence[Sequence[int]],
                 codomain: NilpotentPresentation, images: Sequence[Sequence[int]], check: bool = True):
        if len(gens) != len(images):
            raise ValueError("one image per generator is required")
        self.domain = domain
        self.codomain = codomain
        self.gens = [domain.canonical(g) for g in gens]
        self.images = [codomain.canonical(h) for h in images]
        self._graph = None
        self._rgraph = None
        self._kernel = None
        if check and not self.is_well_defined():
            raise ValueError("generator images do not define a homomorphism")

    @property
    def graph(self) -> tuple[NilpotentPresentation, FullFormSequence]:
        if self._graph is None:
            prod = direct_product(self.codomain, self.domain)
            pairs = [tuple(h) + tuple(k) for k, h in zip(self.gens, self.images)]
            self._graph = (prod, full_form(prod, pairs, track=False))
        return self._graph

    @property
    def reverse_graph(self) -> tuple[NilpotentPresentation, FullFormSequence]:
        if self._rgraph is None:
            prod = direct_product(self.domain, self.codomain)
            pairs = [tuple(k) + tuple(h) for k, h in zip(self.gens, self.images)]
            self._rgraph = (prod, full_form(prod, pairs, track=False))
        return self._rgraph

    def is_well_defined(self) -> bool:
        # the graph meets 1 x G1 trivially exactly when phi is a function
        _, R = self.reverse_graph
        m = self.domain.m
        return all(p < m for p in R.pivots)

    def domain_subgroup(self) -> FullFormSequence:
        return full_form(self.domain, self.gens, track=False)

    def image(self) -> FullFormSequence:
        return full_form(self.codomain, self.images, track=False)

    def kernel(self) -> FullFormSequence:
        if self._kernel is None:
            _, Gr = self.graph
            m1 = self.codomain.m
            rows = [r[m1:] for r, p in zip(Gr.rows, Gr.pivots) if p >= m1]
            self._kernel = full_form(self.domain, rows, track=False)
        return self._kernel

    @staticmethod
    def _sift_block(prod, S, x, limit):
        """Sift ``x`` through rows pivoting before ``limit``; ``None`` if it sticks."""
        x = list(x)
        k = 0
        for p in range(limit):
            if k < len(S.rows) and S.pivots[k] == p:
                b = S.rows[k][p]
                q, r = divmod(x[p], b)
                if r:
                    return None
                if q:
                    x = prod._mul(prod._pow(S.rows[k], -q), x)
                k += 1
            elif x[p]:
                return None
        return x

    def preimage(self, h: Sequence[int]) -> tuple[int, ...] | None:
        """Some ``k`` in ``K`` with ``phi(k) = h``; ``None`` when ``h`` is not in the image."""
        prod, Gr = self.graph
        m1 = self.codomain.m
        h = self.codomain.canonical(h)
        x = self._sift_block(prod, Gr, tuple(h) + (0,) * self.domain.m, m1)
        if x is None:
            return None
        k = self.domain.inverse(x[m1:])
        if membership(prod, Gr, tuple(h) + tuple(k)) is None:
            raise AssertionError("preimage failed verification")
        return k

    def __call__(self, k: Sequence[int]) -> tuple[int, ...]:
        prod, R = self.reverse_graph
        m = self.domain.m
        x = self._sift_block(prod, R, tuple(self.domain.canonical(k)) + (0,) * self.codomain.m, m)
        if x is None:
            raise ValueError("element is outside the domain subgroup")
        return self.codomain.inverse(x[m:])


def kernel(phi: Homomorphism) -> FullFormSequence:
    return phi.kernel()


def preimage(phi: Homomorphism, h: Sequence[int]) -> tuple[int, ...] | None:
    return phi.preimage(h)


# ----------------------------------------------------------------------
# central sections


def section_presentation(P: NilpotentPresentation, k: int, copies: int = 1):
    """Abelian presentation of ``(Gamma_k / Gamma_(k+1))^copies`` and its column list."""
    cols = [i for i in range(P.m) if P.levels[i] == k]
    n = len(cols)
    orders, powers = [], {}
    for t in range(copies):
        for a, i in enumerate(cols):
            o = P.orders[i]
            orders.append(o)
            if o is not None:
                tail = [0] * (n * copies)
                pt = P.power_tail(i)
                for b, c in enumerate(cols):
                    tail[t * n + b] = pt[c]
                powers[t * n + a] = tail
    S = NilpotentPresentation(orders, {}, powers, [1] * (n * copies), 1)
    return S, cols


def _section_coords(cols, g) -> tuple[int, ...]:
    return tuple(g[c] for c in cols)


def _in_level(P: NilpotentPresentation, g, k: int) -> bool:
    return all(not x or P.levels[i] >= k for i, x in enumerate(g))


def _lift_chain(P: NilpotentPresentation, targets: Sequence, g_list: Sequence | None, D: FullFormSequence):
    """Shared level-by-level lifting.

    ``targets`` are the elements ``h`` whose centralizer is sought. With
    ``g_list`` a conjugator ``x`` with ``g_i^x = h_i`` is searched as well.
    Returns ``(x or None, centralizer)``; ``x`` is ``None`` when no conjugator exists.
    """
    x = P.identity
    n = len(targets)
    if g_list is not None:
        for g, h in zip(g_list, targets):
            if not _in_level(P, P.multiply(P.inverse(h), g), 2):
                return None, None
    for k in range(2, P.c + 1):
        S, cols = section_presentation(P, k, n)
        if not cols:
            continue
        if not D.rows:
            imgs = []
        else:
            imgs = []
            for z in D.rows:
                v = []
                for h in targets:
                    v.extend(_section_coords(cols, P.commutator(h, z)))
                imgs.append(v)
        phi = Homomorphism(P, D.rows, S, imgs, check=False)
        if g_list is not None:
            want = []
            for g, h in zip(g_list, targets):
                d = P.multiply(P.inverse(h), P.conjugate(g, x))
                want.extend(_section_coords(cols, P.inverse(d)))
            z = phi.preimage(want) if D.rows else (None if any(S.canonical(want)) else P.identity)
            if z is None:
                return None, None
            x = P.multiply(x, z)
        D = phi.kernel() if D.rows else D
    if g_list is not None:
        for g, h in zip(g_list, targets):
            if P.conjugate(g, x) != tuple(h):
                raise AssertionError("conjugator failed verification")
    return x, D


def centralizer(P: NilpotentPresentation, gens: Sequence[Sequence[int]],
                ambient: FullFormSequence | None = None) -> FullFormSequence:
    """Full form of ``{x in ambient : [x, g] = 1 for all g in gens}``."""
    gens = [P.canonical(g) for g in gens]
    if ambient is None or ambient == whole_group(P):
        _, C = _lift_chain(P, gens, None, whole_group(P))
    else:
        inside = [membership(P, ambient, g) for g in gens]
        if all(b is not None for b in inside):
            # work in the ambient subgroup's own presentation
            SP = SubgroupPresentation(P, ambient)
            _, Cs = _lift_chain(SP.target, inside, None, whole_group(SP.target))
            C = full_form(P, [SP.to_ambient(r) for r in Cs.rows], track=False)
        else:
            from .cosets import subgroup_intersection
            C = subgroup_intersection(P, centralizer(P, gens), ambient)
    for r in C.rows:
        for g in gens:
            if any(P.commutator(r, g)):
                raise AssertionError("centralizer row fails to commute")
    return C


def conjugacy_with_centralizer(P: NilpotentPresentation, g: Sequence[int], h: Sequence[int]):
    """``(x, C_G(h))`` with ``g^x = h``, or ``(None, None)``."""
    g, h = P.canonical(g), P.canonical(h)
    return _lift_chain(P, [h], [g], whole_group(P))


def conjugacy_element(P: NilpotentPresentation, g: Sequence[int], h: Sequence[int]) -> tuple[int, ...] | None:
    """Some ``x`` with ``x^-1 g x = h``, or ``None``."""
    return conjugacy_with_centralizer(P, g, h)[0]
