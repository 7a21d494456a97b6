"""A walk through the integral Heisenberg group.

Run with ``python demos/heisenberg_tour.py``.
"""
from nilkit.conjugacy import normalizer, subgroup_conjugacy
from nilkit.cosets import coset_intersection
from nilkit.families import heisenberg
from nilkit.homs import centralizer, conjugacy_element
from nilkit.subgroups import conjugate_subgroup, full_form, membership

P = heisenberg()
a1, a2, a3 = P.generator(0), P.generator(1), P.generator(2)

print("Collection turns any word into coordinates (x, y, z).")
print("  a2 a1       ->", P.multiply(a2, a1))
print("  (a1 a2)^10  ->", P.power(P.multiply(a1, a2), 10))
print("  [a1, a2]    ->", P.commutator(a1, a2))

# Subgroups are stored as full-form sequences: an echelon basis that
# turns membership into sifting.
H = full_form(P, [(2, 0, 0), (0, 3, 0)])
print("\nH = <a1^2, a2^3> has full form", H.rows)
print("  is a3^6 in H?", membership(P, H, (0, 0, 6)) is not None)
print("  is a3^3 in H?", membership(P, H, (0, 0, 3)) is not None)

print("\nElement conjugacy: a1 ~ a1 a3^7 via", conjugacy_element(P, a1, (1, 0, 7)))
print("  a1 and a3 are conjugate?", conjugacy_element(P, a1, a3) is not None)
print("  centralizer of a1:", centralizer(P, [a1]).rows)

K = conjugate_subgroup(P, H, (5, -2, 1))
res = subgroup_conjugacy(P, H, K)
print("\nH^g for g = (5,-2,1) has full form", K.rows)
print("  subgroup conjugacy finds witness", res.witness)
print("  normalizer of <a1>:", normalizer(P, full_form(P, [a1])).rows)

r = coset_intersection(P, a3, full_form(P, [a1, (0, 0, 2)]), P.identity, full_form(P, [a2, (0, 0, 3)]))
print("\na3 <a1, a3^2>  meets  <a2, a3^3>  in", r.representative, "*", r.intersection.rows)
