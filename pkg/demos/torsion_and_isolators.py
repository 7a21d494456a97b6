"""Torsion subgroups and isolators, checked against brute force where possible."""
from nilkit import oracle
from nilkit.builder import build_nilpotent_presentation, parse_finite_presentation
from nilkit.families import heisenberg
from nilkit.presentation import NilpotentPresentation
from nilkit.subgroups import full_form
from nilkit.torsion import isolator, power_witness, torsion_subgroup

# Heisenberg group with the centre reduced mod 2: infinite, but with torsion.
P = NilpotentPresentation([None, None, 2], {(0, 1): {2: -1}}, {2: {}})
T = torsion_subgroup(P)
print("H3 with a3^2 = 1: torsion", T.subgroup.rows, "of order", T.order)

# Building a presentation from relators, then reading off torsion.
F = parse_finite_presentation("group x y | x^4 y^-6, [x,y]")
Q = build_nilpotent_presentation(F).target
print("\n<x, y | x^4 = y^6, [x,y]>: relative orders", Q.orders)
print("  torsion order", torsion_subgroup(Q).order)

# The isolator of <a1^2, a2^2> in H3 is everything; the witnesses show why.
H3 = heisenberg()
H = full_form(H3, [(2, 0, 0), (0, 2, 0)])
print("\nIs(<a1^2, a2^2>) in H3:", isolator(H3, H).rows)
for name, g in (("a1", (1, 0, 0)), ("a2", (0, 1, 0)), ("a3", (0, 0, 1))):
    print(f"  least n with {name}^n in H: {power_witness(H3, H, g, 16)}")

# In a finite group the isolator of a subgroup is everything; compare with brute force.
G = heisenberg(3)
table = oracle.enumerate_group(G)
S = full_form(G, [(1, 1, 0)])
I = isolator(G, S)
print("\nH3 mod 3: isolator of <a1 a2> has", len(oracle.brute_closure(table, I.rows)), "elements;",
      "brute force agrees:", oracle.brute_closure(table, I.rows) == oracle.brute_isolator(table, oracle.brute_closure(table, S.rows)))
