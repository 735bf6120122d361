"""
Negation and double negation on lower sets
==========================================

The complement ¬I keeps the elements whose only predecessor in I is bottom.
On an atomic poset, ¬¬I is determined by which atoms I contains.
"""
import numpy as np

from omltopo import FinitePoset, LowerSet, closure_negneg, complement_neg, gen_boolean, smashed_product

# the boolean algebra on three atoms, viewed as a plain poset
lat = gen_boolean(3)
poset = FinitePoset.from_oml(lat)
names = lat.names

ideal = poset.down_closure([lat.index("p1"), lat.index("p2")])
print("I    =", sorted(names[x] for x in ideal))
print("¬I   =", sorted(names[x] for x in complement_neg(ideal)))

# ¬¬I contains p1+p2 even though I does not: all of its atoms are in I
print("¬¬I  =", sorted(names[x] for x in closure_negneg(ideal)))
print("¬¬¬I == ¬I:", complement_neg(closure_negneg(ideal)) == complement_neg(ideal))

# a hand-built poset: bottom, two atoms, and a chain above one of them
order = np.eye(5, dtype=bool)
for lo, hi in [(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (3, 4)]:
    order[lo, hi] = True
chain = FinitePoset(order)
print("atoms of the chain poset:", chain.atoms)
j = LowerSet(chain, chain.mask([0, 1]))
print("closure of {0,1}:", sorted(closure_negneg(j)))

# the smashed product pairs nonzero elements and keeps a single bottom
sp = smashed_product(lat)
print("|L^#2| for B3:", sp.n, "= (8-1)^2 + 1")
