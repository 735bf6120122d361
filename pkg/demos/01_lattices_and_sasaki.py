"""
Finite orthomodular lattices and the Sasaki projection
======================================================

Build a few small lattices, look at their atoms, and watch validation
reject the benzene ring O6, which is orthocomplemented but not orthomodular.
"""
from pathlib import Path

from omltopo import NotOrthomodular, gen_boolean, gen_mo, gen_product, validate
from omltopo.io import read_spec, to_dot

# MO2: two orthogonal pairs of atoms sharing a top and a bottom
mo2 = gen_mo(2)
print("MO2 elements:", mo2.names)
print("atoms:", [mo2.names[a] for a in mo2.atoms])

# x & y = y ∧ (x ∨ y⊥).  Projecting atom a onto atom b (not orthogonal to it)
# lands on b itself, which is the atom-projection property in miniature.
a, b = mo2.index("a"), mo2.index("b")
print("a & b =", mo2.name(mo2.sasaki(a, b)))
print("a & a' =", mo2.name(mo2.sasaki(a, mo2.index("a'"))))
print("atom projection holds:", mo2.has_atom_projection())

# Products are orthomodular too; B2 × B2 is the 16-element boolean algebra in disguise
sq = gen_product(gen_boolean(2), gen_boolean(2))
print("B2×B2 has", sq.n, "elements and", len(sq.atoms), "atoms")

# O6 passes the ortholattice stage but fails orthomodularity, with a witness pair
fixture = Path(__file__).resolve().parent.parent / "fixtures" / "o6.json"
try:
    validate(read_spec(fixture))
except NotOrthomodular as exc:
    print("O6 rejected:", exc, "witness", exc.pair)

# Hasse diagram for graphviz
print(to_dot(gen_boolean(2)))
