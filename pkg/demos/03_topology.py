"""
Relations, balls and the induced topology
=========================================

Compute R_0 ⊆ R_1 ⊆ ... up to its fixpoint, the balls it induces, and ask
which subsets are open.  On every finite lattice tried here the chain is
constant and every point is isolated.
"""
from omltopo import gen_boolean, gen_greechie, gen_mo, is_open, r_general_profile, topology_report
from omltopo.topology import engine

b3 = gen_boolean(3)
prof = r_general_profile(b3)
print("B3: stabilizes at n* =", prof.stabilization, "with |R_0| =", len(prof.relation(0)))

# all balls are empty, so every subset is open
eng = engine(b3)
print("ball of p1 at n=0:", set(eng.ball("general", b3.index("p1"), 0)))
print("{p1, p2} open:", is_open(b3, {b3.index("p1"), b3.index("p2")}))

# the atom-based route gives the same answer on lattices with atom projection
mo3 = gen_mo(3)
for fam in ("at", "lattice", "general"):
    print(f"MO3 {fam:>7}: n* = {engine(mo3).stabilization(fam)}")

# a Greechie pasting of three boolean blocks around a common atom
star = gen_greechie(["abc", "cde", "cfg"])
report = topology_report(star, "general", max_n=1, queries={"c,d": [star.index("c"), star.index("d")]})
print("star: n* =", report.stabilization, "isolated points:", len(report.isolated), "of", star.n)
print(report.to_json()[:300], "...")
