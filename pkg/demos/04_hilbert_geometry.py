"""
Lines in ℝ³: the geometric lemma, the θ-ladder and witness chains
=================================================================

Project v = (cosθ, sinθ, 0) onto the planes E_φ = span(e1, (0, cosφ, sinφ)).
The smallest dot product between two such projections is f(cosθ) with
f(x) = (3x - 1)/(x + 1), and iterating f^-1 from 0 gives the angles θ_n.
"""
import math

import numpy as np

from omltopo import hilbert as H

# closed form against a numeric certificate
for th in (0.3, math.pi / 3, 1.2):
    lo, hi, cert = H.lemma_extrema(th)
    print(f"θ={th:.3f}: min {lo:.12f} (numeric {cert.refined_min:.12f}), "
          f"argmin cos²φ {math.cos(cert.refined_argmin[0]) ** 2:.6f} vs {H.minimizer_cos2(th):.6f}")

# θ_n from exact rationals c_n = n/(n+2)
ladder = H.ThetaLadder.build(6)
for n, (c, t) in enumerate(zip(ladder.cosines, ladder.angles)):
    print(f"θ_{n} = arccos({c}) = {t:.6f}")

# one witness step: two planes through A whose projections of B are θ_{n-1} apart
rng = np.random.default_rng(0)
a, b = H.random_pair_at_least(rng, H.theta(3))
step = H.witness_step(a, b, 3)
p1, p2 = H.sasaki_project(step.a1, b), H.sasaki_project(step.a2, b)
print("d(A,B) =", round(H.proj_metric(a, b), 6), "-> d(A1&B, A2&B) =", round(H.proj_metric(p1, p2), 12),
      "target θ_2 =", round(H.theta(2), 12))

# a full chain ends in an orthogonal pair
chain = H.chain_witness(a, b, 3)
print("chain angles:", [round(x, 9) for x in chain.angles])

# distances between subspaces via principal angles
plane = H.Subspace3([[1, 0, 0], [0, 1, 0]])
print("d_L(e3, xy-plane) =", H.d_L(H.Line3([0, 0, 1]), plane))
