"""
Lagrangian cost as distance to a plane
======================================

For weights (lambda, gamma) the cost J = D + lambda R + gamma C of a point is
its distance to the plane D + lambda R + gamma C = 0, up to the factor
sqrt(1 + lambda^2 + gamma^2). A codec sampled as a curve gets an average
distance weighted by how long each segment looks when projected onto the
plane.
"""

import math

import numpy as np

from rdcbench import rdccost
from rdcbench.dataset import CodecDataset

plane = rdccost.CostPlane(lam=2.0, gamma=10.0)
p = np.array([0.0, 1.0, 0.0])  # (r, d, c)
q = rdccost.project_onto_plane(p, plane)
print("projection of", p, "->", q)
print("distance", rdccost.plane_distance(p, plane), "=", np.linalg.norm(p - q))
print("scale check", rdccost.plane_distance(p, plane) * math.sqrt(plane.norm_sq), "=",
      rdccost.lagrangian(p, plane.lam, plane.gamma))

# a codec measured at two operating points
toy = CodecDataset("toy", ((1.0, 10.0, 500.0), (2.0, 5.0, 500.0)), "cloud")
weights = rdccost.CostPlane(7.02, 1.14)
print("per point J :", rdccost.point_costs(toy, weights))
print("min / mean  :", rdccost.cloud_cost(toy, weights, "min"), rdccost.cloud_cost(toy, weights, "mean"))

curve = CodecDataset("curve", ((0.5, 40.0, 300.0), (1.0, 22.0, 300.0), (2.0, 12.0, 300.0), (4.0, 7.0, 300.0)),
                     "curve")
br = rdccost.curve_cost(curve, weights)
print("curve cost  :", br.total)
for ell, z in br.per_segment:
    print(f"  segment length {ell:9.4f}  mean distance {z:9.4f}")
