"""Joint (point, label) Christoffel functions and their exact identities.

The classifier's per-class scores embed into a single Christoffel function
on R^n x R through the Lagrange interpolation polynomials on the label
points {1..m}.  This script verifies, on a small random dataset:

* the interpolation basis hits exactly 0/1 at integer labels and sums to 1,
* the joint function evaluated at an integer label IS the per-class score,
* the combination formula matches a joint moment matrix on the tensor
  monomial basis, entry for entry,
* the pointwise ordering between the variety basis at degree t, the tensor
  basis at (t, m-1), and the variety basis at degree t+m-1.
"""

import numpy as np

from cfkit import (
    LabeledDataset,
    eval_joint_inverse,
    fit,
    joint_cf,
    make_theta,
    sandwich_check,
    scores,
    tensor_cf,
)

rng = np.random.default_rng(7)

print("=== Lagrange interpolation basis on {1, 2, 3} ===")
theta = make_theta(3)
for y in (1.0, 2.0, 3.0, 1.5, 0.0):
    print(f"  theta(y={y}) = {np.array2string(theta.eval_all(y), precision=4)}")

print("\n=== A random three-class dataset on the line ===")
counts = [9, 7, 8]
points = np.concatenate([rng.uniform(-1, 1, c) for c in counts])[:, None]
labels = np.concatenate(
    [np.full(c, j + 1, dtype=np.int64) for j, c in enumerate(counts)]
)
data = LabeledDataset(points, labels)
model = fit(data, degree=2, scale=False)

x = np.array([0.25])
sc = scores(model, x)
print(f"per-class scores at x={x[0]}: {np.array2string(sc, precision=6)}")
print("joint function at integer labels (same values, bit for bit):")
for j in (1, 2, 3):
    value = joint_cf(model, x, float(j))
    print(f"  y={j}: {value!r}  equal: {value == sc[j - 1]}")

print("\njoint function between labels (theta-weighted combination):")
for y in (1.5, 2.5, 0.5):
    print(f"  y={y}: {joint_cf(model, x, y):.6e}")

print("\n=== Tensor moment matrix route ===")
joint_ev = tensor_cf(data, 2, weighting="per_class")
print("inverse scores by both routes at mixed (x, y):")
for y in (1.0, 2.0, 1.5):
    theta_route = 1.0 / joint_cf(model, x, y)
    matrix_route = eval_joint_inverse(joint_ev, x, y)
    print(f"  y={y}: theta {theta_route:.8e}  matrix {matrix_route:.8e}")

print("\n=== Nested-space ordering ===")
grid = np.array([(x_, y_) for x_ in np.linspace(-1.2, 1.2, 30) for y_ in (1.0, 2.0, 3.0)])
outcome = sandwich_check(data, 2, grid)
print(
    f"checked {outcome.n_points} joint points: "
    f"{outcome.n_violations} ordering violations"
)
