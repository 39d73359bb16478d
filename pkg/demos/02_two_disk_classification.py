"""Classify two disk-shaped classes by Christoffel score argmax.

Samples two disjoint disks, fits one Christoffel evaluator per class,
and measures plain and interior accuracy on a fresh test set.  Ends with
a save/load round trip showing the model file reproduces scores exactly.
"""

import tempfile
from pathlib import Path

import numpy as np

from cfkit import (
    ShapeSpec,
    classify_batch,
    epsilon_interior_mask,
    evaluate_model,
    fit,
    gen_shapes,
    load_model,
    render_report,
    save_model,
    scores,
    scores_batch,
)

SPECS = [
    ShapeSpec(kind="disk", label=1, center=(-2.0, 0.0), radius=1.0),
    ShapeSpec(kind="disk", label=2, center=(2.0, 0.0), radius=1.0),
]

print("=== Data ===")
train = gen_shapes(SPECS, 500, seed=1)
test = gen_shapes(SPECS, 1000, seed=2)
print(f"train: {train.n_points} points, test: {test.n_points} points")

print("\n=== Fit (degree 4, one evaluator per class) ===")
model = fit(train, degree=4)
for j, ev in enumerate(model.evaluators, start=1):
    print(f"class {j}: rank {ev.rank}/{ev.basis.size}")

print("\n=== Scores at a few points ===")
for point in ([-2.0, 0.0], [2.0, 0.0], [0.0, 0.0], [-1.2, 0.3]):
    sc = scores(model, point)
    print(f"  x={point}: scores {np.array2string(sc, precision=5)}")

print("\n=== Test metrics ===")
report = evaluate_model(model, test, specs=SPECS, eps=0.1)
print(render_report(report), end="")

interior = epsilon_interior_mask(test.points, SPECS, 0.1, test.labels)
predicted = classify_batch(model, test.points[interior])
print(f"\ninterior points: {interior.sum()}, "
      f"misclassified there: {(predicted != test.labels[interior]).sum()}")

print("\n=== Persistence round trip ===")
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "disks.cfm"
    save_model(model, path, metadata={"seed": 1})
    loaded = load_model(path)
    queries = np.random.default_rng(3).uniform(-3, 3, size=(100, 2))
    identical = np.array_equal(
        scores_batch(model, queries), scores_batch(loaded, queries)
    )
    print(f"model file: {path.stat().st_size} bytes, "
          f"scores identical after reload: {identical}")
