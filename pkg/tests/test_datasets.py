"""Shape sampling, interior filtering, scaling, CSV round trips, splits."""

import numpy as np
import pytest
from scipy.stats import chi2

from cfkit import (
    AffineTransform,
    DataError,
    LabeledDataset,
    ShapeSpec,
    epsilon_interior,
    epsilon_interior_mask,
    gen_shapes,
    read_csv,
    read_points_csv,
    scale_to_unit_box,
    train_test_split,
    write_csv,
)

DISK = ShapeSpec(kind="disk", label=1, center=(0.0, 0.0), radius=1.0)
TWO_DISKS = [
    ShapeSpec(kind="disk", label=1, center=(-2.0, 0.0), radius=1.0),
    ShapeSpec(kind="disk", label=2, center=(2.0, 0.0), radius=1.0),
]


class TestShapeSpec:
    def test_validation(self):
        with pytest.raises(DataError):
            ShapeSpec(kind="disk", label=1, center=(0.0,), radius=-1.0)
        with pytest.raises(DataError):
            ShapeSpec(kind="annulus", label=1, center=(0.0,), inner=2.0, outer=1.0)
        with pytest.raises(DataError):
            ShapeSpec(kind="box", label=1, low=(1.0,), high=(0.0,))
        with pytest.raises(DataError):
            ShapeSpec(kind="blob", label=1)
        with pytest.raises(DataError):
            ShapeSpec(kind="disk", label=0, center=(0.0,), radius=1.0)

    def test_volume(self):
        assert DISK.volume() == pytest.approx(np.pi)
        ring = ShapeSpec(
            kind="annulus", label=1, center=(0.0, 0.0), inner=1.0, outer=2.0
        )
        assert ring.volume() == pytest.approx(3 * np.pi)
        box = ShapeSpec(kind="box", label=1, low=(0.0, 0.0), high=(2.0, 3.0))
        assert box.volume() == pytest.approx(6.0)

    def test_ball_volume_3d(self):
        ball = ShapeSpec(kind="disk", label=1, center=(0.0, 0.0, 0.0), radius=2.0)
        assert ball.volume() == pytest.approx(4.0 / 3.0 * np.pi * 8.0)


class TestGenShapes:
    def test_points_inside_disk(self):
        data = gen_shapes([DISK], 1000, seed=3)
        assert np.all(np.linalg.norm(data.points, axis=1) <= 1.0)
        assert data.n_points == 1000

    def test_disjoint_disks_stay_disjoint(self):
        data = gen_shapes(TWO_DISKS, 500, seed=5)
        in_first = TWO_DISKS[0].contains(data.points)
        in_second = TWO_DISKS[1].contains(data.points)
        assert not np.any(in_first & in_second)
        np.testing.assert_array_equal(np.where(in_first, 1, 2), data.labels)

    def test_same_seed_reproduces(self, tmp_path):
        a = gen_shapes(TWO_DISKS, 100, seed=42)
        b = gen_shapes(TWO_DISKS, 100, seed=42)
        np.testing.assert_array_equal(a.points, b.points)
        path_a, path_b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(a, path_a)
        write_csv(b, path_b)
        assert path_a.read_bytes() == path_b.read_bytes()

    def test_zero_area_rejected(self):
        flat = ShapeSpec(kind="box", label=1, low=(0.0, 0.0), high=(1.0, 0.0))
        with pytest.raises(DataError, match="zero area"):
            gen_shapes([flat], 10, seed=0)

    def test_empty_specs_rejected(self):
        with pytest.raises(DataError):
            gen_shapes([], 10, seed=0)

    @pytest.mark.parametrize(
        "spec",
        [
            DISK,
            ShapeSpec(kind="annulus", label=1, center=(1.0, -1.0), inner=0.5, outer=1.5),
            ShapeSpec(kind="box", label=1, low=(-1.0, 0.0), high=(2.0, 1.0)),
        ],
        ids=["disk", "annulus", "box"],
    )
    def test_uniformity_chi_squared(self, spec):
        # occupancy over a 4x4 grid on the bounding box, expected counts from
        # the cell/shape overlap fractions integrated on a fine subgrid
        data = gen_shapes([spec], 10000, seed=99)
        lo, hi = spec.bounding_box()
        edges = [np.linspace(lo[d], hi[d], 5) for d in range(2)]
        counts, *_ = np.histogram2d(
            data.points[:, 0], data.points[:, 1], bins=edges
        )
        fine = 400
        cx = np.linspace(lo[0], hi[0], fine, endpoint=False) + (hi[0] - lo[0]) / fine / 2
        cy = np.linspace(lo[1], hi[1], fine, endpoint=False) + (hi[1] - lo[1]) / fine / 2
        mesh = np.stack(np.meshgrid(cx, cy, indexing="ij"), axis=-1).reshape(-1, 2)
        inside = spec.contains(mesh).reshape(fine, fine)
        cell = fine // 4
        prob = np.array(
            [
                [
                    inside[i * cell : (i + 1) * cell, j * cell : (j + 1) * cell].mean()
                    for j in range(4)
                ]
                for i in range(4)
            ]
        )
        prob = prob / prob.sum()
        expected = prob * 10000
        mask = expected > 0
        stat = float(((counts[mask] - expected[mask]) ** 2 / expected[mask]).sum())
        p_value = chi2.sf(stat, df=mask.sum() - 1)
        assert p_value > 0.001


class TestEpsilonInterior:
    def test_pointwise_examples(self):
        assert epsilon_interior_mask([[0.5, 0.0]], [DISK], 0.4)[0]
        assert not epsilon_interior_mask([[0.95, 0.0]], [DISK], 0.1)[0]

    def test_eps_zero_keeps_strict_interior(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.999, 0.0]])
        mask = epsilon_interior_mask(pts, [DISK], 0.0)
        np.testing.assert_array_equal(mask, [True, False, True])

    def test_monotone_in_eps(self, rng):
        data = gen_shapes([DISK], 500, seed=1)
        previous = None
        for eps in (0.0, 0.1, 0.3, 0.6, 0.9):
            mask = epsilon_interior_mask(data.points, [DISK], eps, data.labels)
            if previous is not None:
                assert np.all(previous | ~mask)  # shrinking sets
                assert mask.sum() <= previous.sum()
            previous = mask

    def test_diameter_eps_empty(self):
        data = gen_shapes([DISK], 200, seed=2)
        mask = epsilon_interior_mask(data.points, [DISK], 2.0, data.labels)
        assert mask.sum() == 0
        with pytest.raises(DataError):
            epsilon_interior(data, [DISK], 2.0)

    def test_respects_labels(self):
        pts = np.array([[-2.0, 0.0], [2.0, 0.0]])
        mask = epsilon_interior_mask(pts, TWO_DISKS, 0.1, labels=[2, 1])
        np.testing.assert_array_equal(mask, [False, False])

    def test_annulus_distance(self):
        ring = ShapeSpec(
            kind="annulus", label=1, center=(0.0, 0.0), inner=1.0, outer=2.0
        )
        np.testing.assert_allclose(
            ring.boundary_distance([[1.4, 0.0], [0.5, 0.0]]), [0.4, 0.5]
        )

    def test_box_distance(self):
        box = ShapeSpec(kind="box", label=1, low=(0.0, 0.0), high=(4.0, 2.0))
        np.testing.assert_allclose(
            box.boundary_distance([[1.0, 1.0], [3.9, 0.5]]), [1.0, 0.1]
        )


class TestScaleToUnitBox:
    def test_two_values_map_to_endpoints(self):
        data = LabeledDataset(np.array([[0.0], [10.0]]), [1, 1])
        scaled, transform = scale_to_unit_box(data)
        np.testing.assert_array_equal(scaled.points.ravel(), [-1.0, 1.0])
        np.testing.assert_allclose(transform.inverse(scaled.points), data.points)

    def test_constant_coordinate_centered(self):
        data = LabeledDataset(np.array([[3.0, 1.0], [3.0, 2.0]]), [1, 1])
        scaled, transform = scale_to_unit_box(data)
        np.testing.assert_array_equal(scaled.points[:, 0], [0.0, 0.0])
        assert transform.scale[0] == 1.0
        np.testing.assert_allclose(transform.inverse(scaled.points), data.points)

    def test_round_trip_random(self, rng):
        pts = rng.normal(scale=50.0, size=(40, 3))
        data = LabeledDataset(pts, np.ones(40, dtype=int))
        scaled, transform = scale_to_unit_box(data)
        assert scaled.points.min() >= -1.0 - 1e-12
        assert scaled.points.max() <= 1.0 + 1e-12
        np.testing.assert_allclose(
            transform.inverse(scaled.points), pts, rtol=1e-12, atol=1e-12
        )

    def test_identity_transform(self):
        ident = AffineTransform.identity(2)
        pts = np.array([[1.0, -2.0]])
        np.testing.assert_array_equal(ident.forward(pts), pts)


class TestCsv:
    def test_minimal_file(self, tmp_path):
        path = tmp_path / "tiny.csv"
        path.write_text("x1,label\n0.5,1\n")
        data = read_csv(path)
        assert data.n_points == 1 and data.n == 1 and data.m == 1
        assert data.points[0, 0] == 0.5

    def test_write_read_round_trip(self, tmp_path, rng):
        pts = rng.normal(size=(25, 2)) * np.pi
        data = LabeledDataset(pts, rng.integers(1, 4, size=25))
        path = tmp_path / "round.csv"
        write_csv(data, path)
        back = read_csv(path)
        np.testing.assert_array_equal(back.points, data.points)
        np.testing.assert_array_equal(back.labels, data.labels)

    def test_label_below_one(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x1,label\n0.5,0\n")
        with pytest.raises(DataError, match="label < 1 at line 2"):
            read_csv(path)

    def test_ragged_row_reports_line(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("x1,x2,label\n0.5,1.0,1\n0.5,1\n")
        with pytest.raises(DataError, match="line 3"):
            read_csv(path)

    def test_non_numeric_cell_reports_line(self, tmp_path):
        path = tmp_path / "text.csv"
        path.write_text("x1,label\nblah,1\n")
        with pytest.raises(DataError, match="line 2"):
            read_csv(path)

    def test_non_integer_label(self, tmp_path):
        path = tmp_path / "frac.csv"
        path.write_text("x1,label\n0.5,1.5\n")
        with pytest.raises(DataError, match="non-integer label"):
            read_csv(path)

    def test_points_csv_without_label(self, tmp_path):
        path = tmp_path / "queries.csv"
        path.write_text("x1,x2\n0.5,1.0\n")
        points, labels = read_points_csv(path)
        assert labels is None
        np.testing.assert_array_equal(points, [[0.5, 1.0]])

    def test_missing_label_header(self, tmp_path):
        path = tmp_path / "nolabel.csv"
        path.write_text("x1,x2\n0.5,1.0\n")
        with pytest.raises(DataError, match="label"):
            read_csv(path)


class TestTrainTestSplit:
    def test_stratified_counts(self, rng):
        data = gen_shapes(TWO_DISKS, 100, seed=0)
        train, test = train_test_split(data, 0.8, seed=1)
        for label in (1, 2):
            assert (train.labels == label).sum() == 80
            assert (test.labels == label).sum() == 20

    def test_same_seed_same_split(self):
        data = gen_shapes(TWO_DISKS, 50, seed=0)
        a_train, a_test = train_test_split(data, 0.7, seed=9)
        b_train, b_test = train_test_split(data, 0.7, seed=9)
        np.testing.assert_array_equal(a_train.points, b_train.points)
        np.testing.assert_array_equal(a_test.points, b_test.points)

    def test_union_preserved(self):
        data = gen_shapes(TWO_DISKS, 30, seed=0)
        train, test = train_test_split(data, 0.5, seed=2)
        combined = np.vstack([train.points, test.points])
        assert combined.shape == data.points.shape
        reference = np.sort(data.points.view("f8,f8"), axis=0)
        recombined = np.sort(combined.view("f8,f8"), axis=0)
        np.testing.assert_array_equal(reference, recombined)

    def test_small_class_errors(self):
        data = LabeledDataset(np.zeros((3, 1)), [1, 1, 2])
        with pytest.raises(DataError, match="class 2"):
            train_test_split(data, 0.5, seed=0)

    def test_fraction_bounds(self):
        data = gen_shapes(TWO_DISKS, 10, seed=0)
        with pytest.raises(ValueError):
            train_test_split(data, 1.0, seed=0)
