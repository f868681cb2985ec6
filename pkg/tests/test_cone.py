import numpy as np
import pytest
from numpy.testing import assert_allclose

from muellercheck.cone import (ConeScanConfig, DiagonalRegion, MatrixKind, classify,
                               cone_minimum, diag_region_scan, diagonal_region, h_diagonal,
                               is_pre_mueller, pure_stokes)
from muellercheck.errors import InvalidInputError
from muellercheck.mueller import h_from_mueller, mueller_jones_from_jones

from oracles import oracle_cone_minimum, random_jones

TETRA_VERTICES = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
OTHER_CUBE_VERTICES = [(-1, -1, -1), (-1, 1, 1), (1, -1, 1), (1, 1, -1)]

REGION_TO_KIND = {
    DiagonalRegion.TETRAHEDRON: MatrixKind.PHYSICAL_MUELLER,
    DiagonalRegion.CUBE_ONLY: MatrixKind.PRE_MUELLER_ONLY,
    DiagonalRegion.OUTSIDE_CUBE: MatrixKind.NON_PRE_MUELLER,
}


def boundary_distance(d):
    planes = np.array([[-1, -1, -1], [-1, 1, 1], [1, 1, -1], [1, -1, 1]]) / np.sqrt(3)
    to_planes = np.abs(planes @ d - 1 / np.sqrt(3))
    to_faces = np.abs(np.abs(d) - 1)
    return min(to_planes.min(), to_faces.min())


def test_pure_stokes_on_cone():
    s = pure_stokes(0.7, 2.1)
    assert s[0] ** 2 - np.sum(s[1:] ** 2) == pytest.approx(0.0, abs=1e-15)


def test_identity_is_pre_mueller():
    ok, value, argmin, _ = is_pre_mueller(np.eye(4))
    assert ok
    assert value == pytest.approx(0.0, abs=1e-12)
    assert argmin[0] == 1 and np.linalg.norm(argmin[1:]) == pytest.approx(1.0)


def test_diag_two_is_not_pre_mueller():
    ok, value, argmin, _ = is_pre_mueller(np.diag([1, 2, 0, 0]))
    assert not ok
    assert value == pytest.approx(-3.0, abs=1e-12)
    assert_allclose(np.abs(argmin), [1, 1, 0, 0], atol=1e-8)


def test_cone_minimum_on_diagonals(rng):
    for d in rng.uniform(-1.2, 1.2, size=(500, 3)):
        value, _ = cone_minimum(np.diag([1, *d]))
        assert abs(value - (1 - np.max(d ** 2))) <= 1e-6


def test_cone_minimum_matches_secular_oracle(rng):
    for _ in range(300):
        m = rng.normal(size=(4, 4))
        value, argmin = cone_minimum(m)
        assert value == pytest.approx(oracle_cone_minimum(m), abs=1e-9 * (1 + np.sum(m * m)))
        image = m @ argmin
        assert image[0] ** 2 - np.sum(image[1:] ** 2) == pytest.approx(value, abs=1e-12 * np.sum(m * m))


def test_coarse_grid_still_refines(rng):
    cfg = ConeScanConfig.from_grid(19)
    for _ in range(100):
        m = rng.normal(size=(4, 4))
        assert cone_minimum(m, cfg)[0] == pytest.approx(oracle_cone_minimum(m), abs=1e-8 * np.sum(m * m))


def test_polarizer_zero_image_is_accepted():
    polarizer = mueller_jones_from_jones(np.diag([1, 0]))
    check = is_pre_mueller(polarizer)
    assert check.is_pre_mueller
    assert check.min_intensity == pytest.approx(0.0, abs=1e-15)


def test_negative_intensity_is_rejected():
    check = is_pre_mueller(-np.eye(4))
    assert not check.is_pre_mueller
    assert check.min_intensity == -1
    assert not is_pre_mueller(np.zeros((4, 4))).is_pre_mueller


@pytest.mark.parametrize("d, kind", [
    ((0.5, 0.5, 0.9), MatrixKind.PHYSICAL_MUELLER),
    ((1, 1, -1), MatrixKind.PRE_MUELLER_ONLY),
    ((2, 0, 0), MatrixKind.NON_PRE_MUELLER),
])
def test_classify_examples(d, kind):
    assert classify(np.diag([1, *d])).kind is kind


def test_classify_grey_reflection():
    res = classify(np.diag([1, 1, 1, -1]))
    assert res.kind is MatrixKind.PRE_MUELLER_ONLY
    assert res.min_h_eigenvalue == pytest.approx(-1.0, abs=1e-12)
    assert not res.is_mueller_jones


def test_classify_mueller_jones_flag(rng):
    res = classify(mueller_jones_from_jones(random_jones(rng)))
    assert res.kind is MatrixKind.PHYSICAL_MUELLER
    assert res.is_mueller_jones
    assert not classify(np.diag([1, 0, 0, 0])).is_mueller_jones


def test_classify_agrees_with_diagonal_region(rng):
    checked = 0
    for d in rng.uniform(-1.2, 1.2, size=(10_000, 3)):
        if boundary_distance(d) < 1e-6:
            continue
        res = classify(np.diag([1, *d]))
        assert res.kind is REGION_TO_KIND[diagonal_region(d)], d
        checked += 1
    assert checked > 9_900


def test_physical_implies_pre_mueller(rng):
    # classify() itself raises ConsistencyError on a violation; check the cone value too.
    for _ in range(300):
        k = rng.integers(1, 5)
        m = sum(w * mueller_jones_from_jones(j)
                for w, j in zip(rng.uniform(0.1, 1, size=k), random_jones(rng, k)))
        res = classify(m)
        assert res.kind is MatrixKind.PHYSICAL_MUELLER
        assert res.cone_min_value >= -1e-9 * np.sum(m * m)
    for _ in range(300):
        res = classify(rng.normal(size=(4, 4)))
        assert not (res.min_h_eigenvalue >= -1e-9 * res.trace_h
                    and res.kind is not MatrixKind.PHYSICAL_MUELLER)


@pytest.mark.parametrize("scale", [1e-3, 0.5, 7.0, 1e4])
def test_classification_is_scale_invariant(rng, scale):
    samples = [np.diag([1, *d]) for d in rng.uniform(-1.2, 1.2, size=(30, 3))]
    samples += [rng.normal(size=(4, 4)) for _ in range(30)]
    samples += [mueller_jones_from_jones(j) for j in random_jones(rng, 10)]
    for m in samples:
        assert classify(scale * m).kind is classify(m).kind


@pytest.mark.parametrize("d, region", [
    ((1, 1, 1), DiagonalRegion.TETRAHEDRON),
    ((1, 1, -1), DiagonalRegion.CUBE_ONLY),
    ((0, 0, 0), DiagonalRegion.TETRAHEDRON),
    ((1.2, 0, 0), DiagonalRegion.OUTSIDE_CUBE),
    ((1 + 1e-12, 1, 1), DiagonalRegion.TETRAHEDRON),
])
def test_diagonal_region_examples(d, region):
    assert diagonal_region(d) is region


@pytest.mark.parametrize("vertex", TETRA_VERTICES)
def test_tetrahedron_vertices(vertex):
    assert diagonal_region(vertex) is DiagonalRegion.TETRAHEDRON


@pytest.mark.parametrize("vertex", OTHER_CUBE_VERTICES)
def test_other_cube_vertices(vertex):
    assert diagonal_region(vertex) is DiagonalRegion.CUBE_ONLY


def test_h_diagonal_examples():
    jt = np.array([1, 0, 0, 1])
    assert_allclose(h_diagonal((1, 1, 1)), np.outer(jt, jt), atol=1e-15)
    assert_allclose(h_diagonal((0, 0, 0)), 0.5 * np.eye(4), atol=1e-15)
    assert_allclose(h_diagonal((1, 1, -1)),
                    0.5 * np.array([[2, 0, 0, 0], [0, 0, 2, 0], [0, 2, 0, 0], [0, 0, 0, 2]]),
                    atol=1e-15)


def test_h_diagonal_matches_general_construction(rng):
    for d in rng.uniform(-2, 2, size=(1000, 3)):
        assert_allclose(h_from_mueller(np.diag([1, *d])), h_diagonal(d), atol=1e-12)


def test_h_diagonal_psd_iff_tetrahedron(rng):
    for d in rng.uniform(-1, 1, size=(2000, 3)):
        if boundary_distance(d) < 1e-6:
            continue
        psd = np.linalg.eigvalsh(h_diagonal(d))[0] >= -1e-9
        assert psd == (diagonal_region(d) is DiagonalRegion.TETRAHEDRON)


def test_scan_resolution_two_at_unit_extent():
    rows = diag_region_scan(2, extent=1.0)
    assert len(rows) == 8
    for d1, d2, d3, region in rows:
        expected = (DiagonalRegion.TETRAHEDRON if (d1, d2, d3) in TETRA_VERTICES
                    else DiagonalRegion.CUBE_ONLY)
        assert region is expected


def test_scan_default_extent_corners_are_outside():
    rows = diag_region_scan(2)
    assert {r[3] for r in rows} == {DiagonalRegion.OUTSIDE_CUBE}
    assert {abs(r[0]) for r in rows} == {1.1}


def test_scan_resolution_three_contains_origin():
    rows = diag_region_scan(3)
    assert (0.0, 0.0, 0.0, DiagonalRegion.TETRAHEDRON) in rows


def test_scan_volume_fraction():
    rows = diag_region_scan(45)
    tetra = sum(r[3] is DiagonalRegion.TETRAHEDRON for r in rows)
    cube = sum(r[3] is not DiagonalRegion.OUTSIDE_CUBE for r in rows)
    assert tetra / cube == pytest.approx(1 / 3, abs=0.01)


def test_scan_rejects_small_resolution():
    with pytest.raises(InvalidInputError):
        diag_region_scan(1)
