import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdhmc.errors import DomainError
from qdhmc.grid import (
    RegisterSpec, all_coords, axis_coords, grid_coord, nearest_index, pack_indices, unpack_indices,
)


def test_register_geometry():
    spec = RegisterSpec(3, 2)
    assert spec.points_per_dim == 8
    assert spec.size == 2 ** 6
    assert spec.spacing == pytest.approx(math.sqrt(2 * math.pi / 8))


@pytest.mark.parametrize("d, n", [(0, 1), (1, 0), (-2, 3)])
def test_register_rejects_bad_sizes(d, n):
    with pytest.raises(DomainError):
        RegisterSpec(d, n)


def test_grid_coord_values():
    spec = RegisterSpec(2)
    assert grid_coord(spec, 2) == 0.0
    assert grid_coord(spec, 0) == pytest.approx(-2 * math.sqrt(math.pi / 2))
    assert grid_coord(spec, 0) == pytest.approx(-2.5066, abs=1e-4)


def test_grid_coord_out_of_range():
    with pytest.raises(DomainError):
        grid_coord(RegisterSpec(3), 8)
    with pytest.raises(DomainError):
        grid_coord(RegisterSpec(3), -1)


@pytest.mark.parametrize("d", range(1, 9))
def test_coords_increase_with_constant_spacing_and_stay_in_interval(d):
    spec = RegisterSpec(d)
    x = axis_coords(spec)
    np.testing.assert_allclose(np.diff(x), spec.spacing, rtol=1e-12)
    lo, hi = spec.bounds
    assert x[0] >= lo - 1e-12 and x[-1] < hi
    assert x[0] == pytest.approx(lo)


def test_nearest_index_examples():
    assert nearest_index(RegisterSpec(2), 0.1) == 2
    assert nearest_index(RegisterSpec(2), -100.0) == 0
    assert nearest_index(RegisterSpec(2), 100.0) == 3


def test_nearest_index_tie_goes_to_lower():
    spec = RegisterSpec(3)
    mid = (grid_coord(spec, 3) + grid_coord(spec, 4)) / 2
    # brute-force scan: both neighbours are equidistant
    dists = [abs(mid - grid_coord(spec, k)) for k in range(8)]
    assert dists[3] == dists[4] == min(dists)
    assert nearest_index(spec, mid) == 3


@pytest.mark.parametrize("d", range(1, 7))
def test_nearest_index_fixes_grid_points(d):
    spec = RegisterSpec(d)
    for k in range(spec.points_per_dim):
        assert nearest_index(spec, grid_coord(spec, k)) == k


@given(st.floats(-50, 50), st.integers(1, 6))
def test_nearest_index_matches_scan(x, d):
    spec = RegisterSpec(d)
    dists = [abs(x - grid_coord(spec, k)) for k in range(spec.points_per_dim)]
    assert nearest_index(spec, x) == dists.index(min(dists))


def test_pack_unpack_examples():
    spec = RegisterSpec(2, 2)
    assert pack_indices(spec, (1, 3)) == 7
    assert unpack_indices(spec, 7) == (1, 3)
    assert [pack_indices(spec, unpack_indices(spec, f)) for f in range(16)] == list(range(16))


@pytest.mark.parametrize("d, n", [(1, 1), (2, 3), (3, 4), (4, 3), (6, 2), (12, 1)])
def test_pack_unpack_bijective(d, n):
    spec = RegisterSpec(d, n)
    seen = set()
    for flat in range(spec.size):
        idx = unpack_indices(spec, flat)
        assert pack_indices(spec, idx) == flat
        seen.add(idx)
    assert len(seen) == spec.size


def test_pack_rejects_out_of_range():
    spec = RegisterSpec(2, 2)
    with pytest.raises(DomainError):
        pack_indices(spec, (4, 0))
    with pytest.raises(DomainError):
        pack_indices(spec, (0,))
    with pytest.raises(DomainError):
        unpack_indices(spec, 16)


def test_all_coords_layout_dimension_zero_most_significant():
    spec = RegisterSpec(2, 2)
    c = all_coords(spec)
    flat = pack_indices(spec, (1, 3))
    np.testing.assert_allclose(c[flat], [grid_coord(spec, 1), grid_coord(spec, 3)])
