import numpy as np
import pytest

from conftest import band_limited
from longwave.errors import PreconditionError
from longwave.fields import ScalarField, VectorField, make_grid
from longwave.snapshots import read_snapshot, write_snapshot


def test_scalar_round_trip_is_bit_exact(tmp_path, grid1, rng):
    f = ScalarField(grid1, rng.standard_normal(32) + 1j * rng.standard_normal(32))
    path = tmp_path / "s.txt"
    write_snapshot(path, f, t=1.25)
    g, t = read_snapshot(path)
    assert t == 1.25
    assert g.grid == grid1
    np.testing.assert_array_equal(g.values, f.values)


def test_vector_round_trip(tmp_path, rng):
    grid = make_grid(3, [1.0, 2.0, 3.0], [4, 6, 8])
    a = band_limited(grid, rng, bandwidth=1, vector=True)
    path = tmp_path / "v.txt"
    write_snapshot(path, a, t=0.0)
    b, _ = read_snapshot(path)
    assert isinstance(b, VectorField)
    np.testing.assert_array_equal(b.components, a.components)


def test_header_layout(tmp_path):
    grid = make_grid(1, [2.0], [4])
    path = tmp_path / "h.txt"
    write_snapshot(path, ScalarField(grid, np.arange(4.0)), t=0.5)
    lines = path.read_text().splitlines()
    assert lines[0] == "# rank 1"
    assert lines[5] == "# columns re,im"
    assert len(lines) == 6 + 4
    assert lines[7].split(",")[0] == "1.0000000000000000e+00"


def test_truncated_file_rejected(tmp_path, grid1):
    path = tmp_path / "bad.txt"
    write_snapshot(path, ScalarField.zeros(grid1))
    text = path.read_text().splitlines()
    path.write_text("\n".join(text[:-3]) + "\n")
    with pytest.raises(PreconditionError):
        read_snapshot(path)
