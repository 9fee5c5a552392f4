import numpy as np
import pytest

from hermite_ode.banded import SymmetricBandedMatrix
from hermite_ode.solver import banded_matvec


def random_banded_spd(rng, size, bw):
    M = rng.normal(size=(size, size))
    M = np.tril(np.triu(M, -bw), bw)
    M = 0.5 * (M + M.T)
    M += np.diag(np.abs(M).sum(axis=1) + 1.0)
    return M


@pytest.mark.parametrize("size, bw", [(1, 0), (5, 1), (12, 3), (40, 7), (6, 9)])
def test_round_trip_and_matvec(rng, size, bw):
    dense = random_banded_spd(rng, size, bw)
    band = SymmetricBandedMatrix.from_dense(dense, bw)
    np.testing.assert_array_equal(band.to_dense(), dense)
    v = rng.normal(size=size)
    ref = dense @ v
    np.testing.assert_allclose(banded_matvec(band, v), ref, rtol=1e-13, atol=1e-13 * np.linalg.norm(ref))


def test_identity():
    eye = SymmetricBandedMatrix.from_dense(np.eye(6), 2)
    v = np.arange(6.0)
    np.testing.assert_array_equal(eye.matvec(v), v)


def test_unit_vector_probe(rng):
    dense = random_banded_spd(rng, 15, 4)
    band = SymmetricBandedMatrix.from_dense(dense)
    assert band.bandwidth == 4
    for k in range(15):
        e = np.zeros(15)
        e[k] = 1.0
        np.testing.assert_array_equal(band.matvec(e), dense[:, k])


def test_dimension_mismatch():
    band = SymmetricBandedMatrix.zeros(4, 1)
    with pytest.raises(ValueError, match="does not match"):
        band.matvec(np.ones(5))


def test_add_block_reads_lower_triangle():
    band = SymmetricBandedMatrix.zeros(5, 2)
    block = np.array([[1.0, 99.0, 99.0], [2.0, 3.0, 99.0], [4.0, 5.0, 6.0]])
    band.add_block(1, block)
    band.add_block(2, np.eye(3))
    expected = np.zeros((5, 5))
    sym = np.tril(block) + np.tril(block, -1).T
    expected[1:4, 1:4] += sym
    expected[2:5, 2:5] += np.eye(3)
    np.testing.assert_array_equal(band.to_dense(), expected)
    with pytest.raises(ValueError, match="bandwidth"):
        band.add_block(0, np.eye(4))


def test_get(rng):
    dense = random_banded_spd(rng, 10, 2)
    band = SymmetricBandedMatrix.from_dense(dense, 2)
    rows, cols = np.meshgrid(np.arange(10), np.arange(10), indexing="ij")
    np.testing.assert_array_equal(band.get(rows, cols), dense)


def test_submatrix(rng):
    dense = random_banded_spd(rng, 12, 3)
    band = SymmetricBandedMatrix.from_dense(dense, 3)
    keep = np.array([1, 2, 4, 5, 8, 9, 11])
    sub = band.submatrix(keep)
    np.testing.assert_array_equal(sub.to_dense(), dense[np.ix_(keep, keep)])
    with pytest.raises(ValueError):
        band.submatrix([3, 1])
