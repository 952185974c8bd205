"""
Graph construction and spectral decomposition.
"""
import unittest

import numpy
import scipy.linalg

from qspec.errors import InputError
from qspec.graph.laplacian import WeightedGraph, buildWeightMatrix, gaussianSimilarity, degreeMatrix, laplacian, \
    IndexOutOfRange, SelfLoop, NegativeWeight, DuplicateEdge, NonPositiveSigma
from qspec.graph.spectral import eigendecompose, topD, sampleEigenMeasurement, phaseEstimateEigenvalues, InvalidD

from resources.instances import p2, k3, randomGraph


class TestWeightMatrix(unittest.TestCase):

    def test_singleEdge(self):
        numpy.testing.assert_array_equal(buildWeightMatrix([(0, 1, 1.0)], 2).weights, [[0, 1], [1, 0]])

    def test_emptyGraph(self):
        numpy.testing.assert_array_equal(buildWeightMatrix([], 3).weights, numpy.zeros((3, 3)))

    def test_placement(self):
        numpy.testing.assert_array_equal(buildWeightMatrix([(0, 1, 2.0), (1, 2, 0.5)], 3).weights,
                                         [[0, 2, 0], [2, 0, 0.5], [0, 0.5, 0]])

    def test_invalidEdges(self):
        with self.assertRaises(IndexOutOfRange):
            buildWeightMatrix([(0, 3, 1.0)], 3)
        with self.assertRaises(SelfLoop):
            buildWeightMatrix([(1, 1, 1.0)], 3)
        with self.assertRaises(NegativeWeight):
            buildWeightMatrix([(0, 1, -1.0)], 3)
        with self.assertRaises(DuplicateEdge):
            buildWeightMatrix([(0, 1, 1.0), (1, 0, 2.0)], 3)
        with self.assertRaises(InputError):
            buildWeightMatrix([], 1)

    def test_asymmetricRejected(self):
        with self.assertRaises(InputError):
            WeightedGraph([[0, 1], [2, 0]])


class TestGaussianSimilarity(unittest.TestCase):

    def test_identicalRows(self):
        self.assertEqual(gaussianSimilarity(numpy.array([[1., 2.], [1., 2.]]), 0.3).weights[0, 1], 1.0)

    def test_kernelValues(self):
        self.assertAlmostEqual(gaussianSimilarity(numpy.array([[0.], [1.]]), 1 / numpy.sqrt(2)).weights[0, 1],
                               numpy.exp(-1), places=12)
        self.assertAlmostEqual(gaussianSimilarity(numpy.array([[0., 0.], [3., 4.]]), 5.0).weights[0, 1],
                               0.606531, places=6)

    def test_permutation(self):
        points = numpy.random.default_rng(3).normal(size=(5, 2))
        order = [3, 0, 4, 1, 2]
        weights = gaussianSimilarity(points, 0.7).weights
        numpy.testing.assert_allclose(gaussianSimilarity(points[order], 0.7).weights,
                                      weights[numpy.ix_(order, order)])

    def test_sigmaPositive(self):
        with self.assertRaises(NonPositiveSigma):
            gaussianSimilarity(numpy.array([[0.], [1.]]), 0.0)


class TestLaplacian(unittest.TestCase):

    def test_degree(self):
        numpy.testing.assert_array_equal(degreeMatrix(p2()).diag, [1, 1])
        numpy.testing.assert_array_equal(degreeMatrix(WeightedGraph(numpy.zeros((3, 3)))).diag, [0, 0, 0])
        numpy.testing.assert_array_equal(
            degreeMatrix(WeightedGraph([[0, 2, 0], [2, 0, .5], [0, .5, 0]])).diag, [2, 2.5, 0.5])

    def test_examples(self):
        numpy.testing.assert_array_equal(laplacian(p2()).entries, [[1, -1], [-1, 1]])
        numpy.testing.assert_array_equal(laplacian(k3()).entries, [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
        numpy.testing.assert_array_equal(laplacian(WeightedGraph(numpy.zeros((3, 3)))).entries, numpy.zeros((3, 3)))

    def test_positiveSemidefinite(self):
        lap = laplacian(randomGraph(8, 5))
        rng = numpy.random.default_rng(11)
        for _ in range(20):
            self.assertGreaterEqual(lap.quadraticForm(rng.normal(size=8)), -1e-12)
        numpy.testing.assert_allclose(lap.entries.sum(axis=1), 0, atol=1e-12)


class TestSpectral(unittest.TestCase):

    def setUp(self) -> None:
        self.p2 = eigendecompose(laplacian(p2()))

    def test_p2(self):
        numpy.testing.assert_allclose(self.p2.eigenvalues, [2, 0], atol=1e-12)
        numpy.testing.assert_allclose(self.p2.eigenvectors[:, 0], numpy.array([1, -1]) / numpy.sqrt(2), atol=1e-12)
        numpy.testing.assert_allclose(self.p2.eigenvectors[:, 1], numpy.array([1, 1]) / numpy.sqrt(2), atol=1e-12)

    def test_k3(self):
        dec = eigendecompose(laplacian(k3()))
        numpy.testing.assert_allclose(dec.eigenvalues, [3, 3, 0], atol=1e-12)
        basis = topD(dec, 2)
        lap = laplacian(k3()).entries
        numpy.testing.assert_allclose(lap @ basis.vd, 3 * basis.vd, atol=1e-10)
        numpy.testing.assert_allclose(basis.vd.T @ numpy.ones(3), 0, atol=1e-10)
        numpy.testing.assert_allclose(basis.vd.T @ basis.vd, numpy.eye(2), atol=1e-10)

    def test_againstReferenceSolver(self):
        lap = laplacian(randomGraph(8, 2))
        dec = eigendecompose(lap)
        numpy.testing.assert_allclose(dec.eigenvalues, scipy.linalg.eigvalsh(lap.entries)[::-1], atol=1e-8)
        numpy.testing.assert_allclose(dec.reconstruct(), lap.entries, atol=1e-8)
        numpy.testing.assert_allclose(dec.eigenvectors.T @ dec.eigenvectors, numpy.eye(8), atol=1e-8)

    def test_deterministicSigns(self):
        dec = eigendecompose(laplacian(randomGraph(6, 4)))
        for column in dec.eigenvectors.T:
            first = column[numpy.flatnonzero(numpy.abs(column) > 1e-12)[0]]
            self.assertGreater(first, 0)

    def test_topD(self):
        numpy.testing.assert_array_equal(topD(self.p2, 2).vd, self.p2.eigenvectors)
        basis = topD(self.p2, 1)
        numpy.testing.assert_allclose(basis.vd[:, 0], numpy.array([1, -1]) / numpy.sqrt(2), atol=1e-12)
        numpy.testing.assert_allclose(basis.lambdaD, [2], atol=1e-12)
        smallest = topD(self.p2, 1, 'smallest')
        numpy.testing.assert_allclose(smallest.lambdaD, [0], atol=1e-12)
        for d in (0, 3, 4):
            with self.assertRaises(InvalidD):
                topD(self.p2, d)

    def test_sampleEigenMeasurement(self):
        shots = 10000
        samples = sampleEigenMeasurement(self.p2, shots, 7)
        frequency = numpy.mean(samples == 0)
        # five standard deviations of a fair coin
        self.assertLess(abs(frequency - 0.5), 5 * numpy.sqrt(0.25 / shots))
        numpy.testing.assert_array_equal(samples, sampleEigenMeasurement(self.p2, shots, 7))
        with self.assertRaises(InputError):
            sampleEigenMeasurement(self.p2, 0, 7)

    def test_sampleUniform(self):
        dec = eigendecompose(laplacian(randomGraph(4, 1)))
        counts = numpy.bincount(sampleEigenMeasurement(dec, 10000, 3), minlength=4)
        self.assertEqual(len(counts), 4)
        numpy.testing.assert_array_less(numpy.abs(counts - 2500), 5 * numpy.sqrt(10000 * 0.25 * 0.75))

    def test_phaseEstimateEigenvalues(self):
        distribution, eigenvalues = phaseEstimateEigenvalues(self.p2, 4)
        self.assertEqual(sorted(distribution), [0, 4])
        for label in distribution:
            self.assertAlmostEqual(distribution[label], 0.5, places=10)
        self.assertAlmostEqual(eigenvalues[4], 2.0, places=10)
        self.assertAlmostEqual(eigenvalues[0], 0.0, places=10)


if __name__ == '__main__':
    unittest.main()
