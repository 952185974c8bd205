"""
Finite-difference gradient descent on the filter values of one layer.
"""
import unittest

import numpy

from qspec.errors import InputError
from qspec.classical.convolution import FeatureMatrix
from qspec.classical.emulation import emulateLayerOutput, emulateOverlapTable
from qspec.inference.overlapEstimation import EstimationConfig
from qspec.inference.training import TrainConfig, TrainingData, loss, gradFd, fit, objective, layerFeatures, \
    perturbedInit, LengthMismatch, DivergenceDetected

from resources.instances import p2Basis


def polar(angle: float) -> numpy.ndarray:
    return numpy.array([numpy.cos(angle), numpy.sin(angle)])


class TestLoss(unittest.TestCase):

    def test_meanSquaredError(self):
        self.assertAlmostEqual(loss([0.8, 0.9], [1.0, 0.7]), 0.04, places=12)
        self.assertEqual(loss([0.5, 0.5], [0.5, 0.5]), 0.0)
        with self.assertRaises(LengthMismatch):
            loss([0.5], [0.5, 0.5])

    def test_gradFd(self):
        numpy.testing.assert_allclose(gradFd(lambda t: float(t @ t), [1., -2.], 1e-3), [2., -4.], atol=1e-9)
        numpy.testing.assert_allclose(gradFd(lambda t: float(numpy.sin(t[0])), [0.3], 1e-4), [numpy.cos(0.3)],
                                      atol=1e-8)


class TestFit(unittest.TestCase):
    """
    On the path graph with input (1, 0) the layer output only depends on the angle of theta, so a target produced
    by a known theta is reachable.
    """

    def setUp(self) -> None:
        self.basis = p2Basis()
        self.features = FeatureMatrix([1., 0.])
        self.thetaStar = polar(0.3 + numpy.pi / 4)
        self.theta0 = polar(0.6 + numpy.pi / 4)
        targets = emulateLayerOutput(emulateOverlapTable(self.features, self.basis), self.thetaStar, self.basis)[2]
        self.data = TrainingData(self.basis, self.features, targets)

    def test_converges(self):
        trace = fit(self.theta0, self.data, TrainConfig(epochs=200, learningRate=2.0))
        self.assertEqual(trace.epochs, 200)
        self.assertGreater(trace.losses[0], 0)
        self.assertLessEqual(trace.losses[-1], trace.losses[0] / 10)
        final = objective(self.data, TrainConfig())(trace.theta)
        self.assertLessEqual(final, trace.losses[0] / 10)

    def test_zeroLearningRate(self):
        trace = fit(self.theta0, self.data, TrainConfig(epochs=5, learningRate=0.0))
        numpy.testing.assert_array_equal(trace.theta, self.theta0)
        self.assertEqual(len(set(trace.losses)), 1)

    def test_singleUpdate(self):
        config = TrainConfig(epochs=1, learningRate=0.5)
        trace = fit(self.theta0, self.data, config)
        expected = self.theta0 - 0.5 * gradFd(objective(self.data, config), self.theta0, config.h)
        numpy.testing.assert_allclose(trace.theta, expected, atol=1e-15)
        self.assertEqual(len(trace.gradNorms), 1)

    def test_gradientRichardson(self):
        """
        Central differences err by O(h^2): halving h shrinks the change of the estimate fourfold.
        """
        function = objective(self.data, TrainConfig())
        h = 0.04
        coarse, mid, fine = (gradFd(function, self.theta0, step) for step in (h, h / 2, h / 4))
        ratio = numpy.linalg.norm(coarse - mid) / numpy.linalg.norm(mid - fine)
        self.assertAlmostEqual(ratio, 4.0, delta=0.5)

    def test_deterministic(self):
        config = TrainConfig(epochs=10, learningRate=1.0)
        first, second = fit(self.theta0, self.data, config), fit(self.theta0, self.data, config)
        self.assertEqual(first.losses, second.losses)
        numpy.testing.assert_array_equal(first.theta, second.theta)
        self.assertEqual(list(first.toDataFrame().columns), ["epoch", "loss", "grad_norm"])

    def test_customFunction(self):
        trace = fit([3., -2.], self.data, TrainConfig(epochs=100, learningRate=0.1),
                    function=lambda t: float(numpy.sum((t - 1) ** 2)))
        numpy.testing.assert_allclose(trace.theta, [1., 1.], atol=1e-6)

    def test_divergence(self):
        with self.assertRaises(DivergenceDetected):
            fit([1., 1.], self.data, TrainConfig(epochs=3), function=lambda t: 1e7)

    def test_quantumPath(self):
        estimation = EstimationConfig(q=8)
        with self.assertRaises(InputError):
            TrainConfig(path='quantum', h=1e-3, estimation=estimation)
        config = TrainConfig(epochs=1, learningRate=0.0, h=0.1, path='quantum', estimation=estimation)
        quantum = layerFeatures(self.theta0, self.data, config)
        oracle = layerFeatures(self.theta0, self.data, TrainConfig())
        self.assertEqual(len(quantum), 2)
        trace = fit(self.theta0, self.data, config)
        self.assertLess(abs(trace.losses[0] - loss(oracle, self.data.targets)), 0.01)

    def test_configErrors(self):
        for kwargs in ({"epochs": 0}, {"learningRate": -0.1}, {"h": 0.0}, {"path": 'classical'}):
            with self.assertRaises(InputError):
                TrainConfig(**kwargs)
        with self.assertRaises(LengthMismatch):
            TrainingData(self.basis, self.features, [0.5, 0.5, 0.5])

    def test_perturbedInit(self):
        numpy.testing.assert_array_equal(perturbedInit([1., 2.], 0.0, 3), [1., 2.])
        numpy.testing.assert_array_equal(perturbedInit([1., 2.], 0.1, 3), perturbedInit([1., 2.], 0.1, 3))

    def test_perturbedStart(self):
        config = TrainConfig(epochs=3, learningRate=0.0, seed=7, initScale=0.2)
        trace = fit(self.theta0, self.data, config)
        numpy.testing.assert_array_equal(trace.theta, perturbedInit(self.theta0, 0.2, 7))
        self.assertGreater(numpy.abs(trace.theta - self.theta0).max(), 0)
        self.assertEqual(trace.losses, fit(self.theta0, self.data, config).losses)
        other = fit(self.theta0, self.data, TrainConfig(epochs=3, learningRate=0.0, seed=8, initScale=0.2))
        self.assertFalse(numpy.array_equal(other.theta, trace.theta))
        with self.assertRaises(InputError):
            TrainConfig(initScale=-1.0)
        self.assertEqual(config.asDict()["init_scale"], 0.2)


if __name__ == '__main__':
    unittest.main()
