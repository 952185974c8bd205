"""
Classical spectral convolution and the exact emulation of the quantum layer.
"""
import unittest

import numpy

from qspec.graph.spectral import SpectralBasis
from qspec.classical.convolution import FeatureMatrix, FilterBank, ActivationSpec, convLayerFull, \
    convLayerTruncated, DimensionMismatch, ZeroNormColumn
from qspec.classical.emulation import emulateOverlapTable, rescaledOverlaps, spectralSums, emulateLayerOutput, \
    emulateForward, readout, ZeroEta

from resources.instances import p2Basis, randomInstance


class TestConvolution(unittest.TestCase):

    def setUp(self) -> None:
        self.basis = p2Basis()
        self.x = FeatureMatrix([1., 0.])

    def test_identityPipeline(self):
        x = FeatureMatrix(numpy.array([[0.3], [-1.2], [2.0]]))
        numpy.testing.assert_allclose(convLayerFull(x, numpy.eye(3), numpy.ones((1, 1, 3))).x, x.x)

    def test_zeroKernel(self):
        out = convLayerFull(self.x, self.basis.vd, numpy.zeros((1, 1, 2)), ActivationSpec('cos_readout'))
        numpy.testing.assert_allclose(out.x, numpy.full((2, 1), numpy.sqrt(0.5)))

    def test_identityFilter(self):
        out = convLayerFull(self.x, self.basis.vd, numpy.ones((1, 1, 2)))
        numpy.testing.assert_allclose(out.x[:, 0], [1, 0], atol=1e-12)

    def test_truncated(self):
        out = convLayerTruncated(self.x, p2Basis(1), numpy.ones((1, 1, 1)))
        numpy.testing.assert_allclose(out.x[:, 0], [0.5, -0.5], atol=1e-12)
        full = convLayerTruncated(self.x, self.basis, numpy.ones((1, 1, 2)))
        numpy.testing.assert_allclose(full.x, convLayerFull(self.x, self.basis.vd, numpy.ones((1, 1, 2))).x)

    def test_linearity(self):
        _, features, basis = randomInstance(8, 2, 4, 3)
        kernels = numpy.random.default_rng(4).normal(size=(2, 3, 4))
        numpy.testing.assert_allclose(convLayerTruncated(features, basis, 2.5 * kernels).x,
                                      2.5 * convLayerTruncated(features, basis, kernels).x, atol=1e-12)

    def test_projectorIdempotence(self):
        _, features, basis = randomInstance(8, 1, 4, 7)
        kernels = numpy.ones((1, 1, 4))
        once = convLayerTruncated(features, basis, kernels)
        numpy.testing.assert_allclose(once.x, basis.projector() @ features.x, atol=1e-10)
        numpy.testing.assert_allclose(convLayerTruncated(once, basis, kernels).x, once.x, atol=1e-10)

    def test_shapes(self):
        with self.assertRaises(DimensionMismatch):
            convLayerTruncated(self.x, self.basis, numpy.ones((2, 1, 2)))
        with self.assertRaises(DimensionMismatch):
            FilterBank([numpy.ones((1, 2, 2)), numpy.ones((3, 1, 2))])
        with self.assertRaises(ZeroNormColumn):
            FeatureMatrix([0., 0.])
        self.assertEqual(len(FilterBank([numpy.ones((1, 2, 2)), numpy.ones((2, 1, 2))])), 2)


class TestEmulation(unittest.TestCase):

    def test_overlaps(self):
        basis = SpectralBasis(numpy.array([[1.], [1.]]) / numpy.sqrt(2), [0.])
        self.assertAlmostEqual(emulateOverlapTable(FeatureMatrix([3., 4.]), basis)[0, 0], 7 / (5 * numpy.sqrt(2)))
        self.assertAlmostEqual(emulateOverlapTable(FeatureMatrix([1., 1.]), basis)[0, 0], 1.0)
        self.assertAlmostEqual(emulateOverlapTable(FeatureMatrix([1., -1.]), basis)[0, 0], 0.0)

    def test_rescaledOverlaps(self):
        _, features, basis = randomInstance(8, 2, 2, 6)
        numpy.testing.assert_allclose(rescaledOverlaps(emulateOverlapTable(features, basis), features),
                                      features.x.T @ basis.vd, atol=1e-12)

    def test_eta(self):
        eta, c, out, prob = emulateLayerOutput(numpy.array([[0.6, -0.3]]), [1., 1.],
                                               SpectralBasis(numpy.eye(2), [1., 0.]))
        numpy.testing.assert_allclose(eta, [1, -0.5])
        self.assertAlmostEqual(c, 0.6)
        self.assertAlmostEqual(prob, 0.625)

    def test_readoutBounds(self):
        basis = SpectralBasis(numpy.eye(2), [1., 0.])
        # f = e_0 is parallel to row 0 and orthogonal to row 1
        out = emulateLayerOutput(numpy.array([[0.5, 0.0]]), [1., 1.], basis)[2]
        numpy.testing.assert_allclose(out, [1, numpy.sqrt(0.5)])
        dots = numpy.linspace(-1, 1, 11)
        for variant, low in (('swap', numpy.sqrt(0.5)), ('interference', 0.0)):
            values = readout(dots, variant)
            self.assertTrue((values >= low - 1e-12).all() and (values <= 1 + 1e-12).all())

    def test_signInvariance(self):
        _, features, basis = randomInstance(8, 2, 2, 8)
        overlaps = emulateOverlapTable(features, basis)
        theta = [0.9, -1.1]
        numpy.testing.assert_allclose(emulateLayerOutput(-overlaps, theta, basis)[2],
                                      emulateLayerOutput(overlaps, theta, basis)[2], atol=1e-12)

    def test_matchesClassicalLayer(self):
        """
        The readout of the filtered, normalized state is the cos_readout activation of the normalized classical
        convolution row by row.
        """
        _, features, basis = randomInstance(8, 1, 2, 9)
        theta = numpy.array([0.7, 1.3])
        out = emulateLayerOutput(emulateOverlapTable(features, basis), theta, basis)[2]
        unit = FeatureMatrix(features.normalized())
        spectrum = theta * (basis.vd.T @ unit.x[:, 0])
        rows = basis.vd / basis.rowNorms[:, None]
        expected = ActivationSpec('cos_readout')(rows @ spectrum / numpy.linalg.norm(spectrum))
        numpy.testing.assert_allclose(out, expected, atol=1e-12)

    def test_zeroFilters(self):
        with self.assertRaises(ZeroEta):
            emulateLayerOutput(numpy.array([[0.3, 0.2]]), [0., 0.], p2Basis())
        numpy.testing.assert_allclose(spectralSums(numpy.array([[0.3, 0.2], [0.5, -0.2]]), [1., 2.]), [0.8, 0.0],
                                      atol=1e-12)

    def test_forward(self):
        outputs = emulateForward(FeatureMatrix([1., 0.]), [numpy.array([[1., 1.]]), numpy.array([[1., 1.]])],
                                 p2Basis())
        self.assertEqual(len(outputs), 2)
        numpy.testing.assert_allclose(outputs[0].x[:, 0], [1, numpy.sqrt(0.5)], atol=1e-12)
        self.assertTrue((outputs[1].x >= numpy.sqrt(0.5) - 1e-12).all())


if __name__ == '__main__':
    unittest.main()
