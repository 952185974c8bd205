"""
Classical spectral graph convolution, the reference the quantum layer is compared with.

A layer maps input feature columns x_i to output columns x_j = h(V sum_i F_ij V^T x_i) with diagonal kernels F_ij,
either in the full eigenbasis V or in the truncated basis V_d.
"""
from typing import List, Sequence, Union

import numpy

from qspec.errors import InputError
from qspec.graph.spectral import SpectralBasis


class DimensionMismatch(InputError):
    pass


class ZeroNormColumn(InputError):
    """
    Error to raise if a feature column that must be amplitude-encoded is all zero.
    """
    pass


class FeatureMatrix(object):
    """
    n x f node features, one column per feature, with the l2 norm of every column.
    """

    def __init__(self, x: Union[numpy.ndarray, Sequence], allowZeroColumns: bool = False):
        """
        :param x: The n x f feature values. A one-dimensional input is a single feature column.
        :param allowZeroColumns: Accept all-zero columns, as a classical layer may produce them.
        """
        x = numpy.array(x, dtype=float)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
            raise DimensionMismatch("Features must be a non-empty n x f matrix, got shape {}.".format(x.shape))
        if not numpy.all(numpy.isfinite(x)):
            raise InputError("Features contain non-finite values.")
        norms = numpy.linalg.norm(x, axis=0)
        if not allowZeroColumns and (norms == 0).any():
            raise ZeroNormColumn("Feature column {} is all zero.".format(int(numpy.flatnonzero(norms == 0)[0])))
        x.setflags(write=False)
        self._x = x
        self._columnNorms = norms

    @property
    def x(self) -> numpy.ndarray:
        return self._x

    @property
    def n(self) -> int:
        return self._x.shape[0]

    @property
    def f(self) -> int:
        return self._x.shape[1]

    @property
    def columnNorms(self) -> numpy.ndarray:
        return self._columnNorms

    def normalized(self) -> numpy.ndarray:
        """
        :return: The columns scaled to unit l2 norm.
        """
        if (self._columnNorms == 0).any():
            raise ZeroNormColumn("Cannot normalize an all-zero feature column.")
        return self._x / self._columnNorms

    def __repr__(self):
        return "FeatureMatrix(n={}, f={})".format(self.n, self.f)


class FilterBank(object):
    """
    Diagonal kernels of all layers. Layer s is an array of shape (f_{s-1}, f_s, d):
    kernel (i, j) is the diagonal of F_{s,i,j}.
    """

    def __init__(self, layers: Sequence[numpy.ndarray]):
        arrays = list()
        for s, layer in enumerate(layers):
            layer = numpy.array(layer, dtype=float)
            if layer.ndim != 3:
                raise DimensionMismatch("Layer {} kernels must have shape (f_in, f_out, d), got {}.".format(
                    s, layer.shape))
            if not numpy.all(numpy.isfinite(layer)):
                raise InputError("Layer {} kernels contain non-finite values.".format(s))
            if arrays and arrays[-1].shape[1] != layer.shape[0]:
                raise DimensionMismatch("Layer {} expects {} input features, the previous layer yields {}.".format(
                    s, layer.shape[0], arrays[-1].shape[1]))
            if arrays and arrays[-1].shape[2] != layer.shape[2]:
                raise DimensionMismatch("All layers need kernels of the same length.")
            layer.setflags(write=False)
            arrays.append(layer)
        if not arrays:
            raise InputError("A filter bank needs at least one layer.")
        self._layers = arrays

    @property
    def layers(self) -> List[numpy.ndarray]:
        return list(self._layers)

    def __len__(self):
        return len(self._layers)

    def __getitem__(self, s) -> numpy.ndarray:
        return self._layers[s]


class ActivationSpec(object):
    """
    Element-wise activation h. cos_readout is the effective activation of the quantum layer,
    x -> sqrt((1 + x^2) / 2) with x clipped to [-1, 1].

    >>> ActivationSpec('relu')(numpy.array([-1., 2.]))
    array([0., 2.])
    >>> ActivationSpec('cos_readout')(numpy.array([0., 1.])).round(6)
    array([0.707107, 1.      ])
    """

    KINDS = ('identity', 'relu', 'tanh', 'cos_readout')

    def __init__(self, kind: str = 'identity'):
        if kind not in ActivationSpec.KINDS:
            raise InputError("Unknown activation {}, choose from {}.".format(kind, ActivationSpec.KINDS))
        self._kind = kind

    @property
    def kind(self) -> str:
        return self._kind

    def __call__(self, values: numpy.ndarray) -> numpy.ndarray:
        values = numpy.asarray(values, dtype=float)
        if self._kind == 'relu':
            return numpy.maximum(values, 0.0)
        if self._kind == 'tanh':
            return numpy.tanh(values)
        if self._kind == 'cos_readout':
            return numpy.sqrt((1 + numpy.clip(values, -1.0, 1.0) ** 2) / 2)
        return values.copy()

    def __repr__(self):
        return "ActivationSpec({})".format(self._kind)


def _filter(features: FeatureMatrix, basis: numpy.ndarray, kernels: numpy.ndarray,
            h: ActivationSpec) -> FeatureMatrix:
    kernels = numpy.asarray(kernels, dtype=float)
    if basis.shape[0] != features.n:
        raise DimensionMismatch("Basis has {} rows but there are {} nodes.".format(basis.shape[0], features.n))
    if kernels.ndim != 3 or kernels.shape[0] != features.f or kernels.shape[2] != basis.shape[1]:
        raise DimensionMismatch("Kernels of shape {} do not fit {} input features and {} basis vectors.".format(
            kernels.shape, features.f, basis.shape[1]))
    spectrum = basis.T @ features.x  # k x i
    filtered = numpy.einsum('ijk,ki->kj', kernels, spectrum)
    return FeatureMatrix(h(basis @ filtered), allowZeroColumns=True)


def convLayerFull(features: FeatureMatrix, eigenvectors: numpy.ndarray, kernels: numpy.ndarray,
                  h: ActivationSpec = ActivationSpec()) -> FeatureMatrix:
    """
    >>> v = numpy.array([[1., 1.], [-1., 1.]]) / numpy.sqrt(2)
    >>> convLayerFull(FeatureMatrix([1., 0.]), v, numpy.ones((1, 1, 2))).x.round(12) + 0.0
    array([[1.],
           [0.]])

    :param features: The n x f_in layer input.
    :param eigenvectors: The full n x n eigenvector matrix V.
    :param kernels: Array of shape (f_in, f_out, n) with the kernel diagonals.
    :param h: The activation.
    :return: The n x f_out layer output.
    """
    eigenvectors = numpy.asarray(eigenvectors, dtype=float)
    if eigenvectors.shape != (features.n, features.n):
        raise DimensionMismatch("Full eigenbasis must be {0} x {0}, got {1}.".format(features.n, eigenvectors.shape))
    return _filter(features, eigenvectors, kernels, h)


def convLayerTruncated(features: FeatureMatrix, basis: SpectralBasis, kernels: numpy.ndarray,
                       h: ActivationSpec = ActivationSpec()) -> FeatureMatrix:
    """
    Same as convLayerFull in the retained basis V_d; kernels have shape (f_in, f_out, d).
    """
    return _filter(features, basis.vd, kernels, h)
