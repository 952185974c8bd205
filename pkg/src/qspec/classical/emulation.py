"""
Exact emulation of what the quantum layer computes, stage by stage.

These values are the oracle every quantum-path result is checked against. They work on l2-normalized
feature columns and eigenvector rows, as the amplitude-encoding circuits do.
"""
import logging
from typing import List, Sequence, Tuple

import numpy

from qspec.errors import InputError
from qspec.graph.spectral import SpectralBasis
from qspec.classical.convolution import FeatureMatrix, ZeroNormColumn, DimensionMismatch

VARIANTS = ('swap', 'interference')
"""Layer readouts: the exchange test (sign lost) and the sign-preserving interference test."""


class ZeroEta(InputError):
    """
    Error to raise if all filtered spectral sums vanish, so the next layer is undefined.
    """
    pass


class ZeroNormRow(InputError):
    pass


def emulateOverlapTable(features: FeatureMatrix, basis: SpectralBasis) -> numpy.ndarray:
    """
    >>> from qspec.graph.spectral import SpectralBasis
    >>> basis = SpectralBasis(numpy.array([[1.], [1.]]) / numpy.sqrt(2), [0.])
    >>> emulateOverlapTable(FeatureMatrix([3., 4.]), basis).round(5)
    array([[0.98995]])

    :return: f_s x d matrix of the dot products of normalized feature columns and normalized eigenvectors.
    """
    if features.n != basis.n:
        raise DimensionMismatch("Features have {} rows, the basis {}.".format(features.n, basis.n))
    if (features.columnNorms == 0).any():
        raise ZeroNormColumn("Feature column {} is all zero.".format(
            int(numpy.flatnonzero(features.columnNorms == 0)[0])))
    vd = basis.vd / numpy.linalg.norm(basis.vd, axis=0)
    return numpy.clip(features.normalized().T @ vd, -1.0, 1.0)


def rescaledOverlaps(overlaps: numpy.ndarray, features: FeatureMatrix) -> numpy.ndarray:
    """
    Undo the column normalization: entry (j, k) becomes ||x_j|| <x_j/||x_j||, v_k>, i.e. the raw V_d^T x_j.
    """
    overlaps = numpy.asarray(overlaps, dtype=float)
    if overlaps.shape[0] != features.f:
        raise DimensionMismatch("{} overlap rows for {} features.".format(overlaps.shape[0], features.f))
    return overlaps * features.columnNorms[:, None]


def spectralSums(overlaps: numpy.ndarray, theta: Sequence[float]) -> numpy.ndarray:
    """
    >>> spectralSums(numpy.array([[0.3, 0.2], [0.5, -0.2]]), [1., 2.])
    array([0.8, 0. ])

    :return: s_k = sum_j theta_k overlap(j, k)
    """
    overlaps = numpy.asarray(overlaps, dtype=float)
    theta = numpy.asarray(theta, dtype=float)
    if overlaps.ndim != 2 or overlaps.shape[1] != len(theta):
        raise DimensionMismatch("Overlap table of shape {} does not fit {} filter values.".format(
            overlaps.shape, len(theta)))
    return theta * overlaps.sum(axis=0)


def normalizationConstant(sums: numpy.ndarray) -> float:
    """
    C = max_k |s_k|, 1 if all sums vanish.
    """
    largest = float(numpy.max(numpy.abs(sums)))
    return largest if largest > 0 else 1.0


def normalizedRows(basis: SpectralBasis) -> numpy.ndarray:
    """
    :return: The n rows of V_d, each scaled to unit norm.
    """
    if (basis.rowNorms == 0).any():
        raise ZeroNormRow("Row {} of V_d is zero, node has no weight in the retained eigenspace.".format(
            int(numpy.flatnonzero(basis.rowNorms == 0)[0])))
    return basis.vd / basis.rowNorms[:, None]


def readout(dots: numpy.ndarray, variant: str = 'swap') -> numpy.ndarray:
    """
    cos(alpha) of the readout test for given dot products x of unit vectors:
    sqrt((1 + x^2) / 2) for the exchange test, sqrt((1 + x) / 2) for the interference test.

    >>> readout(numpy.array([0., 1.])).round(6)
    array([0.707107, 1.      ])
    >>> readout(numpy.array([-1., 0.]), 'interference').round(6)
    array([0.      , 0.707107])
    """
    if variant not in VARIANTS:
        raise InputError("Unknown readout variant {}, choose from {}.".format(variant, VARIANTS))
    dots = numpy.clip(dots, -1.0, 1.0)
    if variant == 'swap':
        return numpy.sqrt((1 + dots ** 2) / 2)
    return numpy.sqrt((1 + dots) / 2)


def emulateLayerOutput(overlaps: numpy.ndarray, theta: Sequence[float], basis: SpectralBasis,
                       variant: str = 'swap') -> Tuple[numpy.ndarray, float, numpy.ndarray, float]:
    """
    >>> from qspec.graph.spectral import SpectralBasis
    >>> basis = SpectralBasis(numpy.eye(2), [1., 0.])
    >>> eta, c, out, prob = emulateLayerOutput(numpy.array([[0.6, -0.3]]), [1., 1.], basis)
    >>> eta, c, round(prob, 6)
    (array([ 1. , -0.5]), 0.6, 0.625)

    :param overlaps: f_s x d overlap table.
    :param theta: The d filter values.
    :param basis: The retained basis whose rows are compared with the filtered state.
    :param variant: Readout test, swap (default) or the sign-preserving interference.
    :return: eta, C, the n output features, and the probability of post-selecting the rotation ancilla on 0.
    :raises ZeroEta: if all spectral sums vanish.
    """
    sums = spectralSums(overlaps, theta)
    if not numpy.any(sums):
        raise ZeroEta("All filtered spectral sums are zero, the next layer is undefined.")
    if len(sums) != basis.d:
        raise DimensionMismatch("{} spectral sums for a basis of d = {}.".format(len(sums), basis.d))
    c = normalizationConstant(sums)
    eta = sums / c
    filtered = eta / numpy.linalg.norm(eta)
    out = readout(normalizedRows(basis) @ filtered, variant)
    postselect = float(numpy.sum(eta ** 2) / basis.d)
    return eta, c, out, postselect


def emulateForward(features: FeatureMatrix, thetas: Sequence[numpy.ndarray], basis: SpectralBasis,
                   variant: str = 'swap') -> List[FeatureMatrix]:
    """
    Layer after layer emulation. Layer s has a (f_s, d) array of filter vectors, each producing one output column
    that feeds the next layer.

    :return: The output features of every layer.
    """
    outputs = list()
    for s, layer in enumerate(thetas):
        layer = numpy.atleast_2d(numpy.asarray(layer, dtype=float))
        overlaps = emulateOverlapTable(features, basis)
        columns = [emulateLayerOutput(overlaps, theta, basis, variant)[2] for theta in layer]
        features = FeatureMatrix(numpy.column_stack(columns))
        logging.getLogger(__name__).debug("Emulated layer %d: %d output columns.", s, features.f)
        outputs.append(features)
    return outputs
