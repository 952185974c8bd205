"""
Eigendecomposition of the graph Laplacian and the truncated spectral basis V_d.

The eigenpairs are computed by exact diagonalization. The time evolution e^{iLt} and a phase-estimation
demonstration on the simulator are offered for the extraction by measurement.
"""
import logging
from typing import Dict, Tuple

import numpy
import scipy.linalg

from qspec.errors import InputError, InvariantViolation
from qspec.utils.baseAlgorithms import isPowerOfTwo, registerWidth
from qspec.graph.laplacian import Laplacian


class ConvergenceFailure(InvariantViolation):
    pass


class InvalidD(InputError):
    """
    Error to raise if the retained eigenpair count is out of range or not a power of two.
    """
    pass


EIGEN_ORDERS = ('largest', 'smallest')
degeneracyTolerance = 1e-9
"""Relative tolerance below which two eigenvalues count as equal for ordering."""


class SpectralDecomposition(object):
    """
    All eigenpairs of a Laplacian, eigenvalues in descending order, eigenvectors as columns.
    """

    def __init__(self, eigenvalues: numpy.ndarray, eigenvectors: numpy.ndarray):
        eigenvalues = numpy.array(eigenvalues, dtype=float)
        eigenvectors = numpy.array(eigenvectors, dtype=float)
        if eigenvectors.shape != (len(eigenvalues), len(eigenvalues)):
            raise InvariantViolation("Eigenvector matrix shape {} does not match {} eigenvalues.".format(
                eigenvectors.shape, len(eigenvalues)))
        if (numpy.diff(eigenvalues) > 0).any():
            raise InvariantViolation("Eigenvalues are not in descending order.")
        eigenvalues.setflags(write=False)
        eigenvectors.setflags(write=False)
        self._eigenvalues = eigenvalues
        self._eigenvectors = eigenvectors

    @property
    def eigenvalues(self) -> numpy.ndarray:
        return self._eigenvalues

    @property
    def eigenvectors(self) -> numpy.ndarray:
        return self._eigenvectors

    @property
    def n(self) -> int:
        return len(self._eigenvalues)

    def reconstruct(self) -> numpy.ndarray:
        """
        :return: V diag(lambda) V^T
        """
        return (self._eigenvectors * self._eigenvalues) @ self._eigenvectors.T


class SpectralBasis(object):
    """
    The d retained eigenpairs.
    """

    def __init__(self, vd: numpy.ndarray, lambdaD: numpy.ndarray):
        vd = numpy.array(vd, dtype=float)
        if vd.ndim == 1:
            vd = vd.reshape(-1, 1)
        lambdaD = numpy.array(lambdaD, dtype=float)
        if vd.shape[1] != len(lambdaD):
            raise InputError("V_d has {} columns but {} eigenvalues are given.".format(vd.shape[1], len(lambdaD)))
        if not isPowerOfTwo(vd.shape[1]) or vd.shape[1] > vd.shape[0]:
            raise InvalidD("d = {} must be a power of two between 1 and n = {}.".format(vd.shape[1], vd.shape[0]))
        vd.setflags(write=False)
        self._vd = vd
        self._lambdaD = lambdaD
        self._rowNorms = numpy.linalg.norm(vd, axis=1)

    @property
    def d(self) -> int:
        return self._vd.shape[1]

    @property
    def n(self) -> int:
        return self._vd.shape[0]

    @property
    def vd(self) -> numpy.ndarray:
        return self._vd

    @property
    def lambdaD(self) -> numpy.ndarray:
        return self._lambdaD

    @property
    def rowNorms(self) -> numpy.ndarray:
        """
        :return: The l2 norm of each of the n rows of V_d.
        """
        return self._rowNorms

    def projector(self) -> numpy.ndarray:
        """
        :return: V_d V_d^T, the orthogonal projector onto the retained eigenspace.
        """
        return self._vd @ self._vd.T

    def __repr__(self):
        return "SpectralBasis(n={}, d={})".format(self.n, self.d)


def _canonicalSigns(vectors: numpy.ndarray, atol: float = 1e-12) -> numpy.ndarray:
    """
    Flip each column so that its first component with magnitude above atol is positive.
    """
    vectors = vectors.copy()
    for c in range(vectors.shape[1]):
        significant = numpy.flatnonzero(numpy.abs(vectors[:, c]) > atol)
        if len(significant) and vectors[significant[0], c] < 0:
            vectors[:, c] *= -1
    return vectors


def eigendecompose(lap: Laplacian) -> SpectralDecomposition:
    """
    >>> from qspec.graph.laplacian import WeightedGraph, laplacian
    >>> dec = eigendecompose(laplacian(WeightedGraph([[0, 1], [1, 0]])))
    >>> dec.eigenvalues.round(12) + 0.0
    array([2., 0.])
    >>> (dec.eigenvectors * numpy.sqrt(2)).round(12)
    array([[ 1.,  1.],
           [-1.,  1.]])

    :param lap: A symmetric Laplacian.
    :return: All eigenpairs, eigenvalues descending, first significant component of each eigenvector positive.
        Columns of equal eigenvalues are ordered lexicographically by their components, largest first.
    """
    try:
        values, vectors = scipy.linalg.eigh(lap.entries)
    except numpy.linalg.LinAlgError as e:
        raise ConvergenceFailure("Eigensolver did not converge: {}".format(e))
    if not numpy.all(numpy.isfinite(values)):
        raise ConvergenceFailure("Eigensolver returned non-finite eigenvalues.")
    vectors = _canonicalSigns(vectors)
    scale = max(1.0, float(numpy.abs(values).max()))
    # numpy.lexsort treats the last key as primary: eigenvalue bucket, then components
    bucket = numpy.round(values / (degeneracyTolerance * scale))
    keys = [-vectors[i] for i in reversed(range(vectors.shape[0]))] + [-bucket]
    order = numpy.lexsort(keys)
    values, vectors = values[order], vectors[:, order]
    # bucketing may leave ties unsorted by less than the tolerance
    values = numpy.maximum.accumulate(values[::-1])[::-1]
    logging.getLogger(__name__).debug("Spectrum of %d nodes: %s", len(values), values)
    return SpectralDecomposition(values, vectors)


def topD(dec: SpectralDecomposition, d: int, order: str = 'largest') -> SpectralBasis:
    """
    >>> from qspec.graph.laplacian import WeightedGraph, laplacian
    >>> basis = topD(eigendecompose(laplacian(WeightedGraph([[0, 1], [1, 0]]))), 1)
    >>> basis.lambdaD.round(12), (basis.vd[:, 0] * numpy.sqrt(2)).round(12)
    (array([2.]), array([ 1., -1.]))

    :param dec: The full decomposition.
    :param d: Retained count, a power of two in 1..n.
    :param order: Retain the d largest (default) or the d smallest eigenvalues.
    :return: The truncated basis, eigenvalues descending for 'largest' and ascending for 'smallest'.
    """
    if order not in EIGEN_ORDERS:
        raise InputError("eigen_order must be one of {}, not {}.".format(EIGEN_ORDERS, order))
    if not isPowerOfTwo(d) or d > dec.n:
        raise InvalidD("d = {} must be a power of two between 1 and n = {}.".format(d, dec.n))
    if order == 'largest':
        columns = list(range(d))
    else:
        columns = list(range(dec.n - 1, dec.n - 1 - d, -1))
    return SpectralBasis(dec.eigenvectors[:, columns], dec.eigenvalues[columns])


def sampleEigenMeasurement(dec: SpectralDecomposition, shots: int, seed: int) -> numpy.ndarray:
    """
    Measuring the eigenvalue register after phase estimation of e^{iLt} on the maximally mixed state
    yields every eigenpair with probability 1/n.

    :param dec: The decomposition whose eigenpairs are sampled.
    :param shots: Number of measurements, at least 1.
    :param seed: Seed of the numpy random generator.
    :return: The measured eigenpair indices, one per shot.
    """
    if shots < 1:
        raise InputError("Need at least one shot, got {}.".format(shots))
    rng = numpy.random.default_rng(seed)
    return rng.integers(0, dec.n, size=shots)


def defaultEvolutionTime(dec: SpectralDecomposition) -> float:
    """
    t = pi / (2 lambda_max), which keeps every eigenphase lambda t / (2 pi) in [0, 1/4].
    """
    largest = float(dec.eigenvalues[0])
    return numpy.pi / (2 * largest) if largest > 0 else 1.0


def evolutionOperator(dec: SpectralDecomposition, t: float = None) -> numpy.ndarray:
    """
    Exact e^{iLt} = V diag(e^{i lambda t}) V^T.
    """
    if t is None:
        t = defaultEvolutionTime(dec)
    v = dec.eigenvectors
    return (v * numpy.exp(1j * dec.eigenvalues * t)) @ v.T


class _EvolutionUnitary(object):
    """
    e^{iLt} padded with identity to a register of power-of-two dimension, as an operator for phase estimation.
    """

    def __init__(self, unitary: numpy.ndarray, register: str, dimension: int):
        padded = numpy.eye(dimension, dtype=complex)
        padded[:unitary.shape[0], :unitary.shape[1]] = unitary
        self._matrix = padded
        self.registers = (register,)
        self.contextRegisters = ()

    def matrix(self, *context) -> numpy.ndarray:
        return self._matrix

    def apply(self, state, controls=None, inverse=False):
        from qspec.simulation.sparseState import applyBlock
        return applyBlock(state, self.registers, matrix=self._matrix.conj().T if inverse else self._matrix,
                          controls=controls)


def phaseEstimateEigenvalues(dec: SpectralDecomposition, q: int, t: float = None) -> Tuple[Dict[int, float],
                                                                                       Dict[int, float]]:
    """
    Phase estimation of e^{iLt} on the simulator, run on the maximally mixed state of the node register,
    purified by an index register that is prepared uniformly and copied onto the node register.

    :param dec: The decomposition defining L.
    :param q: Phase register width.
    :param t: Evolution time, defaults to defaultEvolutionTime.
    :return: The distribution of phase labels and the eigenvalue each observed label stands for,
        lambda = 2 pi label / (t 2^q).
    """
    from qspec.simulation.registers import Register, RegisterLayout
    from qspec.simulation.sparseState import init, cnotRegister
    from qspec.simulation.oracles import prepareUniform
    from qspec.simulation.phaseEstimation import phaseEstimate

    if t is None:
        t = defaultEvolutionTime(dec)
    width = registerWidth(dec.n)
    layout = RegisterLayout([Register('I', width), Register('S', width), Register('P', q, 'phase')])
    state = init(layout)
    state = prepareUniform(state, 'I', dec.n)
    state = cnotRegister(state, 'I', 'S')
    operator = _EvolutionUnitary(evolutionOperator(dec, t), 'S', 1 << width)
    state = phaseEstimate(state, operator, 'P')
    distribution = {label: p for (label,), p in state.probabilities(['P']).items()}
    eigenvalues = {label: 2 * numpy.pi * label / (t * (1 << q)) for label in distribution}
    return distribution, eigenvalues
