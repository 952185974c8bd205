"""
Gradient descent on the filter values theta of one layer, with central finite differences of a mean squared
error against per-node targets. The layer is evaluated by its emulation (oracle path) or by the simulated
circuits (quantum path).
"""
import logging
from typing import Callable, List, Sequence

import numpy

from qspec.errors import InputError, InvariantViolation
from qspec.graph.spectral import SpectralBasis
from qspec.classical.convolution import FeatureMatrix
from qspec.classical.emulation import emulateLayerOutput, emulateOverlapTable, VARIANTS
from qspec.inference.overlapEstimation import EstimationConfig, OverlapTable, estimateAllOverlaps
from qspec.inference.convolutionPipeline import runLayer

PATHS = ('oracle', 'quantum')


class LengthMismatch(InputError):
    pass


class DivergenceDetected(InvariantViolation):
    """
    Error to raise if the loss grows beyond the divergence bound during training.
    """
    pass


class TrainConfig(object):
    """
    Settings of the descent loop.
    """

    def __init__(self, epochs: int = 200, learningRate: float = 0.1, h: float = 1e-3, path: str = 'oracle',
                 seed: int = 0, estimation: EstimationConfig = None, divergenceBound: float = 1e6,
                 initScale: float = 0.0):
        """
        :param epochs: Number of updates, at least 1.
        :param learningRate: Step size, 0 leaves theta unchanged.
        :param h: Finite-difference step. On the quantum path at least 4 pi / 2^q, the granularity of the phase
            readout, since smaller steps mostly measure its rounding.
        :param path: oracle (default) or quantum.
        :param seed: Seed of the random perturbation of initial values.
        :param initScale: Standard deviation of that perturbation, 0 starts from the given values.
        :param estimation: Settings of the quantum path.
        :param divergenceBound: Loss above which training is aborted.
        """
        if epochs < 1:
            raise InputError("epochs must be at least 1, not {}.".format(epochs))
        if learningRate < 0:
            raise InputError("learning rate must not be negative, got {}.".format(learningRate))
        if not h > 0:
            raise InputError("Finite-difference step must be positive, got {}.".format(h))
        if initScale < 0:
            raise InputError("Perturbation scale must not be negative, got {}.".format(initScale))
        if path not in PATHS:
            raise InputError("path must be one of {}, not {}.".format(PATHS, path))
        self.estimation = estimation if estimation is not None else EstimationConfig()
        if path == 'quantum' and h < 4 * numpy.pi / (1 << self.estimation.q):
            raise InputError("Step {} is below 4 pi / 2^q = {:.6f}, the quantum readout granularity.".format(
                h, 4 * numpy.pi / (1 << self.estimation.q)))
        self.epochs = epochs
        self.learningRate = learningRate
        self.h = h
        self.path = path
        self.seed = seed
        self.divergenceBound = divergenceBound
        self.initScale = initScale

    def asDict(self):
        return {"epochs": self.epochs, "learning_rate": self.learningRate, "h": self.h, "path": self.path,
                "seed": self.seed, "init_scale": self.initScale, "estimation": self.estimation.asDict()}


class TrainingData(object):
    """
    The fixed parts of a training problem: basis, layer input, and the per-node targets.
    """

    def __init__(self, basis: SpectralBasis, features: FeatureMatrix, targets: Sequence[float],
                 variant: str = 'swap'):
        targets = numpy.asarray(targets, dtype=float).ravel()
        if len(targets) != basis.n:
            raise LengthMismatch("{} targets for {} nodes.".format(len(targets), basis.n))
        if variant not in VARIANTS:
            raise InputError("Unknown readout variant {}, choose from {}.".format(variant, VARIANTS))
        self.basis = basis
        self.features = features
        self.targets = targets
        self.variant = variant
        self._overlaps = None
        self._estimated = dict()

    def oracleOverlaps(self) -> numpy.ndarray:
        if self._overlaps is None:
            self._overlaps = emulateOverlapTable(self.features, self.basis)
        return self._overlaps

    def estimatedOverlaps(self, config: EstimationConfig) -> OverlapTable:
        """
        The overlap estimates do not depend on theta, so they are computed once per configuration.
        """
        key = tuple(sorted(config.asDict().items()))
        if key not in self._estimated:
            self._estimated[key] = estimateAllOverlaps(self.features, self.basis, config)
        return self._estimated[key]


class TrainTrace(object):
    """
    Loss and gradient norm of every epoch, measured before its update, and the final theta.
    """

    def __init__(self, losses: List[float], gradNorms: List[float], theta: numpy.ndarray):
        if len(losses) != len(gradNorms):
            raise InvariantViolation("{} losses but {} gradient norms.".format(len(losses), len(gradNorms)))
        self.losses = list(losses)
        self.gradNorms = list(gradNorms)
        self.theta = numpy.asarray(theta, dtype=float)

    @property
    def epochs(self) -> int:
        return len(self.losses)

    def toDataFrame(self):
        import pandas
        return pandas.DataFrame({"epoch": range(self.epochs), "loss": self.losses, "grad_norm": self.gradNorms},
                                columns=["epoch", "loss", "grad_norm"])

    def __repr__(self):
        return "TrainTrace(epochs={}, final loss={})".format(self.epochs, self.losses[-1] if self.losses else None)


def loss(output: Sequence[float], targets: Sequence[float]) -> float:
    """
    >>> round(loss([0.8, 0.9], [1.0, 0.7]), 12)
    0.04

    :return: Mean squared error.
    :raises LengthMismatch: if the lengths differ.
    """
    output = numpy.asarray(output, dtype=float).ravel()
    targets = numpy.asarray(targets, dtype=float).ravel()
    if len(output) != len(targets):
        raise LengthMismatch("{} outputs for {} targets.".format(len(output), len(targets)))
    return float(numpy.mean((output - targets) ** 2))


def layerFeatures(theta: Sequence[float], data: TrainingData, config: TrainConfig) -> numpy.ndarray:
    """
    The n output features of the layer for filter values theta, on the configured path.
    """
    if config.path == 'oracle':
        return emulateLayerOutput(data.oracleOverlaps(), theta, data.basis, data.variant)[2]
    overlaps = data.estimatedOverlaps(config.estimation)
    return runLayer(data.features, data.basis, theta, config.estimation, variant=data.variant,
                    oracleFeatures=numpy.zeros(data.basis.n), overlaps=overlaps).features


def objective(data: TrainingData, config: TrainConfig) -> Callable[[numpy.ndarray], float]:
    """
    :return: theta -> loss of the layer output against the targets.
    """
    return lambda theta: loss(layerFeatures(theta, data, config), data.targets)


def gradFd(function: Callable[[numpy.ndarray], float], theta: Sequence[float], h: float) -> numpy.ndarray:
    """
    Central differences (L(theta + h e_k) - L(theta - h e_k)) / 2h.

    >>> gradFd(lambda t: float(t @ t), [1., -2.], 1e-3).round(9)
    array([ 2., -4.])
    """
    theta = numpy.asarray(theta, dtype=float)
    gradient = numpy.zeros(len(theta))
    for k in range(len(theta)):
        step = numpy.zeros(len(theta))
        step[k] = h
        gradient[k] = (function(theta + step) - function(theta - step)) / (2 * h)
    return gradient


def perturbedInit(theta: Sequence[float], scale: float, seed: int) -> numpy.ndarray:
    """
    theta plus normally distributed noise of the given standard deviation.
    """
    theta = numpy.asarray(theta, dtype=float)
    return theta + scale * numpy.random.default_rng(seed).standard_normal(len(theta))


def fit(theta: Sequence[float], data: TrainingData, config: TrainConfig,
        function: Callable[[numpy.ndarray], float] = None) -> TrainTrace:
    """
    Plain gradient descent, epochs updates theta <- theta - learningRate * gradient.

    :param theta: Initial filter values, perturbed by perturbedInit with config.initScale and config.seed.
    :param data: The training problem.
    :param config: Loop settings.
    :param function: Loss to minimize instead of the layer objective of data.
    :raises DivergenceDetected: if the loss exceeds config.divergenceBound.
    """
    function = function if function is not None else objective(data, config)
    theta = perturbedInit(theta, config.initScale, config.seed)
    losses, gradNorms = list(), list()
    for epoch in range(config.epochs):
        value = function(theta)
        if not numpy.isfinite(value) or value > config.divergenceBound:
            raise DivergenceDetected("Loss {} in epoch {} exceeds {}.".format(value, epoch, config.divergenceBound))
        gradient = gradFd(function, theta, config.h)
        losses.append(value)
        gradNorms.append(float(numpy.linalg.norm(gradient)))
        theta = theta - config.learningRate * gradient
        logging.getLogger(__name__).debug("Epoch %d: loss %.6e, gradient norm %.3e.", epoch, value, gradNorms[-1])
    logging.getLogger(__name__).info("Trained %d epochs, loss %.6e -> %.6e.", config.epochs, losses[0], losses[-1])
    return TrainTrace(losses, gradNorms, theta)
