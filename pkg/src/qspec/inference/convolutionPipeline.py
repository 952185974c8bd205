"""
One quantum convolution layer: filter the estimated spectral coefficients with theta, amplitude-encode the
result by a controlled rotation, compare it with every row of V_d by an exchange test, and read the comparison
out by amplitude estimation.

Arithmetic stage, registers
    K      eigenvector index                   log2 d qubits
    OV_j   estimated overlap of feature j      fixed point, one per feature
    TH     theta_k                             fixed point
    PR_j   theta_k * overlap(j, k)             fixed point
    SUM    s_k = sum_j PR_j                    fixed point
    RT     rotation ancilla, later the exchange-test flag
Readout stage, registers
    A      node index p                        ceil(log2 n) qubits
    B      row v_p of V_d                      log2 d qubits
    C      phase                               q qubits
    COSA   cos(alpha~_p)                       fixed point
"""
import logging
from typing import Dict, List, Sequence, Tuple

import numpy
from scipy.linalg import hadamard

from qspec.errors import InputError, InvariantViolation
from qspec.utils.baseAlgorithms import registerWidth
from qspec.graph.laplacian import WeightedGraph, laplacian
from qspec.graph.spectral import SpectralBasis, eigendecompose, topD
from qspec.classical.convolution import FeatureMatrix, DimensionMismatch
from qspec.classical.emulation import emulateLayerOutput, emulateOverlapTable, ZeroEta, VARIANTS
from qspec.simulation.registers import Register, RegisterLayout
from qspec.simulation.sparseState import QState, init, addRegisters, dropRegisters, hadamardAll, controlledSwap, \
    applyBlock, measure, sample, ZeroProbabilityOutcome, UncomputeResidual
from qspec.simulation.oracles import PreparationOracle, StatePreparation, GroverOperator, householder, \
    applyUPrepare, prepareUniform
from qspec.simulation.phaseEstimation import phaseEstimate
from qspec.simulation.arithmetic import fixedPointOp, loadTable
from qspec.inference.overlapEstimation import EstimationConfig, OverlapTable, estimateAllOverlaps, interferenceUnitary
from qspec.validation.budgets import maxAbsError

ETA_TOLERANCE = 1e-12


class ThetaOutOfRange(InputError):
    pass


class EtaExceedsOne(InvariantViolation):
    """
    Error to raise if the normalization constant is smaller than a spectral sum.
    """
    pass


class ZeroPostselectProbability(InvariantViolation):
    pass


class EtaVector(object):
    """
    Filtered spectral sums and their normalization as amplitude-encoded by the rotation.
    """

    def __init__(self, s: numpy.ndarray, c: float, postselectProb: float = None):
        s = numpy.asarray(s, dtype=float)
        if not c > 0:
            raise InvariantViolation("Normalization constant must be positive, got {}.".format(c))
        eta = s / c
        if (numpy.abs(eta) > 1 + ETA_TOLERANCE).any():
            raise EtaExceedsOne("C = {} is smaller than max |s_k| = {}.".format(c, numpy.abs(s).max()))
        self.s = s
        self.c = float(c)
        self.eta = eta
        self.postselectProb = float(numpy.sum(eta ** 2) / len(eta)) if postselectProb is None else postselectProb

    @property
    def d(self) -> int:
        return len(self.eta)

    def filtered(self) -> numpy.ndarray:
        """
        :return: f = eta / ||eta||
        """
        norm = numpy.linalg.norm(self.eta)
        if norm == 0:
            raise ZeroEta("All spectral sums are zero.")
        return self.eta / norm

    def __repr__(self):
        return "EtaVector(eta={}, C={})".format(self.eta, self.c)


class LayerOutput(object):
    """
    Features of one output column of a layer, one per node, with the oracle they are compared with.
    """

    def __init__(self, layer: int, alphaTilde: Sequence[int], features: Sequence[float],
                 oracleFeatures: Sequence[float], eta: EtaVector, config: EstimationConfig,
                 variant: str = 'swap', diagnostics: Dict[str, float] = None, overlaps: OverlapTable = None):
        self.layer = layer
        self.alphaTilde = list(alphaTilde)
        self.features = numpy.asarray(features, dtype=float)
        self.oracleFeatures = numpy.asarray(oracleFeatures, dtype=float)
        self.eta = eta
        self.config = config
        self.variant = variant
        self.diagnostics = dict(diagnostics) if diagnostics else dict()
        self.overlaps = overlaps

    @property
    def maxAbsError(self) -> float:
        return maxAbsError(self.features, self.oracleFeatures)

    @property
    def postselectProb(self) -> float:
        return self.eta.postselectProb

    def asDict(self) -> Dict:
        return {"layer": self.layer, "eta": self.eta.eta.tolist(), "C": self.eta.c,
                "postselect_prob": self.postselectProb, "features": self.features.tolist(),
                "oracle": self.oracleFeatures.tolist(), "max_abs_error": self.maxAbsError,
                "q": self.config.q, "b_frac": self.config.fixedPoint.fracBits, "variant": self.variant,
                "diagnostics": self.diagnostics}

    def __repr__(self):
        return "LayerOutput(layer={}, features={})".format(self.layer, self.features.round(6).tolist())


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Arithmetic stage
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #

def overlapRegister(j: int) -> str:
    return "OV{}".format(j)


def productRegister(j: int) -> str:
    return "PR{}".format(j)


def _featureCount(state: QState) -> int:
    count = 0
    while overlapRegister(count) in state.layout:
        count += 1
    return count


def loadOverlaps(overlaps: numpy.ndarray, config: EstimationConfig) -> QState:
    """
    Uniform superposition over k with the overlap column (overlap(j, k))_j loaded into the value registers.

    :param overlaps: f_s x d table of overlap estimates.
    :return: The state (1/sqrt d) sum_k |k> |overlap(0, k)> ... |overlap(f_s - 1, k)>.
    """
    overlaps = numpy.atleast_2d(numpy.asarray(overlaps, dtype=float))
    fmt = config.fixedPoint
    f, d = overlaps.shape
    registers = [Register('K', registerWidth(d))] + [Register.fixed(overlapRegister(j), fmt) for j in range(f)]
    state = init(RegisterLayout(registers, config.maxQubits))
    state = hadamardAll(state, 'K')
    for j in range(f):
        state = loadTable(state, overlapRegister(j), 'K', overlaps[j])
    return state


def loadTheta(state: QState, theta: Sequence[float], config: EstimationConfig) -> QState:
    """
    Write theta_k into a fresh register TH on the branches with K = k by controlled bit flips.
    """
    fmt = config.fixedPoint
    theta = numpy.asarray(theta, dtype=float)
    if len(theta) != state.layout.register('K').dimension:
        raise DimensionMismatch("{} filter values for {} eigenvector labels.".format(
            len(theta), state.layout.register('K').dimension))
    outside = (theta < fmt.minValue) | (theta > fmt.maxValue)
    if outside.any():
        raise ThetaOutOfRange("theta {} leaves the fixed-point range [{}, {}].".format(
            theta[outside], fmt.minValue, fmt.maxValue))
    if 'TH' not in state.layout:
        state = addRegisters(state, Register.fixed('TH', fmt))
    return loadTable(state, 'TH', 'K', theta)


def multiplyTheta(state: QState) -> QState:
    """
    PR_j = TH * OV_j for every feature j.
    """
    fmt = state.layout.register('TH').fixedPoint
    for j in range(_featureCount(state)):
        if productRegister(j) not in state.layout:
            state = addRegisters(state, Register.fixed(productRegister(j), fmt))
        state = fixedPointOp(state, 'mul', ['TH', overlapRegister(j)], productRegister(j))
    return state


def sumOverFeatures(state: QState) -> QState:
    """
    SUM = sum_j PR_j
    """
    fmt = state.layout.register('TH').fixedPoint
    state = addRegisters(state, Register.fixed('SUM', fmt))
    products = [productRegister(j) for j in range(_featureCount(state))]
    return fixedPointOp(state, 'add', products, 'SUM')


def uncomputeProducts(state: QState, theta: Sequence[float]) -> QState:
    """
    Clear the products and theta, then drop their registers. SUM is kept.

    :raises UncomputeResidual: if a product or theta register is not back at 0 on some branch.
    """
    products = [productRegister(j) for j in range(_featureCount(state))]
    for j, name in enumerate(products):
        state = fixedPointOp(state, 'mul', ['TH', overlapRegister(j)], name, uncompute=True)
    state = loadTable(state, 'TH', 'K', theta)
    return dropRegisters(state, 'TH', *products, tolerance=0.0)


def readSums(state: QState) -> numpy.ndarray:
    """
    The value of SUM on every K branch, read from the exact state.
    """
    fmt = state.layout.register('SUM').fixedPoint
    sums = numpy.zeros(state.layout.register('K').dimension)
    seen = dict()
    for k, s in state.probabilities(['K', 'SUM']):
        if seen.setdefault(k, s) != s:
            raise InvariantViolation("Branch k = {} holds more than one sum.".format(k))
        sums[k] = fmt.decode(s)
    return sums


def rotationMatrix(eta: float) -> numpy.ndarray:
    """
    >>> rotationMatrix(1.0)
    array([[ 1., -0.],
           [ 0.,  1.]])
    """
    complement = numpy.sqrt(max(0.0, 1 - eta ** 2))
    return numpy.array([[eta, -complement], [complement, eta]])


def controlledRotationEta(state: QState, c: float) -> QState:
    """
    On every branch with sum s, rotate a fresh ancilla RT to eta |0> + sqrt(1 - eta^2) |1>, eta = s / C.

    :raises EtaExceedsOne: if |s| > C on some branch.
    """
    fmt = state.layout.register('SUM').fixedPoint
    if not c > 0:
        raise InvariantViolation("Normalization constant must be positive, got {}.".format(c))
    logging.getLogger(__name__).warning("Rotating by sqrt(1 - eta^2) on the |1> component, the unitary completion "
                                        "of the eta amplitude.")
    if 'RT' not in state.layout:
        state = addRegisters(state, Register.flag('RT'))

    def rotation(s):
        eta = fmt.decode(s) / c
        if abs(eta) > 1 + ETA_TOLERANCE:
            raise EtaExceedsOne("Sum {} exceeds C = {}.".format(fmt.decode(s), c))
        return rotationMatrix(float(numpy.clip(eta, -1.0, 1.0)))

    return applyBlock(state, ['RT'], matrixFor=rotation, contextRegisters=['SUM'])


def uncomputeToEtaState(state: QState) -> QState:
    """
    Clear SUM and the overlap registers and drop them, leaving (1/sqrt d) sum_k |k> (eta_k |0> + sqrt(1 - eta_k^2) |1>).
    """
    f = _featureCount(state)
    products = [productRegister(j) for j in range(f)]
    if any(p in state.layout for p in products) or 'TH' in state.layout:
        raise UncomputeResidual("Products must be uncomputed before the sum.")
    fmt = state.layout.register('SUM').fixedPoint
    # SUM depends on K alone, so reloading the values read from it clears it
    sums = readSums(state)
    state = loadTable(state, 'SUM', 'K', sums)
    overlaps = list()
    for j in range(f):
        column = numpy.zeros(state.layout.register('K').dimension)
        for k, label in state.probabilities(['K', overlapRegister(j)]):
            column[k] = fmt.decode(label)
        overlaps.append(column)
    for j, column in enumerate(overlaps):
        state = loadTable(state, overlapRegister(j), 'K', column)
    return dropRegisters(state, 'SUM', *[overlapRegister(j) for j in range(f)], tolerance=0.0)


def postselect(state: QState) -> Tuple[QState, float]:
    """
    Measure RT with outcome 0.

    :return: The state with the filtered vector f in K, and the probability of the outcome.
    :raises ZeroPostselectProbability: if RT = 0 cannot occur.
    """
    try:
        return measure(state, 'RT', 0)
    except ZeroProbabilityOutcome as e:
        raise ZeroPostselectProbability(str(e))


def filterStage(overlaps: numpy.ndarray, theta: Sequence[float], config: EstimationConfig) -> Tuple[QState, EtaVector]:
    """
    All arithmetic steps from loading the overlaps to the post-selected filtered state.

    :return: The post-selected state over K and RT, and the eta vector it encodes.
    """
    state = loadOverlaps(overlaps, config)
    state = loadTheta(state, theta, config)
    state = multiplyTheta(state)
    state = sumOverFeatures(state)
    state = uncomputeProducts(state, theta)
    sums = readSums(state)
    if not numpy.any(sums):
        raise ZeroEta("All filtered spectral sums are zero, the next layer is undefined.")
    c = float(numpy.max(numpy.abs(sums)))
    state = controlledRotationEta(state, c)
    state = uncomputeToEtaState(state)
    state, probability = postselect(state)
    logging.getLogger(__name__).debug("Post-selected the filtered state with probability %.6f.", probability)
    return state, EtaVector(sums, c, probability)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Readout stage
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #

def filteredAmplitudes(state: QState) -> numpy.ndarray:
    """
    The real amplitudes of the K register of a post-selected state, i.e. f = eta / ||eta||.
    """
    k = state.layout.index('K')
    vector = numpy.zeros(state.layout.register('K').dimension)
    for label, amp in state.items():
        if any(v != 0 for i, v in enumerate(label) if i != k):
            raise InvariantViolation("Filtered state has a register other than K outside label 0.")
        vector[label[k]] = amp.real
    return vector


def swapUnitary(dimension: int) -> numpy.ndarray:
    """
    Controlled swap on the joint (first, second, flag) space, flag least significant.
    """
    size = dimension * dimension * 2
    permutation = numpy.zeros((size, size))
    for a in range(dimension):
        for b in range(dimension):
            for flag in range(2):
                source = (a * dimension + b) * 2 + flag
                target = (b * dimension + a) * 2 + flag if flag else source
                permutation[target, source] = 1.0
    return permutation


def readoutPreparation(filtered: numpy.ndarray, basis: SpectralBasis, variant: str = 'swap') -> StatePreparation:
    """
    A_p for every node p: the unitary producing the readout test state of f and the row v_p from label 0.
    swap acts on (K, B, RT) with the exchange test; interference acts on (B, RT).
    """
    if variant not in VARIANTS:
        raise InputError("Unknown readout variant {}, choose from {}.".format(variant, VARIANTS))
    d = basis.d
    rows = PreparationOracle(basis.vd, 'row', d)
    loadF = householder(filtered, d)
    flagH = hadamard(2) / numpy.sqrt(2)
    n = basis.n

    if variant == 'swap':
        sandwich = numpy.kron(numpy.eye(d * d), flagH) @ swapUnitary(d) @ numpy.kron(numpy.eye(d * d), flagH)

        def prepare(p):
            if p >= n:
                return numpy.eye(2 * d * d)
            loads = numpy.kron(numpy.kron(loadF, rows.unitary(p)), numpy.eye(2))
            return sandwich @ loads

        return StatePreparation(['K', 'B', 'RT'], prepare, ['A'])

    def prepare(p):
        if p >= n:
            return numpy.eye(2 * d)
        return interferenceUnitary(loadF, rows.unitary(p))

    return StatePreparation(['B', 'RT'], prepare, ['A'])


def readoutLayout(basis: SpectralBasis, config: EstimationConfig) -> RegisterLayout:
    width = registerWidth(basis.d)
    return RegisterLayout([Register('K', width), Register.flag('RT'), Register('A', registerWidth(basis.n)),
                           Register('B', width)], config.maxQubits)


def groverG(basis: SpectralBasis, eta: Sequence[float], variant: str = 'swap',
            config: EstimationConfig = None) -> GroverOperator:
    """
    G_p = -(I - 2 A_p|0><0|A_p^dagger)(I - 2 P_{RT = 1}), with eigenvalues exp(+-2 i alpha_p) and
    cos^2(alpha_p) = (1 + (f . v_p)^2) / 2 for the exchange test.
    """
    eta = numpy.asarray(eta, dtype=float)
    filtered = eta / numpy.linalg.norm(eta)
    config = config if config is not None else EstimationConfig()
    return GroverOperator(readoutPreparation(filtered, basis, variant), 'RT', readoutLayout(basis, config))


def _checkPrepared(state: QState, preparation: StatePreparation, n: int, tolerance: float = 1e-9):
    """
    The simulated readout state must equal n^{-1/2} sum_p |p> A_p|0>.
    """
    layout = state.layout
    a = layout.index('A')
    targets = [layout.index(r) for r in preparation.registers]
    dims = [layout.registers[t].dimension for t in targets]
    for p in range(n):
        expected = preparation.matrix(p)[:, 0] / numpy.sqrt(n)
        actual = numpy.zeros(len(expected), dtype=complex)
        for label, amp in state.items():
            if label[a] == p:
                actual[numpy.ravel_multi_index([label[t] for t in targets], dims)] += amp
        if numpy.max(numpy.abs(actual - expected)) > tolerance:
            raise InvariantViolation("Readout state of node {} differs from its preparation.".format(p))


def exchangeTestState(state: QState, basis: SpectralBasis, variant: str = 'swap') -> Tuple[QState, GroverOperator]:
    """
    From the post-selected filtered state: spread the node index A over n nodes, load the row v_p into B, and run
    the exchange test with RT as its flag (or the interference test for variant interference).

    :return: The readout test state and the Grover operator of its preparation.
    """
    if variant not in VARIANTS:
        raise InputError("Unknown readout variant {}, choose from {}.".format(variant, VARIANTS))
    d = basis.d
    if state.layout.register('K').dimension != d:
        raise DimensionMismatch("K holds {} labels, the basis has d = {}.".format(
            state.layout.register('K').dimension, d))
    filtered = filteredAmplitudes(state)
    state = addRegisters(state, Register('A', registerWidth(basis.n)), Register('B', registerWidth(d)))
    state = prepareUniform(state, 'A', basis.n)
    rows = PreparationOracle(basis.vd, 'row', d)
    if variant == 'swap':
        state = applyUPrepare(state, rows, 'B', index='A')
        state = hadamardAll(state, 'RT')
        state = controlledSwap(state, 'RT', 'K', 'B')
        state = hadamardAll(state, 'RT')
    else:
        # K is unloaded, the interference test loads f into B itself
        state = applyBlock(state, ['K'], matrix=householder(filtered, d))
        state = dropRegisters(state, 'K')
        state = readoutPreparation(filtered, basis, variant).apply(state)
    grover = GroverOperator(readoutPreparation(filtered, basis, variant), 'RT', state.layout)
    _checkPrepared(state, grover.preparation, basis.n)
    return state, grover


def _modalCosines(state: QState, n: int, config: EstimationConfig) -> Tuple[List[int], List[float]]:
    fmt = config.fixedPoint
    phase = state.layout.register('C')
    if config.mode == 'shots':
        counts = sample(state, ['A', 'COSA'], config.shots, config.rng())
        distribution = {key: float(c) for key, c in counts.items()}
    else:
        distribution = state.probabilities(['A', 'COSA'])
    # neighbouring phase labels may round to the same cosine, keep the heaviest magnitude
    weights = dict()
    for (p, u), weight in state.probabilities(['A', 'C']).items():
        key = (p, fmt.encode(numpy.cos(numpy.pi * phase.signedValue(u) / phase.dimension))[0])
        magnitude = abs(phase.signedValue(u))
        weights.setdefault(key, dict())
        weights[key][magnitude] = weights[key].get(magnitude, 0.0) + weight
    magnitudes = {key: max(sorted(byMagnitude), key=lambda m: byMagnitude[m])
                  for key, byMagnitude in weights.items()}
    alphaTilde, features = list(), list()
    for p in range(n):
        cell = {label: w for (node, label), w in distribution.items() if node == p}
        if not cell:
            raise InvariantViolation("Node {} has no readout outcome.".format(p))
        label = max(sorted(cell), key=lambda v: cell[v])
        alphaTilde.append(magnitudes[(p, label)])
        features.append(fmt.decode(label))
    return alphaTilde, features


def estimateLayerOutput(state: QState, grover: GroverOperator, config: EstimationConfig, n: int) -> \
        Tuple[List[int], List[float], QState]:
    """
    Phase estimation of G_p on a fresh register C and the cosine gate into COSA.

    :return: Modal phase magnitudes alpha~_p, features cos(alpha~_p pi / 2^q) per node, and the final state.
    """
    state = addRegisters(state, Register('C', config.q, 'phase'))
    state = phaseEstimate(state, grover, 'C')
    state = addRegisters(state, Register.fixed('COSA', config.fixedPoint))
    state = fixedPointOp(state, 'cosine', ['C'], 'COSA')
    alphaTilde, features = _modalCosines(state, n, config)
    return alphaTilde, features, state


def runLayer(features: FeatureMatrix, basis: SpectralBasis, theta: Sequence[float], config: EstimationConfig,
             layer: int = 0, variant: str = 'swap', oracleFeatures: Sequence[float] = None,
             overlaps: OverlapTable = None) -> LayerOutput:
    """
    The complete quantum path of one output column.

    :param oracleFeatures: Expected features, defaults to the emulation from the exact overlaps of features.
    :param overlaps: Precomputed overlap estimates of features, estimated here if not given.
    """
    if overlaps is None:
        overlaps = estimateAllOverlaps(features, basis, config)
    state, eta = filterStage(overlaps.estimates, theta, config)
    state, grover = exchangeTestState(state, basis, variant)
    alphaTilde, values, final = estimateLayerOutput(state, grover, config, basis.n)
    if oracleFeatures is None:
        oracleFeatures = emulateLayerOutput(emulateOverlapTable(features, basis), theta, basis, variant)[2]
    diagnostics = {"overlap_max_abs_error": overlaps.maxAbsError, "branches": final.branchCount}
    diagnostics.update({"overlap_" + k: v for k, v in overlaps.diagnostics.items()})
    diagnostics.update(final.diagnostics)
    output = LayerOutput(layer, alphaTilde, values, oracleFeatures, eta, config, variant, diagnostics, overlaps)
    logging.getLogger(__name__).info("Layer %d: max abs error %.3e against the oracle.", layer, output.maxAbsError)
    return output


def oracleLayer(features: FeatureMatrix, basis: SpectralBasis, theta: Sequence[float], config: EstimationConfig,
                layer: int = 0, variant: str = 'swap') -> LayerOutput:
    """
    The oracle path of one output column, shaped like the quantum result.
    """
    eta, c, out, probability = emulateLayerOutput(emulateOverlapTable(features, basis), theta, basis, variant)
    etaVector = EtaVector(eta * c, c, probability)
    return LayerOutput(layer, [], out, out, etaVector, config, variant)


def forward(graph: WeightedGraph, features: FeatureMatrix, filters: Sequence[numpy.ndarray], d: int,
            config: EstimationConfig = None, eigenOrder: str = 'largest', variant: str = 'swap',
            path: str = 'quantum', basis: SpectralBasis = None) -> List[List[LayerOutput]]:
    """
    Multi-layer convolution. Layer s has a (f_{s+1}, d) array of filter vectors; each yields one output column and
    the columns form the input of the next layer. The oracle of a later layer is computed from the oracle output of
    the previous one.

    :param path: quantum runs the circuits, oracle only the emulation.
    :return: Per layer the outputs of all its filter vectors.
    """
    config = config if config is not None else EstimationConfig()
    if path not in ('quantum', 'oracle'):
        raise InputError("path must be quantum or oracle, not {}.".format(path))
    if basis is None:
        basis = topD(eigendecompose(laplacian(graph)), d, eigenOrder)
    if features.n != basis.n:
        raise DimensionMismatch("Features have {} rows, the graph {} nodes.".format(features.n, basis.n))
    results = list()
    quantumInput, oracleInput = features, features
    for s, layer in enumerate(filters):
        layer = numpy.atleast_2d(numpy.asarray(layer, dtype=float))
        if layer.shape[1] != basis.d:
            raise DimensionMismatch("Layer {} filters have length {}, d is {}.".format(s, layer.shape[1], basis.d))
        outputs = list()
        if path == 'oracle':
            for theta in layer:
                outputs.append(oracleLayer(oracleInput, basis, theta, config, s, variant))
        else:
            overlaps = estimateAllOverlaps(quantumInput, basis, config)
            oracleOverlaps = emulateOverlapTable(oracleInput, basis)
            for theta in layer:
                expected = emulateLayerOutput(oracleOverlaps, theta, basis, variant)[2]
                outputs.append(runLayer(quantumInput, basis, theta, config, s, variant, expected, overlaps))
        results.append(outputs)
        quantumInput = FeatureMatrix(numpy.column_stack([o.features for o in outputs]))
        oracleInput = FeatureMatrix(numpy.column_stack([o.oracleFeatures for o in outputs]))
    return results
