"""
Estimation of the overlaps <x_j/|x_j|, v_k/|v_k|> of feature columns and retained eigenvectors by amplitude
estimation: an interference state, the Grover operator built from its preparation, phase estimation, and
fixed-point recovery 2 cos^2(theta~) - 1 of the overlap.

Register layout of the estimation circuit:
    J   feature index            ceil(log2 f_s) qubits
    K   eigenvector index        log2 d qubits
    X   data                     ceil(log2 n) qubits
    F   interference flag        1 qubit
    P   phase                    q qubits
    COS, SQ, OV  fixed-point work and value registers
"""
import logging
from collections import Counter
from typing import Dict, List, Optional, Tuple

import numpy
from scipy.linalg import hadamard

from qspec.errors import InputError, InvariantViolation
from qspec.utils.baseAlgorithms import registerWidth
from qspec.graph.spectral import SpectralBasis
from qspec.classical.convolution import FeatureMatrix, DimensionMismatch
from qspec.classical.emulation import emulateOverlapTable
from qspec.simulation.fixedPoint import FixedPointFormat
from qspec.simulation.registers import Register, RegisterLayout
from qspec.simulation.sparseState import QState, basisState, addRegisters, hadamardAll, reducedPurity, sample
from qspec.simulation.oracles import PreparationOracle, StatePreparation, GroverOperator, prepareUniform
from qspec.simulation.phaseEstimation import phaseEstimate, uncomputePhaseEstimate
from qspec.simulation.arithmetic import fixedPointOp, OVERFLOW

MODES = ('exact', 'shots')


class InsufficientShots(InputError):
    """
    Error to raise if a table cell received no sample in shots mode.
    """
    pass


class EstimationConfig(object):
    """
    Settings of the amplitude-estimation stages.
    """

    def __init__(self, q: int = 8, mode: str = 'exact', shots: int = 10000, seed: int = 0,
                 fixedPoint: FixedPointFormat = None, maxQubits: int = 96):
        """
        :param q: Phase register width, 2 <= q <= 16.
        :param mode: exact reads outcome probabilities from the state, shots samples measurements.
        :param shots: Number of samples in shots mode.
        :param seed: Seed of the numpy random generator used for sampling.
        :param fixedPoint: Number format of the arithmetic registers, 2 integer and 12 fraction bits by default.
        :param maxQubits: Width bound of the layouts the pipeline builds.
        """
        if not 2 <= q <= 16:
            raise InputError("q must be between 2 and 16, not {}.".format(q))
        if mode not in MODES:
            raise InputError("mode must be one of {}, not {}.".format(MODES, mode))
        if shots < 1:
            raise InputError("shots must be at least 1, not {}.".format(shots))
        self.q = q
        self.mode = mode
        self.shots = shots
        self.seed = seed
        self.fixedPoint = fixedPoint if fixedPoint is not None else FixedPointFormat(2, 12)
        self.maxQubits = maxQubits

    def rng(self) -> numpy.random.Generator:
        return numpy.random.default_rng(self.seed)

    def asDict(self) -> Dict:
        return {"q": self.q, "mode": self.mode, "shots": self.shots, "seed": self.seed,
                "b_int": self.fixedPoint.intBits, "b_frac": self.fixedPoint.fracBits}

    def __repr__(self):
        return "EstimationConfig({})".format(self.asDict())


class OverlapEstimate(object):
    """
    Recovered overlap of one (feature, eigenvector) pair.
    """

    def __init__(self, j: int, k: int, thetaTilde: int, cosTheta: float, overlap: float, exact: float,
                 probability: float = 1.0):
        """
        :param j: Feature index.
        :param k: Eigenvector index.
        :param thetaTilde: Modal phase label, in Z_{2^q}.
        :param cosTheta: The fixed-point cosine of the modal phase.
        :param overlap: The fixed-point overlap 2 cos^2 - 1 read from the value register.
        :param exact: The oracle overlap.
        :param probability: Probability (or sample fraction) of the modal value within its cell.
        """
        self.j = j
        self.k = k
        self.thetaTilde = thetaTilde
        self.cosTheta = cosTheta
        self.overlap = overlap
        self.exact = exact
        self.probability = probability

    @property
    def absError(self) -> float:
        return abs(self.overlap - self.exact)

    def asDict(self) -> Dict:
        return {"j": self.j, "k": self.k, "theta_tilde": self.thetaTilde, "cos_theta": self.cosTheta,
                "estimate": self.overlap, "exact": self.exact, "abs_error": self.absError,
                "probability": self.probability}

    def __repr__(self):
        return "OverlapEstimate(j={}, k={}, estimate={:.6f}, exact={:.6f})".format(
            self.j, self.k, self.overlap, self.exact)


class OverlapTable(object):
    """
    All f_s x d estimates together with the diagnostics of the run.
    """

    def __init__(self, estimates: List[OverlapEstimate], shape: Tuple[int, int], config: EstimationConfig,
                 diagnostics: Dict[str, float] = None):
        self.cells = sorted(estimates, key=lambda e: (e.j, e.k))
        self.shape = shape
        self.config = config
        self.diagnostics = dict(diagnostics) if diagnostics else dict()

    @property
    def estimates(self) -> numpy.ndarray:
        table = numpy.zeros(self.shape)
        for cell in self.cells:
            table[cell.j, cell.k] = cell.overlap
        return table

    @property
    def exact(self) -> numpy.ndarray:
        table = numpy.zeros(self.shape)
        for cell in self.cells:
            table[cell.j, cell.k] = cell.exact
        return table

    @property
    def maxAbsError(self) -> float:
        return max(cell.absError for cell in self.cells)

    def __getitem__(self, jk: Tuple[int, int]) -> OverlapEstimate:
        for cell in self.cells:
            if (cell.j, cell.k) == tuple(jk):
                return cell
        raise KeyError(jk)

    def toDataFrame(self):
        import pandas
        return pandas.DataFrame([cell.asDict() for cell in self.cells],
                                columns=["j", "k", "theta_tilde", "cos_theta", "estimate", "exact", "abs_error",
                                         "probability"])


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Circuit stages
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #

def interferenceUnitary(first: numpy.ndarray, second: numpy.ndarray) -> numpy.ndarray:
    """
    A on the joint (data, flag) space, flag least significant: H on the flag, load first on flag 0 and second on
    flag 1, H on the flag. From |0>|0> this yields 1/2 (|a> + |b>)|0> + 1/2 (|a> - |b>)|1>.

    :param first: Unitary loading the first vector from label 0.
    :param second: Unitary loading the second vector from label 0.
    """
    dimension = first.shape[0]
    flagH = numpy.kron(numpy.eye(dimension), hadamard(2) / numpy.sqrt(2))
    controlledLoad = numpy.kron(first, numpy.diag([1.0, 0.0])) + numpy.kron(second, numpy.diag([0.0, 1.0]))
    return flagH @ controlledLoad @ flagH


class _Circuit(object):
    """
    Oracles and operators of one estimation instance.
    """

    def __init__(self, features: FeatureMatrix, basis: SpectralBasis, config: EstimationConfig):
        if features.n != basis.n:
            raise DimensionMismatch("Features have {} rows, the basis {}.".format(features.n, basis.n))
        self.features = features
        self.basis = basis
        self.config = config
        dataWidth = registerWidth(features.n)
        self.featureOracle = PreparationOracle(features.x, 'column', 1 << dataWidth)
        self.eigenOracle = PreparationOracle(basis.vd, 'column', 1 << dataWidth)
        self.layout = RegisterLayout([Register('J', registerWidth(features.f)), Register('K', registerWidth(basis.d)),
                                      Register('X', dataWidth), Register.flag('F')], config.maxQubits)
        identity = numpy.eye(2 << dataWidth)

        def prepare(j, k):
            if j >= features.f or k >= basis.d:
                return identity
            return interferenceUnitary(self.featureOracle.unitary(j), self.eigenOracle.unitary(k))

        self.preparation = StatePreparation(['X', 'F'], prepare, ['J', 'K'])
        self.grover = GroverOperator(self.preparation, 'F', self.layout)


def prepareInterferenceState(features: FeatureMatrix, basis: SpectralBasis, j: int = None, k: int = None,
                             config: EstimationConfig = None) -> Tuple[QState, GroverOperator]:
    """
    With j and k the index registers hold these labels, otherwise they are in uniform superposition over all
    f_s features and d eigenvectors.

    :return: The state 1/2 (|x_j> + |v_k>)|0> + 1/2 (|x_j> - |v_k>)|1> (per index branch)
        and the Grover operator of its preparation.
    """
    config = config if config is not None else EstimationConfig()
    circuit = _Circuit(features, basis, config)
    if (j is None) != (k is None):
        raise InputError("Give both j and k for a pairwise state, or neither for the superposed one.")
    if j is None:
        state = basisState(circuit.layout, {})
        state = prepareUniform(state, 'J', features.f)
        state = hadamardAll(state, 'K')
    else:
        if not (0 <= j < features.f and 0 <= k < basis.d):
            raise InputError("Pair ({}, {}) is out of range of {} features and {} eigenvectors.".format(
                j, k, features.f, basis.d))
        state = basisState(circuit.layout, {'J': j, 'K': k})
    return circuit.preparation.apply(state), circuit.grover


def groverQ(features: FeatureMatrix, basis: SpectralBasis, j: int, k: int,
            config: EstimationConfig = None) -> numpy.ndarray:
    """
    :return: The dense Grover operator Q_jk on the (data, flag) space.
    """
    return _Circuit(features, basis, config if config is not None else EstimationConfig()).grover.matrix(j, k)


def interferenceAngle(overlap: float) -> float:
    """
    theta with cos^2(theta) = (1 + overlap) / 2, the angle whose eigenphases exp(+-2 i theta) Q carries.

    >>> round(interferenceAngle(0.0) / numpy.pi, 6)
    0.25
    """
    return float(numpy.arccos(numpy.sqrt(numpy.clip((1 + overlap) / 2, 0.0, 1.0))))


def phaseEstimateOverlaps(state: QState, operator: GroverOperator, q: int) -> QState:
    """
    Append a q-qubit phase register and run phase estimation of the Grover operator.
    """
    state = addRegisters(state, Register('P', q, 'phase'))
    return phaseEstimate(state, operator, 'P')


def recoverValue(label: int, q: int, fmt: FixedPointFormat) -> Tuple[float, float]:
    """
    The fixed-point chain the recovery registers compute for a phase label: COS = cos(pi signed(label) / 2^q),
    SQ = COS^2, OV = 2 SQ - 1, each rounded to the format.

    >>> recoverValue(2, 3, FixedPointFormat(2, 12))
    (0.70703125, 0.0)

    :return: COS and OV.
    """
    register = Register('P', q, 'phase')
    cosine = fmt.quantize(numpy.cos(numpy.pi * register.signedValue(label) / (1 << q)))
    square = fmt.quantize(cosine ** 2)
    return cosine, fmt.quantize(2 * square - 1)


def _checkSignMerge(state: QState):
    """
    The + and - eigenphase branches must have produced the same value label.
    """
    layout = state.layout
    j, k, p, ov = (layout.index(r) for r in ('J', 'K', 'P', 'OV'))
    seen = dict()
    for label in state.amplitudes:
        signed = abs(layout.registers[p].signedValue(label[p]))
        key = (label[j], label[k], signed)
        if seen.setdefault(key, label[ov]) != label[ov]:
            raise InvariantViolation("Phase labels +-{} of cell ({}, {}) map to different overlap labels.".format(
                signed, label[j], label[k]))


def recoverOverlap(state: QState, operator: GroverOperator, config: EstimationConfig) -> QState:
    """
    cosine gate, square, and 2 c^2 - 1 into the value register OV; the work registers COS and SQ are uncomputed
    and the phase estimation is reversed.

    :return: The state with value register OV; the diagnostics carry the probability left outside phase label 0
        after uncomputation (phase_residual).
    """
    fmt = config.fixedPoint
    state = addRegisters(state, Register.fixed('COS', fmt), Register.fixed('SQ', fmt), Register.fixed('OV', fmt))
    state = fixedPointOp(state, 'cosine', ['P'], 'COS')
    state = fixedPointOp(state, 'square', ['COS'], 'SQ')
    state = fixedPointOp(state, 'affine', ['SQ'], 'OV', a=2.0, b=-1.0)
    _checkSignMerge(state)
    state = fixedPointOp(state, 'square', ['COS'], 'SQ', uncompute=True)
    state = fixedPointOp(state, 'cosine', ['P'], 'COS', uncompute=True)
    state = uncomputePhaseEstimate(state, operator, 'P')
    residual = sum(p for (u,), p in state.probabilities(['P']).items() if u != 0)
    return state.withDiagnostic('phase_residual', residual)


def valuePurity(state: QState) -> float:
    """
    Smallest purity of the value register OV over the (J, K) cells, 1 if every cell holds a single value
    disentangled from the data, flag, and phase registers.
    """
    from qspec.simulation.sparseState import measure

    purities = list()
    for cell in state.probabilities(['J', 'K']):
        conditioned = state
        for name, value in zip(('J', 'K'), cell):
            conditioned, _ = measure(conditioned, name, value)
        purities.append(reducedPurity(conditioned, ['OV']))
    return min(purities)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Readout
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #

def _modalPhases(state: QState) -> Dict[Tuple[int, int], int]:
    """
    Most probable phase label per cell, with the + and - branches of a magnitude counted together.
    """
    layout = state.layout
    phase = layout.register('P')
    merged = dict()
    for (j, k, u), p in state.probabilities(['J', 'K', 'P']).items():
        key = (j, k, abs(phase.signedValue(u)))
        merged[key] = merged.get(key, 0.0) + p
    modal = dict()
    for (j, k, magnitude), p in sorted(merged.items()):
        if (j, k) not in modal or p > modal[(j, k)][1]:
            modal[(j, k)] = (magnitude, p)
    return {cell: magnitude for cell, (magnitude, _) in modal.items()}


def _exactReadout(state: QState, phases: Dict[Tuple[int, int], int], oracle: numpy.ndarray,
                  config: EstimationConfig) -> List[OverlapEstimate]:
    fmt = config.fixedPoint
    byCell = dict()
    for (j, k, ov), p in state.probabilities(['J', 'K', 'OV']).items():
        byCell.setdefault((j, k), dict())[ov] = p
    estimates = list()
    for (j, k), distribution in sorted(byCell.items()):
        if j >= oracle.shape[0] or k >= oracle.shape[1]:
            continue
        total = sum(distribution.values())
        label = max(sorted(distribution), key=lambda v: distribution[v])
        cosine, _ = recoverValue(phases[(j, k)], config.q, fmt)
        estimates.append(OverlapEstimate(j, k, phases[(j, k)], cosine, fmt.decode(label), float(oracle[j, k]),
                                         distribution[label] / total))
    return estimates


def _shotsReadout(state: QState, oracle: numpy.ndarray, config: EstimationConfig) -> List[OverlapEstimate]:
    fmt = config.fixedPoint
    counts = sample(state, ['J', 'K', 'P'], config.shots, config.rng())
    byCell = dict()
    for (j, k, u), count in counts.items():
        _, value = recoverValue(u, config.q, fmt)
        cell = byCell.setdefault((j, k), Counter())
        cell[(value, u)] += count
    estimates = list()
    for j in range(oracle.shape[0]):
        for k in range(oracle.shape[1]):
            if (j, k) not in byCell:
                raise InsufficientShots("Cell ({}, {}) received no sample out of {} shots.".format(j, k, config.shots))
            values = Counter()
            for (value, u), count in byCell[(j, k)].items():
                values[value] += count
            total = sum(values.values())
            value, count = max(sorted(values.items()), key=lambda vc: vc[1])
            u = max((uc for uc in byCell[(j, k)].items() if uc[0][0] == value), key=lambda uc: uc[1])[0][1]
            magnitude = abs(state.layout.register('P').signedValue(u))
            cosine, _ = recoverValue(magnitude, config.q, fmt)
            estimates.append(OverlapEstimate(j, k, magnitude, cosine, value, float(oracle[j, k]), count / total))
    return estimates


def estimateAllOverlaps(features: FeatureMatrix, basis: SpectralBasis, config: EstimationConfig = None,
                        pairwise: bool = False) -> OverlapTable:
    """
    Estimate the full f_s x d overlap table.

    :param features: Layer input, no all-zero column.
    :param basis: Retained spectral basis.
    :param config: Estimation settings.
    :param pairwise: Run one circuit per (j, k) instead of one circuit over the superposition of all pairs.
    :return: The table of estimates with oracle values and diagnostics
        (overflow, phase_residual, purity, discarded weight of the modal projection).
    """
    config = config if config is not None else EstimationConfig()
    oracle = emulateOverlapTable(features, basis)
    if pairwise:
        cells, diagnostics = list(), dict()
        for j in range(features.f):
            for k in range(basis.d):
                table = _estimate(features, basis, config, oracle, j, k)
                cells.extend(table.cells)
                for key, value in table.diagnostics.items():
                    diagnostics[key] = max(diagnostics.get(key, 0.0), value) if key != OVERFLOW \
                        else diagnostics.get(key, 0) + value
        return OverlapTable(cells, oracle.shape, config, diagnostics)
    return _estimate(features, basis, config, oracle)


def _estimate(features: FeatureMatrix, basis: SpectralBasis, config: EstimationConfig, oracle: numpy.ndarray,
              j: int = None, k: int = None) -> OverlapTable:
    state, grover = prepareInterferenceState(features, basis, j, k, config)
    state = phaseEstimateOverlaps(state, grover, config.q)
    phases = _modalPhases(state)
    if config.mode == 'shots':
        return OverlapTable(_shotsReadout(state, oracle, config), oracle.shape, config)
    state = recoverOverlap(state, grover, config)
    estimates = _exactReadout(state, phases, oracle, config)
    diagnostics = state.diagnostics
    diagnostics['purity'] = valuePurity(state)
    diagnostics['discarded_weight'] = max(1 - e.probability for e in estimates)
    logging.getLogger(__name__).info("Estimated %d overlaps at q=%d, max abs error %.3e.",
                                     len(estimates), config.q, max(e.absError for e in estimates))
    table = OverlapTable(estimates, oracle.shape, config, diagnostics)
    if len(table.cells) != oracle.size:
        raise InvariantViolation("Estimated {} cells of a {} table.".format(len(table.cells), oracle.shape))
    return table
