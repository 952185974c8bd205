"""
Sparse multi-register state vector simulator.

A QState maps basis labels (one integer per register of its layout) to complex amplitudes.
Only amplitudes with magnitude above the prune threshold are stored.
Every gate returns a new state; inputs are never modified.
Gates are unitary, so the norm is checked after each one and drift is raised, never repaired.
"""
import json
import logging
from collections import Counter
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy

from qspec.errors import InputError, InvariantViolation
from qspec.simulation.fixedPoint import FixedPointFormat
from qspec.simulation.registers import Register, RegisterLayout

debug = False
"""Log the branch count after every gate."""

Label = Tuple[int, ...]
Control = Union[int, Callable[[int], bool]]
Controls = Optional[Mapping[str, Control]]


class OverlappingRegisters(InputError):
    """
    Error to raise if a gate names the same register in two roles.
    """
    pass


class DimensionMismatch(InputError):
    pass


class ZeroProbabilityOutcome(InvariantViolation):
    pass


class NormDrift(InvariantViolation):
    pass


class UncomputeResidual(InvariantViolation):
    """
    Error to raise if an ancilla expected to be back at label 0 still carries amplitude elsewhere.
    """
    pass


class WrongRegisterKind(InvariantViolation):
    """
    Error to raise if a gate is applied to a register of a kind it does not act on.
    """
    pass


class QState(object):
    """
    Immutable sparse state over a register layout.
    """

    pruneThreshold = 1e-14
    normTolerance = 1e-10

    def __init__(self, layout: RegisterLayout, amplitudes: Mapping[Label, complex],
                 diagnostics: Optional[Dict[str, float]] = None):
        """
        :param layout: The registers the labels refer to.
        :param amplitudes: Map of basis labels to amplitudes. Entries below the prune threshold are dropped.
        :param diagnostics: Counters collected along the circuit, e.g. fixed-point overflows.
        """
        dims = layout.dimensions
        kept = {}
        for label, amp in amplitudes.items():
            if abs(amp) <= QState.pruneThreshold:
                continue
            if len(label) != len(dims) or any(not 0 <= v < d for v, d in zip(label, dims)):
                raise InputError("Label {} does not fit layout {}.".format(label, layout))
            kept[tuple(int(v) for v in label)] = complex(amp)
        self._layout = layout
        self._amplitudes = kept
        self._diagnostics = dict(diagnostics) if diagnostics else dict()

    @property
    def layout(self) -> RegisterLayout:
        return self._layout

    @property
    def amplitudes(self) -> Mapping[Label, complex]:
        """
        :return: A copy of the label to amplitude map.
        """
        return dict(self._amplitudes)

    def items(self):
        return self._amplitudes.items()

    @property
    def diagnostics(self) -> Dict[str, float]:
        return dict(self._diagnostics)

    @property
    def branchCount(self) -> int:
        return len(self._amplitudes)

    def amplitude(self, label: Label) -> complex:
        return self._amplitudes.get(tuple(label), 0j)

    def norm(self) -> float:
        if not self._amplitudes:
            return 0.0
        return float(numpy.linalg.norm(numpy.fromiter(self._amplitudes.values(), dtype=complex)))

    def probabilities(self, registers: Sequence[str]) -> Dict[Label, float]:
        """
        Marginal outcome distribution of measuring the given registers.

        :param registers: Register names, the outcome tuples follow this order.
        :return: Map of outcome label tuples to probabilities.
        """
        positions = [self._layout.index(r) for r in registers]
        marginal = dict()
        for label, amp in self._amplitudes.items():
            key = tuple(label[p] for p in positions)
            marginal[key] = marginal.get(key, 0.0) + abs(amp) ** 2
        return marginal

    def labelValue(self, label: Label, register: str) -> int:
        return label[self._layout.index(register)]

    def derive(self, amplitudes: Mapping[Label, complex], layout: RegisterLayout = None,
               diagnostics: Dict[str, float] = None, checkNorm: bool = True) -> 'QState':
        """
        New state after a gate, checked for norm preservation.
        """
        successor = QState(layout if layout is not None else self._layout, amplitudes,
                           self._diagnostics if diagnostics is None else diagnostics)
        if checkNorm:
            before, after = self.norm(), successor.norm()
            if abs(after - before) > QState.normTolerance:
                raise NormDrift("Gate changed the norm from {:.15f} to {:.15f}.".format(before, after))
        if debug:
            logging.getLogger(__name__).debug("%d branches", successor.branchCount)
        return successor

    def withDiagnostic(self, key: str, increment: float) -> 'QState':
        diagnostics = self.diagnostics
        diagnostics[key] = diagnostics.get(key, 0) + increment
        return QState(self._layout, self._amplitudes, diagnostics)

    def toDense(self) -> numpy.ndarray:
        """
        :return: The full state vector, first register most significant.
        """
        dims = self._layout.dimensions
        vector = numpy.zeros(int(numpy.prod(dims, dtype=numpy.int64)), dtype=complex)
        if self._amplitudes:
            labels = numpy.array(list(self._amplitudes.keys()), dtype=numpy.int64).T
            vector[numpy.ravel_multi_index(tuple(labels), dims)] = list(self._amplitudes.values())
        return vector

    @staticmethod
    def fromDense(layout: RegisterLayout, vector: numpy.ndarray) -> 'QState':
        dims = layout.dimensions
        nonzero = numpy.flatnonzero(numpy.abs(vector) > QState.pruneThreshold)
        labels = numpy.unravel_index(nonzero, dims)
        return QState(layout, {tuple(int(l[i]) for l in labels): vector[idx] for i, idx in enumerate(nonzero)})

    def __repr__(self):
        return "QState({}, branches={})".format(self._layout, self.branchCount)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Construction and layout changes
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #

def init(layout: RegisterLayout) -> QState:
    """
    >>> init(RegisterLayout([Register('A', 2)])).amplitudes
    {(0,): (1+0j)}

    :return: All registers at label 0 with amplitude 1.
    """
    return QState(layout, {(0,) * len(layout): 1.0})


def basisState(layout: RegisterLayout, values: Mapping[str, int]) -> QState:
    """
    :return: The computational basis state with the given register labels, all others 0.
    """
    label = [0] * len(layout)
    for name, value in values.items():
        label[layout.index(name)] = value
    return QState(layout, {tuple(label): 1.0})


def addRegisters(state: QState, *registers: Register) -> QState:
    """
    Append fresh ancilla registers at label 0.
    """
    layout = state.layout.extended(*registers)
    pad = (0,) * len(registers)
    return state.derive({label + pad: amp for label, amp in state.items()}, layout, checkNorm=False)


def dropRegisters(state: QState, *names: str, tolerance: float = 1e-10) -> QState:
    """
    Discard ancillas that have been uncomputed back to label 0.

    :param tolerance: Largest probability mass allowed on non-zero labels of the dropped registers.
    :raises UncomputeResidual: if the registers are not at label 0 within tolerance.
    """
    positions = [state.layout.index(n) for n in names]
    keep = [p for p in range(len(state.layout)) if p not in positions]
    residual = 0.0
    amplitudes = dict()
    for label, amp in state.items():
        if any(label[p] != 0 for p in positions):
            residual += abs(amp) ** 2
            continue
        amplitudes[tuple(label[p] for p in keep)] = amp
    if residual > tolerance:
        raise UncomputeResidual("Registers {} carry probability {:.3e} outside label 0.".format(names, residual))
    return state.derive(amplitudes, state.layout.without(*names), checkNorm=False)


def widenRegister(state: QState, name: str, width: int) -> QState:
    """
    Embed a register into more qubits, labels are unchanged.
    """
    register = state.layout.register(name)
    return QState(state.layout.replaced(register.widened(width)), state.amplitudes, state.diagnostics)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Gates
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #

def controlTest(layout: RegisterLayout, controls: Controls) -> Optional[Callable[[Label], bool]]:
    if not controls:
        return None
    tests = list()
    for name, condition in controls.items():
        position = layout.index(name)
        if callable(condition):
            tests.append((position, condition))
        else:
            tests.append((position, (lambda expected: lambda v: v == expected)(condition)))
    return lambda label: all(check(label[p]) for p, check in tests)


def _checkDisjoint(*groups: Iterable[str]):
    seen = set()
    for group in groups:
        for name in group:
            if name in seen:
                raise OverlappingRegisters("Register {} is used in more than one role.".format(name))
            seen.add(name)


def applyBlock(state: QState, registers: Sequence[str],
               matrix: numpy.ndarray = None,
               matrixFor: Callable[..., numpy.ndarray] = None,
               transform: Callable[[numpy.ndarray], numpy.ndarray] = None,
               contextRegisters: Sequence[str] = (),
               controls: Controls = None) -> QState:
    """
    Apply a unitary to the joint space of some registers, possibly depending on the labels of others.

    The amplitudes are grouped by the labels of all other registers. Each group forms a dense column
    over the joint target space (first target register most significant) and all columns are
    transformed at once.

    >>> layout = RegisterLayout([Register('A', 1)])
    >>> x = numpy.array([[0, 1], [1, 0]])
    >>> applyBlock(init(layout), ['A'], matrix=x).amplitudes
    {(1,): (1+0j)}

    :param state: The input state.
    :param registers: The target registers.
    :param matrix: A fixed D x D unitary, D the joint dimension of the targets.
    :param matrixFor: Callable returning the D x D unitary for the labels of the contextRegisters.
    :param transform: Callable mapping the D x G matrix of all group columns to the transformed matrix.
    :param contextRegisters: Registers whose labels are passed to matrixFor.
    :param controls: Map of register names to a required label or a predicate on the label.
        Branches that do not satisfy all controls are left unchanged.
    :return: The transformed state.
    """
    if sum(x is not None for x in (matrix, matrixFor, transform)) != 1:
        raise InputError("Exactly one of matrix, matrixFor, and transform is required.")
    layout = state.layout
    _checkDisjoint(registers, contextRegisters)
    _checkDisjoint(registers, controls.keys() if controls else ())
    targets = [layout.index(r) for r in registers]
    dims = [layout.registers[p].dimension for p in targets]
    joint = int(numpy.prod(dims, dtype=numpy.int64))
    strides = [int(numpy.prod(dims[i + 1:], dtype=numpy.int64)) for i in range(len(dims))]
    rest = [p for p in range(len(layout)) if p not in targets]
    contextSlots = [rest.index(layout.index(c)) for c in contextRegisters]
    test = controlTest(layout, controls)

    groups = dict()  # type: Dict[Label, int]
    rows, cols, vals = list(), list(), list()
    untouched = dict()
    for label, amp in state.items():
        if test is not None and not test(label):
            untouched[label] = amp
            continue
        key = tuple(label[p] for p in rest)
        col = groups.setdefault(key, len(groups))
        rows.append(sum(label[p] * s for p, s in zip(targets, strides)))
        cols.append(col)
        vals.append(amp)
    if not groups:
        return state
    columns = numpy.zeros((joint, len(groups)), dtype=complex)
    columns[rows, cols] = vals
    keys = list(groups.keys())

    if matrix is not None:
        matrix = numpy.asarray(matrix)
        if matrix.shape != (joint, joint):
            raise DimensionMismatch("Block matrix has shape {}, expected {}.".format(matrix.shape, (joint, joint)))
        result = matrix @ columns
    elif transform is not None:
        result = transform(columns)
    else:
        byContext = dict()
        for col, key in enumerate(keys):
            byContext.setdefault(tuple(key[s] for s in contextSlots), list()).append(col)
        result = numpy.empty_like(columns)
        for context, members in byContext.items():
            unitary = numpy.asarray(matrixFor(*context))
            if unitary.shape != (joint, joint):
                raise DimensionMismatch("Block matrix for context {} has shape {}, expected {}.".format(
                    context, unitary.shape, (joint, joint)))
            result[:, members] = unitary @ columns[:, members]

    amplitudes = untouched
    splitCache = dict()
    for row, col in zip(*numpy.nonzero(numpy.abs(result) > QState.pruneThreshold)):
        values = splitCache.get(row)
        if values is None:
            values = [(int(row) // s) % d for s, d in zip(strides, dims)]
            splitCache[row] = values
        label = [0] * len(layout)
        for p, v in zip(rest, keys[col]):
            label[p] = v
        for p, v in zip(targets, values):
            label[p] = v
        amplitudes[tuple(label)] = result[row, col]
    return state.derive(amplitudes)


def _walshHadamard(columns: numpy.ndarray) -> numpy.ndarray:
    """
    H^{(x)w} on every column by the fast Walsh-Hadamard butterfly.
    """
    joint, count = columns.shape
    width = joint.bit_length() - 1
    result = columns.copy()
    for bit in range(width):
        shaped = result.reshape(joint >> (bit + 1), 2, 1 << bit, count)
        upper, lower = shaped[:, 0].copy(), shaped[:, 1].copy()
        shaped[:, 0] = upper + lower
        shaped[:, 1] = upper - lower
    return result / numpy.sqrt(joint)


def hadamardAll(state: QState, register: str, controls: Controls = None) -> QState:
    """
    Hadamard on every qubit of a register.

    >>> s = hadamardAll(init(RegisterLayout([Register('A', 1)])), 'A')
    >>> sorted((k, round(v.real, 6)) for k, v in s.items())
    [((0,), 0.707107), ((1,), 0.707107)]

    :raises WrongRegisterKind: for a fixed-point value register.
    """
    target = state.layout.register(register)
    if target.kind == 'fixed_point':
        raise WrongRegisterKind("Hadamard on value register {} would mix its encoded numbers.".format(register))
    if target.width == 0:
        return state
    return applyBlock(state, [register], transform=_walshHadamard, controls=controls)


def pauliX(state: QState, register: str, mask: int = None, controls: Controls = None) -> QState:
    """
    Flip the qubits of a register selected by mask, all of them by default.
    Controlled on other registers this is a (multi-)CNOT.
    """
    position = state.layout.index(register)
    if mask is None:
        mask = state.layout.register(register).dimension - 1
    if controls and register in controls:
        raise OverlappingRegisters("Register {} cannot control itself.".format(register))
    test = controlTest(state.layout, controls)
    amplitudes = dict()
    for label, amp in state.items():
        if test is None or test(label):
            label = label[:position] + (label[position] ^ mask,) + label[position + 1:]
        amplitudes[label] = amp
    return state.derive(amplitudes)


def cnotRegister(state: QState, source: str, target: str, controls: Controls = None) -> QState:
    """
    Bitwise CNOT from each qubit of source onto the corresponding qubit of target: target ^= source.
    """
    _checkDisjoint([source], [target])
    layout = state.layout
    if layout.register(source).width > layout.register(target).width:
        raise DimensionMismatch("Source {} is wider than target {}.".format(source, target))
    src, tgt = layout.index(source), layout.index(target)
    test = controlTest(layout, controls)
    amplitudes = dict()
    for label, amp in state.items():
        if test is None or test(label):
            label = label[:tgt] + (label[tgt] ^ label[src],) + label[tgt + 1:]
        amplitudes[label] = amp
    return state.derive(amplitudes)


def controlledSwap(state: QState, control: str, first: str, second: str, controlValue: int = 1,
                   pad: bool = False) -> QState:
    """
    Exchange the labels of two equally wide registers on branches where the control holds controlValue.

    :param pad: Zero-pad the narrower register to the width of the other instead of refusing registers of
        different width. Its state is embedded on the first labels, so inner products are unchanged.
    :raises DimensionMismatch: if the widths differ and pad is not set.
    """
    _checkDisjoint([control], [first], [second])
    firstWidth, secondWidth = state.layout.register(first).width, state.layout.register(second).width
    if firstWidth != secondWidth:
        if not pad:
            raise DimensionMismatch("Cannot swap {} ({} qubits) with {} ({} qubits), widen the narrower one "
                                    "first.".format(first, firstWidth, second, secondWidth))
        narrow = first if firstWidth < secondWidth else second
        logging.getLogger(__name__).warning("Zero-padding %s to %d qubits for the swap.", narrow,
                                            max(firstWidth, secondWidth))
        state = widenRegister(state, narrow, max(firstWidth, secondWidth))
    layout = state.layout
    c, a, b = layout.index(control), layout.index(first), layout.index(second)
    amplitudes = dict()
    for label, amp in state.items():
        if label[c] == controlValue:
            swapped = list(label)
            swapped[a], swapped[b] = label[b], label[a]
            label = tuple(swapped)
        amplitudes[label] = amp
    return state.derive(amplitudes)


def qft(state: QState, register: str, controls: Controls = None) -> QState:
    """
    Quantum Fourier transform |x> -> 2^{-w/2} sum_y exp(2 pi i x y / 2^w) |y>.
    """
    joint = state.layout.register(register).dimension
    return applyBlock(state, [register], transform=lambda m: numpy.fft.ifft(m, axis=0) * numpy.sqrt(joint),
                      controls=controls)


def inverseQft(state: QState, register: str, controls: Controls = None) -> QState:
    """
    Inverse of qft.
    """
    joint = state.layout.register(register).dimension
    return applyBlock(state, [register], transform=lambda m: numpy.fft.fft(m, axis=0) / numpy.sqrt(joint),
                      controls=controls)


def applyPhase(state: QState, registers: Sequence[str], phaseFor: Callable[..., complex]) -> QState:
    """
    Diagonal gate: multiply each amplitude by phaseFor(labels of registers), a unit-modulus factor.
    """
    positions = [state.layout.index(r) for r in registers]
    cache = dict()
    amplitudes = dict()
    for label, amp in state.items():
        key = tuple(label[p] for p in positions)
        factor = cache.get(key)
        if factor is None:
            factor = complex(phaseFor(*key))
            if abs(abs(factor) - 1) > QState.normTolerance:
                raise InvariantViolation("Phase factor {} for {} is not unit modulus.".format(factor, key))
            cache[key] = factor
        amplitudes[label] = amp * factor
    return state.derive(amplitudes)


def globalPhase(state: QState, factor: complex) -> QState:
    return state.derive({label: amp * factor for label, amp in state.items()})


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Measurement and analysis
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #

def measure(state: QState, register: str, outcome: int) -> Tuple[QState, float]:
    """
    Project a register onto an outcome and renormalize.

    :return: The post-measurement state and the probability of the outcome.
    :raises ZeroProbabilityOutcome: if the outcome cannot occur.
    """
    position = state.layout.index(register)
    selected = {label: amp for label, amp in state.items() if label[position] == outcome}
    probability = sum(abs(a) ** 2 for a in selected.values())
    if probability < 1e-15:
        raise ZeroProbabilityOutcome("Outcome {} of register {} has probability {:.3e}.".format(
            outcome, register, probability))
    scale = 1 / numpy.sqrt(probability)
    return state.derive({label: amp * scale for label, amp in selected.items()}, checkNorm=False), probability


def sampleMeasurement(state: QState, register: str, rng: numpy.random.Generator) -> Tuple[int, QState, float]:
    """
    Measure a register with an outcome drawn from its marginal distribution.

    :return: The outcome, the post-measurement state, and the outcome probability.
    """
    marginal = state.probabilities([register])
    outcomes = sorted(marginal)
    weights = numpy.array([marginal[o] for o in outcomes])
    drawn = outcomes[rng.choice(len(outcomes), p=weights / weights.sum())][0]
    after, probability = measure(state, register, drawn)
    return drawn, after, probability


def sample(state: QState, registers: Sequence[str], shots: int, rng: numpy.random.Generator) -> Counter:
    """
    Repeated measurement of the given registers on copies of the state.

    :return: Counter of outcome label tuples.
    """
    if shots < 1:
        raise InputError("Need at least one shot, got {}.".format(shots))
    marginal = state.probabilities(registers)
    outcomes = sorted(marginal)
    weights = numpy.array([marginal[o] for o in outcomes])
    drawn = rng.choice(len(outcomes), size=shots, p=weights / weights.sum())
    return Counter(outcomes[i] for i in drawn)


def innerProduct(left: QState, right: QState) -> complex:
    """
    <left|right> of two states over the same layout.
    """
    if left.layout != right.layout:
        raise DimensionMismatch("States have different layouts.")
    return sum(numpy.conj(amp) * right.amplitude(label) for label, amp in left.items())


def reducedPurity(state: QState, registers: Sequence[str]) -> float:
    """
    Purity Tr(rho^2) of the reduced density matrix on the given registers; 1 for a product state.
    """
    from scipy.sparse import coo_matrix

    keep = [state.layout.index(r) for r in registers]
    rest = [p for p in range(len(state.layout)) if p not in keep]
    rowIds, colIds = dict(), dict()
    rows, cols, vals = list(), list(), list()
    for label, amp in state.items():
        rows.append(rowIds.setdefault(tuple(label[p] for p in keep), len(rowIds)))
        cols.append(colIds.setdefault(tuple(label[p] for p in rest), len(colIds)))
        vals.append(amp)
    psi = coo_matrix((vals, (rows, cols)), shape=(len(rowIds), len(colIds))).tocsr()
    adjoint = psi.conj().T
    gram = adjoint @ psi if len(colIds) <= len(rowIds) else psi @ adjoint
    return float(numpy.sum(numpy.abs(gram.toarray()) ** 2)) / state.norm() ** 4


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Serialization
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #

def stateToJson(state: QState) -> str:
    """
    The layout, the amplitudes as a list of {label, re, im} objects in label order, and the diagnostics.
    """
    registers = list()
    for r in state.layout:
        entry = {"name": r.name, "width": r.width, "kind": r.kind}
        if r.fixedPoint is not None:
            entry.update(int_bits=r.fixedPoint.intBits, frac_bits=r.fixedPoint.fracBits)
        registers.append(entry)
    amplitudes = [{"label": [int(v) for v in label], "re": float(amp.real), "im": float(amp.imag)}
                  for label, amp in sorted(state.items())]
    return json.dumps({"registers": registers, "max_qubits": state.layout.maxQubits,
                       "amplitudes": amplitudes, "diagnostics": state.diagnostics})


def stateFromJson(text: str) -> QState:
    try:
        raw = json.loads(text)
        registers = list()
        for entry in raw["registers"]:
            fmt = FixedPointFormat(entry["int_bits"], entry["frac_bits"]) if entry["kind"] == 'fixed_point' else None
            registers.append(Register(entry["name"], entry["width"], entry["kind"], fmt))
        layout = RegisterLayout(registers, raw.get("max_qubits"))
        amplitudes = {tuple(entry["label"]): complex(entry["re"], entry["im"]) for entry in raw["amplitudes"]}
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError("Malformed state dump: {}".format(e))
    return QState(layout, amplitudes, raw.get("diagnostics"))
