"""
Reversible fixed-point arithmetic on registers of a QState.

Every operation computes a classical function of the source register values per branch and XORs its
fixed-point encoding into a destination register. Applied a second time with uncompute=True the
destination returns to label 0, which is checked.
"""
import logging
from typing import Callable, Dict, Mapping, Sequence

import numpy
from bitarray.util import ba2int

from qspec.errors import InputError, InvariantViolation
from qspec.simulation.sparseState import QState, Controls, UncomputeResidual, pauliX, controlTest

OVERFLOW = 'overflow'
"""Diagnostics key counting saturated fixed-point results."""


class DestNotZero(InvariantViolation):
    """
    Error to raise if an arithmetic destination register is not cleared before a computation.
    """
    pass


def _cosine(values, scale=None):
    return numpy.cos(scale * values[0])


def _affine(values, a=1.0, b=0.0):
    return a * values[0] + b


OPERATIONS = {
    'add': lambda values: sum(values),
    'mul': lambda values: values[0] * values[1],
    'square': lambda values: values[0] ** 2,
    'cosine': _cosine,
    'affine': _affine,
}  # type: Dict[str, Callable]

ARITY = {'mul': 2, 'square': 1, 'cosine': 1, 'affine': 1}


def fixedPointOp(state: QState, op: str, sources: Sequence[str], dest: str,
                 uncompute: bool = False, controls: Controls = None, **params) -> QState:
    """
    dest = encode(op(values of sources)) on every branch, dest starting at 0.

    >>> from qspec.simulation.fixedPoint import FixedPointFormat
    >>> from qspec.simulation.registers import Register, RegisterLayout
    >>> from qspec.simulation.sparseState import basisState
    >>> fmt = FixedPointFormat(2, 8)
    >>> layout = RegisterLayout([Register.fixed('X', fmt), Register.fixed('Y', fmt), Register.fixed('Z', fmt)])
    >>> s = basisState(layout, {'X': fmt.encode(0.3)[0], 'Y': fmt.encode(0.7)[0]})
    >>> s = fixedPointOp(s, 'mul', ['X', 'Y'], 'Z')
    >>> [fmt.decode(label[2]) * 256 for label, _ in s.items()]
    [54.0]

    :param state: The input state.
    :param op: One of add, mul, square, cosine, affine.
    :param sources: Registers whose values are the operands. Phase registers contribute their signed label.
    :param dest: A fixed_point register not among the sources.
    :param uncompute: Clear dest instead of computing into it. Every branch must hold exactly the
        value the operation produces.
    :param controls: Only branches satisfying these are affected.
    :param params: cosine takes scale, the factor between source value and angle (default pi / 2^w for a phase
        register of width w, 1 otherwise). affine takes a and b.
    :return: The new state. Saturated results increase the overflow diagnostic.
    :raises DestNotZero: if dest is not 0 on an affected branch.
    :raises UncomputeResidual: in uncompute mode, if a branch holds a different value in dest.
    """
    if op not in OPERATIONS:
        raise InputError("Unknown fixed-point operation {}.".format(op))
    if op in ARITY and len(sources) != ARITY[op]:
        raise InputError("Operation {} takes {} operands, got {}.".format(op, ARITY[op], len(sources)))
    if dest in sources:
        raise InputError("Destination {} cannot be one of the sources.".format(dest))
    layout = state.layout
    target = layout.register(dest)
    if target.kind != 'fixed_point':
        raise InputError("Destination {} is not a fixed_point register.".format(dest))
    fmt = target.fixedPoint
    sourceRegisters = [layout.register(s) for s in sources]
    positions = [layout.index(s) for s in sources]
    destPosition = layout.index(dest)
    if op == 'cosine' and params.get('scale') is None:
        source = sourceRegisters[0]
        params['scale'] = numpy.pi / source.dimension if source.kind == 'phase' else 1.0
    function = OPERATIONS[op]
    test = controlTest(layout, controls)

    cache = dict()  # type: Dict[tuple, tuple]
    overflows = 0
    amplitudes = dict()
    for label, amp in state.items():
        if test is not None and not test(label):
            amplitudes[label] = amp
            continue
        key = tuple(label[p] for p in positions)
        encoded = cache.get(key)
        if encoded is None:
            values = [r.value(v) for r, v in zip(sourceRegisters, key)]
            encoded = fmt.encode(function(values, **params))
            cache[key] = encoded
        result, overflowed = encoded
        current = label[destPosition]
        if not uncompute and current != 0:
            raise DestNotZero("Register {} holds {} before {}.".format(dest, fmt.decode(current), op))
        if uncompute and current != result:
            raise UncomputeResidual("Register {} holds {} where {} computes {}.".format(
                dest, fmt.decode(current), op, fmt.decode(result)))
        if overflowed and not uncompute:
            overflows += 1
        amplitudes[label[:destPosition] + (current ^ result,) + label[destPosition + 1:]] = amp
    successor = state.derive(amplitudes)
    if overflows:
        logging.getLogger(__name__).warning("%s into %s saturated on %d branches.", op, dest, overflows)
        successor = successor.withDiagnostic(OVERFLOW, overflows)
    return successor


def loadConstant(state: QState, dest: str, value: float, controls: Controls = None) -> QState:
    """
    XOR the encoding of a classical value into a fixed_point register by controlled bit flips.
    Applying the same call again clears the register.
    """
    target = state.layout.register(dest)
    if target.kind != 'fixed_point':
        raise InputError("Destination {} is not a fixed_point register.".format(dest))
    fmt = target.fixedPoint
    mask = ba2int(fmt.bits(value))
    successor = pauliX(state, dest, mask, controls) if mask else state
    if fmt.encode(value)[1]:
        logging.getLogger(__name__).warning("Constant %s saturated in %s.", value, dest)
        successor = successor.withDiagnostic(OVERFLOW, 1)
    return successor


def loadTable(state: QState, dest: str, index: str, values: Sequence[float],
              controls: Controls = None) -> QState:
    """
    XOR values[i] into dest on branches where register index holds label i.
    Labels without a table entry are left unchanged.

    :param controls: Additional controls, must not name index.
    """
    controls = dict(controls) if controls else dict()
    if index in controls:
        raise InputError("Index register {} cannot also be a control.".format(index))
    for i, value in enumerate(values):
        state = loadConstant(state, dest, value, dict(controls, **{index: i}))
    return state


def loadMatrix(state: QState, dest: str, rowIndex: str, colIndex: str, matrix: numpy.ndarray,
               controls: Mapping = None) -> QState:
    """
    XOR matrix[i, k] into dest on branches with rowIndex = i and colIndex = k.
    """
    matrix = numpy.asarray(matrix)
    for i in range(matrix.shape[0]):
        rowControls = dict(controls) if controls else dict()
        rowControls[rowIndex] = i
        state = loadTable(state, dest, colIndex, matrix[i], rowControls)
    return state
