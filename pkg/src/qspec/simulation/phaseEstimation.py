"""
Phase estimation of a unitary operator with a phase register of q qubits.

The operator is anything with
    registers, contextRegisters,
    apply(state, controls=None, inverse=False) and
    matrix(*contextLabels) -> dense unitary on the joint target space.
Controlled powers are applied densely per branch group if the targets are small, and as repeated
sparse controlled applications otherwise.
"""
import logging
from typing import Dict, Sequence, Tuple

import numpy

from qspec.errors import InputError
from qspec.simulation.sparseState import QState, hadamardAll, qft, inverseQft

denseTargetQubits = 12
"""Largest joint target width for which controlled powers use dense matrix powers."""


def _bitSet(bit: int):
    return lambda label: (label >> bit) & 1 == 1


def applyControlledPowers(state: QState, operator, phase: str, inverse: bool = False) -> QState:
    """
    |u>|x> -> |u> U^u |x> on the target registers of the operator, u the label of the phase register.
    With inverse, U^-u instead.
    """
    layout = state.layout
    if phase in operator.registers or phase in operator.contextRegisters:
        raise InputError("Phase register {} is also used by the operator.".format(phase))
    width = layout.register(phase).width
    targetWidth = sum(layout.register(r).width for r in operator.registers)
    if targetWidth > denseTargetQubits:
        for bit in range(width):
            for _ in range(1 << bit):
                state = operator.apply(state, controls={phase: _bitSet(bit)}, inverse=inverse)
        return state
    return _denseControlledPowers(state, operator, phase, inverse)


def _denseControlledPowers(state: QState, operator, phase: str, inverse: bool) -> QState:
    layout = state.layout
    targets = [layout.index(r) for r in operator.registers]
    dims = [layout.registers[p].dimension for p in targets]
    joint = int(numpy.prod(dims))
    strides = [int(numpy.prod(dims[i + 1:])) for i in range(len(dims))]
    rest = [p for p in range(len(layout)) if p not in targets]
    phaseSlot = rest.index(layout.index(phase))
    contextSlots = [rest.index(layout.index(c)) for c in operator.contextRegisters]

    groups = dict()  # type: Dict[Tuple[int, ...], int]
    rows, cols, vals = list(), list(), list()
    for label, amp in state.items():
        key = tuple(label[p] for p in rest)
        cols.append(groups.setdefault(key, len(groups)))
        rows.append(sum(label[p] * s for p, s in zip(targets, strides)))
        vals.append(amp)
    columns = numpy.zeros((joint, len(groups)), dtype=complex)
    columns[rows, cols] = vals
    keys = list(groups.keys())

    byContext = dict()
    for col, key in enumerate(keys):
        byContext.setdefault(tuple(key[s] for s in contextSlots), list()).append(col)
    for context, members in byContext.items():
        unitary = operator.matrix(*context)
        if inverse:
            unitary = unitary.conj().T
        members = numpy.array(members)
        powers = numpy.array([keys[c][phaseSlot] for c in members])
        block = columns[:, members]
        power = unitary
        bit = 0
        while (powers >> bit).any():
            selected = ((powers >> bit) & 1).astype(bool)
            block[:, selected] = power @ block[:, selected]
            power = power @ power
            bit += 1
        columns[:, members] = block

    amplitudes = dict()
    for row, col in zip(*numpy.nonzero(numpy.abs(columns) > QState.pruneThreshold)):
        label = [0] * len(layout)
        for p, v in zip(rest, keys[col]):
            label[p] = v
        for p, s, d in zip(targets, strides, dims):
            label[p] = (int(row) // s) % d
        amplitudes[tuple(label)] = columns[row, col]
    return state.derive(amplitudes)


def phaseEstimate(state: QState, operator, phase: str) -> QState:
    """
    Hadamards on the phase register (at label 0), controlled powers, inverse QFT.
    An eigenvector with eigenvalue exp(2 pi i phi) yields phase labels concentrated around phi 2^q.
    """
    state = hadamardAll(state, phase)
    state = applyControlledPowers(state, operator, phase)
    state = inverseQft(state, phase)
    logging.getLogger(__name__).debug("Phase estimation on %s done, %d branches.", phase, state.branchCount)
    return state


def uncomputePhaseEstimate(state: QState, operator, phase: str) -> QState:
    """
    Exact adjoint of phaseEstimate; returns the phase register to label 0 if nothing was entangled with it since.
    """
    state = qft(state, phase)
    state = applyControlledPowers(state, operator, phase, inverse=True)
    return hadamardAll(state, phase)


def phaseOfLabel(label: int, width: int) -> float:
    """
    >>> phaseOfLabel(6, 3)
    -0.25

    :return: The phase in [-1/2, 1/2) a phase register label of the given width stands for.
    """
    if label >= 1 << (width - 1):
        label -= 1 << width
    return label / (1 << width)


def angleOfLabel(label: int, width: int) -> float:
    """
    Rotation angle theta in [-pi/2, pi/2) of a label estimating an eigenvalue exp(2 i theta).

    >>> round(angleOfLabel(2, 3), 6)
    0.785398
    """
    return numpy.pi * phaseOfLabel(label, width)
