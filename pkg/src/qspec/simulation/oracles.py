"""
Amplitude-encoding oracles, reflections, and the amplitude-estimation operator built from them.

A PreparationOracle loads the normalized row (or column) vector selected by an index register into a
target register that starts at label 0. It is realized as a Householder reflection that maps the first basis
vector to the normalized data vector, so it is real, symmetric and its own inverse.
"""
from typing import Callable, List, Mapping, Optional, Sequence

import numpy

from qspec.errors import InputError, InvariantViolation
from qspec.utils.baseAlgorithms import padVector
from qspec.simulation.registers import RegisterLayout
from qspec.simulation.sparseState import QState, Controls, applyBlock, applyPhase, globalPhase, hadamardAll, \
    controlTest


class ZeroNormVector(InputError):
    """
    Error to raise if a vector to be amplitude-encoded has norm zero.
    """
    pass


class TargetNotZero(InvariantViolation):
    pass


class UnknownDescriptor(InputError):
    pass


def householder(vector: numpy.ndarray, dimension: int = None) -> numpy.ndarray:
    """
    Real orthogonal matrix whose first column is the normalized vector.

    >>> h = householder(numpy.array([3., 4.]))
    >>> h[:, 0].round(12)
    array([0.6, 0.8])
    >>> numpy.allclose(h @ h, numpy.eye(2))
    True

    :param vector: The data vector, zero-padded to dimension.
    :param dimension: Size of the matrix, defaults to len(vector).
    :return: H = I - 2 u u^T / (u^T u) with u = e_0 - v / |v|, or I if v / |v| = e_0.
    """
    vector = numpy.asarray(vector, dtype=float)
    dimension = len(vector) if dimension is None else dimension
    norm = numpy.linalg.norm(vector)
    if norm == 0:
        raise ZeroNormVector("Cannot encode a vector of norm zero.")
    unit = padVector(vector / norm, dimension)
    u = -unit
    u[0] += 1.0
    uu = u @ u
    if uu < 1e-30:
        return numpy.eye(dimension)
    return numpy.eye(dimension) - 2.0 * numpy.outer(u, u) / uu


class PreparationOracle(object):
    """
    Loads the normalized rows (direction 'row') or columns (direction 'column') of a real matrix.

    The U1 oracle of the layer circuit loads rows, the U2 oracle loads columns.
    """

    def __init__(self, matrix: numpy.ndarray, direction: str = 'row', dimension: int = None):
        """
        :param matrix: The real data matrix.
        :param direction: Whether rows or columns are the loaded vectors.
        :param dimension: Dimension of the target register, defaults to the next power of two of the vector length.
        """
        matrix = numpy.asarray(matrix, dtype=float)
        if matrix.ndim == 1:
            matrix = matrix.reshape(1, -1)
        if direction not in ('row', 'column'):
            raise InputError("Direction must be row or column, not {}.".format(direction))
        vectors = matrix if direction == 'row' else matrix.T
        norms = numpy.linalg.norm(vectors, axis=1)
        if (norms == 0).any():
            raise ZeroNormVector("{} {} of the matrix has norm zero.".format(
                direction.capitalize(), int(numpy.flatnonzero(norms == 0)[0])))
        length = vectors.shape[1]
        if dimension is None:
            dimension = 1 << max(0, int(numpy.ceil(numpy.log2(length))))
        if dimension < length:
            raise InputError("Target dimension {} is smaller than the vector length {}.".format(dimension, length))
        self._vectors = vectors / norms[:, None]
        self._norms = norms
        self._direction = direction
        self._dimension = dimension
        self._unitaries = dict()

    @property
    def count(self) -> int:
        """
        :return: Number of loadable vectors.
        """
        return self._vectors.shape[0]

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def direction(self) -> str:
        return self._direction

    @property
    def norms(self) -> numpy.ndarray:
        return self._norms

    def vector(self, index: int) -> numpy.ndarray:
        """
        :return: The normalized vector padded to the target dimension.
        """
        return padVector(self._vectors[index], self._dimension)

    def unitary(self, index: int) -> numpy.ndarray:
        """
        :return: Unitary with first column vector(index). Indices without a vector map to the identity.
        """
        if index not in self._unitaries:
            if index < self.count:
                self._unitaries[index] = householder(self._vectors[index], self._dimension)
            else:
                self._unitaries[index] = numpy.eye(self._dimension)
        return self._unitaries[index]

    def treeAngles(self, index: int) -> List[numpy.ndarray]:
        """
        Rotation angles of the binary-tree (bucket-brigade) view of the same state preparation:
        level l holds 2^l angles, the rotation at a node splits its probability mass between its two
        children as cos^2(angle / 2) : sin^2(angle / 2).

        >>> [a.round(6) for a in PreparationOracle([[1., 1., 1., 1.]]).treeAngles(0)]
        [array([1.570796]), array([1.570796, 1.570796])]

        :return: One array of angles per tree level, from the root downwards.
        """
        mass = self.vector(index) ** 2
        levels = list()
        while len(mass) > 1:
            pairs = mass.reshape(-1, 2)
            parent = pairs.sum(axis=1)
            with numpy.errstate(invalid='ignore', divide='ignore'):
                ratio = numpy.where(parent > 0, pairs[:, 0] / parent, 1.0)
            levels.append(2 * numpy.arccos(numpy.sqrt(numpy.clip(ratio, 0.0, 1.0))))
            mass = parent
        return levels[::-1]

    def signs(self, index: int) -> numpy.ndarray:
        """
        :return: The signs the leaves of the tree view need on top of the rotations.
        """
        return numpy.where(self.vector(index) < 0, -1.0, 1.0)


def amplitudesFromTreeAngles(angles: Sequence[numpy.ndarray], signs: numpy.ndarray) -> numpy.ndarray:
    """
    State vector that the rotation tree of PreparationOracle.treeAngles produces from label 0.
    """
    amplitudes = numpy.ones(1)
    for level in angles:
        children = numpy.empty(2 * len(amplitudes))
        children[0::2] = amplitudes * numpy.cos(level / 2)
        children[1::2] = amplitudes * numpy.sin(level / 2)
        amplitudes = children
    return amplitudes * signs


def _checkTargetZero(state: QState, target: str, controls: Controls):
    position = state.layout.index(target)
    test = controlTest(state.layout, controls)
    for label, amp in state.items():
        if label[position] != 0 and (test is None or test(label)):
            raise TargetNotZero("Register {} holds label {} before loading.".format(target, label[position]))


def applyUPrepare(state: QState, oracle: PreparationOracle, target: str, index: str = None,
                  fixedIndex: int = None, controls: Controls = None, inverse: bool = False) -> QState:
    """
    |i>|0> -> |i>|v_i / |v_i|> for the vector v_i the oracle holds for the label i of the index register.

    :param state: The input state.
    :param oracle: The vectors to load.
    :param target: The register receiving the amplitudes, of the oracle's dimension.
    :param index: The register selecting the vector.
    :param fixedIndex: Load this vector regardless of any register, instead of index.
    :param controls: Only branches satisfying these are affected.
    :param inverse: Apply the adjoint, which unloads the vector back to label 0.
    :raises TargetNotZero: if not inverse and the target is not at label 0 on an affected branch.
    """
    if (index is None) == (fixedIndex is None):
        raise InputError("Exactly one of index and fixedIndex is required.")
    if state.layout.register(target).dimension != oracle.dimension:
        raise InputError("Target {} has dimension {}, the oracle loads {}.".format(
            target, state.layout.register(target).dimension, oracle.dimension))
    if not inverse:
        _checkTargetZero(state, target, controls)
    # Householder matrices are real symmetric involutions, so they equal their adjoint
    if fixedIndex is not None:
        return applyBlock(state, [target], matrix=oracle.unitary(fixedIndex), controls=controls)
    return applyBlock(state, [target], matrixFor=oracle.unitary, contextRegisters=[index], controls=controls)


def prepareUniform(state: QState, register: str, count: int, controls: Controls = None) -> QState:
    """
    |0> -> count^{-1/2} sum_{i < count} |i>. Plain Hadamards if count fills the register.
    """
    dimension = state.layout.register(register).dimension
    if not 1 <= count <= dimension:
        raise InputError("Cannot spread register {} of dimension {} over {} labels.".format(
            register, dimension, count))
    if count == dimension:
        return hadamardAll(state, register, controls)
    return applyBlock(state, [register], matrix=householder(numpy.ones(count), dimension), controls=controls)


class StatePreparation(object):
    """
    Descriptor of a unitary A on a set of target registers, possibly depending on labels of context registers.
    A applied to the all-zero label of the targets yields the prepared state.
    """

    def __init__(self, registers: Sequence[str], matrixFor: Callable[..., numpy.ndarray],
                 contextRegisters: Sequence[str] = ()):
        self._registers = tuple(registers)
        self._matrixFor = matrixFor
        self._contextRegisters = tuple(contextRegisters)
        self._cache = dict()

    @property
    def registers(self):
        return self._registers

    @property
    def contextRegisters(self):
        return self._contextRegisters

    def matrix(self, *context: int) -> numpy.ndarray:
        if context not in self._cache:
            self._cache[context] = numpy.asarray(self._matrixFor(*context), dtype=complex)
        return self._cache[context]

    def apply(self, state: QState, inverse: bool = False, controls: Controls = None) -> QState:
        if inverse:
            return applyBlock(state, self._registers, matrixFor=lambda *c: self.matrix(*c).conj().T,
                              contextRegisters=self._contextRegisters, controls=controls)
        return applyBlock(state, self._registers, matrixFor=self.matrix,
                          contextRegisters=self._contextRegisters, controls=controls)


class LabelSet(object):
    """
    Descriptor of the span of basis labels of some registers that satisfy a predicate.
    """

    def __init__(self, registers: Sequence[str], predicate: Callable[..., bool]):
        self.registers = tuple(registers)
        self.predicate = predicate


def zeroLabel(registers: Sequence[str]) -> LabelSet:
    return LabelSet(registers, lambda *labels: not any(labels))


def applyReflection(state: QState, about, controls: Controls = None) -> QState:
    """
    I - 2 P, P the projector onto the described subspace.

    With about a StatePreparation A, P = A|0><0|A^dagger, i.e. the reflection negates the prepared state and
    leaves its orthogonal complement unchanged. With about a LabelSet, P projects onto the matching labels.

    :raises UnknownDescriptor: for any other descriptor.
    """
    if isinstance(about, LabelSet):
        registers, predicate = about.registers, about.predicate
        if controls:
            test = controlTest(state.layout, controls)
            positions = [state.layout.index(r) for r in registers]
            amplitudes = dict()
            for label, amp in state.items():
                hit = test(label) and predicate(*(label[p] for p in positions))
                amplitudes[label] = -amp if hit else amp
            return state.derive(amplitudes)
        return applyPhase(state, registers, lambda *labels: -1.0 if predicate(*labels) else 1.0)
    if isinstance(about, StatePreparation):
        state = about.apply(state, inverse=True, controls=controls)
        state = applyReflection(state, zeroLabel(about.registers), controls)
        return about.apply(state, controls=controls)
    raise UnknownDescriptor("Cannot reflect about {!r}.".format(about))


class GroverOperator(object):
    """
    Q = -(I - 2 |psi><psi|)(I - 2 P_flag), psi = A|0> and P_flag the projector onto flag = 1.

    If psi = cos(theta)|good, flag 0> + sin(theta)|bad, flag 1>, Q rotates by 2 theta within their span, so its
    eigenvalues there are exp(+-2 i theta).
    """

    def __init__(self, preparation: StatePreparation, flag: str, layout: RegisterLayout):
        """
        :param preparation: A, acting on registers that include the flag.
        :param flag: The flag register marking the bad component.
        :param layout: The layout the operator acts in, needed for the dense form.
        """
        if flag not in preparation.registers:
            raise InputError("Flag register {} is not among the prepared registers.".format(flag))
        widths = [layout.register(r).width for r in preparation.registers]
        # bit of the flag qubit inside the joint index of the targets, first target most significant
        self._flagShift = sum(widths[preparation.registers.index(flag) + 1:])
        self._preparation = preparation
        self._flag = flag
        self._flagOne = LabelSet([flag], lambda f: f == 1)
        self._matrices = dict()

    @property
    def registers(self):
        return self._preparation.registers

    @property
    def contextRegisters(self):
        return self._preparation.contextRegisters

    @property
    def preparation(self) -> StatePreparation:
        return self._preparation

    def apply(self, state: QState, controls: Controls = None, inverse: bool = False) -> QState:
        if inverse:
            state = applyReflection(state, self._preparation, controls)
            state = applyReflection(state, self._flagOne, controls)
        else:
            state = applyReflection(state, self._flagOne, controls)
            state = applyReflection(state, self._preparation, controls)
        if controls:
            test = controlTest(state.layout, controls)
            return state.derive({label: -amp if test(label) else amp for label, amp in state.items()})
        return globalPhase(state, -1.0)

    def matrix(self, *context: int) -> numpy.ndarray:
        """
        :return: Dense Q on the joint target space for the given context labels.
        """
        if context not in self._matrices:
            a = self._preparation.matrix(*context)
            psi = a[:, 0]
            dimension = len(psi)
            flagOne = numpy.array([(i >> self._flagShift) & 1 for i in range(dimension)], dtype=float)
            reflectPsi = numpy.eye(dimension) - 2 * numpy.outer(psi, psi.conj())
            reflectFlag = numpy.diag(1 - 2 * flagOne)
            self._matrices[context] = -reflectPsi @ reflectFlag
        return self._matrices[context]
