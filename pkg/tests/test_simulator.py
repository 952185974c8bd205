"""
Registers, fixed-point arithmetic, and the sparse state simulator, cross-checked against the dense reference.
"""
import json
import unittest

import numpy
from scipy.stats import unitary_group

from qspec.errors import InputError
from qspec.simulation.fixedPoint import FixedPointFormat
from qspec.simulation.registers import Register, RegisterLayout, LayoutTooWide
from qspec.simulation.sparseState import QState, init, basisState, addRegisters, dropRegisters, applyBlock, \
    hadamardAll, pauliX, cnotRegister, controlledSwap, qft, inverseQft, applyPhase, measure, sampleMeasurement, \
    sample, innerProduct, stateToJson, stateFromJson, DimensionMismatch, ZeroProbabilityOutcome, UncomputeResidual, \
    WrongRegisterKind
from qspec.simulation.arithmetic import fixedPointOp, loadTable, loadConstant, DestNotZero, OVERFLOW
from qspec.simulation.oracles import PreparationOracle, StatePreparation, GroverOperator, applyUPrepare, \
    applyReflection, zeroLabel, householder, prepareUniform, amplitudesFromTreeAngles, TargetNotZero
from qspec.simulation.phaseEstimation import phaseEstimate, uncomputePhaseEstimate, angleOfLabel
from qspec.validation.denseOracle import DenseState


class TestRegisters(unittest.TestCase):

    def test_layoutWidth(self):
        wide = RegisterLayout([Register('A', 20), Register('B', 20)])
        self.assertEqual(wide.totalWidth, 40)
        with self.assertRaises(LayoutTooWide):
            wide.extended(Register('C', 1))
        with self.assertRaises(InputError):
            RegisterLayout([Register('A', 1), Register('A', 2)])

    def test_kinds(self):
        with self.assertRaises(InputError):
            Register('F', 2, 'flag')
        with self.assertRaises(InputError):
            Register('V', 3, 'fixed_point')
        fmt = FixedPointFormat(2, 8)
        self.assertEqual(Register.fixed('V', fmt).width, 11)
        self.assertEqual(Register('P', 3, 'phase').value(7), -1)
        with self.assertRaises(InputError):
            FixedPointFormat(-1, 4)

    def test_init(self):
        state = init(RegisterLayout([Register('A', 2), Register('B', 3)]))
        self.assertEqual(state.amplitudes, {(0, 0): 1 + 0j})


class TestFixedPoint(unittest.TestCase):

    def setUp(self) -> None:
        self.fmt = FixedPointFormat(2, 8)
        self.layout = RegisterLayout([Register.fixed(name, self.fmt) for name in ('X', 'Y', 'Z')])

    def values(self, state: QState, register: str):
        position = state.layout.index(register)
        return [self.fmt.decode(label[position]) for label, _ in state.items()]

    def operands(self, x: float, y: float) -> QState:
        return basisState(self.layout, {'X': self.fmt.encode(x)[0], 'Y': self.fmt.encode(y)[0]})

    def test_add(self):
        self.assertEqual(self.values(fixedPointOp(self.operands(0.25, 0.5), 'add', ['X', 'Y'], 'Z'), 'Z'), [0.75])

    def test_mul(self):
        self.assertEqual(self.values(fixedPointOp(self.operands(0.3, 0.7), 'mul', ['X', 'Y'], 'Z'), 'Z'),
                         [54 / 256])

    def test_cosine(self):
        self.assertEqual(self.values(fixedPointOp(self.operands(0.0, 0.0), 'cosine', ['X'], 'Z'), 'Z'), [1.0])

    def test_affine(self):
        state = fixedPointOp(self.operands(0.75, 0.0), 'affine', ['X'], 'Z', a=2.0, b=-1.0)
        self.assertEqual(self.values(state, 'Z'), [0.5])

    def test_overflow(self):
        state = fixedPointOp(self.operands(1.9, 3.0), 'mul', ['X', 'Y'], 'Z')
        self.assertEqual(self.values(state, 'Z'), [self.fmt.maxValue])
        self.assertEqual(state.diagnostics[OVERFLOW], 1)
        self.assertEqual(self.fmt.encode(5.0), (1023, True))

    def test_destNotZero(self):
        state = fixedPointOp(self.operands(0.3, 0.7), 'mul', ['X', 'Y'], 'Z')
        with self.assertRaises(DestNotZero):
            fixedPointOp(state, 'mul', ['X', 'Y'], 'Z')

    def test_uncompute(self):
        state = fixedPointOp(self.operands(0.3, 0.7), 'mul', ['X', 'Y'], 'Z')
        cleared = fixedPointOp(state, 'mul', ['X', 'Y'], 'Z', uncompute=True)
        self.assertEqual(self.values(cleared, 'Z'), [0.0])
        with self.assertRaises(UncomputeResidual):
            fixedPointOp(state, 'add', ['X', 'Y'], 'Z', uncompute=True)

    def test_loadTable(self):
        layout = RegisterLayout([Register('K', 1), Register.fixed('V', self.fmt)])
        state = loadTable(hadamardAll(init(layout), 'K'), 'V', 'K', [0.5, -0.25])
        self.assertEqual(sorted((label[0], self.fmt.decode(label[1])) for label, _ in state.items()),
                         [(0, 0.5), (1, -0.25)])
        # loading the same table again clears the register
        cleared = loadTable(state, 'V', 'K', [0.5, -0.25])
        self.assertEqual(dropRegisters(cleared, 'V', tolerance=0.0).branchCount, 2)
        twice = loadConstant(loadConstant(init(layout), 'V', 0.3), 'V', 0.3)
        self.assertEqual(twice.amplitudes, {(0, 0): 1 + 0j})


class TestGates(unittest.TestCase):

    def setUp(self) -> None:
        self.layout = RegisterLayout([Register('A', 2), Register('B', 2), Register.flag('F')])

    def assertStatesClose(self, left: QState, right: QState, tolerance: float = 1e-10):
        numpy.testing.assert_allclose(left.toDense(), right.toDense(), atol=tolerance)

    def test_hadamard(self):
        flag = hadamardAll(init(RegisterLayout([Register.flag('F')])), 'F')
        for amp in flag.amplitudes.values():
            self.assertAlmostEqual(amp, numpy.sqrt(0.5))
        state = hadamardAll(init(self.layout), 'A')
        self.assertEqual(len(state.amplitudes), 4)
        for amp in state.amplitudes.values():
            self.assertAlmostEqual(amp, 0.5)
        self.assertStatesClose(hadamardAll(state, 'A'), init(self.layout))
        value = RegisterLayout([Register('A', 1), Register.fixed('V', FixedPointFormat(2, 4))])
        with self.assertRaises(WrongRegisterKind):
            hadamardAll(init(value), 'V')
        phase = hadamardAll(init(RegisterLayout([Register('P', 2, 'phase')])), 'P')
        self.assertEqual(len(phase.amplitudes), 4)

    def test_pauliAndSwap(self):
        flipped = pauliX(init(self.layout), 'F')
        self.assertEqual(flipped.amplitudes, {(0, 0, 1): 1 + 0j})
        state = basisState(self.layout, {'A': 1, 'B': 2})
        self.assertEqual(controlledSwap(state, 'F', 'A', 'B').amplitudes, state.amplitudes)
        swapped = controlledSwap(pauliX(state, 'F'), 'F', 'A', 'B')
        self.assertEqual(swapped.amplitudes, {(2, 1, 1): 1 + 0j})

    def test_swapPadding(self):
        layout = RegisterLayout([Register('A', 1), Register('B', 2), Register.flag('F')])
        state = basisState(layout, {'A': 1, 'B': 2, 'F': 1})
        with self.assertRaises(DimensionMismatch):
            controlledSwap(state, 'F', 'A', 'B')
        padded = controlledSwap(state, 'F', 'A', 'B', pad=True)
        self.assertEqual(padded.layout.register('A').width, 2)
        self.assertEqual(padded.amplitudes, {(2, 1, 1): 1 + 0j})

    def test_qft(self):
        state = applyBlock(init(self.layout), ['A', 'B'], matrix=unitary_group.rvs(16, random_state=1))
        self.assertStatesClose(inverseQft(qft(state, 'A'), 'A'), state)
        uniform = hadamardAll(init(self.layout), 'A')
        self.assertStatesClose(inverseQft(uniform, 'A'), init(self.layout))

    def test_uPrepare(self):
        layout = RegisterLayout([Register('T', 1)])
        oracle = PreparationOracle(numpy.array([[1., 1., 3.], [0., 1., 4.]]), 'column')
        expected = [[1.0, 0.0], [numpy.sqrt(0.5), numpy.sqrt(0.5)], [0.6, 0.8]]
        for column, amplitudes in enumerate(expected):
            state = applyUPrepare(init(layout), oracle, 'T', fixedIndex=column)
            numpy.testing.assert_allclose(state.toDense(), amplitudes, atol=1e-12)
        with self.assertRaises(TargetNotZero):
            applyUPrepare(pauliX(init(layout), 'T'), oracle, 'T', fixedIndex=0)

    def test_treeAngles(self):
        oracle = PreparationOracle(numpy.array([[0.5, -1.0, 2.0, 0.25]]))
        numpy.testing.assert_allclose(amplitudesFromTreeAngles(oracle.treeAngles(0), oracle.signs(0)),
                                      oracle.vector(0), atol=1e-12)

    def test_prepareUniform(self):
        layout = RegisterLayout([Register('A', 2)])
        numpy.testing.assert_allclose(prepareUniform(init(layout), 'A', 3).toDense(),
                                      [1 / numpy.sqrt(3)] * 3 + [0], atol=1e-12)

    def test_measure(self):
        plus = hadamardAll(init(RegisterLayout([Register.flag('F')])), 'F')
        after, probability = measure(plus, 'F', 0)
        self.assertAlmostEqual(probability, 0.5)
        self.assertEqual(after.amplitudes, {(0,): 1 + 0j})
        state = basisState(self.layout, {'A': 3})
        self.assertAlmostEqual(measure(state, 'A', 3)[1], 1.0)
        with self.assertRaises(ZeroProbabilityOutcome):
            measure(state, 'A', 2)
        drawn, collapsed, probability = sampleMeasurement(state, 'A', numpy.random.default_rng(2))
        self.assertEqual((drawn, probability), (3, 1.0))
        self.assertEqual(collapsed.amplitudes, state.amplitudes)

    def test_sample(self):
        plus = hadamardAll(init(RegisterLayout([Register.flag('F')])), 'F')
        counts = sample(plus, ['F'], 1000, numpy.random.default_rng(5))
        self.assertEqual(sum(counts.values()), 1000)
        self.assertEqual(counts, sample(plus, ['F'], 1000, numpy.random.default_rng(5)))

    def test_registersLifecycle(self):
        state = addRegisters(basisState(self.layout, {'A': 2}), Register('W', 3))
        self.assertEqual(state.layout.names, ('A', 'B', 'F', 'W'))
        self.assertEqual(dropRegisters(state, 'W').layout, self.layout)
        with self.assertRaises(UncomputeResidual):
            dropRegisters(state, 'A')

    def test_jsonDump(self):
        state = applyBlock(init(self.layout), ['A'], matrix=unitary_group.rvs(4, random_state=2))
        dump = json.loads(stateToJson(state))
        labels = [entry["label"] for entry in dump["amplitudes"]]
        self.assertEqual(labels, sorted(labels))
        for entry in dump["amplitudes"]:
            self.assertEqual(sorted(entry), ["im", "label", "re"])
            self.assertEqual(len(entry["label"]), len(state.layout.names))
            self.assertAlmostEqual(complex(entry["re"], entry["im"]), state.amplitudes[tuple(entry["label"])])
        restored = stateFromJson(stateToJson(state))
        self.assertEqual(restored.layout, state.layout)
        self.assertAlmostEqual(abs(innerProduct(restored, state)), 1.0, places=12)
        with self.assertRaises(InputError):
            stateFromJson('{"registers": 3}')


class TestAgainstDense(unittest.TestCase):
    """
    Random circuits run on the sparse simulator and the dense reference must agree amplitude by amplitude.
    """

    def setUp(self) -> None:
        self.layout = RegisterLayout([Register('A', 2), Register('B', 2), Register.flag('F')])

    def runBoth(self, seed: int):
        rng = numpy.random.default_rng(seed)
        sparse, dense = init(self.layout), DenseState(self.layout)
        sparse = hadamardAll(sparse, 'A')
        dense.hadamardAll('A')
        for step in range(12):
            gate = rng.integers(0, 6)
            if gate == 0:
                register = ['A', 'B', 'F'][rng.integers(0, 3)]
                sparse = hadamardAll(sparse, register)
                dense.hadamardAll(register)
            elif gate == 1:
                mask = int(rng.integers(1, 4))
                sparse = pauliX(sparse, 'B', mask)
                dense.pauliX('B', mask)
            elif gate == 2:
                sparse = cnotRegister(sparse, 'A', 'B')
                dense.cnotRegister('A', 'B')
            elif gate == 3:
                sparse = controlledSwap(sparse, 'F', 'A', 'B')
                dense.controlledSwap('F', 'A', 'B')
            elif gate == 4:
                unitaries = [unitary_group.rvs(8, random_state=seed * 100 + step * 4 + a) for a in range(4)]
                sparse = applyBlock(sparse, ['B', 'F'], matrixFor=lambda a: unitaries[a], contextRegisters=['A'])
                for a in range(4):
                    dense.applyMatrix(['B', 'F'], unitaries[a], {'A': a})
            else:
                angles = rng.uniform(0, 2 * numpy.pi, size=(4, 2))
                sparse = applyPhase(sparse, ['A', 'F'], lambda a, f: numpy.exp(1j * angles[a, f]))
                dense.applyPhase(['A', 'F'], lambda a, f: numpy.exp(1j * angles[a, f]))
        sparse = qft(sparse, 'B')
        dense.qft('B')
        return sparse, dense

    def test_randomCircuits(self):
        for seed in range(6):
            sparse, dense = self.runBoth(seed)
            numpy.testing.assert_allclose(sparse.toDense(), dense.vector, atol=1e-10)
            self.assertAlmostEqual(sparse.norm(), 1.0, places=10)

    def test_postselectProbability(self):
        sparse, dense = self.runBoth(7)
        for outcome in (0, 1):
            self.assertAlmostEqual(measure(sparse, 'F', outcome)[1], dense.probability('F', outcome), places=10)
        marginal = sparse.probabilities(['A', 'B'])
        for key, probability in dense.marginal(['A', 'B']).items():
            self.assertAlmostEqual(marginal.get(key, 0.0), probability, places=10)


class TestReflections(unittest.TestCase):

    def setUp(self) -> None:
        self.layout = RegisterLayout([Register('A', 2), Register.flag('F')])
        psi = numpy.random.default_rng(4).normal(size=8)
        self.psi = psi / numpy.linalg.norm(psi)
        self.preparation = StatePreparation(['A', 'F'], lambda: householder(self.psi))

    def test_zeroLabel(self):
        state = applyReflection(init(self.layout), zeroLabel(['A', 'F']))
        self.assertEqual(state.amplitudes, {(0, 0): -1 + 0j})

    def test_involution(self):
        state = applyBlock(init(self.layout), ['A', 'F'], matrix=unitary_group.rvs(8, random_state=3))
        twice = applyReflection(applyReflection(state, self.preparation), self.preparation)
        numpy.testing.assert_allclose(twice.toDense(), state.toDense(), atol=1e-10)

    def test_aboutPreparedState(self):
        prepared = self.preparation.apply(init(self.layout))
        numpy.testing.assert_allclose(prepared.toDense(), self.psi, atol=1e-12)
        numpy.testing.assert_allclose(applyReflection(prepared, self.preparation).toDense(), -self.psi, atol=1e-10)
        orthogonal = numpy.random.default_rng(5).normal(size=8)
        orthogonal -= (orthogonal @ self.psi) * self.psi
        orthogonal /= numpy.linalg.norm(orthogonal)
        state = QState.fromDense(self.layout, orthogonal)
        numpy.testing.assert_allclose(applyReflection(state, self.preparation).toDense(), orthogonal, atol=1e-10)


class TestPhaseEstimation(unittest.TestCase):

    def grover(self, theta: float):
        layout = RegisterLayout([Register.flag('F'), Register('P', 3, 'phase')])
        rotation = numpy.array([[numpy.cos(theta), -numpy.sin(theta)], [numpy.sin(theta), numpy.cos(theta)]])
        preparation = StatePreparation(['F'], lambda: rotation)
        return preparation.apply(init(layout)), GroverOperator(preparation, 'F', layout)

    def test_exactPhase(self):
        state, operator = self.grover(numpy.pi / 4)
        estimated = phaseEstimate(state, operator, 'P')
        distribution = {u: p for (u,), p in estimated.probabilities(['P']).items()}
        self.assertEqual(sorted(distribution), [2, 6])
        self.assertAlmostEqual(distribution[2], 0.5, places=10)
        self.assertAlmostEqual(angleOfLabel(2, 3), numpy.pi / 4)
        restored = uncomputePhaseEstimate(estimated, operator, 'P')
        numpy.testing.assert_allclose(restored.toDense(), state.toDense(), atol=1e-10)

    def test_zeroPhase(self):
        state, operator = self.grover(0.0)
        estimated = phaseEstimate(state, operator, 'P')
        self.assertAlmostEqual(estimated.probabilities(['P'])[(0,)], 1.0, places=10)

    def test_groverUnitary(self):
        _, operator = self.grover(0.3)
        matrix = operator.matrix()
        numpy.testing.assert_allclose(matrix.conj().T @ matrix, numpy.eye(2), atol=1e-10)
        phases = numpy.sort(numpy.angle(numpy.linalg.eigvals(matrix)))
        numpy.testing.assert_allclose(phases, [-0.6, 0.6], atol=1e-10)


if __name__ == '__main__':
    unittest.main()
