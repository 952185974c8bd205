"""
Dense state-vector reference simulator.

Shares nothing with the sparse simulator except the layout and label convention, so circuits run on both can be
compared amplitude by amplitude. Intended for layouts of at most maxQubits qubits.
"""
from typing import Callable, Dict, Mapping, Sequence

import numpy
from scipy.linalg import hadamard

from qspec.errors import InputError
from qspec.simulation.registers import RegisterLayout

maxQubits = 14


class DenseState(object):
    """
    Mutable full state vector in tensor form, one axis per register.
    Gates modify the vector in place.
    """

    def __init__(self, layout: RegisterLayout):
        if layout.totalWidth > maxQubits:
            raise InputError("Dense reference is limited to {} qubits, layout has {}.".format(
                maxQubits, layout.totalWidth))
        self.layout = layout
        self.dims = tuple(layout.dimensions)
        self.tensor = numpy.zeros(self.dims, dtype=complex)
        self.tensor[(0,) * len(self.dims)] = 1.0
        # labels[i] holds, for every basis index, the label of register i
        self.labels = numpy.indices(self.dims)

    @property
    def vector(self) -> numpy.ndarray:
        return self.tensor.reshape(-1)

    def _mask(self, controls: Mapping[str, int] = None) -> numpy.ndarray:
        mask = numpy.ones(self.dims, dtype=bool)
        for name, value in (controls or {}).items():
            mask &= self.labels[self.layout.index(name)] == value
        return mask

    def applyMatrix(self, registers: Sequence[str], matrix: numpy.ndarray, controls: Mapping[str, int] = None):
        axes = [self.layout.index(r) for r in registers]
        moved = numpy.moveaxis(self.tensor, axes, list(range(len(axes))))
        shape = moved.shape
        joint = int(numpy.prod(shape[:len(axes)]))
        applied = (matrix @ moved.reshape(joint, -1)).reshape(shape)
        applied = numpy.moveaxis(applied, list(range(len(axes))), axes)
        self.tensor = numpy.where(self._mask(controls), applied, self.tensor)

    def hadamardAll(self, register: str, controls: Mapping[str, int] = None):
        dimension = self.layout.register(register).dimension
        self.applyMatrix([register], hadamard(dimension) / numpy.sqrt(dimension), controls)

    def qft(self, register: str, inverse: bool = False):
        dimension = self.layout.register(register).dimension
        x, y = numpy.meshgrid(numpy.arange(dimension), numpy.arange(dimension))
        sign = -1 if inverse else 1
        self.applyMatrix([register], numpy.exp(sign * 2j * numpy.pi * x * y / dimension) / numpy.sqrt(dimension))

    def _permute(self, newLabels: Sequence[numpy.ndarray], controls: Mapping[str, int] = None):
        mask = self._mask(controls)
        target = [numpy.where(mask, new, old) for new, old in zip(newLabels, self.labels)]
        permuted = numpy.zeros_like(self.tensor)
        permuted[tuple(target)] = self.tensor
        self.tensor = permuted

    def pauliX(self, register: str, mask: int = None, controls: Mapping[str, int] = None):
        position = self.layout.index(register)
        if mask is None:
            mask = self.dims[position] - 1
        newLabels = list(self.labels)
        newLabels[position] = self.labels[position] ^ mask
        self._permute(newLabels, controls)

    def cnotRegister(self, source: str, target: str):
        s, t = self.layout.index(source), self.layout.index(target)
        newLabels = list(self.labels)
        newLabels[t] = self.labels[t] ^ self.labels[s]
        self._permute(newLabels)

    def controlledSwap(self, control: str, first: str, second: str):
        a, b = self.layout.index(first), self.layout.index(second)
        newLabels = list(self.labels)
        newLabels[a], newLabels[b] = self.labels[b], self.labels[a]
        self._permute(newLabels, {control: 1})

    def applyPhase(self, registers: Sequence[str], phaseFor: Callable[..., complex]):
        values = numpy.vectorize(lambda *labels: complex(phaseFor(*labels)), otypes=[complex])
        self.tensor = self.tensor * values(*(self.labels[self.layout.index(r)] for r in registers))

    def probability(self, register: str, outcome: int) -> float:
        return float(numpy.sum(numpy.abs(self.tensor[self.labels[self.layout.index(register)] == outcome]) ** 2))

    def marginal(self, registers: Sequence[str]) -> Dict[tuple, float]:
        keep = [self.layout.index(r) for r in registers]
        drop = tuple(i for i in range(len(self.dims)) if i not in keep)
        probabilities = numpy.abs(self.tensor) ** 2
        summed = probabilities.sum(axis=drop) if drop else probabilities
        summed = summed.transpose([sorted(keep).index(k) for k in keep])
        return {tuple(int(v) for v in idx): float(p) for idx, p in numpy.ndenumerate(summed) if p > 1e-15}
