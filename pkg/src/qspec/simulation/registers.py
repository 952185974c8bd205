"""
Named quantum registers and their ordered layout.

A basis label of a state is a tuple with one integer per register, in layout order.
Each integer is the big-endian value of the register's qubits.
"""
from typing import Iterable, List, Optional, Sequence

from qspec.errors import InputError
from qspec.simulation.fixedPoint import FixedPointFormat


class LayoutTooWide(InputError):
    """
    Error to raise if the total qubit count of a layout exceeds its bound.
    """
    pass


class UnknownRegister(InputError):
    pass


class Register(object):
    """
    A named group of qubits with an interpretation of its label.
    """

    KINDS = ('index', 'flag', 'phase', 'fixed_point')

    def __init__(self, name: str, width: int, kind: str = 'index', fixedPoint: Optional[FixedPointFormat] = None):
        """
        >>> Register('P', 3, 'phase').dimension
        8
        >>> Register('OV', fixedPoint=FixedPointFormat(2, 8), width=11, kind='fixed_point').fixedPoint
        FixedPointFormat(intBits=2, fracBits=8)

        :param name: Unique name within a layout.
        :param width: Number of qubits, may be 0 for a register that holds a single label.
        :param kind: One of index, flag, phase, fixed_point.
        :param fixedPoint: The number format, required for and only allowed with fixed_point registers.
        """
        if kind not in Register.KINDS:
            raise InputError("Unknown register kind {}.".format(kind))
        if width < 0:
            raise InputError("Register {} has negative width {}.".format(name, width))
        if kind == 'flag' and width != 1:
            raise InputError("Flag register {} must have width 1, not {}.".format(name, width))
        if (kind == 'fixed_point') != (fixedPoint is not None):
            raise InputError("Register {}: a number format is required exactly for fixed_point registers.".format(name))
        if fixedPoint is not None and fixedPoint.width != width:
            raise InputError("Register {} has width {} but its number format needs {}.".format(
                name, width, fixedPoint.width))
        self._name = name
        self._width = width
        self._kind = kind
        self._fixedPoint = fixedPoint

    @staticmethod
    def fixed(name: str, fixedPoint: FixedPointFormat) -> 'Register':
        return Register(name, fixedPoint.width, 'fixed_point', fixedPoint)

    @staticmethod
    def flag(name: str) -> 'Register':
        return Register(name, 1, 'flag')

    @property
    def name(self) -> str:
        return self._name

    @property
    def width(self) -> int:
        return self._width

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def fixedPoint(self) -> Optional[FixedPointFormat]:
        return self._fixedPoint

    @property
    def dimension(self) -> int:
        return 1 << self._width

    def widened(self, width: int) -> 'Register':
        """
        :return: A register of the same name and kind embedded into more qubits.
        """
        if width < self._width:
            raise InputError("Cannot narrow register {} from {} to {} qubits.".format(self._name, self._width, width))
        if self._kind in ('flag', 'fixed_point'):
            raise InputError("Register {} of kind {} cannot be widened.".format(self._name, self._kind))
        return Register(self._name, width, self._kind)

    def signedValue(self, label: int) -> int:
        """
        Interpret a phase label as signed integer in [-2^(w-1), 2^(w-1)).

        >>> [Register('P', 3, 'phase').signedValue(u) for u in range(8)]
        [0, 1, 2, 3, -4, -3, -2, -1]
        """
        if self._width > 0 and label >= 1 << (self._width - 1):
            return label - (1 << self._width)
        return label

    def value(self, label: int) -> float:
        """
        :return: The number a label stands for, according to the register kind.
        """
        if self._kind == 'fixed_point':
            return self._fixedPoint.decode(label)
        if self._kind == 'phase':
            return self.signedValue(label)
        return label

    def __eq__(self, other):
        return isinstance(other, Register) and \
            (self._name, self._width, self._kind, self._fixedPoint) == \
            (other._name, other._width, other._kind, other._fixedPoint)

    def __hash__(self):
        return hash((self._name, self._width, self._kind))

    def __repr__(self):
        return "Register({}, {}, {})".format(self._name, self._width, self._kind)


class RegisterLayout(object):
    """
    Ordered, immutable collection of uniquely named registers with a bounded total width.
    The first register is the most significant part of a dense state vector index.
    """

    maxQubitsDefault = 40

    def __init__(self, registers: Iterable[Register], maxQubits: int = None):
        """
        >>> layout = RegisterLayout([Register('J', 2), Register('F', 1, 'flag')])
        >>> layout.names, layout.totalWidth, layout.index('F')
        (('J', 'F'), 3, 1)

        :param registers: The registers in label order.
        :param maxQubits: Upper bound of the total width, defaults to maxQubitsDefault.
        """
        self._registers = tuple(registers)  # type: Sequence[Register]
        self._maxQubits = RegisterLayout.maxQubitsDefault if maxQubits is None else maxQubits
        names = [r.name for r in self._registers]
        if len(set(names)) != len(names):
            raise InputError("Register names must be unique, got {}.".format(names))
        if self.totalWidth > self._maxQubits:
            raise LayoutTooWide("Layout needs {} qubits, the bound is {}.".format(self.totalWidth, self._maxQubits))
        self._positions = {name: i for i, name in enumerate(names)}

    @property
    def registers(self) -> Sequence[Register]:
        return self._registers

    @property
    def names(self):
        return tuple(r.name for r in self._registers)

    @property
    def totalWidth(self) -> int:
        return sum(r.width for r in self._registers)

    @property
    def maxQubits(self) -> int:
        return self._maxQubits

    @property
    def dimensions(self) -> List[int]:
        return [r.dimension for r in self._registers]

    def index(self, name: str) -> int:
        try:
            return self._positions[name]
        except KeyError:
            raise UnknownRegister("No register named {} in layout {}.".format(name, self.names))

    def register(self, name: str) -> Register:
        return self._registers[self.index(name)]

    def extended(self, *registers: Register) -> 'RegisterLayout':
        """
        :return: A new layout with the given registers appended.
        """
        return RegisterLayout(self._registers + tuple(registers), self._maxQubits)

    def without(self, *names: str) -> 'RegisterLayout':
        for name in names:
            self.index(name)
        return RegisterLayout([r for r in self._registers if r.name not in names], self._maxQubits)

    def replaced(self, register: Register) -> 'RegisterLayout':
        """
        :return: A new layout with the register of the same name swapped for the given one.
        """
        position = self.index(register.name)
        registers = list(self._registers)
        registers[position] = register
        return RegisterLayout(registers, self._maxQubits)

    def __contains__(self, name):
        return name in self._positions

    def __len__(self):
        return len(self._registers)

    def __iter__(self):
        return iter(self._registers)

    def __eq__(self, other):
        return isinstance(other, RegisterLayout) and self._registers == other._registers

    def __repr__(self):
        return "RegisterLayout({})".format(", ".join("{}:{}".format(r.name, r.width) for r in self._registers))
