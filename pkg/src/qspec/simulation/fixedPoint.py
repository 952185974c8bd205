"""
Signed two's-complement fixed-point number format for arithmetic registers.

A register of this format has 1 sign bit, intBits integer bits and fracBits fraction bits.
Values are rounded to the nearest grid point with ties to even and saturate at the range limits.
"""
from typing import Tuple

import numpy
from bitarray import bitarray

from qspec.errors import InputError


class FixedPointFormat(object):
    """
    Interpretation of a register label as a signed binary fraction.

    >>> fmt = FixedPointFormat(2, 8)
    >>> fmt.width, fmt.resolution
    (11, 0.00390625)
    >>> fmt.quantize(0.3) * fmt.quantize(0.7) == fmt.decode(fmt.encode(0.3)[0]) * fmt.decode(fmt.encode(0.7)[0])
    True
    >>> fmt.quantize(fmt.quantize(0.3) * fmt.quantize(0.7))
    0.2109375
    """

    def __init__(self, intBits: int = 2, fracBits: int = 12):
        if intBits < 0 or fracBits < 0:
            raise InputError("Bit counts must be non-negative, got int={}, frac={}.".format(intBits, fracBits))
        self._intBits = intBits
        self._fracBits = fracBits

    @property
    def intBits(self) -> int:
        return self._intBits

    @property
    def fracBits(self) -> int:
        return self._fracBits

    @property
    def width(self) -> int:
        """
        :return: Number of qubits of a register holding this format: sign + integer + fraction bits.
        """
        return 1 + self._intBits + self._fracBits

    @property
    def resolution(self) -> float:
        return 2.0 ** -self._fracBits

    @property
    def minValue(self) -> float:
        return -(2.0 ** self._intBits)

    @property
    def maxValue(self) -> float:
        return 2.0 ** self._intBits - self.resolution

    def encode(self, value: float) -> Tuple[int, bool]:
        """
        >>> FixedPointFormat(2, 8).encode(-0.25)
        (1984, False)
        >>> FixedPointFormat(2, 8).encode(5.0)
        (1023, True)

        :param value: The real number to represent.
        :return: The register label (two's complement, 0 <= label < 2**width)
            and whether the value saturated at a range limit.
        """
        scaled = float(numpy.rint(value * 2.0 ** self._fracBits))
        lower = -(1 << (self.width - 1))
        upper = (1 << (self.width - 1)) - 1
        overflow = False
        if scaled < lower:
            scaled, overflow = lower, True
        elif scaled > upper:
            scaled, overflow = upper, True
        return int(scaled) % (1 << self.width), overflow

    def decode(self, label: int) -> float:
        """
        >>> FixedPointFormat(2, 8).decode(1984)
        -0.25
        """
        if label >= 1 << (self.width - 1):
            label -= 1 << self.width
        return label * self.resolution

    def quantize(self, value: float) -> float:
        """
        :return: The value after a round trip through the register, i.e. rounded and saturated.
        """
        return self.decode(self.encode(value)[0])

    def bits(self, value: float) -> bitarray:
        """
        Bit pattern that a sequence of CNOTs writes into a zeroed register to load this value.

        >>> FixedPointFormat(1, 2).bits(0.5).to01()
        '0010'

        :return: The encoded label as big-endian bitarray of length width.
        """
        label, _ = self.encode(value)
        pattern = bitarray(format(label, '0{}b'.format(self.width)), endian='big')
        return pattern

    def __eq__(self, other):
        return isinstance(other, FixedPointFormat) and \
            (self._intBits, self._fracBits) == (other._intBits, other._fracBits)

    def __hash__(self):
        return hash((self._intBits, self._fracBits))

    def __repr__(self):
        return "FixedPointFormat(intBits={}, fracBits={})".format(self._intBits, self._fracBits)
