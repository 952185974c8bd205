import numpy
from math import ceil, log2
from typing import Sequence


def isPowerOfTwo(value: int) -> bool:
    """
    >>> [isPowerOfTwo(v) for v in (0, 1, 2, 3, 4, 6, 8)]
    [False, True, True, False, True, False, True]
    """
    return isinstance(value, (int, numpy.integer)) and value > 0 and (value & (value - 1)) == 0


def registerWidth(dimension: int) -> int:
    """
    Number of qubits needed to index the given number of basis states.

    >>> [registerWidth(d) for d in (1, 2, 3, 4, 5, 8, 9)]
    [0, 1, 2, 2, 3, 3, 4]

    :param dimension: The count of labels the register must hold.
    :return: ceil(log2(dimension)), 0 for a single label.
    """
    if dimension < 1:
        raise ValueError("A register needs to hold at least one label, not {}.".format(dimension))
    return int(ceil(log2(dimension))) if dimension > 1 else 0


def padVector(vector: Sequence[float], length: int) -> numpy.ndarray:
    """
    >>> padVector([3., 4.], 4)
    array([3., 4., 0., 0.])

    :param vector: The amplitudes to embed.
    :param length: The dimension of the embedding space, at least len(vector).
    :return: vector followed by zeros up to length.
    """
    vector = numpy.asarray(vector)
    if len(vector) > length:
        raise ValueError("Vector of length {} does not fit into {} labels.".format(len(vector), length))
    padded = numpy.zeros(length, dtype=vector.dtype)
    padded[:len(vector)] = vector
    return padded


def isSymmetric(matrix: numpy.ndarray, atol: float = 0.0) -> bool:
    """
    :param matrix: A square matrix.
    :param atol: Absolute tolerance for the entrywise comparison with the transpose.
    :return: Whether the matrix equals its transpose.
    """
    matrix = numpy.asarray(matrix)
    return matrix.ndim == 2 and matrix.shape[0] == matrix.shape[1] and \
        bool(numpy.all(numpy.abs(matrix - matrix.T) <= atol))
