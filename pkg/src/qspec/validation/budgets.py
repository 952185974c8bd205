"""
Error budgets of the quantum path against the classical oracle, and the comparison that enforces them.
"""
import logging
from typing import Sequence

import numpy

from qspec.errors import InputError, ToleranceViolation


def fixedPointSlack(fracBits: int = 12) -> float:
    """
    >>> fixedPointSlack(12) == 2 ** -11
    True

    :return: Rounding allowance of a chain of fixed-point operations, two grid steps.
    """
    return 2.0 ** (1 - fracBits)


def overlapBudget(q: int, fracBits: int = 12) -> float:
    """
    Largest admissible |estimated - exact| of a recovered overlap 2 cos^2(theta~) - 1.

    >>> round(overlapBudget(10), 6)
    0.019765
    """
    return numpy.pi ** 2 * 2.0 ** (1 - q) + fixedPointSlack(fracBits)


def layerBudget(q: int, fracBits: int = 12) -> float:
    """
    Largest admissible |feature - oracle feature| of a layer output.

    >>> round(layerBudget(10), 6)
    0.006624
    """
    return numpy.pi * 2.0 ** (1 - q) + fixedPointSlack(fracBits)


def maxAbsError(estimates: Sequence[float], oracle: Sequence[float]) -> float:
    estimates, oracle = numpy.asarray(estimates, dtype=float), numpy.asarray(oracle, dtype=float)
    if estimates.shape != oracle.shape:
        raise InputError("Cannot compare {} estimates with {} oracle values.".format(estimates.shape, oracle.shape))
    return float(numpy.max(numpy.abs(estimates - oracle))) if estimates.size else 0.0


def checkAgainstOracle(estimates: Sequence[float], oracle: Sequence[float], budget: float, what: str) -> float:
    """
    :return: The maximum absolute error.
    :raises ToleranceViolation: if the error exceeds the budget.
    """
    error = maxAbsError(estimates, oracle)
    if error > budget:
        raise ToleranceViolation("{}: max abs error {:.3e} exceeds budget {:.3e}.".format(what, error, budget))
    logging.getLogger(__name__).info("%s: max abs error %.3e within budget %.3e.", what, error, budget)
    return error
