"""
Overlap estimation error as a function of the phase register width.
"""
import logging
from typing import Dict, List, Sequence, Tuple

import numpy

from qspec.errors import InputError
from qspec.graph.spectral import SpectralBasis
from qspec.classical.convolution import FeatureMatrix
from qspec.simulation.fixedPoint import FixedPointFormat
from qspec.inference.overlapEstimation import EstimationConfig, estimateAllOverlaps
from qspec.validation.budgets import overlapBudget
from qspec.validation.instances import randomInstance


def sweepRow(q: int, errors: Sequence[float], runs: int, fracBits: int) -> Dict:
    """
    >>> row = sweepRow(10, [0.001, 0.003, 0.002], 3, 12)
    >>> row["median_error"], row["max_error"], row["within_budget"]
    (0.002, 0.003, True)

    :param errors: The largest cell error of each run.
    """
    errors = numpy.asarray(errors, dtype=float)
    budget = overlapBudget(q, fracBits)
    return {"q": q, "runs": runs, "median_error": float(numpy.median(errors)), "max_error": float(errors.max()),
            "budget": budget, "within_budget": bool(errors.max() <= budget)}


def sweepOverlapErrors(qList: Sequence[int], seeds: int = 1, mode: str = 'exact', shots: int = 10000,
                       fixedPoint: FixedPointFormat = None, instance: Tuple[FeatureMatrix, SpectralBasis] = None,
                       size: Tuple[int, int] = (8, 2), d: int = 2, order: str = 'smallest') -> List[Dict]:
    """
    Estimate the overlap table once per q and seed. Without a fixed instance, seed s runs on
    randomInstance(n, f, d, s) of the given size. A fixed instance in exact mode is estimated once per q, since
    further seeds would only repeat it.

    :param instance: Features and basis to use for every seed.
    :param size: Nodes and feature columns of the random instances.
    :param d: Retained eigenvectors of the random instances.
    :param order: Eigenvalue order of the random instances.
    :return: One row per q with median and maximum over the runs of the largest cell error, and the overlap budget.
    """
    if not qList:
        raise InputError("Need at least one phase register width to sweep.")
    if seeds < 1:
        raise InputError("Need at least one seed, got {}.".format(seeds))
    fixedPoint = fixedPoint if fixedPoint is not None else FixedPointFormat()
    if instance is None:
        n, f = size
        instances = [randomInstance(n, f, d, seed, order)[1:] for seed in range(seeds)]
    else:
        instances = [instance] * (1 if mode == 'exact' else seeds)
    rows = list()
    for q in qList:
        errors = list()
        for seed, (features, basis) in enumerate(instances):
            config = EstimationConfig(q, mode, shots, seed, fixedPoint)
            errors.append(estimateAllOverlaps(features, basis, config).maxAbsError)
        rows.append(sweepRow(q, errors, len(instances), fixedPoint.fracBits))
        logging.getLogger(__name__).info("q=%d: median error %.3e, max %.3e over %d runs.", q,
                                         rows[-1]["median_error"], rows[-1]["max_error"], len(instances))
    return rows
