"""
Console tables of run results.
"""
from typing import Dict, Iterable, Sequence

import numpy
from tabulate import tabulate

from qspec.graph.spectral import SpectralDecomposition
from qspec.inference.overlapEstimation import OverlapTable
from qspec.inference.convolutionPipeline import LayerOutput


def printSpectrum(dec: SpectralDecomposition, d: int = None):
    """
    Eigenvalues in descending order, the retained ones marked.
    """
    rows = [(i, "{:.6f}".format(value), "*" if d is not None and i < d else "")
            for i, value in enumerate(dec.eigenvalues)]
    print(tabulate(rows, headers=["#", "eigenvalue", "retained"]))


def printOverlapTable(table: OverlapTable):
    print(tabulate([(c.j, c.k, c.thetaTilde, c.overlap, c.exact, c.absError) for c in table.cells],
                   headers=["j", "k", "theta~", "estimate", "oracle", "abs error"], floatfmt=".6f"))


def printLayerOutputs(outputs: Sequence[Sequence[LayerOutput]]):
    for s, layer in enumerate(outputs):
        columns = numpy.column_stack([o.features for o in layer])
        oracle = numpy.column_stack([o.oracleFeatures for o in layer])
        headers = ["node"] + ["out {}".format(c) for c in range(len(layer))] + \
                  ["oracle {}".format(c) for c in range(len(layer))]
        print("Layer", s)
        print(tabulate([[p, *columns[p], *oracle[p]] for p in range(columns.shape[0])], headers=headers,
                       floatfmt=".6f"))
        print("max abs error {:.3e}, post-selection probability {}".format(
            max(o.maxAbsError for o in layer), ", ".join("{:.4f}".format(o.postselectProb) for o in layer)))


def printSweep(rows: Iterable[Dict]):
    rows = list(rows)
    if not rows:
        return
    print(tabulate([[row[k] for k in row] for row in rows], headers=list(rows[0].keys()), floatfmt=".3e"))
