"""
Write spectra, overlap tables, layer reports, error sweeps, and training traces to CSV and JSON.
"""
import csv
import json
from os.path import join
from typing import Dict, Iterable, List, Sequence

import numpy

from qspec.graph.laplacian import Laplacian
from qspec.graph.spectral import SpectralDecomposition
from qspec.inference.overlapEstimation import OverlapTable
from qspec.inference.convolutionPipeline import LayerOutput
from qspec.inference.training import TrainTrace


def _dump(document: Dict, path: str):
    with open(path, 'w') as jsonfile:
        json.dump(document, jsonfile, indent=2, sort_keys=True)
        jsonfile.write("\n")


def spectrumDocument(lap: Laplacian, dec: SpectralDecomposition) -> Dict:
    return {"n": lap.n, "laplacian": lap.entries.tolist(), "eigenvalues": dec.eigenvalues.tolist(),
            "eigenvectors": dec.eigenvectors.tolist()}


def writeSpectrum(lap: Laplacian, dec: SpectralDecomposition, path: str, header: Dict = None):
    """
    Laplacian and eigendecomposition as JSON, eigenvectors as columns.
    """
    document = spectrumDocument(lap, dec)
    if header:
        document.update(header)
    _dump(document, path)


def writeOverlapTable(table: OverlapTable, path: str):
    """
    One row per (j, k) cell.
    """
    with open(path, 'w', newline='') as csvfile:
        overlapcsv = csv.writer(csvfile)
        overlapcsv.writerow(["j", "k", "theta_tilde", "cos_theta", "estimate", "exact", "abs_error", "probability"])
        overlapcsv.writerows([
            (cell.j, cell.k, cell.thetaTilde, cell.cosTheta, cell.overlap, cell.exact, cell.absError, cell.probability)
            for cell in table.cells])


def layerDocument(outputs: Sequence[Sequence[LayerOutput]], header: Dict = None) -> Dict:
    """
    Layer report: one entry per output column of every layer.
    """
    document = dict(header) if header else dict()
    document["layers"] = [[output.asDict() for output in layer] for layer in outputs]
    document["max_abs_error"] = [max(output.maxAbsError for output in layer) for layer in outputs]
    return document


def writeLayerReport(outputs: Sequence[Sequence[LayerOutput]], path: str, header: Dict = None):
    _dump(layerDocument(outputs, header), path)


SWEEP_COLUMNS = ["q", "runs", "median_error", "max_error", "budget", "within_budget"]


def writeSweep(rows: Iterable[Dict], path: str):
    """
    Error statistics per phase register width, one row per q.
    """
    with open(path, 'w', newline='') as csvfile:
        sweepcsv = csv.DictWriter(csvfile, fieldnames=SWEEP_COLUMNS)
        sweepcsv.writeheader()
        sweepcsv.writerows(rows)


def writeTrace(trace: TrainTrace, path: str):
    """
    epoch, loss, grad_norm per row.
    """
    trace.toDataFrame().to_csv(path, index=False)


def writeTheta(theta: Sequence[float], path: str):
    _dump({"theta": numpy.asarray(theta, dtype=float).tolist()}, path)


def reportPaths(folder: str) -> Dict[str, str]:
    names = {"spectrum": "spectrum.json", "overlaps": "overlaps.csv", "layers": "layers.json",
             "sweep": "sweep.csv", "trace": "trace.csv", "theta": "theta.json"}
    return {key: join(folder, name) for key, name in names.items()}


def nonIncreasing(values: List[float], slack: float = 0.0) -> bool:
    """
    >>> nonIncreasing([0.3, 0.1, 0.1])
    True
    """
    return all(b <= a + slack for a, b in zip(values[:-1], values[1:]))
