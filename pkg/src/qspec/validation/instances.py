"""
Random problem instances for sweeps and self-checks.
"""
import numpy

from qspec.graph.laplacian import WeightedGraph, gaussianSimilarity, laplacian
from qspec.graph.spectral import eigendecompose, topD
from qspec.classical.convolution import FeatureMatrix


def randomGraph(n: int, seed: int) -> WeightedGraph:
    """
    Dense Gaussian similarity graph of random points in the plane, hence connected.
    """
    points = numpy.random.default_rng(seed).uniform(0.0, 2.0, size=(n, 2))
    return gaussianSimilarity(points, 1.0)


def randomInstance(n: int, f: int, d: int, seed: int, order: str = 'smallest'):
    """
    Random positive features on a random graph. With order smallest the constant eigenvector is retained, so every
    feature column has a large overlap with the basis.

    :return: graph, features, and the retained basis.
    """
    graph = randomGraph(n, seed)
    rng = numpy.random.default_rng(seed + 1000)
    features = FeatureMatrix(rng.uniform(0.1, 1.0, size=(n, f)))
    return graph, features, topD(eigendecompose(laplacian(graph)), d, order)
