"""
Small graphs, features, and bases shared by the test cases.
"""
from qspec.graph.laplacian import WeightedGraph, laplacian
from qspec.graph.spectral import SpectralBasis, eigendecompose, topD
from qspec.validation.instances import randomGraph, randomInstance


def p2() -> WeightedGraph:
    """Path on two nodes with unit weight."""
    return WeightedGraph([[0, 1], [1, 0]])


def k3() -> WeightedGraph:
    return WeightedGraph([[0, 1, 1], [1, 0, 1], [1, 1, 0]])


def p2Basis(d: int = 2) -> SpectralBasis:
    """Columns (1, -1)/sqrt 2 and (1, 1)/sqrt 2."""
    return topD(eigendecompose(laplacian(p2())), d)
