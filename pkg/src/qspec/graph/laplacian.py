"""
Weight, degree, and Laplacian matrices of undirected weighted graphs.

The unnormalized Laplacian L = D - W is the only variant used throughout.
"""
from typing import Iterable, Tuple, Union

import numpy
import networkx
from scipy.spatial.distance import pdist, squareform

from qspec.errors import InputError, InvariantViolation
from qspec.utils.baseAlgorithms import isSymmetric


class IndexOutOfRange(InputError):
    """
    Error to raise if an edge references a node id outside of 0..n-1.
    """
    pass


class NegativeWeight(InputError):
    pass


class SelfLoop(InputError):
    pass


class DuplicateEdge(InputError):
    """
    Error to raise if the same unordered node pair occurs twice in an edge list.
    """
    pass


class NonPositiveSigma(InputError):
    pass


Edge = Tuple[int, int, float]


class WeightedGraph(object):
    """
    Symmetric, non-negative weight matrix with zero diagonal of an undirected graph with n >= 2 nodes.
    """

    def __init__(self, weights: Union[numpy.ndarray, Iterable[Iterable[float]]]):
        """
        >>> WeightedGraph([[0, 1], [1, 0]]).n
        2

        :param weights: n x n weight matrix.
        """
        weights = numpy.array(weights, dtype=float)
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
            raise InputError("Weight matrix must be square, got shape {}.".format(weights.shape))
        if weights.shape[0] < 2:
            raise InputError("A graph needs at least two nodes, got {}.".format(weights.shape[0]))
        if not numpy.all(numpy.isfinite(weights)):
            raise InputError("Weight matrix contains non-finite entries.")
        if (weights < 0).any():
            raise NegativeWeight("Weight matrix contains negative entries.")
        if (numpy.diag(weights) != 0).any():
            raise SelfLoop("Weight matrix has non-zero diagonal entries.")
        if not isSymmetric(weights):
            raise InputError("Weight matrix is not symmetric.")
        weights.setflags(write=False)
        self._weights = weights

    @property
    def n(self) -> int:
        return self._weights.shape[0]

    @property
    def weights(self) -> numpy.ndarray:
        """
        :return: The read-only n x n weight matrix.
        """
        return self._weights

    def toNetworkx(self) -> networkx.Graph:
        """
        :return: networkx representation with one node per row and one edge per positive weight.
        """
        return networkx.from_numpy_array(self._weights)

    def __repr__(self):
        return "WeightedGraph(n={}, edges={})".format(self.n, int(numpy.count_nonzero(self._weights)) // 2)


class DegreeMatrix(object):
    """
    Diagonal of the degree matrix: d_ii is the i-th row sum of the weights.
    """

    def __init__(self, diag: numpy.ndarray):
        diag = numpy.array(diag, dtype=float)
        if (diag < 0).any():
            raise InvariantViolation("Degrees must be non-negative.")
        diag.setflags(write=False)
        self._diag = diag

    @property
    def diag(self) -> numpy.ndarray:
        return self._diag

    def asMatrix(self) -> numpy.ndarray:
        return numpy.diag(self._diag)


class Laplacian(object):
    """
    Unnormalized graph Laplacian L = D - W.
    """

    rowSumTolerance = 1e-12

    def __init__(self, entries: numpy.ndarray):
        entries = numpy.array(entries, dtype=float)
        if not isSymmetric(entries):
            raise InvariantViolation("Laplacian is not symmetric.")
        if numpy.abs(entries.sum(axis=1)).max() > Laplacian.rowSumTolerance * max(1.0, numpy.abs(entries).max()):
            raise InvariantViolation("Laplacian rows do not sum to zero.")
        offdiag = entries - numpy.diag(numpy.diag(entries))
        if (offdiag > 0).any():
            raise InvariantViolation("Laplacian has positive off-diagonal entries.")
        entries.setflags(write=False)
        self._entries = entries

    @property
    def entries(self) -> numpy.ndarray:
        return self._entries

    @property
    def n(self) -> int:
        return self._entries.shape[0]

    def quadraticForm(self, x: numpy.ndarray) -> float:
        """
        :return: x^T L x, non-negative for every x since L is positive semidefinite.
        """
        x = numpy.asarray(x, dtype=float)
        return float(x @ self._entries @ x)


def buildWeightMatrix(edges: Iterable[Edge], n: int) -> WeightedGraph:
    """
    Place each edge weight at (u,v) and (v,u).

    >>> buildWeightMatrix([(0, 1, 2.0), (1, 2, 0.5)], 3).weights
    array([[0. , 2. , 0. ],
           [2. , 0. , 0.5],
           [0. , 0.5, 0. ]])

    :param edges: (u, v, w) triples with 0 <= u, v < n, u != v, w >= 0.
    :param n: The number of nodes.
    :return: The symmetric weight matrix. Absent edges are exactly zero.
    """
    if n < 2:
        raise InputError("A graph needs at least two nodes, got {}.".format(n))
    graph = networkx.Graph()
    graph.add_nodes_from(range(n))
    for u, v, w in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise IndexOutOfRange("Edge ({}, {}) references a node outside of 0..{}.".format(u, v, n - 1))
        if u == v:
            raise SelfLoop("Edge ({}, {}) is a self-loop.".format(u, v))
        if w < 0:
            raise NegativeWeight("Edge ({}, {}) has negative weight {}.".format(u, v, w))
        if graph.has_edge(u, v):
            raise DuplicateEdge("Edge ({}, {}) occurs more than once.".format(u, v))
        graph.add_edge(int(u), int(v), weight=float(w))
    return WeightedGraph(networkx.to_numpy_array(graph, nodelist=range(n), weight='weight'))


def gaussianSimilarity(features: numpy.ndarray, sigma: float) -> WeightedGraph:
    """
    Dense similarity graph w_ij = exp(-||x_i - x_j||^2 / (2 sigma^2)) for i != j.

    >>> g = gaussianSimilarity(numpy.array([[0., 0.], [3., 4.]]), 5.0)
    >>> round(g.weights[0, 1], 6)
    0.606531

    :param features: n x f node features, one row per node.
    :param sigma: Kernel width, strictly positive.
    :return: The dense symmetric weight matrix with zero diagonal.
    """
    if not sigma > 0:
        raise NonPositiveSigma("sigma must be positive, got {}.".format(sigma))
    features = numpy.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features.reshape(-1, 1)
    if features.shape[0] < 2:
        raise InputError("A graph needs at least two nodes, got {}.".format(features.shape[0]))
    sqdist = squareform(pdist(features, metric='sqeuclidean'))
    weights = numpy.exp(-sqdist / (2 * sigma ** 2))
    numpy.fill_diagonal(weights, 0.0)
    return WeightedGraph(weights)


def degreeMatrix(graph: WeightedGraph) -> DegreeMatrix:
    """
    >>> degreeMatrix(WeightedGraph([[0, 2, 0], [2, 0, .5], [0, .5, 0]])).diag
    array([2. , 2.5, 0.5])
    """
    return DegreeMatrix(graph.weights.sum(axis=1))


def laplacian(graph: WeightedGraph) -> Laplacian:
    """
    >>> laplacian(WeightedGraph([[0, 1], [1, 0]])).entries
    array([[ 1., -1.],
           [-1.,  1.]])
    """
    return Laplacian(degreeMatrix(graph).asMatrix() - graph.weights)
