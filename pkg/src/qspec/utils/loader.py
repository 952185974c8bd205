"""
Loading of graphs, node features, and run configurations from files.
"""
import json
import logging
from os.path import isfile
from typing import Dict, List, Optional

import numpy
import pandas

from qspec.errors import InputError, ParseError, ConfigError
from qspec.graph.laplacian import WeightedGraph, buildWeightMatrix, gaussianSimilarity
from qspec.classical.convolution import FeatureMatrix


def _checkFile(path: str):
    if not isfile(path):
        raise InputError("File not found: {}".format(path))


def loadEdgeList(path: str, n: int = None) -> WeightedGraph:
    """
    One edge per line: "u v" or "u v weight", whitespace separated. Everything after # is a comment.
    An optional header line "nodes N" before the first edge fixes the node count, so trailing isolated nodes can
    be expressed.

    :param path: The edge list file.
    :param n: Number of nodes, overrides the header. Defaults to the header, else to the largest node index + 1.
    :raises ParseError: naming the line of the first malformed entry.
    """
    _checkFile(path)
    edges = list()
    header = None
    with open(path) as edgeFile:
        for lineno, line in enumerate(edgeFile, start=1):
            content = line.split('#', 1)[0].strip()
            if not content:
                continue
            fields = content.split()
            if fields[0] == 'nodes':
                if edges or header is not None:
                    raise ParseError("the node count header must precede all edges", path, lineno)
                if len(fields) != 2 or not fields[1].isdigit():
                    raise ParseError("expected 'nodes N', got '{}'".format(content), path, lineno)
                header = int(fields[1])
                continue
            if len(fields) not in (2, 3):
                raise ParseError("expected 'u v [weight]', got '{}'".format(content), path, lineno)
            try:
                u, v = int(fields[0]), int(fields[1])
                weight = float(fields[2]) if len(fields) == 3 else 1.0
            except ValueError:
                raise ParseError("malformed edge '{}'".format(content), path, lineno)
            edges.append((u, v, weight))
    if n is None:
        n = header
    if not edges and n is None:
        raise ParseError("no edges and no node count", path)
    if n is None:
        n = max(max(u, v) for u, v, _ in edges) + 1
    logging.getLogger(__name__).debug("Read %d edges on %d nodes from %s.", len(edges), n, path)
    return buildWeightMatrix(edges, n)


def loadMatrix(path: str) -> numpy.ndarray:
    """
    Numeric CSV without header, one row per node. Lines starting with # are comments.

    :raises ParseError: naming the line of the first non-numeric cell.
    """
    _checkFile(path)
    try:
        frame = pandas.read_csv(path, header=None, comment='#', skip_blank_lines=True, dtype=str)
    except pandas.errors.EmptyDataError:
        raise ParseError("no data", path)
    except pandas.errors.ParserError as e:
        raise ParseError(str(e), path)
    numeric = frame.apply(lambda column: pandas.to_numeric(column.str.strip(), errors='coerce'))
    bad = numeric.isna().any(axis=1).to_numpy()
    if bad.any():
        row = int(numpy.flatnonzero(bad)[0])
        raise ParseError("non-numeric value in row {}".format(row), path, _dataLine(path, row))
    return numeric.to_numpy(dtype=float)


def _dataLine(path: str, row: int) -> Optional[int]:
    """
    Line number of the row-th data line, skipping comments and blank lines.
    """
    with open(path) as dataFile:
        count = -1
        for lineno, line in enumerate(dataFile, start=1):
            if line.strip() and not line.lstrip().startswith('#'):
                count += 1
                if count == row:
                    return lineno
    return None


def loadFeatures(path: str) -> FeatureMatrix:
    return FeatureMatrix(loadMatrix(path))


def loadVector(path: str) -> numpy.ndarray:
    """
    All values of a numeric CSV as a flat vector, e.g. targets, one per node.
    """
    return loadMatrix(path).ravel()


def _isInt(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _isNumber(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and bool(numpy.isfinite(value))


class RunConfig(object):
    """
    All settings of a command-line run. The JSON form has exactly the keys of DEFAULTS.

    layers holds, per layer, the filter vectors of its output columns: a list of lists of d values.
    """

    GRAPH_MODES = ('edge_list', 'gaussian')
    MODES = ('quantum', 'oracle', 'both')
    DEFAULTS = {
        "edges": None,
        "nodes": None,
        "features": None,
        "targets": None,
        "graph_mode": "edge_list",
        "sigma": 1.0,
        "d": 2,
        "layers": [[[1.0, 1.0]]],
        "q": 8,
        "b_frac": 12,
        "eigen_order": "largest",
        "mode": "both",
        "estimation": "exact",
        "shots": 10000,
        "variant": "swap",
        "seed": 0,
        "out": "reports",
        "q_list": [4, 6, 8, 10],
        "seeds": 1,
        "instance_size": [8, 2],
        "epochs": 200,
        "learning_rate": 0.1,
        "h": 1e-3,
        "train_path": "oracle",
        "init_scale": 0.0,
    }

    def __init__(self, **values):
        unknown = sorted(set(values) - set(RunConfig.DEFAULTS))
        if unknown:
            raise ConfigError("Unknown configuration keys: {}".format(", ".join(unknown)))
        self._values = dict(RunConfig.DEFAULTS)
        self._values.update(values)
        self._validate()

    def _validate(self):
        v = self._values
        if v["graph_mode"] not in RunConfig.GRAPH_MODES:
            raise ConfigError("graph_mode must be one of {}, not {}.".format(RunConfig.GRAPH_MODES, v["graph_mode"]))
        if v["mode"] not in RunConfig.MODES:
            raise ConfigError("mode must be one of {}, not {}.".format(RunConfig.MODES, v["mode"]))
        for key in ("d", "q", "b_frac", "shots", "seeds", "epochs", "seed"):
            if not _isInt(v[key]) or v[key] < 0:
                raise ConfigError("{} must be a non-negative integer, not {!r}.".format(key, v[key]))
        if v["epochs"] < 1:
            raise ConfigError("epochs must be at least 1, not {}.".format(v["epochs"]))
        if not 2 <= v["q"] <= 16:
            raise ConfigError("q must be between 2 and 16, not {}.".format(v["q"]))
        if v["nodes"] is not None and (not _isInt(v["nodes"]) or v["nodes"] < 2):
            raise ConfigError("nodes must be an integer of at least 2, not {!r}.".format(v["nodes"]))
        if not isinstance(v["q_list"], list) or not v["q_list"] or \
                any(not _isInt(q) or not 2 <= q <= 16 for q in v["q_list"]):
            raise ConfigError("q_list must be a non-empty list of integers in 2..16, not {}.".format(v["q_list"]))
        size = v["instance_size"]
        if not isinstance(size, list) or len(size) != 2 or any(not _isInt(s) or s < 1 for s in size):
            raise ConfigError("instance_size must be [nodes, features] of positive integers, not {}.".format(size))
        for key in ("sigma", "learning_rate", "h", "init_scale"):
            if not _isNumber(v[key]):
                raise ConfigError("{} must be a number, not {!r}.".format(key, v[key]))
        if not v["sigma"] > 0:
            raise ConfigError("sigma must be positive, not {}.".format(v["sigma"]))
        if v["init_scale"] < 0:
            raise ConfigError("init_scale must not be negative, not {}.".format(v["init_scale"]))
        if not isinstance(v["layers"], list) or not v["layers"]:
            raise ConfigError("layers must be a non-empty list of filter vector lists.")
        for s, layer in enumerate(v["layers"]):
            try:
                shape = numpy.array(layer, dtype=float).shape
            except (ValueError, TypeError):
                raise ConfigError("Layer {} must be a rectangular list of numbers, got {!r}.".format(s, layer))
            if len(shape) != 2 or shape[1] != v["d"] or shape[0] < 1:
                raise ConfigError("Layer {} must be a list of filter vectors of length d = {}, got shape {}.".format(
                    s, v["d"], shape))

    @staticmethod
    def fromJson(path: str, **overrides) -> 'RunConfig':
        """
        :param overrides: Values replacing those of the file, None values are ignored.
        """
        _checkFile(path)
        try:
            with open(path) as configFile:
                values = json.load(configFile)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, path, e.lineno)
        if not isinstance(values, dict):
            raise ConfigError("Configuration in {} must be a JSON object.".format(path))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(**values)

    def updated(self, **overrides) -> 'RunConfig':
        values = dict(self._values)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(**values)

    def __getitem__(self, key: str):
        return self._values[key]

    def layers(self) -> List[numpy.ndarray]:
        return [numpy.array(layer, dtype=float) for layer in self._values["layers"]]

    def checkFiles(self, *keys: str):
        """
        :raises InputError: naming the first referenced file that does not exist or is not configured.
        """
        for key in keys:
            if self._values[key] is None:
                raise InputError("No {} file given.".format(key))
            _checkFile(self._values[key])

    def asDict(self) -> Dict:
        return dict(self._values)

    def loadGraph(self) -> WeightedGraph:
        """
        The graph from the edge list, or the Gaussian similarity graph of the features.
        """
        if self._values["graph_mode"] == "edge_list":
            self.checkFiles("edges")
            return loadEdgeList(self._values["edges"], self._values["nodes"])
        self.checkFiles("features")
        return gaussianSimilarity(loadMatrix(self._values["features"]), float(self._values["sigma"]))

    def __repr__(self):
        return "RunConfig({})".format(self._values)
