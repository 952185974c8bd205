"""
Quantum spectral graph convolution on the simulator.

    build     Laplacian and eigendecomposition of a graph
    forward   multi-layer convolution on the quantum path, the oracle, or both with the error budget enforced
    sweep     overlap estimation error against the phase register width
    train     gradient descent on the filter values of one layer against per-node targets

Exit codes: 0 success, 1 input error, 2 tolerance violation, 3 internal invariant failure.
Errors are reported as JSON on standard error.
"""
import argparse
import json
import logging
import sys
import time
from typing import List

from qspec.errors import InputError, ConfigError, InvariantViolation, ToleranceViolation
from qspec.graph.laplacian import laplacian
from qspec.graph.spectral import eigendecompose, topD, EIGEN_ORDERS
from qspec.classical.emulation import VARIANTS
from qspec.simulation.fixedPoint import FixedPointFormat
from qspec.inference.overlapEstimation import EstimationConfig, MODES as ESTIMATION_MODES
from qspec.inference.convolutionPipeline import forward
from qspec.inference.training import TrainConfig, TrainingData, fit, PATHS
from qspec.validation.budgets import layerBudget, checkAgainstOracle
from qspec.validation.sweep import sweepOverlapErrors
from qspec.utils.loader import RunConfig, loadFeatures, loadVector
from qspec.utils.evaluationHelpers import RunFolder, provenance
from qspec.utils.reportWriter import writeSpectrum, writeLayerReport, writeSweep, writeTrace, writeTheta, \
    writeOverlapTable, reportPaths, nonIncreasing
from qspec.visualization.simplePrint import printSpectrum, printOverlapTable, printLayerOutputs, printSweep

EXIT_OK, EXIT_INPUT, EXIT_TOLERANCE, EXIT_INVARIANT = 0, 1, 2, 3


class ArgumentParser(argparse.ArgumentParser):
    """
    Reports invalid arguments as ConfigError, so they leave through the JSON error path with exit code 1.
    """

    def error(self, message: str):
        raise ConfigError("{}: {}".format(self.prog, message))


def positiveInt(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1, got {}".format(value))
    return value


def intList(text: str) -> List[int]:
    return [int(v) for v in text.split(',') if v.strip()]


def buildParser() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', help='JSON run configuration, flags override its values')
    common.add_argument('--edges', help='edge list file: "u v [weight]" per line')
    common.add_argument('--nodes', type=int, help='node count of the edge list, for trailing isolated nodes')
    common.add_argument('--features', help='CSV of node features, one row per node')
    common.add_argument('--graph-mode', dest='graph_mode', choices=RunConfig.GRAPH_MODES)
    common.add_argument('--sigma', type=float, help='width of the Gaussian similarity kernel')
    common.add_argument('-d', type=int, help='number of retained eigenpairs, a power of two')
    common.add_argument('--eigen-order', dest='eigen_order', choices=EIGEN_ORDERS)
    common.add_argument('-q', type=int, help='phase register width')
    common.add_argument('--b-frac', dest='b_frac', type=int, help='fraction bits of the fixed-point registers')
    common.add_argument('--estimation', choices=ESTIMATION_MODES, help='exact probabilities or sampled shots')
    common.add_argument('--shots', type=positiveInt)
    common.add_argument('--variant', choices=VARIANTS, help='layer readout test')
    common.add_argument('--seed', type=int)
    common.add_argument('-o', '--out', help='report folder')

    parser = ArgumentParser(description='Quantum spectral graph convolution on a state vector simulator.')
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('build', parents=[common], help='Laplacian and eigendecomposition of a graph')
    forwardParser = commands.add_parser('forward', parents=[common], help='multi-layer convolution')
    forwardParser.add_argument('-m', '--mode', choices=RunConfig.MODES)
    sweepParser = commands.add_parser('sweep', parents=[common], help='overlap error against q')
    sweepParser.add_argument('--q-list', dest='q_list', type=intList, help='comma separated phase register widths')
    sweepParser.add_argument('--seeds', type=positiveInt, help='runs per q with seeds 0, 1, ...')
    sweepParser.add_argument('--instance-size', dest='instance_size', type=intList,
                             help='nodes,features of the random instances swept without --features')
    trainParser = commands.add_parser('train', parents=[common], help='fit the filter values of one layer')
    trainParser.add_argument('--targets', help='CSV of one target value per node')
    trainParser.add_argument('--epochs', type=positiveInt)
    trainParser.add_argument('--learning-rate', dest='learning_rate', type=float)
    trainParser.add_argument('--h', type=float, help='finite-difference step')
    trainParser.add_argument('--train-path', dest='train_path', choices=PATHS)
    trainParser.add_argument('--init-scale', dest='init_scale', type=float,
                             help='standard deviation of the seeded perturbation of the initial filter values')
    return parser


def resolveConfig(args: argparse.Namespace) -> RunConfig:
    overrides = {key: value for key, value in vars(args).items() if key not in ('config', 'command')}
    if args.config is not None:
        return RunConfig.fromJson(args.config, **overrides)
    return RunConfig().updated(**overrides)


def estimationConfig(config: RunConfig) -> EstimationConfig:
    return EstimationConfig(config["q"], config["estimation"], config["shots"], config["seed"],
                            FixedPointFormat(2, config["b_frac"]))


def cmdBuild(config: RunConfig) -> int:
    lap = laplacian(config.loadGraph())
    dec = eigendecompose(lap)
    folder = RunFolder(config["out"])
    path = reportPaths(folder.path)["spectrum"]
    writeSpectrum(lap, dec, path, provenance(config.asDict()))
    printSpectrum(dec, config["d"] if config["d"] <= lap.n else None)
    print("Wrote spectrum of {} nodes to {}".format(lap.n, path))
    folder.writeReportMetadata()
    return EXIT_OK


def cmdForward(config: RunConfig) -> int:
    config.checkFiles("features")
    features = loadFeatures(config["features"])
    graph = config.loadGraph()
    basis = topD(eigendecompose(laplacian(graph)), config["d"], config["eigen_order"])
    estimation = estimationConfig(config)
    path = 'oracle' if config["mode"] == 'oracle' else 'quantum'
    outputs = forward(graph, features, config.layers(), config["d"], estimation, config["eigen_order"],
                      config["variant"], path, basis)
    folder = RunFolder(config["out"])
    paths = reportPaths(folder.path)
    writeLayerReport(outputs, paths["layers"], provenance(config.asDict()))
    if path == 'quantum' and outputs[0][0].overlaps is not None:
        writeOverlapTable(outputs[0][0].overlaps, paths["overlaps"])
        printOverlapTable(outputs[0][0].overlaps)
    printLayerOutputs(outputs)
    print("Wrote layer report to", paths["layers"])
    if config["mode"] == 'both':
        budget = layerBudget(estimation.q, estimation.fixedPoint.fracBits)
        for s, layer in enumerate(outputs):
            for c, output in enumerate(layer):
                # errors of earlier layers propagate, each layer adds its own budget
                checkAgainstOracle(output.features, output.oracleFeatures, (s + 1) * budget,
                                   "layer {} column {}".format(s, c))
    folder.writeReportMetadata()
    return EXIT_OK


def cmdSweep(config: RunConfig) -> int:
    """
    Sweeps the given features and graph, or random instances of instance_size when no features file is set.
    """
    instance = None
    if config["features"] is not None:
        config.checkFiles("features")
        features = loadFeatures(config["features"])
        instance = features, topD(eigendecompose(laplacian(config.loadGraph())), config["d"], config["eigen_order"])
    rows = sweepOverlapErrors(config["q_list"], config["seeds"], config["estimation"], config["shots"],
                              FixedPointFormat(2, config["b_frac"]), instance, tuple(config["instance_size"]),
                              config["d"], config["eigen_order"])
    folder = RunFolder(config["out"])
    path = reportPaths(folder.path)["sweep"]
    writeSweep(rows, path)
    printSweep(rows)
    ordered = [row["median_error"] for row in sorted(rows, key=lambda r: r["q"])]
    print("Median error {} with growing q.".format("does not increase" if nonIncreasing(ordered) else "increases"))
    print("Wrote sweep to", path)
    folder.writeReportMetadata()
    return EXIT_OK


def cmdTrain(config: RunConfig) -> int:
    config.checkFiles("features", "targets")
    features = loadFeatures(config["features"])
    targets = loadVector(config["targets"])
    basis = topD(eigendecompose(laplacian(config.loadGraph())), config["d"], config["eigen_order"])
    trainConfig = TrainConfig(config["epochs"], config["learning_rate"], config["h"], config["train_path"],
                              config["seed"], estimationConfig(config), initScale=config["init_scale"])
    data = TrainingData(basis, features, targets, config["variant"])
    theta = config.layers()[0][0]
    trace = fit(theta, data, trainConfig)
    folder = RunFolder(config["out"])
    paths = reportPaths(folder.path)
    writeTrace(trace, paths["trace"])
    writeTheta(trace.theta, paths["theta"])
    print("Loss {:.6e} -> {:.6e} in {} epochs, trace written to {}".format(
        trace.losses[0], trace.losses[-1], trace.epochs, paths["trace"]))
    print(json.dumps({"theta": trace.theta.tolist()}))
    folder.writeReportMetadata()
    return EXIT_OK


COMMANDS = {'build': cmdBuild, 'forward': cmdForward, 'sweep': cmdSweep, 'train': cmdTrain}


def reportError(error: Exception, code: int) -> int:
    document = {"error": type(error).__name__, "message": str(error), "exit_code": code}
    if getattr(error, 'path', None) is not None:
        document["path"] = error.path
        document["line"] = error.lineno
    print(json.dumps(document), file=sys.stderr)
    return code


def main(argv: List[str] = None) -> int:
    started = time.time()
    try:
        args = buildParser().parse_args(argv)
        config = resolveConfig(args)
        code = COMMANDS[args.command](config)
    except InputError as e:
        return reportError(e, EXIT_INPUT)
    except ToleranceViolation as e:
        return reportError(e, EXIT_TOLERANCE)
    except InvariantViolation as e:
        return reportError(e, EXIT_INVARIANT)
    logging.getLogger(__name__).info("%s finished in %.3f s.", args.command, time.time() - started)
    return code


if __name__ == '__main__':
    logging.basicConfig(level=logging.WARNING)
    sys.exit(main())
