"""
Input files, run configurations, and the command-line entry points.
"""
import contextlib
import io
import json
import tempfile
import unittest
from os.path import join, isfile

import numpy

from qspec.errors import ParseError, ConfigError, InputError
from qspec.utils.loader import RunConfig, loadEdgeList, loadMatrix, loadFeatures
from qgcn import main, EXIT_OK, EXIT_INPUT


def quiet(argv):
    """
    Run the script entry point with its output captured.

    :return: exit code, standard output, standard error
    """
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class TestLoader(unittest.TestCase):

    def setUp(self) -> None:
        self.folder = tempfile.TemporaryDirectory()

    def tearDown(self) -> None:
        self.folder.cleanup()

    def write(self, name: str, content: str) -> str:
        path = join(self.folder.name, name)
        with open(path, 'w') as f:
            f.write(content)
        return path

    def test_edgeList(self):
        graph = loadEdgeList(self.write("g.txt", "# path\n0 1\n1 2 0.5\n"))
        numpy.testing.assert_array_equal(graph.weights, [[0, 1, 0], [1, 0, 0.5], [0, 0.5, 0]])

    def test_malformedEdge(self):
        path = self.write("bad.txt", "0 x 1\n")
        with self.assertRaises(ParseError) as context:
            loadEdgeList(path)
        self.assertEqual(context.exception.lineno, 1)
        self.assertEqual(context.exception.path, path)
        with self.assertRaises(ParseError):
            loadEdgeList(self.write("long.txt", "0 1\n0 1 2 3\n"))

    def test_matrix(self):
        numpy.testing.assert_array_equal(loadMatrix(self.write("x.csv", "1,2\n3,4\n")), [[1, 2], [3, 4]])
        features = loadFeatures(self.write("f.csv", "1\n0\n"))
        self.assertEqual((features.n, features.f), (2, 1))
        with self.assertRaises(ParseError) as context:
            loadMatrix(self.write("y.csv", "# header\n1,2\n3,a\n"))
        self.assertEqual(context.exception.lineno, 3)

    def test_missingFile(self):
        with self.assertRaises(InputError):
            loadEdgeList(join(self.folder.name, "absent.txt"))

    def test_runConfig(self):
        self.assertEqual(RunConfig()["q"], 8)
        self.assertEqual(RunConfig().updated(q=10, d=None)["q"], 10)
        with self.assertRaises(ConfigError):
            RunConfig(colour="blue")
        with self.assertRaises(ConfigError):
            RunConfig(d=4)
        with self.assertRaises(ConfigError):
            RunConfig(q_list=[])
        with self.assertRaises(ConfigError):
            RunConfig.fromJson(self.write("c.json", json.dumps({"q": 8, "phase_bits": 3})))
        config = RunConfig.fromJson(self.write("ok.json", json.dumps({"q": 6})), q=9, seed=None)
        self.assertEqual((config["q"], config["seed"]), (9, 0))
        with self.assertRaises(ParseError):
            RunConfig.fromJson(self.write("broken.json", "{\"q\": "))

    def test_nodeCount(self):
        graph = loadEdgeList(self.write("iso.txt", "nodes 4\n0 1\n1 2\n"))
        self.assertEqual(graph.n, 4)
        self.assertEqual(graph.weights[3].tolist(), [0, 0, 0, 0])
        self.assertEqual(loadEdgeList(self.write("arg.txt", "0 1\n"), 3).n, 3)
        self.assertEqual(loadEdgeList(self.write("none.txt", "nodes 2\n")).n, 2)
        with self.assertRaises(ParseError) as context:
            loadEdgeList(self.write("late.txt", "0 1\nnodes 4\n"))
        self.assertEqual(context.exception.lineno, 2)
        with self.assertRaises(ParseError):
            loadEdgeList(self.write("bad.txt", "nodes four\n0 1\n"))
        with self.assertRaises(InputError):
            loadEdgeList(self.write("small.txt", "nodes 2\n0 2\n"))
        config = RunConfig(edges=self.write("cfg.txt", "0 1\n"), nodes=4)
        self.assertEqual(config.loadGraph().n, 4)
        with self.assertRaises(ConfigError):
            RunConfig(nodes=1)

    def test_malformedValues(self):
        for values in ({"layers": [[[1.0, 1.0], [1.0]]]}, {"layers": [[["a", 1.0]]]}, {"sigma": "wide"},
                       {"sigma": 0.0}, {"seed": "3"}, {"seed": -1}, {"seed": 1.5}, {"h": None},
                       {"learning_rate": "fast"}, {"init_scale": -0.1}, {"instance_size": [8]},
                       {"q_list": [4, "6"]}):
            with self.assertRaises(ConfigError, msg=str(values)):
                RunConfig(**values)
        path = self.write("ragged.json", json.dumps({"layers": [[[1.0, 1.0], [2.0]]]}))
        with self.assertRaises(ConfigError):
            RunConfig.fromJson(path)


class TestCommands(unittest.TestCase):

    def setUp(self) -> None:
        self.folder = tempfile.TemporaryDirectory()
        self.edges = join(self.folder.name, "p2.txt")
        self.features = join(self.folder.name, "x.csv")
        self.out = join(self.folder.name, "reports")
        with open(self.edges, 'w') as f:
            f.write("0 1\n")
        with open(self.features, 'w') as f:
            f.write("1\n0\n")

    def tearDown(self) -> None:
        self.folder.cleanup()

    def test_build(self):
        code, _, _ = quiet(['build', '--edges', self.edges, '-o', self.out])
        self.assertEqual(code, EXIT_OK)
        with open(join(self.out, "spectrum.json")) as f:
            spectrum = json.load(f)
        numpy.testing.assert_allclose(spectrum["eigenvalues"], [2, 0], atol=1e-12)
        self.assertEqual(spectrum["laplacian"], [[1, -1], [-1, 1]])
        self.assertIn("git_commit", spectrum)
        self.assertTrue(isfile(join(self.out, "run-metadata.md")))

    def test_forwardOracle(self):
        code, _, _ = quiet(['forward', '--edges', self.edges, '--features', self.features, '-m', 'oracle',
                            '-o', self.out])
        self.assertEqual(code, EXIT_OK)
        with open(join(self.out, "layers.json")) as f:
            features = json.load(f)["layers"][0][0]["features"]
        self.assertEqual(len(features), 2)
        for value in features:
            self.assertTrue(numpy.sqrt(0.5) - 1e-12 <= value <= 1 + 1e-12)

    def test_forwardBoth(self):
        code, _, err = quiet(['forward', '--edges', self.edges, '--features', self.features, '-q', '10',
                              '-o', self.out])
        self.assertEqual(code, EXIT_OK, err)
        self.assertTrue(isfile(join(self.out, "overlaps.csv")))
        with open(join(self.out, "layers.json")) as f:
            report = json.load(f)
        numpy.testing.assert_allclose(report["layers"][0][0]["features"], [1.0, 0.70703125], atol=1e-12)

    def test_missingFeatures(self):
        code, _, err = quiet(['forward', '--edges', self.edges, '--features', join(self.folder.name, "none.csv"),
                              '-o', self.out])
        self.assertEqual(code, EXIT_INPUT)
        self.assertEqual(json.loads(err)["exit_code"], EXIT_INPUT)

    def test_parseErrorReport(self):
        with open(self.edges, 'w') as f:
            f.write("0 x 1\n")
        code, _, err = quiet(['build', '--edges', self.edges, '-o', self.out])
        self.assertEqual(code, EXIT_INPUT)
        report = json.loads(err)
        self.assertEqual((report["error"], report["line"]), ("ParseError", 1))

    def test_sweep(self):
        code, out, _ = quiet(['sweep', '--edges', self.edges, '--features', self.features, '--q-list', '4,6',
                              '-o', self.out])
        self.assertEqual(code, EXIT_OK)
        with open(join(self.out, "sweep.csv")) as f:
            lines = f.read().splitlines()
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[0].startswith("q,runs,median_error"))
        self.assertEqual(quiet(['sweep', '--edges', self.edges, '--features', self.features, '--q-list', '',
                                '-o', self.out])[0], EXIT_INPUT)

    def test_argumentErrors(self):
        for argv in (['train', '--edges', self.edges, '--epochs', '0'], ['build', '-q', 'ten'],
                     ['forward', '-m', 'classical'], ['sweep', '--q-list', '4,x'], []):
            code, out, err = quiet(argv + ['-o', self.out] if argv else argv)
            self.assertEqual(code, EXIT_INPUT, argv)
            report = json.loads(err)
            self.assertEqual((report["error"], report["exit_code"]), ("ConfigError", EXIT_INPUT))

    def test_malformedConfigFile(self):
        for name, values in (("ragged.json", {"layers": [[[1.0, 1.0], [1.0]]]}), ("sigma.json", {"sigma": "wide"}),
                             ("seed.json", {"seed": "0"})):
            path = join(self.folder.name, name)
            with open(path, 'w') as f:
                json.dump(values, f)
            code, _, err = quiet(['build', '--edges', self.edges, '-c', path, '-o', self.out])
            self.assertEqual(code, EXIT_INPUT, name)
            self.assertEqual(json.loads(err)["error"], "ConfigError")

    def test_sweepRandomInstances(self):
        code, _, _ = quiet(['sweep', '--q-list', '4', '--seeds', '2', '--instance-size', '4,1', '-o', self.out])
        self.assertEqual(code, EXIT_OK)
        with open(join(self.out, "sweep.csv")) as f:
            lines = f.read().splitlines()
        self.assertEqual(len(lines), 2)
        header = lines[0].split(',')
        self.assertEqual(lines[1].split(',')[header.index("runs")], "2")

    def test_train(self):
        targets = join(self.folder.name, "t.csv")
        with open(targets, 'w') as f:
            f.write("0.9\n0.8\n")
        code, out, _ = quiet(['train', '--edges', self.edges, '--features', self.features, '--targets', targets,
                              '--epochs', '5', '-o', self.out])
        self.assertEqual(code, EXIT_OK)
        with open(join(self.out, "theta.json")) as f:
            self.assertEqual(len(json.load(f)["theta"]), 2)
        with open(join(self.out, "trace.csv")) as f:
            self.assertEqual(len(f.read().splitlines()), 6)


if __name__ == '__main__':
    unittest.main()
