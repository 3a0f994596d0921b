"""End-to-end checks of the command-line tool: worked examples, error
reporting, determinism and summary schema conformance."""
import csv
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

CLI, SCHEMA, DATA = sys.argv[1:4]
del sys.argv[1:4]

with open(SCHEMA) as fh:
    VALIDATOR = jsonschema.Draft202012Validator(json.load(fh))


def run(out, *args, seed=3):
    return subprocess.run([CLI, "--out", out, "--rng-seed", str(seed), *args], capture_output=True, text=True)


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


class Cli(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.root = cls.tmp.name
        cls.data = os.path.join(cls.root, "data")
        res = run(cls.data, "synth", "--clusters", "4", "--points", "10", "--redundancy", "2",
                  "--dim", "3", "--holdout-points", "10", seed=8)
        assert res.returncode == 0, res.stderr
        cls.pool = os.path.join(cls.data, "features.csv")
        cls.holdout = os.path.join(cls.data, "holdout.csv")
        cls.three = os.path.join(DATA, "three_points.csv")

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def out(self, name):
        return os.path.join(self.root, name)

    def ok(self, name, *args, seed=3):
        res = run(self.out(name), *args, seed=seed)
        self.assertEqual(res.returncode, 0, res.stderr)
        summary = json.loads(read(os.path.join(self.out(name), "summary.json")))
        VALIDATOR.validate(summary)
        return summary

    def error(self, name, *args):
        res = run(self.out(name), *args)
        return res.returncode, json.loads(res.stderr.strip().splitlines()[-1])

    def test_select_worked_example(self):
        s = self.ok("sel2", "select", "--input", self.three, "--objective", "fl", "--k", "2")
        self.assertEqual(read(os.path.join(self.out("sel2"), "selected_ids.txt")), b"b\nc\n")
        self.assertEqual(s["selected_ids"], ["b", "c"])
        self.assertAlmostEqual(s["metrics"]["objective_value"], 2.8, places=12)
        trace = rows(os.path.join(self.out("sel2"), "trace.csv"))
        self.assertEqual([r["id"] for r in trace], ["", "b", "c"])

    def test_select_empty_budget(self):
        s = self.ok("sel0", "select", "--input", self.three, "--objective", "fl", "--k", "0")
        self.assertEqual(read(os.path.join(self.out("sel0"), "selected_ids.txt")), b"")
        trace = rows(os.path.join(self.out("sel0"), "trace.csv"))
        self.assertEqual(len(trace), 1)
        self.assertEqual(float(trace[0]["value"]), 0.0)
        self.assertEqual(s["selected_ids"], [])

    def test_dispersion_budget_one_is_rejected(self):
        code, err = self.error("disp1", "select", "--input", self.three, "--objective", "dispersion", "--k", "1")
        self.assertEqual(code, 2)
        self.assertEqual(err["error"], "BadBudget")

    def test_error_exit_codes(self):
        code, err = self.error("missing", "select", "--input", self.out("nope.csv"), "--k", "1")
        self.assertEqual((code, err["error"]), (3, "IoError"))
        code, err = self.error("usage", "select", "--input", self.three, "--k", "1", "--objective", "nope")
        self.assertEqual((code, err["error"]), (2, "UsageError"))
        code, err = self.error("la", "select", "--input", self.three, "--k", "1", "--label-aware")
        self.assertEqual((code, err["error"]), (2, "MissingLabels"))
        code, err = self.error("spec", "synth", "--sigma", "0")
        self.assertEqual((code, err["error"]), (2, "BadSpec"))

    def test_select_variants(self):
        for name, extra in [("lafl", ["--label-aware"]),
                            ("ladisp", ["--label-aware", "--objective", "dispersion"]),
                            ("sparse", ["--objective", "sparse-fl", "--neighbors", "5"]),
                            ("mix", ["--objective", "mixture", "--lambda-disp", "0.2"]),
                            ("rbf", ["--kernel", "rbf", "--gamma", "0.4", "--optimizer", "naive"])]:
            s = self.ok("v_" + name, "select", "--input", self.pool, "--k", "9", *extra)
            self.assertEqual(len(s["selected_ids"]), 9, name)
            self.assertEqual(len(set(s["selected_ids"])), 9, name)

    def test_eval_knn_fraction_grid(self):
        s = self.ok("knn", "eval-knn", "--train", self.pool, "--holdout", self.holdout,
                    "--fractions", "5:100:5", "--repeats", "3")
        curve = rows(os.path.join(self.out("knn"), "curve.csv"))
        for method in ("fl", "dispersion", "random"):
            self.assertEqual(sum(r["method"] == method for r in curve), 20)
        full = {r["method"]: r["accuracy"] for r in curve if float(r["fraction"]) == 100}
        self.assertEqual(len(set(full.values())), 1)
        self.assertEqual(float(full["fl"]), s["metrics"]["full_data_accuracy"])

    def test_fass_exhaustion(self):
        s = self.ok("exhaust", "fass", "--pool", self.pool, "--holdout", self.holdout, "--arms", "random",
                    "--rounds", "1", "--batch", "100", "--beta", "100")
        curve = rows(os.path.join(self.out("exhaust"), "curve.csv"))
        self.assertEqual(len(curve), 1)
        self.assertEqual(int(curve[0]["labeled_count"]), 80)
        full = self.ok("full", "fass", "--pool", self.pool, "--holdout", self.holdout, "--arms", "random",
                       "--rounds", "1", "--batch", "100", "--beta", "100", "--seed-size", "79")
        self.assertEqual(float(curve[0]["accuracy"]), full["metrics"]["arms"]["random"]["final_accuracy"])
        self.assertTrue(s["metrics"]["arms"]["random"]["warnings"])

    def test_fass_all_arms(self):
        s = self.ok("fass4", "fass", "--pool", self.pool, "--holdout", self.holdout, "--rounds", "3",
                    "--batch", "5", "--beta", "20")
        curve = rows(os.path.join(self.out("fass4"), "curve.csv"))
        self.assertEqual(len(curve), 12)
        seeds = {tuple(a["seed_ids"]) for a in s["metrics"]["arms"].values()}
        self.assertEqual(len(seeds), 1)

    def test_synth_counts_and_formats(self):
        s = self.ok("syn", "synth", "--clusters", "2", "--points", "50")
        self.assertEqual(s["metrics"]["rows"], 100)
        self.ok("synbin", "--format", "bin", "synth", "--clusters", "2", "--points", "50", "--redundancy", "5")
        self.assertTrue(read(os.path.join(self.out("synbin"), "features.bin")).startswith(b"SUBSEL01"))
        self.ok("synbin2", "--format", "bin", "synth", "--clusters", "2", "--points", "50", "--redundancy", "5")
        self.assertEqual(read(os.path.join(self.out("synbin"), "features.bin")),
                         read(os.path.join(self.out("synbin2"), "features.bin")))
        k = self.ok("kbin", "kernel", "--input", os.path.join(self.out("synbin"), "features.bin"))
        self.assertEqual(k["metrics"]["rows"], 500)

    def test_timings_are_opt_in(self):
        s = self.ok("timed", "--timings", "select", "--input", self.three, "--k", "2")
        self.assertIn("total_seconds", s["timings"])

    def test_kernel_dump(self):
        self.ok("kern", "kernel", "--input", self.three, "--kernel", "cosine")
        lines = read(os.path.join(self.out("kern"), "kernel.csv")).decode().splitlines()
        self.assertEqual(lines[0], "id,a,b,c")
        self.assertEqual(lines[2], "b,0.8,1,0.2")


if __name__ == "__main__":
    unittest.main(verbosity=2)
