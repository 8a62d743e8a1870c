"""Tests for the command-line entry point."""

import contextlib
import io
import json
import os
import tempfile
from typing import List, Tuple
import unittest

from sgm_workbench.cli import load_json, main, parse_rank_vector
from sgm_workbench.rings import sphere_ring
from sgm_workbench.workbench_utils import settings_override


def run(argv: List[str]) -> Tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with settings_override(), contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class TestHelpers(unittest.TestCase):
    """Argument parsing helpers."""

    def test_rank_vector(self) -> None:
        self.assertEqual(parse_rank_vector("2:1, 5:3"), {2: 1, 5: 3})
        self.assertEqual(parse_rank_vector('{"2": 1}'), {2: 1})
        with self.assertRaises(ValueError):
            parse_rank_vector("2-1")

    def test_load_json(self) -> None:
        self.assertEqual(load_json('{"a": 1}'), {"a": 1})
        self.assertEqual(load_json(" [1, 2]"), [1, 2])
        with self.assertRaises(OSError):
            load_json("/nonexistent/ring.json")


class TestCommands(unittest.TestCase):
    """Exit codes and output of each verb."""

    def test_eval(self) -> None:
        code, out, _ = run(["eval", "P(S2,B(S3,S3))", "--oracle", "--json"])
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["homology"], {"0": {"rank": 1, "torsion": []}, "2": {"rank": 1, "torsion": []}, "3": {"rank": 2, "torsion": []}, "5": {"rank": 2, "torsion": []}})
        self.assertEqual(payload["connectivity"], 1)
        self.assertEqual([v["status"] for v in payload["verdicts"]], ["pass", "pass"])

    def test_input_errors(self) -> None:
        code, _, err = run(["eval", "S9999"])
        self.assertEqual(code, 2)
        self.assertTrue(err.startswith("error:"))
        self.assertEqual(run(["eval", "B(S2"])[0], 2)
        self.assertEqual(run(["realize", "--n", "6", "--k", "2", "--ranks", "2:0,5:1"])[0], 2)

    def test_ring(self) -> None:
        code, out, _ = run(["ring", "--ring", "sphere:3"])
        self.assertEqual(code, 0)
        self.assertIn("Z-ring, n = 3", out)
        self.assertEqual(run(["ring", "--ring", "simplicial:rp2", "--coeff", "Zp:2"])[0], 0)

    def test_ring_file(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "ring.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump(sphere_ring(4).to_json(), f)
            code, out, _ = run(["check-thm1", "--ring", path, "--m", "7", "--n", "4", "--json"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["verdicts"][0]["status"], "pass")

    def test_check_thm1_failure(self) -> None:
        code, out, _ = run(["check-thm1", "--ring", "torus7", "--m", "7", "--n", "6"])
        self.assertEqual(code, 1)
        self.assertIn("fail", out)

    def test_holes_with_ring(self) -> None:
        holes = '{"holes": [[2], [3]], "linking": [[0, 1, 1]]}'
        code, out, _ = run(["holes", "--n", "6", "--k", "2", "--holes", holes, "--with-ring", "--json"])
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["homology"]["5"], {"rank": 2, "torsion": []})
        self.assertIn("ring", payload)

    def test_realize(self) -> None:
        code, out, _ = run(["realize", "--n", "6", "--k", "2", "--ranks", "2:3,5:2", "--json"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["holes"], {"holes": [[3, 3], [3]], "linking": []})

    def test_massey(self) -> None:
        code, out, _ = run(["massey", "--u", "x1", "--v", "x2", "--w", "x3", "--json"])
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(out)["massey"]["nonvanishing"])
        code, out, _ = run(["massey", "--dga", "exterior:2", "--u", "e1", "--v", "e2", "--w", "e1"])
        self.assertEqual(code, 0)
        self.assertIn("undefined", out)

    def test_sgm(self) -> None:
        image = '{"kind": "holes", "n": 6, "holes": [[3], [3], [3]]}'
        code, out, _ = run(["sgm", "--image", image, "--m", "7", "--mayer-vietoris", "--json"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["homology"]["2"], {"rank": 6, "torsion": []})

    def test_check_root(self) -> None:
        self.assertEqual(run(["check-root", "P(@S2xS2,S2)", "--n", "6", "--k", "2"])[0], 1)
        self.assertEqual(run(["check-root", "B(S2,S3)", "--n", "5", "--k", "2"])[0], 0)
        self.assertEqual(
            run(["check-root", "@CP2#CP2bar", "--n", "6", "--k", "2", "--mode", "SIE"])[0], 0
        )

    def test_pipeline(self) -> None:
        code, out, _ = run(["pipeline", "borromean"])
        self.assertEqual(code, 0)
        self.assertIn("stated rank 3", out)

    def test_oracle(self) -> None:
        argv = ["oracle", "--max-atoms", "1", "--max-holes", "1", "--max-summands", "1", "--max-n", "4", "--quiet", "--json"]
        code, out, _ = run(argv)
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["mismatches"], [])
