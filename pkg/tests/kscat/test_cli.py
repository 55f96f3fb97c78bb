"""Tests for `kscat.cli`.

Copyright (c) The kscat authors
"""

import contextlib
import io
import json
import os
import tempfile
import unittest
from unittest import mock

from kscat import cli, corpus


def _run(*argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = cli.main(list(argv))
    return code, out.getvalue()


class CliTest(unittest.TestCase):
    def setUp(self):
        self._dir = tempfile.TemporaryDirectory()
        self.addCleanup(self._dir.cleanup)

    def write(self, name, text):
        path = os.path.join(self._dir.name, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def write_spec(self, spec):
        return self.write(f"{spec.label}.json", corpus.dump_spec(spec))

    def test_validate(self):
        code, out = _run("validate", self.write_spec(corpus.example1()))
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["schema"], 1)
        self.assertEqual(payload["command"], "validate")
        self.assertEqual(payload["input"]["label"], "example1")
        self.assertTrue(payload["result"]["ok"])
        self.assertFalse(payload["result"]["minimal"]["verdict"])
        self.assertNotIn("wall_time", payload)

    def test_validate_failure(self):
        spec = corpus.AlgebraSpec(
            (
                corpus.GeneratorSpec("a", 2, "base"),
                corpus.GeneratorSpec("b", 3, "base"),
                corpus.GeneratorSpec("c", 4, "base"),
            ),
            {"b": "a^2", "c": "a*b"},
            "bad",
        )
        code, _ = _run("validate", self.write_spec(spec))
        self.assertEqual(code, 1)

    def test_toomer(self):
        code, out = _run("toomer", self.write_spec(corpus.example3()))
        self.assertEqual(code, 0)
        result = json.loads(out)["result"]
        self.assertEqual(result["candidate"], 3)
        self.assertEqual(result["certified_lower"], 3)
        self.assertEqual((result["N"], result["M"]), (8, 6))

    def test_toomer_relative_to_base(self):
        code, out = _run("toomer", "--subset", "base", self.write_spec(corpus.example2()))
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["result"]["candidate"], 1)

    def test_toomer_beyond_cap_is_inconclusive(self):
        path = self.write_spec(corpus.example3())
        code, out = _run("toomer", "--max-wordlength", "2", path)
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(out)["result"]["candidate"], "> 2")

    def test_verify_bound(self):
        code, out = _run("verify-bound", "--no-chain", self.write_spec(corpus.example3()))
        self.assertEqual(code, 0)
        result = json.loads(out)["result"]
        self.assertEqual(result["status"], "holds")
        self.assertEqual(result["bound"], 4)
        self.assertEqual(result["chain"], [])

    def test_fiber(self):
        code, out = _run("fiber", self.write_spec(corpus.example3()))
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["result"]["n_used"], 1)

    def test_cohomology(self):
        path = self.write_spec(corpus.example2())
        code, out = _run("cohomology", "--max-degree", "4", path)
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["caps"]["N"], 4)
        self.assertEqual(
            payload["result"]["dimensions"], {"0": 1, "1": 0, "2": 1, "3": 0, "4": 0}
        )
        self.assertEqual(payload["result"]["classes"]["2"]["dimension"], 1)

    def test_cylinder_demo(self):
        path = self.write_spec(corpus.example2())
        code, out = _run("cylinder-demo", "--max-degree", "5", path)
        self.assertEqual(code, 0)
        self.assertTrue(all(json.loads(out)["result"]["checks"].values()))

    def test_output_is_deterministic(self):
        path = self.write_spec(corpus.example3())
        self.assertEqual(_run("verify-bound", path), _run("verify-bound", path))

    def test_timing(self):
        code, out = _run("validate", "--timing", self.write_spec(corpus.example1()))
        self.assertEqual(code, 0)
        self.assertIn("wall_time", json.loads(out))

    def test_text_output(self):
        code, out = _run("validate", "--text", self.write_spec(corpus.example1()))
        self.assertEqual(code, 0)
        self.assertIn("schema: 1", out.splitlines())
        self.assertIn("  ok: yes", out.splitlines())

    def test_malformed_input(self):
        code, out = _run("validate", self.write("bad.json", '{"generators": ['))
        self.assertEqual(code, 2)
        self.assertEqual(out, "")

    def test_missing_input(self):
        code, _ = _run("validate", os.path.join(self._dir.name, "missing.json"))
        self.assertEqual(code, 2)

    def test_base_not_closed(self):
        spec = corpus.AlgebraSpec(
            (corpus.GeneratorSpec("z", 2, "fiber"), corpus.GeneratorSpec("w", 3, "base")),
            {"w": "z^2"},
            "open-base",
        )
        code, _ = _run("toomer", self.write_spec(spec))
        self.assertEqual(code, 1)

    def test_cap_precedence(self):
        path = self.write_spec(corpus.odd_sphere())
        with mock.patch.dict("os.environ", {"KSCAT_MAX_DEGREE": "7"}):
            _, out = _run("validate", path)
            self.assertEqual(json.loads(out)["caps"]["N"], 7)
            _, out = _run("validate", "--max-degree", "9", path)
            self.assertEqual(json.loads(out)["caps"]["N"], 9)
        with mock.patch.dict("os.environ", {"KSCAT_MAX_DEGREE": "7"}):
            _, out = _run("validate", self.write_spec(corpus.example2()))
            self.assertEqual(json.loads(out)["caps"]["N"], 20)

    def test_bad_environment_is_inconclusive(self):
        with mock.patch.dict("os.environ", {"KSCAT_MAX_WORDLENGTH": "x"}):
            code, _ = _run("validate", self.write_spec(corpus.example1()))
        self.assertEqual(code, 2)

    def test_corpus_run(self):
        path = self.write_spec(corpus.example2())
        code, out = _run("corpus-run", path)
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["summary"], {"pass": 1})
        self.assertEqual(payload["records"][0]["label"], "example2")

    def test_corpus_run_is_deterministic(self):
        path = self.write_spec(corpus.example1())
        argv = ("corpus-run", "--max-degree", "8", "--max-wordlength", "4", "--count", "2")
        first = _run(*argv, "--seed", "3", path)
        self.assertEqual(first, _run(*argv, "--seed", "3", path))
        labels = [r["label"] for r in json.loads(first[1])["records"]]
        self.assertEqual(labels, ["example1", "random(seed=3)", "random(seed=4)"])
