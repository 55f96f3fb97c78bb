"""Tests for `kscat.corpus`.

Copyright (c) The kscat authors
"""

import json
import unittest

from parameterized import parameterized

from kscat import corpus, sullivan
from kscat.config import Caps
from kscat.graded import ParseError


def _spec(generators, differential, label="test"):
    return corpus.AlgebraSpec(
        tuple(corpus.GeneratorSpec(*g) for g in generators), dict(differential), label
    )


class DocumentTest(unittest.TestCase):
    def test_dump_and_load(self):
        spec = corpus.example3(1, 2)
        self.assertEqual(corpus.loads_spec(corpus.dump_spec(spec)), spec)

    def test_document_layout(self):
        payload = json.loads(corpus.dump_spec(corpus.example2()))
        self.assertEqual(
            payload["generators"][0], {"name": "z", "degree": 2, "role": "base"}
        )
        self.assertEqual(payload["differential"], {"w": "z^2"})
        self.assertEqual(payload["caps"], {"M": 8, "N": 20})
        self.assertEqual(payload["metadata"]["label"], "example2")

    def test_digest(self):
        self.assertEqual(corpus.digest(corpus.example1()), corpus.digest(corpus.example1()))
        self.assertNotEqual(corpus.digest(corpus.example1()), corpus.digest(corpus.example2()))
        self.assertEqual(len(corpus.digest(corpus.example1())), 64)

    def test_malformed_json_reports_position(self):
        with self.assertRaises(ParseError) as ctx:
            corpus.loads_spec('{\n  "generators": [}')
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 18))

    @parameterized.expand(
        [
            ("not_an_object", "[1, 2]", "JSON object"),
            ("no_generators", "{}", "Missing `generators`"),
            ("no_degree", '{"generators": [{"name": "a"}]}', "name and a degree"),
            (
                "bad_role",
                '{"generators": [{"name": "a", "degree": 1, "role": "top"}]}',
                "role",
            ),
            (
                "bad_differential",
                '{"generators": [{"name": "a", "degree": 1}], "differential": {"a": 1}}',
                "differential",
            ),
        ]
    )
    def test_malformed_document_raises(self, _, text, message):
        with self.assertRaisesRegex(ParseError, message):
            corpus.loads_spec(text)

    def test_expression_error_names_generator(self):
        spec = _spec([("z", 2, "base"), ("w", 3, "fiber")], {"w": "z^2 +"})
        with self.assertRaises(ParseError) as ctx:
            corpus.spec_to_complex(spec)
        self.assertTrue(ctx.exception.message.startswith("In the differential of `w`"))

    def test_unknown_generator_in_differential(self):
        spec = _spec([("z", 2, "base")], {"w": "z^2"})
        with self.assertRaisesRegex(ParseError, "unknown generators"):
            corpus.spec_to_complex(spec)

    def test_roles_select_base(self):
        extension = corpus.spec_to_extension(corpus.example3())
        self.assertEqual(extension.base_names, ("x", "y"))

    def test_degree_split_without_roles(self):
        spec = _spec([("a", 1, "plain"), ("b", 1, "plain"), ("c", 3, "plain")], {})
        extension = corpus.spec_to_extension(spec)
        self.assertEqual(extension.base_names, ("a", "b"))

    def test_builtin_corpus(self):
        labels = [spec.label for spec in corpus.builtin_corpus()]
        self.assertEqual(len(labels), 8)
        self.assertEqual(len(set(labels)), 8)
        for spec in corpus.builtin_corpus():
            with self.subTest(spec.label):
                self.assertTrue(corpus.validate(spec)["ok"])

    def test_instance_caps_override_default(self):
        caps = corpus.example2().caps(Caps(max_degree=5, max_wordlength=2, q_cap=3))
        self.assertEqual(caps, Caps(max_degree=20, max_wordlength=8, q_cap=3))


class GenerateTest(unittest.TestCase):
    def test_deterministic(self):
        self.assertEqual(corpus.corpus_generate(7), corpus.corpus_generate(7))

    @parameterized.expand([(seed,) for seed in range(20)])
    def test_generated_algebras_are_valid(self, seed):
        spec = corpus.corpus_generate(seed)
        self.assertEqual(spec.label, f"random(seed={seed})")
        complex = corpus.spec_to_complex(spec)
        self.assertTrue(sullivan.check_d_squared(complex).verdict)
        self.assertTrue(sullivan.check_sullivan(complex).ok)
        extension = corpus.spec_to_extension(spec)
        self.assertEqual(extension.base_names, spec.base_names)

    def test_counts(self):
        spec = corpus.corpus_generate(3, num_base=2, num_fiber=0)
        self.assertEqual(spec.names, ("z0", "z1"))
        self.assertEqual(spec.base_names, ("z0", "z1"))
        spec = corpus.corpus_generate(3, num_base=1, num_fiber=3)
        self.assertEqual(spec.names, ("z0", "w0", "w1", "w2"))

    def test_degrees_are_bounded(self):
        spec = corpus.corpus_generate(11, max_generators=5, max_degree=3)
        self.assertLessEqual(len(spec.generators), 5)
        self.assertTrue(all(1 <= g.degree <= 3 for g in spec.generators))

    @parameterized.expand(
        [
            ("max_generators", {"max_generators": 7}),
            ("max_degree", {"max_degree": 0}),
            ("max_terms", {"max_terms": 0}),
            ("empty", {"num_base": 0, "num_fiber": 0}),
            ("seed", {"seed": -1}),
        ]
    )
    def test_invalid_arguments_raise(self, _, kwargs):
        kwargs = dict({"seed": 0}, **kwargs)
        with self.assertRaises(ValueError):
            corpus.corpus_generate(**kwargs)

    def test_filtrations_are_sound_on_random_instances(self):
        for seed in range(200):
            with self.subTest(seed=seed):
                extension = corpus.spec_to_extension(corpus.corpus_generate(seed))
                result = corpus.check_filtrations(extension, 12)
                self.assertEqual(result["failures"], [])

    def test_random_corpus_seeds(self):
        specs = corpus.random_corpus(5, 3)
        self.assertEqual(
            [s.label for s in specs],
            ["random(seed=5)", "random(seed=6)", "random(seed=7)"],
        )


class PipelineTest(unittest.TestCase):
    @parameterized.expand(
        [
            ("example1", corpus.example1),
            ("example2", corpus.example2),
            ("example3", corpus.example3),
            ("odd_sphere", corpus.odd_sphere),
        ]
    )
    def test_builtin_instances_pass(self, _, factory):
        spec = factory()
        record = corpus.run_instance(spec, spec.caps(Caps()))
        self.assertEqual(record["status"], "pass")
        self.assertEqual(record["expected_mismatches"], [])
        self.assertEqual(record["filtrations"]["failures"], [])
        self.assertEqual(record["bound"]["status"], "holds")

    def test_example3_record(self):
        spec = corpus.example3()
        record = corpus.run_instance(spec, spec.caps(Caps()))
        self.assertEqual(record["cohomology"], {"0": 1, "2": 1, "4": 1, "6": 1})
        self.assertEqual(record["bound"]["bound"], 4)
        self.assertEqual(record["bound"]["e_certified_lower"], 3)
        self.assertEqual(record["caps"], {"N": 8, "M": 6, "q_cap": None, "seed": 0})

    def test_mismatch_is_reported_without_failing(self):
        spec = corpus.example2()
        spec = corpus.AlgebraSpec(
            spec.generators,
            spec.differential,
            spec.label,
            {"e": 5},
            spec.max_degree,
            spec.max_wordlength,
        )
        record = corpus.run_instance(spec, spec.caps(Caps()))
        self.assertEqual(record["expected_mismatches"], ["e"])
        self.assertEqual(record["status"], "pass")

    def test_d_squared_failure(self):
        spec = _spec(
            [("a", 2, "base"), ("b", 3, "base"), ("c", 4, "base")],
            {"b": "a^2", "c": "a*b"},
        )
        record = corpus.run_instance(spec, Caps())
        self.assertEqual(record["status"], "fail")
        self.assertFalse(record["validate"]["d_squared"]["verdict"])

    def test_base_not_closed(self):
        spec = _spec([("z", 2, "fiber"), ("w", 3, "base")], {"w": "z^2"})
        checks = corpus.validate(spec)
        self.assertFalse(checks["ok"])
        self.assertFalse(checks["extension"]["verdict"])
        self.assertIn("not closed", checks["extension"]["error"])

    def test_small_caps_report_mismatches(self):
        spec = corpus.example3()
        record = corpus.run_instance(spec, Caps(max_degree=2, max_wordlength=1))
        self.assertEqual(record["status"], "pass")
        self.assertEqual(record["bound"]["e_candidate"], 1)
        self.assertEqual(record["expected_mismatches"], ["cohomology", "e"])

    def test_run_corpus_keeps_order(self):
        specs = [corpus.odd_sphere(1), corpus.example1()]
        records = corpus.run_corpus(specs, Caps(), {"max_wordlength": 6})
        self.assertEqual([r["label"] for r in records], ["odd-sphere(3)", "example1"])
        self.assertEqual([r["caps"]["M"] for r in records], [6, 6])
        self.assertEqual(records[1]["caps"]["N"], 12)

    @parameterized.expand(
        [
            (["pass", "pass"], 0),
            (["pass", "inconclusive"], 2),
            (["inconclusive", "fail"], 1),
            ([], 0),
        ]
    )
    def test_exit_status(self, statuses, expected):
        records = [{"status": s} for s in statuses]
        self.assertEqual(corpus.exit_status(records), expected)


class CylinderDemoTest(unittest.TestCase):
    def test_example2(self):
        extension = corpus.spec_to_extension(corpus.example2())
        result = corpus.cylinder_demo(extension, 6)
        self.assertEqual(
            result["checks"],
            {
                "chain_map_F": True,
                "chain_map_p": True,
                "factorization": True,
                "F_injective": True,
                "p_surjective": True,
                "p_quasi_isomorphism": True,
                "strictify": True,
                "lift": True,
                "lifts_homotopic": True,
                "resolution_surjective": True,
                "resolution_quasi_isomorphism": True,
            },
        )
        self.assertEqual(result["cylinder_rank"], 3)
        self.assertEqual(result["resolution"]["window"], [0, 6])
