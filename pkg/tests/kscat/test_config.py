"""Tests for `kscat.config`.

Copyright (c) The kscat authors
"""

import unittest
from unittest import mock

from parameterized import parameterized

from kscat import config


class CapsTest(unittest.TestCase):
    def test_defaults(self):
        caps = config.Caps()
        self.assertEqual(caps.to_dict(), {"N": 12, "M": 8, "q_cap": None, "seed": 0})

    def test_from_env(self):
        caps = config.Caps.from_env(
            {"KSCAT_MAX_DEGREE": "20", "KSCAT_Q_CAP": "3", "KSCAT_MAX_WORDLENGTH": ""}
        )
        self.assertEqual(caps, config.Caps(max_degree=20, max_wordlength=8, q_cap=3))

    def test_from_process_environment(self):
        with mock.patch.dict("os.environ", {"KSCAT_MAX_WORDLENGTH": "4"}):
            self.assertEqual(config.Caps.from_env().max_wordlength, 4)

    def test_bad_env_value_raises(self):
        with self.assertRaisesRegex(ValueError, "KSCAT_MAX_DEGREE"):
            config.Caps.from_env({"KSCAT_MAX_DEGREE": "twelve"})

    def test_replace_ignores_unset(self):
        caps = config.Caps().replace(max_degree=5, max_wordlength=None, q_cap=None)
        self.assertEqual(caps, config.Caps(max_degree=5))

    @parameterized.expand(
        [
            ({"max_degree": -1},),
            ({"max_wordlength": 1.5},),
            ({"q_cap": -2},),
            ({"seed": True},),
        ]
    )
    def test_invalid_values_raise(self, kwargs):
        with self.assertRaises(ValueError):
            config.Caps(**kwargs)
