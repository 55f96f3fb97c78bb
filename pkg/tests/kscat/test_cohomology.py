"""Tests for `kscat.cohomology`.

Copyright (c) The kscat authors
"""

import unittest
from fractions import Fraction

from importlib import import_module

cohomology = import_module("kscat.cohomology")
from kscat.cohomology import ExplicitComplex
from kscat.linalg import RationalMatrix


def _zero_complex(dimensions):
    return ExplicitComplex(dimensions, {})


def _identity_map(scale=1):
    return lambda k: RationalMatrix.identity(1).scale(scale)


class ExplicitComplexTest(unittest.TestCase):
    def test_wrong_shape_raises(self):
        with self.assertRaisesRegex(ValueError, "shape"):
            ExplicitComplex({0: 1, 1: 2}, {0: RationalMatrix.identity(1)})

    def test_non_complex_raises(self):
        with self.assertRaisesRegex(ValueError, "compose to zero"):
            ExplicitComplex(
                {0: 1, 1: 1, 2: 1},
                {0: RationalMatrix.identity(1), 1: RationalMatrix.identity(1)},
            )

    def test_differential_beyond_cap_raises(self):
        c = _zero_complex({0: 1, 1: 1})
        with self.assertRaises(cohomology.CapError):
            c.differential(1)

    def test_differential_below_min_degree_is_empty(self):
        c = _zero_complex({0: 2, 1: 1})
        self.assertEqual(c.differential(-1).shape, (2, 0))


class CohomologyTest(unittest.TestCase):
    def test_exact_sequence_has_no_cohomology(self):
        c = ExplicitComplex(
            {0: 1, 1: 2, 2: 1, 3: 0},
            {
                0: RationalMatrix.from_dense([[1], [1]]),
                1: RationalMatrix.from_dense([[1, -1]]),
            },
        )
        window = cohomology.cohomology(c, 0, 2)
        self.assertEqual(window.dimensions(), {0: 0, 1: 0, 2: 0})
        self.assertEqual(cohomology.euler_characteristic(c, 0, 3), 0)

    def test_representatives_are_independent_modulo_boundaries(self):
        c = ExplicitComplex(
            {0: 1, 1: 2, 2: 1, 3: 0},
            {0: RationalMatrix.from_dense([[1], [0]])},
        )
        window = cohomology.cohomology(c, 0, 2)
        self.assertEqual(window.dimensions(), {0: 0, 1: 1, 2: 1})
        representative = window[1].representatives[0]
        self.assertEqual(window.class_coordinates(1, representative), (Fraction(1),))
        self.assertTrue(window.is_coboundary(1, (Fraction(5), Fraction(0))))
        self.assertFalse(window.is_coboundary(1, (Fraction(0), Fraction(1))))

    def test_euler_characteristics_agree(self):
        c = ExplicitComplex(
            {0: 1, 1: 3, 2: 3, 3: 1, 4: 0},
            {
                0: RationalMatrix.from_dense([[1], [0], [0]]),
                2: RationalMatrix.from_dense([[0, 0, 1]]),
            },
        )
        window = cohomology.cohomology(c, 0, 3)
        self.assertEqual(
            cohomology.cohomology_euler_characteristic(window),
            cohomology.euler_characteristic(c, 0, 3),
        )

    def test_window_beyond_cap_raises(self):
        c = _zero_complex({0: 1, 1: 1, 2: 1})
        with self.assertRaises(cohomology.CapError):
            cohomology.cohomology(c, 0, 2)

    def test_degree_outside_window_raises(self):
        window = cohomology.cohomology(_zero_complex({0: 1, 1: 1, 2: 1}), 0, 1)
        with self.assertRaises(cohomology.CapError):
            window[2]

    def test_non_cocycle_has_no_class(self):
        c = ExplicitComplex({0: 1, 1: 1, 2: 0}, {0: RationalMatrix.identity(1)})
        window = cohomology.cohomology(c, 0, 1)
        self.assertIsNone(window.class_coordinates(0, (Fraction(1),)))


class InducedMapTest(unittest.TestCase):
    def test_scaled_identity_is_isomorphism(self):
        c = _zero_complex({0: 1, 1: 1, 2: 1, 3: 1})
        window = cohomology.cohomology(c, 0, 2)
        induced = cohomology.induced_map(window, window, _identity_map(2))
        self.assertTrue(induced.isomorphism)
        self.assertEqual(induced.matrices[1].to_dense(), [[2]])

    def test_zero_map_has_full_kernel(self):
        c = _zero_complex({0: 1, 1: 1, 2: 1, 3: 1})
        window = cohomology.cohomology(c, 0, 2)
        induced = cohomology.induced_map(window, window, _identity_map(0))
        self.assertFalse(induced.injective)
        self.assertFalse(induced.is_surjective(0))
        self.assertEqual(induced.kernel_cocycles(1), [(Fraction(1),)])

    def test_non_chain_map_raises(self):
        source = ExplicitComplex(
            {0: 1, 1: 1, 2: 1, 3: 1}, {0: RationalMatrix.identity(1)}
        )
        target = _zero_complex({0: 1, 1: 1, 2: 1, 3: 1})
        with self.assertRaises(cohomology.ChainMapError):
            cohomology.induced_map(
                cohomology.cohomology(source, 0, 2),
                cohomology.cohomology(target, 0, 2),
                _identity_map(),
            )

    def test_windows_must_agree(self):
        c = _zero_complex({0: 1, 1: 1, 2: 1, 3: 1})
        with self.assertRaisesRegex(ValueError, "Windows differ"):
            cohomology.induced_map(
                cohomology.cohomology(c, 0, 1),
                cohomology.cohomology(c, 0, 2),
                _identity_map(),
            )
