"""Tests for `kscat.linalg`.

Copyright (c) The kscat authors
"""

import unittest
from fractions import Fraction

import numpy as onp
import sympy
from parameterized import parameterized

from kscat import linalg
from kscat.linalg import RationalMatrix


def _random_matrix(rng, max_size=40):
    rows, cols = (int(s) for s in rng.integers(1, max_size + 1, size=2))
    if rng.random() < 0.5:
        # Low-rank product of two integer matrices.
        inner = int(rng.integers(1, min(rows, cols) + 1))
        left = rng.integers(-2, 3, size=(rows, inner))
        right = rng.integers(-2, 3, size=(inner, cols))
        dense = (left @ right).tolist()
        values = [[Fraction(int(v)) for v in row] for row in dense]
    else:
        mask = rng.random((rows, cols)) < 0.3
        numerators = rng.integers(-5, 6, size=(rows, cols))
        denominators = rng.integers(1, 4, size=(rows, cols))
        values = [
            [
                Fraction(int(n), int(d)) if keep else Fraction(0)
                for n, d, keep in zip(nrow, drow, krow)
            ]
            for nrow, drow, krow in zip(numerators, denominators, mask)
        ]
    return RationalMatrix.from_dense(values)


def _sympy(matrix):
    return sympy.Matrix(
        [[sympy.Rational(v.numerator, v.denominator) for v in row] for row in matrix.to_dense()]
    )


class RationalMatrixTest(unittest.TestCase):
    def test_zero_entries_are_dropped(self):
        m = RationalMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(1, 2)})
        self.assertEqual(m.entries, {(1, 1): Fraction(1, 2)})

    def test_entry_outside_shape_raises(self):
        with self.assertRaisesRegex(ValueError, "outside"):
            RationalMatrix(2, 2, {(2, 0): 1})

    def test_product_matches_dense(self):
        a = RationalMatrix.from_dense([[1, 2], [0, Fraction(1, 3)], [4, 0]])
        b = RationalMatrix.from_dense([[1, 0, 2], [3, 1, 0]])
        expected = [[7, 2, 2], [1, Fraction(1, 3), 0], [4, 0, 8]]
        self.assertEqual((a @ b).to_dense(), expected)

    def test_transpose_and_columns(self):
        a = RationalMatrix.from_dense([[1, 2, 3], [4, 5, 6]])
        self.assertEqual(a.transpose().to_dense(), [[1, 4], [2, 5], [3, 6]])
        self.assertEqual(a.column(1), (Fraction(2), Fraction(5)))
        self.assertEqual(RationalMatrix.from_columns(a.columns(), 2), a)

    def test_stacking(self):
        a = RationalMatrix.identity(2)
        self.assertEqual(linalg.vstack(a, a).shape, (4, 2))
        self.assertEqual(linalg.hstack(a, a).to_dense(), [[1, 0, 1, 0], [0, 1, 0, 1]])
        with self.assertRaisesRegex(ValueError, "Cannot stack"):
            linalg.vstack(a, RationalMatrix.zeros(1, 3))

    def test_apply_checks_length(self):
        with self.assertRaisesRegex(ValueError, "does not match"):
            RationalMatrix.identity(2).apply((1, 2, 3))


class EchelonTest(unittest.TestCase):
    def test_pivots_equal_common_denominator(self):
        m = RationalMatrix.from_dense([[2, 4, 1], [1, 3, 0], [3, 7, 1]])
        echelon = linalg.echelon_form(m)
        self.assertEqual(echelon.rank, 2)
        for row, pivot in zip(echelon.rows, echelon.pivots):
            self.assertEqual(row[pivot], echelon.denominator)
            for other in echelon.pivots:
                if other != pivot:
                    self.assertEqual(row.get(other, 0), 0)

    def test_empty_matrix(self):
        self.assertEqual(linalg.rank(RationalMatrix.zeros(0, 3)), 0)
        self.assertEqual(len(linalg.kernel_basis(RationalMatrix.zeros(0, 3))), 3)
        self.assertEqual(linalg.kernel_basis(RationalMatrix.zeros(3, 0)), [])

    def test_random_matrices_match_sympy(self):
        rng = onp.random.default_rng(0)
        for trial in range(500):
            m = _random_matrix(rng)
            with self.subTest(trial=trial, shape=m.shape):
                expected_rank = _sympy(m).rank()
                self.assertEqual(linalg.rank(m), expected_rank)
                kernel = linalg.kernel_basis(m)
                self.assertEqual(len(kernel), m.cols - expected_rank)
                for x in kernel:
                    self.assertFalse(any(m.apply(x)))
                image = linalg.image_basis(m)
                self.assertEqual(len(image), expected_rank)

    def test_kernel_matches_sympy_nullspace_span(self):
        rng = onp.random.default_rng(1)
        for trial in range(20):
            m = _random_matrix(rng, max_size=12)
            with self.subTest(trial=trial):
                kernel = linalg.kernel_basis(m)
                theirs = _sympy(m).nullspace()
                self.assertEqual(len(kernel), len(theirs))
                if not kernel:
                    continue
                ours = sympy.Matrix(
                    [[sympy.Rational(v.numerator, v.denominator) for v in x] for x in kernel]
                ).T
                joined = sympy.Matrix.hstack(ours, *theirs)
                self.assertEqual(joined.rank(), len(kernel))


class PreimageTest(unittest.TestCase):
    def test_solution_satisfies_system(self):
        m = RationalMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
        target = (Fraction(2), Fraction(3))
        for reverse in (False, True):
            with self.subTest(reverse=reverse):
                result = linalg.preimage(m, target, reverse=reverse)
                self.assertTrue(result.solvable)
                self.assertEqual(m.apply(result.solution), target)

    def test_pivot_orders_give_different_solutions(self):
        m = RationalMatrix.from_dense([[1, 1]])
        first = linalg.preimage(m, (1,)).solution
        second = linalg.preimage(m, (1,), reverse=True).solution
        self.assertEqual(first, (1, 0))
        self.assertEqual(second, (0, 1))

    @parameterized.expand([(0,), (1,), (2,), (3,)])
    def test_inconsistent_system_has_certificate(self, seed):
        rng = onp.random.default_rng(seed)
        left = rng.integers(-2, 3, size=(6, 2))
        right = rng.integers(-2, 3, size=(2, 5))
        m = RationalMatrix.from_dense((left @ right).tolist())
        # A target outside a column space of rank at most two.
        target = tuple(Fraction(int(v)) for v in rng.integers(-3, 4, size=6))
        result = linalg.preimage(m, target)
        if result.solvable:
            self.assertEqual(m.apply(result.solution), target)
        else:
            y = result.certificate
            self.assertFalse(any(m.transpose().apply(y)))
            self.assertNotEqual(linalg.dot(y, target), 0)

    def test_certificate_for_known_inconsistency(self):
        m = RationalMatrix.from_dense([[1, 0], [1, 0]])
        result = linalg.preimage(m, (1, 2))
        self.assertFalse(result.solvable)
        self.assertFalse(any(m.transpose().apply(result.certificate)))
        self.assertNotEqual(linalg.dot(result.certificate, (1, 2)), 0)

    def test_is_in_span(self):
        vectors = [(Fraction(1), Fraction(0), Fraction(1))]
        self.assertTrue(linalg.is_in_span(vectors, (2, 0, 2)))
        self.assertFalse(linalg.is_in_span(vectors, (1, 1, 0)))
