"""Tests for `kscat.modules`.

Copyright (c) The kscat authors
"""

import unittest

import numpy as onp
from parameterized import parameterized

from importlib import import_module

cohomology = import_module("kscat.cohomology")
from kscat import corpus, modules, sullivan
from kscat.modules import ModuleGenerator


def _algebra():
    return sullivan.ks_complex([("z", 2), ("w", 3)], {"w": "z^2"})


def _truncated(algebra):
    # The quotient by base wordlength two, on which dw acts as zero.
    return modules.dg_module(
        algebra, [ModuleGenerator("e0", 0, 1)], counted=["z"], label="Q"
    )


def _unit_map():
    algebra = _algebra()
    P = modules.free_module(algebra)
    Q = _truncated(algebra)
    return modules.morphism(P, Q, {"e": {"e0": "1"}})


def _two_cell(algebra):
    return modules.dg_module(algebra, [("e", 0), ("f", 1)], {"f": {"e": "z"}})


def _odd_two_cell():
    # The second cell is attached along an odd coefficient.
    algebra = sullivan.ks_complex([("z", 2), ("w", 3)], {})
    return modules.dg_module(algebra, [("e", 0), ("f", 2)], {"f": {"e": "w"}})


class DGModuleTest(unittest.TestCase):
    def test_caps_truncate_action(self):
        Q = _truncated(_algebra())
        z = Q.algebra.algebra.parse("z")
        e0 = Q.generator("e0")
        self.assertFalse(Q.act(z, e0).is_zero())
        self.assertTrue(Q.act(z * z, e0).is_zero())
        self.assertTrue(Q.d(Q.act(Q.algebra.algebra.parse("w"), e0)).is_zero())

    def test_basis_dimensions(self):
        Q = _truncated(_algebra())
        self.assertEqual([len(Q.basis(k)) for k in range(6)], [1, 0, 1, 1, 0, 1])

    def test_leibniz_on_module(self):
        M = _two_cell(_algebra())
        x = M.act(M.algebra.algebra.parse("w"), M.generator("f"))
        self.assertEqual(M.format(M.d(x)), "(-z*w)*e + (z^2)*f")

    def test_d_squared_nonzero_raises(self):
        algebra = sullivan.ks_complex([("b", 2)], {})
        with self.assertRaisesRegex(modules.ModuleError, "is not zero"):
            modules.dg_module(
                algebra,
                [("e", 0), ("f", 1), ("g", 2)],
                {"f": {"e": "b"}, "g": {"f": "b"}},
            )

    def test_inhomogeneous_differential_raises(self):
        with self.assertRaisesRegex(modules.ModuleError, "not homogeneous"):
            modules.dg_module(_algebra(), [("e", 0), ("f", 1)], {"f": {"e": "1"}})

    def test_unknown_generator_raises(self):
        with self.assertRaisesRegex(modules.ModuleError, "Unknown module generator"):
            modules.dg_module(_algebra(), [("e", 0)], {"e": {"x": "z"}})

    def test_semifree_stages(self):
        self.assertEqual(_two_cell(_algebra()).semifree_stages(), ((0,), (1,)))
        self.assertIsNone(_truncated(_algebra()).semifree_stages())


class MorphismTest(unittest.TestCase):
    def test_chain_map(self):
        self.assertTrue(modules.check_morphism(_unit_map()).verdict)

    def test_not_a_chain_map(self):
        algebra = _algebra()
        P = _two_cell(algebra)
        f = modules.morphism(P, modules.free_module(algebra), {"e": {"e": "1"}})
        report = modules.check_morphism(f)
        self.assertFalse(report.verdict)
        with self.assertRaisesRegex(modules.ModuleError, "Not a chain map"):
            modules.mapping_cylinder(f)

    def test_null_homotopic_morphism(self):
        algebra = _algebra()
        P = _two_cell(algebra)
        Q = modules.free_module(algebra, [("g", -1)])
        h = modules.morphism(P, Q, {"e": {"g": "1"}}, shift=-1)
        n = modules.null_homotopic_morphism(h)
        self.assertEqual(n.shift, 0)
        self.assertEqual(Q.format(n.images[1]), "(z)*g")
        self.assertTrue(modules.check_morphism(n).verdict)
        zero = modules.zero_morphism(P, Q)
        self.assertTrue(modules.check_homotopy(n, zero, h).verdict)

    def test_compose_with_identity(self):
        f = _unit_map()
        g = modules.compose(modules.identity(f.target), f)
        self.assertEqual(g.images, f.images)


class CylinderTest(unittest.TestCase):
    def test_contract(self):
        cylinder = modules.mapping_cylinder(_unit_map())
        self.assertEqual(cylinder.total.names, ("e@P", "e0@Q", "se@P"))
        self.assertEqual(
            cylinder.verify((0, 5)),
            {
                "chain_map_F": True,
                "chain_map_p": True,
                "factorization": True,
                "F_injective": True,
                "p_surjective": True,
                "p_quasi_isomorphism": True,
            },
        )

    def test_suspended_differential(self):
        cylinder = modules.mapping_cylinder(_unit_map())
        total = cylinder.total
        self.assertEqual(total.format(total.d(total.generator("se@P"))), "e@P + e0@Q")

    def test_suspension_sign_with_odd_coefficient(self):
        cylinder = modules.mapping_cylinder(modules.identity(_odd_two_cell()))
        total = cylinder.total
        self.assertEqual(
            total.names, ("e@P", "f@P", "e@Q", "f@Q", "se@P", "sf@P")
        )
        self.assertEqual(
            total.format(total.d(total.generator("sf@P"))), "f@P + f@Q + (w)*se@P"
        )
        self.assertTrue(all(cylinder.verify((0, 5)).values()))

    def test_shifted_map_raises(self):
        algebra = _algebra()
        P = modules.free_module(algebra)
        f = modules.zero_morphism(P, P, shift=2)
        with self.assertRaisesRegex(modules.ModuleError, "degree-zero"):
            modules.mapping_cylinder(f)


class StrictifyTest(unittest.TestCase):
    def test_identity_with_zero_homotopy(self):
        f = _unit_map()
        g = modules.identity(f.target)
        theta = modules.zero_morphism(f.source, f.target, shift=-1)
        homotopy = modules.Homotopy(modules.compose(g, f), f, theta)
        result = modules.strictify(f, g, homotopy)
        self.assertTrue(result.report.verdict)
        factor = modules.compose(result.G, result.cylinder.inclusion)
        self.assertEqual(factor.images, f.images)

    def test_nonzero_homotopy(self):
        P = _odd_two_cell()
        R = modules.free_module(P.algebra, [("r", -1), ("s", 1)])
        f = modules.identity(P)
        g = modules.zero_morphism(P, R)
        theta = modules.morphism(
            P, R, {"e": {"r": "1"}, "f": {"s": "1", "r": "z"}}, shift=-1
        )
        h = modules.null_homotopic_morphism(theta).scale(-1)
        self.assertEqual(R.format(h.images[1]), "(w)*r")
        result = modules.strictify(f, g, modules.Homotopy(modules.compose(g, f), h, theta))
        self.assertTrue(result.report.verdict)
        factor = modules.compose(result.G, result.cylinder.inclusion)
        self.assertEqual(factor.images, h.images)
        # G is minus theta on the suspended generators.
        self.assertEqual(result.G.images[4:], tuple(-x for x in theta.images))

    def test_wrong_homotopy_start_raises(self):
        f = _unit_map()
        g = modules.identity(f.target)
        theta = modules.zero_morphism(f.source, f.target, shift=-1)
        zero = modules.zero_morphism(f.source, f.target)
        with self.assertRaisesRegex(modules.ModuleError, "does not start"):
            modules.strictify(f, g, modules.Homotopy(zero, zero, theta))

    def test_retraction_shares_cylinder(self):
        f = _unit_map()
        g = modules.identity(f.target)
        theta = modules.zero_morphism(f.source, f.target, shift=-1)
        homotopy = modules.Homotopy(modules.compose(g, f), f, theta)
        first, second = modules.strictify_retraction(f, g, homotopy, g, homotopy)
        self.assertIs(first.cylinder, second.cylinder)
        self.assertTrue(first.report.verdict and second.report.verdict)


class LiftTest(unittest.TestCase):
    def test_two_lifts_are_homotopic(self):
        f = _unit_map()
        cylinder = modules.mapping_cylinder(f)
        p = cylinder.projection
        first = modules.lift_through_surjection(f, p, (0, 5))
        second = modules.lift_through_surjection(f, p, (0, 5), reverse_pivots=True)
        self.assertTrue(first.report.verdict)
        self.assertTrue(second.report.verdict)
        self.assertNotEqual(first.psi.images, second.psi.images)
        homotopy = modules.find_lift_homotopy(first.psi, second.psi, p, (0, 5))
        self.assertTrue(homotopy.verify().verdict)
        self.assertTrue(modules.compose(p, homotopy.theta).is_zero())

    def test_second_stage_over_odd_coefficient(self):
        phi = modules.identity(_odd_two_cell())
        p = modules.mapping_cylinder(phi).projection
        first = modules.lift_through_surjection(phi, p, (0, 5))
        second = modules.lift_through_surjection(phi, p, (0, 5), reverse_pivots=True)
        self.assertEqual(first.order, ("e", "f"))
        self.assertTrue(first.report.verdict)
        self.assertTrue(second.report.verdict)
        self.assertEqual(modules.compose(p, first.psi).images, phi.images)
        homotopy = modules.find_lift_homotopy(first.psi, second.psi, p, (0, 5))
        self.assertTrue(homotopy.verify().verdict)
        self.assertTrue(modules.compose(p, homotopy.theta).is_zero())

    def test_generator_outside_window_raises(self):
        f = _unit_map()
        p = modules.mapping_cylinder(f).projection
        with self.assertRaises(modules.LiftError):
            modules.lift_through_surjection(f, p, (1, 4))

    def test_non_surjective_map_raises(self):
        algebra = _algebra()
        P = modules.free_module(algebra)
        Q = _truncated(algebra)
        phi = modules.morphism(P, Q, {"e": {"e0": "1"}})
        zero = modules.zero_morphism(P, Q)
        with self.assertRaisesRegex(modules.LiftError, "not surjective"):
            modules.lift_through_surjection(phi, zero, (0, 4))


class ResolutionTest(unittest.TestCase):
    @parameterized.expand([((0, 4), (0, 3)), ((0, 10), (0, 9))])
    def test_truncated_polynomial(self, window, certified):
        algebra = sullivan.ks_complex([("z", 2)], {})
        M = modules.dg_module(algebra, [ModuleGenerator("e", 0, 1)])
        resolution = modules.surjective_resolution(M, window)
        self.assertEqual(
            [g.degree for g in resolution.module.generators], [0, 2, 1, 3]
        )
        self.assertEqual(resolution.stages, (0, 0, 1, 1))
        self.assertEqual(resolution.certified, certified)
        self.assertTrue(resolution.surjective)
        self.assertTrue(resolution.quasi_isomorphism)
        self.assertFalse(resolution.partial)
        self.assertIsNotNone(resolution.module.semifree_stages())

    def test_acyclic_target(self):
        algebra = sullivan.ks_complex([("z", 2)], {})
        M = modules.dg_module(algebra, [("a", 1), ("b", 2)], {"a": {"b": "1"}})
        resolution = modules.surjective_resolution(M, (0, 6))
        self.assertEqual(resolution.certified, (0, 5))
        self.assertTrue(resolution.surjective)
        self.assertTrue(resolution.quasi_isomorphism)
        self.assertFalse(resolution.partial)
        stages = {
            g.name: s for g, s in zip(resolution.module.generators, resolution.stages)
        }
        self.assertEqual(
            {n: s for n, s in stages.items() if n.startswith("c")},
            {"c2_0": 0, "c4_0": 0, "c6_0": 0},
        )
        killers = [s for n, s in stages.items() if n.startswith("u")]
        self.assertEqual(len(killers), 3)
        self.assertEqual(set(killers), {1})
        window = cohomology.cohomology(resolution.module.complex(6), 0, 5)
        self.assertEqual(set(window.dimensions().values()), {0})

    def test_contractible_pairs_for_non_cocycles(self):
        algebra = _algebra()
        M = modules.free_module(algebra)
        resolution = modules.surjective_resolution(M, (0, 5))
        self.assertTrue(resolution.surjective)
        self.assertTrue(resolution.quasi_isomorphism)
        names = [g.name for g in resolution.module.generators]
        self.assertIn("a3_0", names)
        self.assertIn("b4_0", names)


class RandomFixtureTest(unittest.TestCase):
    def _fixture(self, seed):
        # Either the projection of the free module onto a random wordlength
        # truncation, or a two-cell module mapped to itself. Both are scaled by a
        # random nonzero integer.
        rng = onp.random.default_rng(seed)
        algebra = corpus.spec_to_complex(corpus.corpus_generate(seed))
        scalar = int(rng.integers(1, 6)) * int(rng.choice([-1, 1]))
        if rng.integers(2):
            # Attach the second cell along a lowest-stage generator, which is closed.
            name = sullivan.check_sullivan(algebra).stages[0][0]
            x = next(g for g in algebra.generators if g.name == name)
            P = modules.dg_module(
                algebra, [("e", 0), ("f", x.degree - 1)], {"f": {"e": x.name}}
            )
            return modules.identity(P).scale(scalar)
        P = modules.free_module(algebra)
        Q = modules.dg_module(algebra, [ModuleGenerator("e0", 0, int(rng.integers(1, 4)))])
        return modules.ModuleMorphism(P, Q, (Q.generator("e0").scale(scalar),))

    def test_cylinder_and_strictify(self):
        for seed in range(50):
            with self.subTest(seed=seed):
                f = self._fixture(seed)
                cylinder = modules.mapping_cylinder(f)
                self.assertTrue(all(cylinder.verify((0, 5)).values()))
                g = modules.identity(f.target)
                theta = modules.zero_morphism(f.source, f.target, shift=-1)
                homotopy = modules.Homotopy(modules.compose(g, f), f, theta)
                result = modules.strictify(f, g, homotopy, cylinder)
                self.assertTrue(result.report.verdict)

    def test_lifts_are_homotopic(self):
        for seed in range(50):
            with self.subTest(seed=seed):
                f = self._fixture(seed)
                p = modules.mapping_cylinder(f).projection
                first = modules.lift_through_surjection(f, p, (0, 5))
                second = modules.lift_through_surjection(f, p, (0, 5), reverse_pivots=True)
                self.assertEqual(modules.compose(p, first.psi).images, f.images)
                self.assertEqual(modules.compose(p, second.psi).images, f.images)
                homotopy = modules.find_lift_homotopy(first.psi, second.psi, p, (0, 5))
                self.assertTrue(homotopy.verify().verdict)
