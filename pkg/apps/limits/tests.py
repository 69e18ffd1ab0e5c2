import math

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, tag
from rest_framework.test import APISimpleTestCase

from apps.exact.formulas import exact_offdiag_marginal
from apps.mc.estimators import scaled_index
from apps.permcore.schema import ShuffleKind

from .analysis import (
    ExpectationKind, density_extrema, density_integral, expectation_extrema, expected_position,
    expected_position_quadrature, global_density_extrema, scan_extrema, tv_distance, tv_lower_bound,
)
from .densities import (
    JUMP, DensityKind, DensityQuery, Side, density_grid, density_values, kernel, limit_density,
)

F_CARD, F_POS, H_CARD, H_POS = DensityKind.F_CARD, DensityKind.F_POS, DensityKind.H_CARD, DensityKind.H_POS
LOG_2 = math.log(2.0)


def density(which, param, var, side=Side.AUTO):
    return limit_density(DensityQuery(which, param, var, side))


class LimitDensityTests(SimpleTestCase):
    def test_one_sided_values_at_the_jump(self):
        self.assertAlmostEqual(density(F_CARD, 0.5, 0.5, Side.RIGHT), 2 * math.exp(-0.5), places=14)
        self.assertAlmostEqual(density(F_CARD, 0.5, 0.5, Side.LEFT), 2 * math.exp(-0.5) - JUMP, places=14)
        self.assertAlmostEqual(density(F_CARD, 0.5, 0.5, Side.RIGHT), 1.21306, places=5)
        self.assertAlmostEqual(density(F_CARD, 0.5, 0.5, Side.LEFT), 0.84518, places=5)

    def test_branches_away_from_the_jump(self):
        b, x = 0.3, 0.8
        self.assertAlmostEqual(density(F_CARD, b, x), math.exp(b - 1) + math.exp(-x), places=15)
        self.assertAlmostEqual(density(F_CARD, x, b), math.exp(x - 1) + math.exp(-b) - math.exp(x - b - 1), places=15)
        self.assertAlmostEqual(density(F_POS, b, x), math.exp(x - 1) + math.exp(-b) - math.exp(x - b - 1), places=15)
        self.assertAlmostEqual(density(F_POS, x, b), math.exp(b - 1) + math.exp(-x), places=15)

    def test_position_and_card_kinds_mirror(self):
        self.assertEqual(density(F_POS, 0.3, 0.7), density(F_CARD, 0.7, 0.3))

    def test_kernel_argument_order(self):
        for param, var in ((0.3, 0.8), (0.8, 0.3)):
            for which in (F_CARD, H_POS):
                with self.subTest(which=which.value, param=param):
                    self.assertEqual(density(which, param, var), float(kernel(param, var, var < param)))
            for which in (F_POS, H_CARD):
                with self.subTest(which=which.value, param=param):
                    self.assertEqual(density(which, param, var), float(kernel(var, param, var > param)))

    def test_auto_side_is_rejected_at_the_jump(self):
        with self.assertRaises(ValidationError):
            DensityQuery(F_CARD, 0.4, 0.4)
        with self.assertRaises(ValidationError):
            density_values(F_POS, 0.5, [0.25, 0.5])

    def test_domain(self):
        with self.assertRaises(ValidationError):
            DensityQuery(F_CARD, 1.2, 0.4)
        with self.assertRaises(ValidationError):
            DensityQuery('g_card', 0.2, 0.4)
        with self.assertRaises(ValidationError):
            DensityQuery(F_CARD, 0.2, 0.4, 'middle')

    def test_symmetry_identities(self):
        grid = np.linspace(0.0, 1.0, 101)
        for s in grid:
            t = grid[grid != s]
            f_card_st = density_values(F_CARD, s, t)
            with self.subTest(s=float(s)):
                np.testing.assert_allclose(density_values(H_CARD, s, t), [density(F_CARD, v, s) for v in t], rtol=1e-15, atol=0)
                np.testing.assert_allclose(density_values(H_POS, s, t), [density(F_POS, v, s) for v in t], rtol=1e-15, atol=0)
                np.testing.assert_allclose(density_values(F_POS, s, t), [density(F_CARD, v, s) for v in t], rtol=1e-15, atol=0)
                np.testing.assert_array_equal(density_values(H_POS, s, t), f_card_st)

    def test_jump_size(self):
        for which in DensityKind:
            for s in np.linspace(0.0, 1.0, 11):
                left = density(which, s, s, Side.LEFT)
                right = density(which, s, s, Side.RIGHT)
                with self.subTest(which=which.value, s=float(s)):
                    self.assertAlmostEqual(abs(right - left), JUMP, places=15)

    def test_strictly_positive(self):
        t = np.linspace(0.0, 1.0, 201)
        for which in DensityKind:
            for s in np.linspace(0.0, 1.0, 21):
                values = density_values(which, s, t, Side.LEFT)
                self.assertTrue(np.all(values > 0.7))

    def test_grid(self):
        frame = density_grid(F_CARD, 0.25, 1000)
        self.assertEqual(list(frame.columns), ['t', 'density'])
        self.assertEqual(len(frame), 1001)
        self.assertEqual(frame['t'].iloc[0], 0.0)
        self.assertEqual(frame['t'].iloc[-1], 1.0)
        with self.assertRaises(ValidationError):
            density_grid(F_CARD, 0.25, 0)


class IntegralTests(SimpleTestCase):
    def test_normalization(self):
        for which in DensityKind:
            for param in np.linspace(0.0, 1.0, 21):
                with self.subTest(which=which.value, param=float(param)):
                    self.assertAlmostEqual(density_integral(which, param), 1.0, delta=1e-9)

    def test_total_mass_is_one(self):
        self.assertAlmostEqual(density_integral(F_CARD, 0.5), 1.0, delta=1e-9)
        self.assertAlmostEqual(density_integral(F_CARD, 0.0), 1.0, delta=1e-9)
        self.assertAlmostEqual(density_integral(F_POS, 1.0), 1.0, delta=1e-9)


class ExpectationTests(SimpleTestCase):
    def test_closed_form_matches_quadrature(self):
        for which in ExpectationKind:
            for s in np.linspace(0.0, 1.0, 21):
                with self.subTest(which=which.value, s=float(s)):
                    self.assertAlmostEqual(expected_position(which, s), expected_position_quadrature(which, s),
                                           delta=1e-8)

    def test_paired_curves_coincide(self):
        for s in np.linspace(0.0, 1.0, 11):
            self.assertEqual(expected_position('E_pos_card', s), expected_position('E_card_pos', s))
            self.assertEqual(expected_position('E_card_card', s), expected_position('E_pos_pos', s))

    def test_position_under_card_kind(self):
        self.assertAlmostEqual(expected_position('E_pos_card', LOG_2), 0.519, delta=1e-3)
        self.assertAlmostEqual(expected_position('E_pos_card', 0.0), 0.448, delta=1e-3)
        extrema = expectation_extrema('E_pos_card')
        self.assertAlmostEqual(extrema.argmax, LOG_2, delta=1e-3)
        self.assertAlmostEqual(extrema.max_value, 0.519, delta=1e-3)
        self.assertEqual(extrema.argmin, 0.0)
        self.assertAlmostEqual(extrema.min_value, 0.448, delta=1e-3)

    def test_card_under_card_kind(self):
        self.assertAlmostEqual(expected_position('E_card_card', 1.0), 0.552, delta=1e-3)
        self.assertAlmostEqual(expected_position('E_card_card', 1 - LOG_2), 0.481, delta=1e-3)
        extrema = expectation_extrema(ExpectationKind.E_CARD_CARD)
        self.assertEqual(extrema.argmax, 1.0)
        self.assertAlmostEqual(extrema.max_value, 0.552, delta=1e-3)
        self.assertAlmostEqual(extrema.argmin, 1 - LOG_2, delta=1e-3)
        self.assertAlmostEqual(extrema.min_value, 0.481, delta=1e-3)

    def test_unknown_curve(self):
        with self.assertRaises(ValidationError):
            expected_position('E_pos', 0.5)


class ExtremaTests(SimpleTestCase):
    def test_jump_is_the_infimum(self):
        report = density_extrema(F_CARD, 0.5)
        self.assertAlmostEqual(report.sup_value, 2 * math.exp(-0.5), places=14)
        self.assertIn('right', report.sup_approach)
        self.assertAlmostEqual(report.inf_value, 2 * math.exp(-0.5) - JUMP, places=14)
        self.assertIn('discontinuity from the left', report.inf_location)

    def test_endpoint_is_the_minimum(self):
        report = density_extrema(F_CARD, 0.1)
        self.assertEqual(report.inf_location, 'var = 1')
        self.assertAlmostEqual(report.inf_value, math.exp(-0.9) + JUMP, places=14)
        self.assertLess(report.inf_value, report.jump_inf)

        report = density_extrema(F_POS, 0.9)
        self.assertEqual(report.inf_location, 'var = 0')
        self.assertIn('left', report.sup_approach)

    def test_closed_form_matches_scan(self):
        for which in DensityKind:
            for param in np.linspace(0.0, 1.0, 41):
                report = density_extrema(which, param)
                with self.subTest(which=which.value, param=float(param)):
                    self.assertAlmostEqual(report.scanned_sup, report.sup_value, delta=1e-6)
                    self.assertAlmostEqual(report.scanned_inf, report.inf_value, delta=1e-6)
                    self.assertLessEqual(report.inf_value, report.sup_value)
                    self.assertLessEqual(report.sup_value, 1 + JUMP + 1e-15)

    def test_scan_includes_both_limits(self):
        sup, inf = scan_extrema(F_CARD, 0.5, points=3)
        self.assertAlmostEqual(sup, 2 * math.exp(-0.5), places=14)
        self.assertAlmostEqual(inf, 2 * math.exp(-0.5) - JUMP, places=14)

    def test_global_constants(self):
        extremes = global_density_extrema()
        self.assertAlmostEqual(extremes.max_sup, 1.368, delta=1e-3)
        self.assertAlmostEqual(extremes.max_sup, 1 + JUMP, places=12)
        self.assertAlmostEqual(extremes.min_jump_inf, 0.845, delta=1e-3)
        self.assertAlmostEqual(extremes.min_jump_inf, 2 * math.exp(-0.5) - JUMP, places=12)
        # below the jump at the ends of the parameter range
        self.assertAlmostEqual(extremes.min_inf, 2 * JUMP, places=12)


class TotalVariationTests(SimpleTestCase):
    def test_uniform_at_the_top_card(self):
        self.assertAlmostEqual(tv_distance(1.0), 0.0, places=12)

    def test_value_at_zero(self):
        expected = JUMP + (1 - JUMP) * math.log(1 - JUMP)
        self.assertAlmostEqual(tv_distance(0.0), expected, places=10)

    def test_within_pointwise_range(self):
        for b in np.linspace(0.0, 1.0, 11):
            report = density_extrema(F_CARD, b)
            value = tv_distance(b)
            self.assertGreaterEqual(value, 0.0)
            self.assertLessEqual(value, 0.5 * (report.sup_value - report.inf_value) + 1e-12)

    def test_lower_bound(self):
        value, argmax = tv_lower_bound()
        self.assertAlmostEqual(value, 0.08, delta=0.005)
        self.assertAlmostEqual(value, JUMP + (1 - JUMP) * math.log(1 - JUMP), places=8)
        self.assertEqual(round(argmax, 3), round(tv_lower_bound(grid=2001)[1], 3))

    def test_grid_size(self):
        with self.assertRaises(ValidationError):
            tv_lower_bound(grid=2)


class ConvergenceTests(SimpleTestCase):
    def _error(self, kind, b, x, n):
        which = F_CARD if kind is ShuffleKind.CARD_TRANSPOSITION else F_POS
        finite = n * exact_offdiag_marginal(kind, n, scaled_index(b, n), scaled_index(x, n))
        return abs(finite - density(which, b, x))

    def test_exact_marginals_approach_the_densities(self):
        grid = [round(0.1 * i, 1) for i in range(1, 10)]
        for kind in (ShuffleKind.CARD_TRANSPOSITION, ShuffleKind.POSITION_TRANSPOSITION):
            for b in grid:
                for x in grid:
                    if abs(x - b) < 0.05:
                        continue
                    errors = [self._error(kind, b, x, n) for n in (250, 500, 1000, 2000)]
                    with self.subTest(kind=kind.value, b=b, x=x):
                        self.assertLessEqual(errors[-1], 0.05)
                        self.assertTrue(all(later <= earlier for earlier, later in zip(errors, errors[1:])), errors)

    def test_most_likely_position(self):
        n = 200
        for j in (40, 100, 160):
            card_row = [exact_offdiag_marginal(ShuffleKind.CARD_TRANSPOSITION, n, j, a) if a != j else 0.0
                        for a in range(1, n + 1)]
            pos_row = [exact_offdiag_marginal(ShuffleKind.POSITION_TRANSPOSITION, n, j, a) if a != j else 0.0
                       for a in range(1, n + 1)]
            with self.subTest(j=j):
                self.assertGreater(int(np.argmax(card_row)) + 1, j)
                self.assertLess(int(np.argmax(pos_row)) + 1, j)

    @tag('slow')
    def test_large_deck(self):
        self.assertLess(self._error(ShuffleKind.POSITION_TRANSPOSITION, 0.75, 0.25, 4000),
                        self._error(ShuffleKind.POSITION_TRANSPOSITION, 0.75, 0.25, 2000))


class LimitsApiTests(APISimpleTestCase):
    def test_density(self):
        response = self.client.get('/api/limits/density/', {'which': 'f_card', 'param': 0.25, 'grid': 4})
        self.assertEqual(response.status_code, 200)
        body = response.json()
        self.assertEqual(body['t'], [0.0, 0.25, 0.5, 0.75, 1.0])
        self.assertAlmostEqual(body['density'][1], math.exp(-0.75) + math.exp(-0.25), places=14)

    def test_expectation(self):
        response = self.client.get('/api/limits/expectation/', {'which': 'E_pos_card', 's': LOG_2})
        self.assertEqual(response.status_code, 200)
        self.assertAlmostEqual(response.json()['value'], 0.519, delta=1e-3)

    def test_extrema(self):
        response = self.client.get('/api/limits/extrema/', {'which': 'f_card', 'param': 0.1})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()['inf_location'], 'var = 1')

    def test_bad_parameter(self):
        response = self.client.get('/api/limits/density/', {'which': 'f_card', 'param': 1.5})
        self.assertEqual(response.status_code, 400)
