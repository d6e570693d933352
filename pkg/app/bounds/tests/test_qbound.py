"""
Tests for the exact Q ledgers
"""
from fractions import Fraction

from django.test import SimpleTestCase

from bounds.exceptions import PreconditionError
from bounds.grids import default_grid
from bounds.qbound import (HALF, UNIT, c_value, decay_profile, fpr,
                           manning_fix, q_term, qcheck, qcheck_c1,
                           qcheck_c3, qcheck_psl27, qcheck_psl29, regime_c1,
                           regime_c3)
from groups.unitary import psu_order


class PrimitiveTests(SimpleTestCase):
    """Tests for the building blocks"""

    def test_manning_fix(self):
        """Test integral sums stay ints and others become fractions"""
        self.assertEqual(manning_fix([10, 6], [4, 4]), 4)
        self.assertIsInstance(manning_fix([10, 6], [4, 4]), int)
        self.assertEqual(manning_fix([3], [2]), Fraction(3, 2))

    def test_manning_fix_rejects_bad_lists(self):
        """Test empty, mismatched and zero normalizer lists"""
        with self.assertRaises(PreconditionError):
            manning_fix([], [])
        with self.assertRaises(PreconditionError):
            manning_fix([1, 2], [1])
        with self.assertRaises(PreconditionError):
            manning_fix([10], [0])

    def test_q_term_and_fpr(self):
        """Test the exact term and fixed point ratio"""
        self.assertEqual(q_term(120, 1050, 2, 30, 8),
                         Fraction(120, 1050) * 30 / 8)
        self.assertEqual(fpr(3, 12), Fraction(1, 4))
        with self.assertRaises(PreconditionError):
            fpr(13, 12)
        with self.assertRaises(PreconditionError):
            q_term(0, 1050, 2, 30, 8)

    def test_regimes(self):
        """Test the c value and the regime predicates"""
        self.assertEqual(c_value(2, 2, 3), 1)
        self.assertEqual(c_value(5, 1, 3), 3)
        self.assertTrue(regime_c1(2, 2, 3))
        self.assertFalse(regime_c1(3, 1, 3))
        self.assertTrue(regime_c1(3, 1, 5))
        self.assertTrue(regime_c3(5, 1))
        self.assertFalse(regime_c3(2, 2))


class SubfieldLedgerTests(SimpleTestCase):
    """Tests for the c = 1 and c = 3 ledgers"""

    def test_c1_smallest_point_passes(self):
        """Test q' = 4, e = 3 meets its scaled budgets with Q < 1/2"""
        ledger = qcheck_c1(2, 2, 3)

        self.assertTrue(ledger.verdict)
        self.assertTrue(ledger.budgets_hold)
        self.assertTrue(ledger.passed)
        self.assertLess(ledger.total, HALF)

    def test_c1_budgets_are_strict(self):
        """Test every single-term budget holds strictly at a larger point"""
        ledger = qcheck_c1(3, 1, 5)

        for check in ledger.budget_checks():
            self.assertLess(check.total, check.budget, check.group)
        self.assertTrue(ledger.passed)

    def test_c1_involution_term(self):
        """Test Q(<z2>) is below 1/26 and below its closed-form chain"""
        term = qcheck_c1(3, 1, 5).term('z2')

        self.assertLess(term.each, UNIT)
        self.assertTrue(term.chain_holds)

    def test_c1_preconditions(self):
        """Test excluded parameters raise PreconditionError"""
        for point in ((2, 1, 3), (2, 2, 2), (5, 1, 3), (3, 1, 3)):
            with self.assertRaises(PreconditionError):
                qcheck_c1(*point)

    def test_c3_smallest_point(self):
        """Test q' = 5: Q < 1/2 while the r = 3 group exceeds 3/26"""
        ledger = qcheck_c3(5, 1)
        failing = [check.group for check in ledger.budget_checks()
                   if not check.holds]

        self.assertTrue(ledger.verdict)
        self.assertFalse(ledger.budgets_hold)
        self.assertEqual(failing, ['r=3'])

    def test_c3_preconditions(self):
        """Test q' below 5 or with 3 not dividing q'+1 is refused"""
        with self.assertRaises(PreconditionError):
            qcheck_c3(2, 1)
        with self.assertRaises(PreconditionError):
            qcheck_c3(7, 1)

    def test_c1_decay(self):
        """Test budgeted c = 1 terms decrease as q' grows at e = 5"""
        ladder = [(3, 1, 5), (3, 2, 5), (3, 3, 5)]
        for label in ('z2', 'z0', "z0'", 'f^m', "f'"):
            profile = decay_profile('c1', label, ladder)
            budget = qcheck_c1(3, 1, 5).term(label).budget

            self.assertEqual(profile.settles_at, 0, label)
            self.assertTrue(profile.decreasing_tail, label)
            self.assertTrue(all(value < budget for value in profile.values),
                            label)

    def test_c3_decay(self):
        """Test c = 3 terms decrease along q' = 8, 32, 128"""
        ladder = [(2, 3), (2, 5), (2, 7)]
        for label in ('z0', "z0'", "f'", "zA f'"):
            profile = decay_profile('c3', label, ladder)

            self.assertEqual(profile.settles_at, 0, label)
            self.assertTrue(profile.decreasing_tail, label)
            self.assertEqual(profile.points[0], (2, 3))
        self.assertTrue(all(value < UNIT for value in
                            decay_profile('c3', "z0'", ladder).values))


class PslLedgerTests(SimpleTestCase):
    """Tests for the PSL(2,7) and PSL(2,9) ledgers"""

    def test_psl27_involution_fix(self):
        """Test Fix(<x1>) = 3822 at q = 13"""
        ledger = qcheck_psl27(13)
        omega = Fraction(2 * psu_order(13), 336)

        self.assertEqual(manning_fix([2 * 13 * 168 * 14], [16]), 3822)
        self.assertEqual(ledger.term('x1').value,
                         q_term(336, omega, 2, 3822, 16))

    def test_psl27_points_pass(self):
        """Test q = 13, 17, 19 all certify"""
        for q in (13, 17, 19):
            self.assertTrue(qcheck_psl27(q).passed, q)

    def test_psl29_points_pass(self):
        """Test q = 11, 29 certify and x2 fixes 132 points at q = 11"""
        for q in (11, 29):
            self.assertTrue(qcheck_psl29(q).passed, q)
        self.assertEqual(manning_fix([2 * 11 * 120], [20]), 132)

    def test_psl_congruences(self):
        """Test inadmissible primes are refused"""
        with self.assertRaises(PreconditionError):
            qcheck_psl27(11)
        with self.assertRaises(PreconditionError):
            qcheck_psl29(13)

    def test_dispatch(self):
        """Test qcheck dispatches on the setting"""
        self.assertEqual(qcheck('psl27', (13,)).total,
                         qcheck_psl27(13).total)
        with self.assertRaises(PreconditionError):
            qcheck('bogus', ())

    def test_decay(self):
        """Test Q(<x1>) decreases along increasing q"""
        profile = decay_profile('psl27', 'x1', [(13,), (17,), (19,), (31,)])

        self.assertEqual(profile.settles_at, 0)
        self.assertTrue(profile.decreasing_tail)
        self.assertEqual(len(profile.values), 4)


class GridTests(SimpleTestCase):
    """Tests for the default grids"""

    def test_c1_grid(self):
        """Test the c = 1 grid starts at q' = 4, e = 3"""
        grid = default_grid('c1', 10 ** 5)

        self.assertEqual(grid[0], (2, 2, 3))
        self.assertIn((3, 1, 5), grid)
        self.assertTrue(all(regime_c1(*point) for point in grid))

    def test_c3_grid(self):
        """Test the c = 3 grid starts at q' = 5"""
        grid = default_grid('c3', 10 ** 6)

        self.assertEqual(grid[0], (5, 1))
        self.assertIn((2, 3), grid)

    def test_psl_grids(self):
        """Test the admissible primes below a ceiling"""
        self.assertEqual(default_grid('psl27', 20), [(13,), (17,), (19,)])
        self.assertEqual(default_grid('psl29', 30), [(11,), (29,)])

    def test_unknown_setting(self):
        """Test an unknown setting raises PreconditionError"""
        with self.assertRaises(PreconditionError):
            default_grid('c2')
