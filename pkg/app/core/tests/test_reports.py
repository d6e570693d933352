"""
Tests for run configuration and report rendering
"""
import json
from fractions import Fraction

from django.test import SimpleTestCase, override_settings

from bounds.qbound import qcheck_psl29
from core.reports import FAIL, PASS, SKIPPED, Report, ledger_checks
from core.serializers import (CertifySerializer, RationalField,
                              VerifyDirectSerializer, plain)


class RationalFieldTests(SimpleTestCase):
    """Tests for exact rationals in reports"""

    def test_representation(self):
        """Test fractions become num/den and integers stay integral"""
        field = RationalField()

        self.assertEqual(field.to_representation(Fraction(3, 26)), '3/26')
        self.assertEqual(field.to_representation(Fraction(4, 2)), '2')
        self.assertEqual(field.to_internal_value('6/4'), Fraction(3, 2))

    def test_plain_payloads(self):
        """Test nested payloads are made JSON ready and floats refused"""
        self.assertEqual(plain({'a': (1, Fraction(1, 2)), 'b': None}),
                         {'a': [1, '1/2'], 'b': None})
        with self.assertRaises(TypeError):
            plain({'x': 0.5})


class ConfigTests(SimpleTestCase):
    """Tests for the option serializers"""

    @override_settings(SAXL_CAP=1234, SAXL_JOBS=3)
    def test_defaults_from_settings(self):
        """Test cap and jobs fall back to the settings"""
        serializer = VerifyDirectSerializer(data={
            'p': 5, 'case': 'SO', 'cap': None, 'jobs': None})

        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data['cap'], 1234)
        self.assertEqual(serializer.validated_data['jobs'], 3)
        self.assertEqual(serializer.validated_data['case'], 'so')
        self.assertNotIn('jobs', serializer.echo())

    def test_invalid_field_options(self):
        """Test composite p and unknown cases are refused"""
        self.assertFalse(VerifyDirectSerializer(
            data={'p': 9, 'case': 'so'}).is_valid())
        self.assertFalse(VerifyDirectSerializer(
            data={'p': 5, 'case': 'subfield:q'}).is_valid())

    def test_point_arity(self):
        """Test explicit points must match the setting"""
        good = CertifySerializer(data={'setting': 'c3', 'points': [[5, 1]]})
        bad = CertifySerializer(data={'setting': 'c3', 'points': [[5]]})

        self.assertTrue(good.is_valid(), good.errors)
        self.assertFalse(bad.is_valid())


class ReportTests(SimpleTestCase):
    """Tests for reports"""

    def test_statuses(self):
        """Test pass, fail and skipped checks are kept apart"""
        report = Report({'p': 5})
        report.add('a', True, n=1)
        report.add('b', False)
        report.skip('c', n=10 ** 6, cap=50000)

        self.assertEqual([c.status for c in report.checks],
                         [PASS, FAIL, SKIPPED])
        self.assertEqual([c.name for c in report.failed], ['b'])
        self.assertEqual([c.name for c in report.skipped], ['c'])

    def test_render_order(self):
        """Test the rendered document keeps its key order"""
        report = Report({'setting': 'psl29'})
        report.add('x', True, total=Fraction(1, 3))
        data = json.loads(report.finish().render())

        self.assertEqual(list(data), ['tool_version', 'config', 'checks',
                                      'wall_time'])
        self.assertEqual(data['checks'][0],
                         {'name': 'x', 'status': 'pass',
                          'payload': {'total': '1/3'}})

    def test_ledger_checks(self):
        """Test a ledger yields verdict, budget and chain checks"""
        checks = ledger_checks(qcheck_psl29(11), (11,))

        self.assertEqual([c.name for c in checks],
                         ['psl29(11,):verdict', 'psl29(11,):budgets',
                          'psl29(11,):chains'])
        self.assertTrue(all(c.status == PASS for c in checks))
        self.assertEqual([t['label'] for t in checks[0].payload['terms']],
                         ['x1', 'x2', 'x3', 'x4'])
