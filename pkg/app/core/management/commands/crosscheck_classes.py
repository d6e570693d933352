"""
Django command to compare the class tables of PSU(3,q) and PGU(3,q) with
a brute-force enumeration of both groups.
"""
import logging

from django.core.management.base import BaseCommand

from bounds.classdata import crosscheck_against_bruteforce
from core.management.commands.verify_direct import (build_context, finish,
                                                    validated_config)
from core.reports import Report
from core.serializers import CrosscheckSerializer
from groups.exceptions import CapExceeded

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    """Django command to cross-check the class tables"""
    help = 'Compare centralizer and normalizer orders, class counts and ' \
           'the class equation with an enumeration of PSU(3,q)'

    def add_arguments(self, parser):
        parser.add_argument('--p', type=int, required=True)
        parser.add_argument('--m', type=int, default=1)
        parser.add_argument('--cap', type=int, default=None,
                            help='Largest group to enumerate')
        parser.add_argument('--out', default=None)

    def handle(self, *args, **options):
        """Entry point for command"""
        serializer = validated_config(CrosscheckSerializer, options)
        config = serializer.validated_data
        ctx = build_context(config['p'], config['m'])
        report = Report(serializer.echo())
        try:
            checks = crosscheck_against_bruteforce(ctx, cap=config.get('cap'))
        except CapExceeded as exc:
            report.skip('class tables', size=exc.size, cap=exc.cap)
        else:
            for check in checks:
                report.add(check.name, check.passed, formula=check.formula,
                           computed=check.computed)
        finish(self, report, config.get('out'))
