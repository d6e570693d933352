"""
Django command to verify the Saxl graph property of a coset action of
PSU(3,q) directly, by building the action and checking every point.
"""
import logging

import numpy as np
from django.core.management.base import BaseCommand, CommandError

from bounds.fixcheck import manning_crosscheck
from core.reports import Report, write_report
from core.serializers import VerifyDirectSerializer
from groups.exceptions import CapExceeded, CaseError, FieldError
from groups.ff import make_tower
from groups.matrices import KEY_ORDER_LIMIT
from groups.permaction import (build_coset_action, build_point_action,
                               fixed_points, orbit_sizes, perm_closure,
                               saxl_check, stabilizer_pairwise_intersect,
                               suborbit_stabilizers)
from groups.unitary import UnitaryContext, psu_order, stabilizer_order

logger = logging.getLogger(__name__)


def validated_config(serializer_class, options):
    """Validate command options; bad configuration exits with status 2."""
    serializer = serializer_class(data=options)
    if not serializer.is_valid():
        raise CommandError(f'Invalid options: {dict(serializer.errors)}',
                           returncode=2)
    return serializer


def finish(command, report, out):
    """Write the report and turn failed checks into exit status 1."""
    write_report(report, out, command.stdout)
    stream = command.stdout if out else command.stderr
    if report.failed:
        names = ', '.join(check.name for check in report.failed)
        raise CommandError(f'{len(report.failed)} checks failed: {names}',
                           returncode=1)
    note = f', {len(report.skipped)} skipped' if report.skipped else ''
    stream.write(command.style.SUCCESS(
        f'{len(report.checks)} checks passed{note}'))


def build_context(p, m):
    try:
        return UnitaryContext(make_tower(p, m))
    except FieldError as exc:
        raise CommandError(str(exc), returncode=2)


def verify_case(report, ctx, case, cap, jobs, manning=False):
    """Coset action of T on the cosets of M_0 and its Saxl checks."""
    q = ctx.q
    order_m = stabilizer_order(case, q)
    expected_n = psu_order(q) // order_m
    if expected_n > cap:
        report.skip('coset action', n=expected_n, cap=cap)
        return None
    try:
        stab_gens = ctx.stabilizer_generators(case)
        act = build_coset_action(ctx.ops, ctx.psu_generators(),
                                 ctx.membership_oracle(case), order_m,
                                 group_order=psu_order(q), cap=cap)
    except CapExceeded as exc:
        key = 'n' if exc.what == 'coset action' else 'size'
        report.skip(exc.what, **{key: exc.size}, cap=exc.cap)
        return None
    stab_perms = act.perm_of(stab_gens)
    report.add('degree', act.n == expected_n, n=act.n, expected=expected_n)
    report.add('stabilizer fixes the base point',
               bool(np.all(stab_perms[:, 0] == 0)))
    fixed = fixed_points(act, stab_perms)
    report.add('stabilizer fixes one point', fixed == 1, fixed=fixed)

    saxl = saxl_check(act, stab_perms, order_m, jobs=jobs)
    report.add('suborbits', True, profile=orbit_sizes(act, stab_perms))
    report.add('base size two', True, holds=saxl.base_size_two,
               regular_suborbits=list(saxl.regular_suborbit_sizes),
               gamma_size=saxl.gamma_size)
    report.add('common neighbours', saxl.conjecture_holds is not False,
               conjecture_holds=saxl.conjecture_holds,
               witness_failures=list(saxl.witness_failures[:20]))
    _stabilizer_checks(report, act, stab_perms, order_m, saxl, jobs)

    if case.kind == 'sl':
        _compare_point_action(report, ctx, act, cap)
    if manning:
        _manning(report, ctx, case, act)
    return saxl


def _stabilizer_checks(report, act, stab_perms, order_m, saxl, jobs):
    """Checks that need M_0 listed as permutations."""
    try:
        elements = perm_closure(stab_perms)
    except CapExceeded as exc:
        report.skip('stabilizer listing', size=exc.size, cap=exc.cap)
        return
    report.add('stabilizer order', len(elements) == order_m,
               computed=len(elements), expected=order_m)
    pairs = suborbit_stabilizers(act, stab_perms, elements)
    report.add('orbit-stabilizer',
               all(size * stab == order_m for size, stab in pairs),
               suborbits=[list(pair) for pair in pairs])
    meets = stabilizer_pairwise_intersect(act, stab_perms, jobs=jobs,
                                          elements=elements)
    report.add('stabilizers meet pairwise',
               meets != saxl.base_size_two, holds=meets)


def _compare_point_action(report, ctx, act, cap):
    """The sl case is the action on non-isotropic points."""
    try:
        points = build_point_action(ctx, cap=cap)
    except CapExceeded as exc:
        report.skip('point action degree', n=exc.size, cap=exc.cap)
        return
    report.add('point action degree', points.n == act.n, n=points.n)


def _manning(report, ctx, case, act):
    """Normalizer orders come from listings on packed keys."""
    if not ctx.ops.packable:
        report.skip('manning formula', size=ctx.F.order, cap=KEY_ORDER_LIMIT)
        return
    try:
        checks = manning_crosscheck(ctx, case, act)
    except CapExceeded as exc:
        report.skip('manning formula', size=exc.size, cap=exc.cap)
        return
    for check in checks:
        report.add(f'manning {check.name}', check.passed,
                   formula=check.formula, computed=check.computed)


class Command(BaseCommand):
    """Django command to verify a coset action of PSU(3,q) directly"""
    help = 'Build the coset action of PSU(3,q) on a maximal subgroup and ' \
           'check base size two and common neighbours in the Saxl graph'

    def add_arguments(self, parser):
        parser.add_argument('--p', type=int, required=True,
                            help='Characteristic')
        parser.add_argument('--m', type=int, default=1,
                            help='q = p^m')
        parser.add_argument('--case', required=True,
                            help="so, sl or subfield:Q'")
        parser.add_argument('--cap', type=int, default=None,
                            help='Largest permutation domain')
        parser.add_argument('--jobs', type=int, default=None,
                            help='Worker pool width')
        parser.add_argument('--manning', action='store_true',
                            help='Also compare fixed points with the '
                                 'Manning formula')
        parser.add_argument('--out', default=None,
                            help='Report path (default stdout)')

    def handle(self, *args, **options):
        """Entry point for command"""
        serializer = validated_config(VerifyDirectSerializer, options)
        config = serializer.validated_data
        ctx = build_context(config['p'], config['m'])
        try:
            case = ctx.check_action_case(config['case'])
        except CaseError as exc:
            raise CommandError(str(exc), returncode=2)

        logger.info(f'Verifying PSU(3,{ctx.q}) on the cosets of the '
                    f'{case} stabilizer')
        report = Report(serializer.echo())
        verify_case(report, ctx, case, config['cap'], config['jobs'],
                    manning=config['manning'])
        finish(self, report, config.get('out'))
