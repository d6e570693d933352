"""
Django command to certify the Q criterion over a grid of parameters with
exact rational ledgers.
"""
import logging
from multiprocessing import Pool

from django.core.management.base import BaseCommand, CommandError

from bounds.exceptions import PreconditionError
from bounds.grids import default_grid
from bounds.qbound import qcheck
from core.management.commands.verify_direct import finish, validated_config
from core.reports import FAIL, Check, Report, ledger_checks
from core.serializers import CertifySerializer

logger = logging.getLogger(__name__)


def certify_point(task):
    """Checks of one grid point; runs in a worker process."""
    setting, point = task
    try:
        ledger = qcheck(setting, point)
    except PreconditionError as exc:
        return [Check(f'{setting}{point}:precondition', FAIL,
                      {'error': str(exc)})]
    return ledger_checks(ledger, point)


def certify(setting, points, jobs=1):
    """Checks for every point, in grid order."""
    tasks = [(setting, tuple(point)) for point in points]
    if jobs <= 1 or len(tasks) <= 1:
        results = [certify_point(task) for task in tasks]
    else:
        with Pool(processes=jobs) as pool:
            results = pool.map(certify_point, tasks)
    return [check for part in results for check in part]


class Command(BaseCommand):
    """Django command to certify the Q criterion on a parameter grid"""
    help = 'Evaluate the exact Q ledgers of a setting at every grid point'

    def add_arguments(self, parser):
        parser.add_argument('--setting', required=True,
                            help='c1, c3, psl27 or psl29')
        parser.add_argument('--grid-max', type=int, default=None,
                            help='Largest q of the default grid')
        parser.add_argument('--point', action='append', default=None,
                            dest='points',
                            help="Comma separated point, e.g. 2,2,3 for "
                                 "(p, m', e); repeatable")
        parser.add_argument('--jobs', type=int, default=None)
        parser.add_argument('--out', default=None)

    def handle(self, *args, **options):
        """Entry point for command"""
        options = dict(options)
        if options.get('points'):
            try:
                options['points'] = [
                    [int(part) for part in str(text).split(',')]
                    for text in options['points']
                ]
            except ValueError:
                raise CommandError(f'Bad --point {options["points"]}',
                                   returncode=2)
        serializer = validated_config(CertifySerializer, options)
        config = serializer.validated_data
        setting = config['setting']
        points = config.get('points') or default_grid(
            setting, config.get('grid_max'))
        logger.info(f'Certifying {setting} at {len(points)} points with '
                    f'{config["jobs"]} workers')

        report = Report(serializer.echo())
        report.extend(certify(setting, points, config['jobs']))
        finish(self, report, config.get('out'))
