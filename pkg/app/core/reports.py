"""
Verification reports: named checks with a status and an exact payload,
rendered as one JSON document.
"""
import logging
import time
from dataclasses import dataclass, field

from django.conf import settings
from rest_framework.renderers import JSONRenderer

from core.serializers import ReportSerializer

logger = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
SKIPPED = 'skipped-out-of-scale'


@dataclass
class Check:
    name: str
    status: str
    payload: dict = field(default_factory=dict)


@dataclass
class Report:
    config: dict
    checks: list = field(default_factory=list)
    tool_version: str = field(
        default_factory=lambda: settings.SAXL_TOOL_VERSION)
    wall_time: float = 0.0
    started: float = field(default_factory=time.monotonic, repr=False)

    def add(self, name, passed, **payload):
        status = PASS if passed else FAIL
        if not passed:
            logger.error(f'{name} failed: {payload}')
        self.checks.append(Check(name, status, payload))
        return status

    def skip(self, name, **payload):
        logger.warning(f'{name} skipped: out of scale {payload}')
        self.checks.append(Check(name, SKIPPED, payload))

    def extend(self, checks):
        for check in checks:
            if check.status == FAIL:
                logger.error(f'{check.name} failed: {check.payload}')
            self.checks.append(check)

    @property
    def failed(self):
        return [check for check in self.checks if check.status == FAIL]

    @property
    def skipped(self):
        return [check for check in self.checks if check.status == SKIPPED]

    def finish(self):
        self.wall_time = round(time.monotonic() - self.started, 3)
        return self

    def render(self):
        data = ReportSerializer(self).data
        return JSONRenderer().render(data, renderer_context={'indent': 2})


def ledger_checks(ledger, point):
    """The verdict, budget and chain checks of one Q ledger."""
    name = f'{ledger.setting}{tuple(point)}'
    terms = [
        {'label': t.label, 'r': t.r, 'count': t.count, 'kind': t.kind,
         'group': t.group, 'value': t.value, 'budget': t.budget,
         'chain': t.chain}
        for t in ledger.terms
    ]
    budgets = [
        {'group': b.group, 'total': b.total, 'budget': b.budget,
         'holds': b.holds}
        for b in ledger.budget_checks()
    ]
    chains = [
        {'label': t.label, 'each': t.each, 'chain': t.chain}
        for t in ledger.terms if not t.chain_holds
    ]
    return [
        Check(f'{name}:verdict', PASS if ledger.verdict else FAIL,
              {'params': ledger.params, 'ratio': ledger.ratio,
               'total': ledger.total, 'terms': terms}),
        Check(f'{name}:budgets', PASS if ledger.budgets_hold else FAIL,
              {'budgets': budgets}),
        Check(f'{name}:chains', PASS if ledger.chains_hold else FAIL,
              {'violations': chains}),
    ]


def write_report(report, out=None, stdout=None):
    """Write the rendered report to a file, or to stdout when out is None."""
    content = report.finish().render()
    if out:
        with open(out, 'wb') as fh:
            fh.write(content)
            fh.write(b'\n')
        logger.info(f'Report written to {out}')
    elif stdout is not None:
        stdout.write(content.decode('utf-8'))
    return content
