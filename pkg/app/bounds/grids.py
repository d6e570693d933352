"""
Finite parameter grids for bound certification.
"""
from django.conf import settings
from sympy import integer_nthroot, primerange

from bounds.exceptions import PreconditionError
from bounds.qbound import (psl27_admissible, psl29_admissible, regime_c1,
                           regime_c3)


def _subfield_orders(limit):
    """(p, m') with 3 <= p^m' <= limit."""
    for p in primerange(2, limit + 1):
        m_prime, q_prime = 1, p
        while q_prime <= limit:
            if q_prime >= 3:
                yield p, m_prime
            m_prime += 1
            q_prime *= p


def _c1_grid(grid_max):
    points = []
    # q'^3 <= grid_max bounds q'
    limit = integer_nthroot(grid_max, 3)[0]
    for p, m_prime in _subfield_orders(limit):
        q_prime = p ** m_prime
        for e in primerange(3, 64):
            if q_prime ** e > grid_max:
                break
            if regime_c1(p, m_prime, e):
                points.append((p, m_prime, e))
    return sorted(points, key=lambda pt: (pt[0] ** (pt[1] * pt[2]), pt))


def _c3_grid(grid_max):
    limit = integer_nthroot(grid_max, 3)[0]
    points = [(p, m_prime) for p, m_prime in _subfield_orders(limit)
              if (p ** m_prime) ** 3 <= grid_max and regime_c3(p, m_prime)]
    return sorted(points, key=lambda pt: (pt[0] ** pt[1], pt))


def default_grid(setting, grid_max=None):
    """Parameter points of a setting with q up to grid_max."""
    if setting in ('c1', 'c3'):
        if grid_max is None:
            grid_max = settings.SAXL_GRID_MAX
        return _c1_grid(grid_max) if setting == 'c1' else _c3_grid(grid_max)
    if setting in ('psl27', 'psl29'):
        if grid_max is None:
            grid_max = settings.SAXL_PSL_GRID_MAX
        admissible = psl27_admissible if setting == 'psl27' \
            else psl29_admissible
        return [(q,) for q in primerange(2, grid_max + 1) if admissible(q)]
    raise PreconditionError(f'unknown setting {setting!r}')
