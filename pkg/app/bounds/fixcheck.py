"""
Fixed points of prime order subgroups of M on the cosets of M, counted on
a coset action and compared with the Manning formula evaluated on
normalizer orders found by enumeration.
"""
import logging

import numpy as np
from sympy import primefactors

from bounds.classdata import CrossCheck
from bounds.qbound import manning_fix
from groups import enumeration

logger = logging.getLogger(__name__)


def _powers(ops, x, r):
    return np.stack([ops.power(x, k) for k in range(1, r)])


def subgroup_class_reps(ops, group_M, keys, r):
    """One generator for each M-class of subgroups of order r, given the
    keys of all elements of order r in M."""
    remaining = set(int(k) for k in keys)
    reps = []
    while remaining:
        x = ops.from_keys(np.array([min(remaining)], dtype=np.int64))[0]
        for y in _powers(ops, x, r):
            remaining.difference_update(
                int(k) for k in group_M.conjugacy_class(y))
        reps.append(x)
    return reps


def manning_crosscheck(ctx, case, act, cap=None):
    """Fix(<x>) on the coset action against the Manning formula, for one x
    in every M-class of prime order subgroups of M."""
    ops, q = ctx.ops, ctx.q
    group_T = enumeration.ListedGroup(ops, ctx.psu_generators(), cap)
    group_M = enumeration.ListedGroup(ops, ctx.stabilizer_generators(case),
                                      cap)
    logger.info(f'Manning check for {case}: |T| = {group_T.order}, '
                f'|M| = {group_M.order}')
    checks = [CrossCheck('|T:M|', group_T.order // group_M.order, act.n)]
    bound = ctx.p * (q * q + q + 1)
    orders = ops.projective_orders(ops.from_keys(group_M.keys), bound)

    for r in primefactors(group_M.order):
        reps = subgroup_class_reps(ops, group_M, group_M.keys[orders == r],
                                   r)
        classes_T = [group_T.conjugacy_class(x) for x in reps]
        power_keys = [ops.canonical_keys(_powers(ops, x, r)) for x in reps]
        norms_T = [group_T.centralizer_normalizer(x, r)[1] for x in reps]
        norms_M = [group_M.centralizer_normalizer(x, r)[1] for x in reps]
        for i, x in enumerate(reps):
            fused = [j for j in range(len(reps))
                     if enumeration.contains(classes_T[i],
                                             power_keys[j]).any()]
            formula = manning_fix([norms_T[j] for j in fused],
                                  [norms_M[j] for j in fused])
            computed = int(np.count_nonzero(act.fixed_mask(x)))
            checks.append(CrossCheck(f'Fix(<x>) r={r} class {i}', formula,
                                     computed))
    return checks
