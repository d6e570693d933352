"""
Brute-force listing of small projective matrix groups.

Group elements are identified by their canonical keys (see
MatrixOps.canonical_keys); a group is held as a sorted int64 key array.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from groups.exceptions import CapExceeded

logger = logging.getLogger(__name__)

CHUNK = 65536


def contains(sorted_keys, keys):
    """Membership mask of keys in a sorted key array."""
    keys = np.asarray(keys, dtype=np.int64)
    if not len(sorted_keys):
        return np.zeros(keys.shape, dtype=bool)
    idx = np.searchsorted(sorted_keys, keys)
    idx = np.minimum(idx, len(sorted_keys) - 1)
    return sorted_keys[idx] == keys


def _chunks(A, size=CHUNK):
    for start in range(0, len(A), size):
        yield A[start:start + size]


def closure(ops, gens, cap=None):
    """Sorted keys of the group generated by a batch of matrices."""
    if cap is None:
        cap = settings.SAXL_ENUMERATION_CAP
    gens = ops.batch(gens)
    known = ops.canonical_keys(ops.identity(1))
    frontier = known
    level = 0
    while len(frontier):
        found = []
        for part in _chunks(ops.from_keys(frontier)):
            prods = ops.mul(part[:, None], gens[None])
            found.append(np.unique(ops.canonical_keys(prods)))
        new = np.unique(np.concatenate(found))
        new = new[~contains(known, new)]
        known = np.union1d(known, new)
        frontier = new
        level += 1
        logger.debug(f'closure level {level}: {len(known)} elements')
        if len(known) > cap:
            raise CapExceeded('group enumeration', len(known), cap)
    return known


def conjugacy_class(ops, x, gens, gens_inv=None):
    """Sorted keys of the class of one matrix under conjugation by gens."""
    gens = ops.batch(gens)
    if gens_inv is None:
        gens_inv = ops.inv(gens)
    known = ops.canonical_keys(ops.batch(x)[None])
    frontier = known
    while len(frontier):
        found = []
        for part in _chunks(ops.from_keys(frontier)):
            conj = ops.mul(ops.mul(gens_inv[None], part[:, None]), gens[None])
            found.append(np.unique(ops.canonical_keys(conj)))
        new = np.unique(np.concatenate(found))
        new = new[~contains(known, new)]
        known = np.union1d(known, new)
        frontier = new
    return known


@dataclass(frozen=True)
class ClassInfo:
    rep: int
    size: int
    order: int


def class_census(ops, group_keys, gens, order_bound):
    """Split a listed group into conjugacy classes.

    Returns one ClassInfo per class, with the canonical key of a
    representative, the class size and the projective element order.
    """
    gens = ops.batch(gens)
    gens_inv = ops.inv(gens)
    assigned = np.zeros(len(group_keys), dtype=bool)
    reps, sizes = [], []
    while not assigned.all():
        start = int(np.argmin(assigned))
        rep = int(group_keys[start])
        cls = conjugacy_class(ops, ops.from_keys(rep), gens, gens_inv)
        assigned[np.searchsorted(group_keys, cls)] = True
        reps.append(rep)
        sizes.append(len(cls))
    orders = ops.projective_orders(ops.from_keys(np.array(reps)), order_bound)
    logger.info(f'{len(reps)} classes in a group of order {len(group_keys)}')
    return [ClassInfo(r, s, int(o)) for r, s, o in zip(reps, sizes, orders)]


def cyclic_subgroup(ops, x, cap=None):
    """Sorted keys of the cyclic group generated by one matrix."""
    return closure(ops, ops.batch(x)[None], cap=cap)


class ListedGroup:
    """A group listed by canonical keys, with its generators."""

    def __init__(self, ops, gens, cap=None):
        self.ops = ops
        self.gens = ops.batch(gens)
        self.gens_inv = ops.inv(self.gens)
        self.keys = closure(ops, self.gens, cap=cap)
        self.order = len(self.keys)

    def __repr__(self):
        return f'ListedGroup(order={self.order})'

    def conjugacy_class(self, x):
        return conjugacy_class(self.ops, x, self.gens, self.gens_inv)

    def census(self, order_bound):
        return class_census(self.ops, self.keys, self.gens, order_bound)

    def centralizer_normalizer(self, x, r):
        """|C(x)| and |N(<x>)| for x of prime order r, from the class of x
        and the powers of x it contains."""
        cls = self.conjugacy_class(x)
        cent = self.order // len(cls)
        powers = np.stack([self.ops.power(x, k) for k in range(1, r)])
        hits = int(contains(cls, self.ops.canonical_keys(powers)).sum())
        return cent, cent * hits
