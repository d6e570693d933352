"""
Transitive permutation actions of the unitary groups and the Saxl graph
checks run on them.

Permutations are int64 arrays with perm[i] the image of point i. Groups act
on the right: the product g*h first applies g, so as arrays it is h[g].
Point 0 is always the base point alpha.
"""
import logging
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np
from django.conf import settings

from groups.bitset import Bitset, pack, rows_intersect
from groups.exceptions import ActionError, CapExceeded

logger = logging.getLogger(__name__)

BLOCK = 2048
PAIR_BLOCK = 256
SAXL_CHUNK = 256


def schreier_tree(gens):
    """Breadth-first Schreier tree of point 0.

    Returns (parent, parent_gen, order): point b is reached from
    parent[b] by generator parent_gen[b]; order lists points level by level.
    """
    gens = np.asarray(gens, dtype=np.int64)
    n = gens.shape[1]
    parent = np.full(n, -1, dtype=np.int64)
    parent_gen = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    parent[0] = 0
    frontier = np.array([0], dtype=np.int64)
    order = [frontier]
    while len(frontier):
        level = []
        for j, g in enumerate(gens):
            img = g[frontier]
            fresh = ~seen[img]
            new, first = np.unique(img[fresh], return_index=True)
            parent[new] = frontier[fresh][first]
            parent_gen[new] = j
            seen[new] = True
            level.append(new)
        frontier = np.concatenate(level) if level else frontier[:0]
        if len(frontier):
            order.append(frontier)
    if not seen.all():
        raise ActionError(
            f'action is not transitive: orbit of 0 has {seen.sum()} of {n} '
            'points'
        )
    return parent, parent_gen, np.concatenate(order)


class CosetDomain:
    """Right cosets M r_i, identified by the membership oracle of M."""

    def __init__(self, ops, member, reps):
        self.ops = ops
        self.member = member
        self.reps = reps
        self.inverses = ops.inv(reps)

    def __len__(self):
        return len(self.reps)

    def images(self, mats):
        mats = self.ops.batch(mats)
        single = mats.ndim == 2
        mats = mats.reshape(-1, 3, 3)
        perms = np.stack([self._coset_images(g) for g in mats])
        return perms[0] if single else perms

    def _coset_images(self, g):
        n = len(self.reps)
        left = self.ops.mul(self.reps, g)
        image = np.full(n, -1, dtype=np.int64)
        free = np.ones(n, dtype=bool)
        for start in range(0, n, PAIR_BLOCK):
            rows = np.arange(start, min(start + PAIR_BLOCK, n))
            for targets in _chunks(np.flatnonzero(free), PAIR_BLOCK):
                rows = rows[image[rows] < 0]
                if not len(rows):
                    break
                prods = self.ops.mul(left[rows][:, None],
                                     self.inverses[targets][None])
                hit = np.asarray(self.member(prods))
                found = hit.any(axis=1)
                cols = targets[hit.argmax(axis=1)[found]]
                image[rows[found]] = cols
                free[cols] = False
        if np.any(image < 0) or len(np.unique(image)) != n:
            raise ActionError('membership oracle does not define a coset '
                              'action')
        return image

    def fixed_mask(self, g):
        """Cosets M r with r g r^-1 in M."""
        conj = self.ops.mul_chain(self.reps, self.ops.batch(g), self.inverses)
        return np.asarray(self.member(conj), dtype=bool)


class PointDomain:
    """Non-isotropic points of the identity-form unitary space,
    as row vectors with first nonzero coordinate 1."""

    def __init__(self, ctx, vectors, table):
        self.ctx = ctx
        self.vectors = vectors
        self.table = table

    def __len__(self):
        return len(self.vectors)

    def images(self, mats):
        ops, F = self.ctx.ops, self.ctx.F
        mats = ops.batch(mats)
        single = mats.ndim == 2
        mats = mats.reshape(-1, 3, 3)
        prod = np.asarray(F.mul(self.vectors[None, :, :, None],
                                mats[:, None, :, :]))
        moved = np.asarray(F.add(F.add(prod[..., 0, :], prod[..., 1, :]),
                                 prod[..., 2, :]))
        perms = self.table[_pack_points(_normalise(F, moved), F.order)]
        if np.any(perms < 0):
            raise ActionError('matrix does not preserve the point set')
        return perms[0] if single else perms

    def fixed_mask(self, g):
        perm = self.images(g)
        return perm == np.arange(len(perm))


def _normalise(F, vectors):
    lead = np.argmax(vectors != 0, axis=-1)
    first = np.take_along_axis(vectors, lead[..., None], axis=-1)
    return np.asarray(F.mul(vectors, F.inv(first)))


def _pack_points(vectors, order):
    return (vectors[..., 0] * order + vectors[..., 1]) * order \
        + vectors[..., 2]


def _chunks(values, size):
    for start in range(0, len(values), size):
        yield values[start:start + size]


class PermAction:
    """A transitive action given by generator images and a Schreier tree."""

    def __init__(self, gens, domain=None):
        gens = np.atleast_2d(np.asarray(gens, dtype=np.int64))
        self.n = gens.shape[1]
        for g in gens:
            if not np.array_equal(np.sort(g), np.arange(self.n)):
                raise ActionError('generator image is not a permutation')
        self.gens = gens
        self.domain = domain
        self.parent, self.parent_gen, self.bfs_order = schreier_tree(gens)

    def __repr__(self):
        return f'PermAction(n={self.n}, gens={len(self.gens)})'

    def word(self, point):
        """Generator indices of the transversal element 0 -> point."""
        word = []
        while point != 0:
            word.append(int(self.parent_gen[point]))
            point = int(self.parent[point])
        return word[::-1]

    def translate(self, points, point):
        """Image of a point set under the transversal element 0 -> point."""
        image = np.asarray(points, dtype=np.int64)
        for j in self.word(point):
            image = self.gens[j][image]
        return image

    def verify_transversal(self):
        others = np.arange(1, self.n)
        ok = self.gens[self.parent_gen[others], self.parent[others]] == others
        if not ok.all():
            raise ActionError('Schreier tree is inconsistent')
        return True

    def perm_of(self, mats):
        if self.domain is None:
            raise ActionError('action carries no matrix domain')
        return self.domain.images(mats)

    def fixed_mask(self, mats):
        if self.domain is None:
            raise ActionError('action carries no matrix domain')
        return self.domain.fixed_mask(mats)


def build_coset_action(ops, gens, member, order_of_m, group_order=None,
                       cap=None):
    """Action of <gens> on the right cosets of the subgroup decided by
    member, found by breadth-first enumeration from the trivial coset."""
    if cap is None:
        cap = settings.SAXL_CAP
    if group_order is not None:
        if group_order % order_of_m:
            raise ActionError(f'{order_of_m} does not divide {group_order}')
        if group_order // order_of_m > cap:
            raise CapExceeded('coset action', group_order // order_of_m, cap)
    gens = ops.batch(gens)
    reps = ops.identity(BLOCK)
    inverses = ops.identity(BLOCK)
    n = 1
    images = [[] for _ in gens]
    i = 0
    while i < n:
        for j, g in enumerate(gens):
            c = ops.mul(reps[i], g)
            k = _locate(ops, member, c, inverses[:n])
            if k < 0:
                k = n
                if k >= cap:
                    raise CapExceeded('coset action', k + 1, cap)
                if n == len(reps):
                    reps = np.concatenate([reps, reps])
                    inverses = np.concatenate([inverses, inverses])
                reps[n] = c
                inverses[n] = ops.inv(c)
                n += 1
            images[j].append(k)
        i += 1
        if i % 1000 == 0:
            logger.debug(f'coset enumeration: {i} of {n} processed')
    reps = reps[:n]
    if group_order is not None and n * order_of_m != group_order:
        raise ActionError(
            f'membership oracle inconsistent: {n} cosets of a subgroup of '
            f'order {order_of_m} in a group of order {group_order}'
        )
    logger.info(f'Coset action of degree {n}')
    domain = CosetDomain(ops, member, reps)
    return PermAction(np.array(images, dtype=np.int64), domain)


def _locate(ops, member, c, inverses):
    for start in range(0, len(inverses), BLOCK):
        block = inverses[start:start + BLOCK]
        hit = np.asarray(member(ops.mul(c[None], block)))
        if hit.any():
            return start + int(hit.argmax())
    return -1


def point_count(q):
    return q ** 2 * (q ** 2 - q + 1)


def build_point_action(ctx, cap=None):
    """PSU(3,q) on the non-isotropic points; (1,0,0) is point 0."""
    if cap is None:
        cap = settings.SAXL_CAP
    n = point_count(ctx.q)
    if n > cap:
        raise CapExceeded('point action', n, cap)
    F = ctx.F
    codes = F.elements()
    a, b = (g.ravel() for g in np.meshgrid(codes, codes, indexing='ij'))
    vectors = np.concatenate([
        np.stack([np.ones_like(a), a, b], axis=-1),
        np.stack([np.zeros_like(codes), np.ones_like(codes), codes], axis=-1),
        np.array([[0, 0, 1]], dtype=np.int64),
    ])
    norms = np.asarray(F.norm(vectors))
    lengths = F.add(F.add(norms[:, 0], norms[:, 1]), norms[:, 2])
    vectors = vectors[np.asarray(lengths) != 0]
    if len(vectors) != n:
        raise ActionError(f'{len(vectors)} non-isotropic points, expected {n}')
    table = np.full(F.order ** 3, -1, dtype=np.int64)
    table[_pack_points(vectors, F.order)] = np.arange(n)
    domain = PointDomain(ctx, vectors, table)
    gens = domain.images(ctx.psu_generators())
    logger.info(f'Point action of degree {n} for q={ctx.q}')
    return PermAction(gens, domain)


def orbit_labels(perms, n):
    """Least point of the orbit of each point under <perms>."""
    labels = np.arange(n)
    perms = np.asarray(perms, dtype=np.int64).reshape(-1, n)
    while True:
        prev = labels
        labels = labels.copy()
        for perm in perms:
            low = np.minimum(labels, labels[perm])
            np.minimum.at(labels, perm, low)
            labels = np.minimum(labels, low)
        labels = labels[labels]
        if np.array_equal(labels, prev):
            return labels


def _check_fix_base(perms):
    perms = np.asarray(perms, dtype=np.int64)
    if len(perms) and np.any(perms[:, 0] != 0):
        raise ActionError('a stabilizer generator moves point 0')
    return perms


def suborbits(act, stab_perms):
    """Orbits of the point stabilizer, ordered by least point."""
    stab_perms = _check_fix_base(np.asarray(stab_perms).reshape(-1, act.n))
    labels = orbit_labels(stab_perms, act.n)
    order = np.argsort(labels, kind='stable')
    _, starts = np.unique(labels[order], return_index=True)
    return np.split(order, starts[1:])


def orbit_sizes(act, stab_perms):
    return sorted(len(orbit) for orbit in suborbits(act, stab_perms))


def regular_suborbits(act, stab_perms, order_of_m):
    return [orbit for orbit in suborbits(act, stab_perms)
            if len(orbit) == order_of_m]


@dataclass(frozen=True)
class SaxlReport:
    base_size_two: bool
    regular_suborbit_sizes: tuple
    gamma_size: int
    conjecture_holds: object
    witness_failures: tuple

    def __post_init__(self):
        if self.gamma_size != sum(self.regular_suborbit_sizes):
            raise ActionError('Saxl neighbourhood size mismatch')
        if self.conjecture_holds is not None \
                and self.conjecture_holds != (not self.witness_failures):
            raise ActionError('Saxl verdict disagrees with its witnesses')


_shared = {}


def _init_saxl_worker(gens, parent, parent_gen, gamma):
    _shared.update(gens=gens, parent=parent, parent_gen=parent_gen,
                   gamma=gamma, n=gens.shape[1],
                   gamma_bits=Bitset.from_indices(gens.shape[1], gamma))


def _translate_shared(point):
    word = []
    while point != 0:
        word.append(_shared['parent_gen'][point])
        point = _shared['parent'][point]
    image = _shared['gamma']
    for j in reversed(word):
        image = _shared['gens'][j][image]
    return image


def _saxl_chunk(points):
    n = _shared['n']
    rows = np.zeros((len(points), n), dtype=bool)
    for r, point in enumerate(points):
        rows[r, _translate_shared(point)] = True
    meets = rows_intersect(pack(rows), _shared['gamma_bits'].words)
    return [int(b) for b in np.asarray(points)[~meets]]


def _run_chunks(func, chunks, init, initargs, jobs):
    if jobs <= 1:
        init(*initargs)
        return [func(chunk) for chunk in chunks]
    with Pool(processes=jobs, initializer=init, initargs=initargs) as pool:
        return pool.map(func, chunks)


def saxl_check(act, stab_perms, order_of_m, jobs=None):
    """Base size two and the common neighbour property of the Saxl graph.

    Gamma(alpha) is the union of the regular suborbits; Gamma(beta) is its
    image under the transversal element alpha -> beta.
    """
    if jobs is None:
        jobs = settings.SAXL_JOBS
    regular = regular_suborbits(act, stab_perms, order_of_m)
    sizes = tuple(len(orbit) for orbit in regular)
    if not regular:
        logger.info(f'No regular suborbit on {act.n} points: b != 2')
        return SaxlReport(False, (), 0, None, ())

    act.verify_transversal()
    gamma = np.sort(np.concatenate(regular))
    chunks = list(_chunks(np.arange(act.n), SAXL_CHUNK))
    results = _run_chunks(
        _saxl_chunk, chunks, _init_saxl_worker,
        (act.gens, act.parent, act.parent_gen, gamma), jobs,
    )
    failures = tuple(sorted(b for part in results for b in part))
    holds = not failures
    if holds:
        logger.info(f'Common neighbours found for all {act.n} points')
    else:
        logger.warning(f'{len(failures)} points share no neighbour with 0')
    return SaxlReport(True, sizes, len(gamma), holds, failures)


def perm_closure(perms, cap=None):
    """All elements of <perms>, identity first.

    The default cap bounds the element count and the size of the stacked
    table of elements.
    """
    perms = np.atleast_2d(np.asarray(perms, dtype=np.int64))
    if cap is None:
        cap = min(settings.SAXL_ENUMERATION_CAP,
                  settings.SAXL_PERM_TABLE_CAP // max(perms.shape[1], 1))
    identity = np.arange(perms.shape[1], dtype=np.int64)
    known = {identity.tobytes()}
    elements = [identity]
    frontier = [identity]
    while frontier:
        block = np.stack(frontier)
        frontier = []
        for g in perms:
            for row in g[block]:
                key = row.tobytes()
                if key not in known:
                    known.add(key)
                    elements.append(row)
                    frontier.append(row)
        if len(elements) > cap:
            raise CapExceeded('permutation group', len(elements), cap)
    return np.stack(elements)


def stabilizer_of(elements, point):
    """Elements of a listed group fixing a point."""
    return elements[elements[:, point] == point]


def _init_pairwise_worker(elements):
    _shared.update(elements=elements)


def _pairwise_chunk(points):
    nontrivial = _shared['elements'][1:]
    fixed = nontrivial[:, points] == points[None, :]
    return [int(b) for b in points[~fixed.any(axis=0)]]


def suborbit_stabilizers(act, stab_perms, elements):
    """(suborbit size, order of the stabilizer of its least point in M)
    for each suborbit, given the listed elements of M."""
    return [(len(orbit), len(stabilizer_of(elements, int(orbit[0]))))
            for orbit in suborbits(act, stab_perms)]


def stabilizer_pairwise_intersect(act, stab_perms, cap=None, jobs=None,
                                  elements=None):
    """True iff the stabilizers of 0 and of every other point share a
    nontrivial element; by transitivity this covers all pairs."""
    if jobs is None:
        jobs = settings.SAXL_JOBS
    stab_perms = _check_fix_base(np.asarray(stab_perms).reshape(-1, act.n))
    if act.n == 1:
        return True
    if elements is None:
        elements = perm_closure(stab_perms, cap)
    chunks = list(_chunks(np.arange(1, act.n), SAXL_CHUNK))
    results = _run_chunks(_pairwise_chunk, chunks, _init_pairwise_worker,
                          (elements,), jobs)
    lonely = sorted(b for part in results for b in part)
    if lonely:
        logger.info(f'{len(lonely)} points meet the stabilizer of 0 '
                    'trivially')
    return not lonely


def fixed_points(act, perms):
    """Number of points fixed by every given permutation."""
    perms = np.asarray(perms, dtype=np.int64).reshape(-1, act.n)
    return int(np.all(perms == np.arange(act.n), axis=0).sum())
