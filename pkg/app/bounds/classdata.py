"""
Prime order subgroups and element classes of T = PSU(3,q) and R = PGU(3,q).

The order columns are exact integer formulas. Representatives are built
when a UnitaryContext for the same q is supplied; they are stored in the
Gram form the class table states them in.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from math import gcd

import numpy as np
from sympy import factorint, isprime, primefactors

from bounds.exceptions import Discrepancy, PreconditionError
from groups import enumeration
from groups.ff import find_of_order
from groups.unitary import ANTIDIAG, IDENTITY, pgu_order, psu_order

logger = logging.getLogger(__name__)

TRIPLE_ENUMERATION_LIMIT = 1000


def split_prime_power(q):
    """(p, m) with q = p^m; PreconditionError otherwise."""
    factors = factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise PreconditionError(f'{q} is not a prime power')
    (p, m), = factors.items()
    return int(p), int(m)


@dataclass(frozen=True)
class ClassRecord:
    """One row of the prime order subgroup table, instantiated at q.

    count_T and count_R are numbers of conjugacy classes of subgroups;
    reps holds one representative per T-class when they were built.
    """
    r: int
    label: str
    cT: int
    nT: int
    cR: int
    nR: int
    count_T: int = 1
    count_R: int = 1
    conditions: tuple = ()
    reps: tuple = field(default=(), compare=False, repr=False)
    s_choices: tuple = ()
    s_exact: int = None
    element_order: int = None

    @property
    def rep(self):
        return self.reps[0] if self.reps else None

    @property
    def order(self):
        """Order of the elements listed by the row; 4 for z0' at p = 2."""
        return self.element_order or self.r

    def element_classes_T(self):
        """Classes of elements of order r in T covered by this row."""
        if self.order != self.r:
            return 0
        return self.count_T * (self.r - 1) * self.cT // self.nT

    def element_classes_R(self):
        if self.order != self.r:
            return 0
        return self.count_R * (self.r - 1) * self.cR // self.nR

    def divisibility_holds(self, q):
        return (self.nT % self.cT == 0 and self.nR % self.cR == 0
                and self.cR % self.cT == 0 and self.nR % self.nT == 0
                and psu_order(q) % self.nT == 0
                and pgu_order(q) % self.nR == 0)


@dataclass(frozen=True)
class ElementClassRecord:
    label: str
    count: int
    centralizer: int
    order_divides: int
    constraints: str = ''

    def elements(self, q):
        return self.count * psu_order(q) // self.centralizer


def _exact(num, den, what):
    if num % den:
        raise PreconditionError(f'{what}: {num}/{den} is not an integer')
    return num // den


# diagonal classes of order r | q+1


def triple_orbit_counts(r):
    """Number of orbits of unordered triples {u, v, w} of distinct residues
    mod r with u + v + w = 0, under scaling by units, keyed by the order of
    the scalings that fix the triple."""
    if r < 5 or not isprime(r):
        raise PreconditionError(f'exponent triples need a prime r >= 5, '
                                f'got {r}')
    triples = (r - 1) * (r - 2) // 6
    counts = {2: 1}
    rest = triples - (r - 1) // 2
    if r % 3 == 1:
        counts[3] = 1
        rest -= (r - 1) // 3
    counts[1] = rest // (r - 1)
    return counts


def triple_orbits(r):
    """Least member of each orbit of triples, with its stabilizer order."""
    if r > TRIPLE_ENUMERATION_LIMIT:
        raise PreconditionError(f'triples mod {r} are not enumerated')
    seen, orbits = set(), []
    for u in range(r):
        for v in range(u + 1, r):
            w = (-u - v) % r
            if w <= v:
                continue
            if (u, v, w) in seen:
                continue
            images = {tuple(sorted((k * u % r, k * v % r, k * w % r)))
                      for k in range(1, r)}
            seen |= images
            orbits.append(((u, v, w), (r - 1) // len(images)))
    return orbits


# representatives


def _unipotent_reps(ctx):
    """z0 and the z'_l, l < d, in the antidiagonal form."""
    F = ctx.F
    codes = F.elements()
    traces = np.asarray(F.trace(codes))
    eps = int(codes[(traces == 0) & (codes != 0)].min())
    z0 = ctx.projectivize(ctx.q_elem(0, eps))
    xi = int(F.exp[1])
    primes = []
    for l in range(ctx.d):
        a = F.power(xi, l)
        target = F.neg(F.norm(a))
        b = int(codes[traces == target].min())
        primes.append(ctx.projectivize(ctx.q_elem(a, b)))
    return z0, tuple(primes)


def _diag_rep(ctx, x, exps, form=IDENTITY):
    F = ctx.F
    return ctx.projectivize(ctx.diag(*(F.power(x, e) for e in exps), form))


def _check_ctx(ctx, q):
    if ctx is not None and ctx.q != q:
        raise PreconditionError(f'context is for q={ctx.q}, not q={q}')
    return ctx


def prime_order_classes(q, r, ctx=None):
    """Rows of the prime order subgroup table for subgroups of order r."""
    if not isprime(r):
        raise PreconditionError(f'r = {r} is not prime')
    p, _ = split_prime_power(q)
    ctx = _check_ctx(ctx, q)
    d = gcd(3, q + 1)
    if psu_order(q) % r:
        return []

    records = []
    if r == p:
        z0 = primes = None
        if ctx is not None:
            z0, primes = _unipotent_reps(ctx)
        records.append(ClassRecord(
            r, 'z0', q ** 3 * (q + 1) // d, q ** 3 * (q + 1) * (p - 1) // d,
            q ** 3 * (q + 1), q ** 3 * (q + 1) * (p - 1),
            reps=(z0,) if z0 else (),
        ))
        records.append(ClassRecord(
            r, "z0'", q ** 2, q ** 2 * (p - 1), q ** 2, q ** 2 * (p - 1),
            count_T=d, count_R=1, reps=primes or (),
            element_order=4 if p == 2 else None,
        ))
        return records

    if r == 2:
        cent = q * (q ** 2 - 1) * (q + 1)
        rep = ()
        if ctx is not None:
            rep = (ctx.projectivize(ctx.diag(1, ctx.F.neg(1), 1)),)
        records.append(ClassRecord(r, 'z2', cent // d, cent // d, cent, cent,
                                   conditions=('q odd',), reps=rep))
        return records

    if r == 3 and (q + 1) % 3 == 0:
        rep = ()
        if ctx is not None:
            omega = find_of_order(ctx.F, 3).code
            rep = (_diag_rep(ctx, omega, (0, 1, 2)),)
        records.append(ClassRecord(
            r, 'z3A', (q + 1) ** 2, 2 * (q + 1) ** 2,
            3 * (q + 1) ** 2, 6 * (q + 1) ** 2,
            conditions=('3 | q+1',), reps=rep, s_choices=(1, 2),
        ))
        if (q + 1) % 9 == 0:
            cent = q * (q + 1) ** 2 * (q - 1)
            rep = ()
            if ctx is not None:
                rho = find_of_order(ctx.F, q + 1).code
                k = (q + 1) // 9
                rep = (_diag_rep(ctx, rho, (k, k, -2 * k)),)
            records.append(ClassRecord(r, 'z3B', cent // 3, cent // 3,
                                       cent, cent,
                                       conditions=('9 | q+1',), reps=rep))
        return records

    if (q + 1) % r == 0:
        x = find_of_order(ctx.F, r).code if ctx is not None else None
        orbits = triple_orbits(r) if ctx is not None else []
        for s, count in sorted(triple_orbit_counts(r).items(),
                               reverse=True):
            if not count:
                continue
            reps = tuple(_diag_rep(ctx, x, exps)
                         for exps, stab in orbits if stab == s)
            records.append(ClassRecord(
                r, 'zA', (q + 1) ** 2 // d, s * (q + 1) ** 2 // d,
                (q + 1) ** 2, s * (q + 1) ** 2, count_T=count, count_R=count,
                conditions=(f'{r} | q+1',), reps=reps,
                s_choices=(s,), s_exact=s,
            ))
        cent = q * (q + 1) ** 2 * (q - 1)
        rep = (_diag_rep(ctx, x, (1, 1, -2)),) if ctx is not None else ()
        records.append(ClassRecord(r, 'zB', cent // d, cent // d, cent, cent,
                                   conditions=(f'{r} | q+1',), reps=rep))
        return records

    if (q - 1) % r == 0:
        rep = ()
        if ctx is not None:
            theta = find_of_order(ctx.F, q - 1).code
            a = (q - 1) // r
            rep = (_diag_rep(ctx, theta, (a, 0, -a), ANTIDIAG),)
        records.append(ClassRecord(
            r, 'z(q-1)', (q ** 2 - 1) // d, 2 * (q ** 2 - 1) // d,
            q ** 2 - 1, 2 * (q ** 2 - 1),
            conditions=(f'{r} | q-1',), reps=rep,
        ))
        return records

    # r | q^2 - q + 1 and r != 3; no representative over F_{q^2}
    n = q ** 2 - q + 1
    records.append(ClassRecord(r, 'z(q2-q+1)', n // d, 3 * n // d, n, 3 * n,
                               conditions=(f'{r} | q^2-q+1',)))
    return records


def normalizer_bound_T(q, r):
    """Largest |N_T(<z>)| over the subgroups <z> of order r in T."""
    records = prime_order_classes(q, r)
    if not records:
        raise PreconditionError(f'{r} does not divide |PSU(3,{q})|')
    return max(rec.nT for rec in records)


def pgu_order3_trichotomy(q, ctx=None):
    """The three R-classes of subgroups of order 3 when 3 | q+1."""
    if (q + 1) % 3:
        raise PreconditionError(f'3 does not divide q+1 = {q + 1}')
    split_prime_power(q)
    ctx = _check_ctx(ctx, q)
    reps_a = reps_b = ()
    if ctx is not None:
        omega = find_of_order(ctx.F, 3).code
        reps_a = (_diag_rep(ctx, omega, (0, 1, 2)),)
        reps_b = (_diag_rep(ctx, omega, (1, 0, 0)),)
    sl = q * (q + 1) ** 2 * (q - 1)
    torus = 3 * (q + 1) ** 2
    singer = 3 * (q ** 2 - q + 1)
    return [
        ClassRecord(3, 'zA', (q + 1) ** 2, 2 * (q + 1) ** 2,
                    torus, 2 * torus, reps=reps_a),
        ClassRecord(3, 'zB', sl // 3, sl // 3, sl, sl, reps=reps_b),
        ClassRecord(3, 'delta', singer // 3, singer // 3, singer, singer),
    ]


def element_class_inventory(q):
    """Classes of elements of order > 2 in T, family by family."""
    p, _ = split_prime_power(q)
    if q < 3:
        raise PreconditionError('the class list needs q >= 3')
    d = gcd(3, q + 1)
    n = q ** 2 - q + 1
    semisimple = (q + 1) // d - 1
    rest = _exact(n, d, 'C8 count') - 1
    return [
        ElementClassRecord('C2', 1, q ** 3 * (q + 1) // d, p,
                           'eps^q + eps = 0'),
        ElementClassRecord('C(l)', d, q ** 2, p, '0 <= l < d'),
        ElementClassRecord('C4', semisimple,
                           q * (q + 1) ** 2 * (q - 1) // d, q + 1,
                           '1 <= k <= (q+1)/d - 1'),
        ElementClassRecord('C5', semisimple, q * (q + 1) // d, p * (q + 1),
                           'C4 part times a transvection'),
        ElementClassRecord('C6prime', (d - 1) // 2, (q + 1) ** 2, 3,
                           '|omega| = 3'),
        ElementClassRecord('C6', _exact(rest, 6, 'C6 count'),
                           (q + 1) ** 2 // d, q + 1,
                           'k + l + m = 0 mod q+1'),
        ElementClassRecord('C7', _exact(rest, 2, 'C7 count') - (3 - d) // 2,
                           (q ** 2 - 1) // d, q ** 2 - 1,
                           'k != 0 mod q-1'),
        ElementClassRecord('C8', _exact(rest, 3, 'C8 count'), n // d, n,
                           '|tau| = q^2-q+1'),
    ]


def class_equation_total(q):
    return 1 + sum(rec.elements(q) for rec in element_class_inventory(q))


# brute force


@dataclass(frozen=True)
class CrossCheck:
    name: str
    formula: object
    computed: object

    @property
    def passed(self):
        return self.formula == self.computed


def _record_checks(ctx, group_T, group_R, rec):
    checks = []
    for idx, rep in enumerate(rec.reps):
        x = ctx.to_form(rep, IDENTITY).array
        name = f'{rec.label}[{idx}] r={rec.r}'
        cT, nT = group_T.centralizer_normalizer(x, rec.r)
        cR, nR = group_R.centralizer_normalizer(x, rec.r)
        checks += [
            CrossCheck(f'{name} |C_T|', rec.cT, cT),
            CrossCheck(f'{name} |N_T|', rec.nT, nT),
            CrossCheck(f'{name} |C_R|', rec.cR, cR),
            CrossCheck(f'{name} |N_R|', rec.nR, nR),
        ]
    return checks


def _unipotent_fusion_checks(ctx, group_T, group_R, rec):
    mats = [ctx.to_form(rep, IDENTITY).array for rep in rec.reps]
    classes_T = {int(group_T.conjugacy_class(x)[0]) for x in mats}
    classes_R = {int(group_R.conjugacy_class(x)[0]) for x in mats}
    return [
        CrossCheck(f'{rec.label} T-classes', rec.count_T, len(classes_T)),
        CrossCheck(f'{rec.label} R-classes', rec.count_R, len(classes_R)),
    ]


def _inventory_check(q, census, order_T):
    formula = Counter()
    for rec in element_class_inventory(q):
        if rec.count:
            formula[rec.centralizer] += rec.count
    computed = Counter(order_T // info.size for info in census
                       if info.order > 1)
    return CrossCheck('element class census', dict(sorted(formula.items())),
                      dict(sorted(computed.items())))


def _trichotomy_checks(q, group_R, census_R):
    formula = Counter()
    for rec in pgu_order3_trichotomy(q):
        formula[rec.cR] += rec.element_classes_R()
    computed = Counter(group_R.order // info.size for info in census_R
                       if info.order == 3)
    return [CrossCheck('order 3 classes of R',
                       dict(sorted(formula.items())),
                       dict(sorted(computed.items())))]


def _outside_checks(ctx, group_T, census_R):
    """Prime order classes of R not meeting T all have order 3."""
    reps = np.array([info.rep for info in census_R], dtype=np.int64)
    inside = enumeration.contains(group_T.keys, reps)
    orders = sorted({info.order for info, hit in zip(census_R, inside)
                     if not hit and isprime(info.order)})
    return CrossCheck('prime orders of R outside T', [3] if orders else [],
                      orders)


def crosscheck_against_bruteforce(ctx, cap=None, strict=False):
    """Compare the class tables with an enumeration of T and R.

    Returns CrossCheck results; with strict=True the first mismatch
    raises Discrepancy.
    """
    q, ops = ctx.q, ctx.ops
    bound = ctx.p * (q * q + q + 1)
    group_T = enumeration.ListedGroup(ops, ctx.psu_generators(), cap)
    group_R = group_T if ctx.d == 1 \
        else enumeration.ListedGroup(ops, ctx.pgu_generators(), cap)
    logger.info(f'Listed PSU(3,{q}) ({group_T.order}) and '
                f'PGU(3,{q}) ({group_R.order})')

    checks = [
        CrossCheck('|T|', psu_order(q), group_T.order),
        CrossCheck('|R|', pgu_order(q), group_R.order),
        CrossCheck('class equation', psu_order(q), class_equation_total(q)),
    ]
    census_T = group_T.census(bound)
    checks.append(_inventory_check(q, census_T, group_T.order))

    for r in primefactors(psu_order(q)):
        records = prime_order_classes(q, r, ctx)
        for rec in records:
            checks += _record_checks(ctx, group_T, group_R, rec)
            if rec.label == "z0'":
                checks += _unipotent_fusion_checks(ctx, group_T, group_R,
                                                   rec)
            if not rec.reps:
                cents = sorted({group_T.order // info.size
                                for info in census_T if info.order == r})
                checks.append(CrossCheck(f'{rec.label} r={r} |C_T|',
                                         [rec.cT], cents))
        checks.append(CrossCheck(
            f'element classes of order {r}',
            sum(rec.element_classes_T() for rec in records),
            sum(1 for info in census_T if info.order == r),
        ))

    if ctx.d == 3:
        census_R = group_R.census(bound)
        checks += _trichotomy_checks(q, group_R, census_R)
        checks.append(_outside_checks(ctx, group_T, census_R))

    failed = [check for check in checks if not check.passed]
    for check in failed:
        logger.error(f'{check.name}: formula {check.formula}, '
                     f'enumeration {check.computed}')
        if strict:
            raise Discrepancy(check.name, check.formula, check.computed)
    logger.info(f'{len(checks) - len(failed)}/{len(checks)} class checks '
                f'passed at q={q}')
    return checks
