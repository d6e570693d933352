"""
Exact evaluation of fixed point counts and of the Saxl graph criterion

    Q(G) = |M|/|Omega| * sum (|z| - 1) Fix(<z>) / |N_M(<z>)|  <  1/2

over the classes of prime order subgroups <z> of a maximal subgroup M.
Every quantity is an int or a fractions.Fraction; nothing here touches
floating point.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import isprime, primefactors

from bounds.classdata import normalizer_bound_T
from bounds.exceptions import PreconditionError
from groups.unitary import pgu_order, psu_order

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
UNIT = Fraction(1, 26)

SETTINGS = ('c1', 'c3', 'psl27', 'psl29')

# (e, p, m') where q'^2 - q' + 1 is prime and carries the whole budget
SINGLE_CLASS_TRIPLES = {(3, 2, 2), (3, 2, 4), (3, 3, 2)}


def _reduce(value):
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


def manning_fix(n_G, n_H):
    """Fixed points of K on [G:H]: sum over the H-classes K_i of
    G-conjugates of K in H of |N_G(K_i)| / |N_H(K_i)|."""
    n_G, n_H = list(n_G), list(n_H)
    if not n_G or len(n_G) != len(n_H):
        raise PreconditionError(
            f'normalizer lists of lengths {len(n_G)} and {len(n_H)}')
    if any(n == 0 for n in n_H):
        raise PreconditionError('zero normalizer order')
    return _reduce(sum(Fraction(a, b) for a, b in zip(n_G, n_H)))


def q_term(order_m, omega, r, fix, n_M):
    """(|M|/|Omega|) (r - 1) Fix / |N_M|."""
    if min(order_m, omega, r, n_M) <= 0 or fix < 0:
        raise PreconditionError('Q-term inputs must be positive')
    return Fraction(order_m) / Fraction(omega) * (r - 1) * Fraction(fix) \
        / n_M


def fpr(fix, omega):
    if omega <= 0 or not 0 <= fix <= omega:
        raise PreconditionError(f'fixed point count {fix} on {omega} points')
    return Fraction(fix, omega)


@dataclass(frozen=True)
class LedgerTerm:
    """Q-contribution of `count` classes sharing one normalizer order."""
    label: str
    r: int
    value: Fraction
    kind: str = 'exact'
    group: str = None
    budget: Fraction = None
    chain: Fraction = None
    count: int = 1

    @property
    def each(self):
        return self.value / self.count

    @property
    def within_budget(self):
        return self.budget is None or self.each < self.budget

    @property
    def chain_holds(self):
        return self.chain is None or self.each <= self.chain


@dataclass(frozen=True)
class BudgetCheck:
    group: str
    total: Fraction
    budget: Fraction

    @property
    def holds(self):
        return self.total < self.budget


@dataclass
class QLedger:
    setting: str
    params: dict
    ratio: Fraction
    terms: list = field(default_factory=list)
    group_budgets: dict = field(default_factory=dict)

    @property
    def total(self):
        return sum((t.value for t in self.terms), Fraction(0))

    @property
    def verdict(self):
        return self.total < HALF

    def term(self, label):
        for t in self.terms:
            if t.label == label:
                return t
        raise KeyError(label)

    def budget_checks(self):
        checks = [BudgetCheck(t.label, t.each, t.budget)
                  for t in self.terms
                  if t.group is None and t.budget is not None]
        for group, budget in self.group_budgets.items():
            total = sum((t.value for t in self.terms if t.group == group),
                        Fraction(0))
            checks.append(BudgetCheck(group, total, budget))
        return checks

    @property
    def budgets_hold(self):
        return all(check.holds for check in self.budget_checks())

    @property
    def chains_hold(self):
        return all(t.chain_holds for t in self.terms)

    @property
    def passed(self):
        return self.verdict and self.budgets_hold and self.chains_hold


class _Builder:
    """Accumulates terms over one (M, G) pair."""

    def __init__(self, setting, params, order_m, order_g):
        self.order_m = order_m
        self.omega = Fraction(order_g, order_m)
        self.ledger = QLedger(setting, params, Fraction(order_m) / self.omega)

    def add(self, label, r, fix, n_M, budget=None, kind='exact', group=None,
            count=1, chain=None, chain_fix=None):
        """chain is a closed-form bound on one class's term; chain_fix is
        a bound on Fix that is turned into one."""
        each = q_term(self.order_m, self.omega, r, fix, n_M)
        if chain_fix is not None:
            chain = q_term(self.order_m, self.omega, r, chain_fix, n_M)
        self.ledger.terms.append(LedgerTerm(
            label, r, each * count, kind, group,
            None if budget is None else Fraction(budget),
            None if chain is None else Fraction(chain), count))

    def single(self, label, r, n_G, n_M, budget=None, kind='exact', **kw):
        self.add(label, r, manning_fix([n_G], [n_M]), n_M, budget, kind,
                 **kw)

    def group_budget(self, group, budget):
        self.ledger.group_budgets[group] = Fraction(budget)


# parameter predicates


def c_value(p, m_prime, e):
    q_prime = p ** m_prime
    q = q_prime ** e
    return gcd((q + 1) // (q_prime + 1), 3)


def regime_c1(p, m_prime, e):
    if not (isprime(p) and isprime(e) and e > 2 and m_prime >= 1):
        return False
    q_prime = p ** m_prime
    if c_value(p, m_prime, e) != 1:
        return False
    return (e >= 5 and q_prime >= 3) or (e == 3 and q_prime >= 4)


def regime_c3(p, m_prime):
    q_prime = p ** m_prime
    return isprime(p) and m_prime >= 1 and q_prime >= 5 \
        and (q_prime + 1) % 3 == 0


def psl27_admissible(q):
    return isprime(q) and q % 7 in (3, 5, 6) and q >= 13


def psl29_admissible(q):
    return isprime(q) and q % 15 in (11, 14)


def _odd_primes(n, exclude=()):
    return [r for r in primefactors(n) if r != 2 and r not in exclude]


@dataclass(frozen=True)
class _Subfield:
    p: int
    m_prime: int
    e: int

    @property
    def qp(self):
        return self.p ** self.m_prime

    @property
    def q(self):
        return self.qp ** self.e

    @property
    def m(self):
        return self.m_prime * self.e


# c = 1: G = PGammaU(3,q), M = PGU(3,q'):<f>


def _c1_classes_of_m1(b, s, small):
    p, e, m, qp, q = s.p, s.e, s.m, s.qp, s.q
    two_m = 2 * m

    if p % 2:
        b.single('z2', 2, two_m * q * (q * q - 1) * (q + 1),
                 two_m * qp * (qp * qp - 1) * (qp + 1), UNIT,
                 chain=Fraction(793, 576 * qp ** (4 * (e - 2))))

    if small:
        b.single('z0', p, two_m * q ** 3 * (q + 1) * (p - 1),
                 two_m * qp ** 3 * (qp + 1) * (p - 1), UNIT / 10)
    else:
        b.single('z0', p, two_m * q ** 3 * (q + 1) * (p - 1),
                 qp ** 3 * (qp + 1) * (p - 1), UNIT, kind='bound')
    b.single("z0'", p, two_m * q * q * (p - 1), qp * qp * (p - 1),
             UNIT * Fraction(85, 100) if small else UNIT, kind='bound')

    if (qp + 1) % 3 == 0:
        b.single('zA[r=3]', 3, 6 * m * 2 * (q + 1) ** 2,
                 6 * m * (qp + 1) ** 2, UNIT, kind='bound')
        b.single('zB[r=3]', 3, two_m * q * (q + 1) ** 2 * (q - 1),
                 two_m * qp * (qp + 1) ** 2 * (qp - 1), UNIT)
        b.single("delta'[r=3]", 3, 6 * m * (q * q - q + 1),
                 6 * m * (qp * qp - qp + 1), UNIT)

    for r in _odd_primes(qp - 1):
        budget = UNIT * Fraction(2, 100) if small \
            else Fraction(1, 26 * (qp - 1))
        b.single(f'z(q\'-1)[r={r}]', r, 2 * (q * q - 1) * two_m,
                 2 * (qp * qp - 1) * two_m, budget)

    for r in _odd_primes(qp + 1, exclude=(3,)):
        b.single(f'zA[r={r}]', r, 6 * (q + 1) ** 2 * two_m,
                 (qp + 1) ** 2 * two_m,
                 UNIT * Fraction(75, 100) if small
                 else Fraction(1, 13 * (qp + 1) ** 2),
                 kind='bound', count=(r - 3) // 2)
        b.single(f'zB[r={r}]', r, q * (q - 1) * (q + 1) ** 2 * two_m,
                 qp * (qp - 1) * (qp + 1) ** 2 * two_m,
                 UNIT * Fraction(28, 100) if small
                 else Fraction(1, 26 * (qp + 1)))

    singer = qp * qp - qp + 1
    for r in _odd_primes(singer, exclude=(3,)):
        n_G = 3 * (q * q - q + 1) * (1 if e == 3 else two_m)
        if small:
            budget = UNIT / 2
        elif (e, p, s.m_prime) in SINGLE_CLASS_TRIPLES:
            budget = UNIT
        else:
            budget = Fraction(1, 26 * singer)
        b.single(f'z(q\'^2-q\'+1)[r={r}]', r, n_G, 3 * singer, budget,
                 kind='bound')


def _c1_outer_classes(b, s, small):
    p, e, m, mp, qp, q = s.p, s.e, s.m, s.m_prime, s.qp, s.q
    two_m = 2 * m
    order_m = b.order_m

    for r in _odd_primes(mp, exclude=(e,)):
        b.single(f'f^(2m/{r})', r, two_m * pgu_order(p ** (m // r)),
                 two_m * pgu_order(p ** (mp // r)), Fraction(1, 26 * mp))

    b.single('f^m', 2, two_m * q * (q * q - 1),
             two_m * qp * (qp * qp - 1), UNIT / 20 if small else UNIT)

    group = f'r=e={e}'
    if pgu_order(qp) % e:
        b.add("f'", e, 1, order_m, UNIT, kind='bound')
        return
    if e == p:
        fix = Fraction(order_m, e * qp ** 3 * (qp + 1)) \
            + Fraction(order_m, e * qp ** 2) + 1
        parts = [("f'", order_m, 1),
                 ("z0 f'", e * qp ** 3 * (qp + 1), 1),
                 ("z0' f'", e * qp ** 2, 1)]
        budget = UNIT
    elif (qp + 1) % e == 0:
        fix = Fraction((e - 3) * (e - 1) * order_m,
                       2 * (qp + 1) ** 2 * e) \
            + Fraction((e - 1) * order_m,
                       qp * (qp + 1) ** 2 * (qp - 1) * e) + 1
        parts = [("f'", order_m, 1),
                 ("zA f'", (qp + 1) ** 2 * e, (e - 1) * (e - 3) // 2),
                 ("zB f'", qp * (qp + 1) ** 2 * (qp - 1) * e, e - 1)]
        budget = UNIT
    elif (qp - 1) % e == 0:
        fix = 1 + Fraction((e - 1) * order_m, 2 * e * (qp * qp - 1))
        parts = [("f'", order_m, 1),
                 ("z(q'-1) f'", 2 * e * (qp * qp - 1), e - 1)]
        budget = 4 * UNIT if small else UNIT
    else:
        fix = 1 + Fraction((e - 1) * order_m, (qp * qp - qp + 1) * e)
        parts = [("f'", order_m, 1),
                 ("z(q'^2-q'+1) f'", (qp * qp - qp + 1) * e, e - 1)]
        budget = UNIT
    for label, n_M, count in parts:
        if count:
            b.add(label, e, fix, n_M, kind='bound', group=group,
                  count=count)
    b.group_budget(group, budget)


def qcheck_c1(p, m_prime, e):
    """Ledger for M = PGU(3,q'):<f> in PGammaU(3,q'^e) when c = 1."""
    s = _Subfield(p, m_prime, e)
    if s.qp == 2:
        raise PreconditionError("q' = 2 is excluded: PGU(3,2):<f> is "
                                "soluble")
    if not isprime(e) or e == 2:
        raise PreconditionError(f'e = {e} is not an odd prime')
    if c_value(p, m_prime, e) != 1:
        raise PreconditionError(f'c = 3 for (p, m\', e) = '
                                f'({p}, {m_prime}, {e})')
    if not regime_c1(p, m_prime, e):
        raise PreconditionError(f'({p}, {m_prime}, {e}) is outside the '
                                f'c = 1 regime')
    small = e == 3 and s.qp == 4
    two_m = 2 * s.m
    b = _Builder('c1', {'p': p, 'm_prime': m_prime, 'e': e},
                 two_m * pgu_order(s.qp), two_m * pgu_order(s.q))
    _c1_classes_of_m1(b, s, small)
    _c1_outer_classes(b, s, small)
    return _logged(b.ledger)


# c = 3: G = PSigmaU(3,q), M = PGU(3,q'):<f>, e = 3


def qcheck_c3(p, m_prime):
    """Ledger for M = PGU(3,q'):<f> in PSigmaU(3,q'^3) when c = 3."""
    if not regime_c3(p, m_prime):
        raise PreconditionError(f"(p, m') = ({p}, {m_prime}) needs q' >= 5 "
                                f"and 3 | q'+1")
    s = _Subfield(p, m_prime, 3)
    m, mp, qp, q = s.m, m_prime, s.qp, s.q
    two_m = 2 * m
    order_m = two_m * pgu_order(qp)
    b = _Builder('c3', {'p': p, 'm_prime': m_prime, 'e': 3},
                 order_m, two_m * psu_order(q))
    singer = qp * qp - qp + 1

    if p % 2:
        b.single('z2', 2, two_m * q * (q * q - 1) * (q + 1) // 3,
                 two_m * qp * (qp * qp - 1) * (qp + 1), UNIT,
                 chain=Fraction(15, 11 * qp ** 4))
    b.single('z0', p, two_m * q ** 3 * (q + 1) * (p - 1) // 3,
             3 * qp ** 3 * (qp + 1) * (p - 1), UNIT, kind='bound')
    b.single("z0'", p, two_m * q * q * (p - 1), 3 * qp * qp * (p - 1),
             UNIT, kind='bound')

    group = 'r=3'
    b.single('zA[r=3]', 3, two_m * 2 * (q + 1) ** 2, 6 * m * (qp + 1) ** 2,
             kind='bound', group=group)
    n_G = two_m * q * (q + 1) * (q * q - 1) // 3
    n_B = two_m * qp * (qp + 1) * (qp * qp - 1)
    n_D = 6 * m * singer
    fix = manning_fix([n_G, n_G], [n_B, n_D])
    b.add('zB[r=3]', 3, fix, n_B, kind='bound', group=group)
    b.add("delta'[r=3]", 3, fix, n_D, kind='bound', group=group)
    b.group_budget(group, 3 * UNIT)

    for r in _odd_primes(qp - 1):
        b.single(f'z(q\'-1)[r={r}]', r, 4 * m * (q * q - 1) // 3,
                 4 * m * (qp * qp - 1), Fraction(1, 26 * (qp - 1)))
    for r in _odd_primes(qp + 1, exclude=(3,)):
        b.single(f'zA[r={r}]', r, two_m * 6 * (q + 1) ** 2 // 3,
                 two_m * (qp + 1) ** 2, Fraction(1, 13 * (qp + 1) ** 2),
                 kind='bound', count=(r - 3) // 2)
        b.single(f'zB[r={r}]', r, two_m * q * (q * q - 1) * (q + 1) // 3,
                 two_m * qp * (qp * qp - 1) * (qp + 1),
                 Fraction(1, 26 * (qp + 1)))
    for r in _odd_primes(singer, exclude=(3,)):
        b.single(f'z(q\'^2-q\'+1)[r={r}]', r, two_m * (q * q - q + 1),
                 6 * m * singer, Fraction(1, 26 * singer))

    for r in _odd_primes(mp, exclude=(3,)):
        b.single(f'f^(2m/{r})', r, two_m * pgu_order(p ** (m // r)) // 3,
                 two_m * pgu_order(p ** (mp // r)), Fraction(1, 26 * mp))
    b.add('f^m', 2, qp * qp * (qp ** 4 + qp * qp + 1),
          two_m * qp * (qp * qp - 1), UNIT)

    group = 'r=e=3'
    n_A = 9 * (qp + 1) ** 2
    n_B = 3 * qp * (qp + 1) * (qp * qp - 1)
    n_D = 9 * singer
    fix = 1 + Fraction(order_m, n_A) + Fraction(order_m, n_B) \
        + Fraction(order_m, n_D)
    for label, n_M in (("f'", order_m), ("zA f'", n_A), ("zB f'", n_B),
                       ("delta' f'", n_D)):
        b.add(label, 3, fix, n_M, kind='bound', group=group)
    b.group_budget(group, UNIT)
    return _logged(b.ledger)


# M_0 = PSL(2,7), PSL(2,9) in PSigmaU(3,p)


def _psl_ledger(setting, q, order_m, normalizers, orders, x3_chain,
                x4_chain):
    d = gcd(3, q + 1)
    b = _Builder(setting, {'q': q}, order_m, 2 * psu_order(q))
    n1, n2, n3, n4 = normalizers
    _, r2, r3, r4 = orders
    b.single('x1', 2, 2 * q * (q * q - 1) * (q + 1) // d, n1)
    b.single('x2', r2, 2 * q * (q * q - 1), n2)
    b.single('x3', r3, 2 * normalizer_bound_T(q, r3), n3, kind='bound',
             chain_fix=x3_chain * Fraction(q ** 4, d))
    b.single('x4', r4, 2 * normalizer_bound_T(q, r4), n4, kind='bound',
             chain_fix=x4_chain * Fraction(q ** 4, d))
    return _logged(b.ledger)


def qcheck_psl27(q):
    if not psl27_admissible(q):
        raise PreconditionError(f'q = {q} is not a prime = 3, 5, 6 mod 7 '
                                f'with q >= 13')
    return _psl_ledger('psl27', q, 336, (16, 12, 12, 42), (2, 2, 3, 7),
                       Fraction(7, 39), Fraction(2, 39))


def qcheck_psl29(q):
    if not psl29_admissible(q):
        raise PreconditionError(f'q = {q} is not a prime = 11, 14 mod 15')
    return _psl_ledger('psl29', q, 720, (16, 20, 18, 20), (2, 2, 3, 5),
                       Fraction(4, 33), Fraction(6, 55))


def _logged(ledger):
    logger.debug(f'{ledger.setting} {ledger.params}: total '
                 f'{float(ledger.total):.6g}, verdict {ledger.verdict}')
    return ledger


def qcheck(setting, point):
    """Dispatch on the setting name; point is a tuple of parameters."""
    builders = {'c1': qcheck_c1, 'c3': qcheck_c3,
                'psl27': qcheck_psl27, 'psl29': qcheck_psl29}
    if setting not in builders:
        raise PreconditionError(f'unknown setting {setting!r}')
    return builders[setting](*point)


@dataclass(frozen=True)
class DecayProfile:
    label: str
    points: tuple
    values: tuple
    settles_at: int

    @property
    def decreasing_tail(self):
        return self.settles_at < len(self.values)


def decay_profile(setting, label, ladder):
    """One term along a ladder of parameter points; settles_at is the first
    index from which the values never increase."""
    ladder = tuple(tuple(point) for point in ladder)
    values = tuple(qcheck(setting, point).term(label).each
                   for point in ladder)
    settles_at = len(values)
    for idx in range(len(values) - 1, -1, -1):
        if idx + 1 < len(values) and values[idx + 1] > values[idx]:
            break
        settles_at = idx
    return DecayProfile(label, ladder, values, settles_at)
