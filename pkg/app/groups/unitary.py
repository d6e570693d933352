"""
GU(3,q) >= SU(3,q) as explicit matrices over F_{q^2}, their images in
PGU(3,q) and PSU(3,q), the outer automorphisms delta and f, and the point
stabilizers used to build primitive actions.
"""
import logging
from dataclasses import dataclass, field
from functools import partial
from math import gcd

import numpy as np

from groups import enumeration
from groups.exceptions import ActionError, CapExceeded, CaseError, FormError
from groups.ff import FieldElem, find_of_order
from groups.matrices import KEY_ORDER_LIMIT, MatrixOps

logger = logging.getLogger(__name__)


def psu_order(q):
    return q ** 3 * (q ** 3 + 1) * (q ** 2 - 1) // gcd(3, q + 1)


def pgu_order(q):
    return q ** 3 * (q ** 3 + 1) * (q ** 2 - 1)


def subfield_index(q, q_prime):
    """c = ((q+1)/(q'+1), 3)."""
    return gcd((q + 1) // (q_prime + 1), 3)


@dataclass(frozen=True)
class HermForm:
    label: str
    gram: tuple

    @property
    def array(self):
        return np.array(self.gram, dtype=np.int64)


ANTIDIAG = HermForm('antidiag', ((0, 0, 1), (0, 1, 0), (1, 0, 0)))
IDENTITY = HermForm('identity', ((1, 0, 0), (0, 1, 0), (0, 0, 1)))


@dataclass(frozen=True)
class GroupElem:
    mat: tuple
    form: HermForm = IDENTITY

    @classmethod
    def of(cls, array, form=IDENTITY):
        array = np.asarray(array, dtype=np.int64).reshape(3, 3)
        return cls(tuple(int(v) for v in array.flat), form)

    @property
    def array(self):
        return np.array(self.mat, dtype=np.int64).reshape(3, 3)


@dataclass(frozen=True)
class ProjElem:
    canonical: GroupElem

    @property
    def array(self):
        return self.canonical.array

    @property
    def form(self):
        return self.canonical.form


@dataclass(frozen=True)
class AutoElem:
    """x f^i in PGU(3,q):<f>; conjugation by f is the entrywise p-th power."""
    ctx: 'UnitaryContext' = field(compare=False, repr=False)
    proj: ProjElem
    field_power: int = 0

    def __mul__(self, other):
        return self.ctx.auto_mul(self, other)

    def __pow__(self, n):
        return self.ctx.auto_power(self, n)

    def inverse(self):
        return self.ctx.auto_inverse(self)

    def is_identity(self):
        return self.field_power == 0 and self.ctx.is_trivial(self.proj)

    def order(self):
        return self.ctx.auto_order(self)


@dataclass(frozen=True)
class CaseTag:
    """Point stabilizer family: 'so', 'sl' or 'subfield' with q'."""
    kind: str
    q_prime: int = None

    def __str__(self):
        if self.kind == 'subfield':
            return f'subfield:{self.q_prime}'
        return self.kind


def parse_case(text):
    if isinstance(text, CaseTag):
        return text
    text = str(text).strip().lower()
    if text in ('so', 'sl'):
        return CaseTag(text)
    if text.startswith('subfield:'):
        try:
            q_prime = int(text.split(':', 1)[1])
        except ValueError:
            raise CaseError(f'bad subfield order in {text!r}')
        return CaseTag('subfield', q_prime)
    raise CaseError(f'unknown case {text!r}')


def stabilizer_order(case, q):
    """|M_0| for the point stabilizer of the given case in PSU(3,q)."""
    case = parse_case(case)
    if case.kind == 'so':
        return q * (q ** 2 - 1)
    if case.kind == 'sl':
        return q * (q ** 2 - 1) * (q + 1) // gcd(3, q + 1)
    return psu_order(case.q_prime) * subfield_index(q, case.q_prime)


class UnitaryContext:
    """Unitary groups of dimension 3 over a tower F_q < F_{q^2}."""

    def __init__(self, tower):
        self.tower = tower
        self.F = F = tower.ext
        self.p, self.m, self.q = tower.p, tower.m, tower.q
        self.d = gcd(3, self.q + 1)

        q = self.q
        self.scalars = np.sort(F.exp[(q - 1) * np.arange(q + 1)])
        self.ops = MatrixOps(F, self.scalars)
        self._special_det = np.zeros(F.order, dtype=bool)
        self._special_det[np.asarray(F.power(self.scalars, 3))] = True
        self.mu = find_of_order(F, q + 1).code
        self.transition = self._transition(2 * self.m)
        self._identity_key = None
        logger.debug(f'unitary context for q={q}, d={self.d}')

    def __repr__(self):
        return f'UnitaryContext(q={self.q})'

    # field helpers

    def _code(self, a):
        if isinstance(a, FieldElem):
            if a.ctx is not self.F:
                raise FormError('element of a different field')
            return a.code
        return int(a)

    def _subfield_codes(self, degree):
        codes = self.F.elements()
        return codes[np.asarray(self.F.in_subfield(codes, degree))]

    def _transition(self, degree):
        """C with C J conj(C)^T = I, entries in F_{p^degree}."""
        F = self.F
        sub = self._subfield_codes(degree)
        z = int(sub[np.asarray(F.trace(sub)) == 1].min())
        s = int(sub[np.asarray(F.norm(sub)) == F.neg(1)].min())
        return np.array([
            [1, 0, z],
            [0, 1, 0],
            [s, 0, F.neg(F.mul(F.conj(z), s))],
        ], dtype=np.int64)

    # standard generators (antidiagonal form)

    def q_elem(self, a, b):
        F = self.F
        a, b = self._code(a), self._code(b)
        if F.add(F.trace(b), F.norm(a)) != 0:
            raise FormError(f'q({a}, {b}): b + conj(b) + a conj(a) != 0')
        return GroupElem.of([[1, a, b],
                             [0, 1, F.neg(F.conj(a))],
                             [0, 0, 1]], ANTIDIAG)

    def h_elem(self, k):
        F = self.F
        k = self._code(k)
        if k == 0:
            raise FormError('h(k) needs k != 0')
        return GroupElem.of(self.ops.diag(F.power(k, -self.q),
                                          F.power(k, self.q - 1), k), ANTIDIAG)

    def tau(self):
        return GroupElem.of([[0, 0, 1],
                             [0, self.F.neg(1), 0],
                             [1, 0, 0]], ANTIDIAG)

    def diag(self, a, b, c, form=IDENTITY):
        return GroupElem.of(self.ops.diag(self._code(a), self._code(b),
                                          self._code(c)), form)

    # predicates

    def _unpack(self, mat, form):
        if isinstance(mat, (GroupElem, ProjElem)):
            return mat.array, mat.form
        return self.ops.batch(mat), form

    def is_unitary(self, mat, form=IDENTITY):
        A, form = self._unpack(mat, form)
        if np.any(np.asarray(self.ops.det(A)) == 0):
            raise FormError('singular matrix')
        G = form.array
        lhs = self.ops.mul(self.ops.mul(A, G), self.ops.conj_transpose(A))
        return _bool(np.all(lhs == G, axis=(-1, -2)))

    def is_special(self, mat):
        A, _ = self._unpack(mat, IDENTITY)
        det = np.asarray(self.ops.det(A))
        if np.any(det == 0):
            raise FormError('singular matrix')
        return _bool(det == 1)

    def in_psu(self, mat):
        """Image in PSU(3,q) of a unitary matrix: det is a cube of a
        (q+1)-th root of unity."""
        A, _ = self._unpack(mat, IDENTITY)
        return _bool(self._special_det[np.asarray(self.ops.det(A))])

    # projective elements

    def projectivize(self, g, form=IDENTITY):
        A, form = self._unpack(g, form)
        return ProjElem(GroupElem.of(self.ops.canonical(A), form))

    def canonical(self, mats):
        return self.ops.canonical(mats)

    def identity_key(self):
        if self._identity_key is None:
            self._identity_key = int(
                self.ops.canonical_keys(self.ops.identity(1))[0])
        return self._identity_key

    def is_trivial(self, x):
        return bool(self.ops.is_scalar(x.array))

    def transport(self, mats, source, target, transition=None):
        """Rewrite matrices given w.r.t. one Gram matrix in the other."""
        A = self.ops.batch(mats)
        if source == target:
            return A
        C = self.transition if transition is None else transition
        C_inv = self.ops.inv(C)
        if source == ANTIDIAG and target == IDENTITY:
            return self.ops.mul_chain(C, A, C_inv)
        if source == IDENTITY and target == ANTIDIAG:
            return self.ops.mul_chain(C_inv, A, C)
        raise FormError(f'no transition from {source.label} to {target.label}')

    def to_form(self, x, form):
        if isinstance(x, ProjElem):
            return self.projectivize(
                self.transport(x.array, x.form, form), form)
        return GroupElem.of(self.transport(x.array, x.form, form), form)

    # outer automorphisms

    def apply_field_auto(self, x, i):
        i %= 2 * self.m
        return self.projectivize(self.ops.frobenius(x.array, i), x.form)

    def delta(self, form=IDENTITY):
        """Diagonal outer automorphism [mu,1,1] (identity form) or
        [1,mu,1] (antidiagonal form), mu of order q+1."""
        if form == IDENTITY:
            g = self.diag(self.mu, 1, 1, form)
        else:
            g = self.diag(1, self.mu, 1, form)
        return AutoElem(self, self.projectivize(g))

    def field_auto(self, i=1, form=IDENTITY):
        identity = self.projectivize(self.ops.identity(), form)
        return AutoElem(self, identity, i % (2 * self.m))

    def auto_mul(self, x, y):
        if x.proj.form != y.proj.form:
            raise FormError('elements written in different forms')
        two_m = 2 * self.m
        B = self.ops.frobenius(y.proj.array, (-x.field_power) % two_m)
        prod = self.ops.mul(x.proj.array, B)
        return AutoElem(self, self.projectivize(prod, x.proj.form),
                        (x.field_power + y.field_power) % two_m)

    def auto_inverse(self, x):
        A_inv = self.ops.inv(x.proj.array)
        image = self.ops.frobenius(A_inv, x.field_power)
        return AutoElem(self, self.projectivize(image, x.proj.form),
                        (-x.field_power) % (2 * self.m))

    def auto_power(self, x, n):
        if n < 0:
            x, n = self.auto_inverse(x), -n
        out = self.field_auto(0, x.proj.form)
        for _ in range(n):
            out = self.auto_mul(out, x)
        return out

    def auto_order(self, x):
        bound = 2 * self.m * pgu_order(self.q)
        y = x
        for k in range(1, bound + 1):
            if y.is_identity():
                return k
            y = self.auto_mul(y, x)
        raise FormError('element order not found')

    def outer_order(self, x):
        """Least k >= 1 with x^k in PSU(3,q)."""
        y = x
        for k in range(1, 2 * self.m * self.d + 1):
            if y.field_power == 0 and self.in_psu(y.proj):
                return k
            y = self.auto_mul(y, x)
        raise FormError('no power of the element lies in PSU(3,q)')

    # generators

    def _generator_triple(self, degree, transition):
        """q(1,b0), h(k0), tau over F_{p^degree}, rewritten in the
        identity form through the given transition matrix."""
        F = self.F
        sub = self._subfield_codes(degree)
        b0 = int(sub[np.asarray(F.add(F.trace(sub), 1)) == 0].min())
        k0 = find_of_order(F, self.p ** degree - 1).code
        gens = np.stack([self.q_elem(1, b0).array,
                         self.h_elem(k0).array,
                         self.tau().array])
        return self.transport(gens, ANTIDIAG, IDENTITY, transition)

    def psu_generators(self, form=IDENTITY):
        """Generators of PSU(3,q) as canonical matrices."""
        gens = self._generator_triple(2 * self.m, self.transition)
        return self.canonical(self.transport(gens, IDENTITY, form))

    def pgu_generators(self):
        delta = self.delta().proj.array
        return np.concatenate([self.psu_generators(), delta[None]])

    # point stabilizers

    def check_case(self, case):
        case = parse_case(case)
        if case.kind == 'so' and self.p == 2:
            raise CaseError('the SO(3,q) case needs q odd')
        if case.kind == 'subfield':
            q_prime, m_prime = case.q_prime, 0
            while q_prime > 1 and q_prime % self.p == 0:
                q_prime //= self.p
                m_prime += 1
            if q_prime != 1 or m_prime == 0 or self.m % m_prime:
                raise CaseError(f"{case.q_prime} is not a subfield order of "
                                f"F_{self.q}")
            if (self.m // m_prime) % 2 == 0 or m_prime == self.m:
                raise CaseError(f'F_{self.q} is not an odd degree proper '
                                f'extension of F_{case.q_prime}')
        return case

    def check_action_case(self, case):
        """check_case, restricted to the cases a coset action is built
        for; PGU(3,2) is soluble so q' = 2 gives no such action."""
        case = self.check_case(case)
        if case.kind == 'subfield' and case.q_prime == 2:
            raise CaseError("PGU(3,2) is soluble; q' = 2 is excluded")
        return case

    def _subfield_degree(self, case):
        q_prime, m_prime = case.q_prime, 0
        while q_prime > 1:
            q_prime //= self.p
            m_prime += 1
        return 2 * m_prime

    def membership_oracle(self, case):
        """Callable deciding membership of identity-form matrices in M_0."""
        case = self.check_case(case)
        if case.kind == 'so':
            return self._in_so
        if case.kind == 'sl':
            return self._in_point_stabilizer
        return partial(self._in_subfield_group,
                       degree=self._subfield_degree(case))

    def subgroup_membership(self, case, x):
        A = self.to_form(x, IDENTITY).array
        return bool(self.membership_oracle(case)(A[None])[0])

    def _in_so(self, mats):
        F, ops = self.F, self.ops
        A = ops.batch(mats)
        shape = A.shape[:-2]
        A = A.reshape(-1, 3, 3)
        found = np.zeros(len(A), dtype=bool)
        eye = np.eye(3, dtype=np.int64)
        for mu in self.scalars:
            S = ops.scale(A, mu)
            ok = np.all(np.asarray(F.in_subfield(S, self.m)), axis=(-1, -2))
            ok &= ~found
            if not ok.any():
                continue
            sub = S[ok]
            orth = np.all(ops.mul(sub, ops.transpose(sub)) == eye,
                          axis=(-1, -2))
            det1 = np.asarray(ops.det(sub)) == 1
            found[np.flatnonzero(ok)[orth & det1]] = True
        return found.reshape(shape)

    @staticmethod
    def _in_point_stabilizer(mats):
        A = np.asarray(mats)
        return ((A[..., 0, 1] == 0) & (A[..., 0, 2] == 0)
                & (A[..., 1, 0] == 0) & (A[..., 2, 0] == 0))

    def _in_subfield_group(self, mats, degree):
        F, ops = self.F, self.ops
        A = ops.batch(mats)
        found = np.zeros(A.shape[:-2], dtype=bool)
        for mu in self.scalars:
            S = ops.scale(A, mu)
            found |= np.all(np.asarray(F.in_subfield(S, degree)),
                            axis=(-1, -2))
        return found

    def _so_elements(self):
        F = self.F
        fq = self.tower.embedding.image
        grid = np.stack(np.meshgrid(fq, fq, fq, indexing='ij'),
                        axis=-1).reshape(-1, 3)
        sq = np.asarray(F.mul(grid, grid))
        norms = F.add(F.add(sq[:, 0], sq[:, 1]), sq[:, 2])
        unit = grid[np.asarray(norms) == 1]
        prods = np.asarray(F.mul(unit[:, None, :], unit[None, :, :]))
        dots = F.add(F.add(prods[..., 0], prods[..., 1]), prods[..., 2])
        i, j = np.nonzero(np.asarray(dots) == 0)
        r1, r2 = unit[i], unit[j]

        def minor(a, b):
            return F.sub(F.mul(r1[:, a], r2[:, b]), F.mul(r1[:, b], r2[:, a]))

        r3 = np.stack([minor(1, 2), minor(2, 0), minor(0, 1)], axis=-1)
        return np.stack([r1, r2, r3], axis=1)

    def _sl_elements(self):
        F = self.F
        codes = F.elements()
        x, y = (g.ravel() for g in np.meshgrid(codes, codes, indexing='ij'))
        keep = np.asarray(F.add(F.norm(x), F.norm(y))) == 1
        x, y = x[keep], y[keep]
        lam = self.scalars[:, None]
        x, y = np.broadcast_to(x, (len(self.scalars), len(x))), \
            np.broadcast_to(y, (len(self.scalars), len(y)))
        mats = np.zeros(x.shape + (3, 3), dtype=np.int64)
        mats[..., 0, 0] = np.broadcast_to(F.inv(lam), x.shape)
        mats[..., 1, 1] = x
        mats[..., 1, 2] = y
        mats[..., 2, 1] = F.neg(F.mul(lam, F.conj(y)))
        mats[..., 2, 2] = F.mul(lam, F.conj(x))
        return mats.reshape(-1, 3, 3)

    def stabilizer_elements(self, case):
        """Sorted canonical keys of M_0 (so and sl cases)."""
        case = self.check_case(case)
        if case.kind == 'so':
            mats = self._so_elements()
        elif case.kind == 'sl':
            mats = self._sl_elements()
        else:
            gens = self.stabilizer_generators(case)
            return enumeration.closure(self.ops, gens)
        keys = np.unique(self.ops.canonical_keys(mats))
        expected = stabilizer_order(case, self.q)
        if len(keys) != expected:
            raise ActionError(
                f'{case} stabilizer has {len(keys)} elements, '
                f'expected {expected}'
            )
        return keys

    def _select_generators(self, keys, order):
        """Greedy generating set: largest element order first."""
        ops = self.ops
        bound = self.p * (self.q ** 2 + self.q + 1)
        orders = ops.projective_orders(ops.from_keys(keys), bound)
        candidates = keys[np.lexsort((keys, -orders))]
        group = np.array([self.identity_key()], dtype=np.int64)
        gens = []
        while len(group) < order:
            candidates = candidates[~enumeration.contains(group, candidates)]
            if not len(candidates):
                raise ActionError('elements do not generate a group of '
                                  f'order {order}')
            gens.append(int(candidates[0]))
            group = enumeration.closure(ops, ops.from_keys(np.array(gens)))
        return ops.from_keys(np.array(gens, dtype=np.int64))

    def _sl_generators(self):
        """Root elements q(0, b) over an F_p-basis of the trace zero line,
        tau and h(xi) fix <e_2> in the antidiagonal form and generate its
        stabilizer; swapping e_1 and e_2 after the transition gives the
        stabilizer of <e_1> in the identity form."""
        F = self.F
        codes = F.elements()
        eps = int(codes[(np.asarray(F.trace(codes)) == 0) & (codes != 0)]
                  .min())
        zeta = find_of_order(F, self.q - 1).code
        gens = [self.q_elem(0, F.mul(eps, F.power(zeta, i))).array
                for i in range(self.m)]
        gens += [self.tau().array, self.h_elem(int(F.exp[1])).array]
        gens = self.transport(np.stack(gens), ANTIDIAG, IDENTITY)
        swap = [1, 0, 2]
        return gens[:, swap][:, :, swap]

    def stabilizer_generators(self, case):
        """Identity-form generators of M_0 for the given case.

        The so case is chosen from a listing of SO(3,q) on packed keys and
        raises CapExceeded when the field is too large to pack.
        """
        case = self.check_action_case(case)
        if case.kind == 'sl':
            return self.canonical(self._sl_generators())
        if case.kind == 'so':
            if not self.ops.packable:
                raise CapExceeded('stabilizer listing', self.F.order,
                                  KEY_ORDER_LIMIT)
            keys = self.stabilizer_elements(case)
            return self._select_generators(keys, len(keys))
        degree = self._subfield_degree(case)
        gens = self._generator_triple(degree, self._transition(degree))
        if subfield_index(self.q, case.q_prime) == 3:
            mu_sub = find_of_order(self.F, case.q_prime + 1).code
            extra = self.diag(mu_sub, 1, 1).array
            if self.in_psu(extra):
                gens = np.concatenate([gens, extra[None]])
        return self.canonical(gens)


def _bool(values):
    values = np.asarray(values)
    return bool(values) if values.ndim == 0 else values
