"""
Finite field tower F_p <= F_q <= F_{q^2}.

An element of F_{p^k} is stored as an integer code: the residue
c_0 + c_1 x + ... + c_{k-1} x^{k-1} modulo the field's modulus is encoded
as c_0 + c_1 p + ... + c_{k-1} p^{k-1}. Arithmetic methods take scalars or
numpy arrays of codes, broadcast like numpy, and return plain ints for
scalar input.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np
from django.conf import settings
from sympy import isprime, primefactors
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_gcd,
    gf_mul,
    gf_pow_mod,
    gf_rem,
    gf_sub,
)

from groups.exceptions import FieldError, FormError

logger = logging.getLogger(__name__)

# Fields up to this order get full addition and multiplication tables.
FULL_TABLE_ORDER = 1024
EXP_CHUNK = 1024


def _is_irreducible(poly, p, k):
    """Check a monic degree-k polynomial (leading coefficient first)."""
    x = [1, 0]
    h = x
    for _ in range(1, k):
        h = gf_pow_mod(h, p, poly, p, ZZ)
        if gf_gcd(gf_sub(h, x, p, ZZ), poly, p, ZZ) != [1]:
            return False
    h = gf_pow_mod(h, p, poly, p, ZZ)
    return gf_rem(gf_sub(h, x, p, ZZ), poly, p, ZZ) == []


def irreducible_moduli(p, k):
    """Yield monic irreducibles of degree k as (c_0, ..., c_{k-1}),
    in lexicographic order of that tuple."""
    for coeffs in itertools.product(range(p), repeat=k):
        if _is_irreducible([1] + list(reversed(coeffs)), p, k):
            yield coeffs


def _result(values):
    values = np.asarray(values)
    return int(values) if values.ndim == 0 else values


class FieldCtx:
    """The field F_{p^k} with a fixed modulus and precomputed tables."""

    def __init__(self, p, k, modulus_rank=0, subfield_degree=None,
                 max_order=None):
        if not isprime(p):
            raise FieldError(f'p = {p} is not prime')
        if k < 1:
            raise FieldError(f'extension degree must be positive, got {k}')
        if subfield_degree is not None and k % subfield_degree:
            raise FieldError(
                f'F_{p}^{subfield_degree} is not a subfield of F_{p}^{k}'
            )
        if max_order is None:
            max_order = settings.SAXL_FIELD_MAX_ORDER
        if p ** k > max_order:
            raise FieldError(
                f'field of order {p}^{k} exceeds the bound {max_order}'
            )

        self.p = p
        self.k = k
        self.order = p ** k
        self.subfield_degree = subfield_degree
        self.modulus_rank = modulus_rank

        moduli = irreducible_moduli(p, k)
        self.modulus = next(itertools.islice(moduli, modulus_rank, None), None)
        if self.modulus is None:
            raise FieldError(
                f'no irreducible polynomial of rank {modulus_rank} '
                f'in degree {k} over F_{p}'
            )
        self._poly_modulus = [1] + list(reversed(self.modulus))
        self._place = p ** np.arange(k, dtype=np.int64)

        self._digits = None
        if p != 2:
            codes = np.arange(self.order, dtype=np.int64)
            self._digits = (
                (codes[:, None] // self._place[None, :]) % p
            ).astype(np.int16)

        self.primitive = self._find_primitive()
        self._build_exp_log()
        self._neg = self._build_neg()

        self._add_table = None
        self._mul_table = None
        if self.order <= FULL_TABLE_ORDER:
            codes = np.arange(self.order, dtype=np.int64)
            self._add_table = self._add_slow(codes[:, None], codes[None, :])
            self._mul_table = self._mul_slow(codes[:, None], codes[None, :])

        logger.debug(
            f'F_{p}^{k}: modulus {self.modulus}, primitive {self.primitive}'
        )

    def __repr__(self):
        return f'FieldCtx(p={self.p}, k={self.k}, modulus={self.modulus})'

    # polynomial helpers

    def poly(self, code):
        """Coefficients of a code, leading coefficient first."""
        coeffs = []
        code = int(code)
        while code:
            coeffs.append(code % self.p)
            code //= self.p
        return list(reversed(coeffs))

    def coeffs(self, code):
        """Little-endian coefficient vector of fixed width k."""
        code = int(code)
        return tuple((code // self.p ** i) % self.p for i in range(self.k))

    def from_coeffs(self, coeffs):
        if len(coeffs) != self.k:
            raise FieldError(f'expected {self.k} coefficients')
        return sum(int(c) % self.p * self.p ** i for i, c in enumerate(coeffs))

    def _find_primitive(self):
        n = self.order - 1
        exponents = [n // ell for ell in primefactors(n)]
        for code in range(1, self.order):
            g = self.poly(code)
            if all(gf_pow_mod(g, e, self._poly_modulus, self.p, ZZ) != [1]
                   for e in exponents):
                return code
        raise FieldError(f'no primitive element in F_{self.p}^{self.k}')

    def _build_exp_log(self):
        p, k, n = self.p, self.k, self.order - 1
        g = self.poly(self.primitive)
        mult = np.zeros((k, k), dtype=np.int64)
        for j in range(k):
            image = gf_rem(gf_mul(g, [1] + [0] * j, p, ZZ),
                           self._poly_modulus, p, ZZ)
            for i, c in enumerate(reversed(image)):
                mult[i, j] = int(c)

        chunk = min(EXP_CHUNK, n)
        block = np.zeros((chunk, k), dtype=np.int64)
        block[0, 0] = 1
        for i in range(1, chunk):
            block[i] = (mult @ block[i - 1]) % p
        step = np.eye(k, dtype=np.int64)
        for _ in range(chunk):
            step = (mult @ step) % p

        blocks, total = [block], chunk
        while total < n:
            block = (block @ step.T) % p
            blocks.append(block)
            total += chunk
        exp = (np.concatenate(blocks)[:n] * self._place).sum(axis=1)

        if len(np.unique(exp)) != n:
            raise FieldError(f'{self.primitive} is not primitive')
        self._exp = exp
        self._exp2 = np.concatenate([exp, exp])
        self._log = np.zeros(self.order, dtype=np.int64)
        self._log[exp] = np.arange(n, dtype=np.int64)

    def _build_neg(self):
        if self.p == 2:
            return np.arange(self.order, dtype=np.int64)
        digits = self._digits.astype(np.int64)
        return ((self.p - digits) % self.p) @ self._place

    def _add_slow(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        total = self._digits[a].astype(np.int64) + self._digits[b]
        return (total % self.p) @ self._place

    def _mul_slow(self, a, b):
        out = self._exp2[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    # arithmetic

    @property
    def exp(self):
        """exp[i] is the code of primitive**i, 0 <= i < order - 1."""
        return self._exp

    @property
    def log(self):
        return self._log

    def elements(self):
        return np.arange(self.order, dtype=np.int64)

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._add_table is not None:
            return _result(self._add_table[a, b])
        return _result(self._add_slow(a, b))

    def neg(self, a):
        return _result(self._neg[np.asarray(a, dtype=np.int64)])

    def sub(self, a, b):
        return self.add(a, self._neg[np.asarray(b, dtype=np.int64)])

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._mul_table is not None:
            return _result(self._mul_table[a, b])
        return _result(self._mul_slow(a, b))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldError('zero has no inverse')
        n = self.order - 1
        return _result(self._exp[(n - self._log[a]) % n])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if e == 0:
            return _result(np.ones_like(a))
        if e < 0:
            a = np.asarray(self.inv(a), dtype=np.int64)
            e = -e
        n = self.order - 1
        out = self._exp[(self._log[a] * (e % n)) % n]
        return _result(np.where(a == 0, 0, out))

    def frobenius(self, a, i=1):
        """a ** (p ** i)."""
        return self.power(a, pow(self.p, i, self.order - 1) or self.order - 1)

    def conj(self, a):
        """a ** q where q = p ** subfield_degree."""
        if self.subfield_degree is None:
            raise FormError(f'{self!r} has no declared subfield')
        return self.frobenius(a, self.subfield_degree)

    def norm(self, a):
        return self.mul(a, self.conj(a))

    def trace(self, a):
        return self.add(a, self.conj(a))

    def in_subfield(self, a, degree):
        """Mask of codes lying in the subfield F_{p^degree}."""
        if self.k % degree:
            raise FieldError(f'degree {degree} does not divide {self.k}')
        a = np.asarray(a, dtype=np.int64)
        return _result(np.asarray(self.frobenius(a, degree)) == a)

    def element(self, code):
        return FieldElem(self, int(code))

    def from_int(self, value):
        """Image of an integer in the prime field."""
        return int(value) % self.p


@dataclass(frozen=True)
class FieldElem:
    """Scalar wrapper around a code, for readable one-off arithmetic."""
    ctx: FieldCtx
    code: int

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise FieldError('elements of different fields')
            return other.code
        return self.ctx.from_int(other)

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self._other(other), self.code))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.ctx, self.ctx.div(self.code, self._other(other)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.code))

    def __pow__(self, e):
        return FieldElem(self.ctx, self.ctx.power(self.code, e))

    def __int__(self):
        return self.code

    @property
    def coeffs(self):
        return self.ctx.coeffs(self.code)

    def is_zero(self):
        return self.code == 0


@dataclass(frozen=True, eq=False)
class Embedding:
    """Field homomorphism F_q -> F_{q^2}, tabulated on codes."""
    base: FieldCtx
    ext: FieldCtx
    image: np.ndarray
    preimage: np.ndarray

    def __call__(self, codes):
        return _result(self.image[np.asarray(codes, dtype=np.int64)])

    def is_image(self, codes):
        return _result(self.preimage[np.asarray(codes, dtype=np.int64)] >= 0)


@dataclass(frozen=True, eq=False)
class Tower:
    base: FieldCtx
    ext: FieldCtx
    embedding: Embedding

    @property
    def p(self):
        return self.base.p

    @property
    def m(self):
        return self.base.k

    @property
    def q(self):
        return self.base.order


def _embed(base, ext):
    """Send x to the smallest root of base.modulus inside ext."""
    m = base.k
    codes = ext.elements()
    candidates = codes[np.asarray(ext.in_subfield(codes, m))]
    value = np.ones_like(candidates)
    for c in reversed(base.modulus):
        value = np.asarray(ext.add(ext.mul(value, candidates), c))
    roots = candidates[value == 0]
    if not len(roots):
        raise FieldError(f'{base!r} has no root in {ext!r}')
    root = int(roots.min())

    base_codes = base.elements()
    image = np.zeros(base.order, dtype=np.int64)
    for i in reversed(range(m)):
        digit = (base_codes // base.p ** i) % base.p
        image = np.asarray(ext.add(ext.mul(image, root), digit))
    preimage = np.full(ext.order, -1, dtype=np.int64)
    preimage[image] = base_codes
    return Embedding(base, ext, image, preimage)


@lru_cache(maxsize=None)
def _build_tower(p, m, modulus_rank, max_order):
    base = FieldCtx(p, m, modulus_rank, max_order=max_order)
    ext = FieldCtx(p, 2 * m, modulus_rank, subfield_degree=m,
                   max_order=max_order)
    logger.info(f'Built tower F_{p} < F_{p ** m} < F_{p ** (2 * m)}')
    return Tower(base, ext, _embed(base, ext))


def make_tower(p, m, modulus_rank=0, max_order=None):
    """Construct F_q and F_{q^2} (q = p^m) with the embedding between them."""
    if not isprime(p):
        raise FieldError(f'p = {p} is not prime')
    if m < 1:
        raise FieldError(f'm must be at least 1, got {m}')
    if max_order is None:
        max_order = settings.SAXL_FIELD_MAX_ORDER
    if p ** (2 * m) > max_order:
        raise FieldError(
            f'F_{p}^{2 * m} exceeds the field size bound {max_order}'
        )
    return _build_tower(p, m, modulus_rank, max_order)


def conj(a):
    """Unitary conjugation a -> a^q of an element of F_{q^2}."""
    return FieldElem(a.ctx, a.ctx.conj(a.code))


def elem_order(a):
    """Multiplicative order of a nonzero element."""
    if a.code == 0:
        raise FieldError('zero has no multiplicative order')
    n = a.ctx.order - 1
    return n // gcd(int(a.ctx.log[a.code]), n)


def elem_orders(ctx, codes):
    """Vectorised multiplicative orders; zero maps to 0."""
    codes = np.asarray(codes, dtype=np.int64)
    n = ctx.order - 1
    orders = n // np.gcd(ctx.log[codes], n)
    return np.where(codes == 0, 0, orders)


def find_of_order(ctx, n):
    """Smallest code of exact multiplicative order n."""
    if n < 1 or (ctx.order - 1) % n:
        raise FieldError(f'{n} does not divide {ctx.order - 1}')
    codes = ctx.elements()
    return FieldElem(ctx, int(codes[elem_orders(ctx, codes) == n].min()))
