"""
Batched 3x3 matrix arithmetic over a FieldCtx.

A batch is an int64 array of shape (..., 3, 3) holding field codes.
"""
import numpy as np

from groups.exceptions import FieldError, FormError

# nine codes of a field of order below 2^7 fit in a signed 64-bit key
KEY_ORDER_LIMIT = 128


class MatrixOps:
    """Matrix operations over ``field`` modulo the given central scalars."""

    def __init__(self, field, scalars):
        self.F = field
        self.scalars = np.sort(np.asarray(scalars, dtype=np.int64))
        self.packable = field.order < KEY_ORDER_LIMIT

    @staticmethod
    def batch(A):
        A = np.asarray(A, dtype=np.int64)
        if A.shape[-2:] != (3, 3):
            raise FormError(f'expected 3x3 matrices, got shape {A.shape}')
        return A

    def identity(self, n=None):
        eye = np.eye(3, dtype=np.int64)
        return eye if n is None else np.broadcast_to(eye, (n, 3, 3)).copy()

    def diag(self, a, b, c):
        return np.array([[a, 0, 0], [0, b, 0], [0, 0, c]], dtype=np.int64)

    def mul(self, A, B):
        F = self.F
        A, B = self.batch(A), self.batch(B)
        prod = np.asarray(F.mul(A[..., :, :, None], B[..., None, :, :]))
        return np.asarray(F.add(F.add(prod[..., :, 0, :], prod[..., :, 1, :]),
                                prod[..., :, 2, :]))

    def mul_chain(self, *mats):
        out = mats[0]
        for M in mats[1:]:
            out = self.mul(out, M)
        return out

    def _minor(self, A, r1, r2, c1, c2):
        F = self.F
        return F.sub(F.mul(A[..., r1, c1], A[..., r2, c2]),
                     F.mul(A[..., r1, c2], A[..., r2, c1]))

    def det(self, A):
        F = self.F
        A = self.batch(A)
        total = 0
        for j in range(3):
            cof = self._minor(A, 1, 2, (j + 1) % 3, (j + 2) % 3)
            total = F.add(total, F.mul(A[..., 0, j], cof))
        return total

    def inv(self, A):
        F = self.F
        A = self.batch(A)
        det = np.asarray(self.det(A))
        if np.any(det == 0):
            raise FormError('singular matrix')
        inv_det = np.asarray(F.inv(det))
        out = np.empty_like(A)
        for i in range(3):
            for j in range(3):
                cof = self._minor(A, (i + 1) % 3, (i + 2) % 3,
                                  (j + 1) % 3, (j + 2) % 3)
                out[..., j, i] = F.mul(cof, inv_det)
        return out

    def transpose(self, A):
        return np.swapaxes(self.batch(A), -1, -2)

    def conj_transpose(self, A):
        return np.swapaxes(np.asarray(self.F.conj(self.batch(A))), -1, -2)

    def frobenius(self, A, i=1):
        return np.asarray(self.F.frobenius(self.batch(A), i))

    def scale(self, A, mu):
        return np.asarray(self.F.mul(self.batch(A), mu))

    def equal(self, A, B):
        return np.all(self.batch(A) == self.batch(B), axis=(-1, -2))

    def is_scalar(self, A):
        A = self.batch(A)
        off = A.copy()
        off[..., [0, 1, 2], [0, 1, 2]] = 0
        d = A[..., [0, 1, 2], [0, 1, 2]]
        return (np.all(off == 0, axis=(-1, -2))
                & (d[..., 0] == d[..., 1]) & (d[..., 1] == d[..., 2])
                & (d[..., 0] != 0))

    def power(self, A, e):
        A = self.batch(A)
        if e < 0:
            A, e = self.inv(A), -e
        out = np.broadcast_to(self.identity(), A.shape).copy()
        base = A
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    # keys and canonical forms

    def keys(self, A):
        """Pack each matrix into one int64, ordered like its entry tuple."""
        if not self.packable:
            raise FieldError(
                f'matrices over a field of order {self.F.order} '
                'do not pack into 64-bit keys'
            )
        A = self.batch(A)
        flat = A.reshape(A.shape[:-2] + (9,))
        key = np.zeros(flat.shape[:-1], dtype=np.int64)
        for idx in range(9):
            key = key * self.F.order + flat[..., idx]
        return key

    def from_keys(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        flat = np.empty(keys.shape + (9,), dtype=np.int64)
        rest = keys.copy()
        for idx in reversed(range(9)):
            flat[..., idx] = rest % self.F.order
            rest //= self.F.order
        return flat.reshape(keys.shape + (3, 3))

    def _scaled(self, A):
        A = self.batch(A)
        return np.asarray(self.F.mul(A[..., None, :, :],
                                     self.scalars[:, None, None]))

    def canonical_keys(self, A):
        """Least key among the central multiples of each matrix."""
        return self.keys(self._scaled(A)).min(axis=-1)

    def canonical(self, A):
        """Central multiple whose entry tuple is lexicographically least."""
        A = self.batch(A)
        if self.packable:
            return self.from_keys(self.canonical_keys(A))
        scaled = self._scaled(A)
        flat = scaled.reshape(scaled.shape[:-2] + (9,))
        alive = np.ones(flat.shape[:-1], dtype=bool)
        for idx in range(9):
            values = np.where(alive, flat[..., idx], self.F.order)
            alive &= values == values.min(axis=-1, keepdims=True)
        choice = np.argmax(alive, axis=-1)
        picked = np.take_along_axis(
            flat, choice[..., None, None], axis=-2
        )[..., 0, :]
        return picked.reshape(A.shape)

    def projective_orders(self, A, bound):
        """Orders modulo scalars, by repeated multiplication up to bound."""
        A = self.batch(A)
        orders = np.zeros(A.shape[:-2], dtype=np.int64)
        P = A.copy()
        for k in range(1, bound + 1):
            hit = self.is_scalar(P) & (orders == 0)
            orders[hit] = k
            if np.all(orders):
                return orders
            P = self.mul(P, A)
        raise FormError(f'element order exceeds {bound}')
