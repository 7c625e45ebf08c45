"""Vectorized batch checks over small fields (internal).

Matrices with integer-coded entries decompose into polynomial component
planes: one plane for prime fields, two planes for quadratic extensions
(code = c0 + p*c1 with x^2 = -m0 - m1*x from the field modulus).  That
turns bulk homomorphism/form verification into a handful of numpy
integer matmuls; exact-arithmetic paths elsewhere are untouched.

Only extension degrees 1 and 2 are supported, which covers every entry
field a classical group over GF(q <= 2^8) with delta <= 2 uses here;
callers fall back to scalar checks beyond that.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldSpec
from .matrix import Matrix


def supported(field: FieldSpec) -> bool:
    return field.e in (1, 2)


class BatchField:
    """Component-plane arithmetic for a stack of matrices over one field."""

    def __init__(self, field: FieldSpec):
        if not supported(field):
            raise ValueError("component arithmetic needs e <= 2")
        self.field = field
        self.p = field.p
        if field.e == 2:
            # monic modulus x^2 + m1 x + m0
            self.m0 = field.modulus[0] % field.p
            self.m1 = field.modulus[1] % field.p
            r = field.pow(field.p, field.p)  # x^p, the conjugate root
            self.r0, self.r1 = r % field.p, r // field.p
        else:
            self.m0 = self.m1 = self.r0 = self.r1 = 0

    def encode(self, mats: list[Matrix]) -> tuple[np.ndarray, np.ndarray | None]:
        arr = np.array([[list(r) for r in m.rows] for m in mats], dtype=np.int64)
        if self.field.e == 1:
            return arr, None
        return arr % self.p, arr // self.p

    def decode_equal(self, a, b) -> bool:
        a0, a1 = a
        b0, b1 = b
        if not np.array_equal(a0 % self.p, b0 % self.p):
            return False
        if a1 is None:
            return True
        return np.array_equal(a1 % self.p, b1 % self.p)

    def matmul(self, a, b):
        """Componentwise matrix product of broadcastable stacks."""
        a0, a1 = a
        b0, b1 = b
        p = self.p
        if a1 is None:
            return (a0 @ b0) % p, None
        c0 = a0 @ b0
        c1 = a0 @ b1 + a1 @ b0
        c2 = a1 @ b1  # coefficient of x^2: fold back with x^2 = -m0 - m1 x
        return (c0 - self.m0 * c2) % p, (c1 - self.m1 * c2) % p

    def conjugate(self, a):
        """Entrywise x -> x^(p) on component planes (the unitary sigma)."""
        a0, a1 = a
        if a1 is None:
            return a0, None
        return (a0 + a1 * self.r0) % self.p, (a1 * self.r1) % self.p

    def transpose(self, a):
        a0, a1 = a
        sw = a0.swapaxes(-1, -2)
        return sw, None if a1 is None else a1.swapaxes(-1, -2)


def verify_homomorphism(images: list[Matrix], mul_table, field: FieldSpec) -> bool:
    """images[u] @ images[v] == images[mul_table[u][v]] for all u, v."""
    bf = BatchField(field)
    enc0, enc1 = bf.encode(images)
    a = len(images)
    left = (enc0[:, None], None if enc1 is None else enc1[:, None])
    right = (enc0[None, :], None if enc1 is None else enc1[None, :])
    prod = bf.matmul(left, right)
    idx = np.array(mul_table, dtype=np.int64)
    want = (enc0[idx], None if enc1 is None else enc1[idx])
    return bf.decode_equal(prod, want)


def verify_form_preservation(images: list[Matrix], gram: Matrix, sigma: int,
                             field: FieldSpec) -> bool:
    """g^T gram g^sigma == gram for every image (sigma in {0, 1} Frobenius steps)."""
    bf = BatchField(field)
    enc = bf.encode(images)
    g = bf.encode([gram])
    right = bf.conjugate(enc) if sigma else enc
    prod = bf.matmul(bf.matmul(bf.transpose(enc), g), right)
    a = len(images)
    want0 = np.broadcast_to(g[0], prod[0].shape)
    want1 = None if g[1] is None else np.broadcast_to(g[1], prod[0].shape)
    return bf.decode_equal(prod, (want0, want1))
