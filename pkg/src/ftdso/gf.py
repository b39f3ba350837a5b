"""GF(2^b) arithmetic with log/antilog tables, 1 <= b <= 16."""
from __future__ import annotations

from functools import lru_cache

# primitive polynomials, bit i = coefficient of x^i
PRIMITIVE_POLYS = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


class GaloisField:
    """Field of ``q = 2^bits`` elements; elements are ints in ``[0, q)``."""

    def __init__(self, bits: int):
        if bits not in PRIMITIVE_POLYS:
            raise ValueError(f"unsupported field GF(2^{bits}); need 1 <= bits <= 16")
        self.bits = bits
        self.q = 1 << bits
        self.poly = PRIMITIVE_POLYS[bits]
        order = self.q - 1
        exp = [0] * (2 * order)
        log = [0] * self.q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.q:
                x ^= self.poly
        if x != 1:
            raise AssertionError(f"polynomial {self.poly:#x} is not primitive")
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self.exp = exp
        self.log = log

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def poly_eval(self, coeffs, x: int) -> int:
        """Evaluate ``sum coeffs[j] * x^j`` by Horner's rule."""
        acc = 0
        exp, log = self.exp, self.log
        if x == 0:
            return coeffs[0] if coeffs else 0
        lx = log[x]
        for c in reversed(coeffs):
            acc = (exp[log[acc] + lx] if acc else 0) ^ c
        return acc


@lru_cache(maxsize=None)
def field(q: int) -> GaloisField:
    if q < 2 or q & (q - 1):
        raise ValueError(f"field size must be a power of two >= 2, got {q}")
    return GaloisField(q.bit_length() - 1)
