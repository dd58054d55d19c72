"""Dense univariate polynomials over Z and F_p, and residue arithmetic in
F_p[x]/(T) for the random test moduli of the identity test.

Residue products are computed by Kronecker packing: coefficient vectors are
packed into one big integer, multiplied with GMP, and unpacked.  This is
exact, so results are bit-identical to schoolbook multiplication.
"""

from dataclasses import dataclass, field

import gmpy2
import numpy as np

from .errors import RingMismatch

# residue coefficients live in int64 arrays and are packed from 32-bit words
MAX_FIELD_PRIME = 2**31


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def first_primes():
    """Yield 2, 3, 5, 7, ..."""
    n = 2
    while True:
        if is_prime(n):
            yield n
        n += 1


@dataclass(frozen=True)
class IntegerRing:
    name = "Z"
    characteristic = 0

    def reduce(self, c):
        return c

    def __str__(self):
        return "Z"


ZZ = IntegerRing()


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= MAX_FIELD_PRIME:
            raise ValueError(f"field prime must be below 2^31, got {self.p}")

    @property
    def characteristic(self):
        return self.p

    def reduce(self, c):
        return c % self.p

    def inverse(self, c):
        return pow(c, -1, self.p)

    def __str__(self):
        return f"F_{self.p}"


@dataclass(frozen=True)
class DensePoly:
    """Coefficient ``i`` of ``coeffs`` is the coefficient of x^i.

    Construction canonicalizes: coefficients are reduced into the ring and
    trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``.
    """

    ring: object
    coeffs: tuple = ()

    def __post_init__(self):
        cs = [self.ring.reduce(int(c)) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def x(cls, ring):
        return cls(ring, (0, 1))

    @classmethod
    def const(cls, ring, c):
        return cls(ring, (c,))

    @classmethod
    def monomial(cls, ring, c, n):
        return cls(ring, (0,) * n + (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self):
        return self.lc() == 1

    def __add__(self, other):
        return poly_add(self, other)

    def __sub__(self, other):
        return poly_add(self, -other)

    def __neg__(self):
        return DensePoly(self.ring, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        return poly_mul(self, other)

    def __str__(self):
        from .sparse import SparsePoly, format_poly
        mod = self.ring.characteristic or None
        terms = tuple(((i,), c) for i, c in enumerate(self.coeffs))
        return format_poly(SparsePoly(1, terms, mod))


def _check_ring(a, b):
    if a.ring != b.ring:
        raise RingMismatch(f"ring mismatch: {a.ring} vs {b.ring}")


def poly_add(a, b):
    _check_ring(a, b)
    n = max(len(a.coeffs), len(b.coeffs))
    ac = a.coeffs + (0,) * (n - len(a.coeffs))
    bc = b.coeffs + (0,) * (n - len(b.coeffs))
    return DensePoly(a.ring, tuple(x + y for x, y in zip(ac, bc)))


def _schoolbook(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_mul(a, b):
    _check_ring(a, b)
    if a.is_zero() or b.is_zero():
        return DensePoly(a.ring)
    if isinstance(a.ring, PrimeField) and min(len(a.coeffs), len(b.coeffs)) > 32:
        prod = _mul_mod(np.array(a.coeffs, dtype=np.int64),
                        np.array(b.coeffs, dtype=np.int64), a.ring.p)
        return DensePoly(a.ring, tuple(prod.tolist()))
    return DensePoly(a.ring, tuple(_schoolbook(a.coeffs, b.coeffs)))


def poly_divrem(a, q):
    """Return ``(quot, rem)`` with ``a = quot*q + rem`` and ``deg rem < deg q``.

    Over Z the divisor must be monic; over F_p any nonzero divisor works.
    """
    _check_ring(a, q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = a.ring
    if q.is_monic():
        inv = 1
    elif isinstance(ring, PrimeField):
        inv = ring.inverse(q.lc())
    else:
        raise ValueError("integer polynomial division needs a monic divisor")
    rem = list(a.coeffs)
    dq = q.degree
    if len(rem) - 1 < dq:
        return DensePoly(ring), a
    quot = [0] * (len(rem) - dq)
    for i in range(len(rem) - 1, dq - 1, -1):
        c = ring.reduce(rem[i] * inv)
        if c:
            quot[i - dq] = c
            for j, qc in enumerate(q.coeffs):
                rem[i - dq + j] = ring.reduce(rem[i - dq + j] - c * qc)
    return DensePoly(ring, tuple(quot)), DensePoly(ring, tuple(rem[:dq]))


# -- packed multiplication over F_p --------------------------------------------

def _pack(arr, width):
    # each coefficient (< 2^31) occupies `width` little-endian bytes
    if width in (1, 2, 4, 8):
        data = arr.astype(f"<u{width}").tobytes()
    else:
        n = len(arr)
        raw = arr.astype("<u4").view(np.uint8).reshape(n, 4)
        buf = np.zeros((n, width), dtype=np.uint8)
        k = min(width, 4)
        buf[:, :k] = raw[:, :k]
        data = buf.tobytes()
    return gmpy2.mpz.from_bytes(data, "little")


def _unpack_mod(big, count, width, p):
    raw = big.to_bytes(width * count, "little")
    if width in (1, 2, 4, 8):
        vals = np.frombuffer(raw, dtype=f"<u{width}")
        if p == 2:
            return (vals & 1).astype(np.int64)
        return (vals % p).astype(np.int64)
    mat = np.frombuffer(raw, dtype=np.uint8).reshape(count, width)
    if width <= 8:
        full = np.zeros((count, 8), dtype=np.uint8)
        full[:, :width] = mat
        return (full.view("<u8")[:, 0] % np.uint64(p)).astype(np.int64)
    acc = np.zeros(count, dtype=np.uint64)
    pp = np.uint64(p)
    top = width
    while top > 0:
        lo = max(0, top - 3)
        chunk = np.zeros(count, dtype=np.uint64)
        for j in range(top - 1, lo - 1, -1):
            chunk = (chunk << np.uint64(8)) | mat[:, j].astype(np.uint64)
        acc = ((acc << np.uint64(8 * (top - lo))) | chunk) % pp
        top = lo
    return acc.astype(np.int64)


def _mul_mod(a, b, p, packed_b=None, keep=None):
    """Product of two int64 coefficient arrays with entries in [0, p), mod p.

    ``packed_b(width)`` may supply a cached packing of ``b``; ``keep`` limits
    the result to its low ``keep`` coefficients.
    """
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return np.zeros(0, dtype=np.int64)
    short = min(la, lb)
    bound = short * (p - 1) ** 2
    count = la + lb - 1 if keep is None else min(keep, la + lb - 1)
    if short <= 48 and bound < 2**63:
        return np.convolve(a, b)[:count] % p
    width = max(1, (bound.bit_length() + 7) // 8)
    if width <= 8:
        width = 1 << (width - 1).bit_length()  # numpy dtype widths unpack fastest
    pa = _pack(a, width)
    if b is a:
        pb = pa
    elif packed_b is not None:
        pb = packed_b(width)
    else:
        pb = _pack(b, width)
    prod = pa * pb
    if count < la + lb - 1:
        prod = gmpy2.f_mod_2exp(prod, 8 * width * count)
    return _unpack_mod(prod, count, width, p)


def _trim(arr):
    nz = np.flatnonzero(arr)
    return arr[: nz[-1] + 1] if len(nz) else arr[:0]


@dataclass(eq=False)
class ResidueCtx:
    """Arithmetic in F_p[x] modulo a fixed monic polynomial T of degree D >= 1.

    Reduction uses a precomputed power-series inverse of the reversed
    modulus, so each reduction costs two multiplications.
    """

    field: PrimeField
    modulus: DensePoly
    _t: np.ndarray = field(init=False, repr=False)
    _inv: np.ndarray = field(init=False, repr=False)
    _packed: dict = field(init=False, repr=False)
    _xpow: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.modulus.ring != self.field:
            raise RingMismatch("modulus must be over the context field")
        if self.modulus.degree < 1:
            raise ValueError("modulus must have degree >= 1")
        if not self.modulus.is_monic():
            raise ValueError("modulus must be monic")
        self._t = np.array(self.modulus.coeffs, dtype=np.int64)
        self._inv = np.ones(1, dtype=np.int64)
        self._packed = {}
        self._xpow = {}

    def _pack_cached(self, key, arr):
        # packings of T and of its inverse prefixes recur in every reduction
        def get(width):
            hit = self._packed.get((key, width))
            if hit is None:
                hit = self._packed[(key, width)] = _pack(arr, width)
            return hit
        return get

    @property
    def degree(self):
        return self.modulus.degree

    @property
    def monic(self):
        return True

    @property
    def p(self):
        return self.field.p

    def _inverse(self, n):
        # Newton iteration for rev(T)^-1 mod x^n
        p = self.field.p
        g = self._inv
        if len(g) >= n:
            return g[:n]
        f = self._t[::-1]
        k = len(g)
        while k < n:
            k = min(2 * k, n)
            e = _mul_mod(f[:k], g, p)[:k]
            h = _mul_mod(g, e, p)[:k]
            g2 = np.zeros(k, dtype=np.int64)
            g2[: len(g)] = 2 * g
            g = (g2 - h) % p
        self._inv = g
        return g

    def reduce_arr(self, a):
        p = self.field.p
        d = self.degree
        if len(a) <= d:
            return a
        n = len(a) - 1
        m = n - d + 1
        inv = self._inverse(m)
        qrev = _mul_mod(a[::-1][:m], inv, p, self._pack_cached(("inv", m), inv), keep=m)
        quot = qrev[::-1]
        low = _mul_mod(quot, self._t, p, self._pack_cached("t", self._t), keep=d)
        return (a[:d] - low) % p

    def mul_arr(self, a, b):
        return self.reduce_arr(_mul_mod(a, b, self.field.p))

    def square_arr(self, a):
        if self.field.p == 2 and len(a):
            # Frobenius: f(x)^2 = f(x^2) over F_2, so squaring only spreads coefficients
            out = np.zeros(2 * len(a) - 1, dtype=np.int64)
            out[::2] = a
            return self.reduce_arr(out)
        return self.mul_arr(a, a)

    def to_arr(self, poly):
        if poly.ring != self.field:
            raise RingMismatch("polynomial is not over the context field")
        return self.reduce_arr(np.array(poly.coeffs, dtype=np.int64))

    def to_poly(self, arr):
        return DensePoly(self.field, tuple(_trim(arr).tolist()))

    def reduce(self, poly):
        return self.to_poly(self.to_arr(poly))

    def mul(self, a, b):
        return self.to_poly(self.mul_arr(self.to_arr(a), self.to_arr(b)))

    def add(self, a, b):
        return poly_add(a, b)

    def xpow_arr(self, n):
        """x^n mod T as a coefficient array.

        Powers are memoised by binary prefix of the exponent, so leaves like
        x^(2^63) and x^(2^64) share their squaring chain.
        """
        d = self.degree
        if n < d:
            out = np.zeros(n + 1, dtype=np.int64)
            out[n] = 1
            return out
        cache = self._xpow
        bits = bin(n)[2:]
        # longest prefix already known, else the longest one needing no reduction
        i = len(bits)
        while i > 0 and int(bits[:i], 2) not in cache and int(bits[:i], 2) >= d:
            i -= 1
        v = int(bits[:i], 2) if i else 0
        if v in cache:
            acc = cache[v]
        else:
            acc = np.zeros(v + 1, dtype=np.int64)
            acc[v] = 1
        for bit in bits[i:]:
            acc = self.square_arr(acc)
            v = 2 * v
            if bit == "1":
                acc = self._times_x(acc)
                v += 1
            cache[v] = acc
        return acc

    def _times_x(self, a):
        d = self.degree
        p = self.field.p
        out = np.zeros(len(a) + 1, dtype=np.int64)
        out[1:] = a
        if len(out) <= d:
            return out
        lead = out[d]
        if lead:
            out = (out[: d + 1] - lead * self._t) % p
        return out[:d]


def modpow(base, n, ctx):
    """``base^n mod T`` by square-and-multiply (O(bitlen n) residue products)."""
    if n < 0:
        raise ValueError("exponent must be non-negative")
    if base.ring != ctx.field:
        raise RingMismatch("base is not over the context field")
    if base.degree >= ctx.degree:
        raise ValueError("base degree must be below the modulus degree")
    if base.coeffs == (0, 1):
        return ctx.to_poly(ctx.xpow_arr(n))
    b = ctx.to_arr(base)
    acc = np.ones(1, dtype=np.int64)
    for bit in bin(n)[2:]:
        acc = ctx.mul_arr(acc, acc)
        if bit == "1":
            acc = ctx.mul_arr(acc, b)
    return ctx.to_poly(ctx.reduce_arr(acc))


def build_test_modulus(r, b, t, field):
    """Residue context for ``T = Q_r(A)`` with ``Q_r(y) = 1 + y + ... + y^(r-1)``
    and ``A = x^t + sum_i b[i] x^i``; evaluated by Horner, ``res <- res*A + 1``.
    """
    ell = len(b)
    if ell < 1 or t < ell:
        raise ValueError(f"need t >= len(b) >= 1, got t={t}, len(b)={ell}")
    if not is_prime(r):
        raise ValueError(f"r={r} is not prime")
    if r == field.p:
        raise ValueError("r must differ from the field characteristic")
    p = field.p
    a = np.zeros(t + 1, dtype=np.int64)
    a[:ell] = np.asarray(b, dtype=np.int64) % p
    a[t] = 1
    res = np.ones(1, dtype=np.int64)
    for _ in range(r - 1):
        res = _mul_mod(res, a, p)
        res[0] = (res[0] + 1) % p
    modulus = DensePoly(field, tuple(res.tolist()))
    return ResidueCtx(field, modulus)
