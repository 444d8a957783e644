"""GF(p^n) arithmetic: reproducible modulus/generator selection, discrete-log
tables, and cyclotomic classes sitting inside the additive group.

Field elements are encoded as integers 0..q-1: the element sum(c_j x^j) gets
the code sum(c_j p^j).  That code equals the element's index in the additive
group GroupSpec((p,)*n), so subsets of the field are subsets of the group
with no translation step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import BadDivisor, DegreeTooLarge, NotPrime
from .groups import GroupSpec, SubsetOfGroup

_MAX_FIELD = 2**32
_MAX_TABLE = 2**22  # discrete-log tables above this are impractical

# Miller-Rabin with the first 13 primes is deterministic below this bound
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_PROVEN_BOUND = 3317044064679887385961981


def is_prime(n: int) -> bool:
    """Deterministic primality for n below MR_PROVEN_BOUND."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    if n >= MR_PROVEN_BOUND:
        raise ValueError(f"{n} is beyond the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are <= 2**32)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- polynomial helpers over GF(p); little-endian coefficient lists ----------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pdivmod(out, mod, p)[1]


def _pdivmod(a, b, p):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv_lb = pow(lb, p - 2, p)
    q = [0] * max(0, len(a) - db)
    while len(_trim(a)) - 1 >= db and a:
        shift = len(a) - 1 - db
        c = a[-1] * inv_lb % p
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
    return _trim(q), _trim(a)


def _ppowmod(a, e, mod, p):
    out = [1]
    base = _pdivmod(a, mod, p)[1]
    while e:
        if e & 1:
            out = _pmulmod(out, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return out


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return a


def _is_irreducible(f, p):
    """Rabin test: f monic of degree n over GF(p)."""
    n = len(f) - 1
    x = [0, 1]
    if _ppowmod(x, p**n, f, p) != _trim(list(x)):
        return False
    for r in factorize(n):
        h = _ppowmod(x, p ** (n // r), f, p)
        diff = _trim([(hi - xi) % p for hi, xi in _zip_pad(h, x)])
        if len(_pgcd(diff, f, p)) > 1:
            return False
    return True


def _zip_pad(a, b):
    m = max(len(a), len(b))
    return zip(a + [0] * (m - len(a)), list(b) + [0] * (m - len(b)))


def _encode(coeffs, p):
    out = 0
    for c in reversed(coeffs):
        out = out * p + c
    return out


def _decode(code, p, n):
    return [(code // p**j) % p for j in range(n)]


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^n) with a fixed modulus and a fixed generator omega.

    Both choices are the lexicographically smallest admissible ones (on
    coefficient vectors read from the highest power down), so two runs build
    identical fields.
    """

    p: int
    n: int
    modulus: tuple[int, ...]  # little-endian, monic, length n+1

    @cached_property
    def q(self) -> int:
        return self.p**self.n

    @cached_property
    def group(self) -> GroupSpec:
        """The additive group, with element index == field element code."""
        return GroupSpec((self.p,) * self.n)

    def mul(self, a: int, b: int) -> int:
        pa = _decode(a, self.p, self.n)
        pb = _decode(b, self.p, self.n)
        return _encode(_pmulmod(pa, pb, list(self.modulus), self.p) + [0] * self.n, self.p)

    def pow(self, a: int, e: int) -> int:
        pa = _decode(a, self.p, self.n)
        out = _ppowmod(pa, e, list(self.modulus), self.p)
        return _encode(out + [0] * self.n, self.p)

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        full = self.q - 1
        order = full
        for r in factorize(full):
            while order % r == 0 and self.pow(a, order // r) == 1:
                order //= r
        return order

    @cached_property
    def omega(self) -> int:
        """Smallest-coded generator of the multiplicative group."""
        full = self.q - 1
        radicals = [full // r for r in factorize(full)]
        for cand in range(1, self.q):
            if all(self.pow(cand, e) != 1 for e in radicals):
                return cand
        raise RuntimeError("no generator found")  # unreachable for a true field

    @cached_property
    def antilog(self) -> np.ndarray:
        """antilog[e] = code of omega**e, for e in [0, q-1)."""
        if self.q > _MAX_TABLE:
            raise DegreeTooLarge(f"discrete-log table for q={self.q} is out of scope")
        table = np.empty(self.q - 1, dtype=np.int64)
        acc = 1
        for e in range(self.q - 1):
            table[e] = acc
            acc = self.mul(acc, self.omega)
        if acc != 1:
            raise RuntimeError("generator order mismatch")
        table.flags.writeable = False
        return table

    @cached_property
    def log(self) -> np.ndarray:
        table = np.full(self.q, -1, dtype=np.int64)
        table[self.antilog] = np.arange(self.q - 1)
        table.flags.writeable = False
        return table


@lru_cache(maxsize=None)
def make_field(p: int, n: int) -> FieldSpec:
    """GF(p^n) with the smallest monic irreducible modulus of degree n."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n < 1 or p**n > _MAX_FIELD:
        raise DegreeTooLarge(f"GF({p}^{n}) is out of scope")
    if n == 1:
        return FieldSpec(p, 1, (0, 1))
    for low in range(p**n):
        f = _decode(low, p, n) + [1]
        if _is_irreducible(f, p):
            return FieldSpec(p, n, tuple(f))
    raise RuntimeError("no irreducible polynomial found")  # unreachable


def additive_embedding(field: FieldSpec) -> GroupSpec:
    """Additive group of the field; field codes are group element indices."""
    return field.group


def cyclotomic_class(field: FieldSpec, N: int, i: int) -> SubsetOfGroup:
    """The coset omega**i * <omega**N> as a subset of the additive group."""
    q = field.q
    if N < 1 or (q - 1) % N != 0:
        raise BadDivisor(f"{N} does not divide {q - 1}")
    size = (q - 1) // N
    exps = (i % N + N * np.arange(size, dtype=np.int64)) % (q - 1)
    return SubsetOfGroup(field.group, field.antilog[exps])
