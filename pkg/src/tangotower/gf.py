"""Small prime-power fields and dense polynomials over F_p.

Elements of ``F_{p^d}`` are ints ``0 <= z < p^d`` whose base-``p`` digits are
the coefficients (constant term first) of a residue modulo a fixed monic
irreducible polynomial.  F_p embeds as the ints ``0..p-1``.
"""

from __future__ import annotations

from functools import lru_cache

# Conway polynomials (F. Luebeck's tables), coefficients constant term first.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (5, 5): (3, 4, 0, 0, 0, 1),
    (5, 6): (2, 0, 1, 4, 1, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
    (7, 5): (4, 1, 0, 0, 0, 1),
    (7, 6): (3, 6, 4, 5, 1, 0, 1),
}


# --- F_p[x], coefficient lists constant term first, no trailing zeros ----

def ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(a, b, p):
    n = max(len(a), len(b))
    return ptrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def psub(a, b, p):
    return padd(a, [(-c) % p for c in b], p)


def pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return ptrim(out)


def pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = (a[s + i] - c * y) % p
        ptrim(a)
    return ptrim(q), a


def pgcd(a, b, p):
    a, b = ptrim(list(a)), ptrim(list(b))
    while b:
        a, b = b, pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def ppowmod(base, e, mod, p):
    result = [1]
    base = pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = pdivmod(pmul(result, base, p), mod, p)[1]
        base = pdivmod(pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def is_irreducible(poly, p) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    n = len(poly) - 1
    if n < 1:
        return False
    x = [0, 1]
    primes = [q for q in range(2, n + 1) if n % q == 0 and all(q % r for r in range(2, q))]
    for q in primes:
        h = psub(ppowmod(x, p ** (n // q), poly, p), x, p)
        if len(pgcd(poly, h, p)) > 1:
            return False
    return not pdivmod(psub(ppowmod(x, p**n, poly, p), x, p), poly, p)[1]


def irreducible_poly(p: int, d: int) -> tuple[int, ...]:
    if (p, d) in CONWAY:
        return CONWAY[(p, d)]
    # lexicographically first monic irreducible, for primes outside the table
    for n in range(p**d):
        low = [(n // p**i) % p for i in range(d)]
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def strip_small_degree_roots(poly, p: int, bound: int) -> list[int]:
    """Remove every root (with multiplicity) lying in some ``F_{p^e}``, ``e <= bound``.

    What is left has only roots of degree ``> bound``.
    """
    rem = ptrim(list(poly))
    x = [0, 1]
    for e in range(1, bound + 1):
        if len(rem) <= 1:
            break
        frob = psub(ppowmod(x, p**e, rem, p), x, p)
        g = pgcd(rem, frob, p)
        while len(g) > 1:
            rem = pdivmod(rem, g, p)[0]
            g = pgcd(rem, g, p)
    return rem


class GF:
    """The field with ``p**d`` elements."""

    def __init__(self, p: int, d: int = 1):
        self.p = p
        self.d = d
        self.q = p**d
        self.modulus = irreducible_poly(p, d)
        self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.d})"

    def _polymul_int(self, a: int, b: int) -> int:
        p, d = self.p, self.d
        av = [(a // p**i) % p for i in range(d)]
        bv = [(b // p**i) % p for i in range(d)]
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(av):
            if x:
                for j, y in enumerate(bv):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c:
                for i in range(d + 1):
                    prod[k - d + i] = (prod[k - d + i] - c * mod[i]) % p
        return sum(prod[i] * p**i for i in range(d))

    def _build_tables(self):
        q = self.q
        gen = None
        for g in range(1, q):
            z, order = g, 1
            while z != 1:
                z = self._polymul_int(z, g)
                order += 1
            if order == q - 1:
                gen = g
                break
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        z = 1
        for i in range(q - 1):
            exp[i] = z
            log[z] = i
            z = self._polymul_int(z, gen)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self.exp, self.log, self.generator = exp, log, gen
        p, d = self.p, self.d
        self._digits = [tuple((z // p**i) % p for i in range(d)) for z in range(q)]
        self._weights = [p**i for i in range(d)]

    def add(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a + b) % self.p
        p = self.p
        return sum(((x + y) % p) * w for x, y, w in zip(self._digits[a], self._digits[b], self._weights))

    def neg(self, a: int) -> int:
        if self.d == 1:
            return (-a) % self.p
        p = self.p
        return sum(((-x) % p) * w for x, w in zip(self._digits[a], self._weights))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def pow(self, a: int, n: int) -> int:
        if n == 0:
            return 1
        if a == 0:
            return 0
        return self.exp[(self.log[a] * n) % (self.q - 1)]

    def scalar(self, c: int, a: int) -> int:
        """Product with an F_p integer ``c``."""
        return self.mul(c % self.p, a)

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.pow(a, self.p**times)

    def in_subfield(self, a: int, e: int) -> bool:
        return self.frobenius(a, e) == a

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def field(p: int, d: int) -> GF:
    return GF(p, d)
