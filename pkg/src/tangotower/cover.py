"""Picard arithmetic on the P^1-bundle ``pi: P = P(E) -> X``.

``Pic P = Z*F + pi^*Pic X`` with ``F`` the canonical section, so a class is
a pair ``(a, base)``.  The purely inseparable divisor ``G`` is never a
generator; it is always replaced by ``p*F - p*pi^*D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd

from .divclass import TowerClass, pullback, scale


class CoverPreconditionError(ValueError):
    pass


class UnsupportedPushforward(ValueError):
    pass


@dataclass(frozen=True)
class PBundleClass:
    a: Fraction
    base: TowerClass

    def __post_init__(self):
        if isinstance(self.a, float):
            raise TypeError("F-coefficient must be exact")
        object.__setattr__(self, "a", Fraction(self.a))

    @classmethod
    def zero(cls, level: int) -> "PBundleClass":
        return cls(Fraction(0), TowerClass.zero(level))

    @classmethod
    def pulled_back(cls, c: TowerClass) -> "PBundleClass":
        return cls(Fraction(0), c)

    def __add__(self, other: "PBundleClass") -> "PBundleClass":
        return PBundleClass(self.a + other.a, self.base + other.base)

    def __sub__(self, other: "PBundleClass") -> "PBundleClass":
        return PBundleClass(self.a - other.a, self.base - other.base)

    def __neg__(self) -> "PBundleClass":
        return PBundleClass(-self.a, -self.base)

    def __rmul__(self, q) -> "PBundleClass":
        q = Fraction(q)
        return PBundleClass(q * self.a, scale(q, self.base))

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.base.is_zero

    def __str__(self) -> str:
        return f"{self.a}*F + pi^*({self.base})"

    def to_json(self) -> dict:
        return {"a": str(self.a), "base": self.base.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "PBundleClass":
        extra = set(obj) - {"a", "base"}
        if extra:
            raise ValueError(f"unknown PBundleClass fields: {sorted(extra)}")
        if isinstance(obj["a"], float):
            raise ValueError("floating-point F-coefficient rejected")
        return cls(Fraction(obj["a"]), TowerClass.from_json(obj["base"]))


def g_class(p: int, D: TowerClass) -> PBundleClass:
    """``O_P(G) = O_P(pF - p pi^*D)``."""
    return PBundleClass(Fraction(p), scale(-p, D))


def least_m(p: int, k: int) -> int:
    """Smallest positive ``m`` with ``k | p + m``."""
    m = (-p) % k
    return m if m else k


def _check_cover(p: int, k: int, m: int) -> None:
    if k < 1 or m < 1:
        raise CoverPreconditionError("k and m must be positive")
    if gcd(p, k) != 1:
        raise CoverPreconditionError(f"cyclic cover needs (p,k)=1, got p={p}, k={k}")
    if (p + m) % k:
        raise CoverPreconditionError(f"k={k} must divide p+m={p + m}")


def m_line_bundle(p: int, k: int, m: int, d_prime: TowerClass) -> PBundleClass:
    """``M = O_P(-(p+m)/k F) (x) pi^* O_X(p D')``."""
    _check_cover(p, k, m)
    return PBundleClass(Fraction(-(p + m), k), scale(p, d_prime))


def rounding_term(p: int, k: int, m: int, i: int, d_prime: TowerClass) -> PBundleClass:
    """Class of the integral part of the Q-divisor ``i(mF + G)/k``.

    F and G are distinct prime divisors, so the floor is taken on each
    multiplicity separately before G is eliminated.
    """
    f_mult = floor(Fraction(i * m, k))
    g_mult = floor(Fraction(i, k))
    return f_mult * PBundleClass(Fraction(1), TowerClass.zero(d_prime.level)) + g_mult * g_class(
        p, scale(k, d_prime)
    )


def cyclic_cover_summands(p: int, k: int, m: int, d_prime: TowerClass) -> list[PBundleClass]:
    """Summands ``M^i (x) O_P([i(mF+G)/k])``, ``i = 0..k-1``, of the cover algebra."""
    M = m_line_bundle(p, k, m, d_prime)
    return [i * M + rounding_term(p, k, m, i, d_prime) for i in range(k)]


@dataclass(frozen=True)
class RelationCheck:
    ok: bool
    residual: PBundleClass

    def __bool__(self) -> bool:
        return self.ok


def verify_mk_relation(p: int, k: int, m: int, d_prime: TowerClass,
                       M: PBundleClass | None = None) -> RelationCheck:
    """Check ``M^k = O_P(-mF - G)`` with ``D = k D'``.

    ``M`` may be supplied to test a candidate other than the standard one.
    """
    _check_cover(p, k, m)
    if M is None:
        M = m_line_bundle(p, k, m, d_prime)
    target = -(PBundleClass(Fraction(m), TowerClass.zero(d_prime.level)) + g_class(p, scale(k, d_prime)))
    residual = k * M - target
    return RelationCheck(residual.is_zero, residual)


def multiplication_divisor(k: int, m: int, i: int, j: int) -> tuple[int, int]:
    """``(a, b)`` with the product ``summand(i) x summand(j) -> summand((i+j) mod k)``
    vanishing exactly along ``aF + bG``.

    ``a = [(i+j)m/k] - [im/k] - [jm/k] >= 0`` and ``b = [(i+j)/k]``, i.e. the
    generators pick up the branch divisor ``G`` (and some ``F``) on wrap-around.
    """
    a = (i + j) * m // k - i * m // k - j * m // k
    return a, (i + j) // k


def multiplication_residual(p: int, k: int, m: int, d_prime: TowerClass, i: int, j: int) -> PBundleClass:
    """``summand((i+j) mod k) - summand(i) - summand(j) - correction``.

    The correction is the class of ``mF + G`` (the zero locus of xi) when
    ``i + j >= k``.  The residual is ``(a - m[i+j >= k]) F`` with ``a`` from
    :func:`multiplication_divisor`; it vanishes identically when ``m = 1``.
    """
    s = cyclic_cover_summands(p, k, m, d_prime)
    lvl = d_prime.level
    lhs = s[i] + s[j]
    if i + j >= k:
        lhs = lhs + PBundleClass(Fraction(m), TowerClass.zero(lvl)) + g_class(p, scale(k, d_prime))
    return s[(i + j) % k] - lhs


def canonical_of_P(K: TowerClass, k: int, d_prime: TowerClass) -> PBundleClass:
    """``K_P = -2F + pi^*(K + kD')`` for ``0 -> O -> E -> O(kD') -> 0``."""
    return PBundleClass(Fraction(-2), K + scale(k, d_prime))


def pushforward_structure(summands: list[PBundleClass]) -> list[TowerClass]:
    """``pi_*`` of a direct sum of ``O_P(aF) (x) pi^*L`` with ``a <= 0``.

    ``pi_* O_P = O_X`` and ``pi_* O_P(-i) = 0`` for ``i > 0``; the surviving
    base classes are returned in order.
    """
    out = []
    for s in summands:
        if s.a.denominator != 1:
            raise UnsupportedPushforward(f"non-integral F-coefficient {s.a}")
        if s.a > 0:
            raise UnsupportedPushforward(f"positive twist O_P({s.a}) needs Sym powers")
        if s.a == 0:
            out.append(s.base)
    return out


# class-level pullbacks along the cover phi: X~ -> P

def cover_pullback(c: PBundleClass, f_multiplicity: Fraction) -> TowerClass:
    """``phi^*(aF + pi^*c) = a * mult * F~ + f^*c``.

    ``mult`` is ``k`` for a cyclic cover with ``(p,k) = 1`` and ``k/p`` in
    the inseparable case ``k = p^l r``.
    """
    up = pullback(c.base)
    return TowerClass(up.level, up.e, up.d, up.f[:-1] + (c.a * f_multiplicity,))


def g_tilde_class(p: int, d_prime: TowerClass, separable: bool = True) -> TowerClass:
    """Class of ``G~ = (phi^*G)_red`` on the cover.

    ``G~ ~ pF~ - p f^*D'`` when ``(p,k)=1`` and ``G~ ~ F~ - p f^*D'`` for
    ``k = p^l r`` with ``l >= 1``.
    """
    up = scale(-p, pullback(d_prime))
    coeff = p if separable else 1
    return TowerClass(up.level, up.e, up.d, up.f[:-1] + (Fraction(coeff),))


def ramification_canonical(p: int, K: TowerClass, k: int, d_prime: TowerClass,
                           separable: bool = True) -> TowerClass:
    """Canonical class of the cover from ``phi^*K_P`` plus ramification.

    Separable case: ``K~ = phi^*K_P + (k-1)(F~ + G~)`` with ``phi^*F = kF~``.
    Inseparable case: ``K~ = phi^*K_P + (k-1)G~ + (k/p - 1)F~`` with
    ``phi^*F = (k/p)F~``.
    """
    KP = canonical_of_P(K, k, d_prime)
    lvl = d_prime.level + 1
    F_t = TowerClass.canonical_section(lvl)
    G_t = g_tilde_class(p, d_prime, separable)
    if separable:
        return cover_pullback(KP, Fraction(k)) + scale(k - 1, F_t + G_t)
    mult = Fraction(k, p)
    return cover_pullback(KP, mult) + scale(k - 1, G_t) + scale(mult - 1, F_t)
