"""Artin-Schreier curves ``y^p - y = f(x)`` over F_p.

With ``m = deg f`` prime to ``p`` there is a single place ``P_inf`` over
``x = inf``; it is totally ramified, ``v(x) = -p`` and ``v(y) = -m``.  The
affine model is smooth (the y-partial of the equation is ``-1``), so ``x - a``
is a uniformizer at every finite point and ``dx`` has divisor
``(2g - 2) P_inf``.

Functions are polynomials in ``x, y`` with ``y``-degree below ``p``.  Such
monomials have pairwise distinct pole orders ``p*i + m*j`` at ``P_inf``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import gf
from .tower import is_prime


class CurveError(ValueError):
    pass


class ValuationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ArtinSchreierCurve:
    p: int
    f: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise CurveError(f"p={self.p} is not prime")
        coeffs = list(c % self.p for c in self.f)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise CurveError("f must have positive degree")
        object.__setattr__(self, "f", tuple(coeffs))
        if gcd(self.m, self.p) != 1:
            raise CurveError(f"deg f = {self.m} must be prime to p = {self.p}")

    @property
    def m(self) -> int:
        return len(self.f) - 1

    @property
    def genus(self) -> int:
        return (self.p - 1) * (self.m - 1) // 2

    @property
    def canonical_degree(self) -> int:
        return 2 * self.genus - 2

    def f_prime(self) -> tuple[int, ...]:
        return tuple((i * c) % self.p for i, c in enumerate(self.f))[1:]

    def to_json(self) -> dict:
        return {"p": self.p, "f": list(self.f)}

    @classmethod
    def from_json(cls, obj: dict) -> "ArtinSchreierCurve":
        if not isinstance(obj, dict):
            raise CurveError("curve must be a JSON object")
        extra = set(obj) - {"p", "f"}
        if extra:
            raise CurveError(f"unknown curve fields: {sorted(extra)}")
        try:
            p, f = obj["p"], obj["f"]
        except KeyError as exc:
            raise CurveError(f"missing curve field {exc}") from None
        if not isinstance(p, int) or not all(isinstance(c, int) for c in f):
            raise CurveError("p and the coefficients of f must be integers")
        return cls(p, tuple(f))

    def __str__(self):
        return f"y^{self.p} - y = {_poly_str(self.f)} over F_{self.p}"


def genus(curve: ArtinSchreierCurve) -> int:
    return curve.genus


def _poly_str(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c:
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
    return " + ".join(terms) or "0"


# --- functions on the affine model ---------------------------------------

@dataclass(frozen=True)
class CurveFunction:
    """Reduced polynomial ``sum c[i,j] x^i y^j`` with ``0 <= j < p``."""

    p: int
    terms: tuple[tuple[int, int, int], ...]  # sorted (i, j, c), c != 0

    @classmethod
    def from_dict(cls, curve: ArtinSchreierCurve, coeffs: dict) -> "CurveFunction":
        return _reduce(curve, coeffs)

    @classmethod
    def monomial(cls, curve, i: int, j: int = 0, c: int = 1) -> "CurveFunction":
        return _reduce(curve, {(i, j): c})

    @classmethod
    def x(cls, curve) -> "CurveFunction":
        return cls.monomial(curve, 1, 0)

    @classmethod
    def y(cls, curve) -> "CurveFunction":
        return cls.monomial(curve, 0, 1)

    @classmethod
    def const(cls, curve, c: int) -> "CurveFunction":
        return cls.monomial(curve, 0, 0, c)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict:
        return {(i, j): c for i, j, c in self.terms}

    def is_constant(self) -> bool:
        return all(i == 0 and j == 0 for i, j, _ in self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for i, j, c in sorted(self.terms, key=lambda t: (-t[1], -t[0])):
            parts = [] if c == 1 and (i or j) else [str(c)]
            if i:
                parts.append("x" if i == 1 else f"x^{i}")
            if j:
                parts.append("y" if j == 1 else f"y^{j}")
            out.append("*".join(parts))
        return " + ".join(out)

    def to_json(self) -> list:
        return [[i, j, c] for i, j, c in self.terms]


def _reduce(curve: ArtinSchreierCurve, coeffs: dict) -> CurveFunction:
    """Reduce modulo ``y^p = y + f(x)`` and the prime ``p``."""
    p = curve.p
    work: dict[tuple[int, int], int] = {}
    for (i, j), c in coeffs.items():
        if i < 0 or j < 0:
            raise CurveError("negative exponent in a polynomial function")
        work[(i, j)] = (work.get((i, j), 0) + c) % p
    while True:
        high = [(i, j) for (i, j), c in work.items() if j >= p and c]
        if not high:
            break
        for i, j in high:
            c = work.pop((i, j))
            # y^j = y^(j-p) * (y + f(x))
            key = (i, j - p + 1)
            work[key] = (work.get(key, 0) + c) % p
            for a, fa in enumerate(curve.f):
                if fa:
                    key = (i + a, j - p)
                    work[key] = (work.get(key, 0) + c * fa) % p
    terms = tuple(sorted((i, j, c) for (i, j), c in work.items() if c % p))
    return CurveFunction(p, terms)


def fn_add(curve, a: CurveFunction, b: CurveFunction) -> CurveFunction:
    d = a.as_dict()
    for k, c in b.as_dict().items():
        d[k] = d.get(k, 0) + c
    return _reduce(curve, d)


def fn_scale(curve, c: int, a: CurveFunction) -> CurveFunction:
    return _reduce(curve, {k: c * v for k, v in a.as_dict().items()})


def fn_mul(curve, a: CurveFunction, b: CurveFunction) -> CurveFunction:
    d: dict = {}
    for i1, j1, c1 in a.terms:
        for i2, j2, c2 in b.terms:
            k = (i1 + i2, j1 + j2)
            d[k] = d.get(k, 0) + c1 * c2
    return _reduce(curve, d)


def fn_pow(curve, a: CurveFunction, n: int) -> CurveFunction:
    out = CurveFunction.const(curve, 1)
    for _ in range(n):
        out = fn_mul(curve, out, a)
    return out


def pth_power(curve, a: CurveFunction) -> CurveFunction:
    """``a^p`` computed as ``sum c x^(ip) y^(jp)`` (Frobenius is additive)."""
    return _reduce(curve, {(i * curve.p, j * curve.p): c for i, j, c in a.terms})


def differential_of(curve: ArtinSchreierCurve, eta: CurveFunction) -> CurveFunction:
    """``h`` with ``d eta = h dx``.

    Differentiating ``y^p - y = f(x)`` gives ``-dy = f'(x) dx``, so
    ``h = d_x eta - f'(x) d_y eta``.
    """
    p = curve.p
    fp = curve.f_prime()
    d: dict = {}
    for i, j, c in eta.terms:
        if i:
            d[(i - 1, j)] = d.get((i - 1, j), 0) + i * c
        if j:
            for a, fa in enumerate(fp):
                if fa:
                    k = (i + a, j - 1)
                    d[k] = d.get(k, 0) - j * c * fa
    return _reduce(curve, {k: v % p for k, v in d.items()})


# --- valuations at infinity ------------------------------------------------

def weight(curve: ArtinSchreierCurve, i: int, j: int) -> int:
    """Pole order of ``x^i y^j`` at ``P_inf``."""
    return curve.p * i + curve.m * j


def weighted_degree(curve, h: CurveFunction) -> int:
    if h.is_zero:
        raise ValuationError("the zero function has no valuation")
    return max(weight(curve, i, j) for i, j, _ in h.terms)


def norm_to_x(curve: ArtinSchreierCurve, h: CurveFunction) -> list[int]:
    """``N(h) = prod_c h(x, y + c)`` over ``c in F_p``, a polynomial in ``x``.

    The conjugates of ``y`` over ``F_p(x)`` are ``y + c``.
    """
    p = curve.p
    out = CurveFunction.const(curve, 1)
    y = CurveFunction.y(curve)
    for c in range(p):
        shifted_y = fn_add(curve, y, CurveFunction.const(curve, c))
        conj = CurveFunction(p, ())
        for i, j, coeff in h.terms:
            term = fn_mul(curve, CurveFunction.monomial(curve, i, 0, coeff), fn_pow(curve, shifted_y, j))
            conj = fn_add(curve, conj, term)
        out = fn_mul(curve, out, conj)
    if any(j for _, j, _ in out.terms):
        raise ValuationError("norm did not descend to F_p[x]")
    poly = [0] * (max((i for i, _, _ in out.terms), default=0) + 1)
    for i, _, c in out.terms:
        poly[i] = c
    return gf.ptrim(poly)


def infinity_valuation(curve: ArtinSchreierCurve, h: CurveFunction, as_differential: bool = False) -> int:
    """``v_inf(h)``, or ``v_inf(h dx)`` when ``as_differential`` is set.

    Uses the unique top-weight monomial; if the top weight were shared the
    value comes from the norm instead: ``v_inf(h) = -deg_x N(h)`` because
    the place is totally ramified of index ``p = [K : F_p(x)]``.
    """
    if h.is_zero:
        raise ValuationError("the zero function has no valuation")
    weights = [weight(curve, i, j) for i, j, _ in h.terms]
    top = max(weights)
    if weights.count(top) == 1:
        v = -top
    else:
        v = -(len(norm_to_x(curve, h)) - 1)
    return v + (curve.canonical_degree if as_differential else 0)


@dataclass(frozen=True)
class DifferentialReport:
    v_infinity: int
    finite_part_degree: int
    total_degree: int
    witness: CurveFunction
    h: CurveFunction

    def to_json(self) -> dict:
        return {
            "eta": str(self.witness),
            "h": str(self.h),
            "v_infinity": self.v_infinity,
            "finite_part_degree": self.finite_part_degree,
            "total_degree": self.total_degree,
        }


def differential_report(curve: ArtinSchreierCurve, eta: CurveFunction) -> DifferentialReport:
    """Divisor data of ``d eta = h dx`` for polynomial ``eta``.

    ``h`` is regular on the affine part, so its zero divisor there has
    degree ``-v_inf(h)`` and ``dx`` contributes nothing off ``P_inf``.
    """
    h = differential_of(curve, eta)
    if h.is_zero:
        raise ValuationError(f"d({eta}) = 0: eta is a p-th power in the polynomial model")
    v = infinity_valuation(curve, h, as_differential=True)
    finite = -infinity_valuation(curve, h)
    return DifferentialReport(v, finite, v + finite, eta, h)


# --- (pre-)Tango structures supported at P_inf ----------------------------

def eta_monomials(curve: ArtinSchreierCurve, weight_bound: int) -> list[tuple[int, int]]:
    """Reduced non-constant monomials of weight ``<= weight_bound``, by weight."""
    p, m = curve.p, curve.m
    mons = []
    for j in range(p):
        i = 0
        while p * i + m * j <= weight_bound:
            if i or j:
                mons.append((i, j))
            i += 1
    return sorted(mons, key=lambda ij: weight(curve, *ij))


def _nullspace_mod_p(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of ``{v : A v = 0}`` over F_p from reduced row echelon form."""
    A = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(A)) if A[i][c] % p), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [(v * inv) % p for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] % p:
                t = A[i][c]
                A[i] = [(a - t * b) % p for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(A, pivots):
            v[pc] = (-row[fc]) % p
        basis.append(v)
    return basis


def _differential_matrix(curve, mons):
    images = [differential_of(curve, CurveFunction.monomial(curve, i, j)) for i, j in mons]
    keys = sorted({(i, j) for h in images for i, j, _ in h.terms}, key=lambda ij: weight(curve, *ij))
    cols = []
    for h in images:
        d = h.as_dict()
        cols.append([d.get(k, 0) for k in keys])
    return images, keys, cols


def pre_tango_search(curve: ArtinSchreierCurve, d: int, weight_bound: int) -> CurveFunction | None:
    """A polynomial justification ``eta`` with ``(d eta) >= p d P_inf``, or None.

    Polynomial ``eta`` give ``h`` without finite poles, so the condition is
    ``v_inf(h dx) >= p d``, i.e. ``wdeg(h) <= 2g - 2 - p d``.  Single
    monomials are tried first; otherwise the linear conditions on the
    coefficients of ``eta`` are solved over F_p, which makes the search
    exhaustive over all ``eta`` of weight ``<= weight_bound``.
    """
    if d < 1:
        raise CurveError("d must be >= 1")
    budget = curve.canonical_degree - curve.p * d
    if budget < 0:
        return None
    mons = eta_monomials(curve, weight_bound)
    for i, j in mons:
        eta = CurveFunction.monomial(curve, i, j)
        h = differential_of(curve, eta)
        if not h.is_zero and weighted_degree(curve, h) <= budget:
            return eta
    if not mons:
        return None
    images, keys, cols = _differential_matrix(curve, mons)
    p = curve.p
    high = [r for r, k in enumerate(keys) if weight(curve, *k) > budget]
    rows = [[cols[c][r] for c in range(len(mons))] for r in high]
    for vec in _nullspace_mod_p(rows, len(mons), p) if rows else _unit_vectors(len(mons)):
        eta = CurveFunction.from_dict(curve, {mons[c]: v for c, v in enumerate(vec) if v})
        if not differential_of(curve, eta).is_zero:
            return eta
    return None


def _unit_vectors(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def differential_kernel_dimension(curve: ArtinSchreierCurve, weight_bound: int) -> int:
    """Dimension of ``{eta : d eta = 0}`` among non-constant ``eta`` of bounded weight."""
    mons = eta_monomials(curve, weight_bound)
    if not mons:
        return 0
    _, keys, cols = _differential_matrix(curve, mons)
    rows = [[cols[c][r] for c in range(len(mons))] for r in range(len(keys))]
    return len(_nullspace_mod_p(rows, len(mons), curve.p)) if rows else len(mons)


def is_tango(curve: ArtinSchreierCurve, d: int) -> CurveFunction | None:
    """``eta`` with ``(d eta) = p d P_inf`` exactly, or None.

    Equality forces ``h`` to have no finite zeros, so ``h`` is a nonzero
    constant and ``v_inf(d eta) = 2g - 2``; the witness is ``eta = x``.
    """
    if d < 1:
        raise CurveError("d must be >= 1")
    eta = CurveFunction.x(curve)
    rep = differential_report(curve, eta)
    if rep.finite_part_degree == 0 and rep.v_infinity == curve.p * d:
        return eta
    return None


@dataclass(frozen=True)
class TangoBounds:
    lower: int
    upper: Fraction
    witness: CurveFunction | None

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": str(self.upper),
            "exact": self.exact,
            "witness": None if self.witness is None else str(self.witness),
        }


def tango_invariant_bounds(curve: ArtinSchreierCurve, weight_bound: int | None = None) -> TangoBounds:
    """Bounds ``lower <= n(C) <= 2(g-1)/p``.

    ``lower`` is the largest ``d`` for which :func:`pre_tango_search` finds a
    justification, i.e. the best ``deg floor((d eta)/p)`` over divisors
    supported at ``P_inf``.
    """
    g = curve.genus
    if g < 2:
        raise CurveError(f"the Tango invariant needs g >= 2, got g={g}")
    if weight_bound is None:
        weight_bound = 3 * curve.p * curve.m
    upper = Fraction(2 * (g - 1), curve.p)
    for d in range(int(upper), 0, -1):
        eta = pre_tango_search(curve, d, weight_bound)
        if eta is not None:
            return TangoBounds(d, upper, eta)
    return TangoBounds(0, upper, None)


def raynaud_family(p: int, ell: int) -> ArtinSchreierCurve:
    """``y^p - y = x^(l p - 1)``: Tango with ``D = (l(p-1) - 2) P_inf``, ``eta = x``."""
    if not is_prime(p):
        raise CurveError(f"p={p} is not prime")
    if ell < 1 or ell * (p - 1) <= 2:
        raise CurveError(f"need l(p-1) > 2 for deg D = l(p-1) - 2 >= 1, got p={p}, l={ell}")
    m = ell * p - 1
    return ArtinSchreierCurve(p, (0,) * m + (1,))


def raynaud_degree(p: int, ell: int) -> int:
    return ell * (p - 1) - 2


# --- brute-force closed-point oracle ---------------------------------------

@dataclass(frozen=True)
class PointCount:
    """Result of :func:`brute_force_divisor_degree`.

    ``degree`` sums local orders over the enumerated points.  ``residual``
    is the part of the x-norm of ``h`` lying over closed points that the
    enumeration could not reach; ``complete`` means it is constant.
    """

    degree: int
    complete: bool
    zeros: tuple[tuple[int, int], ...]  # (residue degree, vanishing order) per geometric point
    residual: tuple[int, ...] = ()

    @property
    def residual_degree(self) -> int:
        return max(len(self.residual) - 1, 0)

    @property
    def certified_degree(self) -> int:
        """Enumerated degree plus the unreached zeros counted through the norm.

        Above a root ``a`` of an irreducible ``phi | N(h)`` the fibre is
        etale and ``x - a`` is a uniformizer, so those zeros contribute
        ``deg(phi) * mult_phi(N(h))``.
        """
        return self.degree + self.residual_degree

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "complete": self.complete,
            "residual_degree": self.residual_degree,
            "zeros": [list(z) for z in self.zeros],
        }


class Inconclusive(RuntimeError):
    pass


_POINTS: dict = {}


def affine_points(curve: ArtinSchreierCurve, d: int) -> list[tuple[int, int]]:
    """Points of the affine model with residue field exactly ``F_{p^d}``."""
    key = (curve, d)
    if key in _POINTS:
        return _POINTS[key]
    F = gf.field(curve.p, d)
    proper = [e for e in range(1, d) if d % e == 0]
    pts = []
    for a in F.elements():
        fa = _eval_poly(F, curve.f, a)
        for b in F.elements():
            if F.sub(F.sub(F.pow(b, curve.p), b), fa) == 0:
                if not any(F.in_subfield(a, e) and F.in_subfield(b, e) for e in proper):
                    pts.append((a, b))
    _POINTS[key] = pts
    return pts


def _eval_poly(F, coeffs, a):
    acc = 0
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, a), c % F.p)
    return acc


def _eval_fn(F, h: CurveFunction, a: int, b: int) -> int:
    acc = 0
    for i, j, c in h.terms:
        acc = F.add(acc, F.mul(c, F.mul(F.pow(a, i), F.pow(b, j))))
    return acc


def _series_mul(F, s, t, n):
    out = [0] * n
    for i, x in enumerate(s[:n]):
        if x:
            for j in range(min(len(t), n - i)):
                y = t[j]
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def _series_pow(F, s, e, n):
    out = [1] + [0] * (n - 1)
    for _ in range(e):
        out = _series_mul(F, out, s, n)
    return out


def local_order(curve: ArtinSchreierCurve, h: CurveFunction, F, a: int, b: int, max_precision: int = 4096) -> int:
    """Vanishing order of ``h`` at the point ``(a, b)`` in the local parameter ``t = x - a``.

    ``y = b + Y(t)`` with ``Y^p - Y = g(t) = f(a+t) - f(a)``, solved by
    ``Y = -(g + g^p + g^(p^2) + ...)``.
    """
    p = curve.p
    # g(t) = f(a + t) - f(a), Taylor coefficients via binomial expansion
    deg = curve.m
    g = [0] * (deg + 1)
    for k, c in enumerate(curve.f):
        if c:
            for r in range(k + 1):
                binom = _binom_mod(k, r, p)
                if binom:
                    g[r] = F.add(g[r], F.mul(c * binom % p, F.pow(a, k - r)))
    g[0] = 0
    n = 8
    while n <= max_precision:
        Y = [0] * n
        gp = g[:]
        power = 1
        while power < n:
            for idx, c in enumerate(gp):
                pos = idx * power
                if pos >= n:
                    break
                if c:
                    Y[pos] = F.sub(Y[pos], F.frobenius(c, _log_p(power, p)))
            power *= p
        xs = [a, 1] + [0] * (n - 2)
        ys = Y[:]
        ys[0] = F.add(ys[0], b)
        total = [0] * n
        for i, j, c in h.terms:
            term = _series_mul(F, _series_pow(F, xs, i, n), _series_pow(F, ys, j, n), n)
            for r in range(n):
                if term[r]:
                    total[r] = F.add(total[r], F.mul(c, term[r]))
        for r, v in enumerate(total):
            if v:
                return r
        n *= 2
    raise Inconclusive(f"no nonzero coefficient below t^{max_precision}")


def _log_p(power: int, p: int) -> int:
    e = 0
    while power > 1:
        power //= p
        e += 1
    return e


def _binom_mod(n: int, r: int, p: int) -> int:
    from math import comb
    return comb(n, r) % p


def brute_force_divisor_degree(curve: ArtinSchreierCurve, h: CurveFunction, field_ext_bound: int) -> PointCount:
    """Degree of the finite zero divisor of ``h`` by enumerating closed points.

    Every point with residue field ``F_{p^d}``, ``d <= field_ext_bound``, is
    visited; a closed point of degree ``d`` is ``d`` geometric points, each
    adding its local order.  ``complete`` certifies that no zero lies in a
    larger field: the x-norm of ``h`` has no roots of higher degree, and
    every root found has a zero above it inside the searched fields.
    """
    if h.is_zero:
        raise CurveError("h must be nonzero")
    if field_ext_bound < 1:
        raise CurveError("field_ext_bound must be >= 1")
    total = 0
    zeros = []
    x_roots_hit: set = set()
    for d in range(1, field_ext_bound + 1):
        F = gf.field(curve.p, d)
        for a, b in affine_points(curve, d):
            if _eval_fn(F, h, a, b) == 0:
                o = local_order(curve, h, F, a, b)
                total += o
                zeros.append((d, o))
                x_roots_hit.add(_min_poly(F, a))
    residual = _unreached_norm_part(curve, h, x_roots_hit)
    return PointCount(total, len(residual) <= 1, tuple(zeros), tuple(residual))


def _min_poly(F, a: int) -> tuple[int, ...]:
    """Minimal polynomial of ``a`` over F_p as a coefficient tuple."""
    conj = [a]
    z = F.frobenius(a)
    while z != a:
        conj.append(z)
        z = F.frobenius(z)
    poly = [1]
    for c in conj:
        new = [0] * (len(poly) + 1)
        for i, v in enumerate(poly):
            new[i + 1] = F.add(new[i + 1], v)
            new[i] = F.sub(new[i], F.mul(v, c))
        poly = new
    if any(v >= F.p for v in poly):
        raise AssertionError("minimal polynomial left F_p")
    return tuple(poly)


def _unreached_norm_part(curve, h, x_roots_hit) -> list[int]:
    """Strip from ``N(h)`` every factor over which a zero was enumerated."""
    p = curve.p
    rad = norm_to_x(curve, h)
    for mp in x_roots_hit:
        mp = list(mp)
        while len(rad) > 1:
            q, r = gf.pdivmod(rad, mp, p)
            if r:
                break
            rad = q
    return rad


def random_eta(curve: ArtinSchreierCurve, weight_bound: int, rng, max_terms: int = 4) -> CurveFunction:
    """A random reduced ``eta`` with at most ``max_terms`` monomials of bounded weight
    whose differential is nonzero."""
    mons = eta_monomials(curve, weight_bound)
    while True:
        k = rng.randint(1, min(max_terms, len(mons)))
        chosen = rng.sample(mons, k)
        eta = CurveFunction.from_dict(curve, {ij: rng.randint(1, curve.p - 1) for ij in chosen})
        if not differential_of(curve, eta).is_zero:
            return eta
