"""Inductive cyclic-cover steps on polarized varieties.

A :class:`TowerState` carries the canonical class ``K``, the polarization
``D`` and, when known, the class of the divisor ``(d eta)`` of the
justification.  Construction I is the Raynaud-Mukai step (a ``k``-th cyclic
cover with ``(p,k) = 1``); construction II takes ``k = p^l r`` and the
normalization in ``k(P)(R^{1/k})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Literal

from .divclass import (
    DivisionFailure,
    TowerClass,
    TrivialityReport,
    divide_exact,
    is_trivial,
    pullback,
    scale,
)

TANGO = "Tango"
PRE_TANGO = "PreTango"


class StepError(ValueError):
    """A step precondition failed.  ``index`` is the step's position in a script."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"step {index}: {message}")
        self.index = index
        self.reason = message


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def first_step_coefficients(p: int, k: int) -> tuple[int, int]:
    """``(pk - p - k - 1, pk - p - k)``: F~ coefficient and D' shift of K~."""
    return p * k - p - k - 1, p * k - p - k


def second_step_coefficients(p: int, ell: int, r: int) -> tuple[int, int]:
    """``(p^l r - p^(l-1) r - 2, p^l r - p(p^l r - 1))`` for construction II."""
    k = p**ell * r
    return k - p ** (ell - 1) * r - 2, k - p * (k - 1)


@dataclass(frozen=True)
class StepRecord:
    kind: Literal["I", "II"]
    k: int
    d_prime: TowerClass
    ell: int | None = None
    r: int | None = None
    # construction II only: class of G~ - F~ + p f^*D' is zero, i.e. G~ ~ F~ - p f^*D'
    g_tilde: TowerClass | None = None
    formula: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind, "k": self.k, "d_prime": self.d_prime.to_json()}
        if self.kind == "II":
            out["l"] = self.ell
            out["r"] = self.r
            out["g_tilde"] = self.g_tilde.to_json()
        out["formula"] = self.formula
        return out


@dataclass(frozen=True)
class TowerState:
    p: int
    canonical: TowerClass
    polarization: TowerClass
    tango: str = TANGO
    steps: tuple[StepRecord, ...] = ()
    differential: TowerClass | None = None
    base_dim: int = 1
    k1: int | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.tango not in (TANGO, PRE_TANGO):
            raise ValueError(f"unknown Tango flag {self.tango!r}")
        if self.canonical.level != len(self.steps) or self.polarization.level != len(self.steps):
            raise ValueError("class levels must equal the number of steps")
        pol = self.polarization
        if pol.d <= 0 or any(c < 0 for c in pol.f) or pol.e != 0:
            raise ValueError(f"polarization {pol} fails the ampleness surrogate (d > 0, f >= 0, no E)")
        if self.tango == TANGO and not self.steps and self.base_dim == 1:
            if self.canonical != scale(self.p, pol):
                raise ValueError("a Tango curve must have K = pD")

    @property
    def dim(self) -> int:
        return self.base_dim + len(self.steps)

    @property
    def level(self) -> int:
        return len(self.steps)

    def slack(self) -> TowerClass | None:
        """``(d eta) - pD``, or None when the justification is not tracked."""
        if self.differential is None:
            return None
        return self.differential - scale(self.p, self.polarization)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "dim": self.dim,
            "base_dim": self.base_dim,
            "tango": self.tango,
            "canonical": self.canonical.to_json(),
            "polarization": self.polarization.to_json(),
            "differential": None if self.differential is None else self.differential.to_json(),
            "steps": [s.to_json() for s in self.steps],
        }


def base_from_tango_curve(p: int, degD: int, k1: int | None = None, slack: int = 0) -> TowerState:
    """Level-0 state of a (pre-)Tango curve with ``deg D = degD``.

    ``D = degD * D'_1`` and ``K = (d eta) = pD + slack*E``; ``slack = 0`` is
    the Tango case.  ``k1`` is the degree planned for the first cover and
    must divide ``degD`` and be prime to ``p``.
    """
    if not is_prime(p):
        raise StepError(f"p={p} is not prime")
    if degD < 1:
        raise StepError(f"deg D must be positive, got {degD}")
    if slack < 0:
        raise StepError("the pre-Tango slack must be effective (e >= 0)")
    if k1 is not None:
        if k1 < 1 or degD % k1:
            raise StepError(f"k1={k1} does not divide deg D={degD}")
        if gcd(p, k1) != 1:
            raise StepError(f"the cyclic cover needs (p,k1)=1, got p={p}, k1={k1}")
    D = TowerClass.base(degD)
    K = TowerClass.base(p * degD, e=slack)
    return TowerState(p, K, D, TANGO if slack == 0 else PRE_TANGO, differential=K, k1=k1)


def synthetic_state(p: int, dim: int, canonical: TowerClass, polarization: TowerClass) -> TowerState:
    """A hypothetical polarized variety of dimension ``dim`` given by its classes.

    Coordinates are in units of a base generator (the ``d`` slot), so
    ``K = D'``, ``D = kD'`` is ``canonical=base(1)``, ``polarization=base(k)``.
    The justification is not tracked and the flag is PreTango.
    """
    if canonical.level or polarization.level:
        raise ValueError("synthetic states are given at level 0")
    return TowerState(p, canonical, polarization, PRE_TANGO, base_dim=dim)


def _divide_polarization(s: TowerState, k: int, integral: bool) -> TowerClass:
    try:
        return divide_exact(s.polarization, k, integral)
    except DivisionFailure as exc:
        raise StepError(f"D = kD' fails for k={k}: {exc}") from exc


def step_I(s: TowerState, k: int, integral: bool = True) -> TowerState:
    """Raynaud-Mukai step: ``k``-th cyclic cover of ``P(E)`` ramified over ``F + G``.

    ``K~ = (pk-p-k-1)F~ + f^*(K - (pk-p-k)D')`` and ``D~ = (k-1)F~ + f^*D'``.
    The differential of ``eta~ = R^{1/k}`` is ``(delta phi^-1)^p dg`` with
    ``dg = eps^{pk} phi^{pk} dc``, giving
    ``(d eta~) = p(f^*D' - F~) + pkF~ + f^*((d eta) - pD)``.
    """
    p = s.p
    if k < 2 or gcd(p, k) != 1:
        raise StepError(f"construction I needs k >= 2 and (p,k)=1, got p={p}, k={k}")
    d_prime = _divide_polarization(s, k, integral)
    lvl = s.level + 1
    F_t = TowerClass.canonical_section(lvl)
    c_f, c_d = first_step_coefficients(p, k)
    K = scale(c_f, F_t) + pullback(s.canonical - scale(c_d, d_prime))
    D = scale(k - 1, F_t) + pullback(d_prime)

    diff = None
    if s.differential is not None:
        dc = s.differential - scale(p, s.polarization)
        diff = scale(p, pullback(d_prime) - F_t) + scale(p * k, F_t) + pullback(dc)

    rec = StepRecord("I", k, d_prime, formula={
        "K~": "(pk-p-k-1)F~ + f^*(K - (pk-p-k)D')",
        "D~": "(k-1)F~ + f^*(D')",
        "pk-p-k-1": c_f,
        "pk-p-k": c_d,
    })
    return TowerState(p, K, D, s.tango, s.steps + (rec,), diff, s.base_dim, s.k1)


def step_II(s: TowerState, ell: int, r: int, integral: bool = True) -> TowerState:
    """Construction II: normalization of ``P`` in ``k(P)(R^{1/k})``, ``k = p^l r``.

    ``K~ = (p^l r - p^(l-1) r - 2)F~ + f^*(K + (p^l r - p(p^l r - 1))D')``.
    The polarization is recorded as ``(k-1)F~ + f^*D'`` and the flag drops
    to PreTango; no Tango propagation is claimed for this construction.
    """
    p = s.p
    if ell < 1:
        raise StepError(f"construction II needs l >= 1, got l={ell}")
    if r < 1 or gcd(p, r) != 1:
        raise StepError(f"construction II needs (p,r)=1, got p={p}, r={r}")
    k = p**ell * r
    d_prime = _divide_polarization(s, k, integral)
    lvl = s.level + 1
    F_t = TowerClass.canonical_section(lvl)
    c_f, c_d = second_step_coefficients(p, ell, r)
    K = scale(c_f, F_t) + pullback(s.canonical + scale(c_d, d_prime))
    D = scale(k - 1, F_t) + pullback(d_prime)
    g_tilde = F_t - scale(p, pullback(d_prime))
    rec = StepRecord("II", k, d_prime, ell, r, g_tilde, formula={
        "K~": "(p^l r - p^(l-1) r - 2)F~ + f^*(K + (p^l r - p(p^l r - 1))D')",
        "G~": "F~ - p f^*(D')",
        "p^l r - p^(l-1) r - 2": c_f,
        "p^l r - p(p^l r - 1)": c_d,
    })
    return TowerState(p, K, D, PRE_TANGO, s.steps + (rec,), None, s.base_dim, s.k1)


def random_tango_tower(rng, p: int, max_steps: int = 3, max_k: int = 30) -> list[TowerState]:
    """A random Tango curve followed by integral construction I steps.

    Each next degree must divide every coordinate of the current
    polarization and be prime to ``p``; the chain stops early when no such
    degree exists.
    """
    ks = [rng.choice([k for k in range(2, max_k + 1) if gcd(k, p) == 1])]
    for _ in range(max_steps - 1):
        # D~ = (k-1)F~ + f^*D', so the next degree divides the last k - 1
        choices = [k for k in range(2, ks[-1]) if (ks[-1] - 1) % k == 0 and gcd(k, p) == 1]
        if not choices:
            break
        ks.append(rng.choice(choices))
    n = 1
    for k in ks:
        n *= k
    state = base_from_tango_curve(p, n * rng.randint(1, 4))
    states = [state]
    for k in ks:
        try:
            state = step_I(state, k)
        except StepError:
            break
        states.append(state)
    return states


@dataclass(frozen=True)
class Classification:
    trivial: bool
    report: TrivialityReport
    steps: tuple[StepRecord, ...]

    def to_json(self) -> dict:
        return {
            "verdict": "Trivial" if self.trivial else "NonTrivial",
            **self.report.to_json(),
            "steps": [f"{s.kind}(k={s.k})" for s in self.steps],
        }


def classify_canonical(s: TowerState) -> Classification:
    rep = is_trivial(s.canonical)
    return Classification(rep.trivial, rep, s.steps)


# --- build scripts -------------------------------------------------------

_SCRIPT_KEYS = {"p", "base", "steps", "division", "cover_check"}
_CURVE_BASE_KEYS = {"degD", "k1", "tango", "slack"}
_SYNTH_BASE_KEYS = {"synthetic", "dim", "canonical", "polarization"}


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise StepError(f"{where} must be a JSON object")
    extra = set(obj) - allowed
    if extra:
        raise StepError(f"unknown fields in {where}: {sorted(extra)}")


def _class_arg(v) -> TowerClass:
    if isinstance(v, dict):
        return TowerClass.from_json(v)
    if isinstance(v, float):
        raise StepError(f"floating-point coefficient {v!r} rejected")
    return TowerClass.base(Fraction(v))


def _int_field(obj: dict, key: str, default=None) -> int:
    v = obj.get(key, default)
    if not isinstance(v, int) or isinstance(v, bool):
        raise StepError(f"field {key!r} must be an integer, got {v!r}")
    return v


def base_from_script(p: int, base: dict) -> TowerState:
    if "synthetic" in base:
        _reject_unknown(base, _SYNTH_BASE_KEYS, "base")
        return synthetic_state(p, _int_field(base, "dim"), _class_arg(base["canonical"]),
                               _class_arg(base["polarization"]))
    _reject_unknown(base, _CURVE_BASE_KEYS, "base")
    tango = base.get("tango", True)
    slack = _int_field(base, "slack", 0)
    if tango and slack:
        raise StepError("a Tango base has no slack; set tango=false for a pre-Tango curve")
    k1 = base.get("k1")
    if k1 is not None:
        k1 = _int_field(base, "k1")
    return base_from_tango_curve(p, _int_field(base, "degD"), k1, slack)


def build_tower(script: dict) -> list[TowerState]:
    """Run a build script, returning the state at every level (base first)."""
    _reject_unknown(script, _SCRIPT_KEYS, "tower script")
    p = _int_field(script, "p")
    if not is_prime(p):
        raise StepError(f"p={p} is not prime")
    division = script.get("division", "integral")
    if division not in ("integral", "rational"):
        raise StepError(f"division must be 'integral' or 'rational', got {division!r}")
    integral = division == "integral"
    try:
        state = base_from_script(p, script.get("base", {}))
    except ValueError as exc:
        if isinstance(exc, StepError):
            raise
        raise StepError(str(exc)) from exc
    states = [state]
    for i, st in enumerate(script.get("steps", [])):
        try:
            kind = st.get("kind") if isinstance(st, dict) else None
            if kind == "I":
                _reject_unknown(st, {"kind", "k"}, "step")
                k = _int_field(st, "k")
                if i == 0 and state.k1 is not None and k != state.k1:
                    raise StepError(f"first step k={k} differs from the base's k1={state.k1}")
                state = step_I(state, k, integral)
            elif kind == "II":
                _reject_unknown(st, {"kind", "l", "r"}, "step")
                state = step_II(state, _int_field(st, "l"), _int_field(st, "r", 1), integral)
            else:
                raise StepError(f"unknown step kind {kind!r}")
        except StepError as exc:
            raise StepError(exc.reason, i) from exc
        except ValueError as exc:
            raise StepError(str(exc), i) from exc
        states.append(state)
    return states
