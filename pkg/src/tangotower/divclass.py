"""Divisor classes in the tower lattice.

A class on the variety obtained after ``level`` cyclic-cover steps over a
curve is written

    e*E + d*D'_1 + f_1*F~_1 + ... + f_level*F~_level

where ``E`` is the formal effective slack of a pre-Tango inequality,
``D'_1`` is the degree-one generator on the base curve and ``F~_i`` is the
reduced preimage of the canonical section introduced at step ``i``.  Since
``Pic`` of a cover splits as ``Z*F~ + f^*Pic``, a class is just this
coordinate vector; pulling back along one more step appends a zero.

All coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable


class LevelMismatch(ValueError):
    def __init__(self, left: int, right: int):
        super().__init__(f"cannot combine classes at levels {left} and {right}")
        self.left = left
        self.right = right


class DivisionFailure(ArithmeticError):
    """Raised by :func:`divide_exact` in integral mode.

    ``coordinate`` names the first offending coefficient (``"e"``, ``"d"`` or
    ``"f1"``, ``"f2"``, ...), ``value`` is that coefficient.
    """

    def __init__(self, coordinate: str, value: Fraction, k: int):
        super().__init__(f"{coordinate}-coefficient {value} is not divisible by {k}")
        self.coordinate = coordinate
        self.value = value
        self.k = k


def _q(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, Rational, str)):
        raise TypeError(f"exact rational expected, got {type(x).__name__}")
    return Fraction(x)


@dataclass(frozen=True)
class TowerClass:
    level: int
    e: Fraction = Fraction(0)
    d: Fraction = Fraction(0)
    f: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be non-negative")
        object.__setattr__(self, "e", _q(self.e))
        object.__setattr__(self, "d", _q(self.d))
        fs = tuple(_q(c) for c in self.f)
        if len(fs) != self.level:
            raise ValueError(f"expected {self.level} F~ coefficients, got {len(fs)}")
        object.__setattr__(self, "f", fs)

    @classmethod
    def zero(cls, level: int) -> "TowerClass":
        return cls(level, f=(0,) * level)

    @classmethod
    def base(cls, d, e=0) -> "TowerClass":
        """Level-0 class ``d*D'_1 + e*E``."""
        return cls(0, e=e, d=d)

    @classmethod
    def canonical_section(cls, level: int, index: int | None = None) -> "TowerClass":
        """The class ``F~_index`` (default: the newest one) at ``level``."""
        if level < 1:
            raise ValueError("no F~ generator at level 0")
        index = level if index is None else index
        if not 1 <= index <= level:
            raise ValueError(f"F~_{index} does not exist at level {level}")
        fs = [0] * level
        fs[index - 1] = 1
        return cls(level, f=fs)

    def coordinates(self) -> tuple[Fraction, ...]:
        return (self.e, self.d) + self.f

    def coordinate_names(self) -> tuple[str, ...]:
        return ("e", "d") + tuple(f"f{i}" for i in range(1, self.level + 1))

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates())

    def __add__(self, other: "TowerClass") -> "TowerClass":
        return add(self, other)

    def __sub__(self, other: "TowerClass") -> "TowerClass":
        return add(self, negate(other))

    def __neg__(self) -> "TowerClass":
        return negate(self)

    def __rmul__(self, q) -> "TowerClass":
        return scale(q, self)

    def __str__(self) -> str:
        return format_class(self)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "e": _qstr(self.e),
            "d": _qstr(self.d),
            "f": [_qstr(c) for c in self.f],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TowerClass":
        extra = set(obj) - {"level", "e", "d", "f"}
        if extra:
            raise ValueError(f"unknown TowerClass fields: {sorted(extra)}")
        level = obj["level"]
        if not isinstance(level, int) or isinstance(level, bool):
            raise ValueError("level must be an integer")
        return cls(level, e=_parse_q(obj.get("e", "0")), d=_parse_q(obj.get("d", "0")),
                   f=[_parse_q(c) for c in obj.get("f", [])])


def _qstr(q: Fraction) -> str:
    return str(q)


def _parse_q(s) -> Fraction:
    if isinstance(s, float):
        raise ValueError(f"floating-point coefficient {s!r} rejected; use 'p/q'")
    return _q(s)


def add(a: TowerClass, b: TowerClass) -> TowerClass:
    if a.level != b.level:
        raise LevelMismatch(a.level, b.level)
    return TowerClass(a.level, a.e + b.e, a.d + b.d, tuple(x + y for x, y in zip(a.f, b.f)))


def negate(c: TowerClass) -> TowerClass:
    return scale(-1, c)


def scale(q, c: TowerClass) -> TowerClass:
    q = _q(q)
    return TowerClass(c.level, q * c.e, q * c.d, tuple(q * x for x in c.f))


def pullback(c: TowerClass) -> TowerClass:
    """``f^*`` along one more cover step: the new F~ coefficient is zero."""
    return TowerClass(c.level + 1, c.e, c.d, c.f + (Fraction(0),))


def pullback_to(c: TowerClass, level: int) -> TowerClass:
    if level < c.level:
        raise ValueError(f"cannot pull a level-{c.level} class back to level {level}")
    while c.level < level:
        c = pullback(c)
    return c


def divide_exact(c: TowerClass, k: int, integral: bool = True) -> TowerClass:
    """Return ``c / k``.

    In integral mode every coefficient must be an integer divisible by
    ``k``; otherwise :class:`DivisionFailure` names the first bad one.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if integral:
        for name, v in zip(c.coordinate_names(), c.coordinates()):
            if v.denominator != 1 or v.numerator % k:
                raise DivisionFailure(name, v, k)
    return scale(Fraction(1, k), c)


def linear_combination(terms: Iterable[tuple[object, TowerClass]], level: int) -> TowerClass:
    total = TowerClass.zero(level)
    for q, c in terms:
        total = add(total, scale(q, c))
    return total


@dataclass(frozen=True)
class TrivialityReport:
    trivial: bool
    nonzero: tuple[tuple[str, Fraction], ...]
    slack_obstruction: bool

    def witnesses(self) -> list[str]:
        return [name for name, _ in self.nonzero]

    def to_json(self) -> dict:
        return {
            "trivial": self.trivial,
            "nonzero": {name: str(v) for name, v in self.nonzero},
            "slack_obstruction": self.slack_obstruction,
        }


def is_trivial(c: TowerClass) -> TrivialityReport:
    nonzero = tuple((n, v) for n, v in zip(c.coordinate_names(), c.coordinates()) if v)
    # e != 0 would need the effective slack E to be numerically trivial
    return TrivialityReport(not nonzero, nonzero, c.e != 0)


def format_class(c: TowerClass) -> str:
    parts = []
    for coeff, sym in [(c.e, "E"), (c.d, "D'1")] + [(x, f"F{i}") for i, x in enumerate(c.f, 1)]:
        if coeff:
            parts.append(f"{coeff}*{sym}")
    return " + ".join(parts) if parts else "0"
