"""Functions on a d-letter alphabet, encodings, and their oracle vectors."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import DECISION_TOL
from .errors import InadmissibleEncoding, ResourceCapError

#: Largest number of functions ``enumerate_functions`` will produce.
ENUMERATION_CAP = 10**6

TRIT_NAMES = ("-", "0", "+")


@dataclass(frozen=True)
class Alphabet:
    """The letters ``0..d-1``; for ``d == 3`` they display as ``-``, ``0``, ``+``."""

    d: int
    display_names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"alphabet size must be at least 2, got {self.d}")
        if self.display_names is None and self.d == 3:
            object.__setattr__(self, "display_names", TRIT_NAMES)
        if self.display_names is not None and len(self.display_names) != self.d:
            raise ValueError("need exactly one display name per letter")

    def name(self, x: int) -> str:
        return self.display_names[x] if self.display_names else str(x)


@dataclass(frozen=True)
class DitFunction:
    """A total function ``{0..d-1} -> {0..d-1}`` stored as its value table.

    ``id`` reads the table as base-``d`` digits, most significant first, so
    ``f(first letter)`` is the leading digit.
    """

    table: tuple[int, ...]

    def __post_init__(self):
        d = len(self.table)
        if d < 2:
            raise ValueError("a function table needs at least 2 entries")
        if any(not 0 <= y < d for y in self.table):
            raise ValueError(f"table {self.table} has values outside 0..{d - 1}")

    @property
    def d(self) -> int:
        return len(self.table)

    @cached_property
    def id(self) -> int:
        n = 0
        for y in self.table:
            n = n * self.d + y
        return n

    @classmethod
    def from_id(cls, fid: int, d: int) -> "DitFunction":
        if not 0 <= fid < d**d:
            raise ValueError(f"function id {fid} out of range for d={d}")
        digits = []
        for _ in range(d):
            fid, r = divmod(fid, d)
            digits.append(r)
        return cls(tuple(reversed(digits)))

    @classmethod
    def from_literal(cls, text: str, d: int = 3) -> "DitFunction":
        """Parse ``"--0"`` style literals (d=3) or ``"0,1"`` style (other d)."""
        text = text.strip()
        if d == 3 and "," not in text:
            try:
                table = tuple(TRIT_NAMES.index(ch) for ch in text)
            except ValueError:
                raise ValueError(f"bad trit literal {text!r}; use the characters - 0 +") from None
        else:
            try:
                table = tuple(int(tok) for tok in text.split(","))
            except ValueError:
                raise ValueError(f"bad function literal {text!r}") from None
        if len(table) != d:
            raise ValueError(f"function literal {text!r} has {len(table)} entries, expected {d}")
        return cls(table)

    def literal(self) -> str:
        if self.d == 3:
            return "".join(TRIT_NAMES[y] for y in self.table)
        return ",".join(str(y) for y in self.table)

    def __call__(self, x: int) -> int:
        return self.table[x]


def enumerate_functions(alphabet: Alphabet | int, cap: int = ENUMERATION_CAP) -> list[DitFunction]:
    """All ``d**d`` functions on the alphabet, ordered by id."""
    d = alphabet.d if isinstance(alphabet, Alphabet) else int(alphabet)
    if d < 2:
        raise ValueError(f"alphabet size must be at least 2, got {d}")
    if d**d > cap:
        raise ResourceCapError(f"d={d} gives {d**d} functions, above the enumeration cap {cap}")
    return [DitFunction.from_id(i, d) for i in range(d**d)]


def function_tables(d: int, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Value tables of all functions as an integer array of shape ``(d**d, d)``."""
    if d**d > cap:
        raise ResourceCapError(f"d={d} gives {d**d} functions, above the enumeration cap {cap}")
    ids = np.arange(d**d)
    powers = d ** np.arange(d - 1, -1, -1)
    return (ids[:, None] // powers[None, :]) % d


@dataclass(frozen=True)
class Encoding:
    """Amplitudes ``g[x]`` the oracle attaches to each output letter ``x``."""

    g: tuple[complex, ...]

    def __init__(self, g: Sequence[complex]):
        object.__setattr__(self, "g", tuple(complex(z) for z in g))
        if len(self.g) < 2:
            raise ValueError("an encoding needs at least 2 values")

    @property
    def d(self) -> int:
        return len(self.g)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.g, dtype=complex)

    def violations(self, tol: float = DECISION_TOL) -> list[str]:
        out = []
        g = self.array
        if np.any(np.abs(g) <= tol):
            out.append("values not all nonzero")
        diffs = np.abs(g[:, None] - g[None, :])
        if np.any(diffs[np.triu_indices(self.d, 1)] <= tol):
            out.append("values not pairwise distinct")
        return out

    def admissible(self, tol: float = DECISION_TOL) -> bool:
        return not self.violations(tol)

    def require_admissible(self, tol: float = DECISION_TOL) -> None:
        bad = self.violations(tol)
        if bad:
            raise InadmissibleEncoding(bad)

    def scaled(self, c: complex) -> "Encoding":
        return Encoding([c * z for z in self.g])


def roots_of_unity_encoding(alphabet: Alphabet | int) -> Encoding:
    """``g[k] = exp(2 pi i k / d)``; for d=3 shifted to ``(alphabar, 1, alpha)``.

    The d=3 shift mirrors labelling the letters -1, 0, +1. It multiplies every
    amplitude by the same phase, so no ray changes.
    """
    d = alphabet.d if isinstance(alphabet, Alphabet) else int(alphabet)
    shift = d // 2 if d == 3 else 0
    return Encoding([cmath.exp(2j * cmath.pi * (k - shift) / d) for k in range(d)])


@dataclass(frozen=True)
class OracleVector:
    v: tuple[complex, ...]
    source: int

    @property
    def array(self) -> np.ndarray:
        return np.array(self.v, dtype=complex)


def oracle_vector(f: DitFunction, enc: Encoding) -> OracleVector:
    """The vector with entries ``g[f(x)]``."""
    if f.d != enc.d:
        raise ValueError(f"function has d={f.d} but encoding has d={enc.d}")
    return OracleVector(v=tuple(enc.g[y] for y in f.table), source=f.id)
