"""
Exact coefficient rings and lower-triangular matrix algebra.

• Ring elements are plain payloads: int (INT), fractions.Fraction (RAT),
  PolyD (POLY_D, a sympy ZZ[d] element) and LogLin (LOGLIN, a sympy sum
  of rational multiples of log p).
• INT embeds into every other ring; any other mix is a RingError.
• TriMatrix stores only the lower triangle; tri_invert works by forward
  substitution and reports the first non-invertible diagonal entry.
"""

from __future__ import annotations

import enum
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from tokenize import TokenError
from typing import Callable, Iterable, Mapping, Sequence, Union

import sympy
from sympy import Add, Integer, Rational, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.domains import ZZ
from sympy.polys.polyerrors import CoercionFailed, ExactQuotientFailed
from sympy.polys.rings import ring

logger = logging.getLogger(__name__)


class RingError(ValueError):
    """Arithmetic across incompatible rings, or an inexact/non-unit division."""


class Ring(str, enum.Enum):
    INT = "INT"
    RAT = "RAT"
    POLY_D = "POLY_D"
    LOGLIN = "LOGLIN"


# ───────────────────────────────────────── ℤ[d] ──
ZZ_d, _d = ring("d", ZZ)
_D_SYMBOL = Symbol("d")
_PARSE = standard_transformations + (convert_xor,)
_COEFF_D = re.compile(r"(\d)\s*d")


class PolyD:
    """Polynomial in d over the integers, backed by a sympy ZZ[d] element."""

    __slots__ = ("_p",)

    def __init__(self, coeffs: Iterable[int] = ()):
        p = ZZ_d.zero
        for i, c in enumerate(coeffs):
            if isinstance(c, bool) or not isinstance(c, int):
                raise RingError(f"POLY_D coefficients must be integers, got {c!r}")
            if c:
                p = p + c * _d**i
        self._p = p

    @classmethod
    def _wrap(cls, p) -> "PolyD":
        out = cls.__new__(cls)
        out._p = p
        return out

    @classmethod
    def d(cls) -> "PolyD":
        return cls._wrap(_d)

    @classmethod
    def const(cls, c: int) -> "PolyD":
        return cls._wrap(ZZ_d(c))

    @classmethod
    def monomial(cls, coeff: int, degree: int) -> "PolyD":
        return cls._wrap(coeff * _d**degree)

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Lowest degree first, no trailing zeros."""
        if not self._p:
            return ()
        terms = {i: int(c) for (i,), c in self._p.terms()}
        return tuple(terms.get(i, 0) for i in range(self._p.degree() + 1))

    @property
    def degree(self) -> int:
        return self._p.degree() if self._p else -1

    def is_constant(self) -> bool:
        return self._p.is_ground

    def constant(self) -> int:
        return int(self._p.coeff(1))

    def evaluate(self, x: int) -> int:
        return int(self._p(x))

    # arithmetic
    @staticmethod
    def _lift(other):
        if isinstance(other, PolyD):
            return other._p
        if isinstance(other, int) and not isinstance(other, bool):
            return ZZ_d(other)
        raise RingError(f"cannot combine POLY_D with {type(other).__name__}")

    def __add__(self, other) -> "PolyD":
        return PolyD._wrap(self._p + self._lift(other))

    __radd__ = __add__

    def __neg__(self) -> "PolyD":
        return PolyD._wrap(-self._p)

    def __sub__(self, other) -> "PolyD":
        return PolyD._wrap(self._p - self._lift(other))

    def __rsub__(self, other) -> "PolyD":
        return PolyD._wrap(self._lift(other) - self._p)

    def __mul__(self, other) -> "PolyD":
        return PolyD._wrap(self._p * self._lift(other))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "PolyD":
        return PolyD._wrap(self._p**e)

    def exact_div(self, other) -> "PolyD":
        """Quotient in ZZ[d]; a remainder or a non-integral quotient is a RingError."""
        divisor = self._lift(other)
        if not divisor:
            raise RingError("division by the zero polynomial")
        try:
            return PolyD._wrap(self._p.exquo(divisor))
        except ExactQuotientFailed:
            raise RingError(f"{self} is not divisible by {PolyD._wrap(divisor)}") from None

    def __eq__(self, other) -> bool:
        if isinstance(other, PolyD):
            return self._p == other._p
        if isinstance(other, int) and not isinstance(other, bool):
            return self._p == ZZ_d(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._p.is_ground:
            return hash(self.constant())
        return hash(("PolyD", self.coeffs))

    def __bool__(self) -> bool:
        return bool(self._p)

    def __repr__(self) -> str:
        return f"PolyD({list(self.coeffs)})"

    def __str__(self) -> str:
        # sympy prints "-d**3 - 2*d + 30"; cells use "-d^3-2d+30"
        return str(self._p).replace("**", "^").replace("*", "").replace(" ", "")

    @classmethod
    def parse(cls, text: str) -> "PolyD":
        """Parse '−d^3−2d+30', '1-d^2', '7', '2*d'."""
        s = _COEFF_D.sub(r"\1*d", text.replace("−", "-").strip())
        if not s:
            raise ValueError("empty polynomial")
        try:
            expr = parse_expr(s, local_dict={"d": _D_SYMBOL}, transformations=_PARSE)
            return cls._wrap(ZZ_d.from_expr(expr))
        except (SyntaxError, TokenError, TypeError, ValueError, CoercionFailed):
            raise ValueError(f"cannot parse polynomial {text!r}") from None


# ───────────────────────────────────────── log-linear ──
class LogLin:
    """Formal ℚ-combination Σ c_p·log p over primes p, held as a sympy sum of logs."""

    __slots__ = ("_e",)

    def __init__(self, terms: Mapping[int, int | Fraction] | None = None):
        parts = []
        for p, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                parts.append(Rational(c.numerator, c.denominator) * sympy.log(Integer(p)))
        self._e = Add(*parts)

    @classmethod
    def _wrap(cls, expr) -> "LogLin":
        out = cls.__new__(cls)
        out._e = expr
        return out

    @classmethod
    def of_prime(cls, p: int, coeff: int | Fraction = 1) -> "LogLin":
        return cls({p: coeff})

    @property
    def terms(self) -> dict[int, Fraction]:
        out = {}
        for term, c in self._e.as_coefficients_dict().items():
            if c:
                out[int(term.args[0])] = Fraction(int(c.p), int(c.q))
        return dict(sorted(out.items()))

    def _combine(self, other, sign: int) -> "LogLin":
        if isinstance(other, LogLin):
            return LogLin._wrap(self._e + sign * other._e)
        if isinstance(other, int) and not isinstance(other, bool) and other == 0:
            return self
        raise RingError(f"cannot add LOGLIN and {other!r}")

    def __add__(self, other) -> "LogLin":
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> "LogLin":
        return self._combine(other, -1)

    def __rsub__(self, other) -> "LogLin":
        return (-self)._combine(other, 1)

    def __neg__(self) -> "LogLin":
        return LogLin._wrap(-self._e)

    def __mul__(self, other) -> "LogLin":
        if isinstance(other, int) and not isinstance(other, bool):
            return LogLin._wrap(other * self._e)
        raise RingError(f"LOGLIN can only be scaled by integers, got {other!r}")

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, LogLin):
            return self.terms == other.terms
        if isinstance(other, int) and not isinstance(other, bool):
            return other == 0 and not self
        return NotImplemented

    def __hash__(self) -> int:
        return hash(0) if not self else hash(("LogLin", tuple(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"LogLin({self.terms})"

    def __str__(self) -> str:
        terms = self.terms
        if not terms:
            return "0"
        parts = []
        for p, c in terms.items():
            mag = abs(c)
            body = f"log({p})" if mag == 1 else f"{mag}*log({p})"
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return text + "".join(s + b for s, b in parts[1:])


RingElement = Union[int, Fraction, PolyD, LogLin]


# ───────────────────────────────────────── ring helpers ──
def ring_of(x: RingElement) -> Ring:
    if isinstance(x, bool):
        raise RingError("booleans are not ring elements")
    if isinstance(x, int):
        return Ring.INT
    if isinstance(x, Fraction):
        return Ring.RAT
    if isinstance(x, PolyD):
        return Ring.POLY_D
    if isinstance(x, LogLin):
        return Ring.LOGLIN
    raise RingError(f"not a ring element: {x!r}")


def join(a: Ring, b: Ring) -> Ring:
    """The ring both operands live in; INT embeds into everything."""
    if a == b:
        return a
    if a is Ring.INT:
        return b
    if b is Ring.INT:
        return a
    raise RingError(f"ring mismatch: {a.value} vs {b.value}")


def zero(ring: Ring) -> RingElement:
    return {Ring.INT: 0, Ring.RAT: Fraction(0), Ring.POLY_D: PolyD(), Ring.LOGLIN: LogLin()}[ring]


def one(ring: Ring) -> RingElement:
    if ring is Ring.LOGLIN:
        raise RingError("LOGLIN has no multiplicative identity")
    return {Ring.INT: 1, Ring.RAT: Fraction(1), Ring.POLY_D: PolyD((1,))}[ring]


def coerce(x: RingElement, ring: Ring) -> RingElement:
    src = ring_of(x)
    if src == ring:
        return x
    if src is not Ring.INT:
        raise RingError(f"cannot coerce {src.value} to {ring.value}")
    if ring is Ring.RAT:
        return Fraction(x)
    if ring is Ring.POLY_D:
        return PolyD((x,))
    if x == 0:
        return LogLin()
    raise RingError(f"nonzero integer {x} has no LOGLIN embedding")


def is_unit(x: RingElement) -> bool:
    if isinstance(x, bool):
        return False
    if isinstance(x, int):
        return x in (1, -1)
    if isinstance(x, Fraction):
        return x != 0
    if isinstance(x, PolyD):
        return x.is_constant() and x.constant() in (1, -1)
    return False


def unit_inverse(x: RingElement) -> RingElement:
    if not is_unit(x):
        raise RingError(f"{x} is not a unit in {ring_of(x).value}")
    if isinstance(x, Fraction):
        return 1 / x
    return x  # ±1 is its own inverse


def exact_div(x: RingElement, y: RingElement) -> RingElement:
    ring = join(ring_of(x), ring_of(y))
    if ring is Ring.INT:
        if y == 0 or x % y:
            raise RingError(f"{x} is not divisible by {y}")
        return x // y
    if ring is Ring.RAT:
        if y == 0:
            raise RingError("division by zero")
        return Fraction(x) / Fraction(y)
    if ring is Ring.POLY_D:
        return coerce(x, ring).exact_div(y)
    raise RingError("division is not defined on LOGLIN")


def encode(x: RingElement):
    """JSON payload of a single element."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, PolyD):
        return list(x.coeffs)
    if isinstance(x, LogLin):
        return [[p, c.numerator, c.denominator] for p, c in sorted(x.terms.items())]
    return x


def decode(payload, ring: Ring) -> RingElement:
    if ring is Ring.INT:
        return int(payload)
    if ring is Ring.RAT:
        return Fraction(payload)
    if ring is Ring.POLY_D:
        return PolyD(payload)
    return LogLin({p: Fraction(num, den) for p, num, den in payload})


def format_cell(x: RingElement) -> str:
    return str(x)


def parse_cell(text: str, ring: Ring) -> RingElement:
    text = text.strip()
    if ring is Ring.INT:
        return int(text)
    if ring is Ring.RAT:
        return Fraction(text)
    if ring is Ring.POLY_D:
        return PolyD.parse(text)
    raise RingError("LOGLIN cells are not read from CSV")


# ───────────────────────────────────────── matrices ──
@dataclass(frozen=True)
class TriMatrix:
    """Lower-triangular N×N matrix; rows[n-1] holds the n entries (n,1)..(n,n)."""

    size: int
    ring: Ring
    rows: tuple[tuple[RingElement, ...], ...]

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"matrix size must be >= 0, got {self.size}")
        if len(self.rows) != self.size:
            raise ValueError(f"expected {self.size} rows, got {len(self.rows)}")
        fixed = []
        for n, row in enumerate(self.rows, start=1):
            if len(row) != n:
                raise ValueError(f"row {n} must have {n} entries, got {len(row)}")
            fixed.append(tuple(coerce(x, self.ring) for x in row))
        object.__setattr__(self, "rows", tuple(fixed))

    # constructors
    @classmethod
    def from_function(
        cls, size: int, fn: Callable[[int, int], RingElement], ring: Ring = Ring.INT
    ) -> "TriMatrix":
        return cls(size, ring, tuple(tuple(fn(n, k) for k in range(1, n + 1)) for n in range(1, size + 1)))

    @classmethod
    def identity(cls, size: int, ring: Ring = Ring.INT) -> "TriMatrix":
        return cls.from_function(size, lambda n, k: 1 if n == k else 0, ring)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RingElement]], ring: Ring | None = None) -> "TriMatrix":
        """Accept square rows (upper part must be zero) or already triangular rows."""
        size = len(rows)
        tri = []
        for n, row in enumerate(rows, start=1):
            if len(row) == size and size != n:
                if any(x != 0 for x in row[n:]):
                    raise ValueError(f"row {n} has nonzero entries above the diagonal")
            elif len(row) != n:
                raise ValueError(f"row {n} has {len(row)} entries")
            tri.append(tuple(row[:n]))
        if ring is None:
            ring = Ring.INT
            for row in tri:
                for x in row:
                    ring = join(ring, ring_of(x))
        return cls(size, ring, tuple(tri))

    # access
    def __getitem__(self, pos: tuple[int, int]) -> RingElement:
        n, k = pos
        if not (1 <= n <= self.size and 1 <= k <= self.size):
            raise IndexError(f"({n},{k}) outside a {self.size}×{self.size} matrix")
        return self.rows[n - 1][k - 1] if k <= n else zero(self.ring)

    def get(self, n: int, k: int) -> RingElement:
        """Entry (n, k), zero outside the stored triangle or the matrix."""
        if 1 <= k <= n <= self.size:
            return self.rows[n - 1][k - 1]
        return zero(self.ring)

    def row(self, n: int) -> tuple[RingElement, ...]:
        return self.rows[n - 1]

    def column(self, k: int) -> list[RingElement]:
        return [self.rows[n - 1][k - 1] for n in range(k, self.size + 1)]

    def truncate(self, size: int) -> "TriMatrix":
        return TriMatrix(size, self.ring, self.rows[:size])

    def map(self, fn: Callable[[RingElement], RingElement], ring: Ring | None = None) -> "TriMatrix":
        return TriMatrix(self.size, ring or self.ring, tuple(tuple(fn(x) for x in row) for row in self.rows))

    def evaluate_d(self, value: int) -> "TriMatrix":
        if self.ring is not Ring.POLY_D:
            raise RingError("evaluate_d needs a POLY_D matrix")
        return self.map(lambda x: x.evaluate(value), Ring.INT)

    def is_identity(self) -> bool:
        return all(x == (1 if k == n else 0) for n, row in enumerate(self.rows, 1) for k, x in enumerate(row, 1))

    def __matmul__(self, other: "TriMatrix") -> "TriMatrix":
        if self.size != other.size:
            raise ValueError(f"size mismatch: {self.size} vs {other.size}")
        ring = join(self.ring, other.ring)
        z = zero(ring)
        out = []
        for n in range(1, self.size + 1):
            a = self.rows[n - 1]
            row = []
            for k in range(1, n + 1):
                acc = z
                for m in range(k, n + 1):
                    x = a[m - 1]
                    if x:
                        y = other.rows[m - 1][k - 1]
                        if y:
                            acc = acc + x * y
                row.append(acc)
            out.append(tuple(row))
        return TriMatrix(self.size, ring, tuple(out))

    # encodings
    def to_json(self) -> dict:
        return {
            "size": self.size,
            "ring": self.ring.value,
            "rows": [[encode(x) for x in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "TriMatrix":
        ring = Ring(payload["ring"])
        rows = tuple(tuple(decode(x, ring) for x in row) for row in payload["rows"])
        return cls(int(payload["size"]), ring, rows)

    def to_csv_rows(self) -> list[list[str]]:
        """Square layout, zeros above the diagonal."""
        return [
            [format_cell(self.get(n, k)) for k in range(1, self.size + 1)]
            for n in range(1, self.size + 1)
        ]


@dataclass(frozen=True)
class SingularReport:
    """First row whose diagonal entry is not invertible, with the inverse of the block above it."""

    row: int
    reason: str
    partial: TriMatrix | None = None

    def to_json(self) -> dict:
        return {
            "singular": True,
            "row": self.row,
            "reason": self.reason,
            "partial": self.partial.to_json() if self.partial is not None else None,
        }


def tri_invert(m: TriMatrix) -> TriMatrix | SingularReport:
    """Invert a lower-triangular matrix by forward substitution."""
    if m.ring is Ring.LOGLIN:
        raise RingError("tri_invert needs an INT, RAT or POLY_D matrix")
    z = zero(m.ring)
    inv: list[tuple[RingElement, ...]] = []
    for n in range(1, m.size + 1):
        diag = m.rows[n - 1][n - 1]
        if not is_unit(diag):
            reason = "zero diagonal entry" if not diag else f"diagonal entry {diag} is not a unit"
            logger.warning("matrix singular at row %d: %s", n, reason)
            partial = TriMatrix(n - 1, m.ring, tuple(inv)) if n > 1 else None
            return SingularReport(row=n, reason=reason, partial=partial)
        dinv = unit_inverse(diag)
        a = m.rows[n - 1]
        row = [z] * n
        row[n - 1] = dinv
        for j in range(1, n):
            acc = z
            for k in range(j, n):
                x = a[k - 1]
                if x:
                    y = inv[k - 1][j - 1]
                    if y:
                        acc = acc + x * y
            row[j - 1] = -(dinv * acc)
        inv.append(tuple(row))
    return TriMatrix(m.size, m.ring, tuple(inv))


def recurrence_check(s: TriMatrix, sinv: TriMatrix) -> bool:
    """Both determinant-style recurrences linking s and its inverse, entry by entry.

    With unit diagonals these read
        s⁻¹[n][j] = δ_{n,j} − Σ_{k=1}^{n−j} s⁻¹[n][n+1−k]·s[n+1−k][j]
        s⁻¹[n][j] = δ_{n,j} − Σ_{k=1}^{n−j} s[n][n−k]·s⁻¹[n−k][j]
    and in general the left side carries the diagonal factor s[j][j] (resp. s[n][n]).
    """
    if s.size != sinv.size:
        raise ValueError(f"size mismatch: {s.size} vs {sinv.size}")
    if s.ring != sinv.ring:
        raise RingError(f"ring mismatch: {s.ring.value} vs {sinv.ring.value}")
    z = zero(s.ring)
    for n in range(1, s.size + 1):
        for j in range(1, n + 1):
            delta = 1 if n == j else 0
            left = z
            right = z
            for k in range(1, n - j + 1):
                left = left + sinv.rows[n - 1][n - k] * s.rows[n - k][j - 1]
                right = right + s.rows[n - 1][n - k - 1] * sinv.rows[n - k - 1][j - 1]
            if sinv.rows[n - 1][j - 1] * s.rows[j - 1][j - 1] != delta - left:
                logger.warning("left recurrence fails at (%d,%d)", n, j)
                return False
            if s.rows[n - 1][n - 1] * sinv.rows[n - 1][j - 1] != delta - right:
                logger.warning("right recurrence fails at (%d,%d)", n, j)
                return False
    return True
