"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial in m commuting variables x1..xm is stored as a dictionary
mapping exponent tuples (one non-negative int per variable) to nonzero
``Fraction`` coefficients.  All arithmetic is exact; there is no floating
point anywhere in this package.

  Poly(2, {(1, 0): Fraction(3, 2)})   ->   3/2*x1

The zero polynomial is the empty term map (the variable count is kept).
Canonical ordering of terms is degree-lexicographic, via ``deglex_key``;
plain tuple comparison of exponent vectors gives the pure lexicographic
order where that is needed instead.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping

# The base field: arbitrary-precision rationals in lowest terms with a
# positive denominator, exactly as fractions.Fraction guarantees.
Rational = Fraction

Exponent = tuple  # tuple[int, ...], one entry per variable


def deglex_key(exponent: Exponent) -> tuple:
    """Sort key for degree-lexicographic monomial order."""
    return (sum(exponent), exponent)


def _as_coeff(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"not a rational coefficient: {value!r}")


class Poly:
    """Sparse multivariate polynomial over the rationals.

    Immutable by convention: no method mutates ``terms`` after
    construction, so values are safe to share, hash, and send between
    threads.
    """

    __slots__ = ("m", "terms", "_hash")

    def __init__(self, m: int, terms: Mapping[Exponent, Fraction] | None = None):
        if m < 0:
            raise ValueError(f"variable count must be non-negative, got {m}")
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(exp)
                if len(exp) != m:
                    raise ValueError(
                        f"exponent length {len(exp)} does not match variable count {m}"
                    )
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                coeff = _as_coeff(coeff)
                if coeff:
                    clean[exp] = coeff
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, m: int) -> "Poly":
        return cls(m)

    @classmethod
    def const(cls, m: int, value) -> "Poly":
        c = _as_coeff(value)
        return cls(m, {(0,) * m: c} if c else {})

    @classmethod
    def one(cls, m: int) -> "Poly":
        return cls.const(m, 1)

    @classmethod
    def variable(cls, m: int, i: int) -> "Poly":
        """The polynomial x_i (1-based index)."""
        if not 1 <= i <= m:
            raise ValueError(f"variable index {i} out of range 1..{m}")
        exp = [0] * m
        exp[i - 1] = 1
        return cls(m, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, m: int, exponent: Iterable[int], coeff=1) -> "Poly":
        return cls(m, {tuple(exponent): _as_coeff(coeff)})

    # -- predicates / views -------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        """The rational value of a constant polynomial."""
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(exp) for exp in self.terms), default=0)

    def sorted_terms(self) -> Iterator[tuple[Exponent, Fraction]]:
        """Terms in canonical (degree-lex descending) order."""
        for exp in sorted(self.terms, key=deglex_key, reverse=True):
            yield exp, self.terms[exp]

    # -- ring operations ----------------------------------------------

    def _check_m(self, other: "Poly") -> None:
        if self.m != other.m:
            raise ValueError(f"variable count mismatch: {self.m} vs {other.m}")

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_m(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            new = out.get(exp, Fraction(0)) + coeff
            if new:
                out[exp] = new
            else:
                out.pop(exp, None)
        return Poly(self.m, out)

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.m, {exp: -c for exp, c in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = _as_coeff(other)
            if not c:
                return Poly(self.m)
            return Poly(self.m, {exp: c * v for exp, v in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_m(other)
        out: dict[Exponent, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exp = tuple(a + b for a, b in zip(ea, eb))
                new = out.get(exp, Fraction(0)) + ca * cb
                if new:
                    out[exp] = new
                else:
                    del out[exp]
        return Poly(self.m, out)

    def __rmul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = Poly.one(self.m)
        for _ in range(n):
            out = out * self
        return out

    def partial(self, i: int) -> "Poly":
        """Formal partial derivative with respect to x_i (1-based)."""
        if not 1 <= i <= self.m:
            raise ValueError(f"derivation index {i} out of range 1..{self.m}")
        out: dict[Exponent, Fraction] = {}
        k = i - 1
        for exp, coeff in self.terms.items():
            e = exp[k]
            if e == 0:
                continue
            lowered = exp[:k] + (e - 1,) + exp[k + 1:]
            new = out.get(lowered, Fraction(0)) + coeff * e
            if new:
                out[lowered] = new
            else:
                del out[lowered]
        return Poly(self.m, out)

    def evaluate(self, values: Iterable) -> Fraction:
        """Exact value at a rational point (one value per variable)."""
        vals = [_as_coeff(v) for v in values]
        if len(vals) != self.m:
            raise ValueError(f"expected {self.m} values, got {len(vals)}")
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            term = coeff
            for e, v in zip(exp, vals):
                if e:
                    term *= v ** e
            total += term
        return total

    def extend(self, m: int) -> "Poly":
        """Reinterpret in a larger variable ring (pads exponents with zeros)."""
        if m < self.m:
            raise ValueError(f"cannot shrink variable count {self.m} -> {m}")
        if m == self.m:
            return self
        pad = (0,) * (m - self.m)
        return Poly(m, {exp + pad: c for exp, c in self.terms.items()})

    # -- equality / hashing / text ------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.m == other.m
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.m, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for exp, coeff in self.sorted_terms():
            body = "*".join(
                f"x{i + 1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exp)
                if e
            )
            mag = abs(coeff)
            if body:
                text = body if mag == 1 else f"{mag}*{body}"
            else:
                text = str(mag)
            if not parts:
                parts.append(text if coeff > 0 else "-" + text)
            else:
                parts.append((" + " if coeff > 0 else " - ") + text)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"

    # -- JSON form -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "terms": [
                {"c": str(c), "e": list(exp)} for exp, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Poly":
        terms: dict[Exponent, Fraction] = {}
        for entry in data["terms"]:
            exp = tuple(entry["e"])
            terms[exp] = terms.get(exp, Fraction(0)) + Fraction(entry["c"])
        return cls(data["m"], terms)
