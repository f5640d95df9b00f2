"""Universal enveloping ring of a differential algebra.

Elements are finite sums sum_t r_t * t with coefficients r_t on the left of
derivative operators t.  Multiplication rewrites every derivation past a
coefficient with the commutation rule

    d_k * r  =  r * d_k + d_k(r)

until each coefficient stands left of its operator again (normal form).
Coefficients are full differential polynomials so the same engine covers
both the plain coefficient ring and the mixed algebra with indeterminates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping

from .diffpoly import DerivOp, DiffPoly
from .exactpoly import Poly


class EnvElement:
    """Normal-ordered element of the enveloping ring."""

    __slots__ = ("m", "terms", "_hash")

    def __init__(self, m: int, terms: Mapping[DerivOp, DiffPoly] | None = None):
        clean: dict[DerivOp, DiffPoly] = {}
        if terms:
            for op, coeff in terms.items():
                op = DerivOp(op)
                if len(op) != m:
                    raise ValueError(
                        f"operator {op} has length {len(op)}, expected {m}"
                    )
                if isinstance(coeff, Poly):
                    coeff = DiffPoly.from_poly(coeff)
                if coeff.m != m:
                    raise ValueError(f"coefficient has m={coeff.m}, expected {m}")
                if not coeff.is_zero:
                    clean[op] = coeff
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("EnvElement is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, m: int) -> "EnvElement":
        return cls(m)

    @classmethod
    def one(cls, m: int) -> "EnvElement":
        return cls(m, {DerivOp.zero(m): DiffPoly.one(m)})

    @classmethod
    def derivation(cls, m: int, k: int) -> "EnvElement":
        """The bare k-th derivation as a ring element."""
        return cls(m, {DerivOp.unit(m, k): DiffPoly.one(m)})

    @classmethod
    def operator(cls, theta: DerivOp) -> "EnvElement":
        theta = DerivOp(theta)
        return cls(len(theta), {theta: DiffPoly.one(len(theta))})

    @classmethod
    def coefficient(cls, r: DiffPoly | Poly) -> "EnvElement":
        if isinstance(r, Poly):
            r = DiffPoly.from_poly(r)
        return cls(r.m, {DerivOp.zero(r.m): r})

    # -- ring operations --------------------------------------------------

    def _check_m(self, other: "EnvElement") -> None:
        if self.m != other.m:
            raise ValueError(f"derivation count mismatch: {self.m} vs {other.m}")

    def __add__(self, other) -> "EnvElement":
        if not isinstance(other, EnvElement):
            return NotImplemented
        self._check_m(other)
        out = dict(self.terms)
        for op, coeff in other.terms.items():
            new = out.get(op)
            new = coeff if new is None else new + coeff
            if new.is_zero:
                out.pop(op, None)
            else:
                out[op] = new
        return EnvElement(self.m, out)

    def __sub__(self, other) -> "EnvElement":
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "EnvElement":
        return EnvElement(self.m, {op: -c for op, c in self.terms.items()})

    def __mul__(self, other) -> "EnvElement":
        if isinstance(other, (int, Fraction)):
            return EnvElement(self.m, {op: c * other for op, c in self.terms.items()})
        if not isinstance(other, EnvElement):
            return NotImplemented
        self._check_m(other)
        out: dict[DerivOp, DiffPoly] = {}

        def put(op: DerivOp, coeff: DiffPoly) -> None:
            new = out.get(op)
            new = coeff if new is None else new + coeff
            if new.is_zero:
                out.pop(op, None)
            else:
                out[op] = new

        for theta, r in self.terms.items():
            for phi, s in other.terms.items():
                # normal-order theta * s, then attach phi on the right
                for chi, moved in _shift_past(theta, s).items():
                    put(chi.compose(phi), r * moved)
        return EnvElement(self.m, out)

    def __rmul__(self, other) -> "EnvElement":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def apply(self, f: DiffPoly) -> DiffPoly:
        """Module action on the differential algebra: sum_t r_t * t(f)."""
        if f.m != self.m:
            raise ValueError(f"operand has m={f.m}, expected {self.m}")
        ngens = max([f.ngens] + [c.ngens for c in self.terms.values()])
        result = DiffPoly.zero(self.m, ngens)
        for op, coeff in self.terms.items():
            result = result + coeff * op(f)
        return result

    __call__ = apply

    def max_order(self) -> int:
        return max((op.order for op in self.terms), default=0)

    # -- equality / text ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EnvElement)
            and self.m == other.m
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.m, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def sorted_terms(self) -> Iterator[tuple[DerivOp, DiffPoly]]:
        for op in sorted(self.terms, key=lambda t: (t.order, t), reverse=True):
            yield op, self.terms[op]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for op, coeff in self.sorted_terms():
            dbody = "*".join(
                f"D{k + 1}" + (f"^{e}" if e > 1 else "")
                for k, e in enumerate(op)
                if e
            )
            if not dbody:
                text = str(coeff)
            elif coeff == DiffPoly.one(self.m, coeff.ngens):
                text = dbody
            else:
                text = f"({coeff})*{dbody}"
            parts.append(text)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"EnvElement({str(self)})"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "terms": [
                {"t": list(op), "c": coeff.to_json()}
                for op, coeff in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "EnvElement":
        terms = {
            DerivOp(entry["t"]): DiffPoly.from_json(entry["c"])
            for entry in data["terms"]
        }
        return cls(data["m"], terms)


def _shift_past(theta: DerivOp, s: DiffPoly) -> dict[DerivOp, DiffPoly]:
    """Normal form of theta * s as a map operator -> left coefficient.

    One derivation at a time:  d_k * (c * chi)  =  c * (d_k chi) + d_k(c) * chi.
    Operator order strictly drops in the second summand, so this terminates
    with every coefficient on the left.
    """
    terms: dict[DerivOp, DiffPoly] = {DerivOp.zero(len(theta)): s}
    for k, count in enumerate(theta, start=1):
        for _ in range(count):
            new: dict[DerivOp, DiffPoly] = {}

            def put(op: DerivOp, coeff: DiffPoly) -> None:
                prev = new.get(op)
                prev = coeff if prev is None else prev + coeff
                if prev.is_zero:
                    new.pop(op, None)
                else:
                    new[op] = prev

            for chi, c in terms.items():
                put(chi.bump(k), c)
                dc = c.derive(k)
                if not dc.is_zero:
                    put(chi, dc)
            terms = new
    return terms
