"""Differential polynomial algebras with finitely many commuting derivations.

Elements live in the mixed algebra C_m{y_1,...,y_n}: polynomial coefficients
in x1..xm (``Poly``) times products of differential indeterminates y_i^t,
where t is a derivative operator -- a multi-index recording how often each
of the m derivations was applied.  The k-th derivation acts as d/dx_k on
coefficients and bumps the k-th entry of t on indeterminates; products obey
the Leibniz rule.  Setting every coefficient constant recovers the pure
differential polynomial ring over the rationals.

``m`` is simultaneously the number of derivations and the number of
coefficient variables; ``ngens`` is the number of available generators y_i
(context capacity; equality of values ignores it).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .exactpoly import Poly, Rational, deglex_key


class DerivOp(tuple):
    """A derivative operator: the multi-index of a product of derivations.

    Being a tuple, instances compare lexicographically, which is exactly
    the order used by the separating construction below.
    """

    def __new__(cls, entries: Iterable[int]):
        entries = tuple(entries)
        if any(e < 0 for e in entries):
            raise ValueError(f"negative multi-index entry in {entries}")
        return super().__new__(cls, entries)

    @classmethod
    def zero(cls, m: int) -> "DerivOp":
        return cls((0,) * m)

    @classmethod
    def unit(cls, m: int, k: int) -> "DerivOp":
        if not 1 <= k <= m:
            raise ValueError(f"derivation index {k} out of range 1..{m}")
        return cls(tuple(1 if i == k - 1 else 0 for i in range(m)))

    @property
    def order(self) -> int:
        return sum(self)

    def bump(self, k: int) -> "DerivOp":
        """Multi-index with one more application of the k-th derivation."""
        if not 1 <= k <= len(self):
            raise ValueError(f"derivation index {k} out of range 1..{len(self)}")
        return DerivOp(self[: k - 1] + (self[k - 1] + 1,) + self[k:])

    def compose(self, other: "DerivOp") -> "DerivOp":
        """Product in the free commutative monoid (entrywise sum)."""
        if len(self) != len(other):
            raise ValueError(f"derivation count mismatch: {len(self)} vs {len(other)}")
        return DerivOp(tuple(a + b for a, b in zip(self, other)))

    def __call__(self, f):
        """Apply the operator: iterated derivations of a Poly or DiffPoly."""
        expected = f.m if isinstance(f, (Poly, DiffPoly)) else None
        if expected != len(self):
            raise ValueError(
                f"operator length {len(self)} does not match operand with m={expected}"
            )
        for k, count in enumerate(self, start=1):
            for _ in range(count):
                f = f.derive(k) if isinstance(f, DiffPoly) else f.partial(k)
        return f

    def __str__(self) -> str:
        return "(" + ",".join(str(e) for e in self) + ")"

    def __repr__(self) -> str:
        return f"DerivOp{str(self)}"


def dual_monomial(theta: DerivOp | Sequence[int]) -> Poly:
    """The monomial x^t/t! dual to a derivative operator.

    Applying ``theta`` to it gives 1, and applying any operator that is
    strictly greater in the lexicographic order gives 0: the first entry
    where the larger operator exceeds ``theta`` differentiates the
    corresponding variable past its degree.
    """
    theta = DerivOp(theta)
    m = len(theta)
    coeff = Fraction(1, math.prod(math.factorial(e) for e in theta))
    return Poly.monomial(m, theta, coeff)


class DiffMonomial(tuple):
    """A product of differential indeterminates, as a sorted factor tuple.

    Each factor is a pair (generator index, DerivOp); repeated factors are
    stored with repetition.  The empty tuple is the monomial 1.
    """

    def __new__(cls, factors: Iterable[tuple[int, DerivOp]] = ()):
        norm = []
        for g, theta in factors:
            if g < 1:
                raise ValueError(f"generator index {g} must be positive")
            norm.append((g, DerivOp(theta)))
        return super().__new__(cls, sorted(norm))

    @classmethod
    def one(cls) -> "DiffMonomial":
        return cls()

    @classmethod
    def indeterminate(cls, g: int, theta: DerivOp | Sequence[int]) -> "DiffMonomial":
        return cls(((g, DerivOp(theta)),))

    def __mul__(self, other):
        if isinstance(other, DiffMonomial):
            return DiffMonomial(tuple.__add__(self, other))
        return NotImplemented

    @property
    def degree(self) -> int:
        return len(self)

    def max_gen(self) -> int:
        return max((g for g, _ in self), default=0)

    def is_polylinear(self, n: int) -> bool:
        """True iff each of the generators 1..n occurs exactly once."""
        return tuple(g for g, _ in self) == tuple(range(1, n + 1))

    def __str__(self) -> str:
        if not self:
            return "1"
        parts = []
        i = 0
        while i < len(self):
            g, theta = self[i]
            j = i
            while j < len(self) and self[j] == (g, theta):
                j += 1
            text = f"y{g}"
            if any(theta):
                text += f"^{theta}"
            if j - i > 1:
                text += f"^{j - i}"
            parts.append(text)
            i = j
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"DiffMonomial({str(self)})"


def polylinear_key(mono: DiffMonomial) -> tuple:
    """Concatenated multi-indices of a polylinear monomial, by generator.

    Lexicographic comparison of these keys is the order used to pick the
    least monomial in the separating construction.
    """
    n = len(mono)
    if not mono.is_polylinear(n):
        raise ValueError(f"monomial {mono} is not polylinear in y1..y{n}")
    flat: list[int] = []
    for _, theta in mono:
        flat.extend(theta)
    return tuple(flat)


def compare_polylinear(u: DiffMonomial, v: DiffMonomial) -> int:
    """-1, 0, or 1 comparing polylinear monomials in the same generators."""
    if len(u) != len(v):
        raise ValueError("monomials are polylinear in different generator sets")
    ku, kv = polylinear_key(u), polylinear_key(v)
    return -1 if ku < kv else (0 if ku == kv else 1)


def _mono_sort_key(mono: DiffMonomial) -> tuple:
    return (len(mono), tuple(mono))


class DiffPoly:
    """Element of the differential polynomial algebra C_m{y_1,...,y_ngens}."""

    __slots__ = ("m", "ngens", "terms", "_hash")

    def __init__(
        self,
        m: int,
        ngens: int,
        terms: Mapping[DiffMonomial, Poly] | None = None,
    ):
        if m < 0 or ngens < 0:
            raise ValueError("m and ngens must be non-negative")
        clean: dict[DiffMonomial, Poly] = {}
        if terms:
            for mono, coeff in terms.items():
                if not isinstance(mono, DiffMonomial):
                    mono = DiffMonomial(mono)
                for g, theta in mono:
                    if len(theta) != m:
                        raise ValueError(
                            f"operator {theta} has length {len(theta)}, expected {m}"
                        )
                    if g > ngens:
                        raise ValueError(
                            f"generator y{g} exceeds declared count {ngens}"
                        )
                if not isinstance(coeff, Poly):
                    coeff = Poly.const(m, coeff)
                if coeff.m != m:
                    raise ValueError(
                        f"coefficient variable count {coeff.m} != {m}"
                    )
                if not coeff.is_zero:
                    clean[mono] = coeff
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "ngens", ngens)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("DiffPoly is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, m: int, ngens: int = 0) -> "DiffPoly":
        return cls(m, ngens)

    @classmethod
    def one(cls, m: int, ngens: int = 0) -> "DiffPoly":
        return cls(m, ngens, {DiffMonomial.one(): Poly.one(m)})

    @classmethod
    def const(cls, m: int, value, ngens: int = 0) -> "DiffPoly":
        return cls(m, ngens, {DiffMonomial.one(): Poly.const(m, value)})

    @classmethod
    def from_poly(cls, p: Poly, ngens: int = 0) -> "DiffPoly":
        return cls(p.m, ngens, {DiffMonomial.one(): p})

    @classmethod
    def gen(cls, m: int, ngens: int, i: int) -> "DiffPoly":
        """The generator y_i (1-based, with zero derivative operator)."""
        if not 1 <= i <= ngens:
            raise ValueError(f"generator index {i} out of range 1..{ngens}")
        mono = DiffMonomial.indeterminate(i, DerivOp.zero(m))
        return cls(m, ngens, {mono: Poly.one(m)})

    @classmethod
    def indeterminate(
        cls, m: int, ngens: int, i: int, theta: Sequence[int]
    ) -> "DiffPoly":
        """The indeterminate y_i^theta."""
        if not 1 <= i <= ngens:
            raise ValueError(f"generator index {i} out of range 1..{ngens}")
        mono = DiffMonomial.indeterminate(i, DerivOp(theta))
        return cls(m, ngens, {mono: Poly.one(m)})

    # -- predicates / views --------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        """True iff no differential indeterminate occurs."""
        return all(not mono for mono in self.terms)

    def constant_poly(self) -> Poly:
        """The coefficient in C_m of an indeterminate-free element."""
        if not self.is_constant():
            raise ValueError("element involves differential indeterminates")
        if not self.terms:
            return Poly.zero(self.m)
        return next(iter(self.terms.values()))

    def max_gen_used(self) -> int:
        return max((mono.max_gen() for mono in self.terms), default=0)

    def with_ngens(self, ngens: int) -> "DiffPoly":
        """Same element viewed with a (larger) generator capacity."""
        if ngens < self.max_gen_used():
            raise ValueError(
                f"ngens {ngens} smaller than largest generator used "
                f"({self.max_gen_used()})"
            )
        if ngens == self.ngens:
            return self
        return DiffPoly(self.m, ngens, self.terms)

    def sorted_terms(self) -> Iterator[tuple[DiffMonomial, Poly]]:
        for mono in sorted(self.terms, key=_mono_sort_key, reverse=True):
            yield mono, self.terms[mono]

    # -- algebra operations ---------------------------------------------

    def _check_m(self, other: "DiffPoly") -> None:
        if self.m != other.m:
            raise ValueError(f"derivation count mismatch: {self.m} vs {other.m}")

    def __add__(self, other) -> "DiffPoly":
        if not isinstance(other, DiffPoly):
            return NotImplemented
        self._check_m(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            new = out.get(mono)
            new = coeff if new is None else new + coeff
            if new.is_zero:
                out.pop(mono, None)
            else:
                out[mono] = new
        return DiffPoly(self.m, max(self.ngens, other.ngens), out)

    def __sub__(self, other) -> "DiffPoly":
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "DiffPoly":
        return DiffPoly(self.m, self.ngens, {mn: -c for mn, c in self.terms.items()})

    def __mul__(self, other) -> "DiffPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return DiffPoly(self.m, self.ngens)
            return DiffPoly(
                self.m, self.ngens, {mn: c * other for mn, c in self.terms.items()}
            )
        if isinstance(other, Poly):
            if other.m != self.m:
                raise ValueError(
                    f"coefficient variable count {other.m} != {self.m}"
                )
            out = {}
            for mn, c in self.terms.items():
                prod = c * other
                if not prod.is_zero:
                    out[mn] = prod
            return DiffPoly(self.m, self.ngens, out)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        self._check_m(other)
        out: dict[DiffMonomial, Poly] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = ma * mb
                coeff = ca * cb
                new = out.get(mono)
                new = coeff if new is None else new + coeff
                if new.is_zero:
                    out.pop(mono, None)
                else:
                    out[mono] = new
        return DiffPoly(self.m, max(self.ngens, other.ngens), out)

    def __rmul__(self, other) -> "DiffPoly":
        if isinstance(other, (int, Fraction, Poly)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "DiffPoly":
        if n < 0:
            raise ValueError("negative powers are not differential polynomials")
        out = DiffPoly.one(self.m, self.ngens)
        for _ in range(n):
            out = out * self
        return out

    def derive(self, k: int) -> "DiffPoly":
        """Apply the k-th derivation (1-based): d/dx_k on coefficients,
        multi-index bump on indeterminates, Leibniz rule across products."""
        if not 1 <= k <= self.m:
            raise ValueError(f"derivation index {k} out of range 1..{self.m}")
        out: dict[DiffMonomial, Poly] = {}

        def put(mono: DiffMonomial, coeff: Poly) -> None:
            new = out.get(mono)
            new = coeff if new is None else new + coeff
            if new.is_zero:
                out.pop(mono, None)
            else:
                out[mono] = new

        for mono, coeff in self.terms.items():
            dc = coeff.partial(k)
            if not dc.is_zero:
                put(mono, dc)
            for idx in range(len(mono)):
                g, theta = mono[idx]
                bumped = DiffMonomial(
                    mono[:idx] + ((g, theta.bump(k)),) + mono[idx + 1:]
                )
                put(bumped, coeff)
        return DiffPoly(self.m, self.ngens, out)

    def substitute(self, targets: Sequence["DiffPoly"]) -> "DiffPoly":
        """The differential-algebra endomorphism fixing the coefficient ring
        and sending y_i to targets[i-1]; each y_i^t goes to t(targets[i-1])."""
        if len(targets) != self.ngens:
            raise ValueError(
                f"expected {self.ngens} substitution targets, got {len(targets)}"
            )
        out_ngens = 0
        for t in targets:
            if not isinstance(t, DiffPoly):
                raise ValueError("substitution targets must be DiffPoly values")
            if t.m != self.m:
                raise ValueError(
                    f"target derivation count {t.m} != {self.m}"
                )
            out_ngens = max(out_ngens, t.ngens)
        cache: dict[tuple[int, DerivOp], DiffPoly] = {}

        def derived_target(g: int, theta: DerivOp) -> DiffPoly:
            key = (g, theta)
            got = cache.get(key)
            if got is None:
                got = theta(targets[g - 1])
                cache[key] = got
            return got

        result = DiffPoly.zero(self.m, out_ngens)
        for mono, coeff in self.terms.items():
            acc = DiffPoly.from_poly(coeff, out_ngens)
            for g, theta in mono:
                acc = acc * derived_target(g, theta)
            result = result + acc
        return result

    # -- equality / hashing / text --------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiffPoly)
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

    def _scalar_terms(self) -> list[tuple[DiffMonomial, tuple, Fraction]]:
        items = []
        for mono, poly in self.terms.items():
            for exp, c in poly.terms.items():
                items.append((mono, exp, c))
        items.sort(
            key=lambda t: (_mono_sort_key(t[0]), deglex_key(t[1])), reverse=True
        )
        return items

    def __str__(self) -> str:
        items = self._scalar_terms()
        if not items:
            return "0"
        parts: list[str] = []
        for mono, exp, coeff in items:
            bits = []
            xbody = "*".join(
                f"x{i + 1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exp)
                if e
            )
            if xbody:
                bits.append(xbody)
            if mono:
                bits.append(str(mono))
            body = "*".join(bits)
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
        return f"DiffPoly({str(self)})"

    # -- JSON form -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "ngens": self.ngens,
            "terms": [
                {
                    "c": coeff.to_json(),
                    "factors": [{"g": g, "t": list(theta)} for g, theta in mono],
                }
                for mono, coeff in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DiffPoly":
        m = data["m"]
        terms: dict[DiffMonomial, Poly] = {}
        for entry in data["terms"]:
            mono = DiffMonomial(
                tuple((f["g"], DerivOp(f["t"])) for f in entry["factors"])
            )
            coeff = Poly.from_json(entry["c"])
            prev = terms.get(mono)
            terms[mono] = coeff if prev is None else prev + coeff
        return cls(m, data.get("ngens", 0), terms)


def separate(g: DiffPoly) -> tuple[list[Poly], Poly]:
    """Separating substitution for a nonzero multilinear element.

    Picks the least monomial y_1^{t_1}...y_n^{t_n} of ``g`` under the
    lexicographic order of concatenated multi-indices, and substitutes the
    dual monomial of each t_i for y_i.  Every other monomial of ``g`` is
    killed by the dual-monomial kernel property, so the image equals the
    least monomial's coefficient -- a nonzero witness that ``g`` does not
    vanish identically on the polynomial algebra.

    Returns (targets, witness): the substituted polynomials and the image.
    """
    if g.is_zero:
        raise ValueError("zero input: nothing to separate")
    n = g.ngens
    for mono in g.terms:
        if not mono.is_polylinear(n):
            raise ValueError(
                f"element is not multilinear in y1..y{n}: offending monomial {mono}"
            )
    least = min(g.terms, key=polylinear_key)
    targets = [dual_monomial(theta) for _, theta in least]
    image = g.substitute([DiffPoly.from_poly(p) for p in targets])
    witness = image.constant_poly()
    return targets, witness
