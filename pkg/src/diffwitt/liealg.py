"""Vector fields over a differential algebra and their three products.

A vector field is a formal sum f1*D1 + ... + fm*Dm with coefficients in a
differential polynomial algebra.  The left-symmetric product

    (f*Di) o (g*Dj)  =  f * Di(g) * Dj

makes these a left-symmetric algebra; its commutator is the Witt bracket.
Scalars over an even number of derivations additionally carry the
symplectic Poisson bracket, pairing derivation 2i-1 with derivation 2i.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .diffpoly import DiffPoly
from .exactpoly import Poly


class VectorField:
    """m-tuple of differential polynomials: the coefficients of D1..Dm."""

    __slots__ = ("m", "components", "_hash")

    def __init__(self, components: Iterable[DiffPoly]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector field needs at least one component")
        m = len(comps)
        ngens = 0
        for c in comps:
            if not isinstance(c, DiffPoly):
                raise ValueError("components must be DiffPoly values")
            if c.m != m:
                raise ValueError(
                    f"component has {c.m} derivations but the field has {m} components"
                )
            ngens = max(ngens, c.ngens)
        comps = tuple(c.with_ngens(ngens) for c in comps)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("VectorField is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, m: int, ngens: int = 0) -> "VectorField":
        return cls([DiffPoly.zero(m, ngens)] * m)

    @classmethod
    def from_polys(cls, polys: Iterable[Poly], ngens: int = 0) -> "VectorField":
        return cls([DiffPoly.from_poly(p, ngens) for p in polys])

    # -- module operations -------------------------------------------------

    @property
    def ngens(self) -> int:
        return self.components[0].ngens

    def _check(self, other: "VectorField") -> None:
        if self.m != other.m:
            raise ValueError(f"derivation count mismatch: {self.m} vs {other.m}")

    def __add__(self, other) -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        self._check(other)
        return VectorField(
            [a + b for a, b in zip(self.components, other.components)]
        )

    def __sub__(self, other) -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "VectorField":
        return VectorField([-c for c in self.components])

    def __mul__(self, other) -> "VectorField":
        if isinstance(other, (int, Fraction, Poly)):
            return VectorField([c * other for c in self.components])
        return NotImplemented

    __rmul__ = __mul__

    def with_ngens(self, ngens: int) -> "VectorField":
        return VectorField([c.with_ngens(ngens) for c in self.components])

    def substitute(self, targets: Sequence[DiffPoly]) -> "VectorField":
        """Apply a generator substitution to every component."""
        return VectorField([c.substitute(targets) for c in self.components])

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def is_constant(self) -> bool:
        return all(c.is_constant() for c in self.components)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VectorField)
            and self.m == other.m
            and self.components == other.components
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self.components)
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self) -> str:
        return "V(" + "; ".join(str(c) for c in self.components) + ")"

    def __repr__(self) -> str:
        return f"VectorField({str(self)})"

    def to_json(self) -> dict:
        return {"m": self.m, "components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, data: Mapping) -> "VectorField":
        return cls([DiffPoly.from_json(c) for c in data["components"]])


def lsym(u: VectorField, v: VectorField) -> VectorField:
    """Left-symmetric product: component j is sum_i u_i * D_i(v_j)."""
    u._check(v)
    m = u.m
    comps = []
    for j in range(m):
        acc = DiffPoly.zero(m, max(u.ngens, v.ngens))
        for i in range(m):
            acc = acc + u.components[i] * v.components[j].derive(i + 1)
        comps.append(acc)
    return VectorField(comps)


def wbracket(u: VectorField, v: VectorField) -> VectorField:
    """Witt bracket: the commutator of the left-symmetric product."""
    return lsym(u, v) - lsym(v, u)


def pbracket(f: DiffPoly, g: DiffPoly) -> DiffPoly:
    """Symplectic Poisson bracket on scalars over 2m derivations:

    {f,g} = sum_i ( D_{2i-1}(f) D_{2i}(g) - D_{2i}(f) D_{2i-1}(g) ).
    """
    if f.m != g.m:
        raise ValueError(f"derivation count mismatch: {f.m} vs {g.m}")
    if f.m % 2 or f.m == 0:
        raise ValueError(f"Poisson bracket needs an even derivation count, got {f.m}")
    acc = DiffPoly.zero(f.m, max(f.ngens, g.ngens))
    for i in range(1, f.m // 2 + 1):
        acc = acc + f.derive(2 * i - 1) * g.derive(2 * i)
        acc = acc - f.derive(2 * i) * g.derive(2 * i - 1)
    return acc


def witt_basis(k: int) -> VectorField:
    """Classical one-derivation Witt basis element x1^(k+1)*D1, k >= -1."""
    if k < -1:
        raise ValueError(f"index {k} < -1 leaves the polynomial coefficients")
    return VectorField.from_polys([Poly.monomial(1, (k + 1,))])
