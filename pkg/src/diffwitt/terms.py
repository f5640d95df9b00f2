"""Expression trees for elements of free algebras and equation systems.

Leaves are generators (1-based) or constants; internal nodes are the binary
operation of the ambient variety plus formal sums and rational scalings.
Trees are frozen dataclasses, so structural equality and hashing come for
free (constant leaves hold hashable algebra values).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

# Operation tags for BinOp nodes.
LSYM = "lsym"          # left-symmetric product  a o b
LIE = "lie"            # Lie bracket             [a, b]
PMUL = "pmul"          # Poisson (commutative) product  a * b
PBRACKET = "pbracket"  # Poisson bracket         {a, b}
SCMUL = "scmul"        # structure-constant algebra product (flattening)

ALL_TAGS = (LSYM, LIE, PMUL, PBRACKET, SCMUL)


@dataclass(frozen=True)
class Gen:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"generator index {self.index} must be positive")


@dataclass(frozen=True)
class Const:
    value: object


@dataclass(frozen=True)
class BinOp:
    tag: str
    left: "Term"
    right: "Term"

    def __post_init__(self):
        if self.tag not in ALL_TAGS:
            raise ValueError(f"unknown operation tag {self.tag!r}")


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Scale:
    coeff: Fraction
    child: "Term"


Term = Union[Gen, Const, BinOp, Add, Scale]


def subterms(t: Term) -> Iterator[Term]:
    """All nodes of the tree, root first."""
    yield t
    if isinstance(t, BinOp) or isinstance(t, Add):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, Scale):
        yield from subterms(t.child)


def max_gen(t: Term) -> int:
    return max((s.index for s in subterms(t) if isinstance(s, Gen)), default=0)


def has_const(t: Term) -> bool:
    return any(isinstance(s, Const) for s in subterms(t))


def used_tags(t: Term) -> set[str]:
    return {s.tag for s in subterms(t) if isinstance(s, BinOp)}
