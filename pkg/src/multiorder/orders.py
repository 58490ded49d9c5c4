"""Right-invariant total orders on Z^m given by sequences of linear forms.

A single form with Q-linearly-independent components gives a dense
archimedean order; a longer sequence resolves ties on the kernel of the
leading form (the non-archimedean case).  All notation is additive.
"""

from __future__ import annotations

import random
from enum import IntEnum
from fractions import Fraction

from .field import (
    FieldScalar,
    RadicalBasis,
    coefficient_rows,
    q_linear_independent,
    rational_rank,
)
from .lattice import IntVec, iter_box, vec_sub


class Cmp(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class Cone(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


class RankMismatchError(ValueError):
    pass


class NotTotalError(ValueError):
    """The forms do not define a total order: a nonzero vector kills them all."""


class NotDenseError(ValueError):
    pass


class BoundExhaustedError(RuntimeError):
    pass


class LinearForm:
    """A nonzero vector of field scalars, paired with lattice vectors by dot."""

    __slots__ = ("coeffs", "_floats")

    def __init__(self, coeffs: tuple[FieldScalar, ...]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("empty linear form")
        basis = coeffs[0].basis
        for c in coeffs[1:]:
            if c.basis != basis:
                raise ValueError("mixed bases in linear form")
        if all(c.is_zero() for c in coeffs):
            raise ValueError("zero linear form")
        self.coeffs = coeffs
        self._floats: tuple[float, ...] | None = None

    @property
    def basis(self) -> RadicalBasis:
        return self.coeffs[0].basis

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def value(self, z: IntVec) -> FieldScalar:
        terms: dict[int, Fraction] = {}
        for zi, c in zip(z, self.coeffs):
            if zi:
                for d, q in c.terms.items():
                    terms[d] = terms.get(d, Fraction(0)) + q * zi
        return FieldScalar(self.basis, terms)

    def floats(self) -> tuple[float, ...]:
        if self._floats is None:
            self._floats = tuple(c.to_float() for c in self.coeffs)
        return self._floats

    def negate(self) -> LinearForm:
        return LinearForm(tuple(-c for c in self.coeffs))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"LinearForm({list(self.coeffs)!r})"

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    @staticmethod
    def from_json(obj: list) -> LinearForm:
        return LinearForm(tuple(FieldScalar.from_json(c) for c in obj))


class OrderSpec:
    """A right-invariant total order on Z^m, lexicographic over its forms."""

    __slots__ = ("rank", "forms")

    def __init__(self, rank: int, forms: tuple[LinearForm, ...]):
        forms = tuple(forms)
        if not forms:
            raise ValueError("OrderSpec needs at least one form")
        for f in forms:
            if f.rank != rank:
                raise RankMismatchError("form length differs from rank")
        self.rank = rank
        self.forms = forms
        self._validate_totality()

    def _validate_totality(self) -> None:
        # Each form contributes one rational constraint row per radicand;
        # the order is total iff the stacked rows have full column rank.
        rows: list[list[Fraction]] = []
        for f in self.forms:
            radicands = sorted({d for c in f.coeffs for d in c.terms})
            for d in radicands:
                rows.append([c.terms.get(d, Fraction(0)) for c in f.coeffs])
        if rational_rank(rows) != self.rank:
            raise NotTotalError(
                "nonzero integer vectors are annihilated by every form"
            )

    @property
    def leading(self) -> LinearForm:
        return self.forms[0]

    def is_dense(self) -> bool:
        return len(self.forms) == 1 and q_linear_independent(
            list(self.forms[0].coeffs)
        )

    def compare(self, x: IntVec, y: IntVec) -> Cmp:
        if len(x) != self.rank or len(y) != self.rank:
            raise RankMismatchError("vector rank differs from order rank")
        diff = vec_sub(x, y)
        for f in self.forms:
            s = f.value(diff).sign()
            if s:
                return Cmp.LESS if s < 0 else Cmp.GREATER
        return Cmp.EQUAL

    def reverse(self) -> OrderSpec:
        return OrderSpec(self.rank, tuple(f.negate() for f in self.forms))

    def cone_membership(self, g: IntVec) -> Cone:
        c = self.compare((0,) * self.rank, g)
        if c == Cmp.LESS:
            return Cone.POSITIVE
        if c == Cmp.GREATER:
            return Cone.NEGATIVE
        return Cone.ZERO

    def cone_split(self, p: IntVec, bound: int) -> tuple[IntVec, IntVec]:
        """Split a positive p as q + r with q, r positive, by box search."""
        if not self.is_dense():
            raise NotDenseError("cone_split requires a dense order")
        if self.cone_membership(p) != Cone.POSITIVE:
            raise ValueError("p must be positive")
        for q in iter_box(self.rank, bound):
            if self.cone_membership(q) != Cone.POSITIVE:
                continue
            r = vec_sub(p, q)
            if self.cone_membership(r) == Cone.POSITIVE:
                return q, r
        raise BoundExhaustedError(f"no split of {p} within bound {bound}")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OrderSpec)
            and self.rank == other.rank
            and self.forms == other.forms
        )

    def __repr__(self) -> str:
        return f"OrderSpec(rank={self.rank}, forms={list(self.forms)!r})"

    def to_json(self) -> dict:
        return {"rank": self.rank, "forms": [f.to_json() for f in self.forms]}

    @staticmethod
    def from_json(obj: dict) -> OrderSpec:
        return OrderSpec(
            obj["rank"], tuple(LinearForm.from_json(f) for f in obj["forms"])
        )


def translation_invariant_check(
    o: OrderSpec, samples: int, rng: random.Random | None = None, spread: int = 50
) -> bool:
    """Sampled check that compare(x, y) == compare(x+g, y+g)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = rng or random.Random(0)
    m = o.rank
    for _ in range(samples):
        x = tuple(rng.randint(-spread, spread) for _ in range(m))
        y = tuple(rng.randint(-spread, spread) for _ in range(m))
        g = tuple(rng.randint(-spread, spread) for _ in range(m))
        if o.compare(x, y) != o.compare(
            tuple(a + c for a, c in zip(x, g)), tuple(b + c for b, c in zip(y, g))
        ):
            return False
    return True
