"""Construction and exact verification of the square order-defining matrix.

The first m-1 rows carry square roots of distinct primes, so each has
Q-linearly-independent components; the last row is the generalized cross
product of the others, hence exactly orthogonal to all of them.  Every
candidate is verified exactly before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .field import (
    FieldScalar,
    RadicalBasis,
    fs_det,
    fs_dot,
    primes_from,
    q_linear_independent,
)
from .orders import LinearForm


class BuildRetryExhaustedError(RuntimeError):
    pass


@dataclass(frozen=True)
class VerifyReport:
    invertible: bool
    rows_q_independent: list[bool]
    last_row_orthogonal: list[bool]

    @property
    def ok(self) -> bool:
        return (
            self.invertible
            and all(self.rows_q_independent)
            and all(self.last_row_orthogonal)
        )

    def to_json(self) -> dict:
        return {
            "invertible": self.invertible,
            "rows_q_independent": self.rows_q_independent,
            "last_row_orthogonal": self.last_row_orthogonal,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class OrderMatrix:
    m: int
    rows: tuple[LinearForm, ...]
    basis: RadicalBasis
    verified: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.rows) != self.m:
            raise ValueError("row count differs from m")
        for r in self.rows:
            if r.rank != self.m:
                raise ValueError("row length differs from m")

    def entry(self, i: int, j: int) -> FieldScalar:
        return self.rows[i].coeffs[j]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "rows": [r.to_json() for r in self.rows],
        }

    @staticmethod
    def from_json(obj: dict) -> OrderMatrix:
        rows = tuple(LinearForm.from_json(r) for r in obj["rows"])
        return OrderMatrix(obj["m"], rows, rows[0].basis)


def cross_row(rows: list[LinearForm], basis: RadicalBasis) -> LinearForm:
    """The vector of signed maximal minors of an (m-1) x m matrix.

    Orthogonal to every input row: the dot product expands a determinant
    with a duplicated row.  Sign convention fixed so that the single row
    (1, sqrt(2)) yields (-sqrt(2), 1).
    """
    m = len(rows) + 1
    entries = []
    for j in range(m):
        minor = [tuple(r.coeffs[t] for t in range(m) if t != j) for r in rows]
        d = fs_det(minor)
        entries.append(-d if j % 2 == 0 else d)
    return LinearForm(tuple(entries))


def verify(A: OrderMatrix) -> VerifyReport:
    """Decide conditions (a) invertible, (b) per-row Q-independence,
    (c) last row orthogonal to the others — all exactly."""
    det = fs_det([r.coeffs for r in A.rows])
    rows_qi = [q_linear_independent(list(r.coeffs)) for r in A.rows]
    last = A.rows[-1].coeffs
    orth = [fs_dot(last, r.coeffs).is_zero() for r in A.rows[:-1]]
    return VerifyReport(
        invertible=not det.is_zero(),
        rows_q_independent=rows_qi,
        last_row_orthogonal=orth,
    )


def build(m: int, seed: int, max_attempts: int = 64) -> OrderMatrix:
    """A verified OrderMatrix with radical entries, deterministic in seed.

    Row i (i < m-1) is (1, sqrt(p_1), ..., sqrt(p_{m-1})) over primes drawn
    consecutively from the seed-th prime on; the last row is the cross
    product of the others.  On verification failure the prime window is
    advanced and the construction retried.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    per_row = m - 1
    need = per_row * (m - 1)
    for attempt in range(max_attempts):
        primes = primes_from(seed + attempt, need)
        basis = RadicalBasis(tuple(sorted(primes)))
        rows = []
        for i in range(m - 1):
            chunk = primes[i * per_row : (i + 1) * per_row]
            coeffs = [basis.one] + [basis.sqrt(p) for p in chunk]
            rows.append(LinearForm(tuple(coeffs)))
        last = cross_row(rows, basis)
        A = OrderMatrix(m, tuple(rows) + (last,), basis, verified=False)
        report = verify(A)
        if report.ok:
            return OrderMatrix(m, A.rows, basis, verified=True)
    raise BuildRetryExhaustedError(
        f"no verified matrix for m={m} within {max_attempts} attempts"
    )
