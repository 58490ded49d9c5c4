"""Constructive refutation certificates for non-generic order tuples.

Dispatch mirrors the induction of the non-existence proof: dependent
defining forms, a form with rationally dependent components (recurse on
its kernel sublattice), or all forms dense with a small-volume empty
parallelepiped.  Rank one bottoms out in the discrete base case.  Every
certificate carries exact field-element evidence and is re-checkable by
verify_certificate without trusting the refuter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import (
    FieldScalar,
    fs_det,
    fs_row_dependency,
    q_linear_independent,
    rational_rank,
)
from .genericity import IntervalConstraint
from .lattice import (
    IntVec,
    int_kernel,
    iter_box,
    same_lattice,
    shell_blocks,
    solve_coordinates,
    vec_scale,
    vec_sub,
)
from .orders import Cmp, LinearForm, OrderSpec

DEFAULT_SEARCH_NORM = 32
DEFAULT_SCAN_BOX = 50

TAG_DEPENDENT = "Dependent"
TAG_RATIONAL_KERNEL = "RationalKernel"
TAG_SMALL_VOLUME = "SmallVolume"
TAG_DISCRETE_BASE = "DiscreteBase"


class NoCertificateFound(Exception):
    """No refutation exists within budget (expected when m > n)."""


class MalformedCertificateError(ValueError):
    pass


class SearchBudgetExhaustedError(RuntimeError):
    pass


@dataclass(frozen=True)
class Certificate:
    constraints: IntervalConstraint
    lemma_tag: str
    evidence: dict


def _common_rank(orders: list[OrderSpec]) -> int:
    if not orders:
        raise ValueError("no orders given")
    m = orders[0].rank
    for o in orders:
        if o.rank != m:
            raise ValueError("orders have mixed ranks")
    return m


def _infinite_bounds(n: int) -> list[tuple[IntVec | None, IntVec | None]]:
    return [(None, None) for _ in range(n)]


# -- exact emptiness scanning ------------------------------------------------


def _satisfies_all(
    orders: list[OrderSpec],
    bounds: tuple[tuple[IntVec | None, IntVec | None], ...],
    z: IntVec,
) -> bool:
    for (lo, hi), o in zip(bounds, orders):
        if lo is not None and o.compare(lo, z) != Cmp.LESS:
            return False
        if hi is not None and o.compare(z, hi) != Cmp.LESS:
            return False
    return True


def scan_box(
    orders: list[OrderSpec],
    bounds: tuple[tuple[IntVec | None, IntVec | None], ...],
    box: int,
) -> IntVec | None:
    """First point of [-box, box]^m meeting all open intervals, or None.

    Float prefilter on the leading forms (a necessary condition even for
    recursive orders), exact confirmation on candidates.
    """
    m = orders[0].rank
    C = np.array([o.leading.floats() for o in orders], dtype=float)
    lo = np.full(len(orders), -np.inf)
    hi = np.full(len(orders), np.inf)
    for i, (l, h) in enumerate(bounds):
        if l is not None:
            lo[i] = float(np.dot(C[i], l))
        if h is not None:
            hi[i] = float(np.dot(C[i], h))
    cmax = float(np.abs(C).max())
    for s in range(box + 1):
        margin = 1e-6 * (1.0 + s) * (1.0 + cmax) * m
        for block in shell_blocks(m, s):
            V = block.astype(float) @ C.T
            mask = np.all((V >= lo - margin) & (V <= hi + margin), axis=1)
            for idx in np.flatnonzero(mask):
                z = tuple(int(v) for v in block[idx])
                if _satisfies_all(orders, bounds, z):
                    return z
    return None


def _sanity_box(m: int, box: int) -> int:
    if m <= 3:
        return box
    return max(8, int(round(5e6 ** (1.0 / m))) // 2)


# -- small helpers -----------------------------------------------------------


def _search_sign_vector(form: LinearForm, want: int, norm_cap: int) -> IntVec:
    """First lattice vector whose leading-form value has the wanted sign."""
    for v in iter_box(form.rank, norm_cap):
        if form.value(v).sign() == want:
            return v
    raise SearchBudgetExhaustedError(
        f"no vector of sign {want} within norm {norm_cap}"
    )


def _min_positive_vector(form: LinearForm, box: int) -> tuple[IntVec, FieldScalar]:
    """Lattice vector with the smallest positive form value in the box."""
    best_v: IntVec | None = None
    best_val: FieldScalar | None = None
    for v in iter_box(form.rank, box):
        val = form.value(v)
        if val.sign() <= 0:
            continue
        if best_val is None or (val - best_val).sign() < 0:
            best_v, best_val = v, val
    if best_v is None:
        raise SearchBudgetExhaustedError("no positive vector in box")
    return best_v, best_val


# -- lemma paths -------------------------------------------------------------


def _refute_discrete_base(orders: list[OrderSpec]) -> Certificate:
    o = orders[0]
    g = (1,) if o.compare((0,), (1,)) == Cmp.LESS else (-1,)
    bounds = _infinite_bounds(len(orders))
    bounds[0] = ((0,), g)
    return Certificate(
        IntervalConstraint(tuple(bounds)),
        TAG_DISCRETE_BASE,
        {"order": 0, "pair": ((0,), g)},
    )


def refute_dependent(
    orders: list[OrderSpec],
    k: int,
    coeffs: list[FieldScalar],
    search_norm: int = DEFAULT_SEARCH_NORM,
) -> Certificate:
    """Certificate from an exact field dependency c_k = sum a_j c_j (j < k).

    Orders j with a_j > 0 get the interval (0, p_j) with p_j positive,
    those with a_j < 0 get (q_j, 0) with q_j negative, pinning the
    combination a_j * (c_j . z) >= 0; order k gets an interval whose
    values are strictly negative, which no common point can reach.
    """
    forms = [o.leading for o in orders]
    signs = [a.sign() for a in coeffs]
    bounds = _infinite_bounds(len(orders))
    for j, s in enumerate(signs):
        if s == 0:
            continue
        p = _search_sign_vector(forms[j], s, search_norm)
        zero = (0,) * orders[j].rank
        bounds[j] = (zero, p) if s > 0 else (p, zero)
    yk = _search_sign_vector(forms[k], -1, search_norm)
    xk = vec_scale(2, yk)
    bounds[k] = (xk, yk)
    return Certificate(
        IntervalConstraint(tuple(bounds)),
        TAG_DEPENDENT,
        {
            "k": k,
            "coeffs": list(coeffs),
            "reversed": [s < 0 for s in signs],
        },
    )


def kernel_lattice(c: LinearForm, m: int) -> list[IntVec]:
    """Basis of the pure sublattice {z in Z^m : c . z = 0}, computed from
    the rational expansion of c over its radicands."""
    if c.rank != m:
        raise ValueError("form length differs from m")
    if q_linear_independent(list(c.coeffs)):
        raise ValueError("components are Q-independent; kernel is zero")
    radicands = sorted({d for coeff in c.coeffs for d in coeff.terms})
    rows: list[list[int]] = []
    for d in radicands:
        frac_row = [coeff.terms.get(d, Fraction(0)) for coeff in c.coeffs]
        denom = 1
        for q in frac_row:
            denom = denom * q.denominator // _gcd(denom, q.denominator)
        rows.append([int(q * denom) for q in frac_row])
    basis = int_kernel(rows)
    if not basis:
        raise ValueError("kernel unexpectedly trivial")
    return basis


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)


def _pullback_order(o: OrderSpec, basis: list[IntVec]) -> OrderSpec:
    """Restriction of an order to the sublattice spanned by basis rows,
    expressed on Z^rank(basis) through those coordinates."""
    forms = []
    for f in o.forms:
        coeffs = []
        for b in basis:
            acc = f.basis.zero
            for t, bt in enumerate(b):
                if bt:
                    acc = acc + f.coeffs[t] * bt
            coeffs.append(acc)
        if all(c.is_zero() for c in coeffs):
            continue
        forms.append(LinearForm(tuple(coeffs)))
    return OrderSpec(len(basis), tuple(forms))


def _lift(v: IntVec | None, basis: list[IntVec]) -> IntVec | None:
    if v is None:
        return None
    m = len(basis[0])
    return tuple(sum(v[s] * basis[s][j] for s in range(len(basis))) for j in range(m))


def refute_rational_kernel(
    orders: list[OrderSpec], i: int, search_norm: int = DEFAULT_SEARCH_NORM
) -> Certificate:
    """Recurse on the kernel sublattice of order i's leading form.

    The order-i interval has both endpoints inside the kernel with equal
    (zero) leading values, so every point of the open interval lies in the
    sublattice; the recursive certificate then empties the intersection.
    """
    m = _common_rank(orders)
    c_i = orders[i].leading
    basis = kernel_lattice(c_i, m)
    pulled = [_pullback_order(o, basis) for j, o in enumerate(orders) if j != i]
    inner = refute(pulled, search_norm=search_norm)
    order_map = [j for j in range(len(orders)) if j != i]
    bounds = _infinite_bounds(len(orders))
    for pos, j in enumerate(order_map):
        lo, hi = inner.constraints.bounds[pos]
        bounds[j] = (_lift(lo, basis), _lift(hi, basis))
    b0 = basis[0]
    zero = (0,) * m
    if orders[i].compare(zero, b0) == Cmp.LESS:
        bounds[i] = (zero, b0)
    else:
        bounds[i] = (b0, zero)
    return Certificate(
        IntervalConstraint(tuple(bounds)),
        TAG_RATIONAL_KERNEL,
        {"order": i, "kernel_basis": [tuple(b) for b in basis], "inner": inner},
    )


# -- small-volume path -------------------------------------------------------


def _interval_of(v: FieldScalar, bits: int = 64) -> tuple[Fraction, Fraction]:
    lo, hi = v.interval(bits)
    while lo <= 0 <= hi and not v.is_zero() and bits <= 16384:
        bits *= 2
        lo, hi = v.interval(bits)
    return lo, hi


def _imul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]):
    prods = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    return min(prods), max(prods)


def _iadd(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]):
    return a[0] + b[0], a[1] + b[1]


def _adjugate(rows: list[tuple[FieldScalar, ...]]) -> list[list[FieldScalar]]:
    n = len(rows)
    if n == 1:
        return [[rows[0][0].basis.one]]
    adj = [[None] * n for _ in range(n)]
    for t in range(n):
        for i in range(n):
            minor = [
                tuple(rows[r][c] for c in range(n) if c != t)
                for r in range(n)
                if r != i
            ]
            d = fs_det(minor)
            adj[t][i] = d if (t + i) % 2 == 0 else -d
    return adj


def _inverse_intervals(
    rows: list[tuple[FieldScalar, ...]], det: FieldScalar
) -> list[list[tuple[Fraction, Fraction]]]:
    """Outward rational enclosures of the entries of the matrix inverse."""
    adj = _adjugate(rows)
    dlo, dhi = _interval_of(det)
    if dlo <= 0 <= dhi:
        raise ArithmeticError("determinant interval spans zero")
    rec = (1 / dhi, 1 / dlo)
    n = len(rows)
    return [[_imul(_interval_of(adj[t][i]), rec) for i in range(n)] for t in range(n)]


def _parallelepiped_empty(
    orders: list[OrderSpec],
    bounds: tuple[tuple[IntVec, IntVec], ...],
    inv_intervals: list[list[tuple[Fraction, Fraction]]],
) -> bool:
    """Exact emptiness of a bounded open slab intersection.

    The certified rational enclosure of C^{-1} maps the closed value box
    to integer coordinate ranges; every candidate is tested exactly.
    """
    n = len(orders)
    windows = []
    for (lo_pt, hi_pt), o in zip(bounds, orders):
        vlo = _interval_of(o.leading.value(lo_pt))
        vhi = _interval_of(o.leading.value(hi_pt))
        windows.append((min(vlo[0], vhi[0]), max(vlo[1], vhi[1])))
    ranges = []
    for t in range(n):
        acc = (Fraction(0), Fraction(0))
        for i in range(n):
            acc = _iadd(acc, _imul(inv_intervals[t][i], windows[i]))
        lo_int = int(np.ceil(float(acc[0]))) - 1
        hi_int = int(np.floor(float(acc[1]))) + 1
        # tighten exactly
        while Fraction(lo_int) < acc[0]:
            lo_int += 1
        while Fraction(lo_int - 1) >= acc[0]:
            lo_int -= 1
        while Fraction(hi_int) > acc[1]:
            hi_int -= 1
        while Fraction(hi_int + 1) <= acc[1]:
            hi_int += 1
        ranges.append((lo_int, hi_int))
    import itertools

    for z in itertools.product(*[range(lo, hi + 1) for lo, hi in ranges]):
        if _satisfies_all(orders, bounds, z):
            return False
    return True


def refute_small_volume(
    orders: list[OrderSpec],
    width_box_cap: int = 64,
    max_shift: int = 64,
) -> Certificate:
    """All forms independent and dense with m = n: build slab intervals of
    total volume below |det| and shift them until the parallelepiped
    contains no lattice point."""
    m = _common_rank(orders)
    n = len(orders)
    if n != m:
        raise ValueError("small-volume path needs as many orders as the rank")
    forms = [o.leading for o in orders]
    det = fs_det([f.coeffs for f in forms])
    s = det.sign()
    if s == 0:
        raise ValueError("forms are dependent; use the dependent path")
    absdet = det if s > 0 else -det

    box = 2
    while True:
        ps: list[IntVec] = []
        eps: list[FieldScalar] = []
        for f in forms:
            p, val = _min_positive_vector(f, box)
            ps.append(p)
            eps.append(val)
        prod = forms[0].basis.one
        for e in eps:
            prod = prod * e
        if (absdet - prod).sign() > 0:
            break
        box *= 2
        if box > width_box_cap:
            raise SearchBudgetExhaustedError("width search box cap exceeded")

    inv_intervals = _inverse_intervals([f.coeffs for f in forms], det)
    K = 2
    while K <= max_shift:
        for cell in iter_box(n, K):
            if any(k < 0 for k in cell):
                continue
            bounds = tuple(
                (vec_scale(k, p), vec_scale(k + 1, p)) for k, p in zip(cell, ps)
            )
            if _parallelepiped_empty(orders, bounds, inv_intervals):
                return Certificate(
                    IntervalConstraint(bounds),
                    TAG_SMALL_VOLUME,
                    {"det": det, "widths": eps},
                )
        K *= 2
    raise SearchBudgetExhaustedError("no empty translate within shift budget")


# -- dispatch ----------------------------------------------------------------


def refute(
    orders: list[OrderSpec], search_norm: int = DEFAULT_SEARCH_NORM
) -> Certificate:
    """Produce a verified certificate that the order tuple is not generic."""
    m = _common_rank(orders)
    n = len(orders)
    if m == 1:
        return _refute_discrete_base(orders)
    dep = fs_row_dependency([o.leading.coeffs for o in orders])
    if dep is not None:
        k, coeffs = dep
        return refute_dependent(orders, k, coeffs, search_norm)
    for i, o in enumerate(orders):
        if not q_linear_independent(list(o.leading.coeffs)):
            return refute_rational_kernel(orders, i, search_norm)
    if n >= m:
        return refute_small_volume(orders)
    raise NoCertificateFound(
        f"{n} independent dense orders on rank {m}: no certificate expected"
    )


# -- verification ------------------------------------------------------------


def _check_bounds_shape(orders: list[OrderSpec], cert: Certificate) -> None:
    m = orders[0].rank
    if len(cert.constraints.bounds) != len(orders):
        raise MalformedCertificateError("one interval per order required")
    for lo, hi in cert.constraints.bounds:
        for e in (lo, hi):
            if e is not None and len(e) != m:
                raise MalformedCertificateError("endpoint rank mismatch")


def _verify_dependent(orders: list[OrderSpec], cert: Certificate) -> bool:
    ev = cert.evidence
    k = ev["k"]
    coeffs = ev["coeffs"]
    if not (0 < k < len(orders)) or len(coeffs) != k:
        raise MalformedCertificateError("bad dependency index or coefficients")
    forms = [o.leading for o in orders]
    basis = forms[0].basis
    # exact dependency identity
    for t in range(orders[0].rank):
        acc = basis.zero
        for j in range(k):
            acc = acc + coeffs[j] * forms[j].coeffs[t]
        if not (acc - forms[k].coeffs[t]).is_zero():
            return False
    bounds = cert.constraints.bounds
    lower_sum = basis.zero
    for j in range(k):
        s = coeffs[j].sign()
        if s == 0:
            continue
        lo, hi = bounds[j]
        if lo is None or hi is None:
            return False
        anchor = lo if s > 0 else hi
        lower_sum = lower_sum + coeffs[j] * forms[j].value(anchor)
    lo_k, hi_k = bounds[k]
    if hi_k is None:
        return False
    return (forms[k].value(hi_k) - lower_sum).sign() < 0


def _verify_rational_kernel(
    orders: list[OrderSpec], cert: Certificate, scan_box: int
) -> bool:
    ev = cert.evidence
    i = ev["order"]
    basis = [tuple(b) for b in ev["kernel_basis"]]
    inner: Certificate = ev["inner"]
    if not (0 <= i < len(orders)) or not basis:
        raise MalformedCertificateError("bad kernel evidence")
    m = orders[0].rank
    c_i = orders[i].leading
    for b in basis:
        if not c_i.value(b).is_zero():
            return False
    try:
        full = kernel_lattice(c_i, m)
    except ValueError:
        return False
    if not same_lattice(basis, full):
        return False
    lo_i, hi_i = cert.constraints.bounds[i]
    if lo_i is None or hi_i is None:
        return False
    if not (c_i.value(lo_i).is_zero() and c_i.value(hi_i).is_zero()):
        return False
    order_map = [j for j in range(len(orders)) if j != i]
    pulled = [_pullback_order(orders[j], basis) for j in order_map]
    for pos, j in enumerate(order_map):
        in_lo, in_hi = inner.constraints.bounds[pos]
        if cert.constraints.bounds[j] != (_lift(in_lo, basis), _lift(in_hi, basis)):
            return False
    return verify_certificate(pulled, inner, scan_box=scan_box)


def _verify_small_volume(orders: list[OrderSpec], cert: Certificate) -> bool:
    ev = cert.evidence
    n = len(orders)
    if n != orders[0].rank or len(ev["widths"]) != n:
        raise MalformedCertificateError("bad small-volume evidence")
    forms = [o.leading for o in orders]
    det = fs_det([f.coeffs for f in forms])
    if not (det - ev["det"]).is_zero() or det.is_zero():
        return False
    basis = forms[0].basis
    prod = basis.one
    for i, (lo, hi) in enumerate(cert.constraints.bounds):
        if lo is None or hi is None:
            return False
        width = forms[i].value(vec_sub(hi, lo))
        if width.sign() <= 0 or not (width - ev["widths"][i]).is_zero():
            return False
        prod = prod * width
    absdet = det if det.sign() > 0 else -det
    if (absdet - prod).sign() <= 0:
        return False
    inv_intervals = _inverse_intervals([f.coeffs for f in forms], det)
    return _parallelepiped_empty(orders, cert.constraints.bounds, inv_intervals)


def _verify_discrete_base(orders: list[OrderSpec], cert: Certificate) -> bool:
    ev = cert.evidence
    i = ev["order"]
    a, b = (tuple(ev["pair"][0]), tuple(ev["pair"][1]))
    if orders[0].rank != 1 or not (0 <= i < len(orders)):
        raise MalformedCertificateError("bad discrete-base evidence")
    if abs(b[0] - a[0]) != 1:
        return False
    if orders[i].compare(a, b) != Cmp.LESS:
        return False
    return cert.constraints.bounds[i] == (a, b)


def verify_certificate(
    orders: list[OrderSpec], cert: Certificate, scan_box: int = DEFAULT_SCAN_BOX
) -> bool:
    """Exact, refuter-independent validation of a certificate, plus a
    box-bounded brute scan confirming no common point exists."""
    m = _common_rank(orders)
    _check_bounds_shape(orders, cert)
    for (lo, hi), o in zip(cert.constraints.bounds, orders):
        if lo is not None and hi is not None and o.compare(lo, hi) != Cmp.LESS:
            return False
    if cert.lemma_tag == TAG_DEPENDENT:
        ok = _verify_dependent(orders, cert)
    elif cert.lemma_tag == TAG_RATIONAL_KERNEL:
        ok = _verify_rational_kernel(orders, cert, scan_box)
    elif cert.lemma_tag == TAG_SMALL_VOLUME:
        ok = _verify_small_volume(orders, cert)
    elif cert.lemma_tag == TAG_DISCRETE_BASE:
        ok = _verify_discrete_base(orders, cert)
    else:
        raise MalformedCertificateError(f"unknown lemma tag {cert.lemma_tag!r}")
    if not ok:
        return False
    return scan_box_empty(orders, cert.constraints.bounds, _sanity_box(m, scan_box))


def scan_box_empty(
    orders: list[OrderSpec],
    bounds: tuple[tuple[IntVec | None, IntVec | None], ...],
    box: int,
) -> bool:
    return scan_box(orders, bounds, box) is None
