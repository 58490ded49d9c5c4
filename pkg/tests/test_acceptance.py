"""End-to-end acceptance gate.

One test per criterion; each prints a single pass/fail line and enforces
its runtime budget. Run with `pytest tests/test_acceptance.py -v -s`.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from multiorder.field import RadicalBasis, fs_row_dependency, q_linear_independent
from multiorder.finite import FiniteNOrder, amalgamate, embed, from_pattern, induced, pattern_of
from multiorder.genericity import (
    IntervalConstraint,
    extension_property_test,
    from_matrix,
    satisfies,
    witness,
    witness_brute,
)
from multiorder.matrix import build, verify
from multiorder.orders import Cmp, Cone, LinearForm, OrderSpec
from multiorder.refuter import (
    TAG_DEPENDENT,
    TAG_DISCRETE_BASE,
    TAG_RATIONAL_KERNEL,
    TAG_SMALL_VOLUME,
    Certificate,
    refute,
    verify_certificate,
)

B = RadicalBasis((2, 3, 5, 7))


def timed(name, limit_s, start, ok=True):
    elapsed = time.monotonic() - start
    verdict = "PASS" if ok and elapsed < limit_s else "FAIL"
    print(f"{name}: {verdict} ({elapsed:.1f}s, budget {limit_s}s)")
    assert ok
    assert elapsed < limit_s


def lf(*coeffs):
    return LinearForm(tuple(coeffs))


def order_family():
    """Ten total orders on Z^m, m in {2,3,4}: six dense, four recursive."""
    one, z = B.one, B.zero
    s2, s3, s5, s7 = B.sqrt(2), B.sqrt(3), B.sqrt(5), B.sqrt(7)
    dense = [
        OrderSpec(2, (lf(one, s2),)),
        OrderSpec(2, (lf(s3, one),)),
        OrderSpec(3, (lf(one, s2, s3),)),
        OrderSpec(3, (lf(s5, one + s2, s3),)),
        OrderSpec(4, (lf(one, s2, s3, s5),)),
        OrderSpec(4, (lf(s7, one, s2 + s3, s5),)),
    ]
    recursive = [
        OrderSpec(2, (lf(one, one), lf(z, one))),
        OrderSpec(3, (lf(one, z, z), lf(z, one, s2))),
        OrderSpec(3, (lf(one, one, one), lf(one, s2, z), lf(z, z, one))),
        OrderSpec(4, (lf(one, z, z, z), lf(z, one, z, z), lf(z, z, one, s2))),
    ]
    return dense + recursive


def rand_vec(rng, m, spread=8):
    return tuple(rng.randint(-spread, spread) for _ in range(m))


def test_criterion_1_order_axioms():
    start = time.monotonic()
    rng = random.Random(1)
    for o in order_family():
        m = o.rank
        for _ in range(1000):
            x, y, z = (rand_vec(rng, m) for _ in range(3))
            cxy, cyx = o.compare(x, y), o.compare(y, x)
            if x == y:
                assert cxy == cyx == Cmp.EQUAL
            else:
                assert {cxy, cyx} == {Cmp.LESS, Cmp.GREATER}
            assert o.compare(x, x) == Cmp.EQUAL
            if o.compare(x, y) == Cmp.LESS and o.compare(y, z) == Cmp.LESS:
                assert o.compare(x, z) == Cmp.LESS
            g = rand_vec(rng, m)
            xg = tuple(a + b for a, b in zip(x, g))
            yg = tuple(a + b for a, b in zip(y, g))
            assert o.compare(xg, yg) == cxy
    timed("criterion 1 (order axioms)", 10, start)


def test_criterion_2_positive_cone():
    start = time.monotonic()
    rng = random.Random(2)
    for o in order_family():
        m = o.rank
        positives = []
        for _ in range(1000):
            x = rand_vec(rng, m)
            side = o.cone_membership(x)
            neg_side = o.cone_membership(tuple(-v for v in x))
            if x == (0,) * m:
                assert side == neg_side == Cone.ZERO
            else:
                assert {side, neg_side} == {Cone.POSITIVE, Cone.NEGATIVE}
            if side == Cone.POSITIVE:
                positives.append(x)
        for _ in range(1000):
            x, y = rng.choice(positives), rng.choice(positives)
            s = tuple(a + b for a, b in zip(x, y))
            assert o.cone_membership(s) == Cone.POSITIVE
        if o.is_dense():
            for x in positives[:100]:
                q, r = o.cone_split(x, 64)
                assert o.cone_membership(q) == Cone.POSITIVE
                assert o.cone_membership(r) == Cone.POSITIVE
                assert tuple(a + b for a, b in zip(q, r)) == x
    timed("criterion 2 (positive cone)", 30, start)


def test_criterion_3_extension_property():
    start = time.monotonic()
    for m in (2, 3, 4):
        M = from_matrix(build(m, 0))
        assert (M.rank, M.n) == (m, m - 1)
        rep = extension_property_test(M, k=4, trials=200, box=8, rng_seed=m)
        assert rep.trials == 200
        assert rep.passed, rep.failures
    timed("criterion 3 (extension property)", 120, start)


def random_finite_constraint(M, rng, spread=5, min_width=1.0):
    bounds = []
    for o in M.orders:
        f = o.leading.floats()
        while True:
            x, y = rand_vec(rng, M.rank, spread), rand_vec(rng, M.rank, spread)
            c = o.compare(x, y)
            if c == Cmp.EQUAL:
                continue
            lo, hi = (x, y) if c == Cmp.LESS else (y, x)
            width = sum(fc * (h - l) for fc, l, h in zip(f, lo, hi))
            if width >= min_width:
                bounds.append((lo, hi))
                break
    return IntervalConstraint(tuple(bounds))


def test_criterion_4_backend_equivalence():
    start = time.monotonic()
    for m in (2, 3, 4):
        M = from_matrix(build(m, 0))
        rng = random.Random(40 + m)
        for _ in range(100):
            cons = random_finite_constraint(M, rng)
            brute = witness_brute(M, cons, 50)
            if brute is not None:
                z = witness(M, cons)
                assert satisfies(M, cons, z)
    timed("criterion 4 (backend equivalence)", 120, start)


def dense_of(coeffs):
    return OrderSpec(len(coeffs), (LinearForm(tuple(coeffs)),))


def random_dense_row(rng, m, radicals):
    while True:
        coeffs = [B.rational(Fraction(rng.randint(1, 3)))]
        for d in radicals[: m - 1]:
            coeffs.append(B.sqrt(d, Fraction(rng.randint(1, 3), rng.randint(1, 2))))
        rng.shuffle(coeffs)
        if q_linear_independent(coeffs):
            return tuple(coeffs)


def gen_discrete_base(rng):
    q = Fraction(rng.randint(1, 9), rng.randint(1, 4)) * rng.choice((1, -1))
    return [OrderSpec(1, (lf(B.rational(q)),))]


def gen_dependent(rng, m):
    pool = [(2,), (3,), (5,), (7,)] if m == 2 else [(2, 3), (5, 7), (2, 7)]
    rows = [random_dense_row(rng, m, rads) for rads in rng.sample(pool, m - 1)]
    mult = B.scalar({rng.choice((2, 3)): Fraction(rng.randint(1, 3))})
    rows.append(tuple(mult * c for c in rows[0]))
    rng.shuffle(rows)
    return [dense_of(r) for r in rows]


def gen_rational_kernel(rng, m):
    lead = lf(*(B.rational(Fraction(rng.randint(1, 3))) for _ in range(m)))
    tie = lf(*random_dense_row(rng, m, (2, 3, 5)))
    first = OrderSpec(m, (lead, tie))
    pool = [(2,), (3,), (5,), (7,)] if m == 2 else [(2, 3), (5, 7), (2, 7)]
    rest = [
        dense_of(random_dense_row(rng, m, rads))
        for rads in rng.sample(pool, m - 1)
    ]
    return [first] + rest


def gen_small_volume(rng, m):
    pool = {2: [(2,), (3,), (5,), (7,)], 3: [(2, 3), (5, 7), (10, 21)]}[m]
    while True:
        rows = [random_dense_row(rng, m, rads) for rads in rng.sample(pool, m)]
        if fs_row_dependency(rows) is None:
            return [dense_of(r) for r in rows]


def tampered(cert):
    (first, *rest) = cert.constraints.bounds
    lo, hi = first
    return Certificate(
        IntervalConstraint(((hi, lo), *rest)), cert.lemma_tag, cert.evidence
    )


def test_criterion_5_refutation_certificates():
    start = time.monotonic()
    cases = [(1, TAG_DISCRETE_BASE, lambda rng, m: gen_discrete_base(rng))]
    for m in (2, 3):
        cases += [
            (m, TAG_DEPENDENT, gen_dependent),
            (m, TAG_RATIONAL_KERNEL, gen_rational_kernel),
            (m, TAG_SMALL_VOLUME, gen_small_volume),
        ]
    for idx, (m, tag, gen) in enumerate(cases):
        rng = random.Random(500 + idx)
        tamper_checked = False
        for _ in range(20):
            orders = gen(rng, m)
            cert = refute(orders)
            assert cert.lemma_tag == tag, (m, tag, cert.lemma_tag)
            assert verify_certificate(orders, cert)
            if not tamper_checked:
                assert not verify_certificate(orders, tampered(cert))
                tamper_checked = True
    timed("criterion 5 (refutation certificates)", 300, start)


def test_criterion_6_matrix_builder():
    start = time.monotonic()
    for m in (2, 3, 4, 5):
        for seed in range(10):
            A = build(m, seed)
            rep = verify(A)
            assert rep.invertible and rep.last_row_orthogonal
            assert all(rep.rows_q_independent)
    A = build(2, 0)
    b = A.basis
    assert A.rows[0].coeffs == (b.one, b.sqrt(2))
    assert A.rows[1].coeffs == (-b.sqrt(2), b.one)
    timed("criterion 6 (matrix builder)", 60, start)


def random_norder(rng, k, n):
    orders = [tuple(range(k))] + [
        tuple(rng.sample(range(k), k)) for _ in range(n - 1)
    ]
    return FiniteNOrder(k, n, tuple(orders))


def test_criterion_7_age_completeness():
    start = time.monotonic()
    m3 = from_matrix(build(3, 0))
    for perm in itertools.permutations((1, 2, 3)):
        s = from_pattern(perm)
        e = embed(s, m3)
        t = induced(m3, list(e.points))
        assert t.isomorphic(s)
        assert pattern_of(t) == perm
    rng = random.Random(7)
    for _ in range(20):
        s = random_norder(rng, 5, 2)
        e = embed(s, m3)
        assert induced(m3, list(e.points)).isomorphic(s)
    m4 = from_matrix(build(4, 0))
    for _ in range(20):
        s = random_norder(rng, 4, 3)
        e = embed(s, m4)
        assert induced(m4, list(e.points)).isomorphic(s)
    timed("criterion 7 (age completeness)", 120, start)


def random_extension(rng, a, extra):
    k = a.k + extra
    new_labels = list(range(a.k, k))
    orders = []
    for i in range(a.n):
        seq = list(a.orders[i])
        for x in new_labels:
            seq.insert(rng.randint(0, len(seq)), x)
        orders.append(tuple(seq))
    return FiniteNOrder(k, a.n, tuple(orders)), tuple(range(a.k))


def test_criterion_8_strong_amalgamation():
    start = time.monotonic()
    rng = random.Random(8)
    hosts = {n: from_matrix(build(n + 1, 0)) for n in (1, 2, 3)}
    for _ in range(200):
        n = rng.randint(1, 3)
        a = random_norder(rng, rng.randint(1, 3), n)
        b1, f1 = random_extension(rng, a, rng.randint(1, 2))
        b2, f2 = random_extension(rng, a, rng.randint(1, 2))
        c, g1, g2 = amalgamate(a, b1, b2, f1, f2)
        assert c.k == b1.k + b2.k - a.k
        for lab in range(a.k):
            assert g1[f1[lab]] == g2[f2[lab]]
        for i in range(n):
            r1 = [c.orders[i].index(g1[x]) for x in b1.orders[i]]
            r2 = [c.orders[i].index(g2[x]) for x in b2.orders[i]]
            assert r1 == sorted(r1) and r2 == sorted(r2)
        M = hosts[n]
        e = embed(c, M, probe_budget=10**7)
        assert induced(M, list(e.points)).isomorphic(c)
    timed("criterion 8 (strong amalgamation)", 60, start)
