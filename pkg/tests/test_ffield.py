import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem

from fixerlab.ffield import (
    FFElem,
    NoSolutionError,
    conway_polynomial,
    field_arith,
    fixed_degree,
    frobenius,
    get_field,
    hilbert90_additive,
    hilbert90_multiplicative,
    rel_norm,
    rel_trace,
    solve_semilinear,
    subfield_membership,
)


def sympy_mul(ctx, a, b):
    """Multiply codes through sympy's polynomial arithmetic over GF(p)."""
    p, f = ctx.p, ctx.f
    da = [int(x) for x in ctx.digits[a]][::-1]
    db = [int(x) for x in ctx.digits[b]][::-1]
    mod = list(ctx.poly)[::-1]
    r = gf_rem(gf_mul(da, db, p, ZZ), mod, p, ZZ)
    r = [int(x) % p for x in r][::-1] + [0] * f
    return ctx.encode(r[:f])


def test_conway_polynomials_are_irreducible():
    for p, f in [(2, 1), (2, 6), (2, 7), (3, 3), (3, 4), (5, 2), (7, 2), (13, 2), (2, 16)]:
        poly = conway_polynomial(p, f)
        assert gf_irreducible_p([int(c) for c in poly][::-1], p, ZZ)


def test_known_conway_polynomials():
    # x^2 + x + 1, x^3 + x + 1, x^2 + 2x + 2 (lowest degree first)
    assert conway_polynomial(2, 2) == (1, 1, 1)
    assert conway_polynomial(2, 3) == (1, 1, 0, 1)
    assert conway_polynomial(3, 2) == (2, 2, 1)


def test_multiplication_matches_sympy(field):
    rng = range(field.q) if field.q <= 32 else range(0, field.q, 7)
    for a in rng:
        for b in range(0, field.q, 3):
            assert field.mul(a, b) == sympy_mul(field, a, b)


def test_field_axioms_exhaustive_small():
    ctx = get_field(9)
    els = list(range(9))
    for a, b, c in itertools.product(els, repeat=3):
        assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
    for a in els[1:]:
        assert ctx.mul(a, ctx.inv(a)) == 1


def test_gen_is_primitive(field):
    assert len({field.pow(field.gen, k) for k in range(field.q - 1)}) == field.q - 1


def test_frobenius_is_automorphism(field):
    for a in range(0, field.q, max(1, field.q // 40)):
        for b in range(0, field.q, max(1, field.q // 20)):
            assert field.frob(field.mul(a, b), 1) == field.mul(field.frob(a, 1), field.frob(b, 1))
            assert field.frob(field.add(a, b), 1) == field.add(field.frob(a, 1), field.frob(b, 1))
        assert field.frob(a, field.f) == a


def test_field_arith_errors():
    x = get_field(4)(2)
    with pytest.raises(ZeroDivisionError):
        field_arith(x, get_field(4)(0), "div")
    with pytest.raises(Exception):
        field_arith(x, get_field(8)(2), "add")
    assert field_arith(x, None, "pow", k=3) == get_field(4)(1)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27, 32, 49, 64, 81, 125, 243, 256, 343, 512, 625, 729])
def test_rel_trace_surjective_and_image_law(q):
    ctx = get_field(q)
    for f1 in [d for d in range(1, ctx.f + 1) if ctx.f % d == 0]:
        images = {rel_trace(FFElem(ctx, a), f1).code for a in range(q)}
        sub = set(ctx.subfield_codes(f1))
        assert images == sub  # onto the subfield
        # each fibre has the same size q / q1
        counts = {}
        for a in range(q):
            t = rel_trace(FFElem(ctx, a), f1).code
            counts[t] = counts.get(t, 0) + 1
        assert set(counts.values()) == {q // ctx.p**f1}


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27, 64])
def test_norm_is_multiplicative_onto_subfield(q):
    ctx = get_field(q)
    for f1 in [d for d in range(1, ctx.f + 1) if ctx.f % d == 0]:
        nz = {rel_norm(FFElem(ctx, a), f1).code for a in range(1, q)}
        assert nz == set(ctx.subfield_codes(f1)) - {0}


def test_subfield_membership_example():
    ctx = get_field(16)
    assert sorted(c for c in range(16) if subfield_membership(FFElem(ctx, c), 2)) == sorted(ctx.subfield_codes(2))


@pytest.mark.parametrize("q,i", [(8, 1), (16, 1), (16, 2), (27, 1), (64, 2), (64, 3), (4096, 5)])
def test_hilbert90_additive(q, i):
    ctx = get_field(q)
    d = fixed_degree(ctx.f, i)
    for b in range(0, q, max(1, q // 64)):
        x = FFElem(ctx, b)
        if rel_trace(x, d):
            with pytest.raises(NoSolutionError):
                hilbert90_additive(x, i)
        else:
            c = hilbert90_additive(x, i)
            assert frobenius(c, -i) - c == x


@pytest.mark.parametrize("q,i", [(8, 1), (16, 2), (27, 1), (64, 3), (4096, 4)])
def test_hilbert90_multiplicative(q, i):
    ctx = get_field(q)
    d = fixed_degree(ctx.f, i)
    for lam in range(1, q, max(1, q // 64)):
        x = FFElem(ctx, lam)
        if rel_norm(x, d) != ctx.one:
            with pytest.raises(NoSolutionError):
                hilbert90_multiplicative(x, i)
        else:
            mu = hilbert90_multiplicative(x, i)
            assert frobenius(mu, -i) / mu == x


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([16, 27, 64, 81, 128]), st.data())
def test_solve_semilinear(q, data):
    ctx = get_field(q)
    u = FFElem(ctx, data.draw(st.integers(0, q - 1)))
    v = FFElem(ctx, data.draw(st.integers(0, q - 1)))
    k = data.draw(st.integers(0, ctx.f - 1))
    c0 = FFElem(ctx, data.draw(st.integers(0, q - 1)))
    rhs = u * c0 + v * frobenius(c0, k)
    c = solve_semilinear(u, v, k, rhs)
    assert c is not None and u * c + v * frobenius(c, k) == rhs


def trace_image_cases(max_q=729):
    for q in range(4, max_q + 1):
        try:
            ctx = get_field(q)
        except ValueError:
            continue
        if ctx.f == 1:
            continue
        for f0 in range(1, ctx.f):
            r = ctx.f // f0
            if ctx.f % f0 or any(r % d == 0 for d in range(2, r)):
                continue
            for f1 in [d for d in range(1, ctx.f + 1) if ctx.f % d == 0]:
                yield ctx, f0, r, f1


def test_trace_of_a_subfield_image_law():
    import math

    seen = 0
    for ctx, f0, r, f1 in trace_image_cases():
        image = {rel_trace(FFElem(ctx, a), f1).code for a in ctx.subfield_codes(f0)}
        if f0 % f1 == 0 and r == ctx.p:
            want = {0}
        else:
            want = set(ctx.subfield_codes(math.gcd(f0, f1)))
        assert image == want, (ctx.q, f0, f1)
        seen += 1
    assert seen > 30
