import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from primline import field as fld
from primline.field import ZERO, FieldBudgetError, FieldCacheError


# Naive polynomial arithmetic mod the field's modulus, as an oracle
# independent of the log tables.  Polynomials are lists, lowest degree first.

def poly_mul(ctx, a, b):
    p, f, d = ctx.p, list(ctx.modulus), ctx.degree
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for i in range(d + 1):
                prod[k - d + i] = (prod[k - d + i] - c * f[i]) % p
    return prod[:d]


def vec(ctx, x):
    return [0] * ctx.degree if x == ZERO else ctx.unpack(int(ctx.exp[x]))


def test_build_field_examples(gf):
    ctx = gf(3, 3)
    assert (ctx.order, ctx.tau, ctx.R) == (27, 13, 26)
    ctx = gf(2, 4)
    assert (ctx.order, ctx.R) == (16, 15)


def test_build_field_121_cubed():
    ctx = fld.build_field(11, 2, 3)
    assert ctx.q == 121 and ctx.order == 121**3


def test_memory_budget_rejects_large_fields():
    with pytest.raises(FieldBudgetError):
        fld.build_field(101, 1, 3, max_order=10**5)


def test_first_primitive_polynomial_is_lexicographic():
    assert fld.find_primitive_polynomial(2, 3) == [1, 1, 0, 1]  # x^3 + x + 1
    assert fld.find_primitive_polynomial(2, 4) == [1, 1, 0, 0, 1]  # x^4 + x + 1


@pytest.mark.parametrize("q,n", [(2, 3), (3, 3), (4, 3), (5, 3), (2, 4), (3, 4), (4, 4)])
def test_modulus_primitive_and_tables_consistent(gf, q, n):
    ctx = gf(q, n)
    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(ctx.modulus)), x, modulus=ctx.p)
    assert poly.is_irreducible
    # exp[k+1] = omega * exp[k]
    omega = [0, 1] + [0] * (ctx.degree - 2)
    cur = [1] + [0] * (ctx.degree - 1)
    seen = set()
    for k in range(ctx.N):
        assert ctx.unpack(int(ctx.exp[k])) == cur
        assert int(ctx.log[ctx.pack(cur)]) == k
        seen.add(tuple(cur))
        cur = poly_mul(ctx, cur, omega)
    assert len(seen) == ctx.N  # omega has full order
    assert cur == [1] + [0] * (ctx.degree - 1)


@pytest.mark.parametrize("q,n", [(3, 3), (4, 3), (5, 3), (2, 4), (3, 4)])
def test_distributivity_random_triples(gf, q, n):
    ctx = gf(q, n)
    rng = np.random.default_rng(q * 10 + n)
    elems = np.arange(-1, ctx.N)
    for x, y, z in rng.choice(elems, size=(2000, 3)):
        x, y, z = int(x), int(y), int(z)
        lhs = fld.mul(ctx, x, fld.add(ctx, y, z))
        rhs = fld.add(ctx, fld.mul(ctx, x, y), fld.mul(ctx, x, z))
        assert lhs == rhs
        # addition agrees with coefficient-wise addition
        s = [(a + b) % ctx.p for a, b in zip(vec(ctx, y), vec(ctx, z))]
        assert vec(ctx, fld.add(ctx, y, z)) == s


def test_scalar_identities(gf):
    ctx = gf(5, 3)
    for x in range(-1, ctx.N, 7):
        assert fld.add(ctx, x, ZERO) == x
        assert fld.add(ctx, x, fld.neg(ctx, x)) == ZERO
        assert fld.sub(ctx, x, x) == ZERO
        if x != ZERO:
            assert fld.mul(ctx, x, fld.inv(ctx, x)) == 0
            assert fld.power(ctx, x, 3) == fld.mul(ctx, x, fld.mul(ctx, x, x))
    assert fld.mul(ctx, 10, 20) == 30
    with pytest.raises(ZeroDivisionError):
        fld.inv(ctx, ZERO)


def test_affine_round_trip(gf):
    ctx = gf(3, 3)
    assert fld.from_affine(ctx, [0, 0, 0]) == ZERO
    assert fld.from_affine(ctx, [0, 1, 0]) == 1
    assert fld.from_affine(ctx, [0, 0, 1]) == 0
    for x in range(-1, ctx.N):
        assert fld.from_affine(ctx, fld.to_affine(ctx, x)) == x


def test_primitivity_examples(gf):
    ctx = gf(3, 3)
    assert not fld.is_primitive(ctx, ZERO)
    assert not fld.is_primitive(ctx, 0)
    assert fld.is_primitive(ctx, 1)
    assert not fld.is_primitive(ctx, 13)
    assert not fld.generates(ctx, ZERO)
    assert fld.generates(ctx, 1)
    assert not fld.generates(ctx, 13)


@pytest.mark.parametrize("q,n", [(2, 3), (3, 3), (7, 3), (4, 4), (16, 4), (2, 20)])
def test_primitive_count_is_phi(gf, q, n):
    ctx = gf(q, n) if q**n < 2**20 else fld.build_field(2, 1, 20)
    k = np.arange(ctx.N)
    count = int(ctx.primitive_mask()[k % ctx.R].sum())
    assert count == sympy.totient(ctx.N)
    assert count == sum(1 for j in range(ctx.N) if math.gcd(j, ctx.N) == 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("n", [3, 4])
def test_generating_elements_count(gf, q, n):
    ctx = gf(q, n)
    allx = np.arange(-1, ctx.N)
    non = int((~fld.generates_mask(ctx, allx)).sum())
    assert non == (q if n == 3 else q * q)
    assert all(fld.generates(ctx, int(x)) == bool(g) for x, g in zip(allx, fld.generates_mask(ctx, allx)))


@pytest.mark.parametrize("q,n", [(4, 3), (9, 3), (3, 4)])
def test_subfield_closed(gf, q, n):
    ctx = gf(q, n)
    fq = ctx.fq_elements()
    assert len(fq) == q and len(set(fq)) == q
    s = set(fq)
    for x in fq:
        for y in fq:
            assert fld.add(ctx, x, y) in s
            assert fld.mul(ctx, x, y) in s
        if x != ZERO:
            assert fld.inv(ctx, x) in s
    # F_q elements are the ones fixed by the Frobenius x -> x^q
    assert all(fld.power(ctx, x, q) == x for x in fq)


def test_add_logs_matches_scalar(gf):
    ctx = gf(7, 3)
    rng = np.random.default_rng(0)
    x = rng.integers(-1, ctx.N, size=500)
    y = rng.integers(-1, ctx.N, size=500)
    got = ctx.add_logs(x, y)
    assert [int(v) for v in got] == [fld.add(ctx, int(a), int(b)) for a, b in zip(x, y)]


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(2, 3), (3, 3), (4, 3), (5, 3), (2, 4), (3, 4)]), st.data())
def test_field_axioms_property(qn, data):
    from conftest import cached_field

    ctx = cached_field(*qn)
    el = st.integers(min_value=-1, max_value=ctx.N - 1)
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert fld.add(ctx, x, y) == fld.add(ctx, y, x)
    assert fld.add(ctx, fld.add(ctx, x, y), z) == fld.add(ctx, x, fld.add(ctx, y, z))
    assert fld.mul(ctx, fld.mul(ctx, x, y), z) == fld.mul(ctx, x, fld.mul(ctx, y, z))


def test_cache_round_trip(tmp_path, gf):
    ctx = gf(5, 3)
    path = tmp_path / "f.bin"
    fld.save_field(ctx, path)
    back = fld.load_field(path)
    assert back.modulus == ctx.modulus
    assert np.array_equal(back.exp, ctx.exp)
    assert np.array_equal(back.zech, ctx.zech)
    # build_field with a cache dir writes then reuses the same tables
    a = fld.build_field(3, 1, 3, cache_dir=tmp_path)
    b = fld.build_field(3, 1, 3, cache_dir=tmp_path)
    assert np.array_equal(a.log, b.log)


def test_corrupt_cache_rejected(tmp_path, gf):
    ctx = gf(3, 3)
    path = tmp_path / "f.bin"
    fld.save_field(ctx, path)
    raw = bytearray(path.read_bytes())
    raw[-4:] = (12345).to_bytes(4, "little")
    path.write_bytes(bytes(raw))
    with pytest.raises(FieldCacheError):
        fld.load_field(path)
    path.write_bytes(b"garbage" * 10)
    with pytest.raises(FieldCacheError):
        fld.load_field(path)


def test_build_field_replaces_corrupt_cache(tmp_path):
    fld.build_field(2, 1, 3, cache_dir=tmp_path)
    path = tmp_path / "field_2_1_3.bin"
    path.write_bytes(path.read_bytes()[:-4])
    ctx = fld.build_field(2, 1, 3, cache_dir=tmp_path)
    assert ctx.order == 8
    assert fld.load_field(path).modulus == ctx.modulus
