import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unicusp.classification import case_by_id, template_poly
from unicusp.curves import canonical_model, models_equivalent
from unicusp.errors import InvalidBlockParams, UnsupportedFamily
from unicusp.exactalg import Poly
from unicusp.families import (
    OneBlockParams,
    TwoBlockParams,
    a_to_b,
    b_from_curve,
    b_to_a,
    build,
    build_one_block,
    build_two_block,
    classify,
    classify_one_block,
    classify_two_block,
    closed_form_canonical,
    params_from_json,
)
from unicusp.semigroups import eta, parse_semigroup
from unicusp.sheaves import certify

t = Poly.t()
F = Fraction
coeff = st.integers(-50, 50).filter(bool).map(Fraction)


def nz(rng):
    return F(rng.choice([x for x in range(-60, 61) if x]))


def table_model(cid, values):
    alt = case_by_id(cid).alternatives[0]
    return [template_poly(e, values) for e in alt.model]


def test_build_one_block_examples():
    a1, a2, a3, a4 = F(2), F(-3), F(5), F(7)
    c = build_one_block(OneBlockParams(4, 2, 2, [a1, a2, a3, a4]))
    assert list(c.coords) == [Poly([1, a1, a2, a3]), t**4 + a4 * t**6, t**5, t**10, t**11]
    c = build_one_block(OneBlockParams(5, 3, 1, [a1, a2, a3]))
    assert list(c.coords) == [Poly([1, a1, a2, a3]), t**5, t**6, t**7, t**9, t**10]
    c = build_one_block(OneBlockParams(5, 3, 2))
    assert all(len([x for x in p.coeffs if x]) == 1 for p in c.coords)
    assert c.semigroup == OneBlockParams(5, 3, 2).semigroup()


def test_build_two_block_examples():
    a1, a2, a3, a4 = F(2), F(-3), F(5), F(7)
    c = build_two_block(TwoBlockParams(4, 2, 1, [a1, a2, a3]))
    assert list(c.coords) == [Poly([1, a1, a2]), t**4 + a3 * t**5, t**6, t**9, t**10, t**11]
    c = build_two_block(TwoBlockParams(3, 2, 2, [2 * a4, a2, a3, a4]))
    assert list(c.coords) == [Poly([1, 2 * a4, a2, a3]), t**3 + a4 * t**4, t**8, t**10, t**11]
    c = build_two_block(TwoBlockParams(3, 2, 2))
    assert list(c.coords) == [Poly([1]), t**3, t**8, t**10, t**11]
    c = build_two_block(TwoBlockParams(5, 3, 1, [a1, a2, a3, a4], branch=2))
    assert list(c.coords) == [Poly([1, a1, a2, 0, a3]), t**5 + a1 * t**6, t**7, t**8, t**10, t**11]


def test_invalid_params():
    with pytest.raises(InvalidBlockParams):
        build_one_block(OneBlockParams(3, 2, 2, [1, 1, 1, 1]))
    with pytest.raises(InvalidBlockParams):
        build_one_block(OneBlockParams(4, 2, 2, [1, 1]))
    with pytest.raises(InvalidBlockParams):
        build_two_block(TwoBlockParams(4, 1, 1, [1, 1]))
    with pytest.raises(InvalidBlockParams):
        params_from_json({"family": "three_block", "alpha": 4, "ell": 2, "m": 1})
    with pytest.raises(InvalidBlockParams):
        params_from_json({"family": "one_block", "alpha": "x", "ell": 2, "m": 1})


def test_params_json_round_trip():
    p = TwoBlockParams(5, 3, 1, [F(1, 2), 3, 4, 5], branch=2)
    assert params_from_json(p.to_json()) == p
    q = OneBlockParams(4, 2, 2, [1, 2, 3, 4])
    assert params_from_json(q.to_json()) == q


def test_a_to_b_examples():
    a1 = F(9)
    b = a_to_b(OneBlockParams(4, 2, 2, [a1, 0, 0, 0]))
    assert b[1][0] == -a1
    assert a_to_b(OneBlockParams(5, 3, 2)) == [[0, 0]] * 3
    c = F(-4)
    assert b_to_a([[0, 0], [c, 0]], 4, 2, 2)[0] == -c
    assert b_to_a([[0, 0]] * 3, 5, 3, 2) == [0] * 6


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(1, 4), st.integers(1, 3), st.data())
def test_a_to_b_matches_ring_and_round_trips(alpha, ell, m, data):
    if alpha < ell + m:
        return
    p = OneBlockParams(alpha, ell, m, [data.draw(coeff) for _ in range(ell * m)])
    b = a_to_b(p)
    assert b == b_from_curve(build_one_block(p), p)
    assert b_to_a(b, alpha, ell, m) == list(p.a)
    assert a_to_b(OneBlockParams(alpha, ell, m, b_to_a(b, alpha, ell, m))) == b


def test_closed_form_examples():
    a1, a2, a3, a4 = F(3), F(-2), F(7), F(5)
    assert closed_form_canonical(OneBlockParams(3, 1, 1, [a1])) == [Poly([1, a1]), t**2, t**3]
    assert closed_form_canonical(OneBlockParams(3, 1, 2, [a1, a2])) == [Poly([1, a1, a2]), Poly([0, 1, a1]), t**3, t**4]
    p = OneBlockParams(4, 2, 2, [a1, a2, a3, a4])
    values = {"a1": a1, "a2": a2, "a3": a3, "a4": a4}
    assert models_equivalent(closed_form_canonical(p), table_model("vi", values))
    with pytest.raises(UnsupportedFamily):
        closed_form_canonical(OneBlockParams(6, 2, 3, [1] * 6))


@pytest.mark.parametrize(
    "alpha,ell,m", [(a, l, m) for a in range(2, 8) for l in range(1, 5) for m in range(1, 4)
                    if a >= l + m and (m == 1 or l == 1 or m == 2)]
)
def test_closed_form_one_block(alpha, ell, m):
    rng = random.Random(f"{alpha}{ell}{m}")
    p = OneBlockParams(alpha, ell, m, [nz(rng) for _ in range(ell * m)])
    c = build_one_block(p)
    if c.genus == 0:
        return
    assert models_equivalent(canonical_model(c).coords, closed_form_canonical(p))


@pytest.mark.parametrize("alpha,ell,m,branch", [(5, 2, 1, 1), (5, 2, 1, 2), (5, 3, 1, 1), (5, 3, 1, 2), (6, 2, 2, 1),
                                                  (6, 3, 2, 2), (7, 4, 2, 1), (7, 2, 3, 2)])
def test_closed_form_two_block(alpha, ell, m, branch):
    rng = random.Random(f"{alpha}{ell}{m}{branch}")
    probe = TwoBlockParams(alpha, ell, m, branch=branch)
    p = TwoBlockParams(alpha, ell, m, [nz(rng) for _ in range(probe.u + probe.v)], branch)
    assert models_equivalent(canonical_model(build(p)).coords, closed_form_canonical(p))


def test_classify_one_block_examples():
    a1, a2, a3 = F(1), F(2), F(3)
    r = classify_one_block(OneBlockParams(4, 2, 2, [a1, a2, a3, 0]))
    assert (r.d_b, r.d_f) == (3, 4) and not r.failures
    r = classify_one_block(OneBlockParams(4, 2, 2, [a1, a2, a3, F(6)]))
    assert (r.d_b, r.d_f) == (4, 4) and not r.failures
    r = classify_one_block(OneBlockParams(5, 3, 1, [a1, a2, a3]))
    assert (r.d_b, r.d_f) == (3, 5)
    with pytest.raises(UnsupportedFamily):
        classify_one_block(OneBlockParams(6, 2, 3, [1] * 6))


def test_classify_two_block_examples():
    r = classify_two_block(TwoBlockParams(4, 2, 1, [F(2), F(3), F(5)]))
    assert (r.d_b, r.d_f) == (3, 4) and not r.failures
    r = classify_two_block(TwoBlockParams(5, 3, 1, [F(2), F(3), F(5), F(-1)]))
    assert (r.d_b, r.d_f) == (4, 5) and not r.failures


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([(3, 1, 1), (4, 2, 1), (4, 2, 2), (5, 2, 2), (5, 3, 2), (5, 1, 3), (6, 3, 1)]), st.data())
def test_classification_certificates_hold(shape, data):
    alpha, ell, m = shape
    p = OneBlockParams(alpha, ell, m, [data.draw(coeff) for _ in range(ell * m)])
    r = classify(p)
    curve = build(p)
    assert eta(curve.semigroup) > 0 and r.d_b >= 3
    assert r.certificates["base_point_free"].degree == alpha
    certify(curve, r.certificates["base_point_free"].sheaf, (alpha, False))
    certify(curve, r.certificates["base_point"].sheaf, (r.d_b, True))


# ---------------------------------------------------------------------------
# row (xi): no base point free pencil of degree 3
# ---------------------------------------------------------------------------


def _series_div(num, den, n):
    out = []
    for k in range(n):
        x = (num[k] if k < len(num) else 0) - sum(out[j] * (den[k - j] if k - j < len(den) else 0) for j in range(k))
        out.append(F(x) / den[0])
    return out


def _mul(p, q, n):
    return [sum(p[i] * q[k - i] for i in range(k + 1)) for k in range(n)]


def _h4(F0, Fa, c):
    """[t^4] of t^3 / (u + c u^2) for u = Fa / F0, computed from scratch."""
    u = _series_div(Fa, F0, 8)
    s = [x + c * y for x, y in zip(u, _mul(u, u, 8))][3:]
    return _series_div([1], s, 5)[4]


@pytest.mark.parametrize("alt", [0, 1])
def test_xi_has_no_free_pencil_of_degree_three(alt):
    # A free pencil of degree 3 containing O is O<1, z> with z in O_P of
    # valuation 3 = alpha, and deg h + max(0, r + deg f - deg h) = 3 forces
    # z = t^3 / h with deg h <= 3.  Modulo t^8 the elements of O_P of
    # valuation 3 are multiples of u + c u^2, so h = t^3 / (u + c u^2) mod t^5
    # and its t^4 coefficient must vanish.  It does not depend on c.
    rng = random.Random(alt)
    for _ in range(5):
        a2, a3, a4 = nz(rng), nz(rng), nz(rng)
        if alt == 0:
            F0, Fa = [1, 2 * a4, a2, a3], [0, 0, 0, 1, a4]
        else:
            F0, Fa = [1, 0, a2, 0, a3], [0, 0, 0, 1]
        values = {_h4(F0, Fa, c) for c in (F(0), F(1), F(-7))}
        assert len(values) == 1 and values.pop() != 0


def test_xi_classification_reports_degree_four():
    a2, a3, a4 = F(5), F(-3), F(2)
    p = TwoBlockParams(3, 2, 2, [2 * a4, a2, a3, a4])
    r = classify_two_block(p)
    assert r.d_b == 4 and r.d_f == 4
    assert not r.failures
    assert any("inconsistent" in n for n in r.notes)
    certify(build(p), r.certificates["base_point_free"].sheaf, (4, False))


def test_semigroup_of_families():
    assert OneBlockParams(4, 2, 2).semigroup() == parse_semigroup("{0,4,5,8,->}")
    assert TwoBlockParams(4, 2, 1).semigroup() == parse_semigroup("{0,4,6,8,->}")


def test_xii_has_no_free_pencil_of_degree_three():
    # Same argument modulo t^9: valuation-3 elements of O_P are multiples of
    # u + c6 u^2 + c7 v with v = t^7 / F0, and h must satisfy h_4 = h_5 = 0.
    rng = random.Random(12)
    for _ in range(5):
        a1, a3, a4, a5 = nz(rng), nz(rng), nz(rng), nz(rng)
        a2 = (a1 - a4) ** 2 + 2 * a5
        F0, Fa = [1, a1, a2, a3], [0, 0, 0, 1, a4, a5]
        u = _series_div(Fa, F0, 9)
        v = _series_div([0] * 7 + [1], F0, 9)
        uu = _mul(u, u, 9)

        def tail(c6, c7):
            s = [x + c6 * y + c7 * z for x, y, z in zip(u, uu, v)][3:]
            h = _series_div([1], s, 6)
            return h[4], h[5]

        b = tail(0, 0)
        e6 = [x - y for x, y in zip(tail(1, 0), b)]
        e7 = [x - y for x, y in zip(tail(0, 1), b)]
        assert tail(2, -3) == tuple(b[i] + 2 * e6[i] - 3 * e7[i] for i in range(2))  # affine in c6, c7
        assert e6 == [0, 0] and e7[0] != 0
        # b + c7 e7 = 0 has no solution
        assert b[1] * e7[0] != b[0] * e7[1]
