import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpix.crypto import load_curve
from fpix.crypto.ec import (
    IDENTITY,
    TOY_CURVE,
    CurveParams,
    Point,
    decode_point,
    encode_point,
    inverse_mod,
    point_add,
    point_double,
    point_neg,
    scalar_mul,
)
from fpix.errors import CurveError

from oracles import INF, addition_table, curve_points, is_probable_prime, oracle_mul

C = TOY_CURVE
G = C.G


def to_point(P):
    return IDENTITY if P == INF else Point(*P)


TOY_POINTS, TOY_TABLE = addition_table(C.p, C.a, C.b)
POINTS = [to_point(P) for P in TOY_POINTS]


def test_toy_curve_has_19_points():
    assert len(TOY_POINTS) == 19


def test_hand_computed_examples():
    assert point_add(Point(5, 1), Point(6, 3), C) == Point(10, 6)
    assert point_double(Point(5, 1), C) == Point(6, 3)
    assert point_add(G, IDENTITY, C) == G
    assert point_double(IDENTITY, C) == IDENTITY
    assert scalar_mul(1, G, C) == G
    assert scalar_mul(19, G, C).is_identity
    assert scalar_mul(0, G, C).is_identity


def test_inverse_pairs_sum_to_identity():
    for P in POINTS[1:]:
        assert point_add(P, Point(P.x, C.p - P.y if P.y else 0), C).is_identity
        assert point_add(P, point_neg(P, C), C).is_identity


def test_two_torsion_doubles_to_identity():
    # y^2 = x^3 + 2x + 2 has no root over F_17, so use a curve with one
    curve = CurveParams("t", p=7, a=0, b=1, G=Point(6, 0), n=2)
    assert curve.contains(Point(6, 0))
    assert point_double(Point(6, 0), curve).is_identity


def test_addition_matches_brute_force_table():
    for (P, Q), R in TOY_TABLE.items():
        assert point_add(to_point(P), to_point(Q), C) == to_point(R)


def test_scalar_mul_matches_repeated_addition():
    for P in TOY_POINTS:
        for k in range(0, 2 * 19 + 1):
            assert scalar_mul(k, to_point(P), C) == to_point(oracle_mul(k, P, C.p, C.a))


def test_group_axioms_exhaustively():
    for P in POINTS:
        assert point_add(P, IDENTITY, C) == P
        assert scalar_mul(C.n, P, C).is_identity
        for Q in POINTS:
            assert point_add(P, Q, C) == point_add(Q, P, C)
    for P, Q, R in itertools.product(POINTS, repeat=3):
        assert point_add(point_add(P, Q, C), R, C) == point_add(P, point_add(Q, R, C), C)


def test_off_curve_operands_rejected():
    bad = Point(5, 2)
    for fn in (lambda: point_add(bad, G, C), lambda: point_double(bad, C),
               lambda: scalar_mul(3, bad, C), lambda: point_neg(bad, C),
               lambda: encode_point(bad, C)):
        with pytest.raises(CurveError):
            fn()
    with pytest.raises(ValueError):
        scalar_mul(-1, G, C)


def test_encode_decode_examples():
    assert encode_point(Point(5, 1), C) == bytes([0x04, 0x05, 0x01])
    assert encode_point(IDENTITY, C) == b"\x00"
    assert decode_point(b"\x00", C).is_identity
    # 2^2 = 4 but 5^3 + 2*5 + 2 = 132 = 13 mod 17
    with pytest.raises(CurveError, match="not on curve"):
        decode_point(bytes([0x04, 0x05, 0x02]), C)
    for bad in (b"", b"\x02\x05", b"\x04\x05", b"\x04\x05\x01\x00", b"\x03\x05\x01"):
        with pytest.raises(CurveError):
            decode_point(bad, C)


def test_encode_decode_roundtrip_all_points():
    for P in POINTS:
        assert decode_point(encode_point(P, C), C) == P


def test_inverse_mod():
    for k in range(1, 17):
        assert k * inverse_mod(k, 17) % 17 == 1
    assert inverse_mod(-3, 17) == inverse_mod(14, 17)
    with pytest.raises(ZeroDivisionError):
        inverse_mod(0, 17)


def test_curve_validation():
    C.validate()
    with pytest.raises(CurveError, match="singular"):
        CurveParams("s", p=17, a=0, b=0, G=Point(0, 0), n=19).validate()
    with pytest.raises(CurveError, match="base point"):
        CurveParams("g", p=17, a=2, b=2, G=Point(5, 2), n=19).validate()
    with pytest.raises(CurveError, match="n\\*G"):
        CurveParams("n", p=17, a=2, b=2, G=Point(5, 1), n=18).validate()


def test_p192_domain_parameters():
    P192 = load_curve("p192")
    assert P192.p == 2**192 - 2**64 - 1
    assert P192.a == P192.p - 3
    assert is_probable_prime(P192.p) and is_probable_prime(P192.n)
    assert P192.contains(P192.G)
    assert scalar_mul(P192.n, P192.G, P192).is_identity
    assert P192.coord_len == 24
    assert len(encode_point(P192.G, P192)) == 49


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_scalar_mul_is_a_homomorphism(j, k):
    assert point_add(scalar_mul(j, G, C), scalar_mul(k, G, C), C) == scalar_mul(j + k, G, C)
    assert scalar_mul(j, scalar_mul(k, G, C), C) == scalar_mul(j * k % 19, G, C)


@given(st.integers(1, 2**64), st.integers(1, 2**64))
def test_p192_diffie_hellman_agrees(d1, d2):
    P192 = load_curve("p192")
    Q1, Q2 = scalar_mul(d1, P192.G, P192), scalar_mul(d2, P192.G, P192)
    assert scalar_mul(d1, Q2, P192) == scalar_mul(d2, Q1, P192)
    assert P192.contains(Q1)


def test_oracle_enumeration_is_sound():
    # every enumerated point really is on the curve and the list has no duplicates
    pts = curve_points(17, 2, 2)
    assert len(set(pts)) == len(pts)
    assert all(C.contains(to_point(P)) for P in pts)
