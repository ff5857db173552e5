"""Short Weierstrass curves y^2 = x^3 + a*x + b over a prime field, affine coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..errors import CurveError


@dataclass(frozen=True)
class Point:
    """Affine curve point; ``x is None`` marks the identity (point at infinity)."""

    x: Optional[int] = None
    y: Optional[int] = None

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __repr__(self):
        return "Point(identity)" if self.is_identity else f"Point({self.x}, {self.y})"


IDENTITY = Point()


def inverse_mod(k: int, p: int) -> int:
    """Inverse of ``k`` modulo ``p`` by the extended Euclidean algorithm."""
    k %= p
    if k == 0:
        raise ZeroDivisionError("0 has no inverse modulo p")
    old_r, r = k, p
    old_s, s = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
    if old_r != 1:
        raise ZeroDivisionError(f"{k} is not invertible modulo {p}")
    return old_s % p


@dataclass(frozen=True)
class CurveParams:
    name: str
    p: int
    a: int
    b: int
    G: Point
    n: int
    h: int = 1

    @property
    def coord_len(self) -> int:
        """Bytes per encoded coordinate: ceil(bitlen(p) / 8)."""
        return (self.p.bit_length() + 7) // 8

    def contains(self, P: Point) -> bool:
        if P.is_identity:
            return True
        x, y = P.x, P.y
        if not (0 <= x < self.p and 0 <= y < self.p):
            return False
        return (y * y - (x * x * x + self.a * x + self.b)) % self.p == 0

    def validate(self) -> None:
        """Check non-singularity, base point membership and the order of G."""
        if self.p < 3:
            raise CurveError(f"{self.name}: modulus must be an odd prime")
        if not (0 <= self.a < self.p and 0 <= self.b < self.p):
            raise CurveError(f"{self.name}: coefficients must lie in [0, p)")
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise CurveError(f"{self.name}: curve is singular")
        if self.G.is_identity or not self.contains(self.G):
            raise CurveError(f"{self.name}: base point is not on the curve")
        if self.n < 2 or self.h < 1:
            raise CurveError(f"{self.name}: order and cofactor must be positive")
        if not scalar_mul(self.n, self.G, self).is_identity:
            raise CurveError(f"{self.name}: n*G is not the identity")

    def __str__(self):
        return self.name


TOY_CURVE = CurveParams(name="toy17", p=17, a=2, b=2, G=Point(5, 1), n=19, h=1)


def _check(P: Point, curve: CurveParams):
    if not curve.contains(P):
        raise CurveError(f"{P!r} is not on curve {curve.name}")


def point_neg(P: Point, curve: CurveParams) -> Point:
    _check(P, curve)
    if P.is_identity:
        return P
    return Point(P.x, (-P.y) % curve.p)


def _double(P, curve):
    if P.is_identity or P.y == 0:
        return IDENTITY
    p = curve.p
    lam = (3 * P.x * P.x + curve.a) * inverse_mod(2 * P.y, p) % p
    x3 = (lam * lam - 2 * P.x) % p
    return Point(x3, (lam * (P.x - x3) - P.y) % p)


def _add(P, Q, curve):
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    p = curve.p
    if P.x == Q.x:
        if (P.y + Q.y) % p == 0:
            return IDENTITY
        return _double(P, curve)
    lam = (Q.y - P.y) * inverse_mod(Q.x - P.x, p) % p
    x3 = (lam * lam - P.x - Q.x) % p
    return Point(x3, (lam * (P.x - x3) - P.y) % p)


def point_double(P: Point, curve: CurveParams) -> Point:
    _check(P, curve)
    return _double(P, curve)


def point_add(P: Point, Q: Point, curve: CurveParams) -> Point:
    _check(P, curve)
    _check(Q, curve)
    return _add(P, Q, curve)


def scalar_mul(k: int, P: Point, curve: CurveParams) -> Point:
    """``k * P`` by left-to-right double-and-add over the bits of ``k``."""
    if k < 0:
        raise ValueError("scalar must be non-negative")
    _check(P, curve)
    R = IDENTITY
    for bit in bin(k)[2:] if k else "":
        R = _double(R, curve)
        if bit == "1":
            R = _add(R, P, curve)
    return R


def encode_point(P: Point, curve: CurveParams) -> bytes:
    """``0x00`` for the identity, else ``0x04 || x || y`` big-endian, fixed width."""
    _check(P, curve)
    if P.is_identity:
        return b"\x00"
    L = curve.coord_len
    return b"\x04" + P.x.to_bytes(L, "big") + P.y.to_bytes(L, "big")


def decode_point(data: bytes, curve: CurveParams) -> Point:
    data = bytes(data)
    if data == b"\x00":
        return IDENTITY
    L = curve.coord_len
    if not data or data[0] != 0x04:
        raise CurveError(f"bad point prefix {data[:1].hex() or '(empty)'}")
    if len(data) != 1 + 2 * L:
        raise CurveError(f"encoded point must be {1 + 2 * L} bytes, got {len(data)}")
    P = Point(int.from_bytes(data[1 : 1 + L], "big"), int.from_bytes(data[1 + L :], "big"))
    if not curve.contains(P):
        raise CurveError(f"point ({P.x}, {P.y}) is not on curve {curve.name}")
    return P
