"""ECIES-style hybrid encryption of index vectors.

An ephemeral Diffie-Hellman point ``S = e*Q`` yields both a SHA-256 counter
keystream that masks the serialized vector and an HMAC-SHA-256 key that
authenticates ``encode(R) || body``. Wire layout of a ciphertext::

    encode_point(R) || body || tag(32)
"""

from __future__ import annotations

import hashlib
import hmac
import random
import secrets
import struct
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import CryptoError, CurveError, IntegrityError, MalformedCiphertextError
from ..indexing import IndexMode, IndexVector
from .ec import CurveParams, Point, decode_point, encode_point, scalar_mul

Rng = Callable[[int], bytes]

TAG_LEN = 32
HEADER_LEN = 5  # mode byte + u32 dim
_HEADER = struct.Struct(">BI")


def os_rng(n: int) -> bytes:
    return secrets.token_bytes(n)


def seeded_rng(seed: int, purpose: str = "") -> Rng:
    """Deterministic byte source for reproducible tests and ``--seed`` runs.

    Distinct ``purpose`` labels give independent streams from one seed, so a
    key and an ephemeral scalar drawn under the same seed never coincide.
    """
    return random.Random(f"{purpose}:{seed}" if purpose else seed).randbytes


def random_scalar(n: int, rng: Rng) -> int:
    """Uniform integer in [1, n-1] by masked rejection sampling."""
    bits = (n - 1).bit_length()
    nbytes = (bits + 7) // 8
    mask = (1 << bits) - 1
    while True:
        raw = rng(nbytes)
        if not isinstance(raw, (bytes, bytearray)) or len(raw) != nbytes:
            raise CryptoError("random source failed to return the requested bytes")
        k = int.from_bytes(raw, "big") & mask
        if 1 <= k < n:
            return k


@dataclass(frozen=True)
class KeyPair:
    d: int
    Q: Point


def keygen(curve: CurveParams, rng: Rng = os_rng) -> KeyPair:
    d = random_scalar(curve.n, rng)
    return KeyPair(d, scalar_mul(d, curve.G, curve))


# -- plaintext ---------------------------------------------------------------


def serialize_index(v: IndexVector) -> bytes:
    return _HEADER.pack(int(v.mode), v.dim) + v.components.astype(">f8").tobytes()


def deserialize_index(data: bytes) -> IndexVector:
    if len(data) < HEADER_LEN:
        raise MalformedCiphertextError("plaintext shorter than its header")
    mode_byte, dim = _HEADER.unpack_from(data)
    try:
        mode = IndexMode(mode_byte)
    except ValueError:
        raise MalformedCiphertextError(f"unknown index mode byte 0x{mode_byte:02x}") from None
    if dim < 1 or len(data) != HEADER_LEN + 8 * dim:
        raise MalformedCiphertextError(
            f"plaintext header declares dim {dim} but carries {len(data) - HEADER_LEN} payload bytes"
        )
    comps = np.frombuffer(data, dtype=">f8", offset=HEADER_LEN).astype(np.float64)
    try:
        return IndexVector(mode, comps)
    except ValueError as exc:
        raise MalformedCiphertextError(str(exc)) from None


# -- key derivation ------------------------------------------------------------


def _x_bytes(S: Point, curve: CurveParams) -> bytes:
    return S.x.to_bytes(curve.coord_len, "big")


def keystream(x: bytes, length: int) -> bytes:
    blocks = (length + 31) // 32
    return b"".join(hashlib.sha256(x + struct.pack(">I", i)).digest() for i in range(blocks))[:length]


def mac_key(x: bytes) -> bytes:
    return hashlib.sha256(x + b"mac").digest()


def _xor(a: bytes, b: bytes) -> bytes:
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).to_bytes(len(a), "big")


# -- ciphertext ----------------------------------------------------------------


@dataclass(frozen=True)
class IndexCiphertext:
    R: Point
    body: bytes
    tag: bytes

    def to_bytes(self, curve: CurveParams) -> bytes:
        return encode_point(self.R, curve) + self.body + self.tag

    @classmethod
    def from_bytes(cls, data: bytes, curve: CurveParams) -> IndexCiphertext:
        data = bytes(data)
        point_len = 1 + 2 * curve.coord_len
        body_len = len(data) - point_len - TAG_LEN
        if body_len < HEADER_LEN + 8 or (body_len - HEADER_LEN) % 8:
            raise MalformedCiphertextError(
                f"ciphertext length {len(data)} does not fit curve {curve.name}"
            )
        try:
            R = decode_point(data[:point_len], curve)
        except CurveError as exc:
            raise MalformedCiphertextError(f"ephemeral point: {exc}") from None
        return cls(R, data[point_len : point_len + body_len], data[point_len + body_len :])


def ciphertext_length(dim: int, curve: CurveParams) -> int:
    return 1 + 2 * curve.coord_len + HEADER_LEN + 8 * dim + TAG_LEN


def encrypt_index(v: IndexVector, Q: Point, curve: CurveParams, rng: Rng = os_rng) -> IndexCiphertext:
    if Q.is_identity:
        raise CurveError("public key is the identity point")
    if not curve.contains(Q):
        raise CurveError(f"public key is not on curve {curve.name}")
    plaintext = serialize_index(v)
    while True:
        e = random_scalar(curve.n, rng)
        S = scalar_mul(e, Q, curve)
        if not S.is_identity:
            break
    R = scalar_mul(e, curve.G, curve)
    x = _x_bytes(S, curve)
    body = _xor(plaintext, keystream(x, len(plaintext)))
    tag = hmac.new(mac_key(x), encode_point(R, curve) + body, hashlib.sha256).digest()
    return IndexCiphertext(R, body, tag)


def decrypt_index(d: int, c, curve: CurveParams) -> IndexVector:
    """Verify the tag, then unmask and parse. ``c`` may be raw ciphertext bytes.

    Nothing is unmasked unless the tag verifies, so a tampered or truncated
    ciphertext never produces partial plaintext.
    """
    if not 1 <= d < curve.n:
        raise CryptoError("private scalar out of range")
    if not isinstance(c, IndexCiphertext):
        c = IndexCiphertext.from_bytes(c, curve)
    if c.R.is_identity or not curve.contains(c.R):
        raise MalformedCiphertextError("ephemeral point is not a valid curve point")
    if len(c.tag) != TAG_LEN:
        raise MalformedCiphertextError("tag must be 32 bytes")
    S = scalar_mul(d, c.R, curve)
    if S.is_identity:
        raise IntegrityError("shared point is the identity")
    x = _x_bytes(S, curve)
    expected = hmac.new(mac_key(x), encode_point(c.R, curve) + c.body, hashlib.sha256).digest()
    if not hmac.compare_digest(expected, c.tag):
        raise IntegrityError("ciphertext failed integrity check (tampered data or wrong key)")
    return deserialize_index(_xor(c.body, keystream(x, len(c.body))))
