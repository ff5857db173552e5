"""Prime-field elliptic-curve arithmetic and hybrid encryption of index vectors."""

from .ec import (
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
from .hybrid import (
    IndexCiphertext,
    KeyPair,
    ciphertext_length,
    decrypt_index,
    encrypt_index,
    keygen,
    os_rng,
    seeded_rng,
)
from .params import load_curve, parse_curve_params

__all__ = [
    "IDENTITY",
    "TOY_CURVE",
    "CurveParams",
    "IndexCiphertext",
    "KeyPair",
    "Point",
    "ciphertext_length",
    "decode_point",
    "decrypt_index",
    "encode_point",
    "encrypt_index",
    "inverse_mod",
    "keygen",
    "load_curve",
    "os_rng",
    "parse_curve_params",
    "point_add",
    "point_double",
    "point_neg",
    "scalar_mul",
    "seeded_rng",
]
