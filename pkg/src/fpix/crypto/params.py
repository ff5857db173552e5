"""Curve parameter files and key files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..errors import CurveError
from .ec import TOY_CURVE, CurveParams, Point, decode_point, encode_point

_FIELDS = ("p", "a", "b", "gx", "gy", "n", "h")
BUILTIN_CURVES = ("toy", "p192")
PRIVATE_KEY_BYTES = 32


def parse_curve_params(text: str, source: str = "<string>") -> CurveParams:
    """Parse ``key = hex-value`` lines (plus ``name = label``) into a validated curve."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep or not value:
            raise CurveError(f"{source}:{lineno}: expected 'key = value'")
        if key in values:
            raise CurveError(f"{source}:{lineno}: duplicate key {key!r}")
        if key == "name":
            values[key] = value
        elif key in _FIELDS:
            try:
                values[key] = int(value.removeprefix("0x").removeprefix("0X"), 16)
            except ValueError:
                raise CurveError(f"{source}:{lineno}: {key} is not a hex number") from None
        else:
            raise CurveError(f"{source}:{lineno}: unknown key {key!r}")
    missing = [k for k in ("name",) + _FIELDS if k not in values]
    if missing:
        raise CurveError(f"{source}: missing {', '.join(missing)}")
    curve = CurveParams(
        name=values["name"],
        p=values["p"],
        a=values["a"],
        b=values["b"],
        G=Point(values["gx"], values["gy"]),
        n=values["n"],
        h=values["h"],
    )
    curve.validate()
    return curve


def format_curve_params(curve: CurveParams) -> str:
    rows = [("name", curve.name)] + [
        (k, f"{v:x}")
        for k, v in zip(_FIELDS, (curve.p, curve.a, curve.b, curve.G.x, curve.G.y, curve.n, curve.h))
    ]
    return "".join(f"{k} = {v}\n" for k, v in rows)


def load_curve(source) -> CurveParams:
    """Resolve ``toy``, ``p192`` or a path to a parameter file."""
    if source is None or source == "toy":
        return TOY_CURVE
    if source == "p192":
        text = resources.files(__package__).joinpath("curves/p192.params").read_text()
        return parse_curve_params(text, "p192.params")
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CurveError(f"cannot read curve parameter file {path}: {exc.strerror}") from None
    return parse_curve_params(text, str(path))


def format_private_key(d: int) -> str:
    width = max(PRIVATE_KEY_BYTES, (d.bit_length() + 7) // 8)
    return d.to_bytes(width, "big").hex() + "\n"


def parse_private_key(text: str, curve: CurveParams) -> int:
    try:
        d = int.from_bytes(bytes.fromhex(text.strip()), "big")
    except ValueError:
        raise CurveError("private key is not valid hex") from None
    if not 1 <= d < curve.n:
        raise CurveError(f"private key is out of range for curve {curve.name}")
    return d


def format_public_key(Q: Point, curve: CurveParams) -> str:
    return encode_point(Q, curve).hex() + "\n"


def parse_public_key(text: str, curve: CurveParams) -> Point:
    try:
        raw = bytes.fromhex(text.strip())
    except ValueError:
        raise CurveError("public key is not valid hex") from None
    Q = decode_point(raw, curve)
    if Q.is_identity:
        raise CurveError("public key is the identity point")
    return Q
