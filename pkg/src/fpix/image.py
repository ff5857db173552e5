"""Grayscale image ingest, PGM I/O and synthetic test images."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import PgmError

SYNTH_KINDS = ("gradient", "checker", "blob")

_LCG_MUL = 6364136223846793005
_LCG_INC = 1442695040888963407
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale raster. ``pixels`` is a read-only (height, width) uint8 array."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        px = np.asarray(self.pixels)
        if px.size != self.width * self.height:
            raise ValueError(
                f"pixel count {px.size} does not match {self.width}x{self.height}"
            )
        if px.dtype != np.uint8:
            if np.any(px < 0) or np.any(px > 255):
                raise ValueError("pixel intensities must lie in [0, 255]")
        px = np.array(px, dtype=np.uint8).reshape(self.height, self.width)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_array(cls, arr) -> GrayImage:
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        return cls(arr.shape[1], arr.shape[0], arr)

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    def __hash__(self):
        return hash((self.width, self.height, self.pixels.tobytes()))

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


# -- PGM ---------------------------------------------------------------------

_TOKEN = re.compile(rb"\S+")


def _header_tokens(data: bytes, count: int):
    """Return ``count`` header tokens and the offset just past the last one.

    Comments run from ``#`` to end of line and may appear between any tokens.
    """
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= n:
            break
        if data[pos : pos + 1] == b"#":
            eol = data.find(b"\n", pos)
            pos = n if eol < 0 else eol + 1
            continue
        m = _TOKEN.match(data, pos)
        tok = m.group(0)
        hash_at = tok.find(b"#")
        if hash_at > 0:
            tok = tok[:hash_at]
        tokens.append((tok, pos))
        pos += len(tok)
    return tokens, pos


def _header_int(tok, name, lo, hi):
    raw, offset = tok
    try:
        value = int(raw.decode("ascii"))
    except (UnicodeDecodeError, ValueError):
        raise PgmError(f"{name}: not an integer {raw!r} at byte offset {offset}") from None
    if not lo <= value <= hi:
        raise PgmError(f"{name}: {value} out of range [{lo}, {hi}] at byte offset {offset}")
    return value


def load_pgm(data: bytes) -> GrayImage:
    """Parse a binary (P5) or ASCII (P2) PGM with maxval <= 255."""
    if data[:2] not in (b"P5", b"P2"):
        raise PgmError(f"magic: unsupported magic number {bytes(data[:2])!r}")
    tokens, pos = _header_tokens(data, 4)
    names = ("magic", "width", "height", "maxval")
    if len(tokens) < 4:
        raise PgmError(f"{names[len(tokens)]}: header truncated at byte offset {len(data)}")
    if tokens[0][0] not in (b"P5", b"P2"):
        raise PgmError(f"magic: unsupported magic number {tokens[0][0]!r}")
    binary = tokens[0][0] == b"P5"
    width = _header_int(tokens[1], "width", 1, 1 << 24)
    height = _header_int(tokens[2], "height", 1, 1 << 24)
    maxval = _header_int(tokens[3], "maxval", 1, 255)
    count = width * height

    if binary:
        if pos >= len(data) or not data[pos : pos + 1].isspace():
            raise PgmError(f"maxval: missing whitespace after header at byte offset {pos}")
        start = pos + 1
        payload = data[start : start + count]
        if len(payload) < count:
            raise PgmError(
                f"pixel data: truncated at byte offset {start + len(payload)}, "
                f"expected {count} bytes from offset {start}"
            )
        px = np.frombuffer(payload, dtype=np.uint8)
        bad = np.flatnonzero(px > maxval)
        if bad.size:
            raise PgmError(f"pixel data: sample exceeds maxval at byte offset {start + bad[0]}")
    else:
        samples, _ = _header_tokens(data[pos:], count)
        if len(samples) < count:
            raise PgmError(
                f"pixel data: truncated at byte offset {len(data)}, "
                f"found {len(samples)} of {count} samples"
            )
        px = np.empty(count, dtype=np.uint8)
        for i, (raw, off) in enumerate(samples):
            px[i] = _header_int((raw, pos + off), f"sample {i}", 0, maxval)
    return GrayImage(width, height, px)


def read_pgm(path) -> GrayImage:
    return load_pgm(Path(path).read_bytes())


def write_pgm(img: GrayImage, ascii: bool = False) -> bytes:
    if ascii:
        lines = [" ".join(str(v) for v in row) for row in img.pixels]
        return f"P2\n{img.width} {img.height}\n255\n".encode() + "\n".join(lines).encode() + b"\n"
    return f"P5\n{img.width} {img.height}\n255\n".encode() + img.pixels.tobytes()


def save_pgm(img: GrayImage, path, ascii: bool = False) -> None:
    Path(path).write_bytes(write_pgm(img, ascii=ascii))


# -- conversions and transforms ----------------------------------------------


def to_matrix(img: GrayImage) -> np.ndarray:
    """Return a (height, width) float64 matrix with entries pixel / 255."""
    return img.pixels.astype(np.float64) / 255.0


def rotate90(img: GrayImage, quarter_turns: int) -> GrayImage:
    """Rotate clockwise by ``quarter_turns`` * 90 degrees."""
    return GrayImage.from_array(np.rot90(img.pixels, -(quarter_turns % 4)))


def translate(img: GrayImage, dx: int, dy: int) -> GrayImage:
    """Shift right by ``dx`` and down by ``dy`` pixels, wrapping around the edges."""
    return GrayImage.from_array(np.roll(img.pixels, (dy, dx), axis=(0, 1)))


# -- synthetic images ---------------------------------------------------------


class Lcg64:
    """64-bit linear congruential generator with fixed constants."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state * _LCG_MUL + _LCG_INC) & _MASK64
        return self.state

    def uniform(self) -> float:
        """Uniform float in [0, 1) from the top 32 bits."""
        return (self.next() >> 32) / 4294967296.0


def _blob(width, height, seed):
    rng = Lcg64(seed)
    nspots = 3 + (rng.next() >> 32) % 6
    short = min(width, height)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    field = np.zeros((height, width))
    for _ in range(nspots):
        cx = rng.uniform() * width
        cy = rng.uniform() * height
        sigma = (0.05 + 0.2 * rng.uniform()) * short + 0.5
        amp = 0.4 + 0.6 * rng.uniform()
        field += amp * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2.0 * sigma * sigma))
    return np.floor(255.0 * np.minimum(field, 1.0)).astype(np.uint8)


def synth_image(kind: str, width: int, height: int, seed: int = 0) -> GrayImage:
    """Deterministic synthetic image standing in for a real fingerprint scan.

    ``gradient`` ramps diagonally from 0 to 255, ``checker`` alternates 0/255 on
    pixel parity, and ``blob`` sums Gaussian spots whose count, centres, widths and
    amplitudes come from a :class:`Lcg64` seeded with ``seed``.
    """
    if width < 1 or height < 1:
        raise ValueError(f"image dimensions must be positive, got {width}x{height}")
    i, j = np.indices((height, width))
    if kind == "gradient":
        span = width + height - 2
        px = np.zeros((height, width), np.uint8) if span == 0 else (255 * (i + j)) // span
    elif kind == "checker":
        px = np.where((i + j) % 2 == 0, 0, 255)
    elif kind == "blob":
        px = _blob(width, height, seed)
    else:
        raise ValueError(f"unknown synthetic image kind {kind!r}; expected one of {SYNTH_KINDS}")
    return GrayImage(width, height, np.asarray(px, dtype=np.uint8))
