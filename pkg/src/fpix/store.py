"""One-file-per-record store of encrypted index vectors.

Record file ``<id>.rec``, integers big-endian::

    "FPIX" | version u8 | mode u8 | dim u32 | created u64 | id_len u8 | id
           | ct_len u32 | ciphertext

Records are written to a temporary file in the same directory and renamed into
place, so a reader never sees a partially written ``.rec`` file. Only the index
is confidential; ids and the header fields are stored in the clear.
"""

from __future__ import annotations

import os
import re
import struct
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Optional

from .crypto.ec import CurveParams
from .crypto.hybrid import HEADER_LEN, TAG_LEN, ciphertext_length
from .errors import CorruptRecordError, InvalidRecordIdError, RecordExistsError, RecordNotFoundError
from .indexing import IndexMode

MAGIC = b"FPIX"
VERSION = 1
SUFFIX = ".rec"
_ID_RE = re.compile(r"[A-Za-z0-9_-]{1,64}")
_FIXED = struct.Struct(">4sBBIQB")


def check_id(record_id: str) -> str:
    if not isinstance(record_id, str) or not _ID_RE.fullmatch(record_id):
        raise InvalidRecordIdError(
            f"invalid record id {record_id!r}: use 1-64 characters from [A-Za-z0-9_-]"
        )
    return record_id


@dataclass(frozen=True)
class IndexRecord:
    id: str
    mode: IndexMode
    dim: int
    created: int
    ciphertext: bytes

    def __post_init__(self):
        check_id(self.id)
        object.__setattr__(self, "mode", IndexMode.parse(self.mode))
        if not 1 <= self.dim < 1 << 32:
            raise ValueError(f"dim out of range: {self.dim}")
        if not 0 <= self.created < 1 << 64:
            raise ValueError(f"created timestamp out of range: {self.created}")

    @classmethod
    def new(cls, record_id, mode, dim, ciphertext, created=None) -> IndexRecord:
        return cls(record_id, mode, dim, int(time.time()) if created is None else created, bytes(ciphertext))


class RecordInfo(NamedTuple):
    id: str
    mode: IndexMode
    dim: int
    created: int


def encode_record(rec: IndexRecord) -> bytes:
    rid = rec.id.encode("ascii")
    return (
        _FIXED.pack(MAGIC, VERSION, int(rec.mode), rec.dim, rec.created, len(rid))
        + rid
        + struct.pack(">I", len(rec.ciphertext))
        + rec.ciphertext
    )


def decode_record(data: bytes, curve: Optional[CurveParams] = None) -> IndexRecord:
    """Parse a record file, checking magic, version and the ciphertext length.

    With ``curve`` the ciphertext length must match the curve exactly; without
    it the length must be consistent with some uncompressed point encoding.
    """
    if data[:4] != MAGIC[: len(data)]:
        raise CorruptRecordError(f"corrupt: magic {bytes(data[:4])!r}")
    if len(data) < _FIXED.size:
        raise CorruptRecordError("corrupt: length (file shorter than fixed header)")
    _, version, mode_byte, dim, created, id_len = _FIXED.unpack_from(data)
    if version != VERSION:
        raise CorruptRecordError(f"corrupt: version {version}")
    try:
        mode = IndexMode(mode_byte)
    except ValueError:
        raise CorruptRecordError(f"corrupt: mode byte 0x{mode_byte:02x}") from None
    pos = _FIXED.size
    rid = data[pos : pos + id_len]
    pos += id_len
    if len(data) < pos + 4:
        raise CorruptRecordError("corrupt: length (truncated before ciphertext)")
    (ct_len,) = struct.unpack_from(">I", data, pos)
    pos += 4
    ct = data[pos:]
    if len(ct) != ct_len:
        raise CorruptRecordError(f"corrupt: length (ciphertext is {len(ct)} bytes, header says {ct_len})")
    if dim < 1:
        raise CorruptRecordError("corrupt: length (dim is zero)")
    point_len = ct_len - HEADER_LEN - 8 * dim - TAG_LEN
    if curve is not None:
        if ct_len != ciphertext_length(dim, curve):
            raise CorruptRecordError(
                f"corrupt: length ({ct_len} bytes does not match dim {dim} on curve {curve.name})"
            )
    elif point_len < 3 or point_len % 2 == 0 or ct[0] != 0x04:
        raise CorruptRecordError(f"corrupt: length ({ct_len} bytes does not match dim {dim})")
    try:
        record_id = check_id(rid.decode("ascii"))
    except (UnicodeDecodeError, InvalidRecordIdError):
        raise CorruptRecordError(f"corrupt: id {rid!r}") from None
    return IndexRecord(record_id, mode, dim, created, bytes(ct))


def record_path(store_dir, record_id: str) -> Path:
    return Path(store_dir) / (check_id(record_id) + SUFFIX)


def put(store_dir, rec: IndexRecord, overwrite: bool = False) -> Path:
    """Atomically write ``rec`` as ``<id>.rec``."""
    path = record_path(store_dir, rec.id)
    if path.exists() and not overwrite:
        raise RecordExistsError(f"record {rec.id!r} already exists")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{rec.id}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(encode_record(rec))
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path


def get(store_dir, record_id: str, curve: Optional[CurveParams] = None) -> IndexRecord:
    path = record_path(store_dir, record_id)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise RecordNotFoundError(f"record {record_id!r} not found") from None
    rec = decode_record(data, curve)
    if rec.id != record_id:
        raise CorruptRecordError(f"corrupt: id (file {path.name} holds {rec.id!r})")
    return rec


def delete(store_dir, record_id: str) -> None:
    try:
        record_path(store_dir, record_id).unlink()
    except FileNotFoundError:
        raise RecordNotFoundError(f"record {record_id!r} not found") from None


def list_records(store_dir, curve: Optional[CurveParams] = None):
    """Return ``(infos, problems)``.

    ``infos`` holds a :class:`RecordInfo` per well-formed record, sorted by id
    bytewise; ``problems`` holds ``(filename, message)`` for every ``.rec`` file
    that failed to parse.
    """
    infos, problems = [], []
    for path in sorted(Path(store_dir).glob("*" + SUFFIX)):
        if path.name.startswith("."):
            continue
        try:
            rec = decode_record(path.read_bytes(), curve)
            if path.name != rec.id + SUFFIX:
                raise CorruptRecordError(f"corrupt: id (file holds {rec.id!r})")
        except (CorruptRecordError, OSError) as exc:
            problems.append((path.name, str(exc)))
            continue
        infos.append(RecordInfo(rec.id, rec.mode, rec.dim, rec.created))
    infos.sort(key=lambda info: info.id.encode("ascii"))
    return infos, problems


def load_all(store_dir, curve: Optional[CurveParams] = None):
    """Every record in id order; raises on the first corrupt file."""
    infos, problems = list_records(store_dir, curve)
    if problems:
        name, msg = problems[0]
        raise CorruptRecordError(f"{name}: {msg}")
    return [get(store_dir, info.id, curve) for info in infos]
