"""Command-line front end: enrollment, verification and the matrix/bench reports.

Exit codes: 0 success or ACCEPT, 1 domain rejection (duplicate id, REJECT),
2 operational error (bad input, I/O, integrity failure).
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import report, store
from .crypto import decrypt_index, encrypt_index, keygen, load_curve, os_rng, seeded_rng
from .crypto.params import (
    format_private_key,
    format_public_key,
    parse_private_key,
    parse_public_key,
)
from .errors import FpixError, IntegrityError, RecordExistsError
from .image import SYNTH_KINDS, read_pgm, save_pgm, synth_image
from .indexing import DEFAULT_K, IndexMode, index_image
from .matcher import decide, similarity_matrix, suggest_threshold

EXIT_OK, EXIT_REJECT, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    """Operational failure reported with exit code 2."""


@dataclass
class CliConfig:
    curve: str = "p192"
    mode: IndexMode = IndexMode.SVD
    k: int = DEFAULT_K
    db: Optional[Path] = None
    threshold: Optional[float] = None
    format: str = "text"
    seed: Optional[int] = None

    def __post_init__(self):
        if self.k < 1:
            raise CliError("--k must be >= 1")
        if self.threshold is not None and not self.threshold > 0:
            raise CliError("--threshold must be > 0")
        if self.seed is not None and not 0 <= self.seed < 1 << 64:
            raise CliError("--seed must be an unsigned 64-bit integer")

    @classmethod
    def from_args(cls, args) -> CliConfig:
        db = getattr(args, "db", None) or os.environ.get("FPIX_DB")
        return cls(
            curve=getattr(args, "curve", "p192"),
            mode=IndexMode.parse(getattr(args, "mode", "svd")),
            k=getattr(args, "k", DEFAULT_K),
            db=Path(db) if db else None,
            threshold=getattr(args, "threshold", None),
            format=getattr(args, "format", "text"),
            seed=getattr(args, "seed", None),
        )

    def rng(self, purpose: str):
        return os_rng if self.seed is None else seeded_rng(self.seed, purpose)

    def store_dir(self, create=False) -> Path:
        if self.db is None:
            raise CliError("no store directory: pass --db or set FPIX_DB")
        if create:
            self.db.mkdir(parents=True, exist_ok=True)
        elif not self.db.is_dir():
            raise CliError(f"store directory {self.db} does not exist")
        return self.db


def _read_text(path, what):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {what} {path}: {exc.strerror}") from None


def _load_image(path):
    try:
        return read_pgm(path)
    except OSError as exc:
        raise CliError(f"cannot read image {path}: {exc.strerror}") from None
    except FpixError as exc:
        raise CliError(f"{path}: {exc}") from None


# -- commands ----------------------------------------------------------------


def cmd_keygen(args, cfg: CliConfig) -> int:
    curve = load_curve(cfg.curve)
    sec, pub = Path(args.out + ".sec"), Path(args.out + ".pub")
    if not args.force:
        for path in (sec, pub):
            if path.exists():
                raise CliError(f"{path} exists; use --force to overwrite")
    kp = keygen(curve, cfg.rng("keygen"))
    try:
        sec.write_text(format_private_key(kp.d))
        os.chmod(sec, 0o600)
        pub.write_text(format_public_key(kp.Q, curve))
    except OSError as exc:
        raise CliError(f"cannot write key files: {exc}") from None
    print(f"curve: {curve.name}")
    print(f"public key: {format_public_key(kp.Q, curve).strip()}")
    return EXIT_OK


def cmd_enroll(args, cfg: CliConfig) -> int:
    curve = load_curve(cfg.curve)
    Q = parse_public_key(_read_text(args.pub, "public key"), curve)
    store.check_id(args.id)
    img = _load_image(args.image)
    db = cfg.store_dir(create=True)
    if store.record_path(db, args.id).exists() and not args.overwrite:
        raise RecordExistsError(f"record {args.id!r} already exists")
    v = index_image(img, cfg.mode, cfg.k)
    ct = encrypt_index(v, Q, curve, cfg.rng("ephemeral")).to_bytes(curve)
    rec = store.IndexRecord.new(args.id, v.mode, v.dim, ct)
    store.put(db, rec, overwrite=args.overwrite)
    print(f"enrolled {rec.id} mode={rec.mode.name} dim={rec.dim} ciphertext={len(ct)} bytes")
    return EXIT_OK


def _decrypt_store(db, d, curve):
    enrolled = []
    for rec in store.load_all(db, curve):
        try:
            v = decrypt_index(d, rec.ciphertext, curve)
        except FpixError as exc:
            raise CliError(f"record {rec.id!r}: {exc}") from None
        if (v.mode, v.dim) != (rec.mode, rec.dim):
            raise CliError(f"record {rec.id!r}: header does not match decrypted index")
        enrolled.append((rec.id, v))
    return enrolled


def cmd_verify(args, cfg: CliConfig) -> int:
    curve = load_curve(cfg.curve)
    d = parse_private_key(_read_text(args.sec, "private key"), curve)
    db = cfg.store_dir()
    enrolled = _decrypt_store(db, d, curve)
    if not enrolled:
        raise CliError(f"store {db} holds no records")
    query = index_image(_load_image(args.image), cfg.mode, cfg.k)
    threshold = cfg.threshold
    if threshold is None:
        if len(enrolled) < 2:
            raise CliError("a single enrolled record gives no threshold; pass --threshold")
        threshold = suggest_threshold(similarity_matrix(enrolled))
        if threshold <= 0:
            raise CliError("two enrolled records are identical; pass --threshold")
    result = decide(query, enrolled, threshold)
    verdict = "ACCEPT" if result.accepted else "REJECT"
    if cfg.format == "tsv":
        print("best_id\tdistance\tthreshold\tdecision")
        print(f"{result.best_id}\t{result.distance!r}\t{result.threshold!r}\t{verdict}")
    else:
        print(f"best match: {result.best_id}")
        print(f"distance:   {report.format_distance(result.distance)}")
        print(f"threshold:  {report.format_distance(result.threshold)}")
        print(verdict)
    return EXIT_OK if result.accepted else EXIT_REJECT


def cmd_list(args, cfg: CliConfig) -> int:
    infos, problems = store.list_records(cfg.store_dir())
    sep = "\t" if cfg.format == "tsv" else "  "
    if cfg.format == "tsv":
        print(sep.join(("id", "mode", "dim", "created")))
    for info in infos:
        print(sep.join((info.id, info.mode.name, str(info.dim), str(info.created))))
    for name, msg in problems:
        print(f"fpix: {name}: {msg}", file=sys.stderr)
    return EXIT_ERROR if problems else EXIT_OK


def cmd_matrix(args, cfg: CliConfig) -> int:
    folder = Path(args.directory)
    if not folder.is_dir():
        raise CliError(f"{folder} is not a directory")
    paths = sorted(folder.glob("*.pgm"))
    if len(paths) < 2:
        raise CliError(f"{folder} holds {len(paths)} PGM file(s); need at least 2")
    labelled = [(p.stem, index_image(_load_image(p), cfg.mode, cfg.k)) for p in paths]
    m = similarity_matrix(labelled)
    sys.stdout.write(report.render_matrix(m, cfg.format, threshold=suggest_threshold(m)))
    if args.plot:
        report.plot_similarity_matrix(m, args.plot, title=f"{cfg.mode.name} index similarity")
    return EXIT_OK


def _median_time(fn, reps, warmup):
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return samples


def cmd_bench(args, cfg: CliConfig) -> int:
    curve = load_curve(cfg.curve)
    if args.image:
        img = _load_image(args.image)
    else:
        img = synth_image(args.synth, args.size, args.size, seed=cfg.seed or 0)
    if args.sec or args.pub:
        if not (args.sec and args.pub):
            raise CliError("--sec and --pub must be given together")
        d = parse_private_key(_read_text(args.sec, "private key"), curve)
        Q = parse_public_key(_read_text(args.pub, "public key"), curve)
    else:
        kp = keygen(curve, cfg.rng("keygen"))
        d, Q = kp.d, kp.Q
    rng = cfg.rng("ephemeral")
    v = index_image(img, cfg.mode, cfg.k)
    ct = encrypt_index(v, Q, curve, rng).to_bytes(curve)
    try:
        roundtrip = decrypt_index(d, ct, curve)
    except IntegrityError:
        roundtrip = None
    if roundtrip != v:
        raise CliError("keypair mismatch: --sec does not decrypt what --pub encrypts")

    samples = {
        "Indexing time": _median_time(lambda: index_image(img, cfg.mode, cfg.k), args.reps, args.warmup),
        "Encryption time": _median_time(lambda: encrypt_index(v, Q, curve, rng), args.reps, args.warmup),
        "Decryption time": _median_time(lambda: decrypt_index(d, ct, curve), args.reps, args.warmup),
    }
    if args.compare_pca:
        samples[report.PCA_COLUMN] = _median_time(
            lambda: index_image(img, IndexMode.PCA, cfg.k), args.reps, args.warmup
        )
    medians = {name: statistics.median(ts) for name, ts in samples.items()}
    if cfg.format == "text":
        print(f"# {img.width}x{img.height} image, mode={cfg.mode.name}, k={cfg.k}, "
              f"curve={curve.name}, median of {args.reps} runs")
    sys.stdout.write(report.render_bench(medians, cfg.format))
    if args.plot:
        report.plot_bench(samples, args.plot, title=f"{img.width}x{img.height}, {cfg.mode.name} index")
    return EXIT_OK


def cmd_synth(args, cfg: CliConfig) -> int:
    img = synth_image(args.kind, args.width, args.height or args.width, seed=cfg.seed or 0)
    save_pgm(img, args.out)
    print(f"wrote {args.out} ({img.width}x{img.height} {args.kind})")
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


def _u64(text):
    return int(text, 0)


def _common_options(defaults: bool) -> argparse.ArgumentParser:
    """Options accepted both before and after the subcommand name."""
    sup = argparse.SUPPRESS
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--curve", default="p192" if defaults else sup,
                   help="toy, p192 or a curve parameter file (default: p192)")
    g.add_argument("--mode", choices=("svd", "hist", "pca"), type=str.lower,
                   default="svd" if defaults else sup, help="index mode (default: svd)")
    g.add_argument("--k", type=int, default=DEFAULT_K if defaults else sup,
                   help=f"index dimension for svd/pca (default: {DEFAULT_K})")
    g.add_argument("--db", default=None if defaults else sup,
                   help="store directory (default: $FPIX_DB)")
    g.add_argument("--format", choices=("text", "tsv"), default="text" if defaults else sup)
    g.add_argument("--seed", type=_u64, default=None if defaults else sup,
                   help="seed for every random choice (keys, ephemeral scalars)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_options(defaults=False)
    parser = argparse.ArgumentParser(
        prog="fpix", parents=[_common_options(defaults=True)],
        description="Encrypted biometric index vault: SVD/histogram/PCA signatures under ECC hybrid encryption.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("keygen", parents=[common], help="create a key pair")
    p.add_argument("--out", required=True, help="output prefix; writes PREFIX.sec and PREFIX.pub")
    p.add_argument("--force", action="store_true", help="overwrite existing key files")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("enroll", parents=[common], help="index, encrypt and store an image")
    p.add_argument("--image", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--pub", required=True, help="public key file")
    p.add_argument("--overwrite", action="store_true")
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("verify", parents=[common], help="match a query image against the store")
    p.add_argument("--image", required=True)
    p.add_argument("--sec", required=True, help="private key file")
    p.add_argument("--threshold", type=float,
                   help="accept distance (default: half the closest enrolled pair)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("list", parents=[common], help="list stored records")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("matrix", parents=[common], help="pairwise index distances of a PGM folder")
    p.add_argument("directory")
    p.add_argument("--plot", metavar="FILE", help="also render a heatmap (png, pdf, svg)")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("bench", parents=[common], help="median indexing/encryption/decryption times")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--image")
    src.add_argument("--synth", choices=SYNTH_KINDS, default="blob")
    p.add_argument("--size", type=int, default=256, help="synthetic image side (default: 256)")
    p.add_argument("--sec")
    p.add_argument("--pub")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--warmup", type=int, default=2)
    p.add_argument("--compare-pca", action="store_true", help="also time PCA indexing")
    p.add_argument("--plot", metavar="FILE", help="also render a bar chart")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic test image")
    p.add_argument("--kind", choices=SYNTH_KINDS, default="blob")
    p.add_argument("--width", type=int, default=128)
    p.add_argument("--height", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = CliConfig.from_args(args)
        if args.command == "bench" and args.reps < 1:
            raise CliError("--reps must be >= 1")
        return args.func(args, cfg)
    except RecordExistsError as exc:
        print(f"fpix: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except (CliError, FpixError, OSError) as exc:
        print(f"fpix: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
