"""Text/TSV tables and matplotlib figures for the ``matrix`` and ``bench`` reports."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .matcher import SimilarityMatrix

BENCH_COLUMNS = ("Indexing time", "Encryption time", "Decryption time")
PCA_COLUMN = "PCA indexing time"


def format_distance(value: float) -> str:
    """Four decimals; scientific with a bare exponent from 1e3 up, e.g. ``6.7311e+3``."""
    if value == 0:
        return "0"
    if abs(value) >= 1e3:
        mantissa, exp = f"{value:.4e}".split("e")
        return f"{mantissa}e{int(exp):+d}"
    return f"{value:.4f}"


def render_matrix(m: SimilarityMatrix, fmt: str = "text", threshold=None) -> str:
    cells = [[format_distance(v) for v in row] for row in m.d]
    lines = []
    if fmt == "tsv":
        lines.append("\t".join([""] + list(m.labels)))
        lines.extend("\t".join([label] + row) for label, row in zip(m.labels, cells))
        if threshold is not None:
            lines += ["", f"suggested_threshold\t{format_distance(threshold)}"]
    else:
        width = max([len(c) for row in cells for c in row] + [len(s) for s in m.labels])
        lw = max(len(s) for s in m.labels)
        lines.append(" " * lw + "".join(f"  {s:>{width}}" for s in m.labels))
        for label, row in zip(m.labels, cells):
            lines.append(f"{label:<{lw}}" + "".join(f"  {c:>{width}}" for c in row))
        if threshold is not None:
            lines += ["", f"suggested threshold: {format_distance(threshold)}"]
    return "\n".join(lines) + "\n"


def parse_matrix_tsv(text: str) -> SimilarityMatrix:
    """Read back the table part of :func:`render_matrix` TSV output."""
    rows = []
    for line in text.splitlines():
        if not line.strip():
            break
        rows.append(line.split("\t"))
    labels = tuple(rows[0][1:])
    d = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
    if d.shape != (len(labels), len(labels)) or tuple(r[0] for r in rows[1:]) != labels:
        raise ValueError("TSV matrix is not square or its labels disagree")
    return SimilarityMatrix(labels, d)


def render_bench(medians: dict, fmt: str = "text") -> str:
    """``medians`` maps column names (see ``BENCH_COLUMNS``) to seconds."""
    cols = [c for c in BENCH_COLUMNS + (PCA_COLUMN,) if c in medians]
    if fmt == "tsv":
        return "\t".join(cols) + "\n" + "\t".join(repr(medians[c]) for c in cols) + "\n"
    cells = [f"{medians[c]:.4f} [s]" for c in cols]
    widths = [max(len(c), len(v)) for c, v in zip(cols, cells)]
    head = "  ".join(f"{c:<{w}}" for c, w in zip(cols, widths))
    body = "  ".join(f"{v:<{w}}" for v, w in zip(cells, widths))
    return head.rstrip() + "\n" + body.rstrip() + "\n"


def _figure(width=6.0, height=None):
    # the object API keeps figure rendering free of pyplot's global state
    from matplotlib.figure import Figure

    golden = (np.sqrt(5.0) - 1.0) / 2.0
    return Figure(figsize=(width, height or width * golden), dpi=100)


def plot_similarity_matrix(m: SimilarityMatrix, path, title="Index similarity") -> Path:
    n = m.size
    fig = _figure(1.0 + 0.9 * n, 0.6 + 0.9 * n)
    ax = fig.add_subplot()
    im = ax.imshow(m.d, cmap="viridis")
    ax.set_xticks(range(n), m.labels, rotation=45, ha="right")
    ax.set_yticks(range(n), m.labels)
    top = float(m.d.max()) or 1.0
    for i in range(n):
        for j in range(n):
            ax.text(j, i, format_distance(m.d[i, j]), ha="center", va="center", fontsize=7,
                    color="white" if m.d[i, j] < 0.5 * top else "black")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label="Euclidean distance")
    fig.tight_layout()
    fig.savefig(path)
    return Path(path)


def plot_bench(samples: dict, path, title="Computation time") -> Path:
    """Bar of the median per phase with the individual repetitions overlaid."""
    names = list(samples)
    fig = _figure(1.5 + 1.6 * len(names))
    ax = fig.add_subplot()
    x = np.arange(len(names))
    ax.bar(x, [np.median(samples[k]) for k in names], color="0.75", edgecolor="0.2")
    for i, k in enumerate(names):
        ax.plot(np.full(len(samples[k]), x[i]), samples[k], "k.", ms=3)
    ax.set_xticks(x, names)
    ax.set_ylabel("seconds")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    return Path(path)
