"""Matplotlib rendering for report output.

Figures are written straight to files; rendering uses the Agg backend
so the CLI works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .growth import GrowthPolicy, overhead_cycles, overhead_trace

__all__ = ["render_overhead_figure", "render_space_figure", "render_histogram_figure"]

plt.rcParams["figure.figsize"] = (6.4, 4.2)
plt.rcParams["font.size"] = 9

_COLORS = {"const": "#c44e52", "expon": "#7f7f7f", "triangle": "#4c72b0"}


def render_overhead_figure(policies: list[GrowthPolicy], n_max: int, path: str) -> None:
    """Log-log overhead-vs-payload curves: per-n sawtooth plus the
    per-growth-cycle averages for each policy."""
    fig, ax = plt.subplots()
    for policy in policies:
        color = _COLORS.get(policy.kind, None)
        trace = overhead_trace(policy, n_max)
        ns = [n for n, _ in trace]
        ovs = [max(ov, 1) for _, ov in trace]
        label = policy.kind if policy.kind != "expon" else f"expon k={policy.k:g}"
        ax.plot(ns, ovs, lw=0.5, alpha=0.45, color=color)
        cycles = [c for c in overhead_cycles(policy, n_max) if c["complete"]]
        ax.plot(
            [(c["n_start"] + c["n_end"]) / 2 for c in cycles],
            [max(c["mean_overhead"], 1) for c in cycles],
            "o-",
            ms=2.5,
            lw=1.2,
            color=color,
            label=label,
        )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("payload bytes stored")
    ax.set_ylabel("non-payload bytes allocated")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_space_figure(report_dict: dict, path: str) -> None:
    """Horizontal bars of the per-category byte counts."""
    rows = [
        ("head link pointers", report_dict["head_blocks"]["link_pointers"]),
        ("head vocabulary", report_dict["head_blocks"]["vocabulary"]),
        ("head postings", report_dict["head_blocks"]["postings"]),
        ("head trailing nulls", report_dict["head_blocks"]["trailing_null_bytes"]),
        ("full link pointers", report_dict["full_blocks"]["link_pointers"]),
        ("full postings", report_dict["full_blocks"]["postings"]),
        ("full trailing nulls", report_dict["full_blocks"]["trailing_null_bytes"]),
        ("tail docnums", report_dict["tail_blocks"]["docnums"]),
        ("tail postings", report_dict["tail_blocks"]["postings"]),
        ("tail unused", report_dict["tail_blocks"]["unused_bytes"]),
        ("hash array", report_dict["hash_array"]),
    ]
    labels = [r[0] for r in rows][::-1]
    values = [r[1] for r in rows][::-1]
    fig, ax = plt.subplots()
    ax.barh(labels, values, color="#4c72b0")
    ax.set_xlabel("bytes")
    total = report_dict["total_bytes"]
    bpp = report_dict["bytes_per_posting"]
    ax.set_title(f"total {total:,} bytes, {bpp:.3f} bytes/posting")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_histogram_figure(histogram: dict, path: str) -> None:
    """Grid of posting counts: byte-code pair size vs packed size."""
    counts = histogram["counts"]
    total = histogram["total"] or 1
    pair_sizes = sorted(counts)
    packed_sizes = sorted({p for row in counts.values() for p in row})
    fig, ax = plt.subplots()
    for y, packed in enumerate(packed_sizes):
        for x, pair in enumerate(pair_sizes):
            n = counts.get(pair, {}).get(packed, 0)
            if not n:
                continue
            shade = "#4c72b0" if packed < pair else ("#c44e52" if packed > pair else "#999999")
            ax.text(x, y, f"{100.0 * n / total:.2f}%", ha="center", va="center", color=shade)
    ax.set_xticks(range(len(pair_sizes)), [str(p) for p in pair_sizes])
    ax.set_yticks(range(len(packed_sizes)), [str(p) for p in packed_sizes])
    ax.set_xlim(-0.5, len(pair_sizes) - 0.5)
    ax.set_ylim(len(packed_sizes) - 0.5, -0.5)
    ax.set_xlabel("independent byte-code pair size (bytes)")
    ax.set_ylabel("packed size (bytes)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
