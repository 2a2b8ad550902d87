"""Matplotlib figures rendered next to the delimited reports.

Imported lazily so the library works without a display stack; the Agg
backend is forced before pyplot loads.  PNG metadata is pinned so the
same report renders to the same bytes.
"""

from __future__ import annotations

from pathlib import Path

_SAVE_KWARGS = {"dpi": 130, "metadata": {"Software": "cycloscope"}}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    return plt


def _interval_floats(est) -> tuple[float, float]:
    return float(est.lo), float(est.hi)


def survey_figures(report, outdir) -> list[Path]:
    """Render the index histogram and the running-density plot.

    Creates ``outdir`` if needed and returns the files written.
    """
    plt = _pyplot()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []

    hist = report.index_histogram
    shown = {s: c for s, c in hist.items() if s <= 40}
    overflow = sum(c for s, c in hist.items() if s > 40)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    xs = sorted(shown)
    ax.bar([str(s) for s in xs], [shown[s] for s in xs], color="#33658a")
    if overflow:
        ax.bar([">40"], [overflow], color="#86bbd8")
    ax.set_xlabel("index s = (p-1) / ord_p(ell)")
    ax.set_ylabel("primes")
    ax.set_title(f"index histogram, ell={report.ell}, primes up to {report.limit}")
    ax.tick_params(axis="x", labelrotation=90, labelsize=7)
    fig.tight_layout()
    path = outdir / "index_histogram.png"
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    xs = [row[0] for row in report.running]
    totals = [row[1] + row[2] + row[3] for row in report.running]
    known = [
        (row[1] / t if t else 0.0) for row, t in zip(report.running, totals)
    ]
    upper = [
        ((row[1] + row[3]) / t if t else 0.0)
        for row, t in zip(report.running, totals)
    ]
    ax.plot(xs, known, color="#33658a", label="member share (decided)")
    if report.undecided_count:
        ax.plot(xs, upper, color="#86bbd8", label="member share incl. undecided")
        ax.fill_between(xs, known, upper, color="#86bbd8", alpha=0.3)
    ref = report.references.get("member_density_lower_bound")
    if ref is not None:
        lo, hi = _interval_floats(ref)
        ax.axhspan(lo, hi, color="#f26419", alpha=0.6, label="proved lower bound")
    ax.set_xlabel("primes up to")
    ax.set_ylabel("share")
    ax.set_title(f"running member share, ell={report.ell}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = outdir / "member_share.png"
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
    paths.append(path)
    return paths


def golomb_figures(report, outdir) -> list[Path]:
    """Render the running share of index-r primes against the series value."""
    plt = _pyplot()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    xs = [row[0] for row in report.running]
    share = [(m / t if t else 0.0) for _, m, t in report.running]
    ax.plot(xs, share, color="#33658a", label=f"share with index exactly {report.r}")
    lo, hi = _interval_floats(report.reference)
    ax.axhspan(lo, hi, color="#f26419", alpha=0.6, label="series enclosure")
    ax.set_xlabel("primes up to")
    ax.set_ylabel("share")
    ax.set_title(f"running index-{report.r} share for a={report.a}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = outdir / "index_share.png"
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
    return [path]
