"""Optional matplotlib rendering of sweep/spectrum data to PNG files.

The deterministic SVG path in :mod:`omcavity.svgplot` is the contractual
output; this module is the convenience report path for people who want
raster figures next to the delimited data.  matplotlib is imported
lazily so the rest of the package works without it.
"""

from __future__ import annotations


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def save_png(series, path: str, x_label: str = "", y_label: str = "",
             title: str = "", dpi: int = 150) -> None:
    """Render the same Series sequence svgplot takes, to a PNG file."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 6))
    try:
        for s in series:
            ax.plot(s.x, s.y,
                    linestyle="--" if s.dashed else "-",
                    color=s.color,
                    label=s.label or None)
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        if title:
            ax.set_title(title)
        if any(s.label for s in series):
            ax.legend(frameon=False)
        fig.savefig(path, dpi=dpi)
    finally:
        plt.close(fig)
