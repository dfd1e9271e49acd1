"""Figure rendering for sweep reports: per-method means against the
demand-supply ratio, written as PNG files next to the delimited output."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_STYLE = {"ceg": dict(color="tab:blue", marker="o"),
          "random": dict(color="tab:orange", marker="s"),
          "topk": dict(color="tab:green", marker="^"),
          "oracle": dict(color="tab:red", marker="d")}

_FIGURES = (("handled_tags", "Handled tags", "handled_vs_theta.png"),
            ("utilized_cost", "Utilized cost", "cost_vs_theta.png"),
            ("runtime_ms", "Runtime (ms)", "runtime_vs_theta.png"))


def _mean_by_theta(records, metric):
    acc = defaultdict(list)
    for r in records:
        acc[(r.method, r.theta)].append(getattr(r, metric))
    series = defaultdict(list)
    for (method, theta), values in sorted(acc.items()):
        series[method].append((theta, sum(values) / len(values)))
    return series


def render_figures(records, out_dir) -> list[Path]:
    """Render the three standard sweep figures; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for metric, label, filename in _FIGURES:
        series = _mean_by_theta(records, metric)
        fig, ax = plt.subplots(figsize=(5.0, 3.5))
        for method, points in sorted(series.items()):
            thetas = [t for t, _ in points]
            values = [v for _, v in points]
            ax.plot(thetas, values, label=method.upper() if method == "ceg" else
                    method.capitalize(), **_STYLE.get(method, {}))
        ax.set_xlabel(r"demand-supply ratio $\theta$")
        ax.set_ylabel(label)
        ax.legend()
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        path = out_dir / filename
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
