"""Benchmark reporting: fixed-layout table, CSV rows, and scaling figures."""

from __future__ import annotations

import csv
import os

BENCH_FIELDS = [
    "n",
    "k",
    "seed",
    "psi",
    "psi_ceil",
    "phase1_points",
    "phase1_bound",
    "bound_ok",
    "candidates_evaluated",
    "f_star",
    "used_path",
    "wall_time_ms",
    "oracle_match",
]


def format_table(rows) -> str:
    header = (
        f"{'n':>5} {'k':>3} {'seed':>8} {'psi':>8} {'phase1':>10} "
        f"{'bound':>12} {'ok':>3} {'cands':>10} {'f_star':>12} {'ms':>9}"
    )
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r['n']:>5} {r['k']:>3} {r['seed']:>8} {r['psi']:>8.4f} "
            f"{r['phase1_points']:>10} {r['phase1_bound']:>12} "
            f"{'y' if r['bound_ok'] else 'N':>3} {r['candidates_evaluated']:>10} "
            f"{r['f_star']:>12.6g} {r['wall_time_ms']:>9.2f}"
        )
    return "\n".join(lines)


def format_csv(rows) -> str:
    out = [",".join(BENCH_FIELDS)]
    for r in rows:
        out.append(",".join(str(r.get(f, "")) for f in BENCH_FIELDS))
    return "\n".join(out)


def write_csv(rows, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS)
        writer.writeheader()
        for r in rows:
            writer.writerow({f: r.get(f, "") for f in BENCH_FIELDS})


def render_figures(rows, directory):
    """Scaling figures next to the CSV: phase-1 point growth and wall time
    against dimension.  Returns the written file paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(directory, exist_ok=True)
    paths = []
    ns = sorted({r["n"] for r in rows})

    def series(field):
        return [
            sum(r[field] for r in rows if r["n"] == n)
            / max(1, sum(1 for r in rows if r["n"] == n))
            for n in ns
        ]

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, series("phase1_points"), "o-", label="phase-1 points (mean)")
    ax.plot(ns, series("phase1_bound"), "s--", label="combinatorial bound")
    ax.set_xlabel("dimension n")
    ax.set_ylabel("points")
    if len(ns) > 1:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.legend()
    ax.set_title("Phase-1 candidate growth")
    fig.tight_layout()
    p = os.path.join(directory, "phase1_scaling.png")
    fig.savefig(p, dpi=150)
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, series("wall_time_ms"), "o-", color="tab:red")
    ax.set_xlabel("dimension n")
    ax.set_ylabel("wall time (ms, mean)")
    ax.set_title("Solve time")
    fig.tight_layout()
    p = os.path.join(directory, "solve_time.png")
    fig.savefig(p, dpi=150)
    plt.close(fig)
    paths.append(p)
    return paths
