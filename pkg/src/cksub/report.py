"""CSV rows for solver runs and summary figures drawn next to the CSV."""

import csv
from collections import defaultdict
from pathlib import Path

from .branchcut import CONFIGS, SolveReport, WeightedInstance

CSV_HEADER = ("instance", "config", "n", "m", "k", "status", "objective", "bound", "gap",
              "nodes", "cuts_conn", "cuts_ind", "cuts_gen", "cuts_mw", "seconds")


def _num(x) -> str:
    if isinstance(x, float) and x.is_integer():
        return str(int(x))
    return f"{x:.6g}" if isinstance(x, float) else str(x)


def csv_row(inst: WeightedInstance, config: str, rep: SolveReport, seconds=True) -> list:
    """One CSV row; ``seconds=False`` writes NA so reruns stay byte-identical."""
    c = rep.cuts
    return [inst.name or "-", config, inst.graph.n, inst.graph.m, inst.k, rep.status,
            rep.objective, _num(rep.bound), f"{rep.gap:.4f}", rep.nodes,
            c.get("conn", 0), c.get("ind", 0), c.get("gen", 0), c.get("mw", 0),
            f"{rep.seconds:.3f}" if seconds else "NA"]


def append_csv(path, rows):
    """Append rows, writing the header first when the file is new or empty."""
    path = Path(path)
    fresh = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        if fresh:
            out.writerow(CSV_HEADER)
        out.writerows(rows)


def write_csv(path, rows):
    with Path(path).open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(CSV_HEADER)
        out.writerows(rows)


def read_csv(path) -> list:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and tuple(rows[0].keys()) != CSV_HEADER:
        raise ValueError(f"{path}: unexpected CSV header")
    return rows


def summarize(rows) -> dict:
    """Per config: runs, solved, mean gap, total nodes, total cuts per family."""
    out = defaultdict(lambda: {"runs": 0, "solved": 0, "gap": 0.0, "nodes": 0,
                               "conn": 0, "ind": 0, "gen": 0, "mw": 0})
    for r in rows:
        s = out[r["config"]]
        s["runs"] += 1
        s["solved"] += r["status"] == "optimal"
        s["gap"] += float(r["gap"])
        s["nodes"] += int(r["nodes"])
        for fam in ("conn", "ind", "gen", "mw"):
            s[fam] += int(r["cuts_" + fam])
    for s in out.values():
        s["gap"] /= max(1, s["runs"])
    order = [c for c in CONFIGS if c in out] + sorted(set(out) - set(CONFIGS))
    return {c: out[c] for c in order}


def plot_summary(csv_path, stem=None) -> list:
    """Bar charts of mean gap, node totals and cut totals per configuration.

    Figures are written next to the CSV as ``<stem>_gap.png`` etc.; returns
    the paths written.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    csv_path = Path(csv_path)
    stem = stem or csv_path.stem
    summary = summarize(read_csv(csv_path))
    if not summary:
        raise ValueError(f"{csv_path}: no rows to plot")
    configs = list(summary)
    written = []
    plt.rcParams.update({"font.size": 9, "axes.spines.top": False, "axes.spines.right": False,
                         "svg.hashsalt": "cks", "path.simplify": True})

    def save(fig, name):
        for ax in fig.axes:
            ax.set_ylim(bottom=0)
        path = csv_path.with_name(f"{stem}_{name}.png")
        fig.tight_layout()
        fig.savefig(path, dpi=120, metadata={"Software": None})
        plt.close(fig)
        written.append(path)

    for key, label in (("gap", "mean final gap [%]"), ("nodes", "total B&C nodes")):
        fig, ax = plt.subplots(figsize=(4.2, 3.0))
        vals = [summary[c][key] for c in configs]
        ax.bar(configs, vals, color="0.45")
        ax.set_ylabel(label)
        for i, c in enumerate(configs):
            ax.annotate(f"{summary[c]['solved']}/{summary[c]['runs']}", (i, vals[i]),
                        ha="center", va="bottom", fontsize=7)
        save(fig, key)

    fig, ax = plt.subplots(figsize=(4.8, 3.0))
    bottom = [0] * len(configs)
    for fam, shade in (("conn", "0.2"), ("ind", "0.45"), ("gen", "0.65"), ("mw", "0.85")):
        vals = [summary[c][fam] for c in configs]
        ax.bar(configs, vals, bottom=bottom, color=shade, label=fam, edgecolor="black", linewidth=0.4)
        bottom = [b + v for b, v in zip(bottom, vals)]
    ax.set_ylabel("cuts added")
    ax.legend(frameon=False, fontsize=7)
    save(fig, "cuts")
    return written


def format_summary(summary) -> str:
    lines = ["config   runs solved  mean_gap    nodes     conn      ind      gen       mw"]
    for c, s in summary.items():
        lines.append(f"{c:<8} {s['runs']:>4} {s['solved']:>6} {s['gap']:>9.4f} {s['nodes']:>8} "
                     f"{s['conn']:>8} {s['ind']:>8} {s['gen']:>8} {s['mw']:>8}")
    return "\n".join(lines)
