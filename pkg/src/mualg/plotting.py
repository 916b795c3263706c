"""PNG figures for reports, drawn off-screen."""
from __future__ import annotations

import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

_COUNT = re.compile(r"(\d+)/(\d+) passed")


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_suite(result, path) -> Path:
    """Passed and failed trial counts per check."""
    names, good, bad = [], [], []
    for r in result.rows:
        m = _COUNT.match(r.detail)
        k, n = (int(m.group(1)), int(m.group(2))) if m else (int(r.passed), 1)
        names.append(r.check)
        good.append(k)
        bad.append(n - k)
    fig, ax = plt.subplots(figsize=(8, 0.45 * max(len(names), 2) + 1))
    ys = range(len(names))
    ax.barh(ys, good, color="#4c8c4a", label="passed")
    ax.barh(ys, bad, left=good, color="#c0392b", label="failed")
    ax.set_yticks(list(ys))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xscale("symlog")
    ax.set_xlabel("trials")
    ax.set_title(f"{result.name}: {'pass' if result.ok else 'FAIL'}")
    ax.legend(loc="lower right", fontsize=8)
    return _save(fig, path)


def plot_trace(values, path, title: str = "approximants") -> Path:
    """Number of states in each approximant."""
    sizes = [bin(v).count("1") if isinstance(v, int) else sum(bin(x).count("1") for x in v)
             for v in values]
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.plot(range(len(sizes)), sizes, marker="o")
    ax.set_xlabel("stage")
    ax.set_ylabel("states")
    ax.set_title(title)
    return _save(fig, path)


def plot_cover_graph(graph, path, show=str) -> Path:
    g = nx.MultiDiGraph()
    labels = {i: ", ".join(show(c) for c in v) for i, v in enumerate(graph.vertices)}
    g.add_nodes_from(labels)
    for s, lab, t in graph.edges:
        g.add_edge(s, t)
    fig, ax = plt.subplots(figsize=(5, 4))
    pos = nx.spring_layout(g, seed=0) if len(g) > 1 else {0: (0, 0)}
    nx.draw_networkx(g, pos, ax=ax, labels=labels, node_color="#dde6f0", font_size=7,
                     connectionstyle="arc3,rad=0.15")
    ax.set_title("cover graph" + ("" if graph.closed else " (budget exhausted)"))
    ax.axis("off")
    return _save(fig, path)


def plot_lattice(c, path) -> Path:
    """Hasse diagram of a cut lattice, ranked by cut size."""
    p = c.as_poset()
    h = p.hasse()
    ranks: dict[int, list] = {}
    for i, cut in enumerate(c.cuts):
        ranks.setdefault(bin(cut).count("1"), []).append(i)
    pos = {}
    for r, idx in ranks.items():
        for k, i in enumerate(idx):
            pos[i] = (k - (len(idx) - 1) / 2, r)
    fig, ax = plt.subplots(figsize=(5, 4))
    nx.draw_networkx(h, pos, ax=ax, labels={i: c.label(cut) for i, cut in enumerate(c.cuts)},
                     node_color="#f0e6d2", font_size=7, arrows=False)
    ax.set_title(f"completion: {len(c)} cuts")
    ax.axis("off")
    return _save(fig, path)
