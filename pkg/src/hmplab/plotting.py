"""Optional figure rendering for CLI reports. Import cost is deferred to
call time and the Agg backend is forced so no display is needed."""
from __future__ import annotations

from typing import Mapping, Sequence


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    return plt


def render_sweep_figure(rows: Sequence[Mapping], path: str) -> str:
    """Cost-versus-n lines for a sweep: quantum total alongside the exact
    classical minimum where it was computed."""
    plt = _pyplot()
    ns = [row["n"] for row in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ns, [row["quantum_total_bits"] for row in rows], "o-", label="quantum total")
    ax.plot(ns, [row["quantum_qubits"] for row in rows], "s--", label="qubits")
    classical = [(row["n"], row["classical_min_bits"]) for row in rows
                 if row.get("classical_min_bits") is not None]
    if classical:
        ax.plot([x for x, _ in classical], [y for _, y in classical],
                "d-", label="classical minimum")
    ax.set_xlabel("n (bits of c)")
    ax.set_ylabel("communication cost (bits)")
    ax.set_xticks(ns)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_extraction_figure(s_counts: Mapping[int, int],
                             success_rates: Mapping[int, float],
                             path: str) -> str:
    """Histogram of extracted-pair counts plus per-matching parity success."""
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    svals = sorted(s_counts)
    ax1.bar(svals, [s_counts[s] for s in svals], color="#4878cf")
    ax1.set_xlabel("pairs extracted per c")
    ax1.set_ylabel("count")
    ax1.set_xticks(svals)
    js = sorted(success_rates)
    ax2.bar(js, [success_rates[j] for j in js], color="#6acc65")
    ax2.set_ylim(0, 1.05)
    ax2.set_xlabel("matching index")
    ax2.set_ylabel("parity success rate")
    ax2.set_xticks(js)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
