"""Plan reports and plot-ready CSV output."""

import csv
import io
import json
import math

from ._geometry import linear_to_db
from .mimo import cap_sinr_threshold
from .planner import node_sort_key

LINK_HEADER = ("cu_id", "du_id", "slnr_db", "sinr_db", "rate_bps")


def links_csv(links):
    """``cu_id,du_id,slnr_db,sinr_db,rate_bps`` rows, DUs in natural order."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(LINK_HEADER)
    for du in sorted(links, key=node_sort_key):
        m = links[du]
        w.writerow([m.cu_id, m.du_id, repr(m.slnr_db), repr(m.sinr_db), repr(m.rate_bps)])
    return out.getvalue()


def plan_json(plan):
    def clean(v):
        if isinstance(v, float) and math.isinf(v):
            return "-inf" if v < 0 else "inf"
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, list):
            return [clean(x) for x in v]
        return v

    return json.dumps(clean(plan.to_dict()), indent=2) + "\n"


def plan_text(plan):
    lines = [
        f"selected CUs: {', '.join(plan.selected) or '(none)'}",
        f"feasible: {'yes' if plan.feasible else 'no'} "
        f"(target {plan.rate_target / 1e9:.2f} Gbit/s, {plan.satisfied_count}/"
        f"{len(plan.links) + len(plan.unserved)} links at target)",
        "",
        f"{'DU':<8}{'CU':<8}{'SLNR dB':>10}{'SINR dB':>10}{'rate Gb/s':>11}",
    ]
    for du in sorted(plan.links, key=node_sort_key):
        m = plan.links[du]
        flag = "" if m.rate_bps >= plan.rate_target else "  <"
        lines.append(f"{du:<8}{m.cu_id:<8}{m.slnr_db:>10.2f}{m.sinr_db:>10.2f}{m.rate_bps / 1e9:>11.3f}{flag}")
    for du in plan.unserved:
        lines.append(f"{du:<8}{'-':<8}{'':>10}{'':>10}{0.0:>11.3f}  < unserved")
    if plan.bottlenecks:
        lines += ["", "bottlenecks: " + ", ".join(plan.bottlenecks)]
    return "\n".join(lines) + "\n"


def emit_plot_data(metrics, out_dir, radio):
    """Write ``sinr.csv`` and ``rates.csv`` for a set of configurations.

    ``metrics`` maps a column label (e.g. ``"1cu"``) to a ``{du_id:
    LinkMetrics}`` dict. Each file has one row per DU index and one column
    per label, plus constant reference columns for the peak rate and the
    SINR at which the rate saturates. DUs missing from a configuration get
    SINR ``-inf`` and rate 0. Returns the two paths.
    """
    labels = list(metrics)
    dus = sorted({du for links in metrics.values() for du in links}, key=node_sort_key)
    peak = radio.peak_rate_bps
    cap_db = linear_to_db(cap_sinr_threshold(radio))
    paths = []
    for name, col, ref_name, ref, missing in (
        ("sinr.csv", "sinr_db", "cap_sinr_db", cap_db, -math.inf),
        ("rates.csv", "rate_bps", "peak_rate_bps", peak, 0.0),
    ):
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["du_index", "du_id"] + [f"{col}_{lab}" for lab in labels] + [ref_name])
        for idx, du in enumerate(dus, start=1):
            row = [idx, du]
            for lab in labels:
                m = metrics[lab].get(du)
                row.append(repr(getattr(m, col)) if m is not None else repr(missing))
            row.append(repr(ref))
            w.writerow(row)
        path = out_dir / name
        path.write_text(out.getvalue(), encoding="utf-8")
        paths.append(path)
    return paths
