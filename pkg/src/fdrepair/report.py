"""JSON and text renderings of repair results.

Reports contain no timestamps or timings unless asked for, so identical
inputs and seeds produce byte-identical output.
"""

from __future__ import annotations

import json
from typing import Optional

from fdrepair.datarepair import EmptyRepair, RepairResult
from fdrepair.evaluation import QualityScores
from fdrepair.fds import FDSet, dedupe, format_extension
from fdrepair.multirepair import RepairFrontier
from fdrepair.relation import VInstance
from fdrepair.search import SearchStats

TAU_NOTE = (
    "relative budgets are measured against delta_P, the computable upper bound "
    "on the minimum number of cell changes"
)


def _fd_strings(fds: FDSet, instance: VInstance) -> list[str]:
    return [fd.format(instance.schema) for fd in fds]


def repair_report(
    result: RepairResult | EmptyRepair,
    fds: FDSet,
    instance: VInstance,
    *,
    weight: str,
    k: int,
    seed: int,
    tau_rel: Optional[float] = None,
    timing: Optional[float] = None,
) -> dict:
    report: dict = {
        "status": "repaired" if isinstance(result, RepairResult) else "no_repair",
        "tau": result.tau,
        "weight": weight,
        "heuristic_k": k,
        "seed": seed,
        "fds": _fd_strings(fds, instance),
    }
    if tau_rel is not None:
        report["tau_rel"] = tau_rel
        report["tau_note"] = TAU_NOTE
    if isinstance(result, EmptyRepair):
        report["reason"] = result.reason
    else:
        schema = instance.schema
        report.update(
            {
                "repaired_fds": _fd_strings(result.sigma_prime, instance),
                "repaired_fds_distinct": _fd_strings(dedupe(result.sigma_prime), instance),
                "extensions": format_extension(result.extension, schema),
                "cell_edits": [
                    [
                        e.tuple_id,
                        schema.attributes[e.attr],
                        instance.render_cell(e.old),
                        instance.render_cell(e.new),
                    ]
                    for e in result.edits
                ],
                "dist_c": result.dist_c,
                "dist_d": result.dist_d,
                "delta_p": result.delta_p,
                "cover_size": result.cover_size,
            }
        )
    report["search"] = stats_json(result.stats, timing)
    return report


def stats_json(stats: SearchStats, timing: Optional[float] = None) -> dict:
    out = stats.to_json()
    if timing is not None:
        out["wall_seconds"] = round(timing, 6)
    return out


def frontier_report(
    frontier: RepairFrontier,
    fds: FDSet,
    instance: VInstance,
    root_delta_p: int,
    *,
    weight: str,
    k: int,
    seed: int,
    timing: Optional[float] = None,
) -> list[dict]:
    entries = []
    for e in frontier.entries:
        band = {"tau_range": [e.tau_low, e.tau_high]}
        if root_delta_p > 0:
            band["tau_rel_range"] = [
                round(e.tau_low / root_delta_p, 6),
                round(e.tau_high / root_delta_p, 6),
            ]
        band["repair"] = repair_report(
            e.repair, fds, instance, weight=weight, k=k, seed=seed, timing=timing
        )
        entries.append(band)
    return entries


def to_json(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def repair_table(report: dict) -> str:
    lines = [f"status      {report['status']}", f"tau         {report['tau']}"]
    if report["status"] == "no_repair":
        lines.append(f"reason      {report['reason']}")
        return "\n".join(lines) + "\n"
    for key in ("dist_c", "dist_d", "delta_p", "cover_size"):
        lines.append(f"{key:<12}{report[key]}")
    lines.append("repaired FDs")
    lines.extend(f"  {fd}" for fd in report["repaired_fds_distinct"])
    edits = report["cell_edits"]
    if edits:
        rows = [("tuple", "attribute", "old", "new")] + [tuple(str(x) for x in e) for e in edits]
        widths = [max(len(r[c]) for r in rows) for c in range(4)]
        lines.append("cell edits")
        for r in rows:
            lines.append("  " + "  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def scores_table(scores: QualityScores) -> str:
    data = scores.to_json()
    width = max(len(k) for k in data)
    return "".join(f"{k:<{width}}  {v:.4f}\n" for k, v in data.items())
