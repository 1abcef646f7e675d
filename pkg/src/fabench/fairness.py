"""Group fairness metrics over task scores, with bootstrap significance.

Groups carry per-sample accuracy-convention scores in [0, 1] (1-WER or 1-CER
per utterance, macro-F1, or plain accuracy). The three metrics are the
worst-group score (minimum group accuracy), the performance gap (max minus
min), and disparate impact (min over max), with the four-fifths rule applied
to the latter. Confidence intervals come from a percentile bootstrap that
resamples each group's per-sample scores independently.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DataError, DomainError, EmptyInputError

__all__ = [
    "Task",
    "GroupResult",
    "FairnessReport",
    "worst_group_score",
    "performance_gap",
    "disparate_impact",
    "bootstrap_report",
    "gap_reduction",
    "load_results_csv",
    "load_groups_json",
    "report_to_json",
    "report_to_text",
]

FOUR_FIFTHS_THRESHOLD = 0.8


class Task(str, Enum):
    """Score conventions: which accuracy each per-sample score represents."""

    SPEECH_NON_TONAL = "speech_non_tonal"  # 1 - WER
    SPEECH_TONAL = "speech_tonal"  # 1 - CER
    MUSIC_F1 = "music_f1"
    SCENE_ACCURACY = "scene_accuracy"


@dataclass(frozen=True)
class GroupResult:
    """Per-group scores; summary_acc is the mean score as a percentage."""

    group_id: str
    task: Task
    per_sample_scores: np.ndarray | None = None
    summary_acc: float | None = None

    def __post_init__(self):
        scores = self.per_sample_scores
        if scores is not None:
            scores = np.asarray(scores, dtype=float)
            if scores.size == 0:
                raise EmptyInputError(f"group {self.group_id}: no scores")
            if np.any(scores < 0) or np.any(scores > 1):
                raise DataError(f"group {self.group_id}: scores must lie in [0, 1]")
            object.__setattr__(self, "per_sample_scores", scores)
            mean_pct = float(scores.mean() * 100.0)
            if self.summary_acc is None:
                object.__setattr__(self, "summary_acc", mean_pct)
            elif abs(self.summary_acc - mean_pct) > 1e-9:
                raise DataError(
                    f"group {self.group_id}: summary_acc {self.summary_acc} "
                    f"inconsistent with scores mean {mean_pct}"
                )
        elif self.summary_acc is None:
            raise DataError(f"group {self.group_id}: need scores or summary_acc")

    @classmethod
    def from_error_rates(cls, group_id: str, task: Task, error_rates) -> "GroupResult":
        """Per-utterance accuracy = max(0, 1 - error_rate), clipped into [0, 1]."""
        rates = np.asarray(error_rates, dtype=float)
        return cls(group_id, task, np.clip(1.0 - rates, 0.0, 1.0))


@dataclass(frozen=True)
class FairnessReport:
    wgs: float  # percentage
    gap: float  # percentage points
    rho: float
    four_fifths_pass: bool
    per_group: dict  # group_id -> {"acc": pct, "n": count, "task": name}
    ci_wgs: tuple[float, float] | None = None
    ci_gap: tuple[float, float] | None = None
    ci_rho: tuple[float, float] | None = None
    n_boot: int = 0
    seed: int | None = None
    gap_significant: bool | None = None
    mixed_tasks: bool = False
    ci_level: float = field(default=0.99)


def _summaries(groups: list[GroupResult]) -> np.ndarray:
    return np.asarray([g.summary_acc for g in groups], dtype=float)


def worst_group_score(groups: list[GroupResult]) -> float:
    """Minimum group accuracy, in percent."""
    if not groups:
        raise EmptyInputError("worst_group_score needs at least one group")
    return float(_summaries(groups).min())


def performance_gap(groups: list[GroupResult]) -> float:
    """Maximum pairwise accuracy difference (= max - min), percentage points."""
    if len(groups) < 2:
        raise DomainError("performance_gap needs at least two groups")
    accs = _summaries(groups)
    return float(accs.max() - accs.min())


def disparate_impact(groups: list[GroupResult]) -> float:
    """Worst-to-best accuracy ratio; below 0.8 fails the four-fifths rule."""
    if len(groups) < 2:
        raise DomainError("disparate_impact needs at least two groups")
    accs = _summaries(groups)
    if accs.max() <= 0:
        raise DataError("disparate_impact undefined: best group accuracy is 0")
    return float(accs.min() / accs.max())


def _point_metrics(accs: np.ndarray) -> tuple[float, float, float]:
    return (
        float(accs.min()),
        float(accs.max() - accs.min()),
        float(accs.min() / accs.max()),
    )


def bootstrap_report(
    groups: list[GroupResult], n_boot: int = 1000, seed: int = 0
) -> FairnessReport:
    """Point metrics from the original data plus percentile 99% bootstrap CIs.

    Each replicate resamples every group's per-sample scores with replacement
    (the per-utterance score is the resampling unit). A gap is significant
    when the CI of the gap excludes zero.
    """
    if len(groups) < 2:
        raise DomainError("bootstrap_report needs at least two groups")
    if n_boot < 100:
        raise DomainError("n_boot must be >= 100")
    for g in groups:
        if g.per_sample_scores is None:
            raise DataError(f"group {g.group_id} has no per-sample scores")
    accs = _summaries(groups)
    wgs, gap, rho = _point_metrics(accs)

    streams = np.random.SeedSequence(seed).spawn(n_boot)
    reps = np.empty((n_boot, 3))
    scores = [g.per_sample_scores for g in groups]
    for b in range(n_boot):
        rng = np.random.default_rng(streams[b])  # self-contained per replicate
        means = np.empty(len(groups))
        for gi, s in enumerate(scores):
            idx = rng.integers(0, s.size, s.size)
            means[gi] = s[idx].mean()
        means *= 100.0
        reps[b] = _point_metrics(means)
    alpha = 0.01
    lo_q, hi_q = 100 * alpha / 2, 100 * (1 - alpha / 2)
    ci = [tuple(np.percentile(reps[:, i], [lo_q, hi_q])) for i in range(3)]

    tasks = {g.task for g in groups}
    return FairnessReport(
        wgs=wgs,
        gap=gap,
        rho=rho,
        four_fifths_pass=rho >= FOUR_FIFTHS_THRESHOLD,
        per_group={
            g.group_id: {
                "acc": g.summary_acc,
                "n": int(g.per_sample_scores.size),
                "task": g.task.value,
            }
            for g in groups
        },
        ci_wgs=(float(ci[0][0]), float(ci[0][1])),
        ci_gap=(float(ci[1][0]), float(ci[1][1])),
        ci_rho=(float(ci[2][0]), float(ci[2][1])),
        n_boot=n_boot,
        seed=seed,
        gap_significant=bool(ci[1][0] > 0.0),
        mixed_tasks=len(tasks) > 1,
    )


def point_report(groups: list[GroupResult]) -> FairnessReport:
    """Metrics without bootstrap (groups may carry only summary accuracies)."""
    if len(groups) < 2:
        raise DomainError("need at least two groups")
    accs = _summaries(groups)
    wgs, gap, rho = _point_metrics(accs)
    tasks = {g.task for g in groups}
    return FairnessReport(
        wgs=wgs,
        gap=gap,
        rho=rho,
        four_fifths_pass=rho >= FOUR_FIFTHS_THRESHOLD,
        per_group={
            g.group_id: {
                "acc": g.summary_acc,
                "n": int(g.per_sample_scores.size) if g.per_sample_scores is not None else 0,
                "task": g.task.value,
            }
            for g in groups
        },
        mixed_tasks=len(tasks) > 1,
    )


def gap_reduction(baseline: FairnessReport, candidate: FairnessReport) -> float:
    """Percentage reduction of the performance gap relative to baseline."""
    if baseline.gap <= 0:
        raise DomainError("gap_reduction undefined for zero baseline gap")
    return 100.0 * (baseline.gap - candidate.gap) / baseline.gap


# ---------------------------------------------------------------------------
# CSV / JSON interfaces

def load_groups_json(path: str) -> dict:
    """groups JSON: {group_id: {"label": str, "task": task name}}."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    out = {}
    for gid, info in raw.items():
        try:
            out[gid] = {"label": info.get("label", gid), "task": Task(info["task"])}
        except (KeyError, ValueError) as exc:
            raise DataError(f"groups JSON: bad entry for {gid!r}: {exc}") from exc
    return out


def load_results_csv(path: str, groups: dict) -> list[GroupResult]:
    """results CSV columns: sample_id, group_id, task, score (or error_rate).

    Raises DataError naming the offending line numbers for malformed rows.
    """
    by_group: dict[str, list[float]] = {}
    bad_lines = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty results CSV")
        cols = set(reader.fieldnames)
        if "score" not in cols and "error_rate" not in cols:
            raise DataError(f"{path}: need a score or error_rate column")
        for lineno, row in enumerate(reader, start=2):
            gid = (row.get("group_id") or "").strip()
            if not gid:
                bad_lines.append(lineno)
                continue
            try:
                if row.get("score") not in (None, ""):
                    val = float(row["score"])
                else:
                    val = max(0.0, 1.0 - float(row["error_rate"]))
                if not (0.0 <= val <= 1.0) or not np.isfinite(val):
                    raise ValueError
            except (TypeError, ValueError, KeyError):
                bad_lines.append(lineno)
                continue
            by_group.setdefault(gid, []).append(val)
    if bad_lines:
        shown = ", ".join(str(n) for n in bad_lines[:10])
        more = "" if len(bad_lines) <= 10 else f" (+{len(bad_lines) - 10} more)"
        raise DataError(f"{path}: malformed rows at lines {shown}{more}")
    results = []
    for gid, vals in sorted(by_group.items()):
        if gid not in groups:
            raise DataError(f"{path}: group_id {gid!r} not present in groups JSON")
        results.append(GroupResult(gid, groups[gid]["task"], np.asarray(vals)))
    return results


def report_to_json(report: FairnessReport) -> str:
    payload = {
        "wgs": report.wgs,
        "gap": report.gap,
        "rho": report.rho,
        "four_fifths_pass": report.four_fifths_pass,
        "per_group": report.per_group,
        "ci_level": report.ci_level,
        "ci_wgs": report.ci_wgs,
        "ci_gap": report.ci_gap,
        "ci_rho": report.ci_rho,
        "n_boot": report.n_boot,
        "seed": report.seed,
        "gap_significant": report.gap_significant,
        "mixed_tasks": report.mixed_tasks,
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def _fmt_ci(ci) -> str:
    return "" if ci is None else f"  [{ci[0]:.1f}, {ci[1]:.1f}]"


def report_to_text(report: FairnessReport) -> str:
    """Aligned text mirroring the bottom metric rows plus the verdict line."""
    lines = []
    lines.append(f"{'group':<16}{'acc %':>8}  {'n':>6}  task")
    for gid, info in sorted(report.per_group.items()):
        lines.append(
            f"{gid:<16}{info['acc']:>8.1f}  {info['n']:>6d}  {info['task']}"
        )
    lines.append("")
    lines.append(f"{'WGS':<8}{report.wgs:>8.1f}{_fmt_ci(report.ci_wgs)}")
    lines.append(f"{'Delta':<8}{report.gap:>8.1f}{_fmt_ci(report.ci_gap)}")
    rho_ci = (
        ""
        if report.ci_rho is None
        else f"  [{report.ci_rho[0]:.2f}, {report.ci_rho[1]:.2f}]"
    )
    lines.append(f"{'rho':<8}{report.rho:>8.2f}{rho_ci}")
    verdict = "PASS" if report.four_fifths_pass else "FAIL"
    lines.append(
        f"{verdict} four-fifths rule (rho = {report.rho:.2f}, threshold 0.80)"
    )
    if report.gap_significant is not None:
        lines.append(
            "gap significant at 1% (bootstrap CI excludes 0)"
            if report.gap_significant
            else "gap not significant at 1% (bootstrap CI includes 0)"
        )
    if report.mixed_tasks:
        lines.append("note: accuracy conventions differ across groups")
    return "\n".join(lines) + "\n"
