"""Bundled reference evaluation results.

Group-level task scores for the seven front-ends on the three benchmark
domains (speech tonal/non-tonal, music non-Western/Western, scenes northern/
southern European cities), plus each front-end's measured inference overhead.
Speech entries are error rates (CER for tonal, WER for non-tonal); music
entries are macro-F1; scene entries are accuracies. All values in percent.

These are inputs to the fairness engine (the figure and report commands
recompute every fairness metric from them); the package never re-derives
them from raw corpora.
"""

from __future__ import annotations

from .fairness import GroupResult, Task

__all__ = [
    "SPEECH_ERROR_RATES",
    "MUSIC_F1",
    "SCENE_ACCURACY",
    "OVERHEAD_PERCENT",
    "reference_groups",
    "reference_domains",
]

# Speech: (tonal CER %, non-tonal WER %)
SPEECH_ERROR_RATES = {
    "mel": (31.2, 18.7),
    "erb": (26.4, 17.8),
    "bark": (27.2, 18.1),
    "cqt": (28.8, 19.2),
    "leaf": (25.8, 17.5),
    "sincnet": (30.8, 18.5),
    "mel-pcen": (28.9, 18.2),
}

# Music: (non-Western F1 %, Western F1 %)
MUSIC_F1 = {
    "mel": (56.7, 72.4),
    "erb": (62.8, 73.1),
    "bark": (61.9, 72.8),
    "cqt": (65.3, 72.9),
    "leaf": (62.4, 73.5),
    "sincnet": (58.3, 72.5),
    "mel-pcen": (59.2, 72.6),
}

# Scenes: (Europe-1 northern acc %, Europe-2 southern acc %); cqt not reported
SCENE_ACCURACY = {
    "mel": (71.2, 76.8),
    "erb": (72.6, 77.2),
    "bark": (72.2, 76.9),
    "leaf": (72.5, 77.5),
    "sincnet": (71.4, 76.9),
    "mel-pcen": (72.3, 77.1),
}

# Relative inference cost overhead vs mel, percent
OVERHEAD_PERCENT = {
    "mel": 0.0,
    "erb": 1.0,
    "bark": 1.0,
    "cqt": 15.0,
    "leaf": 8.0,
    "sincnet": 6.0,
    "mel-pcen": 4.0,
}

DOMAINS = ("speech", "music", "scenes")


def reference_groups(domain: str, frontend: str) -> list[GroupResult]:
    """The two demographic groups of one domain as GroupResult summaries."""
    if domain == "speech":
        cer, wer = SPEECH_ERROR_RATES[frontend]
        return [
            GroupResult("tonal", Task.SPEECH_TONAL, summary_acc=100.0 - cer),
            GroupResult("non_tonal", Task.SPEECH_NON_TONAL, summary_acc=100.0 - wer),
        ]
    if domain == "music":
        non_west, west = MUSIC_F1[frontend]
        return [
            GroupResult("non_western", Task.MUSIC_F1, summary_acc=non_west),
            GroupResult("western", Task.MUSIC_F1, summary_acc=west),
        ]
    if domain == "scenes":
        eu1, eu2 = SCENE_ACCURACY[frontend]
        return [
            GroupResult("europe_1", Task.SCENE_ACCURACY, summary_acc=eu1),
            GroupResult("europe_2", Task.SCENE_ACCURACY, summary_acc=eu2),
        ]
    raise KeyError(f"unknown domain {domain!r}")


def reference_domains(frontend: str) -> list[str]:
    """Domains with reference results for the front-end."""
    out = []
    for domain, table in (
        ("speech", SPEECH_ERROR_RATES),
        ("music", MUSIC_F1),
        ("scenes", SCENE_ACCURACY),
    ):
        if frontend in table:
            out.append(domain)
    return out
