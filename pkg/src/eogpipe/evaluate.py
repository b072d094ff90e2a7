"""Event-level scoring of predictions against ground-truth labels."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .model import EVENT_KINDS, GroundTruthLabel, MovementEvent, MovementKind

MISSED = "Missed"
DEFAULT_TOLERANCE = 0.15


def _zero_row() -> dict[str, int]:
    row = {k.value: 0 for k in EVENT_KINDS}
    row[MISSED] = 0
    return row


@dataclass
class ConfusionMatrix:
    """``counts[true][predicted]`` plus a row of unmatched predictions.

    Column ``Missed`` counts true events with no prediction in tolerance.
    """

    counts: dict[str, dict[str, int]] = field(default_factory=lambda: {k.value: _zero_row() for k in EVENT_KINDS})
    false_positives: dict[str, int] = field(default_factory=lambda: {k.value: 0 for k in EVENT_KINDS})

    @property
    def total(self) -> int:
        return sum(sum(row.values()) for row in self.counts.values())

    @property
    def correct(self) -> int:
        return sum(self.counts[k][k] for k in self.counts)

    @property
    def missed(self) -> int:
        return sum(row[MISSED] for row in self.counts.values())

    @property
    def false_positive_count(self) -> int:
        return sum(self.false_positives.values())

    @property
    def accuracy(self) -> float:
        if self.total == 0:
            return 1.0 if self.false_positive_count == 0 else 0.0
        return self.correct / self.total

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "correct": self.correct,
            "total": self.total,
            "missed": self.missed,
            "false_positives": self.false_positive_count,
            "matrix": self.counts,
            "false_positive_counts": self.false_positives,
        }


def evaluate(
    predicted: Sequence[MovementEvent],
    truth: Sequence[GroundTruthLabel],
    tolerance: float = DEFAULT_TOLERANCE,
) -> ConfusionMatrix:
    """Greedy one-to-one matching by onset proximity.

    Candidate pairs within ``tolerance`` are taken closest first (ties by
    truth index, then prediction index).
    """
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    pairs = []
    for i, lab in enumerate(truth):
        for j, ev in enumerate(predicted):
            d = abs(ev.onset - lab.onset)
            if d <= tolerance:
                pairs.append((d, i, j))
    pairs.sort()
    t_match: dict[int, int] = {}
    p_used: set[int] = set()
    for _, i, j in pairs:
        if i in t_match or j in p_used:
            continue
        t_match[i] = j
        p_used.add(j)

    cm = ConfusionMatrix()
    for i, lab in enumerate(truth):
        row = cm.counts[lab.kind.value]
        if i in t_match:
            row[predicted[t_match[i]].kind.value] += 1
        else:
            row[MISSED] += 1
    for j, ev in enumerate(predicted):
        if j not in p_used:
            cm.false_positives[ev.kind.value] += 1
    return cm


def events_as_labels(events: Sequence[MovementEvent]) -> list[GroundTruthLabel]:
    return [GroundTruthLabel(e.kind, e.onset, e.duration) for e in events if e.kind is not MovementKind.NEUTRAL]
