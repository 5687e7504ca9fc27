"""Per-method alignment counts, broken down by annotation kind and data split."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .corpus import AlignedSentence, AlignmentMethod, AnnotationKind

_ROW_ORDER = (
    AlignmentMethod.SMATCH,
    AlignmentMethod.LEMMA,
    AlignmentMethod.MTRANS,
    AlignmentMethod.SYNONYM,
    AlignmentMethod.WALIGNER,
    AlignmentMethod.FUZZY,
    AlignmentMethod.MANUAL,
    AlignmentMethod.UNALIGNED,
)
_SPLIT_ORDER = ("train", "dev", "test", "unsplit")
_KIND_ORDER = (AnnotationKind.TRIGGER, AnnotationKind.ARGUMENT)


@dataclass
class MethodStats:
    """Counts keyed by (method, kind, split); merging is associative so
    parallel workers can accumulate independently."""

    counts: Counter = field(default_factory=Counter)

    def add(self, method: AlignmentMethod, kind: AnnotationKind, split: str, n: int = 1) -> None:
        self.counts[(method, kind, split)] += n

    def merge(self, other: "MethodStats") -> "MethodStats":
        self.counts.update(other.counts)
        return self

    def total(
        self,
        method: AlignmentMethod | None = None,
        kind: AnnotationKind | None = None,
        split: str | None = None,
    ) -> int:
        return sum(
            n
            for (m, k, s), n in self.counts.items()
            if (method is None or m is method)
            and (kind is None or k is kind)
            and (split is None or s == split)
        )

    def _splits(self) -> tuple[str, ...]:
        used = {s for (_, _, s) in self.counts}
        extras = tuple(s for s in _SPLIT_ORDER[3:] if s in used)
        return _SPLIT_ORDER[:3] + extras

    def _rows(self) -> tuple[AlignmentMethod, ...]:
        used = {m for (m, _, _) in self.counts}
        return tuple(m for m in _ROW_ORDER if m in used) or _ROW_ORDER[:1]

    def render_text(self) -> str:
        """Fixed-width table: one row per method plus a Total row, split
        columns grouped under each annotation kind."""
        splits = self._splits()
        headers = ["Method"]
        for kind in _KIND_ORDER:
            headers.extend(f"{kind.value.title()} {s.title()}" for s in splits)
            headers.append(f"{kind.value.title()} Total")
        lines = [headers]
        for method in self._rows() + (None,):
            label = "Total" if method is None else method.value
            row = [label]
            for kind in _KIND_ORDER:
                cells = [self.total(method, kind, s) for s in splits]
                cells.append(self.total(method, kind))
                row.extend("-" if c == 0 and method is not None else f"{c:,}" for c in cells)
            lines.append(row)
        widths = [max(len(line[i]) for line in lines) for i in range(len(headers))]
        rendered = []
        for line in lines:
            rendered.append("  ".join(cell.rjust(w) for cell, w in zip(line, widths)))
        return "\n".join(rendered)

    def to_csv_rows(self) -> list[list[str]]:
        rows = [["method", "kind", "split", "count"]]
        for method in self._rows():
            for kind in _KIND_ORDER:
                for split in self._splits():
                    rows.append(
                        [method.value, kind.value, split, str(self.total(method, kind, split))]
                    )
        return rows


def method_stats(aligned: Iterable[AlignedSentence]) -> MethodStats:
    stats = MethodStats()
    for item in aligned:
        for alignment in item.alignments:
            stats.add(alignment.method, alignment.source.kind, item.sentence.split)
    return stats
