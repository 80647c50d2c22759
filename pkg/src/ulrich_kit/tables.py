"""Exact cohomology tables indexed by (degree, twist)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IncompleteTable


@dataclass
class CohomologyTable:
    """Dimensions h^i(E(t)) for t inside a closed twist window.

    Only nonzero entries are stored.  ``complete`` records whether every
    nonzero entry with t in the window is present; oracle outputs are
    complete by construction, abstract passthrough data may not be.
    ``num_class`` optionally carries truncated Chern data so alternating
    sums can be cross-checked against Riemann-Roch.
    """

    window: tuple[int, int]
    entries: dict[tuple[int, int], int] = field(default_factory=dict)
    complete: bool = True
    num_class: object | None = None

    def __post_init__(self) -> None:
        lo, hi = self.window
        if lo > hi:
            raise IncompleteTable(f"empty window {self.window}")
        self.entries = {key: h for key, h in self.entries.items() if h != 0}

    def covers(self, t: int) -> bool:
        lo, hi = self.window
        return lo <= t <= hi

    def h(self, i: int, t: int) -> int:
        if not self.covers(t):
            raise IncompleteTable(f"twist {t} outside window {self.window}")
        return self.entries.get((i, t), 0)

    def column(self, t: int) -> dict[int, int]:
        if not self.covers(t):
            raise IncompleteTable(f"twist {t} outside window {self.window}")
        return {i: h for (i, tt), h in self.entries.items() if tt == t}

    def euler(self, t: int) -> int:
        return sum((-1) ** i * h for i, h in self.column(t).items())

    def degrees(self) -> list[int]:
        return sorted({i for (i, _t) in self.entries})

    def first_nonzero(self, twists, degrees=None):
        """Witness (i, t, h) for the first nonzero entry over the given
        twists, or None when everything vanishes there."""
        for t in twists:
            for i, h in sorted(self.column(t).items()):
                if degrees is not None and i not in degrees:
                    continue
                if h != 0:
                    return (i, t, h)
        return None

    def all_zero(self, twists, degrees=None) -> bool:
        return self.first_nonzero(twists, degrees) is None

    def added(self, other: "CohomologyTable", mult: int = 1) -> "CohomologyTable":
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        merged: dict[tuple[int, int], int] = {}
        for table, m in ((self, 1), (other, mult)):
            for (i, t), h in table.entries.items():
                if lo <= t <= hi:
                    merged[(i, t)] = merged.get((i, t), 0) + m * h
        return CohomologyTable(
            window=(lo, hi),
            entries=merged,
            complete=self.complete and other.complete,
        )

    def scaled(self, mult: int) -> "CohomologyTable":
        return CohomologyTable(
            window=self.window,
            entries={key: mult * h for key, h in self.entries.items()},
            complete=self.complete,
            num_class=None,
        )

    def degree_shifted(self, k: int) -> "CohomologyTable":
        """Table of E[k]: entry (i, t) becomes the old entry (i + k, t)."""
        return CohomologyTable(
            window=self.window,
            entries={(i - k, t): h for (i, t), h in self.entries.items()},
            complete=self.complete,
            num_class=None,
        )

    def restricted(self, window: tuple[int, int]) -> "CohomologyTable":
        lo, hi = window
        inside = self.window[0] <= lo and hi <= self.window[1]
        slo, shi = max(lo, self.window[0]), min(hi, self.window[1])
        if slo > shi:
            raise IncompleteTable(
                f"window {window} does not meet stored window {self.window}"
            )
        return CohomologyTable(
            window=(slo, shi),
            entries={
                (i, t): h for (i, t), h in self.entries.items() if slo <= t <= shi
            },
            complete=self.complete and inside,
            num_class=self.num_class,
        )

    def rows(self) -> list[tuple[int, int, int]]:
        """Nonzero entries as (i, t, h), sorted by twist then degree."""
        return sorted(
            ((i, t, h) for (i, t), h in self.entries.items()),
            key=lambda row: (row[1], row[0]),
        )

    def same_entries(self, other: "CohomologyTable") -> bool:
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        for t in range(lo, hi + 1):
            if self.column(t) != other.column(t):
                return False
        return True
