from __future__ import annotations

import enum
from dataclasses import dataclass


class Size(enum.Enum):
    POCKET2 = "pocket2"
    RUBIKS3 = "rubiks3"

    @property
    def edge(self) -> int:
        return 2 if self is Size.POCKET2 else 3

    @property
    def sticker_count(self) -> int:
        return 24 if self is Size.POCKET2 else 48

    @property
    def faces(self) -> tuple:
        # the 2x2x2 needs only U, L, F: the DRB cubie never moves
        return ("U", "L", "F") if self is Size.POCKET2 else ("U", "L", "F", "D", "R", "B")


class Metric(enum.Enum):
    HTM = "htm"
    QTM = "qtm"

    @property
    def quarter_turns(self) -> tuple:
        return (1, 2, 3) if self is Metric.HTM else (1, 3)


class NotationError(ValueError):
    """Unparseable move notation."""


@dataclass(frozen=True, order=True)
class Action:
    face: str
    quarter_turns: int

    def __post_init__(self):
        if self.face not in "ULFDRB" or len(self.face) != 1:
            raise ValueError(f"bad face {self.face!r}")
        if self.quarter_turns not in (1, 2, 3):
            raise ValueError(f"bad quarter_turns {self.quarter_turns!r}")

    def __str__(self) -> str:
        return f"{self.face}{self.quarter_turns}"

    @property
    def inverse(self) -> "Action":
        return Action(self.face, (4 - self.quarter_turns) % 4)


@dataclass(frozen=True)
class CubeVariant:
    size: Size
    metric: Metric

    @property
    def sticker_count(self) -> int:
        return self.size.sticker_count

    @property
    def actions(self) -> tuple:
        return tuple(Action(f, q) for f in self.size.faces for q in self.metric.quarter_turns)

    def action_index(self, action: Action) -> int:
        try:
            return self.actions.index(action)
        except ValueError:
            raise NotationError(f"{action} is not an action of {self}") from None

    def parse(self, text: str) -> list:
        """Parse whitespace-separated moves like ``"U L2 F3"`` (suffix 1 optional)."""
        out = []
        for tok in text.split():
            face, suffix = tok[0], tok[1:] or "1"
            if face not in self.size.faces or suffix not in ("1", "2", "3"):
                raise NotationError(f"unknown move {tok!r}")
            out.append(self.action_index(Action(face, int(suffix))))
        return out

    @classmethod
    def from_names(cls, size: str, metric: str) -> "CubeVariant":
        return cls(Size(size.lower()), Metric(metric.lower()))

    def __str__(self) -> str:
        return f"{self.size.value}-{self.metric.value}"


POCKET2_HTM = CubeVariant(Size.POCKET2, Metric.HTM)
POCKET2_QTM = CubeVariant(Size.POCKET2, Metric.QTM)
RUBIKS3_HTM = CubeVariant(Size.RUBIKS3, Metric.HTM)
RUBIKS3_QTM = CubeVariant(Size.RUBIKS3, Metric.QTM)
