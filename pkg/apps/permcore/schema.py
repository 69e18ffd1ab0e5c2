from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Tuple

from django.core.exceptions import ValidationError


class ShuffleKind(str, Enum):
    CARD_TRANSPOSITION = "card"
    POSITION_TRANSPOSITION = "pos"
    CARD_INSERTION = "insertion"

    @classmethod
    def parse(cls, value) -> 'ShuffleKind':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ', '.join(kind.value for kind in cls)
            raise ValidationError(f"Unknown shuffle kind '{value}' (expected one of: {choices})")


def parse_one_line(text: str) -> Tuple[int, ...]:
    """Parse comma-separated one-line notation such as ``"2,3,1"``"""
    try:
        return tuple(int(part) for part in text.split(','))
    except (AttributeError, ValueError):
        raise ValidationError(f"Invalid one-line notation: {text!r}")


@dataclass(frozen=True)
class Permutation:
    """A deck in one-line notation: ``slots[p - 1]`` is the card in position p"""
    slots: Tuple[int, ...]

    def __post_init__(self):
        slots = tuple(int(card) for card in self.slots)
        object.__setattr__(self, 'slots', slots)
        self.validate()

    @property
    def n(self) -> int:
        return len(self.slots)

    def validate(self) -> None:
        if not self.slots:
            raise ValidationError("A permutation needs at least one card")
        if sorted(self.slots) != list(range(1, self.n + 1)):
            raise ValidationError(f"{self.to_text()} is not a permutation of 1..{self.n}")

    def card_at(self, position: int) -> int:
        return self.slots[position - 1]

    def position_of(self, card: int) -> int:
        return self.slots.index(card) + 1

    def to_text(self) -> str:
        return ','.join(str(card) for card in self.slots)

    @classmethod
    def from_text(cls, text: str) -> 'Permutation':
        return cls(parse_one_line(text))

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class ChoiceSequence:
    """The n uniform picks of one shuffle pass; ``choices[j - 1]`` drives step j"""
    choices: Tuple[int, ...]

    def __post_init__(self):
        choices = tuple(int(k) for k in self.choices)
        object.__setattr__(self, 'choices', choices)
        self.validate()

    @property
    def n(self) -> int:
        return len(self.choices)

    def validate(self) -> None:
        if not self.choices:
            raise ValidationError("A choice sequence needs at least one step")
        out_of_range = [k for k in self.choices if not 1 <= k <= self.n]
        if out_of_range:
            raise ValidationError(f"Choices must lie in 1..{self.n}, got {out_of_range}")

    def to_text(self) -> str:
        return ','.join(str(k) for k in self.choices)

    @classmethod
    def from_text(cls, text: str) -> 'ChoiceSequence':
        return cls(parse_one_line(text))

    @classmethod
    def from_iterable(cls, values: Iterable[int]) -> 'ChoiceSequence':
        return cls(tuple(values))
