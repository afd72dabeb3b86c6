from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Optional, Tuple

from ..models import ConstructionOutput


class Construction(ABC):
    name: str = ""

    @abstractmethod
    def can_handle(self, s: Fraction, t: int) -> bool:
        ...

    @abstractmethod
    def predict(self, s: Fraction, t: int) -> Tuple[Fraction, int]:
        """(rate, m) from counting alone; only valid when can_handle is true."""

    @abstractmethod
    def build(self, s: Fraction, t: int, max_servers: Optional[int] = None, **kwargs) -> ConstructionOutput:
        ...
