"""Size caps for exhaustive operations.

Every brute-force sweep in the package refuses inputs beyond its cap instead
of silently truncating.  Caps are bundled in one immutable object so the CLI
can raise them explicitly (``--caps name=value,...`` or the ``SEPLAB_CAPS``
environment variable) while library defaults stay safe.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import CapExceeded, ValidationError


@dataclass(frozen=True)
class Caps:
    # exhaustive game-graph enumeration: 3^(n*n) growth at d = 2
    graph_nodes: int = 4
    graph_priorities: int = 2
    # exhaustive safety-automaton enumeration: q^(q*letters) growth
    automaton_states: int = 3
    automaton_letters: int = 6
    # fooling-pair search over forced-edge constraint states
    search_nodes: int = 2
    # extremal-family brute force: subsets of an a-uniform layer
    family_sets: int = 20
    # exact box covers: size of the covered tuple set and blocking choices
    cover_elements: int = 12
    cover_choices: int = 1 << 20
    # tuple streams and forcing-size search spaces
    tuple_space: int = 10**6
    forcing_space: int = 10**6

    def with_overrides(self, **kwargs: int) -> "Caps":
        for key in kwargs:
            if key not in {f.name for f in dataclasses.fields(Caps)}:
                raise ValidationError(f"unknown cap name: {key!r}")
        return dataclasses.replace(self, **kwargs)

    @staticmethod
    def parse(text: str) -> dict[str, int]:
        """Parse ``name=value,name=value`` cap overrides (used by SEPLAB_CAPS)."""
        overrides: dict[str, int] = {}
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            name, sep, value = part.partition("=")
            if not sep:
                raise ValidationError(f"bad cap override {part!r}, expected name=value")
            try:
                overrides[name.strip()] = int(value)
            except ValueError as exc:
                raise ValidationError(f"bad cap value in {part!r}") from exc
        return overrides


DEFAULT_CAPS = Caps()


def require(condition: bool, message: str) -> None:
    """Raise :class:`CapExceeded` with an explicit message unless *condition*."""
    if not condition:
        raise CapExceeded(message + " (raise the cap explicitly to override)")
