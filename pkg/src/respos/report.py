from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

Witness = tuple[tuple[str, Any], ...]


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of a quantified check.

    ``witness`` is a tuple of ``(variable, value)`` bindings describing the
    least counterexample found; it is only present when ``holds`` is false.
    Values are element indices of the structure the check ran on, unless the
    check documents otherwise.
    """

    holds: bool
    property: str
    witness: Witness | None = None
    detail: str | None = None

    def __bool__(self) -> bool:
        return self.holds

    def binding(self, name: str) -> Any:
        for key, value in self.witness or ():
            if key == name:
                return value
        raise KeyError(name)

    def describe(self, labels: Sequence[str] | None = None) -> str:
        status = "holds" if self.holds else "FAILS"
        text = f"{self.property}: {status}"
        if self.witness:
            text += " with " + ", ".join(
                f"{k}={_show(v, labels)}" for k, v in self.witness)
        if self.detail:
            text += f" ({self.detail})"
        return text

    def to_json(self, labels: Sequence[str] | None = None) -> dict:
        return {
            "property": self.property,
            "holds": self.holds,
            "witness": None if self.witness is None else [
                [k, _show(v, labels)] for k, v in self.witness],
            "detail": self.detail,
        }


def _show(value: Any, labels: Sequence[str] | None) -> Any:
    if labels is not None and isinstance(value, int) and not isinstance(value, bool) \
            and 0 <= value < len(labels):
        return labels[value]
    return value


def holds(prop: str, detail: str | None = None) -> PropertyReport:
    return PropertyReport(True, prop, None, detail)


def fails(prop: str, witness: Iterable[tuple[str, Any]] | None = None,
          detail: str | None = None) -> PropertyReport:
    return PropertyReport(False, prop, tuple(witness) if witness is not None else None, detail)


def first_failure(reports: Iterable[PropertyReport]) -> PropertyReport | None:
    for r in reports:
        if not r.holds:
            return r
    return None


def all_hold(reports: Mapping[str, PropertyReport] | Iterable[PropertyReport]) -> bool:
    values = reports.values() if isinstance(reports, Mapping) else reports
    return all(r.holds for r in values)


def combine(prop: str, reports: Mapping[str, PropertyReport] | Iterable[PropertyReport]) -> PropertyReport:
    """Fold several verdicts into one; the first failure supplies the witness."""
    values = list(reports.values() if isinstance(reports, Mapping) else reports)
    bad = first_failure(values)
    if bad is None:
        return holds(prop)
    return PropertyReport(False, prop, bad.witness, f"{bad.property} fails" +
                          (f": {bad.detail}" if bad.detail else ""))
