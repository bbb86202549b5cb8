"""Periodic Dirichlet series: data model, presets and the JSON file format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional


class SeriesFormatError(ValueError):
    """Raised when a series file or payload is malformed.

    ``field`` names the offending key so front ends can point at it.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _as_fraction(value, field: str) -> Fraction:
    if isinstance(value, bool):
        raise SeriesFormatError(field, f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise SeriesFormatError(field, f"expected a fraction string like '3/4', got {value!r}")


@dataclass(frozen=True)
class PeriodicSeries:
    """L(s) = sum_k a_k k^-s with a_{k+d} = a_k, coefficients exact rationals."""

    d: int
    coeffs_re: tuple[Fraction, ...]
    coeffs_im: Optional[tuple[Fraction, ...]] = None
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise SeriesFormatError("d", f"period must be a positive integer, got {self.d!r}")
        object.__setattr__(self, "coeffs_re", tuple(Fraction(c) for c in self.coeffs_re))
        if len(self.coeffs_re) != self.d:
            raise SeriesFormatError("coeffs_re", f"expected {self.d} coefficients, got {len(self.coeffs_re)}")
        if self.coeffs_im is not None:
            object.__setattr__(self, "coeffs_im", tuple(Fraction(c) for c in self.coeffs_im))
            if len(self.coeffs_im) != self.d:
                raise SeriesFormatError("coeffs_im", f"expected {self.d} coefficients, got {len(self.coeffs_im)}")
        if not any(self.coeffs_re) and not any(self.coeffs_im or ()):
            raise SeriesFormatError("coeffs_re", "at least one coefficient must be nonzero")

    @property
    def is_real(self) -> bool:
        return self.coeffs_im is None or not any(self.coeffs_im)

    def coeff(self, k: int) -> Fraction:
        """Real part of a_k for any integer k >= 1."""
        return self.coeffs_re[(k - 1) % self.d]

    def period_sum(self) -> tuple[Fraction, Fraction]:
        return sum(self.coeffs_re, Fraction(0)), sum(self.coeffs_im or (), Fraction(0))

    def to_dict(self) -> dict:
        out = {"d": self.d, "coeffs_re": [str(c) for c in self.coeffs_re]}
        if self.coeffs_im is not None:
            out["coeffs_im"] = [str(c) for c in self.coeffs_im]
        out["label"] = self.label
        return out

    @classmethod
    def from_dict(cls, payload) -> "PeriodicSeries":
        if not isinstance(payload, dict):
            raise SeriesFormatError("<root>", "expected a JSON object")
        if "d" not in payload:
            raise SeriesFormatError("d", "missing")
        d = payload["d"]
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            raise SeriesFormatError("d", f"expected a positive integer, got {d!r}")
        coeffs = {}
        for key in ("coeffs_re", "coeffs_im"):
            if key not in payload:
                if key == "coeffs_re":
                    raise SeriesFormatError(key, "missing")
                continue
            raw = payload[key]
            if not isinstance(raw, list):
                raise SeriesFormatError(key, "expected a list of fraction strings")
            coeffs[key] = tuple(_as_fraction(v, f"{key}[{i}]") for i, v in enumerate(raw))
        label = payload.get("label", "")
        if not isinstance(label, str):
            raise SeriesFormatError("label", "expected a string")
        return cls(d, coeffs["coeffs_re"], coeffs.get("coeffs_im"), label)

    @classmethod
    def load(cls, path) -> "PeriodicSeries":
        try:
            payload = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise SeriesFormatError("<root>", f"invalid JSON ({exc.msg})") from exc
        return cls.from_dict(payload)

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


PRESETS = {
    "zeta": (1, (1,), "zeta"),
    "chi3": (3, (1, -1, 0), "chi_3"),
    "chi4": (4, (1, 0, -1, 0), "chi_4"),
    "chi5": (5, (1, -1, -1, 1, 0), "chi_5"),
}


def preset(name: str) -> PeriodicSeries:
    """Built-in series: zeta, chi3, chi4 (odd characters mod 3, 4) and chi5 (real character mod 5)."""
    try:
        d, coeffs, label = PRESETS[name]
    except KeyError:
        raise SeriesFormatError("series", f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return PeriodicSeries(d, tuple(Fraction(c) for c in coeffs), label=label)


def realify(series: PeriodicSeries) -> tuple[Optional[PeriodicSeries], Optional[PeriodicSeries]]:
    """Split a complex-coefficient series into its real and imaginary parts.

    Each slot is a real series, or None when that part vanishes identically.
    A real input comes back as ``(series, None)``.
    """
    if series.is_real:
        return PeriodicSeries(series.d, series.coeffs_re, None, series.label), None
    re_part = None
    if any(series.coeffs_re):
        re_part = PeriodicSeries(series.d, series.coeffs_re, None, f"Re({series.label})")
    im_part = PeriodicSeries(series.d, series.coeffs_im, None, f"Im({series.label})")
    return re_part, im_part
