"""CIELAB conversion and nearest-name lookup over the CSS3 extended palette.

The conversion chain is sRGB -> linear RGB (piecewise 2.4-exponent
transfer) -> XYZ (D65, 2 degree observer) -> CIELAB.  Distances are plain
Lab Euclidean (delta E 1976); ties break on the lexicographically
smallest name so duplicate aliases (aqua/cyan, gray/grey, ...) resolve
deterministically.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import InvalidHexError

_HEX_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")

# sRGB -> XYZ matrix, D65 white, 2 degree observer; rows sum to the
# white point (0.95047, 1.00000, 1.08883).
_M = (
    (0.4124564, 0.3575761, 0.1804375),
    (0.2126729, 0.7151522, 0.0721750),
    (0.0193339, 0.1191920, 0.9503041),
)
_WHITE = (0.95047, 1.00000, 1.08883)

_EPSILON = 216.0 / 24389.0  # (6/29)^3
_KAPPA = 24389.0 / 27.0


@dataclass(frozen=True)
class LabColor:
    L: float
    a: float
    b: float


@dataclass(frozen=True)
class NamedColorEntry:
    name: str
    hex: str
    lab: LabColor


def _parse_hex(hex_color: str) -> tuple[int, int, int]:
    if not isinstance(hex_color, str) or not _HEX_RE.match(hex_color):
        raise InvalidHexError(str(hex_color))
    return (
        int(hex_color[1:3], 16),
        int(hex_color[3:5], 16),
        int(hex_color[5:7], 16),
    )


def srgb_to_linear(channel: float) -> float:
    """One channel of the sRGB transfer function, input in [0, 1]."""
    if channel <= 0.04045:
        return channel / 12.92
    return ((channel + 0.055) / 1.055) ** 2.4


def srgb_to_xyz(hex_color: str) -> tuple[float, float, float]:
    r8, g8, b8 = _parse_hex(hex_color)
    lin = (srgb_to_linear(r8 / 255.0), srgb_to_linear(g8 / 255.0), srgb_to_linear(b8 / 255.0))
    return tuple(sum(m * c for m, c in zip(row, lin)) for row in _M)  # type: ignore[return-value]


def xyz_to_lab(xyz: tuple[float, float, float]) -> LabColor:
    def f(t: float) -> float:
        if t > _EPSILON:
            return t ** (1.0 / 3.0)
        return (_KAPPA * t + 16.0) / 116.0

    fx, fy, fz = (f(v / w) for v, w in zip(xyz, _WHITE))
    return LabColor(L=116.0 * fy - 16.0, a=500.0 * (fx - fy), b=200.0 * (fy - fz))


def srgb_to_lab(hex_color: str) -> LabColor:
    """Convert "#RRGGBB" to CIELAB (D65 reference white)."""
    return xyz_to_lab(srgb_to_xyz(hex_color))


def delta_e76(c1: LabColor, c2: LabColor) -> float:
    return math.sqrt((c1.L - c2.L) ** 2 + (c1.a - c2.a) ** 2 + (c1.b - c2.b) ** 2)


@lru_cache(maxsize=1)
def css3_palette() -> tuple[NamedColorEntry, ...]:
    """The 147 CSS3 extended color names with precomputed Lab values."""
    text = resources.files("chartscribe").joinpath("assets/css3_colors.csv").read_text("utf-8")
    entries = []
    for row in csv.DictReader(text.splitlines()):
        hex_color = row["hex"].upper()
        entries.append(NamedColorEntry(row["name"], hex_color, srgb_to_lab(hex_color)))
    return tuple(entries)


def nearest_color_name(
    hex_color: str, palette: tuple[NamedColorEntry, ...] | None = None
) -> tuple[str, float]:
    """Nearest palette name by delta E76 and the winning distance."""
    if palette is None:
        palette = css3_palette()
    lab = srgb_to_lab(hex_color)
    best_name = None
    best_dist = math.inf
    for entry in palette:
        d = delta_e76(lab, entry.lab)
        if d < best_dist or (d == best_dist and entry.name < best_name):
            best_name = entry.name
            best_dist = d
    return best_name, best_dist


def name_chart_colors(hex_colors: list[str]) -> dict[str, str]:
    """Name each color, preserving input order; duplicate inputs collapse."""
    return {hex_color: nearest_color_name(hex_color)[0] for hex_color in hex_colors}
