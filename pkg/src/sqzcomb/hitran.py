"""Reader for HITRAN 2004 fixed-width line lists (``.par``, 160 columns).

Only the fields needed by the line-shape model are kept. Everything past
column 67 (quantum labels, uncertainty codes, statistical weights) is
skipped.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import HitranError, HitranFieldError, HitranFormatError

__all__ = [
    "RECORD_LENGTH",
    "FIELDS",
    "SpectralLine",
    "LineList",
    "parse_record",
    "format_record",
    "read_par",
    "iter_par",
    "select_window",
]

RECORD_LENGTH = 160

# name -> (first column, last column), 1-based inclusive, and converter
FIELDS = {
    "molecule_id": (1, 2, int),
    "isotopologue_id": (3, 3, int),
    "nu0": (4, 15, float),
    "intensity": (16, 25, float),
    "einstein_a": (26, 35, float),
    "gamma_air": (36, 40, float),
    "gamma_self": (41, 45, float),
    "e_lower": (46, 55, float),
    "n_air": (56, 59, float),
    "delta_air": (60, 67, float),
}


@dataclass(frozen=True)
class SpectralLine:
    """One ro-vibrational transition.

    Units follow HITRAN: wavenumbers and widths in cm^-1 (widths per atm),
    intensity in cm^-1/(molecule cm^-2) at 296 K.
    """

    molecule_id: int
    isotopologue_id: int
    nu0: float
    intensity: float
    gamma_air: float
    gamma_self: float
    e_lower: float
    n_air: float
    delta_air: float

    def __post_init__(self):
        if not self.nu0 > 0:
            raise ValueError(f"nu0 must be positive, got {self.nu0}")
        if not self.intensity >= 0:
            raise ValueError(f"intensity must be >= 0, got {self.intensity}")
        if not self.gamma_air > 0:
            raise ValueError(f"gamma_air must be positive, got {self.gamma_air}")
        if not self.gamma_self >= 0:
            raise ValueError(f"gamma_self must be >= 0, got {self.gamma_self}")

    @property
    def key(self) -> tuple:
        return (self.molecule_id, self.isotopologue_id, self.nu0, self.e_lower)


class LineList(Sequence[SpectralLine]):
    """Lines sorted by ``nu0`` with duplicate transitions removed."""

    def __init__(self, lines: Iterable[SpectralLine] = ()):
        seen = set()
        unique = []
        for line in lines:
            if line.key in seen:
                continue
            seen.add(line.key)
            unique.append(line)
        unique.sort(key=lambda ln: ln.nu0)
        self._lines = tuple(unique)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return LineList(self._lines[index])
        return self._lines[index]

    def __len__(self) -> int:
        return len(self._lines)

    def __eq__(self, other) -> bool:
        if isinstance(other, LineList):
            return self._lines == other._lines
        return NotImplemented

    def __repr__(self) -> str:
        return f"LineList({len(self)} lines)"

    def nearest(self, nu: float) -> SpectralLine:
        if not self._lines:
            raise HitranError("line list is empty")
        return min(self._lines, key=lambda ln: abs(ln.nu0 - nu))


def _convert(name: str, text: str, converter):
    first, last = FIELDS[name][:2]
    # blanks inside a numeric field are ignored, as Fortran list input does
    compact = "".join(text.split())
    if not compact:
        raise HitranFieldError(
            f"field {name} (columns {first}-{last}) is blank", name, (first, last), text
        )
    try:
        value = converter(compact)
    except ValueError:
        raise HitranFieldError(
            f"field {name} (columns {first}-{last}) is not a number: {text!r}",
            name,
            (first, last),
            text,
        ) from None
    if converter is float and not math.isfinite(value):
        raise HitranFieldError(
            f"field {name} (columns {first}-{last}) is not finite: {text!r}",
            name,
            (first, last),
            text,
        )
    return value


def parse_record(record: str) -> SpectralLine:
    """Parse one 160-character HITRAN 2004 record.

    A trailing newline is tolerated. Raises :class:`HitranFormatError` when
    the length is wrong and :class:`HitranFieldError` when a field does not
    parse or violates the physical constraints on a line.
    """
    if isinstance(record, bytes):
        try:
            record = record.decode("ascii")
        except UnicodeDecodeError as exc:
            raise HitranFormatError(f"record is not ASCII: {exc}", len(record)) from None
    record = record.rstrip("\r\n")
    if not record.isascii():
        raise HitranFormatError("record contains non-ASCII characters", len(record))
    if len(record) != RECORD_LENGTH:
        raise HitranFormatError(
            f"record has {len(record)} characters, expected {RECORD_LENGTH}",
            len(record),
        )
    values = {}
    for name, (first, last, converter) in FIELDS.items():
        values[name] = _convert(name, record[first - 1 : last], converter)
    values.pop("einstein_a")
    try:
        return SpectralLine(**values)
    except ValueError as exc:
        bad = str(exc).split()[0]
        first, last = FIELDS[bad][:2]
        raise HitranFieldError(str(exc), bad, (first, last), record[first - 1 : last]) from None


def _fortran_fixed(value: float, width: int, decimals: int) -> str:
    text = f"{value:.{decimals}f}"
    if len(text) > width:
        # Fortran Fw.d drops the leading zero when it does not fit
        if text.startswith("0."):
            text = text[1:]
        elif text.startswith("-0."):
            text = "-" + text[2:]
    if len(text) > width:
        raise ValueError(f"{value} does not fit F{width}.{decimals}")
    return text.rjust(width)


def _fortran_exp(value: float, width: int, decimals: int) -> str:
    text = f"{value:.{decimals}E}"
    if len(text) > width:
        raise ValueError(f"{value} does not fit E{width}.{decimals}")
    return text.rjust(width)


def format_record(line: SpectralLine, einstein_a: float = 0.0) -> str:
    """Write ``line`` back into the 160-column layout.

    Columns that :class:`SpectralLine` does not keep are left blank, apart
    from the Einstein-A field which is filled from ``einstein_a``.
    """
    head = (
        f"{line.molecule_id:2d}"
        f"{line.isotopologue_id:1d}"
        + _fortran_fixed(line.nu0, 12, 6)
        + _fortran_exp(line.intensity, 10, 3)
        + _fortran_exp(einstein_a, 10, 3)
        + _fortran_fixed(line.gamma_air, 5, 4)
        + _fortran_fixed(line.gamma_self, 5, 3)
        + _fortran_fixed(line.e_lower, 10, 4)
        + _fortran_fixed(line.n_air, 4, 2)
        + _fortran_fixed(line.delta_air, 8, 6)
    )
    return head.ljust(RECORD_LENGTH)


def iter_par(path: str | os.PathLike, strict: bool = True) -> Iterator[SpectralLine]:
    """Yield lines from a ``.par`` file; blank lines are skipped.

    With ``strict=False`` malformed records are skipped instead of raised.
    """
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.rstrip("\r\n")
            if not text.strip():
                continue
            try:
                yield parse_record(text)
            except HitranError as exc:
                if strict:
                    exc.args = (f"{os.fspath(path)}:{lineno}: {exc.args[0]}",)
                    raise
                continue


def read_par(path: str | os.PathLike, strict: bool = True) -> LineList:
    return LineList(iter_par(path, strict=strict))


def select_window(
    lines: LineList, nu_min: float, nu_max: float, molecule_id: int | None = None
) -> LineList:
    """Lines of ``molecule_id`` (any molecule if None) with nu0 in [nu_min, nu_max]."""
    if not nu_min < nu_max:
        raise ValueError(f"empty window: nu_min={nu_min} >= nu_max={nu_max}")
    return LineList(
        ln
        for ln in lines
        if nu_min <= ln.nu0 <= nu_max
        and (molecule_id is None or ln.molecule_id == molecule_id)
    )
