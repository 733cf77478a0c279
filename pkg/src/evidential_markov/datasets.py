"""Published categorization-decision results and CSV ingestion.

Values are the two-decimal figures from the original studies (observed rows)
and the four-decimal model rows reported alongside them. Two model rows are
stored corrected rather than as typeset; see ``_EM_ROWS``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from .errors import InvariantViolation, ParseError

CSV_HEADER = ("name", "face_type", "p_g", "p_a_given_g", "p_b", "p_a_given_b", "p_t", "p_a")
TABLE_TOLERANCE = 0.01


@dataclass(frozen=True)
class EmRow:
    """Published model predictions for one experiment."""

    p_a_given_g: float
    p_a_given_b: float
    p_t: float
    p_a: float
    dis: float


@dataclass(frozen=True)
class ExperimentRecord:
    name: str
    face_type: str  # "N" (narrow) or "W" (wide)
    p_g: float
    p_a_given_g: Optional[float]
    p_b: float
    p_a_given_b: Optional[float]
    p_t: float
    p_a: float
    em_row: Optional[EmRow] = None
    # C-D masses (AG, UG, WG, AB, UB, WB) when the source prints them
    em_bpa_cd: Optional[tuple[float, ...]] = None

    @property
    def observed_dis(self) -> float:
        return self.p_a - self.p_t

    @property
    def is_narrow(self) -> bool:
        return self.face_type == "N"

    def validate(self) -> "ExperimentRecord":
        if self.face_type not in ("N", "W"):
            raise InvariantViolation(f"{self.name}: face_type must be N or W, got {self.face_type!r}", self)
        for field in ("p_g", "p_b", "p_t", "p_a", "p_a_given_g", "p_a_given_b"):
            value = getattr(self, field)
            if value is None:
                continue
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise InvariantViolation(f"{self.name}: {field}={value!r} is not a probability", self)
        if abs(self.p_g + self.p_b - 1.0) > TABLE_TOLERANCE + 1e-12:
            raise InvariantViolation(f"{self.name}: p_g + p_b = {self.p_g + self.p_b:.4f}, expected 1", self)
        if self.p_a_given_g is not None and self.p_a_given_b is not None:
            total = self.p_g * self.p_a_given_g + self.p_b * self.p_a_given_b
            if abs(total - self.p_t) > TABLE_TOLERANCE + 1e-12:
                raise InvariantViolation(
                    f"{self.name}: p_t={self.p_t} but p_g*p_a_given_g + p_b*p_a_given_b = {total:.4f}", self
                )
        return self


def _row(name, face, values, em=None, bpa=None):
    return ExperimentRecord(name, face, *values, em_row=em, em_bpa_cd=bpa).validate()


TOWNSEND_BPA_CD = (0.0264, 0.0811, 0.0625, 0.3050, 0.3960, 0.1290)
TOWNSEND_BPA_D = (0.3314, 0.4771, 0.1915)

# Busemeyer 2009: typeset with its columns shifted; stored here in the column
# order the other rows use (its P_T and P(A) then agree with its Dis).
# Wang & Busemeyer exp. 2: typeset P(A|G) 0.3384 repeats exp. 3; 0.3803 is the
# value its own P(A|B) = 0.6197 and P_T = 0.5622 imply.
_EM_ROWS = {
    "townsend2000": EmRow(0.394, 0.606, 0.57, 0.6589, 0.0889),
    "busemeyer2009": EmRow(0.4019, 0.5981, 0.5588, 0.6404, 0.0816),
    "wang2016_exp1": EmRow(0.3840, 0.6160, 0.5673, 0.6432, 0.0759),
    "wang2016_exp2": EmRow(0.3803, 0.6197, 0.5622, 0.63, 0.0678),
    "wang2016_exp3": EmRow(0.3384, 0.6616, 0.5841, 0.6436, 0.0596),
    "average": EmRow(0.3797, 0.6203, 0.5685, 0.6432, 0.0747),
}

#: The five narrow-face experiments, in the order the comparison figures use.
EXPERIMENT_NAMES = ("townsend2000", "busemeyer2009", "wang2016_exp1", "wang2016_exp2", "wang2016_exp3")

NARROW = (
    _row("townsend2000", "N", (0.17, 0.41, 0.83, 0.63, 0.59, 0.69), _EM_ROWS["townsend2000"], TOWNSEND_BPA_CD),
    _row("busemeyer2009", "N", (0.20, 0.45, 0.80, 0.64, 0.60, 0.69), _EM_ROWS["busemeyer2009"]),
    _row("wang2016_exp1", "N", (0.21, 0.41, 0.79, 0.58, 0.54, 0.59), _EM_ROWS["wang2016_exp1"]),
    _row("wang2016_exp2", "N", (0.24, 0.37, 0.76, 0.61, 0.55, 0.60), _EM_ROWS["wang2016_exp2"]),
    _row("wang2016_exp3", "N", (0.24, 0.33, 0.76, 0.66, 0.58, 0.62), _EM_ROWS["wang2016_exp3"]),
)
AVERAGE_NARROW = _row("average", "N", (0.21, 0.39, 0.79, 0.62, 0.57, 0.64), _EM_ROWS["average"])

WIDE = (
    _row("townsend2000", "W", (0.84, 0.35, 0.16, 0.52, 0.37, 0.39)),
    _row("busemeyer2009", "W", (0.80, 0.37, 0.20, 0.53, 0.40, 0.39)),
    _row("wang2016_exp1", "W", (0.78, 0.39, 0.22, 0.52, 0.42, 0.42)),
    _row("wang2016_exp2", "W", (0.78, 0.33, 0.22, 0.53, 0.37, 0.37)),
    _row("wang2016_exp3", "W", (0.77, 0.34, 0.23, 0.58, 0.40, 0.39)),
)
AVERAGE_WIDE = _row("average", "W", (0.79, 0.36, 0.21, 0.54, 0.39, 0.39))

BUNDLED = NARROW + (AVERAGE_NARROW,) + WIDE + (AVERAGE_WIDE,)


def load_experiments(source: Union[str, Path, None] = None) -> list[ExperimentRecord]:
    """Bundled records (``source`` None or ``"bundled"``) or records read from a CSV file."""
    if source is None or source == "bundled":
        return list(BUNDLED)
    path = Path(source)
    return parse_experiments_csv(path.read_text(encoding="utf-8"))


def narrow_records(records: Sequence[ExperimentRecord], include_average: bool = True) -> list[ExperimentRecord]:
    return [r for r in records if r.is_narrow and (include_average or r.name != "average")]


def parse_experiments_csv(text: str) -> list[ExperimentRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("empty experiment file", line=1) from None
    missing = [c for c in CSV_HEADER if c not in header]
    if missing:
        raise ParseError(f"header is missing column {missing[0]!r}", line=1, column=missing[0])
    unknown = [c for c in header if c not in CSV_HEADER]
    if unknown:
        raise ParseError(f"unexpected column {unknown[0]!r}", line=1, column=unknown[0])
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=lineno)
        cells = dict(zip(header, (c.strip() for c in row)))
        values = {}
        for column in CSV_HEADER[2:]:
            try:
                values[column] = float(cells[column])
            except ValueError:
                raise ParseError(f"{cells[column]!r} is not a number", line=lineno, column=column) from None
        face = cells["face_type"].upper()[:1]
        record = ExperimentRecord(name=cells["name"], face_type=face, **values)
        records.append(record.validate())
    return records


def format_experiments_csv(records: Sequence[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([r.name, r.face_type, r.p_g, r.p_a_given_g, r.p_b, r.p_a_given_b, r.p_t, r.p_a])
    return buf.getvalue()
