"""
Mapper utility for converting domain models to output rows.

Every table leaves through this module so formatting is identical for every
command: floats with 17 significant digits, '.' decimal separator, '\\n' line
endings, UTF-8.
"""

import csv
import io
import json
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence

from app.core.logging import get_logger
from app.data.branch import Branch, CheckReport
from app.data.spectrum import Spectrum

logger = get_logger(__name__)

SPECTRUM_COLUMNS = ["N", "kind", "sigma", "lambda", "l", "multiplicity", "j_first", "j_last"]
BRANCH_COLUMNS = ["N", "l", "branch", "sigma", "lambda"]
REPORT_COLUMNS = ["check", "status", "worst_ratio", "location"]


def format_float(value: Optional[float]) -> str:
    """Format a float with 17 significant digits; None becomes an empty field."""
    if value is None:
        return ""
    return format(float(value), ".17g")


def map_spectrum_rows(spectrum: Spectrum) -> List[Dict[str, Any]]:
    """Map a spectrum to one row per entry."""
    return [
        {
            "N": spectrum.N,
            "kind": spectrum.kind.value,
            "sigma": spectrum.sigma,
            "lambda": entry.lam,
            "l": entry.l,
            "multiplicity": entry.multiplicity,
            "j_first": entry.j_first,
            "j_last": entry.j_last,
        }
        for entry in spectrum.entries
    ]


def map_branch_rows(branches: Iterable[Branch]) -> List[Dict[str, Any]]:
    """Map branches to rows sorted by (l, branch, sigma) whatever order they were traced in."""
    rows = [
        {
            "N": branch.N,
            "l": branch.l,
            "branch": branch.branch_ordinal,
            "sigma": sample.sigma,
            "lambda": sample.lam,
        }
        for branch in branches
        for sample in branch.samples
    ]
    rows.sort(key=lambda row: (row["l"], row["branch"], row["sigma"]))
    return rows


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return value


def map_report_rows(reports: Iterable[CheckReport]) -> List[Dict[str, Any]]:
    """Map check reports to rows {check, status, worst_ratio, location}."""
    return [
        {
            "check": report.check,
            "status": report.status.value,
            "worst_ratio": _finite_or_none(report.worst_ratio),
            "location": report.location,
        }
        for report in reports
    ]


def _csv_cell(value: Any) -> str:
    if isinstance(value, float):
        return format_float(value)
    if value is None:
        return ""
    return str(value)


def render_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    """Render rows as CSV with a mandatory header row."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


class _FixedDigitsEncoder(json.JSONEncoder):
    """JSON encoder writing floats with the same 17 significant digits as the CSV tables."""

    def iterencode(self, o: Any, _one_shot: bool = False):
        def floatstr(value: float) -> str:
            if not math.isfinite(value):
                raise ValueError(f"non-finite float {value!r} is not valid JSON")
            return format_float(value)

        encoder = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        markers = {} if self.check_circular else None
        return json.encoder._make_iterencode(
            markers, self.default, encoder, self.indent, floatstr,
            self.key_separator, self.item_separator, self.sort_keys, self.skipkeys, _one_shot,
        )(o, 0)


def render_json(payload: Any) -> str:
    """Render a JSON document; floats carry 17 significant digits."""
    return json.dumps(payload, indent=2, sort_keys=False, cls=_FixedDigitsEncoder) + "\n"
