import csv
import io
from typing import Any, List, Optional, Sequence


def format_rmse(value: Optional[float]) -> str:
  if value is None:
    return "-"
  if value != 0.0 and abs(value) < 1e-3:
    return f"{value:.2e}"
  return f"{value:.4f}"


def csv_cell(value: Any) -> str:
  """Exact text for floats (repr round-trips), empty for None"""
  if value is None:
    return ""
  if isinstance(value, float):
    return repr(float(value))
  return str(value)


def parse_float(text: str) -> Optional[float]:
  return float(text) if text.strip() else None


def parse_int(text: str) -> Optional[int]:
  return int(text) if text.strip() else None


def csv_text(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
  buffer = io.StringIO()
  writer = csv.writer(buffer, lineterminator="\n")
  writer.writerow(list(headers))
  for row in rows:
    writer.writerow([csv_cell(v) for v in row])
  return buffer.getvalue()


def read_csv_rows(text: str) -> List[List[str]]:
  return [row for row in csv.reader(io.StringIO(text)) if row]


def render_text_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
  """Left-aligned columns separated by two spaces, with a rule under the header"""
  widths = [len(h) for h in headers]
  for row in rows:
    widths = [max(w, len(cell)) for w, cell in zip(widths, row)]

  def line(cells: Sequence[str]) -> str:
    return "  ".join(cell.ljust(w) for cell, w in zip(cells, widths)).rstrip()

  out = [line(headers), line(["-" * w for w in widths])]
  out.extend(line(row) for row in rows)
  return "\n".join(out) + "\n"
