"""Rendering of command results as CSV, JSON or an Excel workbook."""
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd
from openpyxl import Workbook
from openpyxl.styles import Font, PatternFill
from openpyxl.utils import get_column_letter
from django.core.exceptions import ValidationError
from rest_framework.renderers import JSONRenderer

from apps.exact.tables import CSV_OPTIONS

from .config import RunConfig


@dataclass
class Report:
    """A result frame plus the provenance written next to it"""
    frame: pd.DataFrame
    provenance: Dict = field(default_factory=dict)
    # leading "# key=value,..." line in CSV output
    csv_provenance: bool = False
    # native text rendering, when the result has one
    text: Optional[str] = None

    def records(self) -> List[Dict]:
        rows = self.frame.to_dict('records')
        return [{key: _plain(value) for key, value in row.items()} for row in rows]


def _plain(value):
    if hasattr(value, 'item'):
        value = value.item()
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def _flat(value) -> str:
    if isinstance(value, (tuple, list)):
        return ' '.join(str(item) for item in value)
    return str(value)


def render_csv(report: Report) -> str:
    buffer = io.StringIO()
    if report.csv_provenance:
        pairs = ','.join(f'{key}={_flat(value)}' for key, value in report.provenance.items())
        buffer.write(f'# {pairs}\n')
    report.frame.to_csv(buffer, **CSV_OPTIONS)
    return buffer.getvalue()


def render_json(report: Report) -> str:
    payload = dict(report.provenance)
    payload['columns'] = [str(column) for column in report.frame.columns]
    payload['rows'] = report.records()
    return JSONRenderer().render(payload).decode('utf-8') + '\n'


def write_xlsx(report: Report, file_path: str) -> None:
    wb = Workbook()
    ws = wb.active
    ws.title = str(report.provenance.get('command', 'result'))[:31]

    headers = [str(column) for column in report.frame.columns]
    for col, header in enumerate(headers, 1):
        cell = ws.cell(row=1, column=col)
        cell.value = header
        cell.font = Font(bold=True)
        cell.fill = PatternFill(start_color="CCCCCC", end_color="CCCCCC", fill_type="solid")

    for row_num, row in enumerate(report.records(), 2):
        for col, header in enumerate(report.frame.columns, 1):
            ws.cell(row=row_num, column=col).value = row[header]

    # provenance sheet
    meta = wb.create_sheet("provenance")
    for row_num, (key, value) in enumerate(report.provenance.items(), 1):
        meta.cell(row=row_num, column=1).value = key
        meta.cell(row=row_num, column=2).value = str(value)

    for col in range(1, len(headers) + 1):
        ws.column_dimensions[get_column_letter(col)].auto_size = True
    wb.save(file_path)


def emit(report: Report, config: RunConfig, stdout) -> None:
    """Write the report in the configured format to ``config.out`` or ``stdout``"""
    if config.format == 'xlsx':
        write_xlsx(report, config.out)
        return
    if config.format == 'text':
        if report.text is None:
            raise ValidationError(f"{config.command} has no text format")
        text = report.text
    elif config.format == 'json':
        text = render_json(report)
    else:
        text = render_csv(report)
    if config.out:
        with open(config.out, 'w', newline='', encoding='utf-8') as handle:
            handle.write(text)
    else:
        stdout.write(text, ending='')
