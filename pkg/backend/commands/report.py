"""
ExperimentReport: config echo, norm table, summary scalars and named
pass/fail criteria, written as JSON, an Excel workbook and a PDF.
"""
import io
import json
import logging
import math
import os
import re
import zipfile
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

import pandas as pd

from pdf_generator import generate_report_pdf

logger = logging.getLogger(__name__)


@dataclass
class Criterion:
    name: str
    passed: bool
    detail: str = ''
    value: Optional[float] = None


@dataclass
class ExperimentReport:
    title: str
    config: dict = field(default_factory=dict)
    norms: Optional[pd.DataFrame] = None
    summary: dict = field(default_factory=dict)
    criteria: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.criteria)

    def add(self, name, passed, detail='', value=None):
        criterion = Criterion(name, bool(passed), detail, None if value is None else float(value))
        self.criteria.append(criterion)
        log = logger.info if criterion.passed else logger.warning
        log("%s: %s %s", name, 'PASS' if criterion.passed else 'FAIL', detail)
        return criterion

    def to_dict(self):
        return {
            'title': self.title,
            'passed': self.passed,
            'config': self.config,
            'summary': {k: _jsonable(v) for k, v in self.summary.items()},
            'criteria': [
                {'name': c.name, 'passed': c.passed, 'detail': c.detail, 'value': _jsonable(c.value)}
                for c in self.criteria
            ],
            'notes': list(self.notes),
        }


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if hasattr(value, 'item'):
        return value.item()
    return value


# fixed document and archive dates: identical reports give identical workbooks
_WORKBOOK_STAMP = datetime(2000, 1, 1)
_ARCHIVE_STAMP = (1980, 1, 1, 0, 0, 0)
_CORE_DATES = re.compile(rb'(<dcterms:(?:created|modified)[^>]*>)[^<]*(</dcterms:(?:created|modified)>)')


def _write_workbook(report, path):
    buffer = io.BytesIO()
    with pd.ExcelWriter(buffer, engine='openpyxl') as writer:
        writer.book.properties.created = _WORKBOOK_STAMP
        writer.book.properties.modified = _WORKBOOK_STAMP
        pd.DataFrame(list(report.config.items()), columns=['key', 'value']).to_excel(
            writer, sheet_name='config', index=False)
        pd.DataFrame(list(report.summary.items()), columns=['quantity', 'value']).to_excel(
            writer, sheet_name='summary', index=False)
        pd.DataFrame([vars(c) for c in report.criteria],
                     columns=['name', 'passed', 'detail', 'value']).to_excel(
            writer, sheet_name='criteria', index=False)
        if report.norms is not None:
            report.norms.to_excel(writer, sheet_name='norms', index=False)
        for name, table in report.tables.items():
            table.to_excel(writer, sheet_name=name[:31], index=False)
    _repack(buffer, path)


def _repack(buffer, path):
    """Copy the xlsx archive with pinned entry dates; openpyxl restamps 'modified' while saving"""
    stamp = _WORKBOOK_STAMP.strftime('%Y-%m-%dT%H:%M:%SZ').encode()
    buffer.seek(0)
    with zipfile.ZipFile(buffer) as src, zipfile.ZipFile(path, 'w', zipfile.ZIP_DEFLATED) as dst:
        for item in src.infolist():
            data = src.read(item.filename)
            if item.filename == 'docProps/core.xml':
                data = _CORE_DATES.sub(rb'\g<1>' + stamp + rb'\g<2>', data)
            dst.writestr(zipfile.ZipInfo(item.filename, _ARCHIVE_STAMP), data, compress_type=zipfile.ZIP_DEFLATED)


def write_report(report, out_dir):
    """Write report.json, report.xlsx and report.pdf; returns their paths"""
    paths = {
        'json': os.path.join(out_dir, 'report.json'),
        'xlsx': os.path.join(out_dir, 'report.xlsx'),
        'pdf': os.path.join(out_dir, 'report.pdf'),
    }
    try:
        with open(paths['json'], 'w', encoding='utf-8') as f:
            json.dump(report.to_dict(), f, indent=2, sort_keys=True)
        _write_workbook(report, paths['xlsx'])
        with open(paths['pdf'], 'wb') as f:
            f.write(generate_report_pdf(report).getvalue())
    except OSError as exc:
        raise OSError(f"cannot write report into {out_dir}: {exc}") from exc
    logger.info("Report written to %s", out_dir)
    return paths
