"""
PDF Generator Module for experiment reports
Config echo, criteria table, summary scalars and line charts of the histories
"""

import math
from io import BytesIO
from xml.sax.saxutils import escape

from reportlab.graphics.charts.legends import LineLegend
from reportlab.graphics.charts.lineplots import LinePlot
from reportlab.graphics.shapes import Drawing, String
from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import getSampleStyleSheet, ParagraphStyle
from reportlab.lib.units import mm
from reportlab.platypus import SimpleDocTemplate, Table, TableStyle, Paragraph, Spacer


SERIES_COLORS = [
    colors.HexColor('#3B82F6'),
    colors.HexColor('#EF4444'),
    colors.HexColor('#10B981'),
    colors.HexColor('#F59E0B'),
    colors.HexColor('#8B5CF6'),
    colors.HexColor('#64748B'),
]

# Built-in fonts only cover Latin-1
GREEK_NAMES = {
    'ε': 'eps', 'δ': 'delta', 'φ': 'phi', 'Ψ': 'Psi', 'ψ': 'psi',
    'Σ': 'Sigma', 'ρ': 'rho', '≤': '<=', '≥': '>=', '−': '-', '·': '*',
}


def to_ascii(text):
    """Replace symbols the built-in fonts cannot draw"""
    if text is None:
        return ''
    result = str(text)
    for symbol, name in GREEK_NAMES.items():
        result = result.replace(symbol, name)
    return result


def _fmt(value):
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, float):
        return f"{value:.6g}"
    return escape(to_ascii(value))


def _line_chart(title, t, columns):
    """
    Line chart of several columns against t.

    Args:
        title: chart title
        t: sequence of times
        columns: list of (label, values)

    Returns:
        Drawing, or None when there is nothing plottable
    """
    data, labels = [], []
    for label, values in columns:
        points = [(float(x), float(y)) for x, y in zip(t, values) if math.isfinite(x) and math.isfinite(y)]
        if len(points) >= 2:
            data.append(points)
            labels.append(label)
    if not data:
        return None

    drawing = Drawing(170 * mm, 70 * mm)
    plot = LinePlot()
    plot.x = 15 * mm
    plot.y = 12 * mm
    plot.width = 115 * mm
    plot.height = 48 * mm
    plot.data = data
    plot.joinedLines = 1
    plot.xValueAxis.labelTextFormat = '%.3g'
    plot.yValueAxis.labelTextFormat = '%.3g'
    plot.xValueAxis.labels.fontSize = 6
    plot.yValueAxis.labels.fontSize = 6
    for i in range(len(data)):
        plot.lines[i].strokeColor = SERIES_COLORS[i % len(SERIES_COLORS)]
        plot.lines[i].strokeWidth = 1
    drawing.add(plot)

    legend = LineLegend()
    legend.x = 135 * mm
    legend.y = 60 * mm
    legend.fontSize = 6
    legend.colorNamePairs = [
        (SERIES_COLORS[i % len(SERIES_COLORS)], to_ascii(label)) for i, label in enumerate(labels)
    ]
    drawing.add(legend)
    drawing.add(String(15 * mm, 64 * mm, to_ascii(title), fontSize=9, fontName='Helvetica-Bold'))
    return drawing


def _key_value_table(rows, header, cell_style, header_style, widths):
    table_data = [[Paragraph(h, header_style) for h in header]]
    for row in rows:
        table_data.append([Paragraph(_fmt(cell), cell_style) for cell in row])
    table = Table(table_data, colWidths=widths, repeatRows=1)
    table.setStyle(TableStyle([
        ('BACKGROUND', (0, 0), (-1, 0), colors.HexColor('#3B82F6')),
        ('BOTTOMPADDING', (0, 0), (-1, 0), 6),
        ('TOPPADDING', (0, 0), (-1, 0), 6),
        ('TOPPADDING', (0, 1), (-1, -1), 3),
        ('BOTTOMPADDING', (0, 1), (-1, -1), 3),
        ('ROWBACKGROUNDS', (0, 1), (-1, -1), [colors.white, colors.HexColor('#F8FAFC')]),
        ('ALIGN', (0, 0), (-1, -1), 'LEFT'),
        ('VALIGN', (0, 0), (-1, -1), 'TOP'),
        ('GRID', (0, 0), (-1, -1), 0.5, colors.HexColor('#E2E8F0')),
    ]))
    return table


def generate_report_pdf(report, output_path=None):
    """
    Generate the PDF of an ExperimentReport

    Args:
        report: ExperimentReport
        output_path: optional file to write as well

    Returns:
        BytesIO buffer containing PDF data
    """
    buffer = BytesIO()
    # invariant=1 drops the creation date and random document id
    doc = SimpleDocTemplate(
        buffer,
        pagesize=A4,
        rightMargin=15*mm, leftMargin=15*mm,
        topMargin=15*mm, bottomMargin=15*mm,
        title=to_ascii(report.title),
        invariant=1,
    )

    styles = getSampleStyleSheet()
    title_style = ParagraphStyle(
        'CustomTitle',
        parent=styles['Heading1'],
        fontSize=16,
        spaceAfter=5,
        textColor=colors.HexColor('#1e293b')
    )
    section_style = ParagraphStyle(
        'SectionTitle',
        parent=styles['Heading2'],
        fontSize=11,
        spaceAfter=3,
        spaceBefore=8,
        textColor=colors.HexColor('#1e40af')
    )
    cell_style = ParagraphStyle('CellStyle', parent=styles['Normal'], fontSize=7, leading=9)
    header_style = ParagraphStyle(
        'HeaderStyle',
        parent=styles['Normal'],
        fontSize=8,
        textColor=colors.white,
        leading=10
    )
    verdict_style = ParagraphStyle(
        'Verdict',
        parent=styles['Normal'],
        fontSize=10,
        spaceAfter=10,
        textColor=colors.HexColor('#10B981') if report.passed else colors.HexColor('#EF4444')
    )

    elements = [
        Paragraph(escape(to_ascii(report.title)), title_style),
        Paragraph(
            f"Result: {'PASS' if report.passed else 'FAIL'} "
            f"({sum(c.passed for c in report.criteria)}/{len(report.criteria)} criteria)",
            verdict_style
        ),
    ]

    if report.criteria:
        elements.append(Paragraph("Criteria", section_style))
        rows = [(c.name, 'PASS' if c.passed else 'FAIL', c.value if c.value is not None else '', c.detail)
                for c in report.criteria]
        elements.append(_key_value_table(
            rows, ['Criterion', 'Result', 'Value', 'Detail'], cell_style, header_style,
            [45*mm, 15*mm, 25*mm, 95*mm]
        ))

    if report.summary:
        elements.append(Paragraph("Summary", section_style))
        elements.append(_key_value_table(
            list(report.summary.items()), ['Quantity', 'Value'], cell_style, header_style, [80*mm, 100*mm]
        ))

    charts = []
    if report.norms is not None and len(report.norms) >= 2:
        t = report.norms['t'].tolist()
        charts.append(_line_chart('Norm histories', t, [
            (col, report.norms[col].tolist()) for col in report.norms.columns if col != 't'
        ]))
    for name, table in report.tables.items():
        if 't' in table.columns and len(table) >= 2:
            t = table['t'].tolist()
            charts.append(_line_chart(name, t, [
                (col, table[col].tolist()) for col in table.columns if col != 't' and table[col].dtype.kind in 'fi'
            ]))
    charts = [c for c in charts if c is not None]
    if charts:
        elements.append(Paragraph("Histories", section_style))
        for chart in charts:
            elements.append(chart)
            elements.append(Spacer(1, 4))

    if report.notes:
        elements.append(Paragraph("Notes", section_style))
        for note in report.notes:
            elements.append(Paragraph(escape(to_ascii(note)), styles['Normal']))

    elements.append(Paragraph("Configuration", section_style))
    elements.append(_key_value_table(
        list(report.config.items()), ['Key', 'Value'], cell_style, header_style, [60*mm, 120*mm]
    ))

    doc.build(elements)
    buffer.seek(0)

    if output_path:
        with open(output_path, 'wb') as f:
            f.write(buffer.getvalue())
    return buffer
