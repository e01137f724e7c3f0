"""Export utilities for reports"""

import csv
import io
import json

import config
from utils.scoring import round_sig


def to_json(report):
    """Byte-stable JSON: sorted keys, floats at fixed significant digits"""
    return json.dumps(round_sig(report), sort_keys=True, indent=2, allow_nan=False) + '\n'


def to_jsonl_row(row):
    ordered = {key: round_sig(row.get(key)) for key in config.CSV_FIELDS}
    return json.dumps(ordered, allow_nan=False) + '\n'


def csv_header():
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator='\n').writerow(config.CSV_FIELDS)
    return buffer.getvalue()


def to_csv_row(row):
    buffer = io.StringIO()
    values = []
    for key in config.CSV_FIELDS:
        value = round_sig(row.get(key))
        values.append('' if value is None else (str(value).lower() if isinstance(value, bool) else value))
    csv.writer(buffer, lineterminator='\n').writerow(values)
    return buffer.getvalue()


def summary_line(counts, fmt):
    if fmt == 'jsonl':
        return json.dumps({'summary': counts}, sort_keys=True) + '\n'
    return '# summary ' + ' '.join(f'{key}={counts[key]}' for key in sorted(counts)) + '\n'


def _fmt(value):
    value = round_sig(value)
    if isinstance(value, dict) and 'value' in value:
        value = value['value']
    return 'N/A' if value is None else value


def generate_markdown_report(report):
    """Markdown rendering of an analyze/gamma/max2sat report"""
    command = report.get('command', 'analyze')
    source = report.get('input', {})
    text = f"""# Scheme Gauge Report

**Command:** {command}
**Input:** {source.get('source', 'N/A')}
**Vertices:** {source.get('n', 'N/A')}
**Schema:** {report.get('schema_version')}

"""
    configuration = report.get('configuration')
    if configuration:
        text += "## Coherent Closure\n\n"
        text += f"- **Classes:** {configuration.get('classes')}\n"
        text += f"- **Fibers:** {configuration.get('fibers')}\n"
        for flag in ('homogeneous', 'commutative', 'symmetric'):
            text += f"- **{flag.title()}:** {'yes' if configuration.get(flag) else 'no'}\n"
        membership = report.get('membership')
        if membership:
            text += f"- **Membership:** {membership.get('kind')} ({membership.get('index')})\n"
        text += "\n"

    scheme = report.get('scheme')
    if scheme:
        text += "## First Eigenmatrix\n\n"
        header = ' | '.join(f'A_{i}' for i in range(len(scheme['P'][0])))
        text += f"| | {header} |\n|---|{'---|' * len(scheme['P'][0])}\n"
        for l, row in enumerate(scheme['P']):
            text += f"| E_{l} | " + ' | '.join(str(round_sig(v, 6)) for v in row) + " |\n"
        text += "\n"

    bounds = report.get('bounds') or {}
    text += "## Bounds\n\n"
    if bounds.get('status') in ('unavailable', 'trivial'):
        text += f"- **Status:** {bounds.get('status')} {bounds.get('reason', '')}\n\n"
    else:
        text += "| Quantity | Value |\n|----------|-------|\n"
        for key in ('eta', 'eta_dual', 'eta_product', 'edges', 'eta_status',
                    'gamma', 'gamma_dual', 'gamma_product', 'target', 'gamma_status', 'upper_bound'):
            if key in bounds:
                text += f"| **{key.replace('_', ' ').title()}** | {_fmt(bounds[key])} |\n"
        text += "\n"

    oracle = report.get('oracle')
    if oracle:
        text += "## Oracles\n\n"
        if isinstance(oracle, str):
            text += f"- {oracle}\n"
        else:
            for key, value in sorted(oracle.items()):
                if not isinstance(value, (list, dict)):
                    text += f"- **{key.replace('_', ' ').title()}:** {_fmt(value)}\n"
        text += "\n"

    rounding = report.get('rounding')
    if rounding:
        text += "## Hyperplane Rounding\n\n"
        for key in ('trials', 'seed', 'best_value', 'mean', 'standard_error'):
            text += f"- **{key.replace('_', ' ').title()}:** {_fmt(rounding.get(key))}\n"
        text += "\n"

    text += "---\n\n*Report generated by Scheme Gauge.*\n"
    return text


def save_report(content, filename):
    """Save a rendered report to file"""
    with open(filename, 'w', encoding='utf-8') as f:
        f.write(content)
    return filename
