"""
Plot-script emission.

Each figure is a standalone matplotlib script next to the CSVs it reads,
so figures can be regenerated without re-running the simulation.
"""
import os

_TEMPLATE = '''#!/usr/bin/env python3
"""{title}"""
import os

import matplotlib.pyplot as plt
import pandas as pd

HERE = os.path.dirname(os.path.abspath(__file__))
df = pd.read_csv(os.path.join(HERE, {csv!r}))

fig, ax = plt.subplots(figsize=(8, 4.5))
{lines}
ax.set_xlabel({xlabel!r})
ax.set_ylabel({ylabel!r})
ax.set_title({title!r})
{xlim}ax.legend()
ax.grid(alpha=0.3)
fig.tight_layout()
fig.savefig(os.path.join(HERE, {png!r}), dpi=150)
'''


def emit_plot_script(out_dir, name, title, csv_name, x_col, series, ylabel, xlim=None):
    """
    Write plot_<name>.py drawing columns of csv_name against x_col.

    Args:
        series: list of (column, label, style) tuples
        xlim: optional (lo, hi) window

    Returns:
        path of the written script
    """
    lines = "\n".join(
        f"ax.plot(df[{x_col!r}], df[{col!r}], {style!r}, label={label!r})"
        for col, label, style in series
    )
    script = _TEMPLATE.format(
        title=title,
        csv=csv_name,
        lines=lines,
        xlabel=x_col,
        ylabel=ylabel,
        xlim=f"ax.set_xlim({xlim[0]!r}, {xlim[1]!r})\n" if xlim else "",
        png=f"{name}.png",
    )
    path = os.path.join(out_dir, f"plot_{name}.py")
    try:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(script)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def emit_norm_plots(out_dir, csv_name='norms.csv'):
    return [
        emit_plot_script(out_dir, 'norms_u', 'Short-wave norms', csv_name, 't',
                         [('mass', 'mass', '-'), ('h1_u', 'H1 norm of u', '--')], 'value'),
        emit_plot_script(out_dir, 'norms_v', 'Long-wave norms', csv_name, 't',
                         [('l2_vtilde', 'L2 of v_tilde', '-'), ('hm1_v', 'H-1 of v', '--'),
                          ('shock_energy', 'weighted shock energy', ':')], 'value'),
    ]


def emit_field_plots(out_dir, csv_name, label, window=None):
    return [
        emit_plot_script(out_dir, f'{label}_u', f'Short wave ({label})', csv_name, 'x',
                         [('re_u', 'Re u', '-'), ('im_u', 'Im u', '--')], 'u', window),
        emit_plot_script(out_dir, f'{label}_v', f'Long wave ({label})', csv_name, 'x',
                         [('v_tilde', 'v', '-')], 'v', window),
    ]
