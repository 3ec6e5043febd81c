##
# @file plotting.py
#
# @section description_plotting Description
# Static SVG pictures: the rays of a stacky fan, and a two dimensional slice
# or projection of Pic with sporadic H-trivial classes and line families.
# Output is deterministic (fixed hash salt, no date metadata).
#
# @section libraries_plotting Libraries/Modules
# - matplotlib (Agg backend, SVG output)
# - htrivpy.first_mate.errors

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

from htrivpy.first_mate.errors import DomainError

SVG_METADATA = {'Date': None}


def _save(fig, path):
    with matplotlib.rc_context({'svg.hashsalt': 'htrivpy', 'svg.fonttype': 'none'}):
        fig.savefig(path, format='svg', metadata=SVG_METADATA)
    plt.close(fig)


def plot_fan(fan, path):
    '''Draw the generators v_i as arrows labelled by their index.'''
    fig, ax = plt.subplots(figsize=(5, 5))
    reach = max(max(abs(v[0]), abs(v[1])) for v in fan.vectors) + 1
    for i, (x, y) in enumerate(fan.vectors):
        ax.annotate('', xy=(x, y), xytext=(0, 0),
                    arrowprops={'arrowstyle': '->', 'color': 'tab:blue'})
        ax.text(x * 1.08, y * 1.08, f'v{i + 1}', ha='center', va='center')
    ax.plot([0], [0], 'k.')
    ax.set_xlim(-reach, reach)
    ax.set_ylim(-reach, reach)
    ax.set_aspect('equal')
    ax.grid(True, linewidth=0.3)
    ax.set_title(fan.name or 'stacky fan')
    _save(fig, path)


def _slice_coordinates(c, axes, fixed):
    free = c.free
    if len(free) == 1:
        return (free[0], 0)
    if fixed is not None:
        others = [j for j in range(len(free)) if j not in axes]
        if any(free[j] != fixed for j in others):
            return None
    return (free[axes[0]], free[axes[1]])


def plot_picard_slice(report, path, axes=(0, 1), fixed=None):
    '''Draw H-trivial classes of a report on a coordinate plane of Pic.

    Parameters
    ----------
    report: ClassificationReport
        Free rank at most 3.
    path: str
        SVG file to write.
    axes: (int, int), optional
        Free coordinates on the horizontal and vertical axis.
    fixed: int, optional
        Value of the remaining coordinate for a slice; a projection when None.

    '''
    k = report.pic.free_rank
    if k > 3:
        raise DomainError(f'Pic plots need free rank at most 3, got {k}', code='domain.plot')
    if k >= 2 and (len(set(axes)) != 2 or not all(0 <= a < k for a in axes)):
        raise DomainError(f'plot axes must be two distinct coordinates below {k}',
                          code='domain.plot')
    fig, ax = plt.subplots(figsize=(6, 6))
    labels = report.pic.basis_labels
    markers = ['s', '^', 'D', 'v', 'P', 'X']
    for n, line in enumerate(report.lines):
        pts = [p for p in (_slice_coordinates(c, axes, fixed) for c in line.hits) if p]
        if pts:
            style = '-' if line.status.fully_trivial else ':'
            ax.plot([p[0] for p in pts], [p[1] for p in pts], style,
                    marker=markers[n % len(markers)], linewidth=0.8,
                    label=f'{line.base} + l{line.direction} ({line.status.status})')
    pts = [p for p in (_slice_coordinates(c, axes, fixed) for c in report.sporadic) if p]
    if pts:
        ax.plot([p[0] for p in pts], [p[1] for p in pts], 'o', color='tab:red',
                linestyle='none', label='sporadic')
    ax.plot([0], [0], 'k+')
    if labels and k >= 2:
        ax.set_xlabel(labels[axes[0]])
        ax.set_ylabel(labels[axes[1]])
    ax.set_aspect('equal')
    ax.grid(True, linewidth=0.3)
    ax.set_title(f'H-trivial classes, radius {report.ball_radius}')
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc='best', fontsize='small')
    _save(fig, path)
