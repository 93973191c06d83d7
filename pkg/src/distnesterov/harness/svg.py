"""Minimal semilog-y line chart written as plain SVG."""

import math
from xml.sax.saxutils import escape

from ..errors import OutputError

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 170, 30, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")
MAX_POINTS = 4000
FLOOR = 1e-16


def _series(trace, metric):
    ks, vals = [], []
    for r in trace.records:
        v = getattr(r, metric)
        if math.isfinite(v):
            ks.append(r.k)
            vals.append(max(v, FLOOR))
    stride = max(1, math.ceil(len(ks) / MAX_POINTS))
    if stride > 1:
        last = (ks[-1], vals[-1])
        ks, vals = ks[::stride], vals[::stride]
        if ks[-1] != last[0]:
            ks.append(last[0])
            vals.append(last[1])
    return ks, vals


def render_svg(traces, metric="residual", ylabel="average residual", title=None):
    series = [(t.label, *_series(t, metric)) for t in traces]
    all_k = [k for _, ks, _ in series for k in ks]
    all_v = [v for _, _, vs in series for v in vs]
    kmin, kmax = (min(all_k), max(all_k)) if all_k else (0, 1)
    if kmax == kmin:
        kmax = kmin + 1
    lo = math.floor(math.log10(min(all_v))) if all_v else -1
    hi = math.ceil(math.log10(max(all_v))) if all_v else 0
    if hi == lo:
        hi = lo + 1

    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(k):
        return MARGIN_L + (k - kmin) / (kmax - kmin) * pw

    def py(v):
        return MARGIN_T + (hi - math.log10(v)) / (hi - lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{MARGIN_L + pw / 2:.1f}" y="{MARGIN_T - 10}" text-anchor="middle">'
                   f'{escape(title)}</text>')
    step = max(1, math.ceil((hi - lo) / 10))
    for e in range(lo, hi + 1, step):
        y = py(10.0 ** e)
        out.append(f'<line x1="{MARGIN_L}" y1="{y:.2f}" x2="{MARGIN_L + pw}" y2="{y:.2f}" '
                   f'stroke="#dddddd"/>')
        out.append(f'<text x="{MARGIN_L - 6}" y="{y + 4:.2f}" text-anchor="end">1e{e}</text>')
    for i in range(6):
        k = kmin + (kmax - kmin) * i / 5
        x = px(k)
        out.append(f'<line x1="{x:.2f}" y1="{MARGIN_T + ph}" x2="{x:.2f}" y2="{MARGIN_T + ph + 5}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{MARGIN_T + ph + 20}" text-anchor="middle">{round(k)}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">iteration</text>')
    out.append(f'<text transform="translate(20,{MARGIN_T + ph / 2:.1f}) rotate(-90)" '
               f'text-anchor="middle">{escape(ylabel)}</text>')

    legend = ['<g class="legend">']
    for idx, (label, ks, vs) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        pts = " ".join(f"{px(k):.2f},{py(v):.2f}" for k, v in zip(ks, vs))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}">'
                   f'<title>{escape(label)}</title></polyline>')
        ly = MARGIN_T + 10 + 20 * idx
        lx = MARGIN_L + pw + 15
        legend.append(f'<g class="legend-entry"><line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" '
                      f'stroke="{color}" stroke-width="2"/>'
                      f'<text x="{lx + 32}" y="{ly + 4}">{escape(label)}</text></g>')
    legend.append("</g>")
    out.extend(legend)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(traces, path, metric="residual", ylabel="average residual", title=None):
    text = render_svg(traces, metric=metric, ylabel=ylabel, title=title)
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
