"""Force-directed layout and SVG rendering with importance-colored nodes."""

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .metrics import importance

DEFAULT_SEED = 42
DEFAULT_ITERATIONS = 200
DEFAULT_RADIUS_RANGE = (8.0, 24.0)


@dataclass(frozen=True)
class LayoutResult:
    positions: dict
    seed: int
    iterations: int

    def __getitem__(self, cid):
        return self.positions[cid]


def layout_force_directed(net, seed=DEFAULT_SEED, iterations=DEFAULT_ITERATIONS):
    """Fruchterman-Reingold spring layout in the unit square.

    Repulsion k²/d acts between every pair of nodes and attraction d²/k
    (times edge weight) along edges, with k = sqrt(1/n).  The displacement
    cap cools linearly from 0.1 to 0.  Positions are finally rescaled
    (aspect preserved, centered) into [0, 1]².
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    ids = net.node_ids()
    n = len(ids)
    if n == 0:
        return LayoutResult({}, seed, iterations)
    if n == 1:
        return LayoutResult({ids[0]: (0.5, 0.5)}, seed, iterations)

    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    index = {cid: k for k, cid in enumerate(ids)}
    weight = np.zeros((n, n))
    for (a, b), w in net.edges.items():
        weight[index[a], index[b]] = weight[index[b], index[a]] = w
    k = math.sqrt(1.0 / n)
    t0 = 0.1
    for it in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.maximum(np.linalg.norm(delta, axis=-1), 0.01)
        # net outward force per unit direction: repulsion minus attraction
        strength = k * k / dist - weight * dist * dist / k
        np.fill_diagonal(strength, 0.0)
        disp = np.einsum("ijk,ij->ik", delta / dist[:, :, None], strength)
        length = np.maximum(np.linalg.norm(disp, axis=1), 1e-12)
        cap = t0 * (1.0 - it / iterations)
        pos += disp * (np.minimum(length, cap) / length)[:, None]

    pos -= pos.min(axis=0)
    extent = pos.max()
    if extent > 0:
        pos /= extent
    pos += (1.0 - pos.max(axis=0)) / 2.0
    pos = np.clip(pos, 0.0, 1.0)
    return LayoutResult({cid: (float(pos[index[cid], 0]), float(pos[index[cid], 1])) for cid in ids},
                        seed, iterations)


@dataclass(frozen=True)
class ColorScale:
    """Piecewise-linear map from a score fraction in [0, 1] to RGB."""

    stops: tuple

    def __post_init__(self):
        stops = tuple((float(f), tuple(int(c) for c in rgb)) for f, rgb in self.stops)
        object.__setattr__(self, "stops", stops)
        fracs = [f for f, _ in stops]
        if len(stops) < 2 or fracs[0] != 0.0 or fracs[-1] != 1.0 or fracs != sorted(fracs):
            raise ValueError("color stops must be sorted and run from 0.0 to 1.0")

    def segment(self, frac):
        """Index of the stop interval holding ``frac``."""
        frac = min(1.0, max(0.0, frac))
        for i in range(len(self.stops) - 1):
            if frac <= self.stops[i + 1][0]:
                return i
        return len(self.stops) - 2

    def rgb(self, frac):
        frac = min(1.0, max(0.0, frac))
        i = self.segment(frac)
        (f0, c0), (f1, c1) = self.stops[i], self.stops[i + 1]
        t = 0.0 if f1 == f0 else (frac - f0) / (f1 - f0)
        return tuple(int(round(a + (b - a) * t)) for a, b in zip(c0, c1))

    def hex(self, frac):
        return "#%02x%02x%02x" % self.rgb(frac)


# light yellow to deep red
DEFAULT_SCALE = ColorScale(((0.0, (255, 255, 204)), (1.0, (189, 0, 38))))


def _f(x):
    return f"{x:.3f}"


def render_svg(net, layout, scores=None, scale=DEFAULT_SCALE, node_radius_range=DEFAULT_RADIUS_RANGE,
               size=800, margin=60):
    """Draw ``net`` as an SVG document.

    Node radius and fill follow the score normalized by its maximum; edge
    stroke width grows with log(1 + weight).  Output bytes depend only on
    the arguments.
    """
    if scores is None:
        scores = importance(net)
    scores = dict(getattr(scores, "scores", scores))
    top = max((scores[cid] for cid in net.node_ids()), default=0.0)
    rmin, rmax = node_radius_range
    span = size - 2 * margin

    def xy(cid):
        x, y = layout[cid]
        return margin + x * span, margin + y * span

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
    ]
    if net.nodes:
        out.append('<g id="edges" stroke="#7f7f7f" stroke-opacity="0.8" stroke-linecap="round">')
        for (a, b), w in sorted(net.edges.items()):
            (x1, y1), (x2, y2) = xy(a), xy(b)
            out.append(
                f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                f'stroke-width="{_f(1.5 * math.log1p(w))}"/>'
            )
        out.append("</g>")
        out.append('<g id="nodes" stroke="#333333" stroke-width="1">')
        for node in net.nodes:
            frac = scores[node.id] / top if top > 0 else 0.0
            x, y = xy(node.id)
            r = rmin + frac * (rmax - rmin)
            out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="{scale.hex(frac)}"/>')
        out.append("</g>")
        out.append('<g id="labels" font-family="sans-serif" font-size="14" text-anchor="middle" fill="#111111">')
        for node in net.nodes:
            # offset by the largest radius so labels do not move with scores
            x, y = xy(node.id)
            out.append(f'<text x="{_f(x)}" y="{_f(y - rmax - 4)}">{escape(node.label)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

