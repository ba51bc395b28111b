##
## log-log permittivity-plane plot, emitted as plain SVG
##

import math
from typing import Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

from src.materials.records import MaterialDatabase
from src.screening.regions import RegionSet

ns_svg = "http://www.w3.org/2000/svg"

# canvas
WIDTH, HEIGHT = 900, 640
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 40, 50, 70

HAZARD_STYLE = dict(fill="#d62728", fill_opacity=0.12, stroke="#d62728", stroke_width=2)
SAFE_STYLE = dict(fill="#2ca02c", fill_opacity=0.12, stroke="#2ca02c", stroke_width=2)


##
## element tools
##

def demangle(k):
    return k.rstrip("_").replace("_", "-")


def rounder(x):
    if isinstance(x, float):
        return f"{x:.2f}".rstrip("0").rstrip(".")
    return x


def props_repr(d):
    return " ".join(f'{demangle(k)}="{escape(str(rounder(v)), {chr(34): "&quot;"})}"' for k, v in d.items())


class Element:
    def __init__(self, tag, children=(), text=None, **attr):
        self.tag = tag
        self.children = list(children)
        self.text = text
        self.attr = attr

    def svg(self):
        props = props_repr(self.attr)
        head = f"<{self.tag} {props}" if props else f"<{self.tag}"
        if not self.children and self.text is None:
            return head + "/>"
        inner = escape(self.text) if self.text is not None else ""
        inner += "".join("\n" + c.svg() for c in self.children)
        if self.children:
            inner += "\n"
        return f"{head}>{inner}</{self.tag}>"


##
## axes
##

def _decades(values: Iterable[float]) -> Tuple[float, float]:
    vals = [v for v in values if v > 0 and math.isfinite(v)]
    lo = math.floor(math.log10(min(vals)))
    hi = math.ceil(math.log10(max(vals)))
    if hi <= lo:
        hi = lo + 1
    return float(lo), float(hi)


class LogLogFrame:
    """Maps linear (eps', eps'') values onto canvas pixels on log axes."""

    def __init__(self, xs: Sequence[float], ys: Sequence[float]):
        self.x0, self.x1 = _decades(xs)
        self.y0, self.y1 = _decades(ys)
        self.w = WIDTH - MARGIN_L - MARGIN_R
        self.h = HEIGHT - MARGIN_T - MARGIN_B

    def px(self, x: float) -> float:
        lx = float(np.clip(np.log10(max(x, 10 ** self.x0)), self.x0, self.x1))
        return MARGIN_L + (lx - self.x0) / (self.x1 - self.x0) * self.w

    def py(self, y: float) -> float:
        ly = float(np.clip(np.log10(max(y, 10 ** self.y0)), self.y0, self.y1))
        return MARGIN_T + self.h - (ly - self.y0) / (self.y1 - self.y0) * self.h

    def elements(self) -> List[Element]:
        left, right = MARGIN_L, MARGIN_L + self.w
        top, bottom = MARGIN_T, MARGIN_T + self.h
        out = [Element("path", class_="frame", fill="none", stroke="#333", stroke_width=1,
                       d=f"M{left} {top} L{left} {bottom} L{right} {bottom}")]
        for k in range(int(self.x0), int(self.x1) + 1):
            x = self.px(10.0 ** k)
            out.append(Element("line", class_="tick", x1=x, y1=bottom, x2=x, y2=bottom + 6, stroke="#333"))
            out.append(Element("text", text=f"{10.0 ** k:g}", class_="tick-label",
                               x=x, y=bottom + 22, text_anchor="middle", font_size=12))
        for k in range(int(self.y0), int(self.y1) + 1):
            y = self.py(10.0 ** k)
            out.append(Element("line", class_="tick", x1=left - 6, y1=y, x2=left, y2=y, stroke="#333"))
            out.append(Element("text", text=f"{10.0 ** k:g}", class_="tick-label",
                               x=left - 10, y=y + 4, text_anchor="end", font_size=12))
        out.append(Element("text", text="ε′ (real part)", class_="axis-label",
                           x=MARGIN_L + self.w / 2, y=HEIGHT - 20, text_anchor="middle", font_size=14))
        out.append(Element("text", text="ε″ (loss)", class_="axis-label", x=20, y=MARGIN_T + self.h / 2,
                           text_anchor="middle", font_size=14,
                           transform=f"rotate(-90 20 {rounder(MARGIN_T + self.h / 2)})"))
        return out


##
## figure
##

def render_permittivity_plane(db: MaterialDatabase,
                              regions: RegionSet,
                              locus: Optional[Sequence[Tuple[float, float]]] = None,
                              frequency_ghz: float = 30.0) -> str:
    """
    Scatter of every material on log-log (eps', eps'') axes with the region
    rectangles drawn behind it and an optional locus polyline on top. Output
    depends only on the inputs: fixed ordering, no timestamps.
    """
    locus = list(locus or [])
    xs = [r.permittivity.real for r in db] + [v for g in regions.regions for v in (g.real_min, g.real_max)]
    ys = [r.permittivity.loss for r in db] + [v for g in regions.regions for v in (g.loss_min, g.loss_max)]
    xs += [x for x, _ in locus]
    ys += [y for _, y in locus]
    frame = LogLogFrame(xs, ys)

    boxes = []
    for g in regions.regions:
        x, x2 = frame.px(g.real_min), frame.px(g.real_max)
        y, y2 = frame.py(g.loss_max), frame.py(g.loss_min)
        style = HAZARD_STYLE if g.is_hazard else SAFE_STYLE
        boxes.append(Element("rect", class_=f"region {g.semantics.value}", data_name=g.name,
                             x=x, y=y, width=x2 - x, height=y2 - y, **style))

    points = []
    for r in db:
        cx, cy = frame.px(r.permittivity.real), frame.py(r.permittivity.loss)
        points.append(Element("circle", class_="material", data_name=r.name, cx=cx, cy=cy, r=4,
                              fill="#1f77b4", stroke="#fff", stroke_width=0.5))
        points.append(Element("text", text=r.name, class_="label", x=cx + 6, y=cy - 6, font_size=10))

    children = [
        Element("text", text=f"Complex permittivity at {frequency_ghz:g} GHz (log-log)", class_="title",
                x=WIDTH / 2, y=28, text_anchor="middle", font_size=16),
        Element("g", children=frame.elements(), class_="axes"),
        Element("g", children=boxes, class_="regions"),
        Element("g", children=points, class_="materials"),
    ]
    if locus:
        coords = " ".join(f"{rounder(frame.px(x))},{rounder(frame.py(y))}" for x, y in locus)
        children.append(Element("polyline", class_="locus", points=coords,
                                fill="none", stroke="#9467bd", stroke_width=2))

    root = Element("svg", children=children, xmlns=ns_svg, width=WIDTH, height=HEIGHT,
                   viewBox=f"0 0 {WIDTH} {HEIGHT}", font_family="sans-serif")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + root.svg() + "\n"
