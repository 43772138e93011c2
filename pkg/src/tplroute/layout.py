"""Routing problem ingestion: grid description, rules, nets, obstacles.

The on-disk format is a single JSON object:

    {"grid": {"width": W, "height": H, "layers": [{"dir": "H"|"V"}, ...]},
     "rules": {"d_color": ..., "alpha": ..., "beta": ..., "gamma": ...,
               "stitch_cost": ..., "via_cost": ..., "wrong_way_cost": ...,
               "history_increment": ..., "max_iterations": ...},
     "obstacles": [[x, y, l], ...],
     "nets": [{"id": ..., "name": ..., "pins": [[[x, y, l], ...], ...],
               "guide": [{"layer": l, "x0": ..., "y0": ..., "x1": ..., "y1": ...}, ...]}]}

Coordinates are abstract grid tracks. "guide" is optional per net; an
optional "off_guide_penalty" rules key configures the soft penalty for
leaving the guide (default 4.0).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

Vertex = tuple[int, int, int]

DEFAULT_OFF_GUIDE_PENALTY = 4.0


class LayoutError(ValueError):
    """Malformed or inconsistent layout input."""


@dataclass
class DesignRules:
    """Spacing threshold, cost weights, and negotiation knobs."""

    d_color: int = 2
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 50.0
    stitch_cost: float = 5.0
    via_cost: float = 4.0
    wrong_way_cost: float = 2.0
    history_increment: float = 10.0
    max_iterations: int = 10
    off_guide_penalty: float = DEFAULT_OFF_GUIDE_PENALTY


@dataclass(frozen=True)
class Layer:
    index: int
    preferred_direction: str  # "H" or "V"


@dataclass
class Pin:
    net_id: int
    covered_vertices: list[Vertex]


@dataclass
class Net:
    id: int
    name: str
    pins: list[Pin]
    # Guide boxes as (layer, x0, y0, x1, y1), inclusive bounds.
    guide: list[tuple[int, int, int, int, int]] | None = None


@dataclass
class Layout:
    width: int
    height: int
    layers: list[Layer]
    rules: DesignRules
    obstacles: set[Vertex] = field(default_factory=set)
    nets: list[Net] = field(default_factory=list)

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    def in_bounds(self, v: Vertex) -> bool:
        x, y, l = v
        return 0 <= x < self.width and 0 <= y < self.height and 0 <= l < self.num_layers


_RULE_FIELDS = (
    "d_color",
    "alpha",
    "beta",
    "gamma",
    "stitch_cost",
    "via_cost",
    "wrong_way_cost",
    "history_increment",
    "max_iterations",
)


def _require(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise LayoutError(f"missing field '{key}' in {where}")
    return obj[key]


def _vertex(raw: Any, where: str) -> Vertex:
    if not isinstance(raw, (list, tuple)) or len(raw) != 3:
        raise LayoutError(f"bad vertex {raw!r} in {where}")
    x, y, l = raw
    if not all(isinstance(c, int) for c in (x, y, l)):
        raise LayoutError(f"non-integer vertex {raw!r} in {where}")
    return (x, y, l)


def layout_from_dict(data: dict) -> Layout:
    """Build and validate a Layout from parsed JSON."""
    grid = _require(data, "grid", "layout")
    width = _require(grid, "width", "grid")
    height = _require(grid, "height", "grid")
    raw_layers = _require(grid, "layers", "grid")
    if not raw_layers:
        raise LayoutError("grid needs at least one layer")
    layers = []
    for i, entry in enumerate(raw_layers):
        d = _require(entry, "dir", f"layer {i}")
        if d not in ("H", "V"):
            raise LayoutError(f"layer {i} direction must be 'H' or 'V', got {d!r}")
        layers.append(Layer(index=i, preferred_direction=d))

    raw_rules = _require(data, "rules", "layout")
    for name in _RULE_FIELDS:
        _require(raw_rules, name, "rules")
    rules = DesignRules(
        d_color=int(raw_rules["d_color"]),
        alpha=float(raw_rules["alpha"]),
        beta=float(raw_rules["beta"]),
        gamma=float(raw_rules["gamma"]),
        stitch_cost=float(raw_rules["stitch_cost"]),
        via_cost=float(raw_rules["via_cost"]),
        wrong_way_cost=float(raw_rules["wrong_way_cost"]),
        history_increment=float(raw_rules["history_increment"]),
        max_iterations=int(raw_rules["max_iterations"]),
        off_guide_penalty=float(raw_rules.get("off_guide_penalty", DEFAULT_OFF_GUIDE_PENALTY)),
    )

    obstacles = {_vertex(o, "obstacles") for o in data.get("obstacles", [])}

    nets = []
    for raw_net in _require(data, "nets", "layout"):
        net_id = _require(raw_net, "id", "net")
        name = _require(raw_net, "name", f"net {net_id}")
        pins = []
        for p, raw_pin in enumerate(_require(raw_net, "pins", f"net {net_id}")):
            cover = [_vertex(v, f"net {net_id} pin {p}") for v in raw_pin]
            pins.append(Pin(net_id=net_id, covered_vertices=cover))
        guide = None
        if raw_net.get("guide"):
            guide = []
            for box in raw_net["guide"]:
                guide.append(
                    (
                        int(_require(box, "layer", f"net {net_id} guide")),
                        int(_require(box, "x0", f"net {net_id} guide")),
                        int(_require(box, "y0", f"net {net_id} guide")),
                        int(_require(box, "x1", f"net {net_id} guide")),
                        int(_require(box, "y1", f"net {net_id} guide")),
                    )
                )
        nets.append(Net(id=net_id, name=name, pins=pins, guide=guide))

    layout = Layout(
        width=int(width),
        height=int(height),
        layers=layers,
        rules=rules,
        obstacles=obstacles,
        nets=nets,
    )
    violations = validate(layout)
    if violations:
        raise LayoutError("; ".join(violations))
    return layout


def load_layout(path: str | Path) -> Layout:
    """Load a layout file, raising LayoutError on any parse or validation problem."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise LayoutError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise LayoutError(f"cannot parse {path}: {exc}") from exc
    return layout_from_dict(data)


def validate(layout: Layout) -> list[str]:
    """All invariant violations, one message per offense. Empty means valid."""
    problems: list[str] = []
    if layout.width < 1 or layout.height < 1:
        problems.append(f"grid dimensions must be positive, got {layout.width}x{layout.height}")
    for a, b in zip(layout.layers, layout.layers[1:]):
        if a.preferred_direction == b.preferred_direction:
            problems.append(
                f"layers {a.index} and {b.index} do not alternate preferred direction"
            )

    r = layout.rules
    if r.d_color < 1:
        problems.append(f"d_color must be >= 1, got {r.d_color}")
    for name in ("alpha", "beta", "gamma", "stitch_cost", "via_cost",
                 "wrong_way_cost", "history_increment", "off_guide_penalty"):
        if getattr(r, name) < 0:
            problems.append(f"rule {name} must be non-negative, got {getattr(r, name)}")
    if r.max_iterations < 1:
        problems.append(f"max_iterations must be >= 1, got {r.max_iterations}")

    for o in sorted(layout.obstacles):
        if not layout.in_bounds(o):
            problems.append(f"obstacle {o} out of bounds")

    seen_ids: set[int] = set()
    pin_claims: dict[Vertex, int] = {}
    for net in layout.nets:
        if net.id in seen_ids:
            problems.append(f"duplicate net id {net.id}")
        seen_ids.add(net.id)
        if not net.pins:
            problems.append(f"net {net.id} has no pins")
        for p, pin in enumerate(net.pins):
            if not pin.covered_vertices:
                problems.append(f"net {net.id} pin {p} covers no vertices")
            for v in pin.covered_vertices:
                if not layout.in_bounds(v):
                    problems.append(f"net {net.id} pin {p} vertex {v} out of bounds")
                elif v in layout.obstacles:
                    problems.append(f"net {net.id} pin {p} vertex {v} sits on an obstacle")
                elif pin_claims.get(v, net.id) != net.id:
                    problems.append(
                        f"pin vertex {v} shared by nets {pin_claims[v]} and {net.id}"
                    )
                else:
                    pin_claims[v] = net.id
        if net.guide:
            for box in net.guide:
                l, x0, y0, x1, y1 = box
                if not (0 <= l < layout.num_layers) or x0 > x1 or y0 > y1:
                    problems.append(f"net {net.id} guide box {box} is malformed")
                elif not (layout.in_bounds((x0, y0, l)) and layout.in_bounds((x1, y1, l))):
                    problems.append(f"net {net.id} guide box {box} out of bounds")
    return problems


def layout_to_dict(layout: Layout) -> dict:
    """Serialize back to the JSON schema (stable ordering for byte determinism)."""
    r = layout.rules
    return {
        "grid": {
            "width": layout.width,
            "height": layout.height,
            "layers": [{"dir": layer.preferred_direction} for layer in layout.layers],
        },
        "rules": {
            "d_color": r.d_color,
            "alpha": r.alpha,
            "beta": r.beta,
            "gamma": r.gamma,
            "stitch_cost": r.stitch_cost,
            "via_cost": r.via_cost,
            "wrong_way_cost": r.wrong_way_cost,
            "history_increment": r.history_increment,
            "max_iterations": r.max_iterations,
            "off_guide_penalty": r.off_guide_penalty,
        },
        "obstacles": [list(v) for v in sorted(layout.obstacles)],
        "nets": [
            {
                "id": net.id,
                "name": net.name,
                "pins": [[list(v) for v in pin.covered_vertices] for pin in net.pins],
                **(
                    {
                        "guide": [
                            {"layer": l, "x0": x0, "y0": y0, "x1": x1, "y1": y1}
                            for (l, x0, y0, x1, y1) in net.guide
                        ]
                    }
                    if net.guide
                    else {}
                ),
            }
            for net in layout.nets
        ],
    }


def save_layout(layout: Layout, path: str | Path) -> None:
    Path(path).write_text(json.dumps(layout_to_dict(layout), indent=2, sort_keys=True) + "\n")
