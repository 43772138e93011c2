"""Route-then-decompose comparison arm.

Routes every net with color and stitch costs zeroed, carves the committed
wires into maximal straight same-layer segments, builds the conflict
graph between close segments of different nets, and 3-colors it: exactly
for components of up to 12 segments, greedily (descending conflict
degree) above that. Stitch freedom exists only at segment boundaries,
i.e. bends and junctions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .color_state import COLOR_ORDER, Color
from .grid import Grid
from .layout import DesignRules, Layout, LayoutError, Vertex, validate
from .negotiation import net_order_key, route_batch
from .router import RouteTree, recount_stitches

EXACT_COMPONENT_LIMIT = 12


@dataclass
class Segment:
    index: int
    net_id: int
    layer: int
    vertices: list[Vertex]


@dataclass
class ConflictGraph:
    segments: list[Segment]
    # Index pairs (i < j): different nets within d_color on one layer.
    conflict_edges: list[tuple[int, int]]
    # Index pairs (i < j): same net, grid-adjacent on one layer.
    stitch_edges: list[tuple[int, int]]

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in self.segments]
        for i, j in self.conflict_edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


@dataclass
class Decomposition:
    node_colors: list[Color]
    conflict_edge_count: int
    stitch_edge_count: int


@dataclass
class BaselineResult:
    grid: Grid
    routes: dict[int, RouteTree]
    graph: ConflictGraph
    decomposition: Decomposition


def route_colorless(layout: Layout) -> tuple[Grid, dict[int, RouteTree]]:
    """One routing pass with gamma = stitch_cost = 0 (masks ignored)."""
    problems = validate(layout)
    if problems:
        raise LayoutError("; ".join(problems))
    grid = Grid.from_layout(layout)
    grid.rules = replace(layout.rules, gamma=0.0, stitch_cost=0.0)
    routes: dict[int, RouteTree] = {}
    ordered = sorted(layout.nets, key=net_order_key)
    route_batch(grid, ordered, routes, ordered)
    grid.rules = layout.rules
    return grid, routes


def build_conflict_graph(grid: Grid, rules: DesignRules) -> ConflictGraph:
    segments = _extract_segments(grid)
    conflict_edges = []
    stitch_edges = []
    for i, a in enumerate(segments):
        for j in range(i + 1, len(segments)):
            b = segments[j]
            if a.layer != b.layer:
                continue
            if a.net_id != b.net_id:
                if _min_distance(a, b) < rules.d_color:
                    conflict_edges.append((i, j))
            elif _adjacent(a, b):
                stitch_edges.append((i, j))
    return ConflictGraph(segments, conflict_edges, stitch_edges)


def decompose(graph: ConflictGraph) -> Decomposition:
    """3-color the segment graph, minimizing conflicts first, stitches second.

    Components small enough for exhaustive search are solved exactly; the
    rest fall back to greedy coloring in descending conflict-degree order
    (ties by node index). Route geometry is untouched.
    """
    colors: list[Color | None] = [None] * len(graph.segments)
    adj = graph.adjacency()
    stitch_adj: list[set[int]] = [set() for _ in graph.segments]
    for i, j in graph.stitch_edges:
        stitch_adj[i].add(j)
        stitch_adj[j].add(i)

    for component in _components(len(graph.segments), adj, stitch_adj):
        if len(component) <= EXACT_COMPONENT_LIMIT:
            assignment = exact_color_component(component, adj, stitch_adj)
        else:
            assignment = greedy_color_component(component, adj)
        for node, color in assignment.items():
            colors[node] = color

    final = [c if c is not None else Color.RED for c in colors]
    conflict_count = sum(1 for i, j in graph.conflict_edges if final[i] == final[j])
    stitch_count = sum(1 for i, j in graph.stitch_edges if final[i] != final[j])
    return Decomposition(final, conflict_count, stitch_count)


def greedy_color_component(component: list[int], adj: list[set[int]]) -> dict[int, Color]:
    """Descending-degree greedy; exhausted nodes take the least-used neighbor color."""
    order = sorted(component, key=lambda n: (-len(adj[n]), n))
    chosen: dict[int, Color] = {}
    for node in order:
        neighbor_colors = [chosen[n] for n in sorted(adj[node]) if n in chosen]
        free = [c for c in COLOR_ORDER if c not in neighbor_colors]
        if free:
            chosen[node] = free[0]
        else:
            counts = {c: neighbor_colors.count(c) for c in COLOR_ORDER}
            chosen[node] = min(COLOR_ORDER, key=lambda c: (counts[c], -int(c)))
    return chosen


def exact_color_component(
    component: list[int], adj: list[set[int]], stitch_adj: list[set[int]]
) -> dict[int, Color]:
    """Exhaustive lexicographic minimum of (conflicts, stitches)."""
    nodes = sorted(component)
    pos = {n: i for i, n in enumerate(nodes)}
    best: tuple[int, int, tuple[int, ...]] | None = None
    assignment: list[int] = [0] * len(nodes)  # COLOR_ORDER indices

    def walk(i: int, conflicts: int, stitches: int) -> None:
        nonlocal best
        if best is not None and (conflicts, stitches) >= best[:2]:
            return
        if i == len(nodes):
            best = (conflicts, stitches, tuple(assignment))
            return
        node = nodes[i]
        for ci in range(3):
            assignment[i] = ci
            extra_c = sum(
                1
                for n in adj[node]
                if n in pos and pos[n] < i and assignment[pos[n]] == ci
            )
            extra_s = sum(
                1
                for n in stitch_adj[node]
                if n in pos and pos[n] < i and assignment[pos[n]] != ci
            )
            walk(i + 1, conflicts + extra_c, stitches + extra_s)

    walk(0, 0, 0)
    assert best is not None
    return {n: COLOR_ORDER[best[2][i]] for i, n in enumerate(nodes)}


def run_baseline(layout: Layout) -> BaselineResult:
    """Colorless routing, decomposition, and recolored route trees."""
    grid, routes = route_colorless(layout)
    graph = build_conflict_graph(grid, layout.rules)
    decomposition = decompose(graph)
    for segment, color in zip(graph.segments, decomposition.node_colors):
        for v in segment.vertices:
            grid.recolor_vertex(v, color)
    recolored: dict[int, RouteTree] = {}
    for net_id, tree in routes.items():
        vertex_colors = {v: grid.committed[v][1] for v in tree.vertex_colors}
        recolored[net_id] = replace(
            tree,
            vertex_colors=vertex_colors,
            stitches=recount_stitches(vertex_colors),
        )
    return BaselineResult(grid, recolored, graph, decomposition)


def _components(
    count: int, adj: list[set[int]], stitch_adj: list[set[int]]
) -> list[list[int]]:
    """Connected components over conflict and stitch edges combined."""
    seen: set[int] = set()
    out = []
    for start in range(count):
        if start in seen:
            continue
        component = []
        stack = [start]
        seen.add(start)
        while stack:
            node = stack.pop()
            component.append(node)
            for n in sorted(adj[node] | stitch_adj[node]):
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
        out.append(sorted(component))
    return out


def _extract_segments(grid: Grid) -> list[Segment]:
    """Partition committed vertices into maximal straight same-layer runs.

    Runs along the layer's preferred axis are taken first (length >= 2);
    leftovers become runs along the other axis, singles included.
    """
    by_net_layer: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for (x, y, l), (net_id, _) in grid.committed.items():
        by_net_layer.setdefault((net_id, l), set()).add((x, y))

    raw: list[tuple[int, int, list[Vertex]]] = []
    for (net_id, layer) in sorted(by_net_layer):
        points = by_net_layer[(net_id, layer)]
        horizontal = grid.layer_dirs[layer] == "H"
        taken: set[tuple[int, int]] = set()
        for run in _axis_runs(points, along_x=horizontal):
            if len(run) >= 2:
                taken.update(run)
                raw.append((net_id, layer, [(x, y, layer) for x, y in run]))
        rest = points - taken
        for run in _axis_runs(rest, along_x=not horizontal):
            raw.append((net_id, layer, [(x, y, layer) for x, y in run]))

    raw.sort(key=lambda item: (item[0], min(item[2])))
    return [
        Segment(index=i, net_id=net_id, layer=layer, vertices=sorted(vertices))
        for i, (net_id, layer, vertices) in enumerate(raw)
    ]


def _axis_runs(points: set[tuple[int, int]], along_x: bool) -> list[list[tuple[int, int]]]:
    groups: dict[int, list[int]] = {}
    for x, y in points:
        key, pos = (y, x) if along_x else (x, y)
        groups.setdefault(key, []).append(pos)
    runs = []
    for key in sorted(groups):
        positions = sorted(groups[key])
        start = prev = positions[0]
        for p in positions[1:]:
            if p == prev + 1:
                prev = p
                continue
            runs.append(_run_points(key, start, prev, along_x))
            start = prev = p
        runs.append(_run_points(key, start, prev, along_x))
    return runs


def _run_points(key: int, start: int, end: int, along_x: bool) -> list[tuple[int, int]]:
    if along_x:
        return [(p, key) for p in range(start, end + 1)]
    return [(key, p) for p in range(start, end + 1)]


def _min_distance(a: Segment, b: Segment) -> int:
    return min(
        abs(ax - bx) + abs(ay - by)
        for ax, ay, _ in a.vertices
        for bx, by, _ in b.vertices
    )


def _adjacent(a: Segment, b: Segment) -> bool:
    return _min_distance(a, b) == 1
