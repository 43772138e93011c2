"""Multi-pin net routing with in-search mask assignment.

The search keeps a 3-bit color state on every node: the set of masks the
wire piece could still take at equal cost. Relaxing an edge evaluates all
three masks (conflict cost, plus one stitch charge when the mask is not in
the current node's state and the move stays on-layer), takes the cheapest,
and stores the set of masks achieving it. A net's pins are connected one
at a time: after each backtrace the traced vertices are re-inserted at
cost 0, so the next search grows from the whole partial tree.

During backtrace, runs of vertices whose states stay compatible are
grouped: a verSet is a run with one identical state, a segSet is a chain
of verSets whose accumulated state intersection stays non-empty and which
therefore ends up on a single mask. A stitch exists exactly where a segSet
had to be closed. Each vertex keeps a Pareto set of (cost, state) labels:
a costlier label survives if its state is not a subset of a cheaper
label's, which is what lets a later stretch reuse a mask that a cheaper
arrival had priced out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappop, heappush
from itertools import count

from .color_state import COLOR_ORDER, Color, colors_in, pick_final
from .grid import Direction, Grid, VIA_DIRECTIONS
from .layout import Net, Vertex


class SearchExhaustedError(RuntimeError):
    """The solution queue emptied before reaching an unconnected pin."""


class UnroutableError(RuntimeError):
    """A net could not be completed.

    blocked_nets names the committed nets walling off the search frontier,
    so a caller can rip them up and retry.
    """

    def __init__(
        self,
        net_id: int,
        remaining_pins: list[int],
        message: str,
        blocked_nets: set[int] | None = None,
        blocked_vertices: set[Vertex] | None = None,
    ):
        super().__init__(message)
        self.net_id = net_id
        self.remaining_pins = remaining_pins
        self.blocked_nets = blocked_nets or set()
        self.blocked_vertices = blocked_vertices or set()


@dataclass(slots=True)
class SearchNode:
    """One (vertex, cost, color state) label with its predecessor link."""

    vertex: Vertex
    cost: float
    state: int
    prev: "SearchNode | None" = None
    arrival_dir: Direction | None = None
    expanded: bool = False
    pruned: bool = False


@dataclass
class VerSet:
    """Consecutively traced adjacent vertices sharing one color state."""

    state: int
    members: list[Vertex]
    seg_set: "SegSet"


@dataclass
class SegSet:
    """A chain of verSets forced onto a single final mask."""

    state: int
    ver_sets: list[VerSet]
    index: int
    final_color: Color | None = None


@dataclass
class RouteTree:
    """The committed route of one net: paths, final colors, stitches."""

    net_id: int
    paths: list[list[Vertex]]
    vertex_colors: dict[Vertex, Color]
    stitches: list[tuple[Vertex, Vertex]]
    # Color state each vertex carried when traced (search soundness checks).
    vertex_states: dict[Vertex, int]
    total_cost: float

    def vertices(self) -> set[Vertex]:
        return set(self.vertex_colors)


class SolutionQueue:
    """Priority queue of SearchNodes with per-vertex Pareto label sets.

    A label is kept only while no other label at the same vertex is both
    cheaper-or-equal and has a superset state; on exact (cost, state) ties
    the incumbent wins. Pop order is (cost, row-major vertex id, arrival
    direction, insertion order), so runs are reproducible.
    """

    def __init__(self, grid: Grid, net: Net, on_pop=None):
        self._grid = grid
        self._heap: list = []
        self._seq = count()
        self.labels: dict[Vertex, list[SearchNode]] = {}
        self.on_pop = on_pop
        self.pin_cover: dict[Vertex, frozenset[int]] = {}
        cover: dict[Vertex, set[int]] = {}
        for idx, pin in enumerate(net.pins):
            for v in pin.covered_vertices:
                cover.setdefault(v, set()).add(idx)
        self.pin_cover = {v: frozenset(s) for v, s in cover.items()}
        self.connected: set[int] = {0}

    def insert(self, node: SearchNode) -> bool:
        bucket = self.labels.setdefault(node.vertex, [])
        for ex in bucket:
            if ex.cost <= node.cost and (ex.state & node.state) == node.state:
                return False  # dominated; ties keep the incumbent
        kept = []
        for ex in bucket:
            if node.cost <= ex.cost and (node.state & ex.state) == ex.state:
                ex.pruned = True
            else:
                kept.append(ex)
        kept.append(node)
        self.labels[node.vertex] = kept
        dir_key = -1 if node.arrival_dir is None else int(node.arrival_dir)
        heappush(
            self._heap,
            (node.cost, self._grid.vid(node.vertex), dir_key, next(self._seq), node),
        )
        return True

    def pop(self) -> SearchNode | None:
        while self._heap:
            node = heappop(self._heap)[-1]
            if node.pruned or node.expanded:
                continue
            node.expanded = True
            if self.on_pop is not None:
                self.on_pop(node)
            return node
        return None


class _TreeBuilder:
    """Accumulates verSets/segSets and paths across a net's backtraces."""

    def __init__(self) -> None:
        self.versets: dict[Vertex, VerSet] = {}
        self.segsets: list[SegSet] = []
        self.vertex_states: dict[Vertex, int] = {}
        self.paths: list[list[Vertex]] = []
        self.path_costs: list[float] = []

    def new_verset(self, vertex: Vertex, state: int, seg: SegSet | None = None) -> VerSet:
        if seg is None:
            seg = SegSet(state=state, ver_sets=[], index=len(self.segsets))
            self.segsets.append(seg)
        vs = VerSet(state=state, members=[vertex], seg_set=seg)
        seg.ver_sets.append(vs)
        self.versets[vertex] = vs
        self.vertex_states.setdefault(vertex, state)
        return vs

    def join_verset(self, vs: VerSet, vertex: Vertex, state: int) -> None:
        vs.members.append(vertex)
        self.versets[vertex] = vs
        self.vertex_states.setdefault(vertex, state)

    def merge_segsets(self, into: SegSet, other: SegSet, shared: int) -> None:
        into.state = shared
        for vs in other.ver_sets:
            vs.seg_set = into
            into.ver_sets.append(vs)
        other.ver_sets.clear()

    def freeze_open_segsets(self, grid: Grid, net_id: int) -> None:
        """Collapse every still-open segSet to its final mask (2-pin mode)."""
        for seg in self.segsets:
            if seg.ver_sets and seg.final_color is None:
                seg.final_color = _cheapest_color(seg, grid, net_id)
                seg.state = int(seg.final_color)


def _cheapest_color(seg: SegSet, grid: Grid, net_id: int) -> Color:
    members = [v for vs in seg.ver_sets for v in vs.members]
    costs = {
        c: sum(grid.vertex_color_cost(v, c, net_id) for v in members)
        for c in colors_in(seg.state)
    }
    return pick_final(seg.state, costs)


def color_state_search(queue: SolutionQueue, grid: Grid, net: Net) -> SearchNode:
    """Pop minimum-cost nodes until one covers a not-yet-connected pin.

    Every popped node relaxes its six neighbors: for each mask, the
    conflict cost of the target plus one stitch charge when the move is
    planar and the mask is outside the node's state; the neighbor label
    gets the minimum and the set of masks achieving it.
    """
    rules = grid.rules
    stitch_term = rules.beta * rules.stitch_cost
    while True:
        node = queue.pop()
        if node is None:
            raise SearchExhaustedError("solution queue exhausted")
        pins_here = queue.pin_cover.get(node.vertex)
        if pins_here and not pins_here <= queue.connected:
            return node
        for direction, target in grid.neighbors(node.vertex):
            if not grid.passable(target, net.id):
                continue
            trad = grid.trad_cost(node.vertex, direction, guide=net.guide)
            planar = direction not in VIA_DIRECTIONS
            best = math.inf
            state = 0
            for color in COLOR_ORDER:
                term = grid.color_cost(node.vertex, direction, color, net_id=net.id)
                if planar and not (node.state & color):
                    term += stitch_term
                if term < best:
                    best = term
                    state = int(color)
                elif term == best:
                    state |= int(color)
            queue.insert(
                SearchNode(target, node.cost + rules.alpha * trad + best, state, node, direction)
            )


def backtrace(
    queue: SolutionQueue,
    dst: SearchNode,
    tree: _TreeBuilder,
    grid: Grid,
    net_id: int,
    freeze: bool = False,
) -> list[Vertex]:
    """Walk prev links from dst to the tree, grouping vertices into verSets.

    A predecessor joins the growing segSet while the segSet's accumulated
    state still shares a mask with it (the share becomes the new state);
    otherwise the segSet closes and a fresh one starts, which is where a
    stitch will fall. Hitting a vertex that already belongs to the tree
    merges the two segSets when their states share a mask. All traced
    nodes are re-inserted at cost 0 so the next search starts from the
    whole tree.
    """
    # Sources (pin seeds and re-seeded tree labels) are exactly the
    # prev-less labels; a cost == 0 test would misfire when alpha is 0.
    chain = [dst]
    node = dst
    while node.prev is not None and node.prev.prev is not None:
        node = node.prev
        chain.append(node)
    terminal = node.prev

    cur_vs = tree.versets.get(dst.vertex)
    if cur_vs is None:
        cur_vs = tree.new_verset(dst.vertex, dst.state)
    walk = chain[1:] + ([terminal] if terminal is not None else [])
    for prev_node in walk:
        cur_seg = cur_vs.seg_set
        existing = tree.versets.get(prev_node.vertex)
        if existing is not None:
            other_seg = existing.seg_set
            if other_seg is not cur_seg:
                shared = cur_seg.state & other_seg.state
                if shared:
                    tree.merge_segsets(cur_seg, other_seg, shared)
                # no shared mask: segSet boundary, the junction is a stitch
            cur_vs = existing
        else:
            shared = cur_seg.state & prev_node.state
            if shared:
                cur_seg.state = shared
                if prev_node.state == cur_vs.state:
                    tree.join_verset(cur_vs, prev_node.vertex, prev_node.state)
                else:
                    cur_vs = tree.new_verset(prev_node.vertex, prev_node.state, cur_seg)
            else:
                cur_vs = tree.new_verset(prev_node.vertex, prev_node.state)

    if freeze:
        tree.freeze_open_segsets(grid, net_id)

    for n in chain + ([terminal] if terminal is not None else []):
        seed_state = tree.versets[n.vertex].seg_set.state if freeze else n.state
        queue.insert(SearchNode(n.vertex, 0.0, seed_state, None, None))

    path = [terminal.vertex] if terminal is not None else []
    path.extend(n.vertex for n in reversed(chain))
    return path


def route_net(net: Net, grid: Grid, *, two_pin_mode: bool = False, on_pop=None) -> RouteTree:
    """Connect all pins of a net and finalize per-segSet mask colors.

    Does not mutate the grid; committing the returned tree is the
    caller's job. two_pin_mode freezes each connection's colors before
    the next pin is attached, mimicking a chain of independent 2-pin
    routes (comparison arm; the default keeps states open until the whole
    tree is traced).
    """
    if not net.pins:
        raise ValueError(f"net {net.id} has no pins")
    if len(net.pins) == 1:
        return RouteTree(net.id, [], {}, [], {}, 0.0)

    queue = SolutionQueue(grid, net, on_pop=on_pop)
    tree = _TreeBuilder()
    seeded = False
    for v in net.pins[0].covered_vertices:
        if grid.passable(v, net.id):
            for cost, state in _seed_labels(grid, v, net.id):
                queue.insert(SearchNode(v, cost, state, None, None))
            seeded = True
    if not seeded:
        blocked = {
            v: grid.committed[v][0]
            for v in net.pins[0].covered_vertices
            if v in grid.committed and grid.committed[v][0] != net.id
        }
        raise UnroutableError(
            net.id,
            list(range(len(net.pins))),
            f"net {net.id}: every start-pin vertex is blocked",
            blocked_nets=set(blocked.values()),
            blocked_vertices=set(blocked),
        )

    total_pins = len(net.pins)
    while len(queue.connected) < total_pins:
        try:
            dst = color_state_search(queue, grid, net)
        except SearchExhaustedError:
            remaining = sorted(set(range(total_pins)) - queue.connected)
            wall_nets, wall_vertices = _wall_blockers(queue, grid, net, remaining)
            raise UnroutableError(
                net.id,
                remaining,
                f"net {net.id}: pins {remaining} unreachable",
                blocked_nets=wall_nets,
                blocked_vertices=wall_vertices,
            ) from None
        path = backtrace(queue, dst, tree, grid, net.id, freeze=two_pin_mode)
        tree.paths.append(path)
        tree.path_costs.append(dst.cost)
        for v in path:
            pins_here = queue.pin_cover.get(v)
            if pins_here:
                queue.connected |= pins_here

    return finalize_colors(tree, grid, net.id)


def _seed_labels(grid: Grid, v: Vertex, net_id: int) -> list[tuple[float, int]]:
    """Source labels for a start-pin vertex, one per conflict-cost level.

    The wire occupies the start vertex too, so its per-color conflict
    cost is charged up front: colors with equal cost share one label
    (conflict-free pins reduce to the single label cost 0, state 111).
    """
    levels: dict[float, int] = {}
    for color in COLOR_ORDER:
        cost = grid.vertex_color_cost(v, color, net_id)
        levels[cost] = levels.get(cost, 0) | int(color)
    return [(cost, levels[cost]) for cost in sorted(levels)]


def _region_wall(grid: Grid, region, net_id: int) -> dict[Vertex, int]:
    """Foreign committed vertices bordering a region, with their owners."""
    wall: dict[Vertex, int] = {}
    for v in region:
        for _, t in grid.neighbors(v):
            owner = grid.committed.get(t)
            if owner is not None and owner[0] != net_id:
                wall[t] = owner[0]
    return wall


def _wall_blockers(
    queue: SolutionQueue, grid: Grid, net: Net, remaining: list[int]
) -> tuple[set[int], set[Vertex]]:
    """Nets and vertices walling the unreached pins off from the search.

    Flood-fills the pocket still reachable from the stranded pins; the
    separating wall is committed by nets adjacent to both that pocket and
    the exhausted search region (falling back to both sides together when
    the wall is layered from two nets).
    """
    pocket: set[Vertex] = set()
    stack = [
        v
        for idx in remaining
        for v in net.pins[idx].covered_vertices
        if grid.passable(v, net.id)
    ]
    pocket.update(stack)
    while stack:
        v = stack.pop()
        for _, t in grid.neighbors(v):
            if t not in pocket and grid.passable(t, net.id):
                pocket.add(t)
                stack.append(t)
    pocket_side = _region_wall(grid, pocket, net.id)
    search_side = _region_wall(grid, queue.labels, net.id)
    shared = pocket_side.keys() & search_side.keys()
    if shared:
        wall = {v: pocket_side[v] for v in shared}
    else:
        wall = pocket_side | search_side
    return set(wall.values()), set(wall)


def finalize_colors(tree: _TreeBuilder, grid: Grid, net_id: int) -> RouteTree:
    """Pick each segSet's final mask and derive per-vertex colors and stitches.

    Candidate costs are the summed conflict costs of the segSet's member
    vertices against the current grid; ties fall back to the fixed
    RED > GREEN > BLUE order.
    """
    vertex_colors: dict[Vertex, Color] = {}
    for seg in tree.segsets:
        if not seg.ver_sets:
            continue  # emptied by a merge
        if seg.final_color is None:
            seg.final_color = _cheapest_color(seg, grid, net_id)
        for vs in seg.ver_sets:
            for v in vs.members:
                vertex_colors[v] = seg.final_color
    stitches = recount_stitches(vertex_colors)
    return RouteTree(
        net_id=net_id,
        paths=tree.paths,
        vertex_colors=vertex_colors,
        stitches=stitches,
        vertex_states=dict(tree.vertex_states),
        total_cost=sum(tree.path_costs),
    )


def recount_stitches(vertex_colors: dict[Vertex, Color]) -> list[tuple[Vertex, Vertex]]:
    """Same-layer grid-adjacent vertex pairs of one net with different colors."""
    stitches = []
    for v in sorted(vertex_colors):
        x, y, l = v
        for nb in ((x + 1, y, l), (x, y + 1, l)):
            other = vertex_colors.get(nb)
            if other is not None and other != vertex_colors[v]:
                stitches.append((v, nb))
    return stitches
