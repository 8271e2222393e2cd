"""Finite-depth enumeration of the cylinder structure behind a PRC set.

Every chain prefix p_1..p_k pins the constants extending it into the
cylinder interval [p_k^(1/C_k), (p_k+1)^(1/C_k)]; sibling cylinders are
disjoint, children nest strictly inside parents, and the gaps in between
are free of prime-representing constants.  The tree of cylinders over a
seed range, expanded to finite depth, is the computable witness of that
structure: branching everywhere (child counts >= 2) is the finite-depth
shadow of perfectness, and gap endpoints approximate sub-boundary
constants.

All structural checks are cross-powered integer comparisons on the
underlying cylinder values; decimal enclosures are attached for display
only, at a precision chosen so sibling enclosures separate.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .core import (
    DEFAULT_CONFIG,
    CertifiedDecimalInterval,
    Config,
    EnumerationCapError,
    ExponentSequence,
    ExponentSpecError,
    Window,
)
from .primality import primes_in_range
from .radix import certified_root_enclosure, point_root_enclosure


@dataclass(frozen=True)
class CylinderNode:
    """One cylinder: all constants whose chain starts with ``prefix``.

    The interval endpoints are exactly prefix[-1]^(1/C_depth) and
    (prefix[-1]+1)^(1/C_depth); ``interval`` is their outward decimal
    enclosure at the forest display precision.  ``child_count`` is the
    exact number of primes in this node's window, or None when the window
    was not enumerated (leaf windows above the cap); ``children`` is None
    for nodes at the expansion frontier.
    """

    prefix: tuple[int, ...]
    depth: int
    interval: CertifiedDecimalInterval
    child_count: int | None
    children: tuple["CylinderNode", ...] | None
    truncated: bool = False

    @property
    def value(self) -> int:
        return self.prefix[-1]


@dataclass(frozen=True)
class Forest:
    exps: ExponentSequence
    seed_lo: int
    seed_hi: int
    depth: int
    display_digits: int
    roots: tuple[CylinderNode, ...]
    truncated: bool

    def nodes_at_level(self, level: int) -> list[CylinderNode]:
        """Nodes at ``level`` generations below the seeds (0 = the seeds)."""
        nodes = list(self.roots)
        for _ in range(level):
            nodes = [c for n in nodes if n.children for c in n.children]
        return nodes


def explore_tree(
    exps: ExponentSequence,
    seed_range: tuple[int, int],
    depth: int,
    config: Config = DEFAULT_CONFIG,
) -> Forest:
    """Expand every prime seed in [lo, hi] to ``depth`` chain levels.

    Nodes above the frontier enumerate their windows exactly (child counts
    and materialized children); frontier nodes still get a child count
    whenever their window fits under the enumeration cap.  Oversized
    windows flag the node truncated instead of silently shrinking it.
    """
    lo, hi = seed_range
    if depth < 1:
        raise ValueError("depth must be positive")
    if depth > exps.max_depth:
        raise ValueError(f"depth {depth} beyond sequence max depth {exps.max_depth}")
    seeds = primes_in_range(lo, hi + 1, config)
    bare_roots = [_expand(exps, (p,), depth, config) for p in seeds]
    display = _display_digits(exps, bare_roots, config)
    roots = tuple(_attach(exps, node, display, config) for node in bare_roots)
    return Forest(
        exps=exps,
        seed_lo=lo,
        seed_hi=hi,
        depth=depth,
        display_digits=display,
        roots=roots,
        truncated=any(_any_truncated(r) for r in roots),
    )


def _expand(exps, prefix, depth, config) -> CylinderNode:
    level = len(prefix)
    placeholder = CertifiedDecimalInterval(0, 0, 0)
    child_count = None
    children = None
    truncated = False
    expandable = level < depth
    try:
        c_next = exps.term(level + 1)
    except ExponentSpecError:
        c_next = None  # sequence ends here; nothing to enumerate
    if c_next is not None:
        window = Window.from_parent(prefix[-1], c_next)
        if window.width > config.enumeration_cap:
            if expandable:
                truncated = True
                children = ()
        elif math.isqrt(window.hi_exclusive - 1) > config.max_sieve_base:
            if expandable:
                truncated = True
                children = ()
        else:
            primes = primes_in_range(window.lo, window.hi_exclusive, config)
            child_count = len(primes)
            if expandable:
                children = tuple(
                    _expand(exps, prefix + (q,), depth, config) for q in primes
                )
    elif expandable:
        truncated = True
        children = ()
    return CylinderNode(
        prefix=tuple(prefix),
        depth=level,
        interval=placeholder,
        child_count=child_count,
        children=children,
        truncated=truncated,
    )


def _any_truncated(node) -> bool:
    if node.truncated:
        return True
    return any(_any_truncated(c) for c in node.children or ())


def _log10(n: int) -> float:
    try:
        return math.log10(n)
    except OverflowError:
        return (len(str(n)) - 1) * 1.0


def _sibling_pairs(exps, roots):
    """Adjacent (left_hi_value, right_lo_value, order) triples per level."""
    groups = [list(roots)]
    while groups:
        group = groups.pop()
        if len(group) >= 2:
            C = _cumulative(exps, group[0].depth)
            for left, right in zip(group, group[1:]):
                a, b = left.value + 1, right.value
                if b > a:  # touching cylinders (seeds 2,3) cannot be separated
                    yield a, b, C
        for node in group:
            if node.children:
                groups.append(list(node.children))


def _cumulative(exps, k):
    return exps.partial_product(k)


def _display_digits(exps, roots, config) -> int:
    """Smallest precision separating all adjacent sibling enclosures.

    Estimated from the smallest relative gap, then verified exactly on the
    mantissas and bumped until every adjacent pair separates.
    """
    pairs = list(_sibling_pairs(exps, roots))
    if not pairs:
        return 6
    need = 4.0
    for a, b, C in pairs:
        gap_log = _log10(b - a) - _log10(C) - (1 - 1 / C) * _log10(a)
        need = max(need, -gap_log + 1)
    d = max(4, math.ceil(need))
    for _ in range(64):
        if all(
            point_root_enclosure(a, C, d, config).hi_mantissa
            < point_root_enclosure(b, C, d, config).lo_mantissa
            for a, b, C in pairs
        ):
            return d
        d += 2
    raise EnumerationCapError("could not separate sibling enclosures")


def _attach(exps, node, digits, config) -> CylinderNode:
    order = _cumulative(exps, node.depth)
    interval = certified_root_enclosure(node.value, order, digits, config)
    children = node.children
    if children is not None:
        children = tuple(_attach(exps, c, digits, config) for c in children)
    return replace(node, interval=interval, children=children)


def validate_forest(forest: Forest) -> list[str]:
    """Exact structural checks; returns human-readable violations (none = pass).

    Nestedness and disjointness are decided by integer comparisons on the
    cylinder values (cross-powering reduces both to window membership), and
    additionally on the displayed mantissas.
    """
    problems: list[str] = []
    for left, right in zip(forest.roots, forest.roots[1:]):
        if right.value < left.value + 1:
            problems.append(f"roots {left.value}, {right.value} overlap")
    for root in forest.roots:
        _validate_node(forest.exps, root, problems)
    return problems


def _validate_node(exps, node, problems):
    if not node.children:
        return
    c = exps.term(node.depth + 1)
    window = Window.from_parent(node.value, c)
    if node.child_count != len(node.children):
        problems.append(
            f"node {node.prefix}: child_count {node.child_count} != "
            f"{len(node.children)} children"
        )
    for child in node.children:
        if not (window.lo <= child.value <= window.hi_exclusive - 1):
            problems.append(
                f"child {child.value} of {node.prefix} outside window "
                f"[{window.lo}, {window.hi_exclusive})"
            )
        if not (
            node.interval.lo_mantissa <= child.interval.lo_mantissa
            and child.interval.hi_mantissa <= node.interval.hi_mantissa
        ):
            problems.append(
                f"child {child.value} enclosure not nested in {node.prefix}"
            )
    for a, b in zip(node.children, node.children[1:]):
        if b.value < a.value + 2:
            problems.append(
                f"siblings {a.value}, {b.value} under {node.prefix} not disjoint"
            )
        if b.interval.lo_mantissa <= a.interval.hi_mantissa:
            problems.append(
                f"sibling enclosures {a.value}, {b.value} under {node.prefix} "
                "not separated at display precision"
            )
    for child in node.children:
        _validate_node(exps, child, problems)


@dataclass(frozen=True)
class GapEndpoint:
    """Exact gap endpoint: the real ``value``^(1/C_{level+1})."""

    value: int
    level: int
    enclosure: CertifiedDecimalInterval


@dataclass(frozen=True)
class Gap:
    left: GapEndpoint
    right: GapEndpoint


def gap_intervals(
    forest: Forest,
    level: int,
    config: Config = DEFAULT_CONFIG,
    digits: int | None = None,
) -> list[Gap]:
    """Maximal open gaps between consecutive level-``level`` cylinders.

    Level counts generations below the seeds (0 = seed cylinders).  Within
    each parent the leading gap (from the parent's left edge to its first
    child) and the trailing gap (last child to the parent's right edge,
    which always exists because the window's composite top is excluded)
    are included; runs through empty or adjacent regions merge into one
    maximal gap.  Right endpoints of gaps approximate left sub-boundary
    constants from below, left endpoints right sub-boundary constants.

    Requires full expansion at the requested level: truncated ancestors
    would silently produce wrong gaps, so they are refused instead.
    """
    if level < 0 or level >= forest.depth:
        raise ValueError(f"level must be in [0, {forest.depth - 1}], got {level}")
    order = forest.exps.partial_product(level + 1)
    if digits is None:
        digits = forest.display_digits

    def endpoint(value: int) -> GapEndpoint:
        return GapEndpoint(
            value, level, point_root_enclosure(value, order, digits, config)
        )

    if level == 0:
        gaps = []
        for left, right in zip(forest.roots, forest.roots[1:]):
            if right.value > left.value + 1:
                gaps.append(Gap(endpoint(left.value + 1), endpoint(right.value)))
        return gaps

    parents = forest.nodes_at_level(level - 1)
    for node in forest.roots:
        _check_expanded(node, level - 1)
    gaps = []
    pending_left: int | None = None
    last_window_top: int | None = None
    for parent in parents:
        c = forest.exps.term(parent.depth + 1)
        window = Window.from_parent(parent.value, c)
        qs = [child.value for child in parent.children or ()]
        if not qs:
            if pending_left is None:
                pending_left = window.lo
            last_window_top = window.hi_exclusive + 1
            continue
        left = pending_left if pending_left is not None else window.lo
        gaps.append(Gap(endpoint(left), endpoint(qs[0])))
        for a, b in zip(qs, qs[1:]):
            gaps.append(Gap(endpoint(a + 1), endpoint(b)))
        pending_left = qs[-1] + 1
        last_window_top = window.hi_exclusive + 1
    if pending_left is not None and last_window_top is not None:
        gaps.append(Gap(endpoint(pending_left), endpoint(last_window_top)))
    return gaps


def _check_expanded(node, down_to_level):
    """Refuse gap listing when any ancestor of the target level is truncated."""
    if node.depth - 1 > down_to_level:
        return
    if node.truncated or node.children is None:
        raise EnumerationCapError(
            f"forest truncated at {node.prefix}; gap list would be wrong"
        )
    if node.depth - 1 < down_to_level:
        for child in node.children:
            _check_expanded(child, down_to_level)


@dataclass(frozen=True)
class LevelStats:
    level: int
    nodes: int
    counted: int
    min_children: int | None
    max_children: int | None
    mean_children: Fraction | None


@dataclass(frozen=True)
class BranchingStats:
    """Per-level child-count statistics plus the finite-depth warnings.

    ``isolation_candidates`` lists prefixes with fewer than two children —
    never an error, since finite truncation cannot contradict perfectness —
    and ``empty_windows`` lists prime-free windows, noteworthy because they
    become impossible for large parents.
    """

    levels: tuple[LevelStats, ...]
    total_leaves: int
    isolation_candidates: tuple[tuple[int, ...], ...]
    empty_windows: tuple[tuple[int, ...], ...]


def branching_stats(forest: Forest) -> BranchingStats:
    levels = []
    isolation = []
    empty = []
    for level in range(forest.depth):
        nodes = forest.nodes_at_level(level)
        counts = [n.child_count for n in nodes if n.child_count is not None]
        for n in nodes:
            if n.child_count is not None and n.child_count < 2:
                isolation.append(n.prefix)
            if n.child_count == 0:
                empty.append(n.prefix)
        levels.append(
            LevelStats(
                level=level,
                nodes=len(nodes),
                counted=len(counts),
                min_children=min(counts) if counts else None,
                max_children=max(counts) if counts else None,
                mean_children=Fraction(sum(counts), len(counts)) if counts else None,
            )
        )
    return BranchingStats(
        levels=tuple(levels),
        total_leaves=len(forest.nodes_at_level(forest.depth - 1)),
        isolation_candidates=tuple(isolation),
        empty_windows=tuple(empty),
    )


# ---------------------------------------------------------------------------
# export

def node_to_json(node: CylinderNode) -> dict:
    return {
        "prefix": [str(p) for p in node.prefix],
        "depth": str(node.depth),
        "interval": node.interval.as_json(),
        "child_count": None if node.child_count is None else str(node.child_count),
        "truncated": node.truncated,
        "children": None
        if node.children is None
        else [node_to_json(c) for c in node.children],
    }


def forest_to_json(forest: Forest) -> dict:
    return {
        "exps": forest.exps.render(),
        "seed_lo": str(forest.seed_lo),
        "seed_hi": str(forest.seed_hi),
        "depth": str(forest.depth),
        "display_digits": str(forest.display_digits),
        "truncated": forest.truncated,
        "roots": [node_to_json(r) for r in forest.roots],
    }


def forest_to_csv(forest: Forest) -> str:
    """Flat CSV: one row per node."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["prefix", "depth", "lo_mantissa", "hi_mantissa", "digits", "child_count", "truncated"]
    )

    def walk(node):
        writer.writerow(
            [
                " ".join(str(p) for p in node.prefix),
                node.depth,
                node.interval.lo_mantissa,
                node.interval.hi_mantissa,
                node.interval.digits_after_point,
                "" if node.child_count is None else node.child_count,
                "1" if node.truncated else "0",
            ]
        )
        for child in node.children or ():
            walk(child)

    for root in forest.roots:
        walk(root)
    return out.getvalue()
