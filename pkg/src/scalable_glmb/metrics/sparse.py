"""Sparse OSPA2 evaluation for large, mostly separated track sets.

Two tracks can only be closer than the cutoff if, at some shared scan, their
states are closer than the cutoff. Candidate pairs are found with an R-tree
over (position, time) boxes of track chunks, and the assignment is solved on
the resulting sparse graph with one saturation arc per row.
"""

from collections.abc import Iterator, Sequence

from rtree import index
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import min_weight_full_bipartite_matching

from .config import MetricConfig
from .ospa import track_distance
from .tracks import Track

# Scans per indexed chunk of a track.
CHUNK_SCANS = 16

Pair = tuple[int, int, float]


def _chunks(
    track: Track, full_state: bool, inflate: float
) -> Iterator[tuple[float, ...]]:
    points = track.points(full_state)
    for lo in range(0, len(track), CHUNK_SCANS):
        block = points[lo : lo + CHUNK_SCANS]
        times = track.times[lo : lo + CHUNK_SCANS]
        low = (*(block.min(axis=0) - inflate).tolist(), float(times[0]))
        high = (*(block.max(axis=0) + inflate).tolist(), float(times[-1]))
        yield (*low, *high)


def assignable_pairs(
    xs: Sequence[Track], ys: Sequence[Track], c: float, full_state: bool = False
) -> list[Pair]:
    """All (i, j, distance) with track_distance(xs[i], ys[j]) < c.

    Every omitted pair is at distance exactly c, since no shared scan brings
    the two tracks within c of each other.
    """
    x_live = [i for i, x in enumerate(xs) if not x.is_empty]
    y_live = [j for j, y in enumerate(ys) if not y.is_empty]
    # Two empty tracks coincide.
    pairs: list[Pair] = [
        (i, j, 0.0)
        for i, x in enumerate(xs)
        if x.is_empty
        for j, y in enumerate(ys)
        if y.is_empty
    ]
    if not x_live or not y_live:
        return pairs

    properties = index.Property()
    properties.dimension = ys[y_live[0]].points(full_state).shape[1] + 1
    stream = (
        (j, box, None) for j in y_live for box in _chunks(ys[j], full_state, 0.0)
    )
    tree = index.Index(stream, properties=properties)

    for i in x_live:
        candidates: set[int] = set()
        for box in _chunks(xs[i], full_state, c):
            candidates.update(int(j) for j in tree.intersection(box))
        for j in sorted(candidates):
            d = track_distance(xs[i], ys[j], c, full_state)
            if d < c:
                pairs.append((i, j, d))
    return pairs


def sparse_assignment(
    pairs: Sequence[Pair], m: int, n: int, c: float, p: float
) -> float:
    """Minimum of sum d^p + c^p * (n - matched) over one-to-one matchings.

    This is the inner minimization of OSPA with every unlisted pair saturated
    at c. Each row gets a private saturation column of cost c^p, so a full
    matching of the rows on the sparse graph gives the optimum.

    Args:
        pairs: (row, column, distance) entries with distance in [0, c)
        m: Number of rows
        n: Number of columns, with m <= n
        c: Cutoff
        p: Order

    Returns:
        The total cost before averaging by n
    """
    if m > n:
        pairs = [(j, i, d) for i, j, d in pairs]
        m, n = n, m
    saturated = c**p
    if m == 0 or not pairs:
        return n * saturated

    # Weights are shifted by 1 because explicit zeros are not edges.
    rows = [i for i, _, _ in pairs] + list(range(m))
    cols = [j for _, j, _ in pairs] + [n + i for i in range(m)]
    weights = [d**p + 1.0 for _, _, d in pairs] + [saturated + 1.0] * m
    graph = csr_matrix((weights, (rows, cols)), shape=(m, n + m))
    _, matched_cols = min_weight_full_bipartite_matching(graph)

    cost_of = {(i, j): d**p for i, j, d in pairs}
    total = 0.0
    real = 0
    for i, j in enumerate(matched_cols):
        if j < n:
            total += cost_of[(i, int(j))]
            real += 1
    return total + saturated * (n - real)


def ospa2_sparse(
    xs: Sequence[Track], ys: Sequence[Track], cfg: MetricConfig
) -> float:
    """OSPA2 computed from assignable pairs and a sparse assignment."""
    m, n = len(xs), len(ys)
    if m == 0 and n == 0:
        return 0.0
    pairs = assignable_pairs(xs, ys, cfg.cutoff, cfg.full_state)
    cost = sparse_assignment(pairs, m, n, cfg.cutoff, cfg.order)
    return float((cost / max(m, n)) ** (1.0 / cfg.order))
