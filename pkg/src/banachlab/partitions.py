"""Special partitions of initial segments of the naturals.

A special partition is a finite list of nonempty finite blocks that are
pairwise order-separated (every element of an earlier block is below
every element of a later block).  On top of them: coarsening enumeration,
diagonal towers through almost-coarsening chains, and exhaustive finite
monochromatic searches in the style of Hindman's theorem and Milliken's
strengthening of Ramsey's theorem.  The infinitary theorems give no
finite thresholds, so every search here is an exact finite search that
either returns a re-verified witness or reports that none exists in
range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

from .errors import BudgetExceeded, Exhausted, PreconditionViolated

Block = tuple[int, ...]


@dataclass(frozen=True)
class SpecialPartition:
    """Ordered list of order-separated nonempty finite blocks of naturals."""

    blocks: tuple[Block, ...]
    ground_bound: int = field(default=0)

    def __post_init__(self):
        blocks = tuple(tuple(sorted(set(b))) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for b in blocks:
            if not b:
                raise ValueError("blocks must be nonempty")
            if b[0] < 0:
                raise ValueError("blocks must contain naturals")
        for a, b in zip(blocks, blocks[1:]):
            if not a[-1] < b[0]:
                raise ValueError(f"blocks {a} and {b} are not order-separated")
        top = blocks[-1][-1] + 1 if blocks else 0
        object.__setattr__(self, "ground_bound", max(self.ground_bound, top))

    @staticmethod
    def singletons(upto: int) -> "SpecialPartition":
        """The partition of [0, upto) into singletons."""
        return SpecialPartition(tuple((i,) for i in range(upto)))

    @staticmethod
    def of(blocks: Iterable[Iterable[int]]) -> "SpecialPartition":
        return SpecialPartition(tuple(tuple(b) for b in blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    def block(self, n: int) -> Block:
        """The n-th block in the ordering by minima (= list order)."""
        return self.blocks[n]

    def ground(self) -> frozenset[int]:
        return frozenset(x for b in self.blocks for x in b)

    def drop_first(self, n: int) -> "SpecialPartition":
        if n > len(self.blocks):
            raise ValueError("cannot drop more blocks than present")
        return SpecialPartition(self.blocks[n:], self.ground_bound) if self.blocks[n:] else SpecialPartition((),)

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    @staticmethod
    def from_json(obj: Sequence[Sequence[int]]) -> "SpecialPartition":
        return SpecialPartition.of(obj)


@dataclass(frozen=True)
class Coloring:
    """Total deterministic coloring of tuples of order-separated finite sets."""

    arity: int
    palette: int
    eval: Callable[..., int]

    def color(self, *blocks: Block) -> int:
        if len(blocks) != self.arity:
            raise ValueError(f"coloring has arity {self.arity}, got {len(blocks)} blocks")
        c = self.eval(*blocks)
        if not isinstance(c, int) or not 0 <= c < self.palette:
            raise ValueError(f"color {c!r} outside palette of size {self.palette}")
        return c


def _is_union_of_blocks(target: Block, partition: SpecialPartition) -> bool:
    covered: set[int] = set()
    tset = set(target)
    for b in partition.blocks:
        bs = set(b)
        if bs & tset:
            if not bs <= tset:
                return False
            covered |= bs
    return covered == tset


def is_coarser(q: SpecialPartition, p: SpecialPartition) -> bool:
    """True iff every block of q is a union of blocks of p.

    The ground set of q may shrink relative to p's: blocks of p may be
    omitted entirely.
    """
    return all(_is_union_of_blocks(b, p) for b in q.blocks)


def is_almost_coarser(q: SpecialPartition, p: SpecialPartition, drop: int) -> bool:
    """Coarser after removing the first `drop` blocks of q."""
    if drop > len(q.blocks):
        raise PreconditionViolated(f"drop {drop} exceeds block count {len(q.blocks)}")
    return all(_is_union_of_blocks(b, p) for b in q.blocks[drop:])


def _canonical_key(q: SpecialPartition):
    return (tuple(b[0] for b in q.blocks), q.blocks)


def coarsenings(p: SpecialPartition, n: int, contiguous_only: bool = False) -> list[SpecialPartition]:
    """All coarsenings of p with exactly n blocks, in canonical order.

    A coarsening selects a subset of p's blocks and merges consecutive
    runs of the selection; order-separation is preserved automatically.
    With contiguous_only=True a merged block may only use consecutive
    blocks of p (no holes inside a block), which is the stricter reading
    of "union of blocks"; the default follows the literal definition.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    m = len(p.blocks)
    out: list[SpecialPartition] = []
    if n > m:
        return out
    for size in range(n, m + 1):
        for selected in combinations(range(m), size):
            for cuts in combinations(range(1, size), n - 1):
                bounds = (0, *cuts, size)
                groups = [selected[bounds[i]:bounds[i + 1]] for i in range(n)]
                if contiguous_only and any(g[-1] - g[0] + 1 != len(g) for g in groups):
                    continue
                blocks = tuple(tuple(sorted(x for gi in g for x in p.blocks[gi])) for g in groups)
                out.append(SpecialPartition(blocks))
    out.sort(key=_canonical_key)
    return out


def diagonal_tower(chain: Sequence[SpecialPartition], drops: Sequence[int]
                   ) -> tuple[SpecialPartition, list[int]]:
    """Diagonal through a finite almost-coarsening-decreasing chain.

    Returns (P, d) where P has one block per chain member, the i-th block
    drawn from chain[i] above all earlier choices, and d[i] <= i is a
    verified drop count with is_almost_coarser(P, chain[i], d[i]).
    """
    if not chain:
        raise PreconditionViolated("chain must be nonempty")
    if len(drops) != len(chain):
        raise PreconditionViolated("drops must align with chain")
    for i in range(len(chain) - 1):
        if not is_almost_coarser(chain[i + 1], chain[i], drops[i + 1]):
            raise PreconditionViolated(
                f"chain[{i + 1}] is not an almost-coarsening of chain[{i}] with drop {drops[i + 1]}")
    frontier = -1
    picked: list[Block] = []
    for j, pj in enumerate(chain):
        choice = None
        for b in pj.blocks:
            if b[0] <= frontier:
                continue
            if all(_is_union_of_blocks(b, chain[i]) for i in range(j)):
                choice = b
                break
        if choice is None:
            raise Exhausted(f"chain[{j}] has no usable block above frontier {frontier}")
        picked.append(choice)
        frontier = choice[-1]
    p = SpecialPartition(tuple(picked))
    dlist = []
    for i, pi in enumerate(chain):
        for d in range(len(p.blocks) + 1):
            if is_almost_coarser(p, pi, d):
                dlist.append(d)
                break
        else:  # pragma: no cover - construction guarantees a valid d
            raise AssertionError("diagonal postcondition failed")
    return p, dlist


class _Budget:
    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.used = 0

    def spend(self, amount: int = 1):
        self.used += amount
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"node budget {self.limit} exhausted")


def verify_constant_on_coarsenings(p: SpecialPartition, coloring: Coloring,
                                   n: int, expected: int) -> bool:
    """Exhaustive re-verification that `coloring` is constant on the
    n-block coarsenings of p.

    Deliberately shares no code with the search-side enumeration: walks
    the blocks left to right deciding skip / extend the last open group /
    open a new group (later groups automatically sit above earlier ones).
    """
    m = len(p.blocks)

    def walk(idx: int, groups: list[list[int]]) -> bool:
        if idx == m:
            if len(groups) == n:
                merged = tuple(tuple(sorted(x for gi in g for x in p.blocks[gi]))
                               for g in groups)
                return coloring.color(*merged) == expected
            return True
        if not walk(idx + 1, groups):  # skip block idx
            return False
        if groups:  # extend the last group (holes inside a group are fine)
            groups[-1].append(idx)
            ok = walk(idx + 1, groups)
            groups[-1].pop()
            if not ok:
                return False
        if len(groups) < n:
            groups.append([idx])
            ok = walk(idx + 1, groups)
            groups.pop()
            if not ok:
                return False
        return True

    return walk(0, [])


def milliken_search(q: SpecialPartition, coloring: Coloring, k: int,
                    budget: Optional[int] = None
                    ) -> Optional[tuple[SpecialPartition, int]]:
    """First k-block coarsening of q on which the coloring is constant.

    Exhausts all coarsenings of q with exactly k blocks in canonical
    order; for each, checks constancy of the coloring on all arity-sized
    coarsenings.  No finite witness is guaranteed to exist.
    """
    n = coloring.arity
    if n < 1 or k < n:
        raise PreconditionViolated("need arity >= 1 and k >= arity")
    tracker = _Budget(budget)
    for p in coarsenings(q, k):
        tracker.spend()
        sub = coarsenings(p, n)
        colors = set()
        ok = True
        for t in sub:
            tracker.spend()
            colors.add(coloring.color(*t.blocks))
            if len(colors) > 1:
                ok = False
                break
        if ok and colors:
            color = colors.pop()
            if not verify_constant_on_coarsenings(p, coloring, n, color):
                raise AssertionError("witness failed independent re-verification")
            return p, color
    return None


def _verify_hindman(subfamily: Sequence[frozenset[int]],
                    coloring: Callable[[frozenset[int]], int],
                    expected: int) -> bool:
    # independent path: gray-code order over union masks
    h = len(subfamily)
    current: set[int] = set()
    mask = 0
    for g in range(1, 1 << h):
        gray = g ^ (g >> 1)
        flipped = (mask ^ gray).bit_length() - 1
        if gray & (1 << flipped):
            current |= subfamily[flipped]
        else:
            current = set()
            for j in range(h):
                if gray & (1 << j):
                    current |= subfamily[j]
        mask = gray
        if coloring(frozenset(current)) != expected:
            return False
    return True


def hindman_search(family: Sequence[Iterable[int]],
                   coloring: Callable[[frozenset[int]], int],
                   h: int) -> Optional[tuple[list[frozenset[int]], int]]:
    """First size-h subfamily all of whose nonempty unions get one color.

    The family must be pairwise disjoint; subfamilies are scanned in
    combination order and every witness is re-verified exhaustively.
    """
    sets = [frozenset(s) for s in family]
    for a, b in combinations(sets, 2):
        if a & b:
            raise PreconditionViolated("family must be pairwise disjoint")
    if h > len(sets):
        raise PreconditionViolated("h exceeds family size")
    for combo in combinations(range(len(sets)), h):
        chosen = [sets[i] for i in combo]
        colors = set()
        ok = True
        for r in range(1, 1 << h):
            u = frozenset().union(*(chosen[j] for j in range(h) if r & (1 << j)))
            colors.add(coloring(u))
            if len(colors) > 1:
                ok = False
                break
        if ok:
            color = colors.pop()
            if not _verify_hindman(chosen, coloring, color):
                raise AssertionError("witness failed independent re-verification")
            return chosen, color
    return None


def stabilize_function(N: int, n: int, g: Callable[..., Fraction], k: int,
                       delta: Fraction, mode: str = "exhaustive",
                       budget: Optional[int] = None
                       ) -> Optional[tuple[list[int], tuple[Fraction, Fraction]]]:
    """Find k indices in [0, N) on which g oscillates at most delta.

    g is evaluated on strictly increasing n-tuples drawn from the chosen
    index set.  In "exhaustive" mode the search is a pruned DFS over
    subsets in lexicographic order (exact: returns a witness whenever one
    exists).  In "greedy" mode only the N - k + 1 contiguous windows are
    scanned, which is cheap but incomplete.
    """
    if not (k >= n >= 1 and N >= k):
        raise PreconditionViolated("need k >= n >= 1 and N >= k")
    delta = Fraction(delta)
    cache: dict[tuple[int, ...], Fraction] = {}

    def geval(t: tuple[int, ...]) -> Fraction:
        if t not in cache:
            cache[t] = Fraction(g(*t))
        return cache[t]

    def window_range(indices: Sequence[int]) -> tuple[Fraction, Fraction]:
        vals = [geval(t) for t in combinations(indices, n)]
        return min(vals), max(vals)

    if mode == "greedy":
        for start in range(N - k + 1):
            s = list(range(start, start + k))
            lo, hi = window_range(s)
            if hi - lo <= delta:
                return s, (lo, hi)
        return None
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")

    tracker = _Budget(budget)

    def dfs(chosen: list[int], lo: Optional[Fraction], hi: Optional[Fraction],
            nxt: int) -> Optional[tuple[list[int], tuple[Fraction, Fraction]]]:
        tracker.spend()
        if len(chosen) == k:
            return list(chosen), (lo, hi)
        for cand in range(nxt, N - (k - len(chosen)) + 1):
            new_lo, new_hi = lo, hi
            ok = True
            if len(chosen) >= n - 1:
                for prefix in combinations(chosen, n - 1):
                    v = geval(prefix + (cand,))
                    new_lo = v if new_lo is None else min(new_lo, v)
                    new_hi = v if new_hi is None else max(new_hi, v)
                    if new_hi - new_lo > delta:
                        ok = False
                        break
            if not ok:
                continue
            chosen.append(cand)
            found = dfs(chosen, new_lo, new_hi, cand + 1)
            chosen.pop()
            if found:
                return found
        return None

    return dfs([], None, None, 0)


def plain_ramsey_search(N: int, n: int, coloring: Callable[..., int], k: int
                        ) -> Optional[tuple[list[int], int]]:
    """Exhaustive finite Ramsey search: first k-subset of [0, N) whose
    n-subsets are monochromatic under the coloring."""
    for s in combinations(range(N), k):
        colors = {coloring(*t) for t in combinations(s, n)}
        if len(colors) == 1:
            return list(s), colors.pop()
    return None


_EXPR_FUNCS = {
    "min": min,
    "max": max,
    "size": len,
    "sum": sum,
    "mod": lambda a, b: a % b,
}


def make_expression_coloring(expr: str, arity: int, palette: int) -> Coloring:
    """Coloring from a small expression over block tuples (CLI surface).

    Blocks are bound to names B0..B{arity-1}; allowed helpers are min,
    max, size, sum, mod, plus the union name U (all blocks merged).
    """
    code = compile(expr, "<coloring>", "eval")
    for name in code.co_names:
        if name not in _EXPR_FUNCS and not (name.startswith("B") and name[1:].isdigit()) and name != "U":
            raise ValueError(f"name {name!r} not allowed in coloring expressions")

    def evaluate(*blocks: Block) -> int:
        env = {f"B{i}": blocks[i] for i in range(len(blocks))}
        env["U"] = tuple(sorted(x for b in blocks for x in b))
        env.update(_EXPR_FUNCS)
        return int(eval(code, {"__builtins__": {}}, env))

    return Coloring(arity=arity, palette=palette, eval=evaluate)
