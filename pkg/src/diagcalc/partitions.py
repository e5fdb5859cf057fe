"""Set partitions, their types, and intersection matrices of partition pairs.

Unordered partitions of {1..n} are enumerated in restricted-growth-string
order; ordered ones by permuting the blocks of each unordered partition.
The type of a partition records how many blocks of each size it has, and the
count of partitions sharing a type is the Faa di Bruno coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Iterator

from .errors import BoundError, ParseError

MAX_UNORDERED_N = 12
MAX_ORDERED_N = 9


def _validate_blocks(n: int, blocks) -> None:
    seen: set[int] = set()
    for block in blocks:
        if not block:
            raise ValueError("blocks must be nonempty")
        if seen & set(block):
            raise ValueError("blocks must be pairwise disjoint")
        seen |= set(block)
    if seen != set(range(1, n + 1)):
        raise ValueError(f"blocks must cover exactly {{1..{n}}}")


@dataclass(frozen=True)
class SetPartition:
    """Unordered partition of {1..n} into disjoint nonempty blocks."""

    n: int
    blocks: frozenset[frozenset[int]]

    def __post_init__(self):
        _validate_blocks(self.n, self.blocks)

    def sorted_blocks(self) -> tuple[frozenset[int], ...]:
        return tuple(sorted(self.blocks, key=min))

    def __str__(self) -> str:
        return format_partition(self)


@dataclass(frozen=True)
class OrderedSetPartition:
    """Partition of {1..n} whose blocks carry a total order."""

    n: int
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        _validate_blocks(self.n, self.blocks)

    def forget(self) -> SetPartition:
        return SetPartition(self.n, frozenset(self.blocks))

    def __str__(self) -> str:
        return format_partition(self)


def make_partition(n: int, blocks) -> SetPartition:
    return SetPartition(n, frozenset(frozenset(b) for b in blocks))


def make_ordered_partition(n: int, blocks) -> OrderedSetPartition:
    return OrderedSetPartition(n, tuple(frozenset(b) for b in blocks))


def _restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    # lexicographic; a[i] <= max(a[:i]) + 1 with a[0] = 0
    if n == 0:
        yield ()
        return
    a = [0] * n
    b = [1] * n  # b[i] = max(a[:i]) + 1
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        bound = max(b[i], a[i] + 1)
        for j in range(i + 1, n):
            a[j] = 0
            b[j] = bound


def _blocks_from_rgs(rgs: tuple[int, ...]) -> tuple[frozenset[int], ...]:
    count = max(rgs) + 1 if rgs else 0
    blocks: list[set[int]] = [set() for _ in range(count)]
    for idx, label in enumerate(rgs, start=1):
        blocks[label].add(idx)
    return tuple(frozenset(b) for b in blocks)


def enumerate_partitions(n: int) -> Iterator[SetPartition]:
    """All unordered partitions of {1..n}, each exactly once, in RGS order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_UNORDERED_N:
        raise BoundError(f"unordered partition enumeration is bounded at n = {MAX_UNORDERED_N}")
    for rgs in _restricted_growth_strings(n):
        yield SetPartition(n, frozenset(_blocks_from_rgs(rgs)))


def enumerate_ordered_partitions(n: int) -> Iterator[OrderedSetPartition]:
    """All ordered partitions of {1..n}: block permutations of each unordered
    one, permutations in lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_ORDERED_N:
        raise BoundError(f"ordered partition enumeration is bounded at n = {MAX_ORDERED_N}")
    for rgs in _restricted_growth_strings(n):
        base = _blocks_from_rgs(rgs)
        for perm in permutations(range(len(base))):
            yield OrderedSetPartition(n, tuple(base[i] for i in perm))


def orderings(q: SetPartition) -> Iterator[OrderedSetPartition]:
    """The |blocks|! ordered partitions with the same underlying blocks."""
    base = q.sorted_blocks()
    for perm in permutations(range(len(base))):
        yield OrderedSetPartition(q.n, tuple(base[i] for i in perm))


@dataclass(frozen=True)
class PartitionType:
    """Block-size multiplicities (alpha_1, alpha_2, ...), trailing zeros trimmed."""

    counts: tuple[int, ...]

    def __init__(self, counts):
        counts = tuple(int(c) for c in counts)
        if any(c < 0 for c in counts):
            raise ValueError("multiplicities must be nonnegative")
        while counts and counts[-1] == 0:
            counts = counts[:-1]
        object.__setattr__(self, "counts", counts)

    @property
    def weight(self) -> int:
        """Size of the underlying ground set: sum of j * alpha_j."""
        return sum(j * c for j, c in enumerate(self.counts, start=1))

    @property
    def size(self) -> int:
        """Number of blocks: sum of alpha_j."""
        return sum(self.counts)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.counts) + ")"


def type_of(p: SetPartition | OrderedSetPartition) -> PartitionType:
    """alpha_j = number of blocks of size j."""
    sizes = [len(b) for b in p.blocks]
    counts = [0] * (max(sizes) if sizes else 0)
    for s in sizes:
        counts[s - 1] += 1
    return PartitionType(counts)


def faa_di_bruno(alpha) -> int:
    """Number of unordered partitions of type alpha:
    ||alpha||! / ((1!)^a1 (2!)^a2 ... a1! a2! ...)."""
    alpha = alpha if isinstance(alpha, PartitionType) else PartitionType(alpha)
    num = factorial(alpha.weight)
    den = 1
    for j, c in enumerate(alpha.counts, start=1):
        den *= factorial(j) ** c * factorial(c)
    return num // den


def partition_types(n: int) -> Iterator[PartitionType]:
    """All types alpha with ||alpha|| = n, in deterministic order."""

    def rec(remaining: int, part: int, counts: list[int]) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield tuple(counts)
            return
        if part > remaining:
            return
        for mult in range(remaining // part + 1):
            counts.append(mult)
            yield from rec(remaining - mult * part, part + 1, counts)
            counts.pop()

    for raw in rec(n, 1, []):
        yield PartitionType(raw)


def complete_bell(n: int) -> dict[PartitionType, int]:
    """The degree-n complete Bell polynomial as a map type -> coefficient.

    Each type alpha with ||alpha|| = n contributes the monomial
    L_1^a1 L_2^a2 ... with coefficient faa_di_bruno(alpha).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    poly = {alpha: faa_di_bruno(alpha) for alpha in partition_types(n)}
    return dict(sorted(poly.items(), key=lambda kv: kv[0].counts, reverse=True))


def intersection_matrix(p1: OrderedSetPartition, p2: OrderedSetPartition):
    """Matrix of block-intersection sizes; packed since blocks are nonempty."""
    from .diag import PackedMatrix

    if p1.n != p2.n:
        raise ValueError(f"ground-set mismatch: {p1.n} vs {p2.n}")
    return PackedMatrix(
        tuple(tuple(len(b1 & b2) for b2 in p2.blocks) for b1 in p1.blocks)
    )


def matrix_class(q1: SetPartition, q2: SetPartition) -> frozenset:
    """All intersection matrices over the ordered preimages of the pair.

    Equals the orbit of any single member under independent row and column
    permutations.
    """
    if q1.n != q2.n:
        raise ValueError(f"ground-set mismatch: {q1.n} vs {q2.n}")
    return frozenset(
        intersection_matrix(o1, o2) for o1 in orderings(q1) for o2 in orderings(q2)
    )


# --- text format: "{1,2,5}{3,4,6}" ---------------------------------------

def _parse_blocks(text: str) -> list[frozenset[int]]:
    text = text.strip()
    if not text:
        return []
    blocks = []
    pos = 0
    while pos < len(text):
        if text[pos] != "{":
            raise ParseError(f"expected '{{' at position {pos + 1}")
        end = text.find("}", pos)
        if end < 0:
            raise ParseError("unterminated block: missing '}'")
        body = text[pos + 1 : end].strip()
        if not body:
            raise ParseError("empty block")
        try:
            elements = frozenset(int(t) for t in body.split(","))
        except ValueError as exc:
            raise ParseError(f"invalid block contents {body!r}") from exc
        blocks.append(elements)
        pos = end + 1
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return blocks


def parse_set_partition(text: str) -> SetPartition:
    blocks = _parse_blocks(text)
    if len(set(blocks)) != len(blocks):
        raise ParseError("repeated block")
    n = max((max(b) for b in blocks), default=0)
    try:
        return make_partition(n, blocks)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_ordered_partition(text: str) -> OrderedSetPartition:
    blocks = _parse_blocks(text)
    n = max((max(b) for b in blocks), default=0)
    try:
        return make_ordered_partition(n, blocks)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_partition(p: SetPartition | OrderedSetPartition) -> str:
    blocks = p.sorted_blocks() if isinstance(p, SetPartition) else p.blocks
    return "".join("{" + ",".join(str(x) for x in sorted(b)) + "}" for b in blocks)
