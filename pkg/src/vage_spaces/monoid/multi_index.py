import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from src.vage_spaces.errors import NumericOverflowError, UsageError

Entry = Tuple[int, int]


@total_ordering
@dataclass(frozen=True)
class MultiIndex:
    """
    Finite-support exponent vector over the generators 1, 2, 3, ...

    Stored as sorted ``(generator, exponent)`` pairs; zero exponents are never
    kept, so the empty tuple is the monoid identity 0.
    Ordering is graded-lexicographic: total degree first, then the dense
    exponent vectors compared in descending lexicographic order
    (x1^2 < x1*x2 < x2^2 < x1*x3 ...).
    """
    entries: Tuple[Entry, ...] = ()

    def __post_init__(self):
        previous = 0
        for generator, exponent in self.entries:
            if generator <= previous:
                raise UsageError(f"generators must be strictly increasing and positive: {self.entries}")
            if exponent < 1:
                raise UsageError(f"exponents must be >= 1: {self.entries}")
            previous = generator

    @classmethod
    def zero(cls) -> "MultiIndex":
        return _ZERO

    @classmethod
    def unit(cls, generator: int, exponent: int = 1) -> "MultiIndex":
        """The element ``exponent * e_generator``."""
        if exponent == 0:
            return _ZERO
        return cls(((generator, exponent),))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> "MultiIndex":
        """Build from unsorted pairs; repeated generators are summed, zeros dropped."""
        collected = {}
        for pair in pairs:
            generator, exponent = int(pair[0]), int(pair[1])
            if generator < 1 or exponent < 0:
                raise UsageError(f"invalid multi-index pair {list(pair)}")
            collected[generator] = collected.get(generator, 0) + exponent
        return cls(tuple(sorted((g, e) for g, e in collected.items() if e > 0)))

    @classmethod
    def from_dense(cls, exponents: Sequence[int]) -> "MultiIndex":
        """Build from ``(alpha_1, alpha_2, ...)``."""
        return cls.from_pairs((position + 1, value) for position, value in enumerate(exponents))

    @property
    def degree(self) -> int:
        return sum(exponent for _, exponent in self.entries)

    @property
    def support_size(self) -> int:
        return len(self.entries)

    @property
    def max_generator(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def is_zero(self) -> bool:
        return not self.entries

    def exponent(self, generator: int) -> int:
        for g, e in self.entries:
            if g == generator:
                return e
        return 0

    def to_dense(self, length: int) -> List[int]:
        dense = [0] * length
        for generator, exponent in self.entries:
            if generator > length:
                raise UsageError(f"generator {generator} does not fit a dense vector of length {length}")
            dense[generator - 1] = exponent
        return dense

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return add(self, other)

    def __lt__(self, other: "MultiIndex") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> Tuple[int, Tuple[Entry, ...]]:
        return self.degree, tuple((g, -e) for g, e in self.entries)

    def le(self, other: "MultiIndex") -> bool:
        """Monoid partial order: self <= other iff other - self exists."""
        return try_sub(other, self) is not None

    def to_json(self) -> List[List[int]]:
        return [[g, e] for g, e in self.entries]

    @classmethod
    def from_json(cls, payload) -> "MultiIndex":
        if not isinstance(payload, list):
            raise UsageError(f"multi-index must be a list of [generator, exponent] pairs, got {payload!r}")
        for pair in payload:
            if not isinstance(pair, list) or len(pair) != 2:
                raise UsageError(f"bad multi-index pair {pair!r}")
        return cls(tuple((int(g), int(e)) for g, e in payload))

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for generator, exponent in self.entries:
            parts.append(f"e{generator}" if exponent == 1 else f"{exponent}e{generator}")
        return "+".join(parts)


_ZERO = MultiIndex(())


def add(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    """Componentwise sum of two multi-indices."""
    if not alpha.entries:
        return beta
    if not beta.entries:
        return alpha
    merged = dict(alpha.entries)
    for generator, exponent in beta.entries:
        merged[generator] = merged.get(generator, 0) + exponent
    return MultiIndex(tuple(sorted(merged.items())))


def try_sub(alpha: MultiIndex, beta: MultiIndex) -> Optional[MultiIndex]:
    """Return alpha - beta when beta <= alpha componentwise, otherwise None."""
    remaining = dict(alpha.entries)
    for generator, exponent in beta.entries:
        left = remaining.get(generator, 0) - exponent
        if left < 0:
            return None
        if left == 0:
            del remaining[generator]
        else:
            remaining[generator] = left
    return MultiIndex(tuple(sorted(remaining.items())))


def factorial(alpha: MultiIndex) -> float:
    """alpha! = prod_k alpha_k!, as a float."""
    result = 1.0
    for _, exponent in alpha.entries:
        try:
            result *= float(math.factorial(exponent))
        except OverflowError as exc:
            raise NumericOverflowError(f"{exponent}! exceeds the double range") from exc
        if math.isinf(result):
            raise NumericOverflowError(f"factorial of {alpha} exceeds the double range")
    return result


@dataclass(frozen=True)
class TruncationSpec:
    """Window of generators <= K and total degree <= N."""
    max_generator: int
    max_degree: int

    def __post_init__(self):
        if self.max_generator < 1:
            raise UsageError(f"max_generator must be >= 1, got {self.max_generator}")
        if self.max_degree < 0:
            raise UsageError(f"max_degree must be >= 0, got {self.max_degree}")

    def contains(self, alpha: MultiIndex) -> bool:
        return alpha.max_generator <= self.max_generator and alpha.degree <= self.max_degree

    def size(self) -> int:
        """Number of in-window multi-indices: C(N + K, K)."""
        return math.comb(self.max_degree + self.max_generator, self.max_generator)

    def to_json(self) -> dict:
        return {"K": self.max_generator, "N": self.max_degree}

    @classmethod
    def from_json(cls, payload) -> "TruncationSpec":
        try:
            return cls(int(payload["K"]), int(payload["N"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"window must be an object with integer K and N, got {payload!r}") from exc

    def __str__(self) -> str:
        return f"(K={self.max_generator}, N={self.max_degree})"


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Dense exponent vectors of a fixed total, in descending lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_window(window: TruncationSpec) -> List[MultiIndex]:
    """All in-window multi-indices in graded-lexicographic order."""
    indices = []
    for degree in range(window.max_degree + 1):
        for dense in _compositions(degree, window.max_generator):
            indices.append(MultiIndex.from_dense(dense))
    return indices
