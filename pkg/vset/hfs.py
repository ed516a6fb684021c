"""Hereditarily finite sets in canonical form.

Every :class:`HFSet` is built through :func:`construct`, which deduplicates and sorts the
members and interns the result, so that two values are equal exactly when they are equal
as ZF sets. Members are ordered length-lexicographically on their canonical text, which
is ``0`` for the empty set and ``{e1,...,ek}`` otherwise.
"""
import functools
import itertools
import threading
import weakref
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .utils import MAX_SPACE_CELLS, MAX_STAGE, LimitError

__all__ = [
    "HFSet",
    "construct",
    "ZERO",
    "ONE",
    "TWO",
    "ordinal",
    "kpair",
    "kpair_split",
    "std_tuple",
    "image",
    "std_product",
    "std_sum",
    "big_union",
    "powerset",
    "rank",
    "stage_members",
    "stage",
    "is_transitive",
    "parse_hfset",
    "to_nested_list",
]


class HFSet:
    """Immutable hereditarily finite set.

    Do not instantiate directly, use :func:`construct`. Rank, hash and canonical text are
    computed once at construction.
    """

    __slots__ = ("_children", "_members", "_text", "_hash", "_rank", "__weakref__")

    def __init__(self, children: Tuple["HFSet", ...], text: str):
        self._children = children
        self._members = frozenset(children)
        self._text = text
        self._hash = hash(text)
        self._rank = 1 + max(c._rank for c in children) if children else 0

    @property
    def children(self) -> Tuple["HFSet", ...]:
        return self._children

    @property
    def text(self) -> str:
        return self._text

    @property
    def rank(self) -> int:
        return self._rank

    def is_empty(self) -> bool:
        return len(self._children) == 0

    def __iter__(self) -> Iterator["HFSet"]:
        return iter(self._children)

    def __len__(self) -> int:
        return len(self._children)

    def __contains__(self, item) -> bool:
        return item in self._members

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, HFSet):
            return NotImplemented
        return self._text == other._text

    def __hash__(self) -> int:
        return self._hash

    def __le__(self, other: "HFSet") -> bool:
        return self._members <= other._members

    def __lt__(self, other: "HFSet") -> bool:
        return self._members < other._members

    def __ge__(self, other: "HFSet") -> bool:
        return self._members >= other._members

    def __gt__(self, other: "HFSet") -> bool:
        return self._members > other._members

    def __or__(self, other: "HFSet") -> "HFSet":
        return construct(itertools.chain(self._children, other._children))

    def __and__(self, other: "HFSet") -> "HFSet":
        return construct(c for c in self._children if c in other._members)

    def __sub__(self, other: "HFSet") -> "HFSet":
        return construct(c for c in self._children if c not in other._members)

    def __str__(self) -> str:
        return self._text

    def __repr__(self) -> str:
        return f"HFSet({self._text})"

    def __reduce__(self):
        return construct, (self._children,)


_intern_table: "weakref.WeakValueDictionary[str, HFSet]" = weakref.WeakValueDictionary()
_intern_lock = threading.Lock()


def _order_key(h: HFSet) -> Tuple[int, str]:
    return len(h.text), h.text


def construct(children: Iterable[HFSet] = ()) -> HFSet:
    """Return the canonical set whose members are exactly the distinct `children`."""
    unique = {}
    for c in children:
        unique.setdefault(c.text, c)
    ordered = tuple(sorted(unique.values(), key=_order_key))

    if ordered:
        text = "{" + ",".join(c.text for c in ordered) + "}"
    else:
        text = "0"

    with _intern_lock:
        existing = _intern_table.get(text)
        if existing is None:
            existing = HFSet(ordered, text)
            _intern_table[text] = existing
        return existing


ZERO = construct()
ONE = construct([ZERO])
TWO = construct([ZERO, ONE])


def ordinal(n: int) -> HFSet:
    """Von Neumann ordinal n = {0, ..., n-1}."""
    if n < 0:
        raise ValueError(f"expected a natural number, got {n}")
    result = ZERO
    for _ in range(n):
        result = result | construct([result])
    return result


def kpair(a: HFSet, b: HFSet) -> HFSet:
    """Kuratowski pair {{a}, {a, b}}."""
    return construct([construct([a]), construct([a, b])])


@functools.lru_cache(maxsize=1 << 16)
def kpair_split(h: HFSet) -> Optional[Tuple[HFSet, HFSet]]:
    """Inverse of :func:`kpair`. Returns None if `h` is not a Kuratowski pair."""
    members = h.children
    if len(members) == 1:
        (m,) = members
        if len(m) == 1:
            return m.children[0], m.children[0]
        return None

    if len(members) == 2:
        # canonical order sorts by text length first, so a 1-element member comes first
        s, t = members
        if len(s) != 1 or len(t) != 2:
            return None
        (a,) = s.children
        if a not in t:
            return None
        b = t.children[1] if t.children[0] == a else t.children[0]
        return a, b

    return None


def std_tuple(*items: HFSet) -> HFSet:
    """Standard tuple <a1, ..., an>, nested to the right."""
    if len(items) == 0:
        raise ValueError("a tuple needs at least one component")
    result = items[-1]
    for item in reversed(items[:-1]):
        result = kpair(item, result)
    return result


def image(relation: HFSet, domain: HFSet) -> HFSet:
    """Image operator R `` S = { y | <x, y> in R for some x in S }.

    Members of `relation` that are not standard pairs are ignored.
    """
    result = []
    for member in relation:
        pair = kpair_split(member)
        if pair is not None and pair[0] in domain:
            result.append(pair[1])
    return construct(result)


def std_product(a: HFSet, b: HFSet) -> HFSet:
    return construct(kpair(x, y) for x in a for y in b)


def std_sum(a: HFSet, b: HFSet) -> HFSet:
    """Standard disjoint sum ({0} x A) u ({1} x B)."""
    return std_product(construct([ZERO]), a) | std_product(construct([ONE]), b)


def big_union(h: HFSet) -> HFSet:
    return construct(y for x in h for y in x)


def _subsets(items: Sequence[HFSet]) -> List[HFSet]:
    return [
        construct(items[i] for i in range(len(items)) if mask >> i & 1)
        for mask in range(1 << len(items))
    ]


def powerset(h: HFSet) -> HFSet:
    if len(h) > MAX_SPACE_CELLS:
        raise LimitError(
            f"powerset of a {len(h)}-element set exceeds the limit of {MAX_SPACE_CELLS}"
        )
    return construct(_subsets(h.children))


def rank(h: HFSet) -> int:
    return h.rank


@functools.lru_cache(maxsize=None)
def stage_members(n: int) -> Tuple[HFSet, ...]:
    """Members of the cumulative hierarchy stage V_n, in canonical order.

    Args:
        n: stage index, at most :data:`MAX_STAGE`

    Returns:
        tuple of all sets of rank less than n
    """
    if n < 0:
        raise ValueError(f"expected a natural number, got {n}")
    if n > MAX_STAGE:
        raise LimitError(f"stage V_{n} is too large to enumerate (limit is V_{MAX_STAGE})")
    if n == 0:
        return ()
    return tuple(sorted(_subsets(stage_members(n - 1)), key=_order_key))


def stage(n: int) -> HFSet:
    """V_n as a set."""
    return construct(stage_members(n))


def is_transitive(h: HFSet) -> bool:
    return all(member <= h for member in h)


def parse_hfset(text: str) -> HFSet:
    """Parse the canonical text form. Whitespace and member order are not significant, and
    ``1`` is accepted as a shorthand for ``{0}``.
    """
    s = "".join(text.split())
    pos = 0

    def parse_at() -> HFSet:
        nonlocal pos
        if pos >= len(s):
            raise ValueError(f"unexpected end of set literal {text!r}")
        if s[pos] == "0":
            pos += 1
            return ZERO
        if s[pos] == "1":
            pos += 1
            return ONE
        if s[pos] != "{":
            raise ValueError(f"unexpected {s[pos]!r} at offset {pos} in set literal {text!r}")
        pos += 1
        children = []
        if pos < len(s) and s[pos] == "}":
            pos += 1
            return ZERO
        while True:
            children.append(parse_at())
            if pos < len(s) and s[pos] == ",":
                pos += 1
            elif pos < len(s) and s[pos] == "}":
                pos += 1
                return construct(children)
            else:
                raise ValueError(f"expected ',' or '}}' at offset {pos} in {text!r}")

    result = parse_at()
    if pos != len(s):
        raise ValueError(f"trailing characters at offset {pos} in set literal {text!r}")
    return result


def to_nested_list(h: HFSet) -> List:
    """JSON-ready form: nested lists in canonical order, the empty set being ``[]``."""
    return [to_nested_list(c) for c in h]

