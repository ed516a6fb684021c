"""Regular elements of U, the greatest fixedpoint of Q(A) = {1} u (I ~> A).

An element is represented by a finite pointed Q-coalgebra: finitely many states, each being
either an atom (the ``1`` branch) or an I-tuple of states. Any such coalgebra is a
post-fixedpoint of Q once every state has a shape, which certifies that its states denote
members of U. The denotation of a state is the union of its finite approximations
:func:`expand`, and two states denote the same set exactly when they are bisimilar.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence
from typing import Tuple, Union

from .hfs import HFSet, ONE, ZERO, construct, image, kpair_split, ordinal
from .utils import MAX_EXPAND_DEPTH, MAX_OBJECT_SIZE, LimitError
from .variant import vlambda

__all__ = [
    "IndexSet",
    "AtomNode",
    "TupleNode",
    "ATOM",
    "NodeShape",
    "QCoalgebra",
    "RegularElement",
    "BisimResult",
    "CoalgebraBuilder",
    "build",
    "expand",
    "bisim",
    "minimize",
    "from_hf",
    "atom",
    "zero",
    "tuple_element",
    "vpair_element",
    "is_well_founded",
    "depth",
    "denotation",
    "q_apply",
    "is_q_post_fixpoint",
]

State = Hashable


@dataclass(frozen=True)
class IndexSet:
    """The index set I = {0, ..., size-1}."""

    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"index set size must be a natural number, got {self.size}")

    @cached_property
    def indices(self) -> Tuple[HFSet, ...]:
        return tuple(ordinal(i) for i in range(self.size))

    def __len__(self) -> int:
        return self.size

    def require_pairs(self) -> None:
        if self.size < 2:
            raise ValueError(
                f"variant pairs need an index set of size at least 2, got {self.size}"
            )


@dataclass(frozen=True)
class AtomNode:
    pass


@dataclass(frozen=True)
class TupleNode:
    children: Tuple[State, ...]


ATOM = AtomNode()

NodeShape = Union[AtomNode, TupleNode]


@dataclass(frozen=True, eq=False)
class QCoalgebra:
    index: IndexSet
    trans: Mapping[State, NodeShape]

    @property
    def states(self) -> FrozenSet[State]:
        return frozenset(self.trans)

    def validate(self) -> None:
        for state, shape in self.trans.items():
            if isinstance(shape, AtomNode):
                continue
            if not isinstance(shape, TupleNode):
                raise ValueError(f"state {state!r} has invalid shape {shape!r}")
            if len(shape.children) != self.index.size:
                raise ValueError(
                    f"state {state!r} is a tuple of arity {len(shape.children)}, "
                    f"expected {self.index.size}"
                )
            for child in shape.children:
                if child not in self.trans:
                    raise ValueError(f"state {state!r} refers to unknown state {child!r}")

    def reachable(self, root: State) -> List[State]:
        """States reachable from `root`, in breadth-first order."""
        seen = {root}
        order = [root]
        queue = deque([root])
        while queue:
            shape = self.trans[queue.popleft()]
            if isinstance(shape, TupleNode):
                for child in shape.children:
                    if child not in seen:
                        seen.add(child)
                        order.append(child)
                        queue.append(child)
        return order


@dataclass(frozen=True, eq=False)
class RegularElement:
    """A member of U given by a pointed coalgebra.

    Equality and hashing compare denotations: two elements are equal iff they are
    bisimilar. This makes elements usable as dictionary keys and set members.
    """

    coalgebra: QCoalgebra
    root: State

    @property
    def index(self) -> IndexSet:
        return self.coalgebra.index

    @property
    def shape(self) -> NodeShape:
        return self.coalgebra.trans[self.root]

    def is_atom(self) -> bool:
        return isinstance(self.shape, AtomNode)

    def child(self, i: int) -> "RegularElement":
        shape = self.shape
        if not isinstance(shape, TupleNode):
            raise ValueError("an atom has no components")
        return RegularElement(self.coalgebra, shape.children[i])

    def children(self) -> Tuple["RegularElement", ...]:
        return tuple(self.child(i) for i in range(self.index.size))

    def expand(self, n: int) -> HFSet:
        return expand(self, n)

    @cached_property
    def canonical_key(self) -> Tuple:
        """Minimal coalgebra renumbered breadth-first from the root.

        Atoms are encoded as None and tuples as the tuple of their children's numbers.
        """
        return self.index.size, _canonical_encoding(self.coalgebra, self.root)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RegularElement):
            return NotImplemented
        return self is other or self.canonical_key == other.canonical_key

    def __hash__(self) -> int:
        return hash(self.canonical_key)

    def __repr__(self) -> str:
        return (
            f"RegularElement(index={self.index.size}, "
            f"states={len(self.canonical_key[1])}, root={self.root!r})"
        )


def _refine(coalgebra: QCoalgebra, states: Sequence[State]) -> Dict[State, int]:
    """Moore-style partition refinement: blocks are bisimilarity classes on return."""
    trans = coalgebra.trans
    block = {s: 0 if isinstance(trans[s], AtomNode) else 1 for s in states}
    count = len(set(block.values()))

    while True:
        signatures = {}
        new_block = {}
        for s in states:
            shape = trans[s]
            if isinstance(shape, TupleNode):
                sig = (block[s], tuple(block[c] for c in shape.children))
            else:
                sig = (block[s], None)
            new_block[s] = signatures.setdefault(sig, len(signatures))

        if len(signatures) == count:
            return new_block
        block, count = new_block, len(signatures)


def _canonical_encoding(coalgebra: QCoalgebra, root: State) -> Tuple:
    states = coalgebra.reachable(root)
    block = _refine(coalgebra, states)

    representative = {}
    for s in states:
        representative.setdefault(block[s], s)

    number = {block[root]: 0}
    queue = deque([block[root]])
    encoding = []
    while queue:
        shape = coalgebra.trans[representative[queue.popleft()]]
        if isinstance(shape, AtomNode):
            encoding.append(None)
            continue
        children = []
        for child in shape.children:
            b = block[child]
            if b not in number:
                number[b] = len(number)
                queue.append(b)
            children.append(number[b])
        encoding.append(tuple(children))
    return tuple(encoding)


def _element_from_encoding(index: IndexSet, encoding: Tuple) -> RegularElement:
    trans = {
        i: ATOM if shape is None else TupleNode(shape) for i, shape in enumerate(encoding)
    }
    return RegularElement(QCoalgebra(index, trans), 0)


class CoalgebraBuilder:
    """Assemble a coalgebra from fresh states and copies of existing elements.

    Fresh states are numbered in allocation order, so the result only depends on the order
    of calls.
    """

    def __init__(self, index: IndexSet):
        self.index = index
        self._trans: Dict[int, NodeShape] = {}
        self._count = 0
        self._copies: Dict[Tuple[int, State], int] = {}
        self._sources: List[QCoalgebra] = []  # keeps id() of copied coalgebras stable

    def new_state(self) -> int:
        self._count += 1
        return self._count - 1

    def define(self, state: int, shape: NodeShape) -> None:
        if state in self._trans:
            raise ValueError(f"state {state} is already defined")
        self._trans[state] = shape

    def graft(self, element: RegularElement) -> int:
        """Copy the states reachable from `element` and return the copy of its root."""
        if element.index.size != self.index.size:
            raise ValueError(
                f"cannot graft an element over an index set of size {element.index.size} "
                f"into a coalgebra over an index set of size {self.index.size}"
            )
        source = element.coalgebra
        self._sources.append(source)
        key = id(source)

        for s in source.reachable(element.root):
            if (key, s) not in self._copies:
                self._copies[(key, s)] = self.new_state()
        for s in source.reachable(element.root):
            target = self._copies[(key, s)]
            if target in self._trans:
                continue
            shape = source.trans[s]
            if isinstance(shape, TupleNode):
                shape = TupleNode(tuple(self._copies[(key, c)] for c in shape.children))
            self._trans[target] = shape
        return self._copies[(key, element.root)]

    def finish(self) -> QCoalgebra:
        undefined = [s for s in range(self._count) if s not in self._trans]
        if undefined:
            raise ValueError(f"states {undefined} were allocated but never defined")
        coalgebra = QCoalgebra(self.index, dict(self._trans))
        coalgebra.validate()
        return coalgebra


def build(index: IndexSet, trans: Mapping[State, NodeShape], root: State) -> RegularElement:
    """Validate a pointed coalgebra and return the element it denotes.

    Raises:
        ValueError: on dangling state references, wrong tuple arity or unknown root
    """
    coalgebra = QCoalgebra(index, dict(trans))
    coalgebra.validate()
    if root not in coalgebra.trans:
        raise ValueError(f"root {root!r} is not a state of the coalgebra")
    return RegularElement(coalgebra, root)


def atom(index: IndexSet) -> RegularElement:
    return build(index, {"a": ATOM}, "a")


def zero(index: IndexSet) -> RegularElement:
    """The empty set as an element of U: the tuple all of whose components are itself."""
    return build(index, {"z": TupleNode(("z",) * index.size)}, "z")


def tuple_element(index: IndexSet, children: Sequence[RegularElement]) -> RegularElement:
    if len(children) != index.size:
        raise ValueError(f"expected {index.size} components, got {len(children)}")
    builder = CoalgebraBuilder(index)
    root = builder.new_state()
    builder.define(root, TupleNode(tuple(builder.graft(c) for c in children)))
    return RegularElement(builder.finish(), root)


def vpair_element(a: RegularElement, b: RegularElement) -> RegularElement:
    """Variant pair <a; b> as an I-tuple, padded with the empty set beyond index 1."""
    index = a.index
    index.require_pairs()
    return tuple_element(index, [a, b] + [zero(index)] * (index.size - 2))


def expand(e: RegularElement, n: int) -> HFSet:
    """Finite approximation pi_n of the denotation of `e`.

    pi_0 is 0, an atom is 1 at any positive depth, and a tuple is the variant function of
    its components' approximations at depth n-1.
    """
    if n < 0:
        raise ValueError(f"expansion depth must be a natural number, got {n}")
    if n > MAX_EXPAND_DEPTH:
        raise LimitError(f"expansion depth {n} exceeds the limit of {MAX_EXPAND_DEPTH}")

    trans = e.coalgebra.trans
    indices = e.index.indices
    memo: Dict[Tuple[State, int], HFSet] = {}

    def approximate(state: State, k: int) -> HFSet:
        if k == 0:
            return ZERO
        if (state, k) in memo:
            return memo[(state, k)]
        shape = trans[state]
        if isinstance(shape, AtomNode):
            result = ONE
        else:
            result = vlambda(
                {indices[i]: approximate(c, k - 1) for i, c in enumerate(shape.children)}
            )
        memo[(state, k)] = result
        return result

    return approximate(e.root, n)


@dataclass(frozen=True)
class BisimResult:
    """Outcome of :func:`bisim`. When not bisimilar, `depth` is the least n at which the
    expansions differ."""

    bisimilar: bool
    depth: Optional[int] = None

    def __bool__(self) -> bool:
        return self.bisimilar


def _distinguishing_depth(e1: RegularElement, e2: RegularElement) -> Optional[int]:
    """Breadth-first search of the product graph for a pair of states of different kinds.

    A mismatch k steps away from the root pair makes the expansions differ at depth k+1.
    """
    t1, t2 = e1.coalgebra.trans, e2.coalgebra.trans
    start = (e1.root, e2.root)
    seen = {start}
    frontier = [start]
    level = 1
    while frontier:
        next_frontier = []
        for p, q in frontier:
            s1, s2 = t1[p], t2[q]
            if isinstance(s1, AtomNode) != isinstance(s2, AtomNode):
                return level
            if isinstance(s1, TupleNode):
                for pair in zip(s1.children, s2.children):
                    if pair not in seen:
                        seen.add(pair)
                        next_frontier.append(pair)
        frontier = next_frontier
        level += 1
    return None


def bisim(e1: RegularElement, e2: RegularElement) -> BisimResult:
    """Decide whether two elements denote the same set.

    Uses a Hopcroft-Karp style union-find closure over the states of both coalgebras. When
    they differ, the least distinguishing depth is reported.
    """
    if e1.index.size != e2.index.size:
        raise ValueError(
            f"cannot compare elements over index sets of sizes {e1.index.size} "
            f"and {e2.index.size}"
        )

    t1, t2 = e1.coalgebra.trans, e2.coalgebra.trans
    parent: Dict[Tuple[int, State], Tuple[int, State]] = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while x != root:
            parent[x], x = root, parent[x]
        return root

    def union(x, y) -> bool:
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        parent[rx] = ry
        return True

    union((0, e1.root), (1, e2.root))
    todo = [(e1.root, e2.root)]
    while todo:
        p, q = todo.pop()
        s1, s2 = t1[p], t2[q]
        if isinstance(s1, AtomNode) != isinstance(s2, AtomNode):
            witness = _distinguishing_depth(e1, e2)
            logging.debug(f"bisim: elements differ at depth {witness}")
            return BisimResult(False, witness)
        if isinstance(s1, TupleNode):
            for c1, c2 in zip(s1.children, s2.children):
                if union((0, c1), (1, c2)):
                    todo.append((c1, c2))

    return BisimResult(True)


def minimize(e: RegularElement) -> RegularElement:
    """Quotient the reachable part of `e` by bisimilarity.

    The states of the result are numbered breadth-first from the root (which is 0), so
    bisimilar inputs give identical outputs.
    """
    result = _element_from_encoding(e.index, e.canonical_key[1])
    logging.debug(
        f"minimize: {len(e.coalgebra.reachable(e.root))} reachable states reduced to "
        f"{len(result.coalgebra.trans)}"
    )
    return result


class _NotAnElement(Exception):
    pass


def from_hf(h: HFSet, index: IndexSet) -> Optional[RegularElement]:
    """Decode a hereditarily finite set as an element of U.

    `h` must be 1, or a set of standard pairs <i, y> with i in I whose images at every
    index decode in turn. Returns None when `h` is not a member of U.
    """
    positions = set(index.indices)
    states: Dict[HFSet, int] = {}
    trans: Dict[int, NodeShape] = {}

    def visit(x: HFSet) -> int:
        if x in states:
            return states[x]
        sid = len(states)
        states[x] = sid
        if x == ONE:
            trans[sid] = ATOM
            return sid
        for member in x:
            pair = kpair_split(member)
            if pair is None or pair[0] not in positions:
                raise _NotAnElement(member)
        trans[sid] = TupleNode(tuple(visit(image(x, construct([i]))) for i in index.indices))
        return sid

    try:
        root = visit(h)
    except _NotAnElement as exc:
        logging.debug(f"from_hf: {h} is not a member of U (offending member {exc.args[0]})")
        return None
    return build(index, trans, root)


def _zero_states(coalgebra: QCoalgebra, states: Iterable[State]) -> FrozenSet[State]:
    """Greatest set of tuple states all of whose components are in the set."""
    trans = coalgebra.trans
    current = {s for s in states if isinstance(trans[s], TupleNode)}
    changed = True
    while changed:
        changed = False
        for s in list(current):
            if any(c not in current for c in trans[s].children):
                current.discard(s)
                changed = True
    return frozenset(current)


def _heights(e: RegularElement) -> Optional[Dict[State, int]]:
    coalgebra = e.coalgebra
    states = coalgebra.reachable(e.root)
    zeros = _zero_states(coalgebra, states)
    heights: Dict[State, int] = {s: 0 for s in zeros}
    on_path = set()

    def visit(s: State) -> Optional[int]:
        if s in heights:
            return heights[s]
        if s in on_path:
            return None
        shape = coalgebra.trans[s]
        if isinstance(shape, AtomNode):
            heights[s] = 1
            return 1
        on_path.add(s)
        child_heights = [visit(c) for c in shape.children]
        on_path.discard(s)
        if any(h is None for h in child_heights):
            return None
        heights[s] = 1 + max(child_heights)
        return heights[s]

    if visit(e.root) is None:
        return None
    return heights


def is_well_founded(e: RegularElement) -> bool:
    """True if `e` denotes a hereditarily finite set.

    Cycles through states denoting the empty set are allowed, since 0 is the variant tuple
    of empty sets.
    """
    return _heights(e) is not None


def depth(e: RegularElement) -> Optional[int]:
    """Least n such that expand(e, m) is the same for all m >= n, None if not well-founded."""
    heights = _heights(e)
    return None if heights is None else heights[e.root]


def denotation(e: RegularElement) -> Optional[HFSet]:
    """The set denoted by a well-founded element, None otherwise."""
    n = depth(e)
    return None if n is None else expand(e, n)


def q_apply(index: IndexSet, z: Iterable[RegularElement]) -> FrozenSet[RegularElement]:
    """Object action of Q on a finite set: {1} u (I ~> Z)."""
    members = list(dict.fromkeys(z))
    count = len(members) ** index.size
    if count > MAX_OBJECT_SIZE:
        raise LimitError(f"Q(Z) would have {count} tuples (limit is {MAX_OBJECT_SIZE})")
    result = {atom(index)}
    for children in itertools.product(members, repeat=index.size):
        result.add(tuple_element(index, children))
    return frozenset(result)


def is_q_post_fixpoint(index: IndexSet, z: Iterable[RegularElement]) -> bool:
    """Check Z <= Q(Z), the coinduction certificate for Z <= U."""
    members = list(z)
    return set(members) <= q_apply(index, members)
