"""Systems of set equations over U.

Right-hand sides are :data:`TermX` values: either the atom 1 or an I-tuple whose components
are variables, nested terms or constant elements of U. A system x = nu(x) is solved by
flattening every right-hand side into one coalgebra whose states are the variables plus one
fresh state per nested tuple; the solution of x is that coalgebra pointed at x.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, Mapping
from typing import Optional, Set, Tuple, Union

from .coalg import (
    ATOM,
    CoalgebraBuilder,
    IndexSet,
    RegularElement,
    TupleNode,
    atom,
    minimize,
    vpair_element,
    zero,
)

__all__ = [
    "AtomTerm",
    "ATOM_TERM",
    "TupleTerm",
    "VarLeaf",
    "SubTerm",
    "ConstLeaf",
    "TermX",
    "Leaf",
    "EquationSystem",
    "term_variables",
    "solve",
    "subst",
    "sigma_embed",
    "FiniteMap",
    "inl",
    "inr",
    "inl_map",
    "inr_map",
    "sum_object",
    "case_map",
    "sum_map",
]


@dataclass(frozen=True)
class AtomTerm:
    pass


ATOM_TERM = AtomTerm()


@dataclass(frozen=True)
class VarLeaf:
    name: Hashable


@dataclass(frozen=True)
class SubTerm:
    term: "TermX"


@dataclass(frozen=True)
class ConstLeaf:
    element: RegularElement


Leaf = Union[VarLeaf, SubTerm, ConstLeaf]


@dataclass(frozen=True)
class TupleTerm:
    leaves: Tuple[Leaf, ...]


TermX = Union[AtomTerm, TupleTerm]


def _leaves(term: TermX) -> Iterator[Leaf]:
    if isinstance(term, TupleTerm):
        for leaf in term.leaves:
            yield leaf
            if isinstance(leaf, SubTerm):
                yield from _leaves(leaf.term)


def term_variables(term: TermX) -> Set[Hashable]:
    return {leaf.name for leaf in _leaves(term) if isinstance(leaf, VarLeaf)}


def _check_term(term: TermX, index: IndexSet, where: str) -> None:
    if isinstance(term, AtomTerm):
        return
    if not isinstance(term, TupleTerm):
        raise ValueError(f"{where}: {term!r} is not a term")
    if len(term.leaves) != index.size:
        raise ValueError(
            f"{where}: tuple of arity {len(term.leaves)}, expected {index.size}"
        )
    for leaf in term.leaves:
        if isinstance(leaf, SubTerm):
            _check_term(leaf.term, index, where)
        elif isinstance(leaf, ConstLeaf):
            if leaf.element.index.size != index.size:
                raise ValueError(
                    f"{where}: constant over an index set of size "
                    f"{leaf.element.index.size}, expected {index.size}"
                )
        elif not isinstance(leaf, VarLeaf):
            raise ValueError(f"{where}: {leaf!r} is not a tuple component")


@dataclass(frozen=True)
class EquationSystem:
    """Equations x = nu(x), one per variable. Variables may be any hashable value."""

    index: IndexSet
    equations: Mapping[Hashable, TermX]

    @property
    def variables(self) -> Tuple[Hashable, ...]:
        return tuple(self.equations)

    def validate(self) -> None:
        for x, term in self.equations.items():
            _check_term(term, self.index, f"equation for {x!r}")
            unbound = term_variables(term) - set(self.equations)
            if unbound:
                names = ", ".join(sorted(repr(v) for v in unbound))
                raise ValueError(f"equation for {x!r} uses unbound variable(s) {names}")


def _flatten(
    builder: CoalgebraBuilder, term: TermX, state: int, resolve: Callable[[Hashable], int]
) -> None:
    if isinstance(term, AtomTerm):
        builder.define(state, ATOM)
        return

    children = []
    for leaf in term.leaves:
        if isinstance(leaf, VarLeaf):
            children.append(resolve(leaf.name))
        elif isinstance(leaf, ConstLeaf):
            children.append(builder.graft(leaf.element))
        else:
            child = builder.new_state()
            _flatten(builder, leaf.term, child, resolve)
            children.append(child)
    builder.define(state, TupleNode(tuple(children)))


def solve(system: EquationSystem) -> Dict[Hashable, RegularElement]:
    """Unique solution f of the system, satisfying f(x) = subst(f, nu(x)) for every x.

    States are allocated in the order the variables and subterms are listed, so equal
    inputs always give identical coalgebras.
    """
    system.validate()
    builder = CoalgebraBuilder(system.index)
    slots = {x: builder.new_state() for x in system.equations}
    for x, term in system.equations.items():
        _flatten(builder, term, slots[x], slots.__getitem__)
    coalgebra = builder.finish()
    logging.info(
        f"solve: {len(slots)} equation(s) flattened into {len(coalgebra.trans)} states"
    )
    return {x: RegularElement(coalgebra, slots[x]) for x in system.equations}


def _infer_index(
    term: TermX, assignment: Mapping[Hashable, RegularElement]
) -> Optional[IndexSet]:
    if isinstance(term, TupleTerm):
        return IndexSet(len(term.leaves))
    for value in assignment.values():
        return value.index
    return None


def subst(
    assignment: Mapping[Hashable, RegularElement],
    term: TermX,
    index: Optional[IndexSet] = None,
) -> RegularElement:
    """Substitute `assignment` for the variables of `term`.

    The index set is taken from the term's arity or the assignment when not given.
    """
    if index is None:
        index = _infer_index(term, assignment)
        if index is None:
            raise ValueError("cannot infer the index set, please provide it")
    _check_term(term, index, "substituted term")

    builder = CoalgebraBuilder(index)

    def resolve(name: Hashable) -> int:
        if name not in assignment:
            raise ValueError(f"variable {name!r} is unbound in the substitution")
        return builder.graft(assignment[name])

    root = builder.new_state()
    _flatten(builder, term, root, resolve)
    return RegularElement(builder.finish(), root)


def _is_finite_tree(e: RegularElement) -> bool:
    trans = e.coalgebra.trans
    on_path = set()
    done = set()

    def visit(s) -> bool:
        if s in done:
            return True
        if s in on_path:
            return False
        on_path.add(s)
        shape = trans[s]
        ok = not isinstance(shape, TupleNode) or all(visit(c) for c in shape.children)
        on_path.discard(s)
        done.add(s)
        return ok

    return visit(e.root)


def sigma_embed(u: RegularElement) -> TermX:
    """Embed an element of U as a variable-free term.

    Acyclic parts are copied as nested terms, components lying on a cycle are carried as
    constants (a cyclic element such as 0 has no finite term tree).
    """
    if u.is_atom():
        return ATOM_TERM
    leaves = []
    for c in u.children():
        if _is_finite_tree(c):
            leaves.append(SubTerm(sigma_embed(c)))
        else:
            leaves.append(ConstLeaf(c))
    return TupleTerm(tuple(leaves))


class FiniteMap:
    """A map between finite subsets of U.

    Keys are minimized on construction and looked up up to bisimilarity. The codomain is
    always U, so maps are equal when they have the same domain and bisimilar values.
    """

    def __init__(self, graph: Union[Mapping, Iterable[Tuple]] = ()):
        items = graph.items() if isinstance(graph, Mapping) else graph
        self._graph: Dict[RegularElement, RegularElement] = {}
        for key, value in items:
            key = minimize(key)
            if key in self._graph and self._graph[key] != value:
                raise ValueError(
                    f"{key!r} is mapped to two distinct values, the graph is not a function"
                )
            self._graph[key] = value

    @classmethod
    def identity(cls, domain: Iterable[RegularElement]) -> "FiniteMap":
        return cls((x, x) for x in domain)

    @property
    def domain(self) -> FrozenSet[RegularElement]:
        return frozenset(self._graph)

    def image(self) -> FrozenSet[RegularElement]:
        return frozenset(self._graph.values())

    def items(self):
        return self._graph.items()

    def __call__(self, x: RegularElement) -> RegularElement:
        try:
            return self._graph[x]
        except KeyError:
            raise ValueError(f"{x!r} is outside the domain of the map") from None

    def __contains__(self, x: RegularElement) -> bool:
        return x in self._graph

    def __len__(self) -> int:
        return len(self._graph)

    def compose(self, other: "FiniteMap") -> "FiniteMap":
        """self o other"""
        missing = [y for y in other.image() if y not in self._graph]
        if missing:
            raise ValueError(
                f"cannot compose: {len(missing)} value(s) of the inner map lie outside "
                f"the domain of the outer map"
            )
        return FiniteMap((x, self._graph[y]) for x, y in other.items())

    def __matmul__(self, other: "FiniteMap") -> "FiniteMap":
        return self.compose(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMap):
            return NotImplemented
        return self._graph == other._graph

    def __repr__(self) -> str:
        return f"FiniteMap({len(self._graph)} points)"


def inl(a: RegularElement) -> RegularElement:
    """Left injection <0; a>."""
    return vpair_element(zero(a.index), a)


def inr(b: RegularElement) -> RegularElement:
    """Right injection <1; b>."""
    return vpair_element(atom(b.index), b)


def inl_map(domain: Iterable[RegularElement]) -> FiniteMap:
    return FiniteMap((a, inl(a)) for a in domain)


def inr_map(domain: Iterable[RegularElement]) -> FiniteMap:
    return FiniteMap((b, inr(b)) for b in domain)


def sum_object(a: Iterable[RegularElement], b: Iterable[RegularElement]) -> FrozenSet:
    """A +~ B as a set of elements."""
    return frozenset(inl(x) for x in a) | frozenset(inr(y) for y in b)


def _index_of(*maps: FiniteMap) -> Optional[int]:
    sizes = {x.index.size for m in maps for pair in m.items() for x in pair}
    if len(sizes) > 1:
        raise ValueError(
            f"maps over different index sets ({sorted(sizes)}) cannot be combined"
        )
    return sizes.pop() if sizes else None


def case_map(f: FiniteMap, g: FiniteMap) -> FiniteMap:
    """Case analysis [f, g] on A +~ B."""
    _index_of(f, g)
    graph = [(inl(a), fa) for a, fa in f.items()]
    graph.extend((inr(b), gb) for b, gb in g.items())
    return FiniteMap(graph)


def sum_map(j: FiniteMap, k: FiniteMap) -> FiniteMap:
    """j +~ k = [Inl o j, Inr o k]."""
    return case_map(inl_map(j.image()) @ j, inr_map(k.image()) @ k)
