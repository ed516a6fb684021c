"""Functor expressions on Set_U, their translations into terms, and final coalgebras.

A functor is built from constants, the identity (:class:`Slot`), variant products and sums,
family sums and products over the index set, and Q itself. Values of F(A) are elements of
U, so each functor decomposes its own values structurally:

- ``KConst(C)``: the constant itself,
- ``VProd(F, G)``: a variant pair ``<x; y>``,
- ``VSum(F, G)``: ``<0; x>`` (left) or ``<1; y>`` (right),
- ``FamSum(C, F_x)``: ``<x; y>`` with ``x`` in ``C``,
- ``FamProd(C, F_i)``: a tuple with components ``i`` in ``C``, empty elsewhere,
- ``Q()``: the atom or a tuple of points.

A functor is *guarded* when it is not the bare identity. Guarded functors have a
translation phi_A mapping F(A) to terms with variables in A such that F(h) = h^ o phi_A,
which is what :func:`finalize` needs to turn an F-coalgebra into a system of equations.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional
from typing import Tuple, Union

from .coalg import (
    IndexSet,
    RegularElement,
    atom,
    q_apply,
    tuple_element,
    vpair_element,
    zero,
)
from .eqsolve import (
    ATOM_TERM,
    ConstLeaf,
    EquationSystem,
    FiniteMap,
    Leaf,
    SubTerm,
    TermX,
    TupleTerm,
    VarLeaf,
    inl,
    inr,
    sigma_embed,
    solve,
    subst,
)
from .utils import MAX_OBJECT_SIZE, LimitError

__all__ = [
    "FunctorExpr",
    "KConst",
    "Slot",
    "VProd",
    "VSum",
    "FamSum",
    "FamProd",
    "Q",
    "NonUniformFunctorError",
    "is_guarded",
    "apply_obj",
    "apply_map",
    "map_point",
    "translate",
    "translate_point",
    "UniformReport",
    "uniform_check",
    "FValue",
    "Point",
    "Const",
    "Pair",
    "Inl",
    "Inr",
    "FamTuple",
    "FCoalgebra",
    "evaluate",
    "finalize",
    "post_fixpoint_check",
]


class NonUniformFunctorError(ValueError):
    """The bare identity functor has no translation: with A = {1}, the maps h1(1) = 1 and
    h2(1) = <1; 1> would require a single term to denote both an atom and a pair."""

    def __init__(self, msg: str = "the identity functor is not uniform on maps"):
        super().__init__(msg)


class FunctorExpr:
    """Base class of functor expressions."""

    def constants(self) -> Iterable[RegularElement]:
        return ()

    def subfunctors(self) -> Iterable["FunctorExpr"]:
        return ()


@dataclass(frozen=True)
class KConst(FunctorExpr):
    values: FrozenSet[RegularElement]

    def __init__(self, values: Iterable[RegularElement]):
        object.__setattr__(self, "values", frozenset(values))

    def constants(self):
        return self.values

    def __str__(self):
        return f"K[{len(self.values)}]"


@dataclass(frozen=True)
class Slot(FunctorExpr):
    def __str__(self):
        return "Id"


@dataclass(frozen=True)
class VProd(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr

    def subfunctors(self):
        return self.left, self.right

    def __str__(self):
        return f"({self.left} x~ {self.right})"


@dataclass(frozen=True)
class VSum(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr

    def subfunctors(self):
        return self.left, self.right

    def __str__(self):
        return f"({self.left} +~ {self.right})"


@dataclass(frozen=True, eq=False)
class FamSum(FunctorExpr):
    """Sum of F_x over constant tags x in C."""

    family: Mapping[RegularElement, FunctorExpr] = field(default_factory=dict)

    def constants(self):
        return self.family.keys()

    def subfunctors(self):
        return self.family.values()

    def __str__(self):
        return "Sum(" + ", ".join(str(f) for f in self.family.values()) + ")"


@dataclass(frozen=True, eq=False)
class FamProd(FunctorExpr):
    """Product of F_i over positions i of a subset C of the index set."""

    family: Mapping[int, FunctorExpr] = field(default_factory=dict)

    def subfunctors(self):
        return self.family.values()

    def __str__(self):
        return "Prod(" + ", ".join(f"{i}: {f}" for i, f in sorted(self.family.items())) + ")"


@dataclass(frozen=True)
class Q(FunctorExpr):
    """Q itself: A -> {1} u (I ~> A)."""

    def __str__(self):
        return "Q"


def is_guarded(functor: FunctorExpr) -> bool:
    return not isinstance(functor, Slot)


def _walk(functor: FunctorExpr) -> Iterable[FunctorExpr]:
    yield functor
    for sub in functor.subfunctors():
        yield from _walk(sub)


def _check_functor(functor: FunctorExpr, index: IndexSet) -> None:
    for f in _walk(functor):
        if isinstance(f, (VProd, VSum, FamSum)):
            index.require_pairs()
        if isinstance(f, FamProd):
            outside = [i for i in f.family if not 0 <= i < index.size]
            if outside:
                raise ValueError(f"product positions {outside} are not in the index set")
        for c in f.constants():
            if c.index.size != index.size:
                raise ValueError(
                    f"constant over an index set of size {c.index.size} in a functor over "
                    f"an index set of size {index.size}"
                )


def _infer_index(
    functor: FunctorExpr, points: Iterable[RegularElement], index: Optional[IndexSet]
) -> IndexSet:
    if index is None:
        for x in itertools.chain(points, *(f.constants() for f in _walk(functor))):
            index = x.index
            break
        else:
            raise ValueError("cannot infer the index set, please provide it")
    _check_functor(functor, index)
    return index


def _pad(index: IndexSet, leaves: List) -> Tuple:
    return tuple(leaves) + (ConstLeaf(zero(index)),) * (index.size - len(leaves))


def _check_size(count: int, functor: FunctorExpr) -> None:
    if count > MAX_OBJECT_SIZE:
        raise LimitError(
            f"{functor} would have {count} members (limit is {MAX_OBJECT_SIZE})"
        )


def _apply_obj(
    functor: FunctorExpr, points: FrozenSet[RegularElement], index: IndexSet
) -> FrozenSet[RegularElement]:
    if isinstance(functor, KConst):
        return functor.values
    if isinstance(functor, Slot):
        return points
    if isinstance(functor, Q):
        return q_apply(index, points)
    if isinstance(functor, VProd):
        left = _apply_obj(functor.left, points, index)
        right = _apply_obj(functor.right, points, index)
        _check_size(len(left) * len(right), functor)
        return frozenset(vpair_element(x, y) for x in left for y in right)
    if isinstance(functor, VSum):
        left = _apply_obj(functor.left, points, index)
        right = _apply_obj(functor.right, points, index)
        _check_size(len(left) + len(right), functor)
        return frozenset(inl(x) for x in left) | frozenset(inr(y) for y in right)
    if isinstance(functor, FamSum):
        parts = {x: _apply_obj(f, points, index) for x, f in functor.family.items()}
        _check_size(sum(len(p) for p in parts.values()), functor)
        return frozenset(vpair_element(x, y) for x, part in parts.items() for y in part)
    if isinstance(functor, FamProd):
        positions = sorted(functor.family)
        parts = [list(_apply_obj(functor.family[i], points, index)) for i in positions]
        _check_size(math.prod(len(p) for p in parts), functor)
        empty = zero(index)
        result = set()
        for choice in itertools.product(*parts):
            children = [empty] * index.size
            for i, c in zip(positions, choice):
                children[i] = c
            result.add(tuple_element(index, children))
        return frozenset(result)
    raise ValueError(f"unknown functor expression {functor!r}")


def apply_obj(
    functor: FunctorExpr,
    points: Iterable[RegularElement],
    index: Optional[IndexSet] = None,
) -> FrozenSet[RegularElement]:
    """Object action F(A) on a finite set of elements.

    Raises:
        LimitError: if F(A) has more than :data:`MAX_OBJECT_SIZE` members
    """
    points = frozenset(points)
    index = _infer_index(functor, points, index)
    return _apply_obj(functor, points, index)


def _tag_is_left(b: RegularElement) -> bool:
    tag = b.child(0)
    if tag == zero(b.index):
        return True
    if tag == atom(b.index):
        return False
    raise ValueError(f"{b!r} is not a tagged value of a variant sum")


def map_point(
    functor: FunctorExpr, h: Callable[[RegularElement], RegularElement], b: RegularElement
) -> RegularElement:
    """F(h)(b) for a single value b of F(A)."""
    index = b.index
    if isinstance(functor, KConst):
        return b
    if isinstance(functor, Slot):
        return h(b)
    if isinstance(functor, Q):
        if b.is_atom():
            return b
        return tuple_element(index, [h(c) for c in b.children()])
    if b.is_atom():
        raise ValueError(f"{b!r} is not a value of {functor}")
    if isinstance(functor, VProd):
        return vpair_element(
            map_point(functor.left, h, b.child(0)), map_point(functor.right, h, b.child(1))
        )
    if isinstance(functor, VSum):
        if _tag_is_left(b):
            return inl(map_point(functor.left, h, b.child(1)))
        return inr(map_point(functor.right, h, b.child(1)))
    if isinstance(functor, FamSum):
        x = b.child(0)
        if x not in functor.family:
            raise ValueError(f"{x!r} is not a tag of {functor}")
        return vpair_element(x, map_point(functor.family[x], h, b.child(1)))
    if isinstance(functor, FamProd):
        children = [zero(index)] * index.size
        for i, f in functor.family.items():
            children[i] = map_point(f, h, b.child(i))
        return tuple_element(index, children)
    raise ValueError(f"unknown functor expression {functor!r}")


def apply_map(
    functor: FunctorExpr, h: FiniteMap, index: Optional[IndexSet] = None
) -> FiniteMap:
    """Map action F(h) : F(A) -> F(C), where A is the domain of `h`."""
    domain = apply_obj(functor, h.domain, index)
    return FiniteMap((b, map_point(functor, h, b)) for b in domain)


def _leaf(functor: FunctorExpr, v: RegularElement) -> Leaf:
    if isinstance(functor, Slot):
        return VarLeaf(v)
    if isinstance(functor, KConst):
        return ConstLeaf(v)
    return SubTerm(translate_point(functor, v))


def translate_point(functor: FunctorExpr, b: RegularElement) -> TermX:
    """phi_A(b): a term with variables in A such that h^(phi_A(b)) = F(h)(b)."""
    index = b.index
    if isinstance(functor, Slot):
        raise NonUniformFunctorError()
    if isinstance(functor, KConst):
        return sigma_embed(b)
    if isinstance(functor, Q):
        if b.is_atom():
            return ATOM_TERM
        return TupleTerm(tuple(VarLeaf(c) for c in b.children()))
    if isinstance(functor, VProd):
        leaves = [_leaf(functor.left, b.child(0)), _leaf(functor.right, b.child(1))]
        return TupleTerm(_pad(index, leaves))
    if isinstance(functor, VSum):
        if _tag_is_left(b):
            leaves = [ConstLeaf(zero(index)), _leaf(functor.left, b.child(1))]
        else:
            leaves = [ConstLeaf(atom(index)), _leaf(functor.right, b.child(1))]
        return TupleTerm(_pad(index, leaves))
    if isinstance(functor, FamSum):
        x = b.child(0)
        if x not in functor.family:
            raise ValueError(f"{x!r} is not a tag of {functor}")
        return TupleTerm(_pad(index, [ConstLeaf(x), _leaf(functor.family[x], b.child(1))]))
    if isinstance(functor, FamProd):
        leaves = [ConstLeaf(zero(index))] * index.size
        for i, f in functor.family.items():
            leaves[i] = _leaf(f, b.child(i))
        return TupleTerm(tuple(leaves))
    raise ValueError(f"unknown functor expression {functor!r}")


def translate(
    functor: FunctorExpr,
    points: Iterable[RegularElement],
    index: Optional[IndexSet] = None,
) -> Dict[RegularElement, TermX]:
    """The translation phi_A : F(A) -> U_A of a guarded functor.

    Raises:
        NonUniformFunctorError: if `functor` is the bare identity
    """
    if not is_guarded(functor):
        raise NonUniformFunctorError()
    return {b: translate_point(functor, b) for b in apply_obj(functor, points, index)}


@dataclass(frozen=True)
class UniformReport:
    """Outcome of :func:`uniform_check`. On failure, `point` is a value of F(A) for which
    no translation satisfies every supplied map, and `map_index` the first map it fails."""

    uniform: bool
    point: Optional[RegularElement] = None
    map_index: Optional[int] = None

    def __bool__(self) -> bool:
        return self.uniform


def _candidate_terms(points: Iterable[RegularElement], index: IndexSet) -> List[TermX]:
    leaves: List[Leaf] = [VarLeaf(a) for a in points]
    leaves.extend([ConstLeaf(atom(index)), ConstLeaf(zero(index))])
    candidates: List[TermX] = [ATOM_TERM]
    candidates.extend(TupleTerm(t) for t in itertools.product(leaves, repeat=index.size))
    return candidates


def uniform_check(
    functor: FunctorExpr,
    points: Iterable[RegularElement],
    maps: Iterable[FiniteMap],
    index: Optional[IndexSet] = None,
) -> UniformReport:
    """Check F(h)(b) = h^(phi_A(b)) for every b in F(A) and every supplied h.

    Guarded functors are checked against their own translation. For the bare identity no
    translation exists, so all atom and depth-one tuple terms are searched for one that
    works for every map; the check fails at the first point with no such term.
    """
    points = frozenset(points)
    maps = list(maps)
    index = _infer_index(functor, points, index)
    for k, h in enumerate(maps):
        if not points <= h.domain:
            raise ValueError(f"map {k} is not defined on every point of A")
    assignments = [dict(h.items()) for h in maps]

    if is_guarded(functor):
        for b, term in translate(functor, points, index).items():
            for k, (h, assignment) in enumerate(zip(maps, assignments)):
                if map_point(functor, h, b) != subst(assignment, term, index):
                    logging.info(f"uniform_check: {functor} fails at map {k}")
                    return UniformReport(False, b, k)
        return UniformReport(True)

    candidates = _candidate_terms(points, index)
    for b in _apply_obj(functor, points, index):
        for term in candidates:
            if all(
                h(b) == subst(assignment, term, index)
                for h, assignment in zip(maps, assignments)
            ):
                break
        else:
            logging.info(f"uniform_check: no term of depth at most one translates {b!r}")
            return UniformReport(False, b)
    return UniformReport(True)


@dataclass(frozen=True)
class Point:
    name: Hashable


@dataclass(frozen=True)
class Const:
    element: RegularElement


@dataclass(frozen=True)
class Pair:
    left: "FValue"
    right: "FValue"


@dataclass(frozen=True)
class Inl:
    value: "FValue"


@dataclass(frozen=True)
class Inr:
    value: "FValue"


@dataclass(frozen=True, eq=False)
class FamTuple:
    components: Mapping[int, "FValue"]


FValue = Union[Point, Const, Pair, Inl, Inr, FamTuple]


@dataclass(frozen=True, eq=False)
class FCoalgebra:
    """An F-coalgebra over abstract points: `step` maps each point to a value of F(points)."""

    index: IndexSet
    step: Mapping[Hashable, FValue]

    @property
    def carrier(self) -> Tuple[Hashable, ...]:
        return tuple(self.step)


def _shape_error(functor: FunctorExpr, value: FValue) -> ValueError:
    return ValueError(f"{value!r} is not a value of {functor}")


def _value_leaf(functor: FunctorExpr, value: FValue, index: IndexSet) -> Leaf:
    if isinstance(functor, Slot):
        if not isinstance(value, Point):
            raise _shape_error(functor, value)
        return VarLeaf(value.name)
    if isinstance(functor, KConst):
        if not isinstance(value, Const) or value.element not in functor.values:
            raise _shape_error(functor, value)
        return ConstLeaf(value.element)
    return SubTerm(_value_term(functor, value, index))


def _value_term(functor: FunctorExpr, value: FValue, index: IndexSet) -> TermX:
    """phi_A o f at one point, with the coalgebra's points as variables."""
    empty = ConstLeaf(zero(index))
    if isinstance(functor, KConst):
        if not isinstance(value, Const) or value.element not in functor.values:
            raise _shape_error(functor, value)
        return sigma_embed(value.element)
    if isinstance(functor, Q):
        if isinstance(value, Const) and value.element == atom(index):
            return ATOM_TERM
        if isinstance(value, FamTuple) and set(value.components) == set(range(index.size)):
            return TupleTerm(
                tuple(
                    _value_leaf(Slot(), value.components[i], index)
                    for i in range(index.size)
                )
            )
        raise _shape_error(functor, value)
    if isinstance(functor, VProd) and isinstance(value, Pair):
        leaves = [
            _value_leaf(functor.left, value.left, index),
            _value_leaf(functor.right, value.right, index),
        ]
        return TupleTerm(_pad(index, leaves))
    if isinstance(functor, VSum) and isinstance(value, Inl):
        leaves = [empty, _value_leaf(functor.left, value.value, index)]
        return TupleTerm(_pad(index, leaves))
    if isinstance(functor, VSum) and isinstance(value, Inr):
        leaves = [ConstLeaf(atom(index)), _value_leaf(functor.right, value.value, index)]
        return TupleTerm(_pad(index, leaves))
    if isinstance(functor, FamSum) and isinstance(value, Pair):
        if not isinstance(value.left, Const) or value.left.element not in functor.family:
            raise _shape_error(functor, value)
        x = value.left.element
        leaves = [ConstLeaf(x), _value_leaf(functor.family[x], value.right, index)]
        return TupleTerm(_pad(index, leaves))
    if isinstance(functor, FamProd) and isinstance(value, FamTuple):
        if set(value.components) != set(functor.family):
            raise _shape_error(functor, value)
        leaves = [empty] * index.size
        for i, f in functor.family.items():
            leaves[i] = _value_leaf(f, value.components[i], index)
        return TupleTerm(tuple(leaves))
    if isinstance(functor, Slot):
        raise NonUniformFunctorError()
    raise _shape_error(functor, value)


def evaluate(
    functor: FunctorExpr,
    value: FValue,
    h: Union[Mapping[Hashable, RegularElement], Callable[[Hashable], RegularElement]],
    index: IndexSet,
) -> RegularElement:
    """F(h)(value), where `h` sends the points of the carrier to elements of U."""
    lookup = h.__getitem__ if isinstance(h, Mapping) else h
    if isinstance(functor, Slot):
        if not isinstance(value, Point):
            raise _shape_error(functor, value)
        return lookup(value.name)
    if isinstance(functor, KConst):
        if not isinstance(value, Const) or value.element not in functor.values:
            raise _shape_error(functor, value)
        return value.element
    if isinstance(functor, Q):
        if isinstance(value, Const) and value.element == atom(index):
            return value.element
        if isinstance(value, FamTuple) and set(value.components) == set(range(index.size)):
            return tuple_element(
                index,
                [evaluate(Slot(), value.components[i], h, index) for i in range(index.size)],
            )
        raise _shape_error(functor, value)
    if isinstance(functor, VProd) and isinstance(value, Pair):
        return vpair_element(
            evaluate(functor.left, value.left, h, index),
            evaluate(functor.right, value.right, h, index),
        )
    if isinstance(functor, VSum) and isinstance(value, Inl):
        return inl(evaluate(functor.left, value.value, h, index))
    if isinstance(functor, VSum) and isinstance(value, Inr):
        return inr(evaluate(functor.right, value.value, h, index))
    if isinstance(functor, FamSum) and isinstance(value, Pair):
        if not isinstance(value.left, Const) or value.left.element not in functor.family:
            raise _shape_error(functor, value)
        x = value.left.element
        return vpair_element(x, evaluate(functor.family[x], value.right, h, index))
    if isinstance(functor, FamProd) and isinstance(value, FamTuple):
        if set(value.components) != set(functor.family):
            raise _shape_error(functor, value)
        children = [zero(index)] * index.size
        for i, f in functor.family.items():
            children[i] = evaluate(f, value.components[i], h, index)
        return tuple_element(index, children)
    raise _shape_error(functor, value)


def finalize(functor: FunctorExpr, coalgebra: FCoalgebra) -> Dict[Hashable, RegularElement]:
    """The unique map h from an F-coalgebra into U with h = F(h) o step.

    The system x = phi(step(x)) is solved for the points x of the carrier.

    Raises:
        NonUniformFunctorError: if `functor` is the bare identity
    """
    if not is_guarded(functor):
        raise NonUniformFunctorError()
    index = coalgebra.index
    _check_functor(functor, index)
    system = EquationSystem(
        index, {p: _value_term(functor, v, index) for p, v in coalgebra.step.items()}
    )
    return solve(system)


def post_fixpoint_check(
    functor: FunctorExpr,
    z: Iterable[RegularElement],
    index: Optional[IndexSet] = None,
) -> bool:
    """True iff Z <= F(Z), which certifies Z <= J_F."""
    members = frozenset(z)
    if not members:
        return True
    image = apply_obj(functor, members, index)
    return members <= image
