"""Random generators for property checks, all driven by a numpy ``Generator``."""
from typing import Dict, Hashable, List, Optional, Sequence

import numpy as np

from .coalg import ATOM, IndexSet, QCoalgebra, RegularElement, TupleNode, atom, zero
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
)
from .functors import (
    Const,
    FamProd,
    FamSum,
    FamTuple,
    FCoalgebra,
    FunctorExpr,
    FValue,
    Inl,
    Inr,
    KConst,
    Pair,
    Point,
    Q,
    Slot,
    VProd,
    VSum,
)
from .hfs import HFSet, construct, stage_members
from .variant import Family

__all__ = [
    "random_hfset",
    "random_family",
    "random_element",
    "random_elements",
    "random_term",
    "random_system",
    "random_finite_map",
    "random_functor",
    "random_fvalue",
    "random_fcoalgebra",
]


def random_hfset(rng: np.random.Generator, stage: int = 5, density: float = 0.5) -> HFSet:
    """Random member of V_stage: each member of V_(stage-1) is kept with probability
    `density`."""
    if stage == 0:
        raise ValueError("V_0 is empty")
    pool = stage_members(stage - 1)
    keep = rng.random(len(pool)) < density
    return construct(x for x, k in zip(pool, keep) if k)


def random_family(
    rng: np.random.Generator, max_size: int = 3, stage: int = 3, density: float = 0.5
) -> Family:
    """Family with distinct random keys and values drawn from V_stage."""
    pool = stage_members(stage)
    size = int(rng.integers(0, max_size + 1))
    keys = rng.choice(len(pool), size=min(size, len(pool)), replace=False)
    return {pool[k]: random_hfset(rng, stage, density) for k in keys}


def random_element(
    rng: np.random.Generator, index: IndexSet, max_states: int = 4, p_atom: float = 0.3
) -> RegularElement:
    """Random pointed coalgebra with 1 to `max_states` states, rooted at state 0."""
    count = int(rng.integers(1, max_states + 1))
    trans = {}
    for s in range(count):
        if rng.random() < p_atom:
            trans[s] = ATOM
        else:
            trans[s] = TupleNode(tuple(int(c) for c in rng.integers(0, count, index.size)))
    return RegularElement(QCoalgebra(index, trans), 0)


def random_elements(
    rng: np.random.Generator, index: IndexSet, count: int, max_states: int = 3
) -> List[RegularElement]:
    """`count` pairwise distinct random elements."""
    result: List[RegularElement] = []
    seen = set()
    candidates = [atom(index), zero(index)]
    while len(result) < count:
        e = candidates.pop() if candidates else random_element(rng, index, max_states)
        if e not in seen:
            seen.add(e)
            result.append(e)
    rng.shuffle(result)
    return result


def _random_leaf(
    rng: np.random.Generator,
    index: IndexSet,
    variables: Sequence[Hashable],
    depth: int,
    constants: Sequence[RegularElement],
) -> Leaf:
    roll = rng.random()
    if roll < 0.45 and variables:
        return VarLeaf(variables[int(rng.integers(len(variables)))])
    if roll < 0.65 and constants:
        return ConstLeaf(constants[int(rng.integers(len(constants)))])
    if depth > 1:
        return SubTerm(random_term(rng, index, variables, depth - 1, constants))
    return SubTerm(ATOM_TERM)


def random_term(
    rng: np.random.Generator,
    index: IndexSet,
    variables: Sequence[Hashable],
    depth: int = 3,
    constants: Optional[Sequence[RegularElement]] = None,
) -> TermX:
    if constants is None:
        constants = [atom(index), zero(index)]
    if depth <= 0 or rng.random() < 0.15:
        return ATOM_TERM
    return TupleTerm(
        tuple(_random_leaf(rng, index, variables, depth, constants) for _ in range(index.size))
    )


def random_system(
    rng: np.random.Generator, index: IndexSet, max_vars: int = 5, depth: int = 3
) -> EquationSystem:
    count = int(rng.integers(1, max_vars + 1))
    variables = [f"x{i}" for i in range(count)]
    constants = [atom(index), zero(index), random_element(rng, index)]
    return EquationSystem(
        index, {x: random_term(rng, index, variables, depth, constants) for x in variables}
    )


def random_finite_map(
    rng: np.random.Generator,
    domain: Sequence[RegularElement],
    codomain: Sequence[RegularElement],
) -> FiniteMap:
    choices = rng.integers(0, len(codomain), len(domain)) if domain else []
    return FiniteMap((x, codomain[int(c)]) for x, c in zip(domain, choices))


def _random_constant_set(
    rng: np.random.Generator, constants: Sequence[RegularElement]
) -> List[RegularElement]:
    size = int(rng.integers(1, min(2, len(constants)) + 1))
    picks = rng.choice(len(constants), size=size, replace=False)
    return [constants[int(k)] for k in picks]


def random_functor(
    rng: np.random.Generator,
    index: IndexSet,
    depth: int = 3,
    constants: Optional[Sequence[RegularElement]] = None,
    guarded: bool = True,
) -> FunctorExpr:
    """Random functor expression with at most `depth` levels, leaves included.

    Constants and family tags are nonempty, so F(A) is nonempty whenever A is.
    """
    if constants is None:
        constants = [atom(index), zero(index)]

    if depth <= 1:
        functor: FunctorExpr = KConst(_random_constant_set(rng, constants))
        if rng.random() < 0.6:
            functor = Slot()
    else:
        kind = int(rng.integers(0, 6 if index.size >= 2 else 2))

        def sub() -> FunctorExpr:
            return random_functor(rng, index, depth - 1, constants, guarded=False)

        if kind == 0:
            functor = Q()
        elif kind == 1:
            positions = [i for i in range(index.size) if rng.random() < 0.7]
            functor = FamProd({i: sub() for i in positions})
        elif kind == 2:
            functor = VProd(sub(), sub())
        elif kind == 3:
            functor = VSum(sub(), sub())
        elif kind == 4:
            functor = FamSum({c: sub() for c in _random_constant_set(rng, constants)})
        else:
            functor = sub()

    if guarded and isinstance(functor, Slot):
        functor = VProd(KConst([atom(index)]), functor) if index.size >= 2 else Q()
    return functor


def random_fvalue(
    rng: np.random.Generator,
    functor: FunctorExpr,
    points: Sequence[Hashable],
    index: IndexSet,
) -> FValue:
    """Random value of shape F over abstract `points`."""
    if isinstance(functor, Slot):
        return Point(points[int(rng.integers(len(points)))])
    if isinstance(functor, KConst):
        values = sorted(functor.values, key=lambda e: repr(e.canonical_key))
        return Const(values[int(rng.integers(len(values)))])
    if isinstance(functor, Q):
        if rng.random() < 0.3:
            return Const(atom(index))
        return FamTuple(
            {i: random_fvalue(rng, Slot(), points, index) for i in range(index.size)}
        )
    if isinstance(functor, VProd):
        return Pair(
            random_fvalue(rng, functor.left, points, index),
            random_fvalue(rng, functor.right, points, index),
        )
    if isinstance(functor, VSum):
        if rng.random() < 0.5:
            return Inl(random_fvalue(rng, functor.left, points, index))
        return Inr(random_fvalue(rng, functor.right, points, index))
    if isinstance(functor, FamSum):
        tags = list(functor.family)
        x = tags[int(rng.integers(len(tags)))]
        return Pair(Const(x), random_fvalue(rng, functor.family[x], points, index))
    if isinstance(functor, FamProd):
        return FamTuple(
            {i: random_fvalue(rng, f, points, index) for i, f in functor.family.items()}
        )
    raise ValueError(f"unknown functor expression {functor!r}")


def random_fcoalgebra(
    rng: np.random.Generator, functor: FunctorExpr, index: IndexSet, max_points: int = 3
) -> FCoalgebra:
    count = int(rng.integers(1, max_points + 1))
    points = [f"p{i}" for i in range(count)]
    step: Dict[Hashable, FValue] = {
        p: random_fvalue(rng, functor, points, index) for p in points
    }
    return FCoalgebra(index, step)
