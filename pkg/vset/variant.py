"""Variant pairs, functions and the derived variant operators on concrete finite sets."""
import itertools
from typing import Mapping, Sequence

from .hfs import HFSet, ONE, ZERO, big_union, construct, image, kpair, std_product, std_tuple
from .utils import MAX_SPACE_CELLS, LimitError

__all__ = [
    "Family",
    "vpair",
    "vlambda",
    "vapply",
    "vfunspace",
    "vproduct",
    "vsum",
    "famsum",
    "famprod",
    "vstream",
    "stream_tuples",
    "stream_iterate",
]

# A-indexed family {b_x}; keys are compared as sets since HFSet equality is set equality
Family = Mapping[HFSet, HFSet]

_TAG_0 = construct([ZERO])
_TAG_1 = construct([ONE])


def vpair(a: HFSet, b: HFSet) -> HFSet:
    """Variant pair <a; b> = ({0} x a) u ({1} x b)."""
    return std_product(_TAG_0, a) | std_product(_TAG_1, b)


def vlambda(fam: Family) -> HFSet:
    """Variant function: the union of {x} x b_x over the family."""
    return construct(kpair(x, y) for x, b in fam.items() for y in b)


def vapply(f: HFSet, x: HFSet) -> HFSet:
    """Apply a variant function. Arguments outside the domain yield 0."""
    return image(f, construct([x]))


def _check_space(cells: int, what: str) -> None:
    if cells > MAX_SPACE_CELLS:
        raise LimitError(
            f"{what} would enumerate subsets of {cells} pairs (limit is {MAX_SPACE_CELLS})"
        )


def vfunspace(a: HFSet, b: HFSet) -> HFSet:
    """Variant function space A ~> B = {f <= A x U(B) | f``{x} in B for all x in A}.

    A member f is determined by its images at the points of A, and f = vlambda of those
    images, so the space is enumerated as one choice from B per point of A.
    """
    _check_space(len(a) * len(big_union(b)), "variant function space")
    return construct(
        vlambda(dict(zip(a, choice))) for choice in itertools.product(b, repeat=len(a))
    )


def vproduct(a: HFSet, b: HFSet) -> HFSet:
    return construct(vpair(x, y) for x in a for y in b)


def vsum(a: HFSet, b: HFSet) -> HFSet:
    """Variant disjoint sum ({0} x~ A) u ({1} x~ B)."""
    return vproduct(construct([ZERO]), a) | vproduct(construct([ONE]), b)


def famsum(fam: Family) -> HFSet:
    return construct(vpair(x, y) for x, bx in fam.items() for y in bx)


def famprod(fam: Family) -> HFSet:
    """Variant product of a family, one choice from B_x per index x.

    The graph bound is A x U(U_x B_x), which makes the product over a constant family equal
    to the variant function space.
    """
    keys = list(fam.keys())
    cells = len(keys) * len(big_union(construct(y for bx in fam.values() for y in bx)))
    _check_space(cells, "variant family product")
    return construct(
        vlambda(dict(zip(keys, choice)))
        for choice in itertools.product(*(fam[k] for k in keys))
    )


def vstream(heads: Sequence[HFSet]) -> HFSet:
    """Finite variant stream <A_0; A_1; ...; A_{m-1}; 0>."""
    result = ZERO
    for head in reversed(heads):
        result = vpair(head, result)
    return result


def stream_tuples(heads: Sequence[HFSet]) -> HFSet:
    """Standard tuples <1, ..., 1, 0, x> with j leading ones and x in A_j."""
    return construct(
        std_tuple(*([ONE] * j), ZERO, x) for j, head in enumerate(heads) for x in head
    )


def stream_iterate(a: HFSet, n: int) -> HFSet:
    """n-th iterate of z -> <A; z> starting from 0."""
    return vstream([a] * n)

