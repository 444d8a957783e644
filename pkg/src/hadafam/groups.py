"""Exact arithmetic in the integral group ring of a finite abelian group.

A group is a direct product of cyclic factors Z_{n_1} x ... x Z_{n_r}.
Elements are indexed 0..order-1 through the mixed-radix bijection with the
first factor most significant; index 0 is the identity.  Group-ring values
are dense int64 coefficient vectors and every operation is exact; convolution
is the naive O(|G| * |support|) loop on purpose (no FFT), routed through the
kernels in ``_kernels``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import (
    CoefficientOverflow,
    FactorOutOfRange,
    GroupMismatch,
    IdentityInStarComplement,
)

# convolution inputs are rejected beyond this; keeps int64 accumulation exact
_SAFE_LIMIT = float(2**62)


def make_group(factors: Sequence[int]) -> "GroupSpec":
    """Build the direct product of cyclic groups with the given orders."""
    return GroupSpec(tuple(int(f) for f in factors))


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group Z_{n_1} x ... x Z_{n_r} with fixed element order."""

    factors: tuple[int, ...]

    def __post_init__(self):
        for f in self.factors:
            if f < 2:
                raise FactorOutOfRange(f"factor {f} < 2")

    @cached_property
    def order(self) -> int:
        return math.prod(self.factors)

    @cached_property
    def strides(self) -> np.ndarray:
        s = np.ones(len(self.factors), dtype=np.int64)
        for j in range(len(self.factors) - 2, -1, -1):
            s[j] = s[j + 1] * self.factors[j + 1]
        return _frozen(s)

    @cached_property
    def factor_array(self) -> np.ndarray:
        return _frozen(np.array(self.factors, dtype=np.int64))

    @cached_property
    def residue_table(self) -> np.ndarray:
        """Row i holds the residue vector of element i."""
        idx = np.arange(self.order, dtype=np.int64)
        cols = [(idx // int(self.strides[j])) % f for j, f in enumerate(self.factors)]
        return _frozen(np.stack(cols, axis=1) if cols else np.zeros((1, 0), np.int64))

    @cached_property
    def negation(self) -> np.ndarray:
        """Permutation sending each element index to the index of its inverse."""
        neg = (-self.residue_table) % self.factor_array
        return _frozen(neg @ self.strides)

    def index(self, residues: Sequence[int]) -> int:
        if len(residues) != len(self.factors):
            raise ValueError("residue vector length mismatch")
        return int(
            sum((int(r) % f) * int(s) for r, f, s in zip(residues, self.factors, self.strides))
        )

    def residues_of(self, index: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.residue_table[index])

    def neg(self, index: int) -> int:
        return int(self.negation[index])

    def add(self, i: int, j: int) -> int:
        r = (self.residue_table[i] + self.residue_table[j]) % self.factor_array
        return int(r @ self.strides)

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self):
        return f"GroupSpec{self.factors}"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def direct_product(g: GroupSpec, h: GroupSpec) -> GroupSpec:
    """Product group; index of (x, y) is x * h.order + y."""
    return GroupSpec(g.factors + h.factors)


class GroupRingElement:
    """Integer-valued function on a group, i.e. an element of Z[G]."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: GroupSpec, coeffs):
        arr = np.asarray(coeffs, dtype=np.int64)
        if arr.shape != (group.order,):
            raise ValueError("coefficient vector length must equal the group order")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "coeffs", _frozen(arr.copy()))

    def __setattr__(self, name, value):
        raise AttributeError("GroupRingElement is immutable")

    def __getitem__(self, index: int) -> int:
        return int(self.coeffs[index])

    def __add__(self, other):
        _same_group(self, other)
        return GroupRingElement(self.group, self.coeffs + other.coeffs)

    def __sub__(self, other):
        _same_group(self, other)
        return GroupRingElement(self.group, self.coeffs - other.coeffs)

    def __neg__(self):
        return GroupRingElement(self.group, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            return convolve(self, other)
        return GroupRingElement(self.group, self.coeffs * int(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 1:
            raise ValueError("only positive powers")
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingElement)
            and self.group == other.group
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.group, self.coeffs.tobytes()))

    def involution(self) -> "GroupRingElement":
        """Coefficients pulled back along x -> -x."""
        return GroupRingElement(self.group, self.coeffs[self.group.negation])

    def support(self) -> np.ndarray:
        return np.nonzero(self.coeffs)[0]

    def __repr__(self):
        terms = [f"{int(c)}*[{i}]" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


def _same_group(a, b):
    if a.group != b.group:
        raise GroupMismatch(f"{a.group} vs {b.group}")


def convolve(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    """Exact group-ring product: (a*b)[z] = sum over x+y=z of a[x]b[y]."""
    _same_group(a, b)
    g = a.group
    amax = float(np.abs(a.coeffs).max(initial=0))
    bmax = float(np.abs(b.coeffs).max(initial=0))
    if amax * bmax * g.order >= _SAFE_LIMIT:
        raise CoefficientOverflow(
            f"coefficient bound {amax * bmax * g.order:.3g} exceeds the exact int64 range"
        )
    x, y = a.coeffs, b.coeffs
    if len(a.support()) > len(b.support()):
        x, y = y, x  # iterate the sparser operand
    out = _kernels.convolve(x, y, g.residue_table, g.factor_array, g.strides)
    return GroupRingElement(g, out)


def involution(a: GroupRingElement) -> GroupRingElement:
    return a.involution()


def match_lambda_form(a: GroupRingElement):
    """Recognize a == lam*G + mu*0_G; return (lam, mu) or None."""
    c = a.coeffs
    if c.shape[0] == 1:
        return int(c[0]), 0
    lam = int(c[1])
    if not np.all(c[1:] == lam):
        return None
    return lam, int(c[0]) - lam


def ones(group: GroupSpec) -> GroupRingElement:
    """The full group G as a group-ring element (all coefficients 1)."""
    return GroupRingElement(group, np.ones(group.order, np.int64))


def star(group: GroupSpec) -> GroupRingElement:
    """G* = G minus the identity, as a group-ring element."""
    c = np.ones(group.order, np.int64)
    c[0] = 0
    return GroupRingElement(group, c)


def delta0(group: GroupSpec, scale: int = 1) -> GroupRingElement:
    """scale * 0_G."""
    c = np.zeros(group.order, np.int64)
    c[0] = scale
    return GroupRingElement(group, c)


class SubsetOfGroup:
    """A subset of a group, stored as sorted element indices."""

    __slots__ = ("group", "members")

    def __init__(self, group: GroupSpec, members: Iterable[int]):
        arr = np.unique(np.asarray(list(members), dtype=np.int64))
        if arr.size and (arr[0] < 0 or arr[-1] >= group.order):
            raise ValueError("member index out of range")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "members", _frozen(arr))

    def __setattr__(self, name, value):
        raise AttributeError("SubsetOfGroup is immutable")

    @classmethod
    def from_residues(cls, group: GroupSpec, residue_vectors) -> "SubsetOfGroup":
        return cls(group, [group.index(r) for r in residue_vectors])

    def __len__(self):
        return int(self.members.size)

    def __iter__(self):
        return iter(int(i) for i in self.members)

    def __contains__(self, index: int):
        pos = np.searchsorted(self.members, index)
        return pos < self.members.size and self.members[pos] == index

    def __eq__(self, other):
        return (
            isinstance(other, SubsetOfGroup)
            and self.group == other.group
            and np.array_equal(self.members, other.members)
        )

    def __hash__(self):
        return hash((self.group, self.members.tobytes()))

    def __repr__(self):
        return f"SubsetOfGroup({self.group}, {list(self.members)})"

    def to_ring(self) -> GroupRingElement:
        c = np.zeros(self.group.order, np.int64)
        c[self.members] = 1
        return GroupRingElement(self.group, c)

    def negated(self) -> "SubsetOfGroup":
        return SubsetOfGroup(self.group, self.group.negation[self.members])

    def is_symmetric(self) -> bool:
        """True when the subset is fixed by negation."""
        return np.array_equal(self.members, np.sort(self.group.negation[self.members]))

    def complement(self, star: bool = False) -> "SubsetOfGroup":
        """Complement in G, or in G* when ``star`` is set.

        The star complement is only defined for subsets of G*.
        """
        if star and 0 in self:
            raise IdentityInStarComplement("subset contains the identity")
        mask = np.ones(self.group.order, dtype=bool)
        mask[self.members] = False
        if star:
            mask[0] = False
        return SubsetOfGroup(self.group, np.nonzero(mask)[0])

    def union(self, other: "SubsetOfGroup") -> "SubsetOfGroup":
        _same_group(self, other)
        return SubsetOfGroup(self.group, np.union1d(self.members, other.members))

    def intersection(self, other: "SubsetOfGroup") -> "SubsetOfGroup":
        _same_group(self, other)
        return SubsetOfGroup(self.group, np.intersect1d(self.members, other.members))


def is_symmetric(s: SubsetOfGroup) -> bool:
    return s.is_symmetric()


def complement(s: SubsetOfGroup, star: bool = False) -> SubsetOfGroup:
    return s.complement(star=star)


def cross(a: SubsetOfGroup, b: SubsetOfGroup) -> SubsetOfGroup:
    """Cartesian product subset inside direct_product(a.group, b.group)."""
    pg = direct_product(a.group, b.group)
    idx = (a.members[:, None] * b.group.order + b.members[None, :]).ravel()
    return SubsetOfGroup(pg, idx)
