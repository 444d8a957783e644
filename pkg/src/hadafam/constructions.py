"""Constructive routes to difference families: cyclotomic four-block families
over GF(q^2), quadratic-residue (Paley) families, the four product
constructions into G x Z2 / Z3 / Z5 / G', the building-family bridge,
blockwise complementation, and the square-order recursion.

Every constructor re-verifies its output with verify_family before returning
and raises PostVerifyFailed on any mismatch, so a transcription bug can never
escape as a wrong object.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParameter,
    CoefficientOutOfRange,
    PostVerifyFailed,
    PreconditionFailed,
    ZeroInF,
)
from .families import (
    KIND_H,
    KIND_H2,
    KIND_H4,
    KIND_H8,
    BuildingFamily,
    DifferenceFamily,
    EPair,
    blocks_from_building,
    check_building,
    check_conditions,
    check_spread,
    extract_e_pair,
    verify_family,
)
from .gf import cyclotomic_class, factorize, make_field
from .groups import SubsetOfGroup, cross, direct_product, make_group

# block-position masks on Z5 used by the five-fold product
I0 = (1, 2)
I1 = (3, 4)
I2 = (2, 4)
I3 = (1, 3)


def _union_disjoint(*subsets: SubsetOfGroup) -> SubsetOfGroup:
    """Union that insists its parts are pairwise disjoint."""
    merged = np.concatenate([s.members for s in subsets])
    if np.unique(merged).size != merged.size:
        raise PostVerifyFailed("union parts overlap; construction transcription bug")
    return SubsetOfGroup(subsets[0].group, merged)


def _require(family: DifferenceFamily, *, kind=None, symmetric=False, conditions=()):
    if kind is not None and kind not in family.kinds:
        raise PreconditionFailed("kind", f"family is not of type {kind}")
    if symmetric and not family.is_symmetric():
        raise PreconditionFailed("symmetric", "family is not symmetric")
    if conditions:
        report = check_conditions(family, conditions)
        for name in conditions:
            if not report.holds(name):
                raise PreconditionFailed(name, f"condition {name} fails")


def _post_verify(group, blocks, kind, expect_lam=None) -> DifferenceFamily:
    fam = verify_family(group, blocks)
    if kind not in fam.kinds:
        raise PostVerifyFailed(f"output is not of type {kind}: {fam}")
    if expect_lam is not None and fam.lam != expect_lam:
        raise PostVerifyFailed(f"output lambda {fam.lam} != expected {expect_lam}")
    return fam


# -- cyclotomic families over GF(q^2) ----------------------------------------


def cyclotomic_type_h(q: int) -> tuple[DifferenceFamily, EPair]:
    """Symmetric four-block family of type H in the additive group of
    GF(q^2), for a prime power q = 4m+1; satisfies d1..d5.

    Block 0 is a union of q cyclotomic classes of index N = 8m+4; the other
    blocks are its multiplicative translates by odd powers of the generator.
    Also returns the sign-split pair (built from quartic classes), checked
    against the extraction from the blocks themselves.
    """
    fact = factorize(q)
    if len(fact) != 1:
        raise BadParameter(f"{q} is not a prime power")
    if q % 4 != 1:
        raise BadParameter(f"{q} != 1 mod 4")
    p = next(iter(fact))
    k = fact[p]
    m = (q - 1) // 4
    n_classes = 8 * m + 4
    fld = make_field(p, 2 * k)

    idx0 = {(4 * l + (2 * m + 1) * u) % n_classes for l in range(m) for u in (1, 2, 3)}
    idx0 |= {(4 * j - 2) % n_classes for j in range(m + 1)}
    if len(idx0) != q:
        raise PostVerifyFailed("cyclotomic index set has the wrong size")

    blocks = []
    for i in range(4):
        shifted = sorted((t + (2 * m + 1) * i) % n_classes for t in idx0)
        classes = [cyclotomic_class(fld, n_classes, t) for t in shifted]
        blocks.append(_union_disjoint(*classes))

    fam = _post_verify(fld.group, tuple(blocks), KIND_H)
    if not fam.is_symmetric():
        raise PostVerifyFailed("cyclotomic blocks are not symmetric")
    report = check_conditions(fam)
    for name in ("d1", "d2", "d3", "d4", "d5"):
        if not report.holds(name):
            raise PostVerifyFailed(f"cyclotomic family fails {name}")

    e0 = _union_disjoint(
        cyclotomic_class(fld, 4, 2), cyclotomic_class(fld, 4, (2 * m + 3) % 4)
    )
    e1 = _union_disjoint(
        cyclotomic_class(fld, 4, 2), cyclotomic_class(fld, 4, (2 * m + 1) % 4)
    )
    pair = EPair(e0, e1)
    extracted = extract_e_pair(fam)
    if extracted.e0 != pair.e0 or extracted.e1 != pair.e1:
        raise PostVerifyFailed("quartic-class pair disagrees with the extracted pair")
    return fam, pair


# -- quadratic-residue families ------------------------------------------------


def paley_set(q: int) -> SubsetOfGroup:
    """Nonzero squares of GF(q) inside the additive group, q = 1 mod 4.

    The defining quadratic identity P*P = ((q-1)/2)*0 - P + ((q-1)/4)*G*
    is asserted before returning.
    """
    fact = factorize(q)
    if len(fact) != 1:
        raise BadParameter(f"{q} is not a prime power")
    if q % 4 != 1:
        raise BadParameter(f"{q} != 1 mod 4")
    p = next(iter(fact))
    fld = make_field(p, fact[p])
    squares = SubsetOfGroup(fld.group, fld.antilog[np.arange(0, q - 1, 2)])
    if len(squares) != (q - 1) // 2 or not squares.is_symmetric():
        raise PostVerifyFailed("square set has wrong size or is not symmetric")
    r = squares.to_ring()
    from .groups import delta0, star  # local to avoid a wide import list

    expected = delta0(fld.group, (q - 1) // 2) - r + ((q - 1) // 4) * star(fld.group)
    if r * r != expected:
        raise PostVerifyFailed("quadratic identity fails for the square set")
    return squares


def paley_families(q: int, kind: str) -> DifferenceFamily:
    """The H4* family (P, P+0, P+0, G minus P) or the H2* family (P, G* minus P)."""
    p_set = paley_set(q)
    g = p_set.group
    zero = SubsetOfGroup(g, [0])
    if kind == KIND_H4:
        blocks = (
            p_set,
            p_set.union(zero),
            p_set.union(zero),
            p_set.complement(),
        )
        fam = _post_verify(g, blocks, KIND_H4, expect_lam=q)
        if not check_conditions(fam, ("c1",)).holds("c1"):
            raise PostVerifyFailed("quadratic-residue four-block family fails c1")
        return fam
    if kind == KIND_H2:
        blocks = (p_set, p_set.complement(star=True))
        return _post_verify(g, blocks, KIND_H2, expect_lam=(q - 3) // 2)
    raise BadParameter(f"kind must be {KIND_H2!r} or {KIND_H4!r}, got {kind!r}")


# -- product constructions ----------------------------------------------------


def _subsets_of_cyclic(n: int, *member_sets):
    g = make_group([n])
    return tuple(SubsetOfGroup(g, m) for m in member_sets)


def product_z2(d_fam: DifferenceFamily, s_fam: DifferenceFamily) -> DifferenceFamily:
    """Type-H4* family in G x Z2 from a type-H family with d3 and an H4*
    family with c1 in the same G."""
    _require(d_fam, kind=KIND_H, conditions=("d3",))
    _require(s_fam, kind=KIND_H4, conditions=("c1",))
    if d_fam.group != s_fam.group:
        raise PreconditionFailed("group", "both families must share the group")
    (z0, z1) = _subsets_of_cyclic(2, [0], [1])
    d = d_fam.blocks
    s = s_fam.blocks
    dc = [b.complement() for b in d]
    blocks = (
        _union_disjoint(cross(d[0], z0), cross(dc[2], z1)),
        _union_disjoint(cross(d[1], z0), cross(dc[3], z1)),
        _union_disjoint(cross(s[0], z0), cross(s[2], z1)),
        _union_disjoint(cross(s[1], z0), cross(s[3], z1)),
    )
    pg = direct_product(d_fam.group, make_group([2]))
    sizes = sum(len(b) for b in blocks)
    return _post_verify(pg, blocks, KIND_H4, expect_lam=sizes - (2 * d_fam.group.order + 1))


def product_z3(d_fam: DifferenceFamily, s_fam: DifferenceFamily) -> DifferenceFamily:
    """Type-H4* family in G x Z3 from a symmetric type-H family with d3 and
    an H2* family in the same G."""
    _require(d_fam, kind=KIND_H, symmetric=True, conditions=("d3",))
    _require(s_fam, kind=KIND_H2)
    if d_fam.group != s_fam.group:
        raise PreconditionFailed("group", "both families must share the group")
    (z0, z1, z2) = _subsets_of_cyclic(3, [0], [1], [2])
    d = d_fam.blocks
    s = s_fam.blocks
    dc = [b.complement() for b in d]
    blocks = (
        _union_disjoint(cross(d[0], z1), cross(dc[2], z2), cross(s[0], z0)),
        _union_disjoint(cross(d[3], z1), cross(dc[1], z2), cross(s[1], z0)),
        _union_disjoint(cross(dc[0], z1), cross(d[2], z2), cross(s[0], z0)),
        _union_disjoint(cross(dc[3], z1), cross(d[1], z2), cross(s[1], z0)),
    )
    pg = direct_product(d_fam.group, make_group([3]))
    lam = 2 * (len(s[0]) + len(s[1])) + d_fam.group.order - 1
    return _post_verify(pg, blocks, KIND_H4, expect_lam=lam)


def product_z5(d_fam: DifferenceFamily) -> DifferenceFamily:
    """Type-H4* family in G x Z5 from a symmetric type-H family with d2, d5."""
    _require(d_fam, kind=KIND_H, symmetric=True, conditions=("d5",))
    pair = _extract_or_d2_failure(d_fam)
    i0, i1, i2, i3, z0 = _subsets_of_cyclic(5, I0, I1, I2, I3, [0])
    d = d_fam.blocks
    dc = [b.complement() for b in d]
    blocks = (
        _union_disjoint(cross(d[0], i0), cross(dc[2], i1), cross(pair.e0_bar, z0)),
        _union_disjoint(cross(d[3], i0), cross(dc[1], i1), cross(pair.e1_bar, z0)),
        _union_disjoint(cross(dc[0], i2), cross(d[2], i3), cross(pair.e0, z0)),
        _union_disjoint(cross(dc[3], i2), cross(d[1], i3), cross(pair.e1, z0)),
    )
    pg = direct_product(d_fam.group, make_group([5]))
    return _post_verify(pg, blocks, KIND_H4, expect_lam=5 * d_fam.group.order - 3)


_H8_PART_PATTERN = (
    # rows: output block; columns: which building part multiplies
    # (D0, D1, D2c, D3c, D0c, D1c, D2, D3) in that order
    (0, 1, 2, 3, 4, 5, 6, 7),
    (1, 4, 3, 6, 5, 0, 7, 2),
    (2, 3, 0, 1, 6, 7, 4, 5),
    (3, 6, 1, 4, 7, 2, 5, 0),
    (4, 5, 6, 7, 0, 1, 2, 3),
    (5, 0, 7, 2, 1, 4, 3, 6),
    (6, 7, 4, 5, 2, 3, 0, 1),
    (7, 2, 5, 0, 3, 6, 1, 4),
)


def product_h8(d_fam: DifferenceFamily, building: BuildingFamily) -> DifferenceFamily:
    """Symmetric type-H8* family in G x G' from a symmetric type-H family
    with d2 in G and a building family in G'."""
    _require(d_fam, kind=KIND_H, symmetric=True)
    pair = _extract_or_d2_failure(d_fam)
    breport = check_building(building)
    for name in ("a1", "a2", "a3", "a4"):
        if not breport.holds(name):
            raise PreconditionFailed(name, f"building family fails {name}")
    d = d_fam.blocks
    dc = [b.complement() for b in d]
    left = (d[0], d[1], dc[2], dc[3], dc[0], dc[1], d[2], d[3])
    zero_right = SubsetOfGroup(building.group, [0])
    center = (pair.e0_bar, pair.e1_bar, pair.e0_bar, pair.e1_bar, pair.e0, pair.e1, pair.e0, pair.e1)
    blocks = []
    for row in range(8):
        pieces = [
            cross(left[col], building.parts[_H8_PART_PATTERN[row][col]])
            for col in range(8)
            if len(building.parts[_H8_PART_PATTERN[row][col]])
        ]
        pieces.append(cross(center[row], zero_right))
        blocks.append(_union_disjoint(*pieces))
    pg = direct_product(d_fam.group, building.group)
    vv = d_fam.group.order * building.group.order
    fam = _post_verify(pg, tuple(blocks), KIND_H8, expect_lam=2 * (vv - 3))
    if not fam.is_symmetric():
        raise PostVerifyFailed("eight-block product is not symmetric")
    return fam


def _extract_or_d2_failure(d_fam) -> EPair:
    if not check_conditions(d_fam, ("d2",)).holds("d2"):
        raise PreconditionFailed("d2", "condition d2 fails")
    return extract_e_pair(d_fam)


# -- building-family bridge and complementation --------------------------------


def family_from_building(building: BuildingFamily) -> DifferenceFamily:
    """Forward bridge: the four-block family generated by a building family;
    it is symmetric of type H and satisfies d1 and d2."""
    report = check_building(building)
    for name in ("a1", "a2", "a3", "a4"):
        if not report.holds(name):
            raise PreconditionFailed(name, f"building family fails {name}")
    fam = _post_verify(building.group, blocks_from_building(building), KIND_H)
    cond = check_conditions(fam, ("d1", "d2"))
    if not (cond.holds("d1") and cond.holds("d2")):
        raise PostVerifyFailed("bridged family lost d1/d2")
    return fam


def building_from_family(d_fam: DifferenceFamily) -> BuildingFamily:
    """Backward bridge: parts 0..3 are the triple intersections of the
    blocks, parts 4..7 the triple intersections of their star complements."""
    _require(d_fam, kind=KIND_H, symmetric=True, conditions=("d1", "d2"))
    d = d_fam.blocks
    dstar = [b.complement(star=True) for b in d]
    parts = []
    for i in range(4):
        others = [d[j] for j in range(4) if j != i]
        parts.append(others[0].intersection(others[1]).intersection(others[2]))
    for i in range(4):
        others = [dstar[j] for j in range(4) if j != i]
        parts.append(others[0].intersection(others[1]).intersection(others[2]))
    return BuildingFamily(d_fam.group, tuple(parts))


def df_building_bridge(obj):
    """Bridge in whichever direction the argument calls for."""
    if isinstance(obj, BuildingFamily):
        return family_from_building(obj)
    if isinstance(obj, DifferenceFamily):
        return building_from_family(obj)
    raise BadParameter(f"cannot bridge {type(obj).__name__}")


def complement_family(d_fam: DifferenceFamily) -> DifferenceFamily:
    """Blockwise complement of a symmetric d2 family whose blocks all contain
    the identity; the result is of type H and satisfies d1 and d2."""
    _require(d_fam, kind=KIND_H, symmetric=True)
    for k, block in enumerate(d_fam.blocks):
        if 0 not in block:
            raise PreconditionFailed("zero_in_blocks", f"identity missing from block {k}")
    _extract_or_d2_failure(d_fam)
    fam = _post_verify(
        d_fam.group, tuple(b.complement() for b in d_fam.blocks), KIND_H
    )
    cond = check_conditions(fam, ("d1", "d2"))
    if not (cond.holds("d1") and cond.holds("d2")):
        raise PostVerifyFailed("complement family lost d1/d2")
    return fam


# -- square-order recursion ----------------------------------------------------


@dataclass(frozen=True)
class RecursionResult:
    """Output of the square-order recursion: the spread family itself plus
    whichever of it / its blockwise complement carries d1 and d2."""

    family: DifferenceFamily
    d_family: DifferenceFamily
    complemented: bool


def turyn_recursion(d_fam: DifferenceFamily, f_fam: DifferenceFamily) -> RecursionResult:
    """Compose two spread families (conditions i, ii, iii) into one on the
    product group; the second family must avoid the identity entirely."""
    for fam, label in ((d_fam, "first"), (f_fam, "second")):
        _require(fam, kind=KIND_H, symmetric=True)
        sp = check_spread(fam)
        for name in ("i", "ii", "iii"):
            if not sp.holds(name):
                raise PreconditionFailed(name, f"{label} family fails spread condition {name}")
    f_union = f_fam.blocks[0]
    for b in f_fam.blocks[1:]:
        f_union = f_union.union(b)
    if 0 in f_union:
        raise ZeroInF()
    h = check_spread(d_fam).h_parts
    f = f_fam.blocks
    fc = [b.complement() for b in f]
    blocks = (
        _union_disjoint(cross(h[1], f[0]), cross(h[0], fc[0]), cross(h[3], f[2]), cross(h[2], fc[2])),
        _union_disjoint(cross(h[1], f[1]), cross(h[0], fc[1]), cross(h[2], f[3]), cross(h[3], fc[3])),
        _union_disjoint(cross(h[6], f[0]), cross(h[7], fc[0]), cross(h[5], f[2]), cross(h[4], fc[2])),
        _union_disjoint(cross(h[7], f[1]), cross(h[6], fc[1]), cross(h[5], f[3]), cross(h[4], fc[3])),
    )
    pg = direct_product(d_fam.group, f_fam.group)
    fam = _post_verify(pg, blocks, KIND_H)
    if not fam.is_symmetric():
        raise PostVerifyFailed("recursion output is not symmetric")
    out_spread = check_spread(fam)
    if not out_spread.all_hold():
        raise PostVerifyFailed("recursion output fails the spread conditions")
    for candidate, complemented in ((fam, False), (None, True)):
        if candidate is None:
            candidate = verify_family(pg, tuple(b.complement() for b in fam.blocks))
        cond = check_conditions(candidate, ("d1", "d2"))
        if cond.holds("d1"):
            if not cond.holds("d2"):
                raise PostVerifyFailed("d1 variant of the recursion output lost d2")
            return RecursionResult(fam, candidate, complemented)
    raise PostVerifyFailed("neither the output nor its complement satisfies d1")
