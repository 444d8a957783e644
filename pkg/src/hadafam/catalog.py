"""Named reference objects, re-verified from raw data on every load, plus the
prime scans for the two quartic families 2n^4+1 and 18n^4+1.

The order-13 entry stores its blocks in the labeling that satisfies d3 under
the defining (0,2)/(1,3) pairing (blocks 1 and 2 swapped relative to the
naive size-sorted listing); the raw index data admits no other labeling that
the two-fold product construction accepts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import BoundTooLarge, CatalogDataError, UnknownName, Z37ScanFailed
from .families import (
    KIND_H,
    BuildingFamily,
    DifferenceFamily,
    check_building,
    check_conditions,
    check_spread,
    verify_family,
)
from .gf import MR_PROVEN_BOUND, is_prime
from .groups import SubsetOfGroup, make_group

__all__ = ["CatalogEntry", "catalog_get", "catalog_names", "prime_scan"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    payload: object  # DifferenceFamily | BuildingFamily
    provenance: str
    asserted_conditions: dict[str, bool]
    metadata: dict = field(default_factory=dict)


_Z5_BLOCKS = ((0,), (1, 4), (0,), (2, 3))

# d3-conforming block order; sizes (6, 4, 6, 4)
_Z13_BLOCKS = (
    (1, 2, 3, 5, 6, 9),
    (0, 2, 5, 6),
    (1, 3, 4, 9, 10, 12),
    (0, 1, 3, 9),
)

# exponent residues mod 12 for the four order-37 blocks; blocks 0 and 2 also
# contain the zero element
_Z37_EXPONENTS = (
    (0, 3, 7, 8, 10),
    (0, 1, 7, 8, 10),
    (0, 1, 5, 7, 9),
    (1, 3, 4, 5, 7),
)
_Z37_WITH_ZERO = (True, False, True, False)

_Z9_PARTS = (
    ((0, 1), (0, 2)),
    ((1, 0), (2, 0)),
    ((2, 1), (1, 2)),
    ((1, 1), (2, 2)),
    (),
    (),
    (),
    (),
)


def _z37_blocks(omega: int):
    g = make_group([37])
    blocks = []
    for exps, with_zero in zip(_Z37_EXPONENTS, _Z37_WITH_ZERO):
        members = {pow(omega, e + 12 * j, 37) for e in exps for j in range(3)}
        if with_zero:
            members.add(0)
        blocks.append(SubsetOfGroup(g, members))
    return g, tuple(blocks)


@lru_cache(maxsize=1)
def _z37_scan():
    """First primitive root mod 37 whose power blocks verify as a type-H
    family satisfying d3; all other valid roots are reported as well."""
    valid = []
    for omega in range(2, 37):
        order, x = 1, omega % 37
        while x != 1:
            x = x * omega % 37
            order += 1
        if order != 36:
            continue
        g, blocks = _z37_blocks(omega)
        try:
            fam = verify_family(g, blocks)
        except Exception:
            continue
        if KIND_H not in fam.kinds:
            continue
        if check_conditions(fam, ("d3",)).holds("d3"):
            valid.append(omega)
    if not valid:
        raise Z37ScanFailed("no primitive root mod 37 validates the order-37 blocks")
    return tuple(valid)


def _make_z5():
    g = make_group([5])
    fam = verify_family(g, tuple(SubsetOfGroup(g, m) for m in _Z5_BLOCKS))
    return CatalogEntry(
        name="z5_H",
        payload=fam,
        provenance="order-5 cyclic family",
        asserted_conditions={"d1": False, "d2": True, "d3": True, "d4": True, "d5": True},
    )


def _make_z13():
    g = make_group([13])
    fam = verify_family(g, tuple(SubsetOfGroup(g, m) for m in _Z13_BLOCKS))
    return CatalogEntry(
        name="z13_H_d3",
        payload=fam,
        provenance="order-13 cyclic family",
        asserted_conditions={"d1": False, "d3": True, "d5": True},
        metadata={"symmetric": False},
    )


def _make_z37():
    valid = _z37_scan()
    omega = valid[0]
    g, blocks = _z37_blocks(omega)
    fam = verify_family(g, blocks)
    return CatalogEntry(
        name="z37_H_d3",
        payload=fam,
        provenance="order-37 cyclic family from scanned primitive root",
        asserted_conditions={"d3": True},
        metadata={"symmetric": False, "omega": omega, "other_valid_omegas": list(valid[1:])},
    )


def _make_z9_building():
    g = make_group([3, 3])
    parts = tuple(SubsetOfGroup.from_residues(g, rs) for rs in _Z9_PARTS)
    return CatalogEntry(
        name="z9_building",
        payload=BuildingFamily(g, parts),
        provenance="order-9 building family",
        asserted_conditions={"a1": True, "a2": True, "a3": True, "a4": True},
    )


def _make_f9():
    # the four order-3 subgroups (lines through the origin) of Z3 x Z3
    g = make_group([3, 3])
    lines = (
        ((0, 0), (0, 1), (0, 2)),
        ((0, 0), (1, 0), (2, 0)),
        ((0, 0), (2, 1), (1, 2)),
        ((0, 0), (1, 1), (2, 2)),
    )
    fam = verify_family(g, tuple(SubsetOfGroup.from_residues(g, l) for l in lines))
    return CatalogEntry(
        name="f9_H_spread",
        payload=fam,
        provenance="order-9 line family",
        asserted_conditions={"i": True, "ii": True, "iii": True, "d2": True},
        metadata={"zero_in_all": True},
    )


_BUILDERS = {
    "z5_H": _make_z5,
    "z13_H_d3": _make_z13,
    "z37_H_d3": _make_z37,
    "z9_building": _make_z9_building,
    "f9_H_spread": _make_f9,
}


def catalog_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILDERS))


@lru_cache(maxsize=None)
def catalog_get(name: str) -> CatalogEntry:
    """Build, re-verify and return the named entry."""
    if name not in _BUILDERS:
        raise UnknownName(name)
    entry = _BUILDERS[name]()
    _reverify(entry)
    return entry


def _reverify(entry: CatalogEntry):
    payload = entry.payload
    if isinstance(payload, BuildingFamily):
        report = check_building(payload)
        computed = {k: report.holds(k) for k in entry.asserted_conditions}
    else:
        assert isinstance(payload, DifferenceFamily)
        spread_names = {"i", "ii", "iii"}
        computed = {}
        plain = [n for n in entry.asserted_conditions if n not in spread_names]
        if plain:
            report = check_conditions(payload, plain)
            computed.update({n: report.holds(n) for n in plain})
        if spread_names & set(entry.asserted_conditions):
            sp = check_spread(payload)
            computed.update(
                {n: sp.holds(n) for n in entry.asserted_conditions if n in spread_names}
            )
        if "symmetric" in entry.metadata:
            if payload.is_symmetric() != entry.metadata["symmetric"]:
                raise CatalogDataError(f"{entry.name}: symmetry flag mismatch")
    if computed != entry.asserted_conditions:
        raise CatalogDataError(
            f"{entry.name}: asserted {entry.asserted_conditions}, computed {computed}"
        )


# -- prime scans --------------------------------------------------------------

_SCAN_CAP = 10**6


def prime_scan(bound: int) -> tuple[list[int], list[int]]:
    """Odd n < bound with 2n^4+1 prime, and odd n < bound with 18n^4+1 prime."""
    if bound > _SCAN_CAP:
        raise BoundTooLarge(f"bound {bound} exceeds the cap {_SCAN_CAP}")
    if bound >= 1 and 18 * (bound - 1) ** 4 + 1 >= MR_PROVEN_BOUND:
        raise BoundTooLarge(
            f"bound {bound} leaves the deterministically-checkable primality range"
        )
    list_a = [n for n in range(1, bound, 2) if is_prime(2 * n**4 + 1)]
    list_b = [n for n in range(1, bound, 2) if is_prime(18 * n**4 + 1)]
    return list_a, list_b
