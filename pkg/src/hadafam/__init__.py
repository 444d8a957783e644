"""hadafam: difference families over finite abelian groups and the Hadamard
matrices they generate, with exact verification throughout."""

from .groups import (
    GroupRingElement,
    GroupSpec,
    SubsetOfGroup,
    convolve,
    cross,
    delta0,
    direct_product,
    involution,
    make_group,
    match_lambda_form,
    ones,
    star,
)

__all__ = [
    "GroupRingElement",
    "GroupSpec",
    "SubsetOfGroup",
    "convolve",
    "cross",
    "delta0",
    "direct_product",
    "involution",
    "make_group",
    "match_lambda_form",
    "ones",
    "star",
]

__version__ = "0.1.0"
