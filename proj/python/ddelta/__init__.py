"""Exact exponential-polynomial operators: the ring H, zeros, solutions, currents and division."""

from ._core import (
    DDeltaError,
    HElement,
    bezout,
    bump,
    divides,
    find_zeros,
    gcd,
    hefer_pair,
    hermite_interpolate,
    ideal_member,
    is_entire,
    method_of_steps,
    parse,
    pv_pair,
    residue_pair,
    run,
    smith,
    subcommands,
    vanishing_order,
)

__all__ = [
    "DDeltaError",
    "HElement",
    "bezout",
    "bump",
    "divides",
    "find_zeros",
    "gcd",
    "hefer_pair",
    "hermite_interpolate",
    "ideal_member",
    "is_entire",
    "method_of_steps",
    "parse",
    "pv_pair",
    "residue_pair",
    "run",
    "smith",
    "subcommands",
    "vanishing_order",
]
