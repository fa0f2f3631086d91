"""Lookup-table compression with don't-care optimization."""

from ._dclut import (
    AddressError,
    BoundsError,
    CompressResult,
    ConfigCost,
    CostReport,
    InvariantError,
    ParseError,
    Plan,
    UsageError,
    VerifyReport,
    compress,
    load_plan,
    mask_from_observations,
    oracle_min_ust,
    verify,
)

__all__ = [
    "AddressError",
    "BoundsError",
    "CompressResult",
    "ConfigCost",
    "CostReport",
    "InvariantError",
    "ParseError",
    "Plan",
    "UsageError",
    "VerifyReport",
    "compress",
    "load_plan",
    "mask_from_observations",
    "oracle_min_ust",
    "verify",
]
