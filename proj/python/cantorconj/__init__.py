"""Cantor sets of x**2 + c, target Cantor sets and the conjugacy between them."""

from ._core import (
    CantorSpec,
    DomainError,
    IntervalSystem,
    IOError,
    MonotonePLMap,
    NoRealFixedPoint,
    QuadraticParams,
    RegimeError,
    SpecError,
    TargetSystem,
    build_model_system,
    build_phi,
    build_target_system,
    cobweb_trace,
    escape_gap,
    escape_image_ppm,
    eval_fstar,
    eval_map,
    expansion_bound,
    find_gap_in_middle_third,
    fixed_points,
    iterate_model,
    iterate_target,
    load_system,
    mandelbrot_escape,
    membership,
    preimage_interval,
    save_model,
    save_target,
    tighten_gap,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
