"""Multipoint flux mixed finite elements with mass lumping."""

from ._mpflux import (
    MpfluxError,
    Mesh,
    case_names,
    convergence_study,
    describe_element,
    element_info,
    eoc,
    eval_divergence,
    eval_velocity,
    generate_mesh,
    generator_families,
    read_mesh,
    run_case,
    study_csv,
)

__all__ = [
    "MpfluxError",
    "Mesh",
    "case_names",
    "convergence_study",
    "describe_element",
    "element_info",
    "eoc",
    "eval_divergence",
    "eval_velocity",
    "generate_mesh",
    "generator_families",
    "read_mesh",
    "run_case",
    "study_csv",
]
