"""Decimation relations between orthogonal and unitary random matrix ensembles."""

from ._rmtdec import (  # noqa: F401
    Error,
    Weight,
    cauchy_a0,
    decimate,
    gap_chue,
    gap_cue,
    gap_mc,
    gap_oe_odd,
    gap_orthogonal,
    gap_ue,
    identity_names,
    run_cli,
    run_identity,
    sample,
    singular_values,
    superpose,
)

__version__ = "0.1.0"
