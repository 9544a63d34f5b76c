"""Exact Hilbert series, Laurent coefficients and graded Ext/Tor over graded rings."""

from .homalg import (
    ExtSeriesTable,
    bass_numbers,
    ext_hilbert,
    ext_table,
    module_hilbert,
    rank_over_domain,
    tor_hilbert,
    tor_table,
)
from .invariants import (
    VerificationReport,
    agreement_level,
    bass_bound,
    canonical_hilbert,
    check_identity,
    check_prop2,
    check_theorem1,
    chi,
    epsilon,
    laurent_coeffs,
    multiplicity_poly,
    phi,
    ring_dimension,
)
from .polyring import (
    QQ,
    Field,
    GradedMatrix,
    ModulePresentation,
    RingPresentation,
    WeightedRingSpec,
    twist,
)
from .ratfun import Center, HilbertRational, LaurentPolynomial, laurent_expand
from .resolve import FreeResolution, minimal_resolution

__version__ = "0.1.0"
