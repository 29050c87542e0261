"""Delta lenses, multilens fusion and span/cospan propagation over explicit finite categories."""
from __future__ import annotations

from .errors import (
    BoundExceeded,
    FootMismatch,
    FusionError,
    LensError,
    NotFunctorial,
    ParseError,
    PreconditionError,
)
from .fincat import (
    Cospan,
    FinCategory,
    Functor,
    PullbackResult,
    Violation,
    WideSpan,
    category,
    find_span_isomorphism,
    identity_functor,
    is_bijective_on_objects,
    is_discrete_opfibration,
    pullback,
    spans_isomorphic,
    terminal_category,
    validate_category,
    validate_functor,
)
from .lens import (
    AsymmetricLens,
    compose_asymmetric,
    get_arrow,
    get_object,
    identity_lens,
    lens_from_put,
    lenses_equal,
    put,
    put_law_violations,
    validate_lens,
)
from .multilens import (
    LensCospan,
    LensSquare,
    Multilens,
    compose_multilens,
    compose_symmetric,
    consistency_lens,
    embed_as_2lens,
    fuse,
    fuse_zigzag,
    lens_pullback,
    make_multilens,
)
from .propagate import (
    PropagationTrace,
    SyncPair,
    backward_cospan,
    backward_span,
    forward_cospan,
    forward_span,
    propagations_agree,
    synchronized_cospan,
)

__version__ = "0.1.0"
