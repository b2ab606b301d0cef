"""Hausdorff hyperspace numerics over finite point sets.

Set distances (directed and Pompeiu-Hausdorff), Cauchy analysis and limit
extraction for sequences of sets, and IFS attractors as concrete Cauchy
sequences in the hyperspace.
"""

from .errors import (
    AnalysisError,
    DataError,
    DimensionError,
    EmptyCloud,
    EmptyLimit,
    EmptySetError,
    HyperspaceError,
    HypothesisViolated,
    ManifestError,
    NotContractive,
    ParseError,
    PrefixExhausted,
    RaggedRow,
    SystemFormatError,
)
from .hausdorff import (
    DistanceBreakdown,
    directed_distance,
    directed_distance_matrix,
    hausdorff,
    hausdorff_distance,
    hausdorff_distance_oracle,
    hausdorff_matrix,
)
from .hyperspace import (
    AgreementRecord,
    CauchyReport,
    LemmaVerdict,
    LimitApprox,
    SetSequence,
    WitnessChain,
    convergence_trace,
    is_cauchy,
    limit_characterization_agreement,
    limit_set,
    liminf_set,
    limsup_set,
    main_lemma_check,
    tail_resolution,
    tail_union,
    witness_chain,
)
from .ifs import (
    IFS,
    AffineMap,
    AttractorTrace,
    attractor,
    barnsley_fern,
    cantor,
    contraction_factor,
    decimate,
    hutchinson_step,
    load_ifs,
    sierpinski,
)
from .io import lattice_candidates, load_cloud, load_manifest, load_sequence, save_cloud, write_sequence
from .kernels import BACKEND
from .metric import (
    CHEBYSHEV,
    EUCLIDEAN,
    MANHATTAN,
    MetricSpec,
    PointSet,
    distance,
    nearest_point,
    point_set_distance,
)

__version__ = "0.1.0"
