"""Exact homology engine with mechanical checks of the Eilenberg-Steenrod axioms."""
from .algebra import FgModule, IntMatrix, Matrix, ModuleMap, RingSpec, cokernel, kernel_basis, snf, solve
from .complexes import (
    ChainComplex,
    ChainMap,
    GradedModule,
    LongExactSequence,
    ShortExactSeqOfComplexes,
    cone,
    connecting_homomorphism,
    homology,
    homology_with_coefficients,
    induced_map,
    les_from_ses,
    uct_oracle,
)
from .errors import (
    DimensionError,
    ExactnessError,
    InvariantError,
    LiftError,
    NotHomologySphere,
    OrdhomError,
    RefusedComputation,
    RingMismatchError,
)
from .spaces import (
    CwComplex,
    DeltaComplex,
    Filtration,
    FinitePoset,
    SimplicialMap,
    SubcomplexPair,
    chain_complex,
    circle_mgon,
    collapse_map,
    covering_map,
    cylinder,
    disjoint_union,
    disk_pair,
    klein_delta,
    order_complex,
    point,
    relative_chain_complex,
    rp2_delta,
    simplicial_map,
    skeletal_filtration,
    sphere_delta,
    torus_delta,
    torus_grid,
    wrap_map,
)
from .exactness import ExcisiveSquare, excision_compare, mayer_vietoris, mv_naturality_check, pair_les, reduced_homology
from .axioms import (
    AxiomReport,
    cellular_complex,
    check_additivity,
    check_homotopy_invariance,
    check_point_axiom,
    compare_cellular_vs_direct,
    degree,
    full_report,
    validate_good_filtration,
)
from .corpus import Corpus, CorpusError, golden_corpus, load_corpus, parse_corpus

__version__ = "0.1.0"
