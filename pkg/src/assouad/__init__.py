"""Measures with prescribed Assouad (regularity) dimensions on compact
subsets of [0,1], plus empirical dimension estimation by exhaustive
multi-scale ball-ratio scans.  All set and measure geometry is exact
rational arithmetic; floats appear only inside final logarithms."""

from .errors import (
    AssouadError,
    CalibrationError,
    ConstructionError,
    DomainError,
    InconclusiveError,
    PrecisionError,
    StructureError,
)
from .sets import (
    CantorIfs,
    DoubleExponential,
    FinitePoints,
    FiniteUnion,
    GeometricClosure,
    covering_count,
    descriptor_from_json,
    distance_to_set,
    gap_structure,
    is_member,
    sample_net,
    third_cantor,
)
from .cubes import (
    CubeParams,
    CubeTree,
    PathRecord,
    SplitRateEstimate,
    boundary_paths,
    build_tree,
    dump_tree,
    split_rate,
    verify_properties,
)
from .measures import (
    CodingTree,
    DiscreteMeasure,
    ExplicitMasses,
    GeometricMasses,
    HarmonicTailMasses,
    WeightedMeasure,
    add_atom,
    assign_weights,
    ball_mass,
    cantor_measure_pair,
    discrete_geometric,
    double_exp_measure,
    sum_measures,
    uniform_measure,
)
from .estimators import (
    DimensionEstimate,
    ScaleWindow,
    TailClassification,
    classify_tail_ratios,
    doubling_check,
    measure_dimension,
    set_dimension,
    uniform_perfectness_check,
    window_for_measure,
    window_for_set,
)
from .synth import (
    CalibrationResult,
    LadderSpec,
    SynthesisManifest,
    calibrate_s,
    find_boundary_ladder,
    floor_lower_dimension,
    synthesize_lower_upper,
    synthesize_upper,
)

__version__ = "0.1.0"
