"""Low-discrepancy experiment designs over constrained scene domains.

Pipeline: a small scene-description DSL is parsed into objects whose
placement specifiers induce convex regions (possibly coupled to parent
objects); the joint parameter domain is a single H-rep polytope; a
good-lattice-point design on the unit hypercube is pushed through the
inverse Rosenblatt transform along every viable conditioning order; the
design with the lowest central composite discrepancy wins.
"""

from ._kernels import BACKEND as kernel_backend
from .ccd import CcdScorer, MCConfig, ccd, is_box
from .design_io import Design, read_design, write_csv, write_json
from .engine import Diagnostics, EngineConfig, OrderReport, synthesize_design
from .errors import (
    ConflictingSpecifiersError,
    ConvergenceFailureError,
    DslError,
    DslSyntaxError,
    DuplicateIdentifierError,
    EmptyIntersectionError,
    EmptyPolytopeError,
    EmptyRegionError,
    EmptySliceError,
    GeometryError,
    InvalidNError,
    LowerDimensionalError,
    LpError,
    NoFreeDimensionsError,
    NumericError,
    PipelineError,
    UnboundedError,
    UnboundedRegionError,
    UnidexError,
    UnknownClassError,
    UnknownIdentifierError,
    ValidationFailedError,
    ZeroVolumeError,
)
from .geometry import Interval, Polytope
from .glp import HypercubeDesign, centered_l2_discrepancy, glp_design
from .parser import (
    SceneSpec,
    ValidationReport,
    format_spec,
    grammar_check,
    parse,
)
from .rosenblatt import (
    ConditionalCdf,
    forward_rosenblatt,
    inverse_rosenblatt,
    invert_cdf,
    marginal_cdf,
)
from .sampler import hit_and_run, sample_scene, uniform_cloud
from .scene import (
    DEFAULT_CLASS_TABLE,
    ConditioningOrder,
    DimMeta,
    JointDomain,
    ObjectClass,
    ParametricRegion,
    SceneGraph,
    assemble_joint_domain,
    build_scene_graph,
    load_class_table,
    viable_orders,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
