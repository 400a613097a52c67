"""rconvex: a numerical verification lab for Hadamard-type integral
inequalities on r-convex and coordinate-wise r-convex functions.

It checks r-convexity of parsed or generated functions on sampling grids,
evaluates both sides of every supported bound by Gauss-Legendre quadrature,
reports slack against numerical error, and searches parameter space for
counterexamples.
"""
from .bounds import (
    ALL_THEOREMS,
    CHAIN_1_4,
    DERIVED,
    PRINTED,
    T1_1,
    T1_2,
    T1_3,
    T2_1,
    T2_4,
    T2_7,
    BoundReport,
    HypothesisRangeWarning,
    coord_holder,
    coord_product,
    coord_r,
    dragomir_chain,
    hadamard_r_1d,
    holder_rs_1d,
    product_rs_1d,
)
from .convexity import (
    DEFAULT_GRID,
    ConvexityVerdict,
    GridSpec,
    HarnessReport,
    Witness,
    check_coordinated_r_convex,
    check_jointly_r_convex,
    check_r_convex_1d,
    generate_coordinated_r_convex_2d,
    generate_jointly_r_convex_2d,
    generate_r_convex_1d,
    joint_implies_coordinated,
    make_coordinated_r_convex_2d,
    make_r_convex_1d,
    power_transform,
)
from .funcmodel import (
    ArityError,
    Axis,
    DomainError,
    ExprSyntaxError,
    Interval,
    PositiveFunction,
    PositivityError,
    RConvexError,
    Rectangle,
    UnknownIdentifierError,
    evaluate,
    parse_expr,
    partial_map,
)
from .kernels import available_backends, backend_name
from .means import (
    RParam,
    WeightVector,
    r_combination_1d,
    r_combination_2d,
    weighted_power_mean,
)
from .quadrature import (
    DEFAULT_CONFIG,
    IntegralResult,
    QuadratureConfig,
    gauss_legendre,
    integrate_1d,
    integrate_2d,
)

__version__ = "0.1.0"
