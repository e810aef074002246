"""Holomorphic invariants of model pseudoconvex domains."""
from .bergman import (
    KernelResult,
    bergman_metric,
    kernel,
    kernel_H,
    kernel_H_balanced,
    kernel_k,
    kernel_on_sublevel,
    moment,
)
from .domains import (
    CATALOG,
    Ball,
    BalancedGauge,
    Disc,
    Ellipsoid,
    Polydisc,
    Product,
    bounding_box,
    contains,
    gauge,
)
from . import green
from .green import scaled_sublevel, sublevel_set
from .metrics import (
    azukawa,
    azukawa_ladder,
    cr_lower,
    indicatrix_contains,
    indicatrix_volume,
    indicatrix_volume_exact,
)
from .polynomials import HomogeneousPoly
from .probes import (
    ProbeReport,
    SuitaValue,
    boundary_limit_scan,
    dimension_probe,
    log_convexity_probe,
    monotonicity_scan,
    suita_functional,
    volume_convexity_probe,
    volume_psh_probe,
)
from .suite import run_suite

# Operations exposed on the command line; the CLI coverage test checks this list.
PUBLIC_OPERATIONS = (
    gauge,
    contains,
    bounding_box,
    green.green,
    sublevel_set,
    scaled_sublevel,
    azukawa,
    azukawa_ladder,
    indicatrix_contains,
    indicatrix_volume,
    indicatrix_volume_exact,
    cr_lower,
    moment,
    kernel,
    kernel_on_sublevel,
    kernel_H_balanced,
    kernel_H,
    kernel_k,
    bergman_metric,
    suita_functional,
    monotonicity_scan,
    log_convexity_probe,
    volume_convexity_probe,
    volume_psh_probe,
    boundary_limit_scan,
    dimension_probe,
    run_suite,
)
