"""Binary point-vortex crystals.

Thin wrapper over the C++ core. Complex numbers map to Python ``complex``;
reports come back as plain dicts.
"""

from ._core import (
    Motion,
    VclError,
    VortexConfig,
    adler_moser_config,
    balance_report,
    classify,
    doubly_dipole,
    export_mesh,
    flow_field,
    hermite_config,
    hermite_roots,
    infer_motion,
    integrate,
    interlaced_hermite,
    jacobian,
    karman_street,
    limit_periods,
    multigraph_increment,
    nested_polygon_ratio,
    nested_polygons,
    normalize,
    parse_config,
    polygon_with_center,
    rank_report,
    refine,
    residual,
    restricted_rank_report,
    serialize_config,
    thomson,
    upsilon,
    vortex_pair,
    weierstrass_zeta,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
