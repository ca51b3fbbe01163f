"""Spherical indicatrices, polygon duality and projection-counting maps of stick knots."""
__version__ = "0.1.0"

from .geometry import TOL, Arc, GreatCircle, SphericalPolygon, antipode  # noqa: E402
from .knot import PolygonalKnot, hexagonal_trefoil, quadrilateral, random_knot, torus_knot_polygon  # noqa: E402
from .indicatrix import binotrix, darboux, frenet_data, notrix, tantrix  # noqa: E402
from .duality import direct_sum, dual_spherical_polygon, w_polygon  # noqa: E402
from .maps import sample_map  # noqa: E402
from .graphs import crofton_length, graph_for, verify_graph  # noqa: E402
