"""L-infinity and L1 Delaunay triangulations as geometric spanners."""
from .delaunay import (Edge, Triangle, Triangulation, circumsquare,
                       triangulate, triangulate_l1, triangulate_linf,
                       validate_triangulation)
from .estimator import LinfDelaunaySpanner, check_points
from .generators import (ChewFamily, ChewFamilyParams, chew_path_stretch,
                         chew_stretch_closed_form, generate_chew_family,
                         random_pointset)
from .geometry import (AxisSquare, GeneralPositionError, Metric, Point,
                       PointSet, Side, Slope, Violation, classify_slope,
                       clockwise_boundary_distance, empty_square_exists,
                       metric, point_side_on, validate_general_position)
from .router import (CrossingSequence, Frame, RouteCertificate, RouteError,
                     SquareStatus, canonical_frame, classify_crossing_edges,
                     crossing_sequence, lemma_violations, maximal_high_path,
                     maximal_low_path, monotone_extension, potential_status,
                     rectangle_empty, route)
from .spanner import (PathInGraph, StretchReport, corollary_maximizer,
                      shortest_paths_from, stretch_factor,
                      verify_theorem_bound)

__version__ = "0.1.0"
