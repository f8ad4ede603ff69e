"""Exact rational inverses of planar NURBS curves.

Every curve segment of a general NURBS curve is birational onto its image;
its inverse is a ratio of two Sylvester-matrix minors.  The package builds
these inverses exactly, evaluates them in exact or floating point
arithmetic, and expresses the inverse with physical rational splines that
live on the curve itself.
"""
from .bezier import BezierSegment, bezier_segments, extraction_matrix, segment_homogeneous
from .bspline import (CurveError, DomainError, KnotVector, NurbsCurve, basis_functions,
                      bspline_basis, curve_eval, greville, reduced_knots)
from .document import FIXTURES, dumps, load_curve, load_fixture, loads
from .local_inverse import (Candidate, LocalInverse, NonGeneralSegment, PiecewiseInverse,
                            PointNotOnCurve, PreimageResult, genericity_check, global_inverse,
                            invert_point, local_inverse_from_minors, quadratic_closed_form,
                            sylvester)
from .newton_oracle import OracleConfig, bench_compare, newton_invert, self_intersections
from .physical import (InverseSplineForm, PhysicalKnotVector, PhysicalSpline, continuity_probe,
                       inverse_spline_form, physical_knots, physical_spline, physical_splines,
                       spline_eval)
from .ratpoly import Backend, BackendMismatch, BivariatePoly, PolyMatrix, UnivariatePoly, det_poly

__version__ = "0.1.0"

__all__ = [
    "Backend", "BackendMismatch", "BezierSegment", "BivariatePoly", "Candidate", "CurveError",
    "DomainError", "FIXTURES", "InverseSplineForm", "KnotVector", "LocalInverse",
    "NonGeneralSegment", "NurbsCurve", "OracleConfig", "PhysicalKnotVector", "PhysicalSpline",
    "PiecewiseInverse", "PointNotOnCurve", "PolyMatrix", "PreimageResult", "UnivariatePoly",
    "basis_functions", "bench_compare", "bezier_segments", "bspline_basis", "continuity_probe",
    "curve_eval", "det_poly", "dumps", "extraction_matrix", "genericity_check", "global_inverse",
    "greville", "inverse_spline_form", "invert_point", "load_curve", "load_fixture", "loads",
    "local_inverse_from_minors", "newton_invert", "physical_knots", "physical_spline",
    "physical_splines", "quadratic_closed_form", "reduced_knots", "segment_homogeneous",
    "self_intersections", "spline_eval", "sylvester",
]
