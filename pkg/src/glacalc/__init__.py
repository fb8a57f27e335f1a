"""Exact exterior calculus on Lie algebroids and generalized Lie algebroids."""
from .algebroid import (FrameAlgebra, GeneralizedLieAlgebroidSpec, Section, anchor_apply, as_frame_algebra,
                        bracket, change_coordinates, effective_anchor, frame_change, lie_algebra,
                        pullback_algebroid, standard_algebroid, validate_axioms)
from .connection import (Connection, VectorValuedForm, connection_forms, covariant_derivative, curvature,
                         torsion, verify_bianchi_identities, verify_cartan_identities)
from .errors import GlacalcError
from .expr import CoordinateSystem, Expr, coords, print_canonical
from .forms import (Form, Morphism, check_morphism, coframe, d, evaluate, interior, is_closed, is_symplectic,
                    lie_derivative, maurer_cartan_check, parse_form, parse_section, pullback, push_section,
                    verify_exactness_witness, wedge)
from .integrability import (IDS, NotInvolutive, annihilator, eds_closure_check, frobenius_certificate,
                            is_involutive)
from .linalg import NO_SOLUTION, ExprMatrix, inverse, nullspace, rank, solve
from .parser import parse_expr
from .report import Report

__version__ = "0.1.0"
