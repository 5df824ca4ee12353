"""bicontact: a verification laboratory for bi-contact geometry and
Dehn-type surgery on flows, built on exact (dual-number) differentiation
and grid certification of every checkable inequality."""

from .charts import Chart, GridSpec, flow_box_chart, torus_chart, transverse_box_chart
from .contact import (BiContact, Quadrant, classify_vector, contact_coefficient,
                      hozoori_certificate, reeb_field, s_average_isotopy,
                      transversality_margin, transversality_report, verify_contact)
from .errors import (BicontactError, ChartExitError, ConfigError, DegeneratePointError,
                     DomainError, ExpressionError, OrbitClosureError, SeamError,
                     SingularFoliationError, ValidationError)
from .expressions import parse_scalar_field
from .fh import (TransverseSurgeryResult, fh_reeb_check, fh_surgery,
                 standard_transverse_form, suggested_annulus_bound)
from .fields import (ChartMap, OneForm, ScalarField, ThreeForm, TwoForm, VectorField,
                     differential, exterior_derivative, identity_map, lie_bracket,
                     one_form, pullback_oneform, vector_field, wedge_d)
from .flows import SampledPath, integrate_flow, variational_monodromy
from .models import (EmbeddedCurve, FlowBoxModel, LambdaModel, T3Model,
                     flow_box_bicontact, frame_fields, lambda_chart,
                     legendrian_transverse_pushoff, t3_bicontact)
from .profiles import CutoffProfile, ShearProfile, tangent_weighted_cutoff
from .reports import VerificationReport
from .slope import SlopeResult, characteristic_slope
from .surgery import (ExtensionResult, GluedBiContact, SurgerySpec, TwistResult,
                      admissible_delta, admissible_range_from_slope,
                      goodman_twist_count, lt_surgery, negative_twist_extension,
                      verify_seam)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
