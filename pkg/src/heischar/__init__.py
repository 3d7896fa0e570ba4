"""Characteristic points of domains in the Heisenberg group H^1."""

from .characteristic import (BoundarySample, CharacteristicReport, ConvexCertificate, ScanConfig, TangentFrame, boundary_sample,
                             certify_convex, char_measure, disc_certificate, horizontal_normal, scan, tangent_frame,
                             tangent_membership)
from .convex import (ConvexProfile, boundary_to_circle, circle_to_boundary, disc_to_profile, make_convex,
                     profile_to_disc, radial_extent)
from .core import (Frame, HorizontalVector, HPoint, TangentVector, contact_form, dilate, distance, frame_at, gauge,
                   group_inv, group_mul, horizontal_gradient, siegel_action, siegel_embed)
from .domains import (ImplicitDomain, Profile, TorusDomain, boundary_mesh, crescent, disc, ellipse,
                      euclidean_ball, expression_profile, half_space, koranyi_ball, make_torus, rounded_polygon)
from .errors import HeisError
from .fields import ScalarField, compose_profile, scale_field
from .torus_map import ProductPoint, from_product, tangent_map, to_product

__version__ = "0.1.0"
