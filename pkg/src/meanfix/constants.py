from collections import namedtuple

SCHEMA_VERSION = "meanfix/1"

# absolute tolerance for norm and weight-sum equalities
NORM_TOL = 1e-12
# slack granted to sampled inequality checks
SAMPLE_SLACK = 1e-9
# per-step slack for the KM residual monotonicity check
MONOTONE_SLACK = 1e-12
# relative slack of the gjp chain bound
CHAIN_REL_SLACK = 1e-6

EX1_L1 = "ex1-l1"
EX2_L2 = "ex2-l2"
DISC_F = "disc-f"
AFFINE = "affine"
IDENTITY = "identity"
SHIFT_AVERAGE = "shift-average"

DEFAULT_PROPERTY_DIM = 16
DEFAULT_AFPS_DIM = 32
# KM tolerance for the asymptotic demonstrations and for contraction baselines
DEMO_TOL = 1e-3
CONTRACTION_TOL = 1e-10

ANCHORED_MAX_INNER = 10**7

AnchoredResult = namedtuple("AnchoredResult", ["point", "residual", "trace"])

ExactCheck = namedtuple("ExactCheck", ["name", "observed", "expected"])

BoundComparison = namedtuple("BoundComparison", ["alpha1", "improved", "quadratic", "improved_smaller"])
