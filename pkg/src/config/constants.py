"""
Constants used across the audit stack.
Versioned and pinned for determinism.
"""
from typing import Dict, List, Tuple

# =============================================================================
# Report schema
# =============================================================================
SCHEMA_VERSION: str = "construct-audit/1"

# =============================================================================
# Variables of the joint table (assignment order is fixed)
# =============================================================================
VAR_Z: str = "Z"
VAR_YC: str = "Yc"
VAR_YO: str = "Yo"
VAR_YP: str = "Yp"

VARIABLES: Tuple[str, ...] = (VAR_Z, VAR_YC, VAR_YO, VAR_YP)
VAR_INDEX: Dict[str, int] = {name: i for i, name in enumerate(VARIABLES)}

# JSON cell keys, same order as VARIABLES
CELL_KEYS: Tuple[str, ...] = ("z", "yc", "yo", "yp")

GROUPS: Tuple[int, int] = (0, 1)

# Single-label supports standing in for an absent construct / absent model.
CONSTRUCT_PLACEHOLDER: str = "<unobserved>"
PREDICTION_PLACEHOLDER: str = "<no-model>"

# =============================================================================
# Arithmetic
# =============================================================================
MODE_RATIONAL: str = "rational"
MODE_FLOAT: str = "float"
ARITHMETIC_MODES: Tuple[str, ...] = (MODE_RATIONAL, MODE_FLOAT)

# Mass / pass / amplification tolerance in float mode.
FLOAT_TOL: float = 1e-12
# Solver certificates and float-mode harness assertions.
CERT_TOL: float = 1e-9

# Rational approximation of float draws in rational mode.
RATIONAL_DRAW_DENOMINATOR: int = 1_000_000

SEED_MODULUS: int = 2**64

# =============================================================================
# Tests & criteria defaults
# =============================================================================
DEFAULT_DISTRIBUTION_TAU: int = 0

TEST_NAMES: List[str] = ["dp", "eo", "pp", "alpha", "misclass", "ppercent"]
CRITERION_NAMES: List[str] = ["categorical", "general", "accuracy"]

# =============================================================================
# Exact solver / oracles
# =============================================================================
BRUTEFORCE_MAX_SUPPORT: int = 4
SIMPLEX_MAX_PIVOTS: int = 10_000

# =============================================================================
# Generators
# =============================================================================
MIN_OBSERVED_DISPARITY: str = "1/5"     # tv(Yo|Z=0, Yo|Z=1) floor for counterexamples
MIN_OUTPUT_DISPARITY: str = "1/10"      # output disparity floor for the equalized-odds counterexample
MAX_GENERATOR_ATTEMPTS: int = 200

# =============================================================================
# Theorem catalogue
# =============================================================================
THEOREM_IDS: List[str] = [
    "L1", "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10", "T11", "TBL",
]

# Summary matrix: test rows x worldview columns
TABLE_ROWS: Tuple[str, ...] = ("demographic_parity", "equalized_odds", "predictive_parity")
TABLE_COLUMNS: Tuple[str, ...] = ("WAE", "WYSIWYG")
VERDICT_OK: str = "✓"
VERDICT_SUBOPTIMAL: str = "Necessarily suboptimal"
VERDICT_AMPLIFICATION: str = "Amplification allowed"

# Kernels checked against an accuracy ceiling in each harness trial:
# a float batch, plus exact kernels in the trial's arithmetic mode.
KERNELS_PER_TRIAL: int = 500
EXACT_KERNELS_PER_TRIAL: int = 1
