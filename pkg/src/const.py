"""
Modtrace shared constants
"""

# Verification suites exposed by the CLI and the report service
SUPPORTED_SUITES = (
    'hecke-system', 'p-plication', 'mult-delta', 'dlift-equivariance',
    'divmf-spot', 'akn', 'pointwise-hecke', 'laplacian', 'j0-hecke',
    'trace-ratio', 'kronecker-limit', 'zagier-basis', 'bp', 'gbhe',
    'trace-series',
)

# Names accepted by standard_series / eval_modular
SUPPORTED_SERIES = {'E2', 'E4', 'E6', 'delta', 'j', 'theta4'}
SUPPORTED_EVAL_NAMES = {'one', 'eta', 'j', 'Jn', 'J0bold', 'frak_f', 'user_series'}

# Default configuration values
DEFAULT_DIGITS = 50
DEFAULT_GUARD = 10
DEFAULT_MAX_TERMS = 4000
DEFAULT_ORDER = 40
DEFAULT_THREADS = 4
DEFAULT_FORMAT = "json"
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_HOST = "0.0.0.0"
DEFAULT_PORT = 4000

# Environment variable prefix for overrides (e.g. MODTRACE_DIGITS=80)
ENV_PREFIX = "MODTRACE_"

# Versioned JSON report schema
REPORT_SCHEMA_VERSION = "1.0"

# Search bound multiplier for coprime representations in genus characters
GENUS_SEARCH_FACTOR = 16

# Defaults for the Borcherds checks; see DESIGN.md for why these differ from
# the nominal orders quoted next to the identities.
DEFAULT_BP_TAU_IM = 4
DEFAULT_GBHE_ORDER = {2: 8, 3: 6}
GBHE_NOMINAL_ORDER = 30
DEFAULT_TRACE_SERIES_N = 6
ZAGIER_VERIFY_ORDER = 100

# Cap on product terms for the CM-value product check. f_d is needed through
# q^(Delta (terms - 1)^2); past the cap the sum is cut and its radius widened
# by the tail estimate.
BP_MAX_TERMS = 20
