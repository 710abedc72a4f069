"""Centralized constants for nomdiag."""

# ---- Names ----
MACHINE_PREFIX: str = "_"
ORDINAL_PREFIX: str = "_p"

# ---- Generator labels (shared by ordered and nominal theories) ----
LABEL_UNIT: str = "e"  # 0 -> 1
LABEL_MULT: str = "m"  # 2 -> 1
LABEL_COUNIT: str = "ec"  # 1 -> 0
LABEL_COMULT: str = "mc"  # 1 -> 2
NMT_RESERVED: set[str] = {"id", "d", "nil"}
SMT_RESERVED: set[str] = {"id", "sym", "unit"}

# ---- Search ----
DEFAULT_MAX_DEPTH: int = 12
DEFAULT_MAX_NODES: int = 20_000
SIZE_FACTOR: int = 2
MAX_BRUTE_FORCE_INTERNALS: int = 6
MAX_PAR_FOCUS_WIDTH: int = 8

# ---- Sampling ----
DEFAULT_SEED: int = 0
RULE_SAMPLES: int = 100
EQUIVARIANCE_SAMPLES: int = 500
ROUND_TRIP_SAMPLES: int = 300
NATURALITY_SAMPLES: int = 100
NAME_POOL: tuple[str, ...] = ("a", "b", "c", "d", "e", "f", "g", "h")
MAX_SAMPLE_ARITY: int = 4

# ---- CLI exit codes ----
EXIT_OK: int = 0
EXIT_NOT_EQUAL: int = 1
EXIT_TYPE_ERROR: int = 2
EXIT_PARSE_ERROR: int = 3
EXIT_BUDGET: int = 4

# ---- HTTP ----
GLOBAL_RATE_LIMIT: str = "60/minute"
MAX_TERM_LENGTH: int = 20_000
MAX_BODY_BYTES: int = 100_000

# ---- Misc ----
APP_VERSION: str = "0.1.0"

# ---- Error Codes ----
ERR_INTERNAL: str = "INTERNAL_ERROR"
ERR_PARSE: str = "PARSE_ERROR"
ERR_TYPE: str = "TYPE_ERROR"
ERR_OVERLAP: str = "OVERLAP"
ERR_SEQ_MISMATCH: str = "SEQ_MISMATCH"
ERR_UNKNOWN_GENERATOR: str = "UNKNOWN_GENERATOR"
ERR_DUPLICATE_NAME: str = "DUPLICATE_NAME"
ERR_TYPE_MISMATCH: str = "TYPE_MISMATCH"
ERR_INTERFACE_MISMATCH: str = "INTERFACE_MISMATCH"
ERR_KIND_MISMATCH: str = "KIND_MISMATCH"
ERR_NAME_NOT_IN_DOMAIN: str = "NAME_NOT_IN_DOMAIN"
ERR_NOT_A_PERMUTATION: str = "NOT_A_PERMUTATION_TERM"
ERR_UNSUPPORTED_GENERATOR: str = "UNSUPPORTED_GENERATOR"
ERR_ARITY_MISMATCH: str = "ARITY_MISMATCH"
ERR_TYPE_VIOLATION: str = "TYPE_VIOLATION"
ERR_NO_MATCH: str = "NO_MATCH"
ERR_ILL_TYPED_RESULT: str = "ILL_TYPED_RESULT"
ERR_PAYLOAD_TOO_LARGE: str = "PAYLOAD_TOO_LARGE"
