from pathlib import Path
import os

# Path of the current file
BASE_DIR = Path(__file__).parent

# Path to the on-disk result cache (overridable through the environment)
CACHE_ENV_VAR = "MODULAR_FLAGS_CACHE"
CACHE_PATH = Path(
    os.environ.get(CACHE_ENV_VAR, BASE_DIR / "../data_cache")
).resolve()

# Path to the CSV reports written by bin/reference_checks_extraction.py
REPORTS_PATH = (BASE_DIR / "../reports").resolve()

# Version of the JSON envelopes written by the CLI
SCHEMA_VERSION = "1.0"


# Size caps
################################################

# Maximal dimension of a Weyl module built weight by weight
MODULE_DIM_CAP = 512

# Maximal dimension of a bigraded piece handled by the incidence oracle
ORACLE_CAP = 20000


# Cache locking
################################################

CACHE_LOCK_RETRIES = 5
CACHE_LOCK_WAIT_S = 0.2


# Root systems
################################################

SUPPORTED_FAMILIES = "ABCDEFG"

# Legal ranks per family (None: unbounded)
FAMILY_RANKS = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}

# Smallest characteristic for which a parabolic subgroup scheme is the
# intersection of thickened maximal parabolics
CHARACTERISTIC_BOUNDS = {
    "B": 3,
    "C": 3,
    "F": 3,
    "G": 5,
}


# Embedded tables
################################################

INF_TOKEN = "inf"

# C4, omega_4, p = 2: exponent of every positive root
C4_OMEGA4_TABLE = {
    "1000": INF_TOKEN, "1100": INF_TOKEN,
    "1110": INF_TOKEN, "0100": INF_TOKEN,
    "0110": INF_TOKEN, "0010": INF_TOKEN,
    "0001": 0, "0011": 1,
    "0111": 1, "1111": 1,
    "0021": 0, "0121": 1,
    "1121": 1, "0221": 0,
    "1221": 1, "2221": 0,
}

# B2, omega dual to the long simple root, p = 2. The printed labels put 0 on
# the short simple root and inf on the long one; only the unordered simple
# data is compared.
B2_OMEGA_TABLE = {
    "simple": [0, INF_TOKEN],
    "printed_simple": {"short": 0, "long": INF_TOKEN},
    "alpha+beta": 1,
    "2alpha+beta": 0,
}

REFERENCE_TABLES = {
    "C4": {"root_system": "C4", "weight": "0001", "p": 2, "rows": C4_OMEGA4_TABLE},
    "B2": {"root_system": "B2", "weight": "10", "p": 2, "rows": B2_OMEGA_TABLE},
}

# Dimensions quoted alongside the tables
REFERENCE_DIMENSIONS = {
    "C4": {"weyl": 42, "simple": 16, "orbit": 10, "embedding": 15},
    "B2": {"weyl": 5, "simple": 4, "orbit": 3, "embedding": 3},
}
