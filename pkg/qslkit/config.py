"""
qslkit Configuration Module
Handles environment variables and default numerical settings.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load .env file if exists
load_dotenv()

# Base paths
BASE_DIR = Path(__file__).resolve().parent.parent
OUTPUT_DIR = Path(os.getenv("QSL_OUTPUT_DIR", BASE_DIR / "data"))

# Quadrature defaults (see models.QuadratureSpec)
ABS_TOL = float(os.getenv("QSL_ABS_TOL", "1e-10"))
REL_TOL = float(os.getenv("QSL_REL_TOL", "1e-9"))
MAX_DEPTH = int(os.getenv("QSL_MAX_DEPTH", "40"))

# Grid evaluation
WORKERS = int(os.getenv("QSL_WORKERS", "1"))

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
