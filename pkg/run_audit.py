"""
Runs a full audit of the bundled sample distribution.

Reads:
  - audit_i_o/hiring_distribution.json

Produces:
  - audit_i_o/audit_result.json
"""
import logging
import sys
from pathlib import Path

from src.cli.commands import cmd_audit
from src.models.audit_config import AuditConfig

# ---------------------------------------------------------------------------
# Setup logging
# ---------------------------------------------------------------------------
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger("run_audit")

# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------
ROOT = Path(__file__).parent
IO_DIR = ROOT / "audit_i_o"

INPUT_FILE = IO_DIR / "hiring_distribution.json"
OUTPUT_FILE = IO_DIR / "audit_result.json"

# ---------------------------------------------------------------------------
# Audit
# ---------------------------------------------------------------------------
config = AuditConfig(
    input_path=INPUT_FILE,
    input_format="dist-json",
    tests=["dp", "eo", "pp", "misclass"],
    criteria=["categorical", "accuracy"],
    worldview="wysiwyg",
    output=OUTPUT_FILE,
)

code, _ = cmd_audit(config)

logger.info("Exit code         : %d", code)
logger.info("Report            : %s", OUTPUT_FILE)
sys.exit(code)
