#!/usr/bin/env python3
"""
Create an environment template for the cascade toolkit.
Helps users set the variables config.Config reads at import time.
"""

import sys
from pathlib import Path
from typing import List, Optional

from dotenv import dotenv_values

KNOWN_VARS = [
    'CASCADE_ENV',
    'LOG_LEVEL',
    'LOG_FILE',
    'CASCADE_OUTPUT_DIR',
    'CSV_FLOAT_FORMAT',
    'CASCADE_WORKERS',
    'KEEP_STEP_LOG',
]

ENV_TEMPLATE = """# ========================================
# Cascade Speculative Decoding Toolkit
# ========================================

# Environment (development/production/testing)
CASCADE_ENV=production

# ========================================
# Logging Configuration
# ========================================

# DEBUG shows every scheduler decision; INFO only session milestones
LOG_LEVEL=INFO

# Optional rotating log file (10MB x 5)
# LOG_FILE=logs/cascade.log

# ========================================
# Output Configuration
# ========================================

# Overrides --output-dir and the run config's output.dir when set
# CASCADE_OUTPUT_DIR=results

# Float format of every CSV table
CSV_FLOAT_FORMAT=%.6f

# ========================================
# Simulation Configuration
# ========================================

# Default ensemble fan-out (threads)
CASCADE_WORKERS=1

# Keep per-cycle step logs (long Monte Carlo runs may switch this off)
KEEP_STEP_LOG=true
"""


def create_env_template(path: str = '.env', overwrite: bool = False) -> bool:
    """Write the template; an existing file is kept unless overwrite is set."""
    env_file = Path(path)

    if env_file.exists() and not overwrite:
        print(f"📝 {env_file} already exists, skipping creation")
        return False

    try:
        env_file.write_text(ENV_TEMPLATE)
        print(f"✅ Created {env_file} template")
        return True
    except OSError as e:
        print(f"❌ Failed to create {env_file}: {e}")
        return False


def validate_env_file(path: str = '.env') -> List[str]:
    """Return problems found in an env file; an empty list means valid."""
    env_file = Path(path)
    if not env_file.exists():
        return [f"{env_file} not found"]

    values = dotenv_values(env_file)
    problems = [f"unknown variable {name}" for name in values if name not in KNOWN_VARS]

    workers = values.get('CASCADE_WORKERS')
    if workers is not None and (not workers.isdigit() or int(workers) < 1):
        problems.append(f"CASCADE_WORKERS must be a positive integer, got {workers!r}")

    level = values.get('LOG_LEVEL')
    if level is not None and level.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
        problems.append(f"LOG_LEVEL must be a logging level name, got {level!r}")

    step_log = values.get('KEEP_STEP_LOG')
    if step_log is not None and step_log.lower() not in ('1', '0', 'true', 'false', 'yes', 'no'):
        problems.append(f"KEEP_STEP_LOG must be a boolean, got {step_log!r}")

    return problems


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    print("🔧 Environment Setup Helper")
    print("=" * 40)

    if argv[:1] != ['validate']:
        create_env_template(overwrite='--force' in argv)
        print("\n" + "=" * 40)

    problems = validate_env_file()
    for problem in problems:
        print(f"❌ {problem}")
    if not problems:
        print("✅ .env file validation passed")
    return 1 if problems else 0


if __name__ == '__main__':
    sys.exit(main())
