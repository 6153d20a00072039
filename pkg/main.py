"""
approxmax command-line entry point.

Usage:
    python main.py gen-lut --samples 8 --degree linear --format q16.15 --domain -1,1
    python main.py sweep --seed 42 --out reports/table.csv --summary-out reports/table.json
"""

# Load environment variables FIRST (before any other imports)
from dotenv import load_dotenv

load_dotenv()

import sys  # noqa: E402

from approxmax.cli import main  # noqa: E402


if __name__ == "__main__":
    sys.exit(main())
