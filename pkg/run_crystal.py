# --------------------------------------------------------------------------
# run_crystal.py
# Should be located in root directory of the crystal graded lab project
# Usage: python run_crystal.py validate gaussian
# --------------------------------------------------------------------------
import os
import sys

from src.cli import main

# Reports saved with --out land under data/ unless told otherwise
os.makedirs("data", exist_ok=True)

if __name__ == "__main__":
    sys.exit(main())
