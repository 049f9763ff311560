import sys
from pathlib import Path

# the plotting script lives one level up and is not installed
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))
