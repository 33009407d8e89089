"""
Command-line entry point for the experiment runner.

    python src/scripts/run_experiment.py sawtooth-evolve --n 3 --kT 1.5 --k 0.273 --t 1
    python src/scripts/run_experiment.py dump-circuit --n 4 --map-step
"""

import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent.parent.parent))

from src.cli.app import app  # noqa: E402


def main() -> None:
    app()


if __name__ == "__main__":
    main()
