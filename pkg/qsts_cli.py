"""
Command-line entry point for the QSTS simulator
"""
import sys

from modules.cli import run_cli

if __name__ == "__main__":
    sys.exit(run_cli())
