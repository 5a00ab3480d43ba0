"""Entry point for running kakamatch as a module."""

import sys

from kakamatch.cli import main

if __name__ == "__main__":
    sys.exit(main())
