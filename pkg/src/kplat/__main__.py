"""
Run kplat as a module: python -m kplat
"""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
