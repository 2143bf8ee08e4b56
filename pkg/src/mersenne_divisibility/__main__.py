"""
Entry point for running the checker as a module: python -m mersenne_divisibility
"""

from .cli import main

if __name__ == "__main__":
    main()
