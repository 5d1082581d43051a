"""Main script for rationd"""
import sys

from rationd.cli import main

if __name__ == "__main__":
    sys.exit(main())
