"""Allow running as python -m shellspec."""

from ._cli import main

if __name__ == "__main__":
    main()
