import sys

from src.suppvar.cli import main


if __name__ == '__main__':
    sys.exit(main())
