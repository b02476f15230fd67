import sys

from kahler_lab.run import main

if __name__ == '__main__':
    sys.exit(main())
