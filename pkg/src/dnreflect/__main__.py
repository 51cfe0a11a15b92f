import sys

from dnreflect.cli import main

sys.exit(main())
