import sys

from weylwalk.cli import main

sys.exit(main())
