import sys

from pdmwell.cli import main

sys.exit(main())
