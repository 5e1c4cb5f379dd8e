import sys

from fradex.cli import main

sys.exit(main())
