import sys

from resil.cli import main

sys.exit(main())
