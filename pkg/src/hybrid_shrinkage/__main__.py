"""Allow ``python -m hybrid_shrinkage``."""

import sys

from hybrid_shrinkage.cli import main

sys.exit(main())
