import sys

from invariant_schemes.harness.cli import main

sys.exit(main())
