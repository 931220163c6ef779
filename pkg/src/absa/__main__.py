import sys

from absa.cli import main

sys.exit(main())
