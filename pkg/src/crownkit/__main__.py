import sys

from crownkit.cli import main

sys.exit(main())
