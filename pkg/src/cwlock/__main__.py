import sys

from cwlock.cli import main

sys.exit(main())
