import sys

from qslkit.main import main

sys.exit(main())
