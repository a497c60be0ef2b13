import sys

from .run_chebytower import main

sys.exit(main())
