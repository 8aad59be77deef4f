import sys

from testbench.cli.main import main

sys.exit(main())
