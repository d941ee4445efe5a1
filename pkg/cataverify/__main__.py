import sys

from cataverify.main import main

sys.exit(main())
