import sys

from treentropy.cli import main

sys.exit(main())
