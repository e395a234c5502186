# keeps `import oracles` working regardless of pytest import mode
import os
import sys

sys.path.insert(0, os.path.dirname(__file__))
