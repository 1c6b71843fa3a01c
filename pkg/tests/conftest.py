import os
import sys

# make the oracle helpers importable as "oracles"
sys.path.insert(0, os.path.dirname(__file__))
