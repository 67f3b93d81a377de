"""Design engine for lightning-protection projects.

Parametric document model, RD 34.21.122-87 protection zones, drawing
generation, the calculation table, canonical persistence, an HTTP facade
and a batch CLI.
"""

__version__ = "0.1.0"

from . import model, zonecalc  # noqa: F401
