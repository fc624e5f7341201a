"""Character varieties, ideal points and tautological Azumaya extensions."""
from __future__ import annotations

__version__ = "0.1.0"
