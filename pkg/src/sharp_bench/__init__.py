"""SHARP Bench - partial-scan generation and completion scoring.

This package generates partial textured 3D scans from complete ones and scores
candidate reconstructions against ground truth with the area, shape, texture
and overall scores.
"""

from pathlib import Path


__version__ = "0.1.0"
__author__ = "SHARP Bench Team"
__license__ = "MIT"

# Read version from VERSION file
_version_file = Path(__file__).parent / "VERSION"
if _version_file.exists():
    __version__ = _version_file.read_text().strip()


__all__ = [
    "__version__",
    "__author__",
    "__license__",
]
