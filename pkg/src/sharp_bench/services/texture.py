"""Texture-atlas colour access.

Addressing convention (fixed):
- u runs left to right across the image columns
- v = 0 is the BOTTOM row, v = 1 the TOP row
- texel (row i, column j) has its centre at u = (j + 0.5) / W,
  v = 1 - (i + 0.5) / H
- coordinates outside [0, 1] are clamped to the border (no wrap-around)
- filtering is bilinear between the four nearest texel centres
"""

from __future__ import annotations

import numpy as np

from sharp_bench.models.mesh import TextureImage


_SNAP = 1e-9


def _snap(frac: np.ndarray) -> np.ndarray:
    """Round interpolation weights within 1e-9 of 0 or 1 (texel centres are exact)."""
    frac = np.where(frac < _SNAP, 0.0, frac)
    return np.where(frac > 1.0 - _SNAP, 1.0, frac)


def texture_lookup_many(texture: TextureImage, uv: np.ndarray) -> np.ndarray:
    """Bilinear, clamp-to-border lookup of an (N, 2) array of coordinates.

    Returns:
        (N, 3) RGB values in [0, 1]
    """
    uv = np.asarray(uv, dtype=np.float64).reshape(-1, 2)
    pixels = texture.pixels
    h, w = pixels.shape[0], pixels.shape[1]

    u = np.clip(uv[:, 0], 0.0, 1.0)
    v = np.clip(uv[:, 1], 0.0, 1.0)

    # continuous texel coordinates, texel centres on integers
    x = np.clip(u * w - 0.5, 0.0, w - 1)
    y = np.clip((1.0 - v) * h - 0.5, 0.0, h - 1)

    x0 = np.floor(x).astype(np.int64)
    y0 = np.floor(y).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = _snap(x - x0)[:, None]
    fy = _snap(y - y0)[:, None]

    top = pixels[y0, x0] * (1.0 - fx) + pixels[y0, x1] * fx
    bottom = pixels[y1, x0] * (1.0 - fx) + pixels[y1, x1] * fx
    rgb = top * (1.0 - fy) + bottom * fy
    return np.clip(rgb, 0.0, 1.0)


def texture_lookup(texture: TextureImage, uv: tuple[float, float] | np.ndarray) -> np.ndarray:
    """Colour at a single texture coordinate.

    Example:
        >>> tex = TextureImage(np.array([[[1, 0, 0], [0, 0, 1]]], dtype=float))
        >>> texture_lookup(tex, (0.5, 0.5))
        array([0.5, 0. , 0.5])
    """
    return texture_lookup_many(texture, np.asarray(uv, dtype=np.float64)[None])[0]


def interpolate_uvs(corner_uvs: np.ndarray, triangles: np.ndarray, bary: np.ndarray) -> np.ndarray:
    """Texture coordinates at barycentric positions inside the given triangles."""
    uvs = corner_uvs[triangles]  # (N, 3, 2)
    return (
        uvs[:, 0] * bary[:, 0:1] + uvs[:, 1] * bary[:, 1:2] + uvs[:, 2] * bary[:, 2:3]
    )
