"""Classical raster operators used by segmentation and quantification.

Images are plain numpy arrays: grayscale is a 2-D uint8 array, RGB is
(H, W, 3) uint8, binary masks are 2-D bool. Connectivity is 8-way
throughout because cracks are thin diagonal structures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from skimage.morphology import skeletonize as _skimage_skeletonize

from .errors import DegenerateInputError, ParameterError

# Luminance weights: standard broadcast convention.
_LUMA = (0.299, 0.587, 0.114)

_STRUCT_8 = np.ones((3, 3), dtype=np.uint8)

_SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.int64)
_SOBEL_Y = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.int64)


@dataclass
class GradientField:
    """Per-pixel gradient magnitude plus orientation folded into [0, pi)."""

    magnitude: np.ndarray
    orientation: np.ndarray


@dataclass
class Component:
    """One 8-connected region of a binary mask."""

    label: int
    area: int
    bbox: tuple[int, int, int, int]  # (x, y, w, h) in pixel coordinates
    mask: np.ndarray  # full-size bool array, True on this component


def _check_gray(image: np.ndarray) -> np.ndarray:
    img = np.asarray(image)
    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ParameterError(f"expected 2-D grayscale image, got shape {img.shape}")
    return img


def to_grayscale(image: np.ndarray) -> np.ndarray:
    """Convert an (H, W, 3) uint8 RGB image to uint8 luminance."""
    img = np.asarray(image)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ParameterError(f"expected (H, W, 3) RGB image, got shape {img.shape}")
    lum = (
        _LUMA[0] * img[..., 0].astype(np.float64)
        + _LUMA[1] * img[..., 1].astype(np.float64)
        + _LUMA[2] * img[..., 2].astype(np.float64)
    )
    return np.clip(np.rint(lum), 0, 255).astype(np.uint8)


def bilateral_filter(
    image: np.ndarray,
    sigma_spatial: float,
    sigma_range: float,
    radius: int,
) -> np.ndarray:
    """Edge-preserving smoothing with per-pixel normalized Gaussian weights.

    Each output pixel is a convex combination of the pixels in its
    (2*radius+1)^2 window, weighted by a spatial Gaussian times a range
    (intensity difference) Gaussian. Borders replicate the edge pixel.
    """
    img = _check_gray(image)
    if sigma_spatial <= 0 or sigma_range <= 0:
        raise ParameterError("bilateral sigmas must be positive")
    if radius < 1:
        raise ParameterError("bilateral radius must be >= 1")

    src = img.astype(np.float64)
    padded = np.pad(src, radius, mode="edge")
    h, w = src.shape
    acc = np.zeros_like(src)
    norm = np.zeros_like(src)
    inv2_s = 1.0 / (2.0 * sigma_spatial * sigma_spatial)
    inv2_r = 1.0 / (2.0 * sigma_range * sigma_range)
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            shifted = padded[radius + dy : radius + dy + h, radius + dx : radius + dx + w]
            w_spatial = np.exp(-(dx * dx + dy * dy) * inv2_s)
            diff = shifted - src
            weight = w_spatial * np.exp(-(diff * diff) * inv2_r)
            acc += weight * shifted
            norm += weight
    out = acc / norm
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def otsu_threshold(image: np.ndarray, roi: np.ndarray | None = None) -> int:
    """Threshold maximizing between-class variance over the 256-bin histogram.

    Class 0 is values <= t (damage images darker than asphalt). Ties are
    broken toward the smallest maximizing t. Raises DegenerateInputError
    when the region holds fewer than two pixels or a single intensity.
    """
    img = _check_gray(image)
    if roi is not None:
        values = img[np.asarray(roi, dtype=bool)]
    else:
        values = img.reshape(-1)
    if values.size < 2:
        raise DegenerateInputError("otsu needs at least 2 pixels")
    hist = np.bincount(values.astype(np.int64), minlength=256)
    if np.count_nonzero(hist) < 2:
        raise DegenerateInputError("otsu needs at least 2 distinct intensities")

    # Integer cumulative moments keep the variance sweep exact.
    levels = np.arange(256, dtype=np.int64)
    w0 = np.cumsum(hist)                      # pixels with value <= t
    m0 = np.cumsum(hist * levels)             # their intensity mass
    total = w0[-1]
    mass = m0[-1]
    w1 = total - w0
    valid = (w0 > 0) & (w1 > 0)
    mu0 = np.where(valid, m0 / np.maximum(w0, 1), 0.0)
    mu1 = np.where(valid, (mass - m0) / np.maximum(w1, 1), 0.0)
    sigma_b = np.where(valid, w0 * w1 * (mu0 - mu1) ** 2, -1.0)
    return int(np.argmax(sigma_b))


def sobel(image: np.ndarray) -> GradientField:
    """3x3 Sobel gradients with edge-replicated borders.

    Magnitude is sqrt(Gx^2 + Gy^2); orientation is atan2(Gy, Gx) folded
    into [0, pi). Kernels are applied as correlations in exact integer
    arithmetic before the final sqrt.
    """
    img = _check_gray(image)
    if img.shape[0] < 3 or img.shape[1] < 3:
        raise ParameterError("sobel needs an image of at least 3x3 pixels")
    padded = np.pad(img.astype(np.int64), 1, mode="edge")
    h, w = img.shape
    gx = np.zeros((h, w), dtype=np.int64)
    gy = np.zeros((h, w), dtype=np.int64)
    for ky in range(3):
        for kx in range(3):
            window = padded[ky : ky + h, kx : kx + w]
            if _SOBEL_X[ky, kx]:
                gx += _SOBEL_X[ky, kx] * window
            if _SOBEL_Y[ky, kx]:
                gy += _SOBEL_Y[ky, kx] * window
    magnitude = np.sqrt(gx.astype(np.float64) ** 2 + gy.astype(np.float64) ** 2)
    orientation = np.mod(np.arctan2(gy.astype(np.float64), gx.astype(np.float64)), np.pi)
    return GradientField(magnitude=magnitude, orientation=orientation)


def morph(mask: np.ndarray, op: str, radius: int) -> np.ndarray:
    """Binary morphology with a square structuring element of side 2r+1.

    Erosion treats pixels outside the image as True and dilation as False,
    so opening stays anti-extensive and closing extensive at the borders.
    """
    m = np.asarray(mask, dtype=bool)
    if radius < 1:
        raise ParameterError("morphology radius must be >= 1")
    size = 2 * radius + 1
    struct = np.ones((size, size), dtype=bool)

    def _erode(a: np.ndarray) -> np.ndarray:
        return ndimage.binary_erosion(a, structure=struct, border_value=1)

    def _dilate(a: np.ndarray) -> np.ndarray:
        return ndimage.binary_dilation(a, structure=struct, border_value=0)

    if op == "erode":
        return _erode(m)
    if op == "dilate":
        return _dilate(m)
    if op == "open":
        return _dilate(_erode(m))
    if op == "close":
        return _erode(_dilate(m))
    raise ParameterError(f"unknown morphology op {op!r}")


def connected_components(mask: np.ndarray) -> list[Component]:
    """8-connected components of a boolean mask, with bounding boxes."""
    m = np.asarray(mask, dtype=bool)
    labels, count = ndimage.label(m, structure=_STRUCT_8)
    out: list[Component] = []
    for idx, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None:
            continue
        comp = labels == idx
        ys, xs = sl
        out.append(
            Component(
                label=idx,
                area=int(comp.sum()),
                bbox=(xs.start, ys.start, xs.stop - xs.start, ys.stop - ys.start),
                mask=comp,
            )
        )
    return out


def remove_small_components(mask: np.ndarray, min_area: int) -> np.ndarray:
    """Drop 8-connected components with fewer than min_area pixels."""
    m = np.asarray(mask, dtype=bool)
    if min_area <= 1 or not m.any():
        return m.copy()
    labels, count = ndimage.label(m, structure=_STRUCT_8)
    if count == 0:
        return m.copy()
    areas = np.bincount(labels.reshape(-1))
    keep = areas >= min_area
    keep[0] = False
    return keep[labels]


def skeletonize(mask: np.ndarray) -> np.ndarray:
    """Thin a mask to a 1-pixel-wide, connectivity-preserving centerline."""
    m = np.asarray(mask, dtype=bool)
    return np.asarray(_skimage_skeletonize(m), dtype=bool)
