"""Damage segmentation inside a detection crop.

A crop is split into road-marking and background-road regions, each region
yields zero-order edges (automatic thresholding, which catches potholes and
thick cracks) and first-order edges (Sobel, which catches thin cracks), the
two orders are blended with class-dependent weights, and the per-region
results are collated back into one mask for the whole crop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import raster
from .errors import DegenerateInputError, ParameterError


class DamageClass(Enum):
    LONGITUDINAL_CRACK = "longitudinal_crack"
    TRANSVERSE_CRACK = "transverse_crack"
    ALLIGATOR_CRACK = "alligator_crack"
    POTHOLE = "pothole"

    @property
    def is_linear(self) -> bool:
        return self in (DamageClass.LONGITUDINAL_CRACK, DamageClass.TRANSVERSE_CRACK)


# (zero-order, first-order) blend weights per class. Potholes are areas of
# low intensity, linear cracks are gradient structures, alligator webs are
# mostly area-like with some gradient support.
_DEFAULT_WEIGHTS: dict[DamageClass, tuple[float, float]] = {
    DamageClass.POTHOLE: (1.0, 0.0),
    DamageClass.LONGITUDINAL_CRACK: (0.0, 1.0),
    DamageClass.TRANSVERSE_CRACK: (0.0, 1.0),
    DamageClass.ALLIGATOR_CRACK: (0.7, 0.3),
}


@dataclass
class SegParams:
    """Tunable knobs of the crop segmentation.

    sobel_percentile keeps the top (100 - p)% of in-region gradient
    magnitudes; the marking region multiplies the resulting threshold by
    marking_sobel_gain because paint edges are much stronger than cracks.
    """

    bilateral_sigma_spatial: float = 3.0
    bilateral_sigma_range: float = 25.0
    bilateral_radius: int = 4
    sobel_percentile: float = 90.0
    marking_sobel_gain: float = 2.0
    zero_order_open_radius: int = 1
    zero_order_close_radius: int = 2
    first_order_close_radius: int = 2
    first_order_open_radius: int = 1
    order_weights: dict[DamageClass, tuple[float, float]] = field(
        default_factory=lambda: dict(_DEFAULT_WEIGHTS)
    )
    binarization_level: float = 0.5
    min_component_px: int = 16

    def __post_init__(self) -> None:
        if not (0.0 < self.sobel_percentile < 100.0):
            raise ParameterError("sobel_percentile must lie in (0, 100)")
        for cls, (w0, w1) in self.order_weights.items():
            if w0 < 0 or w1 < 0 or abs(w0 + w1 - 1.0) > 1e-9:
                raise ParameterError(f"order weights for {cls} must be >= 0 and sum to 1")


@dataclass
class DamageCrop:
    """Detector crop: pixels, class, optional marking mask, source box."""

    pixels: np.ndarray  # (H, W, 3) uint8
    damage_class: DamageClass
    marking_mask: np.ndarray | None = None  # bool, True on road-marking paint
    source_box: tuple[float, float, float, float] | None = None  # (x, y, w, h) in frame

    def __post_init__(self) -> None:
        if self.marking_mask is not None and self.marking_mask.shape != self.pixels.shape[:2]:
            raise ParameterError("marking_mask dimensions must match the crop")


@dataclass
class DamageMask:
    """Segmented damage pixels of one crop."""

    mask: np.ndarray  # bool, crop coordinates
    damage_class: DamageClass


def split_regions(crop: DamageCrop) -> tuple[np.ndarray, np.ndarray]:
    """Partition the crop into (road_region, marking_region)."""
    h, w = crop.pixels.shape[:2]
    if crop.marking_mask is None:
        marking = np.zeros((h, w), dtype=bool)
    else:
        marking = np.asarray(crop.marking_mask, dtype=bool)
    return ~marking, marking


def extract_edges(
    region_pixels: np.ndarray,
    region: np.ndarray,
    params: SegParams,
    sobel_gain: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Zero-order (threshold) and first-order (Sobel) edges inside a region.

    Zero-order: pixels at or below the automatic threshold of the region
    histogram, opened then closed. First-order: gradient magnitudes above
    the configured percentile of in-region magnitudes (times sobel_gain),
    closed then opened so fragmented crack responses connect first.
    Both outputs are False outside the region.
    """
    region = np.asarray(region, dtype=bool)
    if not region.any():
        raise ParameterError("extract_edges needs a non-empty region")

    try:
        level = raster.otsu_threshold(region_pixels, region)
        zero = (region_pixels <= level) & region
    except DegenerateInputError:
        zero = np.zeros_like(region)
    if zero.any():
        zero = raster.morph(zero, "open", params.zero_order_open_radius)
        zero = raster.morph(zero, "close", params.zero_order_close_radius)
        zero &= region

    grad = raster.sobel(region_pixels)
    in_region = grad.magnitude[region]
    thr = np.percentile(in_region, params.sobel_percentile) * sobel_gain
    first = (grad.magnitude > thr) & region
    if first.any():
        first = raster.morph(first, "close", params.first_order_close_radius)
        first = raster.morph(first, "open", params.first_order_open_radius)
        first &= region
    return zero, first


def aggregate_orders(
    zero_order: np.ndarray,
    first_order: np.ndarray,
    damage_class: DamageClass,
    params: SegParams,
) -> np.ndarray:
    """Blend zero- and first-order edges with the class weights."""
    zero = np.asarray(zero_order, dtype=bool)
    first = np.asarray(first_order, dtype=bool)
    if zero.shape != first.shape:
        raise ParameterError("order masks must share dimensions")
    w0, w1 = params.order_weights[damage_class]
    score = w0 * zero.astype(np.float64) + w1 * first.astype(np.float64)
    return score >= params.binarization_level


def collate_masks(
    road_part: np.ndarray,
    marking_part: np.ndarray,
    marking_region: np.ndarray,
) -> np.ndarray:
    """Stitch per-region masks back together along the marking partition."""
    road_part = np.asarray(road_part, dtype=bool)
    marking_part = np.asarray(marking_part, dtype=bool)
    marking_region = np.asarray(marking_region, dtype=bool)
    if not (road_part.shape == marking_part.shape == marking_region.shape):
        raise ParameterError("collate_masks inputs must share dimensions")
    return (road_part & ~marking_region) | (marking_part & marking_region)


def segment_damage(crop: DamageCrop, params: SegParams | None = None) -> DamageMask:
    """Full crop segmentation: denoise, split, edge-extract, blend, collate."""
    params = params or SegParams()
    h, w = crop.pixels.shape[:2]
    if h < 8 or w < 8:
        raise ParameterError(f"crop too small to segment: {w}x{h}")

    gray = raster.to_grayscale(crop.pixels)
    smooth = raster.bilateral_filter(
        gray,
        params.bilateral_sigma_spatial,
        params.bilateral_sigma_range,
        params.bilateral_radius,
    )
    road_region, marking_region = split_regions(crop)

    empty = np.zeros((h, w), dtype=bool)
    road_mask = empty
    if road_region.any():
        zero, first = extract_edges(smooth, road_region, params)
        road_mask = aggregate_orders(zero, first, crop.damage_class, params)
    marking_mask = empty
    if marking_region.any():
        zero, first = extract_edges(smooth, marking_region, params, params.marking_sobel_gain)
        marking_mask = aggregate_orders(zero, first, crop.damage_class, params)

    combined = collate_masks(road_mask, marking_mask, marking_region)
    combined = raster.remove_small_components(combined, params.min_component_px)
    return DamageMask(mask=combined, damage_class=crop.damage_class)
