"""Ellipse and uniform-linear-array geometry.

Scatterer clusters live on confocal ellipses whose foci are the transmit
and receive array centers.  The coordinate frame is fixed once for the
whole package: transmit focus at (-f, 0), receive focus at (+f, 0), all
angles measured counterclockwise from the positive x axis.  Antenna 1 of
a uniform linear array sits at the positive end of the array axis, so
antenna index l has signed offset (count - 2l + 1) * spacing / 2 from
the array center along the tilt direction.

Everything in this module is pure and deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0

__all__ = [
    "SPEED_OF_LIGHT",
    "ArrayConfig",
    "EllipseConfig",
    "VirtualAngleGrid",
    "GeometryError",
    "virtual_angles",
    "aod_from_aoa",
    "rx_focal_distance",
    "center_distances",
    "center_distances_sine_rule",
    "antenna_offset",
    "antenna_distance_tx",
    "antenna_distance_rx",
    "los_geometry",
    "los_doppler",
    "nearest_beam",
]


class GeometryError(ValueError):
    """Raised when a configuration is geometrically inconsistent."""


@dataclass(frozen=True)
class ArrayConfig:
    """Transmit and receive uniform linear arrays.

    Spacings are in meters, tilts in radians (angle of the array axis
    against the x axis, restricted to [0, pi)).
    """

    num_tx: int = 32
    num_rx: int = 32
    spacing_tx: float = 0.06
    spacing_rx: float = 0.06
    tilt_tx: float = math.pi / 2
    tilt_rx: float = math.pi / 2

    def __post_init__(self):
        if self.num_tx < 1 or self.num_rx < 1:
            raise ValueError("antenna counts must be at least 1")
        if self.spacing_tx <= 0 or self.spacing_rx <= 0:
            raise ValueError("antenna spacings must be positive")
        if not (0 <= self.tilt_tx < math.pi) or not (0 <= self.tilt_rx < math.pi):
            raise ValueError("array tilts must lie in [0, pi)")


@dataclass(frozen=True)
class EllipseConfig:
    """One confocal ellipse: semi-major axis and focal half-separation."""

    semi_major: float = 100.0
    focal_half: float = 80.0

    def __post_init__(self):
        if not (self.semi_major > self.focal_half > 0):
            raise ValueError("ellipse requires semi_major > focal_half > 0")


def virtual_angles(num_beams: int) -> np.ndarray:
    """Uniform angle grid -pi + 2*pi*m/M for m = 1..M (last entry is pi)."""
    if num_beams < 1:
        raise ValueError("num_beams must be at least 1")
    m = np.arange(1, num_beams + 1, dtype=float)
    return -math.pi + 2.0 * math.pi * m / num_beams


def rx_focal_distance(aoa, ellipse: EllipseConfig):
    """Distance from the receive focus to the ellipse point at polar angle aoa.

    Focal polar equation r(theta) = (a^2 - f^2) / (a + f*cos(theta)).
    """
    a, f = ellipse.semi_major, ellipse.focal_half
    return (a * a - f * f) / (a + f * np.cos(aoa))


def aod_from_aoa(aoa, ellipse: EllipseConfig):
    """Departure angle at the transmit focus for a given arrival angle.

    The scatterer is placed on the ellipse at polar angle ``aoa`` from the
    receive focus; the returned angle is the direction of that point seen
    from the transmit focus.  Accepts scalars or arrays.
    """
    f = ellipse.focal_half
    r = rx_focal_distance(aoa, ellipse)
    # Cartesian position relative to the transmit focus at (-f, 0):
    # scatterer = (f + r*cos(aoa), r*sin(aoa)), so shift by +2f in x.
    return np.arctan2(r * np.sin(aoa), r * np.cos(aoa) + 2.0 * f)


def center_distances(aoa, aod, ellipse: EllipseConfig):
    """Center-to-scatterer distances (tx_dist, rx_dist).

    Computed from the Cartesian placement implied by ``aoa``; the pair
    satisfies tx_dist + rx_dist = 2*semi_major by construction.  ``aod``
    is accepted for signature symmetry with the sine-rule cross-check
    and is not needed numerically.
    """
    rx = rx_focal_distance(aoa, ellipse)
    tx = 2.0 * ellipse.semi_major - rx
    return tx, rx


def center_distances_sine_rule(aoa, aod, ellipse: EllipseConfig):
    """Sine-rule form of the center distances, as a cross-check.

    tx = 2a*sin(aoa)/(sin(aoa)+sin(aod)), rx = 2a*sin(aod)/(...): the
    interior angle at the receive focus (pi - aoa here) faces the tx
    side.  Degenerate collinear angles fall back to the a +- f closed
    form.  Signs of the interior angles are handled through abs().
    """
    a, f = ellipse.semi_major, ellipse.focal_half
    sa = np.abs(np.sin(aoa))
    sd = np.abs(np.sin(aod))
    denom = sa + sd
    collinear = denom < 1e-12
    with np.errstate(invalid="ignore", divide="ignore"):
        tx = np.where(collinear, 0.0, 2.0 * a * sa / np.where(collinear, 1.0, denom))
        rx = np.where(collinear, 0.0, 2.0 * a * sd / np.where(collinear, 1.0, denom))
    # collinear scatterer: behind the receiver (aoa=0) or behind the
    # transmitter (aoa=pi)
    if np.any(collinear):
        near = np.cos(aoa) > 0
        tx = np.where(collinear, np.where(near, a + f, a - f), tx)
        rx = np.where(collinear, np.where(near, a - f, a + f), rx)
    return tx, rx


def antenna_offset(index: int, count: int, spacing: float) -> float:
    """Signed offset of antenna ``index`` (1-based) from the array center."""
    return (count - 2 * index + 1) * spacing / 2.0


def antenna_distance_tx(center_dist, aod, antenna_index: int, array: ArrayConfig):
    """Distance from transmit antenna ``antenna_index`` to the scatterer.

    Law of cosines between the center-to-scatterer segment and the
    antenna offset along the array axis; this is the exact spherical
    wavefront distance, no plane-wave approximation.
    """
    if not 1 <= antenna_index <= array.num_tx:
        raise ValueError(f"transmit antenna index {antenna_index} out of range")
    off = antenna_offset(antenna_index, array.num_tx, array.spacing_tx)
    return np.sqrt(
        center_dist * center_dist
        + off * off
        - 2.0 * center_dist * off * np.cos(array.tilt_tx - aod)
    )


def antenna_distance_rx(center_dist, aoa, antenna_index: int, array: ArrayConfig):
    """Distance from receive antenna ``antenna_index`` to the scatterer."""
    if not 1 <= antenna_index <= array.num_rx:
        raise ValueError(f"receive antenna index {antenna_index} out of range")
    off = antenna_offset(antenna_index, array.num_rx, array.spacing_rx)
    return np.sqrt(
        center_dist * center_dist
        + off * off
        - 2.0 * center_dist * off * np.cos(aoa - array.tilt_rx)
    )


def _clipped_asin(x: float, tol: float = 1e-9) -> float:
    if abs(x) > 1.0 + tol:
        raise GeometryError(f"arcsin argument {x} outside [-1, 1]")
    return math.asin(min(1.0, max(-1.0, x)))


def los_path_from_offsets(off_tx, off_rx, ellipse: EllipseConfig,
                          tilt_tx: float, tilt_rx: float):
    """Direct-path geometry for raw antenna offsets (vectorized).

    Returns (dist_l, alpha_l, dist_kl) where dist_l is the transmit
    antenna to receive-center distance, alpha_l the elevation of that
    path and dist_kl the full antenna-to-antenna distance.
    """
    off_tx = np.asarray(off_tx, dtype=float)
    off_rx = np.asarray(off_rx, dtype=float)
    sep = 2.0 * ellipse.focal_half
    dist_l = np.sqrt(sep * sep + off_tx * off_tx
                     - 2.0 * sep * off_tx * np.cos(tilt_tx))
    # bounded by 1 because dist_l^2 - (off*sin)^2 = (sep - off*cos)^2 >= 0
    arg = np.where(dist_l > 0.0, off_tx * np.sin(tilt_tx) / np.where(dist_l > 0.0, dist_l, 1.0), 0.0)
    alpha_l = np.arcsin(np.clip(arg, -1.0, 1.0))
    dist_kl = np.sqrt(dist_l * dist_l + off_rx * off_rx
                      - 2.0 * dist_l * off_rx * np.cos(alpha_l - tilt_rx))
    return dist_l, alpha_l, dist_kl


def los_doppler_from_offsets(off_tx, off_rx, ellipse: EllipseConfig,
                             tilt_tx: float, tilt_rx: float,
                             max_doppler: float, velocity_angle: float):
    """Direct-path Doppler for raw antenna offsets (vectorized)."""
    dist_l, alpha_l, dist_kl = los_path_from_offsets(off_tx, off_rx, ellipse,
                                                     tilt_tx, tilt_rx)
    # dist_kl >= dist_l*|sin(alpha_l - tilt_rx)| always
    arg = np.where(dist_kl > 0.0,
                   dist_l / np.where(dist_kl > 0.0, dist_kl, 1.0)
                   * np.sin(alpha_l - tilt_rx), 0.0)
    inner = np.arcsin(np.clip(arg, -1.0, 1.0))
    return max_doppler * np.cos(tilt_rx - velocity_angle + inner)


def los_geometry(antenna_l: int, antenna_k: int, ellipse: EllipseConfig,
                 array: ArrayConfig) -> tuple[float, float, float]:
    """Direct-path geometry between transmit antenna l and receive antenna k.

    Returns (dist_l_center, los_aoa_l, dist_kl):
      dist_l_center  distance from tx antenna l to the receive array center,
      los_aoa_l      angle of that path against the x axis (as seen leaving
                     antenna l toward the receive center),
      dist_kl        distance from tx antenna l to receive antenna k.
    """
    if not 1 <= antenna_l <= array.num_tx:
        raise ValueError(f"transmit antenna index {antenna_l} out of range")
    if not 1 <= antenna_k <= array.num_rx:
        raise ValueError(f"receive antenna index {antenna_k} out of range")
    sep = 2.0 * ellipse.focal_half
    off_t = antenna_offset(antenna_l, array.num_tx, array.spacing_tx)
    dist_l = math.sqrt(sep * sep + off_t * off_t
                       - 2.0 * sep * off_t * math.cos(array.tilt_tx))
    # sin of the elevation of the l -> rx-center path; bounded by 1 because
    # dist_l^2 - (off_t*sin(tilt))^2 = (sep - off_t*cos(tilt))^2 >= 0
    alpha_l = _clipped_asin(off_t * math.sin(array.tilt_tx) / dist_l)
    off_r = antenna_offset(antenna_k, array.num_rx, array.spacing_rx)
    dist_kl = math.sqrt(dist_l * dist_l + off_r * off_r
                        - 2.0 * dist_l * off_r * math.cos(alpha_l - array.tilt_rx))
    return dist_l, alpha_l, dist_kl


def los_doppler(antenna_l: int, antenna_k: int, ellipse: EllipseConfig,
                array: ArrayConfig, max_doppler: float,
                velocity_angle: float) -> float:
    """Doppler shift of the direct path between antennas l and k."""
    dist_l, alpha_l, dist_kl = los_geometry(antenna_l, antenna_k, ellipse, array)
    # dist_kl >= dist_l*|sin(alpha_l - tilt_rx)| always, so the argument
    # is in [-1, 1] up to roundoff
    inner = _clipped_asin(dist_l / dist_kl * math.sin(alpha_l - array.tilt_rx))
    return max_doppler * math.cos(array.tilt_rx - velocity_angle + inner)


def nearest_beam(angle: float, num_beams: int) -> int:
    """1-based index of the grid angle closest to ``angle`` (wrap-aware).

    Ties break toward the smaller index.
    """
    grid = virtual_angles(num_beams)
    diff = np.abs((angle - grid + math.pi) % (2.0 * math.pi) - math.pi)
    return int(np.argmin(diff)) + 1


@dataclass(frozen=True)
class VirtualAngleGrid:
    """The M uniformly sampled beam directions and their departure angles."""

    num_beams: int
    aoa: np.ndarray = field(repr=False)
    aod: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, num_beams: int, ellipse: EllipseConfig) -> "VirtualAngleGrid":
        aoa = virtual_angles(num_beams)
        aod = aod_from_aoa(aoa, ellipse)
        return cls(num_beams=num_beams, aoa=aoa, aod=aod)
