"""Images as flat row-major intensity buffers, plus Netpbm I/O.

Grey images hold float intensities in [0, 1]; binary images hold 0/1
activity flags. Supported formats are PGM (P2 ascii, P5 binary) for grey
input, PBM (P1 ascii) for binary input/output, and a canonical P2 writer
for grey output. Header grammar follows the Netpbm convention:
whitespace-separated tokens with '#' comments.

Images are treated as immutable once constructed; concurrent reads are
safe.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .rng import RngStream

_WHITESPACE = b" \t\n\r\x0b\x0c"


class NetpbmError(ValueError):
    """Malformed Netpbm data; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


class ThresholdDirection(enum.Enum):
    """Which side of the threshold counts as active; GEQ treats ties as active."""

    GEQ = "geq"
    LT = "lt"


@dataclass(frozen=True)
class GrayImage:
    """Grey-value image: row-major intensities in [0, 1], top row first."""

    rows: int
    cols: int
    intensities: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.intensities, dtype=np.float64)
        object.__setattr__(self, "intensities", arr)
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"image dimensions must be positive, got {self.rows}x{self.cols}")
        if arr.shape != (self.rows * self.cols,):
            raise ValueError(
                f"expected {self.rows * self.cols} intensities, got {arr.shape}"
            )
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("intensities must lie in [0, 1]")


@dataclass(frozen=True)
class BinaryImage:
    """Thresholded image: row-major 0/1 activity flags."""

    rows: int
    cols: int
    active: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.active, dtype=np.uint8)
        object.__setattr__(self, "active", arr)
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"image dimensions must be positive, got {self.rows}x{self.cols}")
        if arr.shape != (self.rows * self.cols,):
            raise ValueError(f"expected {self.rows * self.cols} flags, got {arr.shape}")
        if arr.size and arr.max() > 1:
            raise ValueError("binary image entries must be 0 or 1")

    @property
    def active_count(self) -> int:
        return int(self.active.sum())


def _skip_separators(data: bytes, pos: int) -> int:
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


def _next_token(data: bytes, pos: int) -> tuple[bytes, int, int]:
    """Next header token; returns (token, token_offset, position_after)."""
    pos = _skip_separators(data, pos)
    if pos >= len(data):
        raise NetpbmError("unexpected end of data", pos)
    start = pos
    while pos < len(data) and data[pos] not in _WHITESPACE:
        pos += 1
    return data[start:pos], start, pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, start, pos = _next_token(data, pos)
    try:
        value = int(token.decode("ascii"))
    except (UnicodeDecodeError, ValueError):
        raise NetpbmError(f"expected integer {what}", start) from None
    return value, pos


def load_gray(data: bytes) -> GrayImage:
    """Parse a PGM image (P2 or P5, auto-detected from the magic number).

    Intensities are the raw samples divided by maxval.
    """
    magic, magic_at, pos = _next_token(data, 0)
    if magic not in (b"P2", b"P5"):
        raise NetpbmError(f"not a PGM image (magic {magic!r})", magic_at)
    cols, pos = _header_int(data, pos, "width")
    rows, pos = _header_int(data, pos, "height")
    if cols < 1 or rows < 1:
        raise NetpbmError(f"invalid dimensions {cols}x{rows}", magic_at)
    maxval, pos = _header_int(data, pos, "maxval")
    if maxval < 1 or maxval > 65535:
        raise NetpbmError(f"maxval {maxval} out of range 1..65535", magic_at)

    count = rows * cols
    if magic == b"P5":
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise NetpbmError("expected single whitespace before binary pixels", pos)
        pos += 1
        width = 1 if maxval < 256 else 2
        if len(data) - pos < count * width:
            raise NetpbmError("truncated pixel data", len(data))
        dtype = np.uint8 if width == 1 else np.dtype(">u2")
        raw = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
        if raw.size and int(raw.max()) > maxval:
            raise NetpbmError(f"sample exceeds maxval {maxval}", pos)
        values = raw.astype(np.float64)
    else:
        samples = np.empty(count, dtype=np.float64)
        for i in range(count):
            value, pos = _header_int(data, pos, "pixel value")
            if not 0 <= value <= maxval:
                raise NetpbmError(f"sample {value} exceeds maxval {maxval}", pos)
            samples[i] = value
        values = samples

    return GrayImage(rows, cols, values / maxval)


def load_binary(data: bytes) -> BinaryImage:
    """Parse a PBM image (P1 ascii). A 1 bit is an active site."""
    magic, magic_at, pos = _next_token(data, 0)
    if magic != b"P1":
        raise NetpbmError(f"not an ascii PBM image (magic {magic!r})", magic_at)
    cols, pos = _header_int(data, pos, "width")
    rows, pos = _header_int(data, pos, "height")
    if cols < 1 or rows < 1:
        raise NetpbmError(f"invalid dimensions {cols}x{rows}", magic_at)

    count = rows * cols
    flags = np.empty(count, dtype=np.uint8)
    filled = 0
    n = len(data)
    while filled < count:
        pos = _skip_separators(data, pos)
        if pos >= n:
            raise NetpbmError(
                f"truncated pixel data: expected {count} bits, got {filled}", pos
            )
        c = data[pos]
        if c == ord("0"):
            flags[filled] = 0
        elif c == ord("1"):
            flags[filled] = 1
        else:
            raise NetpbmError(f"invalid PBM bit {chr(c)!r}", pos)
        filled += 1
        pos += 1
    return BinaryImage(rows, cols, flags)


def save_binary(image: BinaryImage) -> bytes:
    """Serialize to ascii PBM (P1), one packed digit row per line."""
    lines = [b"P1", f"{image.cols} {image.rows}".encode()]
    flags = image.active
    for r in range(image.rows):
        row = flags[r * image.cols : (r + 1) * image.cols]
        lines.append(bytes(row + ord("0")))
    return b"\n".join(lines) + b"\n"


def save_gray(image: GrayImage, maxval: int = 255) -> bytes:
    """Serialize to canonical ascii PGM (P2); intensities quantized to maxval."""
    if not 1 <= maxval <= 65535:
        raise ValueError(f"maxval {maxval} out of range 1..65535")
    samples = np.rint(image.intensities * maxval).astype(np.int64)
    lines = [b"P2", f"{image.cols} {image.rows}".encode(), str(maxval).encode()]
    for r in range(image.rows):
        row = samples[r * image.cols : (r + 1) * image.cols]
        lines.append(" ".join(str(v) for v in row.tolist()).encode())
    return b"\n".join(lines) + b"\n"


def threshold(
    image: GrayImage,
    tau: float,
    direction: ThresholdDirection = ThresholdDirection.GEQ,
) -> BinaryImage:
    """Binarize a grey image at level ``tau``.

    GEQ marks pixels with intensity >= tau active (ties active); LT marks
    intensity < tau active.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"threshold tau must lie in [0, 1], got {tau}")
    if direction is ThresholdDirection.GEQ:
        active = image.intensities >= tau
    else:
        active = image.intensities < tau
    return BinaryImage(image.rows, image.cols, active.astype(np.uint8))


def generate_percolation(p: float, rows: int, cols: int, rng: RngStream) -> BinaryImage:
    """Random binary image: each site independently active with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"occupation probability must lie in [0, 1], got {p}")
    if rows < 1 or cols < 1:
        raise ValueError(f"image dimensions must be positive, got {rows}x{cols}")
    draws = rng.generator().random(rows * cols)
    return BinaryImage(rows, cols, (draws < p).astype(np.uint8))
