"""File ingestion and canonical output.

Signals travel as one-number-per-line CSV; images as Netpbm PGM (ASCII P2
or binary P5, 8-bit or 16-bit big-endian). Output written here is canonical:
17 significant digits, '\n' endings, so save(load(f)) is byte-identical for
files this toolkit wrote.
"""
import numpy as np

from ._serialize import atomic_write_text, format_float
from .core import GrayImage
from .errors import ParseError, RangeError


def load_signal_csv(path):
    """Read a signal from CSV: one real per line, optional '#' header line."""
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not an ASCII text file (byte {exc.start})") from None
    values = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        token = line.strip()
        if not token:
            continue
        if token.startswith("#"):
            if lineno == 1:
                continue
            raise ParseError(f"{path}:{lineno}: comment allowed only on the first line")
        try:
            if "_" in token:
                raise ValueError
            value = float(token)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: not a number: {token!r}") from None
        if not np.isfinite(value):
            raise RangeError(f"{path}:{lineno}: non-finite value {token!r}")
        values.append(value)
    if not values:
        raise ParseError(f"{path}: no samples")
    return np.asarray(values, dtype=np.float64)


def save_signal_csv(signal, path):
    """Write a signal as canonical CSV (17 significant digits, '\n' endings)."""
    lines = [format_float(v) for v in np.asarray(signal, dtype=np.float64)]
    atomic_write_text(path, "\n".join(lines) + "\n")


def _pgm_tokens(data, path):
    """Yield whitespace-separated header tokens, skipping '#' comments.

    Also yields the byte offset just past each token so the binary raster
    start can be located after maxval.
    """
    i = 0
    n = len(data)
    while i < n:
        c = data[i:i + 1]
        if c in b" \t\r\n":
            i += 1
        elif c == b"#":
            while i < n and data[i:i + 1] not in b"\r\n":
                i += 1
        else:
            start = i
            while i < n and data[i:i + 1] not in b" \t\r\n#":
                i += 1
            yield data[start:i], i
    raise ParseError(f"{path}: truncated header")


def load_image_pgm(path):
    """Read a PGM image (P2 ASCII, or P5 binary 8/16-bit big-endian)."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = _pgm_tokens(data, path)
    magic, _ = next(tokens)
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"{path}: unsupported magic {magic!r} (want P2 or P5)")
    header = []
    offset = 0
    for _ in range(3):
        token, offset = next(tokens)
        try:
            header.append(int(token))
        except ValueError:
            raise ParseError(f"{path}: bad header token {token!r}") from None
    width, height, maxval = header
    if width < 1 or height < 1:
        raise ParseError(f"{path}: bad dimensions {width}x{height}")
    if not 0 < maxval < 65536:
        raise ParseError(f"{path}: bad maxval {maxval}")
    count = width * height

    if magic == b"P2":
        try:
            flat = np.array(data[offset:].split(), dtype=np.int64)
        except ValueError:
            raise ParseError(f"{path}: non-integer pixel data") from None
        if flat.size != count:
            raise ParseError(f"{path}: expected {count} pixels, found {flat.size}")
    else:
        # single whitespace byte separates maxval from the raster
        raster = data[offset + 1:]
        itemsize = 1 if maxval < 256 else 2
        if len(raster) < count * itemsize:
            raise ParseError(
                f"{path}: raster has {len(raster)} bytes, needs {count * itemsize}")
        dtype = np.uint8 if itemsize == 1 else np.dtype(">u2")
        flat = np.frombuffer(raster[:count * itemsize], dtype=dtype).astype(np.int64)

    if flat.min() < 0 or flat.max() > maxval:
        raise RangeError(f"{path}: pixel value outside [0, {maxval}]")
    pixels = flat.astype(np.float64).reshape(height, width)
    image = GrayImage(width=width, height=height, pixels=pixels,
                      source_min=0.0, source_max=float(maxval))
    return image.validate()


def save_table_csv(rows, path, header=None):
    """Write rows of numbers as canonical CSV, with an optional '#' header."""
    lines = []
    if header is not None:
        lines.append("# " + header)
    for row in rows:
        lines.append(",".join(
            str(int(c)) if isinstance(c, (int, np.integer)) else format_float(c)
            for c in row))
    atomic_write_text(path, "\n".join(lines) + "\n")
