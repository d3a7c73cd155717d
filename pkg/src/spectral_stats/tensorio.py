"""Tensor interchange I/O: a strict NPY v1.0 subset plus a JSON dataset manifest.

Accepted tensor files are little-endian float32/float64, C-order, rank 2-4.
Anything else is rejected rather than transposed or cast, so a write/read
round trip is bit-exact and downstream spectra never see NaN/Inf.
"""

from __future__ import annotations

import ast
import json
import os
import struct
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DataError,
    FormatError,
    IoError,
    ManifestError,
    UnsupportedLayout,
    VersionError,
)

MAGIC = b"\x93NUMPY"

_SUPPORTED_DESCR = {"<f4": np.dtype("<f4"), "<f8": np.dtype("<f8")}
_HEADER_ALIGN = 64

MANIFEST_KINDS = ("image", "activation")


def read_tensor(path: str | Path) -> np.ndarray:
    """Load a tensor file, returning a C-order float array of rank 2-4.

    Raises FormatError for anything that does not parse as NPY v1.0,
    UnsupportedLayout for valid files outside the supported subset
    (fortran order, non-float dtype, rank not in 2..4, zero-size dims),
    and DataError if the payload contains NaN/Inf.
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    if len(raw) < 10 or raw[:6] != MAGIC:
        raise FormatError(f"{path}: missing NPY magic string")
    major, minor = raw[6], raw[7]
    if (major, minor) != (1, 0):
        raise FormatError(f"{path}: unsupported NPY version {major}.{minor}")
    (hlen,) = struct.unpack("<H", raw[8:10])
    header_end = 10 + hlen
    if len(raw) < header_end:
        raise FormatError(f"{path}: truncated header")
    try:
        header = ast.literal_eval(raw[10:header_end].decode("latin1").strip())
    except (ValueError, SyntaxError) as exc:
        raise FormatError(f"{path}: unparseable header") from exc
    if not isinstance(header, dict) or set(header) != {"descr", "fortran_order", "shape"}:
        raise FormatError(f"{path}: header must have exactly descr/fortran_order/shape")

    descr = header["descr"]
    if descr not in _SUPPORTED_DESCR:
        raise UnsupportedLayout(f"{path}: dtype {descr!r} not supported (expect <f4 or <f8)")
    if header["fortran_order"] is not False:
        raise UnsupportedLayout(f"{path}: fortran-order data not supported")
    shape = header["shape"]
    if not isinstance(shape, tuple) or not all(
        isinstance(d, int) and not isinstance(d, bool) and d >= 0 for d in shape
    ):
        raise FormatError(f"{path}: malformed shape {shape!r}")
    if not 2 <= len(shape) <= 4:
        raise UnsupportedLayout(f"{path}: rank {len(shape)} outside supported range 2..4")
    if any(d == 0 for d in shape):
        raise UnsupportedLayout(f"{path}: zero-size dimension in shape {shape}")

    dtype = _SUPPORTED_DESCR[descr]
    nbytes = dtype.itemsize * int(np.prod(shape))
    payload = raw[header_end:]
    if len(payload) != nbytes:
        raise FormatError(
            f"{path}: payload is {len(payload)} bytes, header implies {nbytes}"
        )
    arr = np.frombuffer(payload, dtype=dtype).reshape(shape).copy()
    if not np.isfinite(arr).all():
        raise DataError(f"{path}: payload contains NaN or Inf")
    return arr


def write_tensor(path: str | Path, t: np.ndarray) -> None:
    """Write a float tensor so that read_tensor reproduces it bit-exactly.

    The file is written to a temp name and renamed into place, so a failed
    write never leaves a partial file behind.
    """
    t = np.asarray(t)
    if t.dtype not in (np.dtype("<f4"), np.dtype("<f8"), np.dtype(">f4"), np.dtype(">f8")):
        raise UnsupportedLayout(f"dtype {t.dtype} not supported (expect float32/float64)")
    if not 2 <= t.ndim <= 4:
        raise UnsupportedLayout(f"rank {t.ndim} outside supported range 2..4")
    if t.size == 0:
        raise UnsupportedLayout("zero-size tensors not supported")
    if not np.isfinite(t).all():
        raise DataError("refusing to write NaN/Inf values")

    descr = "<f4" if t.dtype.itemsize == 4 else "<f8"
    out = np.ascontiguousarray(t, dtype=np.dtype(descr))
    header = _build_header(descr, out.shape)
    path = Path(path)
    tmp_name = None
    try:
        with tempfile.NamedTemporaryFile(
            mode="wb", dir=path.parent, prefix=path.name + ".", delete=False
        ) as fh:
            tmp_name = fh.name
            fh.write(header)
            fh.write(out.tobytes(order="C"))
        os.replace(tmp_name, path)
        tmp_name = None
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    finally:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)


def _build_header(descr: str, shape: tuple[int, ...]) -> bytes:
    shape_repr = repr(tuple(int(d) for d in shape))
    body = f"{{'descr': '{descr}', 'fortran_order': False, 'shape': {shape_repr}, }}"
    # magic(6) + version(2) + header-length(2) + body, space-padded to 64 bytes
    unpadded = 10 + len(body) + 1
    pad = (-unpadded) % _HEADER_ALIGN
    body = body + " " * pad + "\n"
    return MAGIC + b"\x01\x00" + struct.pack("<H", len(body)) + body.encode("latin1")


@dataclass(frozen=True)
class ManifestItem:
    """One dataset entry: a tensor file plus what it represents."""

    path: str
    kind: str  # "image" | "activation"
    shape: tuple[int, ...]
    layer: int | None = None


@dataclass(frozen=True)
class DatasetManifest:
    version: int
    items: tuple[ManifestItem, ...] = field(default_factory=tuple)
    root: Path = Path(".")

    def resolve(self, item: ManifestItem) -> Path:
        return self.root / item.path

    def load(self, item: ManifestItem) -> np.ndarray:
        arr = read_tensor(self.resolve(item))
        if tuple(arr.shape) != item.shape:
            raise ManifestError(
                f"{item.path}: file shape {tuple(arr.shape)} does not match "
                f"declared shape {item.shape}"
            )
        return arr

    def load_all(self) -> list[np.ndarray]:
        return [self.load(item) for item in self.items]


def load_manifest(path: str | Path) -> DatasetManifest:
    """Parse and validate a manifest.json, preserving item order.

    Every referenced file must exist relative to the manifest's directory;
    `layer` must be present exactly for activation entries.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON ({exc})") from exc

    if not isinstance(doc, dict):
        raise ManifestError(f"{path}: top level must be an object")
    version = doc.get("version")
    if version != 1:
        raise VersionError(f"{path}: unsupported manifest version {version!r}")
    raw_items = doc.get("items")
    if not isinstance(raw_items, list):
        raise ManifestError(f"{path}: 'items' must be a list")

    root = path.parent
    items = []
    for i, entry in enumerate(raw_items):
        where = f"{path}: items[{i}]"
        if not isinstance(entry, dict):
            raise ManifestError(f"{where}: entry must be an object")
        rel = entry.get("path")
        kind = entry.get("kind")
        shape = entry.get("shape")
        if not isinstance(rel, str) or not rel:
            raise ManifestError(f"{where}: missing or invalid 'path'")
        if kind not in MANIFEST_KINDS:
            raise ManifestError(f"{where} ({rel}): kind must be one of {MANIFEST_KINDS}")
        if not isinstance(shape, list) or not all(
            isinstance(d, int) and d > 0 for d in shape
        ):
            raise ManifestError(f"{where} ({rel}): invalid 'shape'")
        layer = entry.get("layer")
        if kind == "activation":
            if not isinstance(layer, int) or layer < 0:
                raise ManifestError(
                    f"{where} ({rel}): activation entries need a non-negative 'layer'"
                )
        elif layer is not None:
            raise ManifestError(f"{where} ({rel}): image entries must not carry 'layer'")
        if not (root / rel).is_file():
            raise ManifestError(f"{where}: referenced file does not exist: {rel}")
        items.append(ManifestItem(path=rel, kind=kind, shape=tuple(shape), layer=layer))

    return DatasetManifest(version=1, items=tuple(items), root=root)


def write_manifest(path: str | Path, items: list[ManifestItem]) -> None:
    """Emit a manifest.json for a list of already-written tensor files."""
    doc: dict = {"version": 1, "items": []}
    for item in items:
        entry: dict = {"path": item.path, "kind": item.kind, "shape": list(item.shape)}
        if item.kind == "activation":
            entry["layer"] = item.layer
        doc["items"].append(entry)
    path = Path(path)
    tmp_name = None
    try:
        with tempfile.NamedTemporaryFile(
            mode="w", dir=path.parent, prefix=path.name + ".", delete=False,
            encoding="utf-8",
        ) as fh:
            tmp_name = fh.name
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        os.replace(tmp_name, path)
        tmp_name = None
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    finally:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)
