"""Command-line front end: reproducible spectrum experiments emitting CSV/JSON.

Exit codes: 0 success, 1 data error, 2 usage error. Outputs are
byte-deterministic for fixed inputs and flags, and every file is written
via a temp name + rename so failures leave no partial output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .distill import channel_reduce, cps_loss, fourier_l1, total_loss
from .errors import ShapeError, SpectralStatsError
from .scaling import pooling_invariance_report
from .spectrum import (
    ensemble_correlation,
    ensemble_spectrum,
    fit_correlation,
    fit_power_law,
    radial_average,
    read_spectrum_csv,
    write_spectrum_csv,
    power_grid,
)
from .synth import power_law_ensemble, white_noise_ensemble, write_ensemble
from .tensorio import load_manifest, read_tensor
from .theory import (
    box_kernel,
    depth_simulation,
    identity_kernel,
    kernel_spectrum_grid,
)

__all__ = ["main"]


def _atomic_write_text(path: Path, text: str) -> None:
    tmp_name = None
    try:
        with tempfile.NamedTemporaryFile(
            mode="w", dir=path.parent or Path("."), prefix=path.name + ".",
            delete=False, encoding="utf-8", newline="\n",
        ) as fh:
            tmp_name = fh.name
            fh.write(text)
        os.replace(tmp_name, path)
        tmp_name = None
    finally:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)


def _write_json(path: Path, obj) -> None:
    _atomic_write_text(path, json.dumps(obj, indent=2) + "\n")


def _spectrum_csv_text(s) -> str:
    lines = ["k,power,count"]
    for k, p, n in zip(s.bins, s.power, s.counts):
        lines.append(f"{int(k)},{float(p)!r},{int(n)}")
    return "\n".join(lines) + "\n"


def _loglog_csv_text(s) -> str:
    lines = ["log10_k,log10_power"]
    for k, p in zip(s.bins, s.power):
        if p > 0:
            lines.append(f"{float(np.log10(k))!r},{float(np.log10(p))!r}")
    return "\n".join(lines) + "\n"


def _expand_maps(arr: np.ndarray) -> list[np.ndarray]:
    """Flatten a rank 2-4 tensor into its 2D spatial maps."""
    if arr.ndim == 2:
        return [arr]
    if arr.ndim == 3:
        return [arr[i] for i in range(arr.shape[0])]
    if arr.ndim == 4:
        return [arr[i, j] for i in range(arr.shape[0]) for j in range(arr.shape[1])]
    raise ShapeError(f"rank {arr.ndim} unsupported")


def _load_maps(
    path: str, kind: str | None = None, layer: int | None = None
) -> list[np.ndarray]:
    """Load 2D maps from a manifest.json or a single tensor file.

    kind/layer filter manifest entries (mixed datasets carry images and
    several activation shapes; an ensemble must be same-shape).
    """
    p = Path(path)
    if p.suffix != ".json":
        if kind is not None or layer is not None:
            raise ValueError("--kind/--layer filters apply to manifest inputs only")
        return _expand_maps(read_tensor(p))
    manifest = load_manifest(p)
    maps: list[np.ndarray] = []
    for item in manifest.items:
        if kind is not None and item.kind != kind:
            continue
        if layer is not None and item.layer != layer:
            continue
        maps.extend(_expand_maps(manifest.load(item)))
    if not maps:
        raise ShapeError(
            f"{path}: no entries match kind={kind!r} layer={layer!r}"
        )
    return maps


def _parse_kernel(spec: str) -> np.ndarray:
    if spec == "box":
        return box_kernel()
    if spec == "identity":
        return identity_kernel()
    if spec.startswith("file:"):
        text = Path(spec[len("file:"):]).read_text(encoding="utf-8")
        return _kernel_from_json(text, where=spec)
    raise ValueError(f"unknown kernel {spec!r} (expected box, identity, or file:PATH)")


def _kernel_from_json(text: str, where: str = "--weights") -> np.ndarray:
    try:
        weights = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{where}: not valid JSON ({exc})") from exc
    arr = np.asarray(weights, dtype=np.float64)
    if arr.shape != (3, 3):
        raise ValueError(f"{where}: expected a 3x3 array, got shape {arr.shape}")
    return arr


# ---------------------------------------------------------------------------
# subcommands


def _cmd_spectrum(args) -> int:
    maps = _load_maps(args.input, kind=args.kind, layer=args.layer)
    spec = ensemble_spectrum(
        maps, jacobian=args.jacobian, subtract_mean=args.subtract_mean
    )
    _atomic_write_text(Path(args.output), _spectrum_csv_text(spec))
    if args.plot_data:
        _atomic_write_text(Path(args.plot_data), _loglog_csv_text(spec))
    return 0


def _cmd_fit(args) -> int:
    spec = read_spectrum_csv(args.input)
    fit = fit_power_law(spec, args.kmin, args.kmax)
    _write_json(Path(args.output), fit.to_dict())
    return 0


def _cmd_correlation(args) -> int:
    maps = _load_maps(args.input, kind=args.kind, layer=args.layer)
    corr = ensemble_correlation(maps, subtract_mean=args.subtract_mean)
    fit = fit_correlation(
        corr,
        args.rmin,
        args.rmax,
        exponent_range=(args.exp_min, args.exp_max),
    )
    _write_json(Path(args.output), fit.to_dict())
    return 0


def _cmd_pool_check(args) -> int:
    maps = _load_maps(args.input, kind=args.kind, layer=args.layer)
    report = pooling_invariance_report(
        maps,
        factor=args.factor,
        jacobian=args.jacobian,
        subtract_mean=args.subtract_mean,
    )
    _write_json(Path(args.output), report.to_dict())
    return 0


def _cmd_kernel(args) -> int:
    weights = _kernel_from_json(args.weights)
    grid = kernel_spectrum_grid(weights, args.size)
    spec = radial_average(power_grid(grid), jacobian=args.jacobian)
    _atomic_write_text(Path(args.output), _spectrum_csv_text(spec))
    if args.plot_data:
        _atomic_write_text(Path(args.plot_data), _loglog_csv_text(spec))
    return 0


def _cmd_depth_sim(args) -> int:
    maps = _load_maps(args.input, kind=args.kind, layer=args.layer)
    kernel = _parse_kernel(args.kernel)
    report = depth_simulation(
        maps, kernel, args.depth, k_min=args.kmin, k_max=args.kmax,
        jacobian=args.jacobian,
    )
    _write_json(Path(args.output), report.to_dict())
    return 0


def _cmd_loss(args) -> int:
    teacher = read_tensor(args.teacher)
    student = read_tensor(args.student)
    if teacher.ndim == 2:
        teacher = teacher[None, :, :]
    if student.ndim == 2:
        student = student[None, :, :]
    if teacher.ndim != 3 or student.ndim != 3:
        raise ShapeError("loss expects rank-2 or rank-3 (C,H,W) tensors")
    if args.channels is not None:
        teacher = channel_reduce(teacher, args.channels, role="teacher").data
        student = channel_reduce(student, args.channels, role="student").data
    l1 = fourier_l1(teacher, student)
    cps = cps_loss(teacher, student, variant=args.variant, epsilon=args.epsilon)
    report = total_loss(
        l1,
        cps,
        ce=args.ce,
        overhaul=args.overhaul,
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        variant=args.variant,
        epsilon=args.epsilon,
    )
    _write_json(Path(args.output), report.to_dict())
    return 0


def _cmd_synth(args) -> int:
    if args.kind == "powerlaw":
        items = power_law_ensemble(args.count, args.size, args.alpha, seed=args.seed)
    else:
        items = white_noise_ensemble(args.count, args.size, seed=args.seed)
    write_ensemble(args.out, items)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-stats",
        description="Radial power spectra, power-law fits, and spectral losses "
        "for images and activation maps.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="radially averaged ensemble power spectrum -> CSV")
    p.add_argument("--input", required=True, help="manifest.json or tensor file")
    p.add_argument("--output", required=True, help="CSV path (k,power,count)")
    p.add_argument("--jacobian", action="store_true", help="multiply each bin by its radius")
    p.add_argument("--subtract-mean", action="store_true", dest="subtract_mean")
    p.add_argument("--plot-data", dest="plot_data", metavar="CSV",
                   help="also write two-column log10-log10 data")
    p.add_argument("--kind", choices=["image", "activation"], default=None,
                   help="manifest filter: entry kind")
    p.add_argument("--layer", type=int, default=None,
                   help="manifest filter: activation tap index")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("fit", help="power-law fit of a spectrum CSV -> JSON")
    p.add_argument("--input", required=True, help="spectrum CSV")
    p.add_argument("--kmin", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--output", required=True, help="JSON path")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("correlation", help="radial autocorrelation fit -> JSON")
    p.add_argument("--input", required=True, help="manifest.json or tensor file")
    p.add_argument("--rmin", type=int, required=True)
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--exp-min", type=float, default=-4.0, dest="exp_min",
                   help="exponent grid lower bound")
    p.add_argument("--exp-max", type=float, default=0.0, dest="exp_max",
                   help="exponent grid upper bound")
    p.add_argument("--keep-mean", action="store_false", dest="subtract_mean",
                   help="do not subtract each map's mean first")
    p.add_argument("--output", required=True, help="JSON path")
    p.add_argument("--kind", choices=["image", "activation"], default=None,
                   help="manifest filter: entry kind")
    p.add_argument("--layer", type=int, default=None,
                   help="manifest filter: activation tap index")
    p.set_defaults(func=_cmd_correlation)

    p = sub.add_parser("pool-check", help="spectrum invariance under average pooling -> JSON")
    p.add_argument("--input", required=True, help="manifest.json")
    p.add_argument("--factor", type=int, default=2)
    p.add_argument("--jacobian", action="store_true")
    p.add_argument("--subtract-mean", action="store_true", dest="subtract_mean")
    p.add_argument("--output", required=True, help="JSON path")
    p.add_argument("--kind", choices=["image", "activation"], default=None,
                   help="manifest filter: entry kind")
    p.add_argument("--layer", type=int, default=None,
                   help="manifest filter: activation tap index")
    p.set_defaults(func=_cmd_pool_check)

    p = sub.add_parser("kernel", help="radial power response of a 3x3 kernel -> CSV")
    p.add_argument("--weights", required=True, help="JSON 3x3 array")
    p.add_argument("--size", type=int, required=True, help="grid side N")
    p.add_argument("--jacobian", action="store_true")
    p.add_argument("--output", required=True, help="CSV path")
    p.add_argument("--plot-data", dest="plot_data", metavar="CSV")
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("depth-sim", help="repeated-convolution spectrum fits -> JSON")
    p.add_argument("--input", required=True, help="manifest.json or tensor file")
    p.add_argument("--kernel", required=True, help="box | identity | file:PATH")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--kmin", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--jacobian", action="store_true")
    p.add_argument("--output", required=True, help="JSON path")
    p.add_argument("--kind", choices=["image", "activation"], default=None,
                   help="manifest filter: entry kind")
    p.add_argument("--layer", type=int, default=None,
                   help="manifest filter: activation tap index")
    p.set_defaults(func=_cmd_depth_sim)

    p = sub.add_parser("loss", help="spectral distillation metrics -> JSON")
    p.add_argument("--teacher", required=True, help="tensor file (C,H,W) or (H,W)")
    p.add_argument("--student", required=True, help="tensor file (C,H,W) or (H,W)")
    p.add_argument("--variant", choices=["paper", "normalized"], default="normalized")
    p.add_argument("--epsilon", type=float, default=1e-8)
    p.add_argument("--channels", type=int, default=None,
                   help="mean-group reduce both inputs to this channel count")
    p.add_argument("--ce", type=float, default=None, help="externally computed CE term")
    p.add_argument("--overhaul", type=float, default=None,
                   help="externally computed pixel-wise term")
    p.add_argument("--alpha", type=float, default=1e-4, help="overhaul weight")
    p.add_argument("--beta", type=float, default=1e-4, help="fourier-L1 weight")
    p.add_argument("--gamma", type=float, default=0.01, help="cps weight")
    p.add_argument("--output", required=True, help="JSON path")
    p.set_defaults(func=_cmd_loss)

    p = sub.add_parser("synth", help="generate a seeded synthetic ensemble + manifest")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--kind", choices=["powerlaw", "whitenoise"], default="powerlaw")
    p.add_argument("--alpha", type=float, default=-2.0, help="power-law exponent")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except SpectralStatsError as exc:
        print(f"spectral-stats: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"spectral-stats: usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"spectral-stats: i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
