"""Command-line entry point: ``altes {synth,sweep,benchmark,verify}``.

Exit codes: 0 success, 1 detection or verification failure, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from altes import io
from altes.chirplet import (
    ChirpletParams,
    ClassicAltesParams,
    bandwidth_to_cutoff,
    classic_to_modern,
    kc_from_db,
    modern_to_classic,
    synth_spectrum,
    synth_time,
)
from altes.detect import extract_ridges, mean_r_squared, score_detections
from altes.errors import AltesError
from altes.properties import MAX_NFFT, fit_fft_size
from altes.sweep import SweepGrid, pareto_frontier, run_sweep, table2_gate
from altes.synth import RNG_ALGORITHM, BenchmarkSpec, default_benchmark, make_benchmark, measured_snr_db
from altes.transform import MORLET_SIGMA_FRAC, hct, morlet_cwt, stft
from altes.verify import run_suite, suite_passed

log = logging.getLogger("altes")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

HCT_DEFAULT = (math.pi / 5, math.pi, 0.5)
SCALE_DEFAULT = (0.6, 1.6, 40)
MORLET_CENTER = 2.0 * math.pi
MORLET_SCALE_FACTOR = 10.0
DETECT_TOL = 16


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


class OutputSet:
    """Tracks files written by a command so a failed run leaves nothing behind."""

    def __init__(self, out_dir: Path):
        self.dir = Path(out_dir)
        self.files: list[Path] = []
        self._made_dir = False

    def __enter__(self):
        if not self.dir.exists():
            self.dir.mkdir(parents=True)
            self._made_dir = True
        return self

    def path(self, name: str) -> Path:
        p = self.dir / name
        self.files.append(p)
        return p

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            for p in self.files:
                p.unlink(missing_ok=True)
            if self._made_dir and not any(self.dir.iterdir()):
                self.dir.rmdir()
        return False


# -- argument parsing ----------------------------------------------------------


def _add_chirplet_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("chirplet parameters")
    g.add_argument("--omega0", type=float, help="centre frequency (rad/sample)")
    cut = g.add_mutually_exclusive_group()
    cut.add_argument("--omega-c", dest="omega_c", type=float, help="upper cutoff frequency")
    cut.add_argument("--bandwidth", type=float, help="cutoff-level bandwidth B")
    g.add_argument("--lambda", dest="lam", type=float, help="chirp rate")
    g.add_argument("--kc-db", type=float, default=-40.0, help="cutoff level in dB (20 log10), default -40")
    g.add_argument("--classic", action="store_true", help="take {nu, k, c} instead")
    g.add_argument("--nu", type=float)
    g.add_argument("--k", type=float)
    g.add_argument("--c", type=float)
    g.add_argument("--pi-units", action="store_true", help="frequencies are multiples of pi")


def _chirplet_from_args(args, default=None) -> ChirpletParams:
    kc = kc_from_db(args.kc_db)
    scale = math.pi if args.pi_units else 1.0
    if args.classic:
        missing = [f"--{n}" for n in ("nu", "k", "c") if getattr(args, n) is None]
        if missing:
            raise UsageError(f"--classic requires {', '.join(missing)}")
        return classic_to_modern(ClassicAltesParams(args.nu, args.k, args.c), kc)
    given = [args.omega0, args.lam, args.omega_c if args.omega_c is not None else args.bandwidth]
    if all(v is None for v in given) and default is not None:
        return ChirpletParams(*default, kc_level=kc)
    missing = []
    if args.omega0 is None:
        missing.append("--omega0")
    if args.omega_c is None and args.bandwidth is None:
        missing.append("--omega-c or --bandwidth")
    if args.lam is None:
        missing.append("--lambda")
    if missing:
        raise UsageError(f"missing required flags: {', '.join(missing)}")
    w0 = args.omega0 * scale
    wc = args.omega_c * scale if args.omega_c is not None else bandwidth_to_cutoff(w0, args.bandwidth * scale)
    return ChirpletParams(w0, wc, args.lam, kc)


def _params_dict(p: ChirpletParams) -> dict:
    d = {
        "omega0": p.omega0,
        "omega_c": p.omega_c,
        "lambda": p.lam,
        "kc_level": p.kc_level,
        "bandwidth": p.bandwidth,
        "kappa_c": p.kappa_c,
    }
    try:
        c = modern_to_classic(p)
        d.update(nu=c.nu, k=c.k, c=c.c, a_gain=c.a_gain)
    except AltesError:
        pass
    return d


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="altes", description="Altes chirplet synthesis, sweeps, benchmark and verification")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="write spectrum and waveform of one chirplet")
    _add_chirplet_flags(s)
    s.add_argument("--nfft", type=int, help="transform size (default: smallest holding the delay spread)")
    s.add_argument("--out", type=Path, default=Path("out/synth"))
    s.add_argument("--plot", action="store_true")
    s.set_defaults(func=cmd_synth)

    w = sub.add_parser("sweep", help="parameter sweep, efficient frontier and transform-size advice")
    w.add_argument("--omega0-min", type=float)
    w.add_argument("--omega0-max", type=float)
    w.add_argument("--n-omega0", type=int, default=24)
    w.add_argument("--n-ratio", type=int, default=16)
    w.add_argument("--lambda-min", type=float, default=0.0)
    w.add_argument("--lambda-max", type=float, default=1.0)
    w.add_argument("--n-lambda", type=int, default=10)
    w.add_argument("--kc-db", type=float, default=-40.0)
    w.add_argument("--pi-units", action="store_true")
    w.add_argument("--max-nfft", type=int, default=MAX_NFFT)
    w.add_argument("--workers", type=int, help="threads (default ALTES_THREADS, 0 = all cores)")
    w.add_argument("--out", type=Path, default=Path("out/sweep"))
    w.add_argument("--plot", action="store_true")
    w.set_defaults(func=cmd_sweep)

    b = sub.add_parser("benchmark", help="three-chirp detection benchmark")
    b.add_argument("--spec", type=Path, help="BenchmarkSpec JSON (default: built-in)")
    b.add_argument("--seed", type=int)
    b.add_argument("--snr-db", type=float, help="override SNR; 'inf' disables noise")
    b.add_argument("--scale-min", type=float, default=SCALE_DEFAULT[0])
    b.add_argument("--scale-max", type=float, default=SCALE_DEFAULT[1])
    b.add_argument("--n-scales", type=int, default=SCALE_DEFAULT[2])
    b.add_argument("--window", type=int, default=128, help="STFT window length")
    b.add_argument("--hop", type=int, help="STFT hop (default window/2)")
    b.add_argument("--tol", type=int, default=DETECT_TOL, help="centre matching tolerance in samples")
    b.add_argument("--workers", type=int)
    _add_chirplet_flags(b)
    b.add_argument("--out", type=Path, default=Path("out/benchmark"))
    b.add_argument("--plot", action="store_true")
    b.set_defaults(func=cmd_benchmark)

    v = sub.add_parser("verify", help="run the numerical invariant suite")
    _add_chirplet_flags(v)
    v.add_argument("--nfft", type=int, default=4096)
    v.add_argument("--max-order", type=int, default=10)
    v.add_argument("--out", type=Path, help="also write the report here")
    v.set_defaults(func=cmd_verify)
    return parser


# -- commands --------------------------------------------------------------------


def cmd_synth(args) -> int:
    p = _chirplet_from_args(args)
    if p.omega_c > math.pi:
        log.warning("omega_c = %.6g exceeds pi; the band is truncated at Nyquist", p.omega_c)
    if args.nfft is None:
        n, _, _ = fit_fft_size(p)
    else:
        n = args.nfft
    spectrum = synth_spectrum(p, n)
    sig = synth_time(p, n)
    config = {"command": "synth", "n_fft": n, "params": _params_dict(p)}
    with OutputSet(args.out) as out:
        io.write_spectrum_csv(out.path("spectrum.csv"), spectrum, config)
        io.write_signal(out.path("signal.bin"), sig)
        io.write_signal_csv(out.path("signal.csv"), sig, config)
        io.write_json(out.path("params.json"), config)
        if args.plot:
            from altes import plots

            plots.synth_figure(out.path("synth.png"), spectrum, sig)
    print(io.dumps_json(config), end="")
    return EXIT_OK


def _sweep_grid(args) -> SweepGrid:
    scale = math.pi if args.pi_units else 1.0
    kw = dict(
        n_omega0=args.n_omega0,
        n_ratio=args.n_ratio,
        n_lambda=args.n_lambda,
        lambda_min=args.lambda_min,
        lambda_max=args.lambda_max,
        kc_level=kc_from_db(args.kc_db),
    )
    if args.omega0_min is not None:
        kw["omega0_min"] = args.omega0_min * scale
    if args.omega0_max is not None:
        kw["omega0_max"] = args.omega0_max * scale
    return SweepGrid(**kw)


def cmd_sweep(args) -> int:
    grid = _sweep_grid(args)
    records = run_sweep(grid, workers=args.workers, max_nfft=args.max_nfft)
    result = pareto_frontier(records)
    on_front = set(result.frontier)
    config = {
        "command": "sweep",
        "grid": {
            "omega0_min": grid.omega0_min,
            "omega0_max": grid.omega0_max,
            "n_omega0": grid.n_omega0,
            "n_ratio": grid.n_ratio,
            "lambda_min": grid.lambda_min,
            "lambda_max": grid.lambda_max,
            "lambda_values": "cell midpoints",
            "n_lambda": grid.n_lambda,
            "kc_level": grid.kc_level,
        },
        "max_nfft": args.max_nfft,
    }
    header = ["omega0", "omega_c", "lambda", "bandwidth", "delay_spread", "oscillations", "n_fft", "on_frontier"]

    def rows(idx):
        for i in idx:
            r = records[i]
            yield (
                r.params.omega0,
                r.params.omega_c,
                r.params.lam,
                r.bandwidth,
                r.delay_spread,
                r.oscillations,
                r.advised_n_fft,
                i in on_front,
            )

    ok = [r for r in records if not r.flagged]
    widest = max(ok, key=lambda r: r.delay_spread) if ok else None
    shortest = min(records, key=lambda r: r.delay_spread)
    advisory = {
        "records": len(records),
        "flagged": sum(r.flagged for r in records),
        "frontier_size": len(result.frontier),
        "max_advised_n_fft": max(r.advised_n_fft for r in ok) if ok else None,
        "max_delay_spread": widest.delay_spread if widest else None,
        "max_delay_spread_params": _params_dict(widest.params) if widest else None,
        "min_delay_spread": shortest.delay_spread,
        "min_delay_spread_params": _params_dict(shortest.params),
        "frontier_max_lambda": max(r.params.lam for r in result.frontier_records),
    }
    with OutputSet(args.out) as out:
        io.write_csv(out.path("sweep.csv"), header, rows(range(len(records))), config)
        io.write_csv(out.path("frontier.csv"), header, rows(result.frontier), config)
        io.write_json(out.path("advisory.json"), {"config": config, "summary": advisory})
        if args.plot:
            from altes import plots

            plots.sweep_figure(out.path("sweep.png"), records, result)
    print(io.dumps_json(advisory), end="")
    return EXIT_OK


def _load_spec(args) -> BenchmarkSpec:
    if args.spec is None:
        spec = default_benchmark()
        d = spec.to_dict()
    else:
        try:
            text = args.spec.read_text()
        except OSError as e:
            raise UsageError(f"cannot read spec file {args.spec}: {e.strerror}") from e
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"{args.spec}:{e.lineno}:{e.colno}: {e.msg}") from e
        if not isinstance(d, dict):
            raise UsageError(f"{args.spec}: top level must be a JSON object")
    if args.seed is not None:
        d["seed"] = args.seed
    if args.snr_db is not None:
        d["snr_db"] = None if math.isinf(args.snr_db) else args.snr_db
    try:
        return BenchmarkSpec.from_dict(d)
    except (KeyError, TypeError, ValueError) as e:
        where = args.spec if args.spec is not None else "built-in spec"
        raise UsageError(f"{where}: invalid benchmark spec: {e}") from e


def cmd_benchmark(args) -> int:
    spec = _load_spec(args)
    analyzer = _chirplet_from_args(args, default=HCT_DEFAULT)
    if args.n_scales < 2 or not 0 < args.scale_min < args.scale_max:
        raise UsageError("need 0 < --scale-min < --scale-max and --n-scales >= 2")
    scales = np.linspace(args.scale_min, args.scale_max, args.n_scales)
    morlet_scales = MORLET_SCALE_FACTOR * scales

    sig, truth = make_benchmark(spec)
    spectrogram = stft(sig, args.window, args.hop)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        h = hct(sig, analyzer, scales, workers=args.workers)
    for w in caught:
        log.warning("%s", w.message)
    m = morlet_cwt(sig, MORLET_CENTER, morlet_scales, workers=args.workers)

    h_ridges = extract_ridges(h, max_ridges=len(spec.chirps))
    m_ridges = extract_ridges(m, max_ridges=len(spec.chirps))
    report = score_detections(h_ridges, truth, args.tol)
    m_report = score_detections(m_ridges, truth, args.tol)

    tone_bin = int(round(args.window * spec.tone_freq / (2.0 * math.pi))) % args.window
    ridge_bins = np.argmax(spectrogram.magnitudes, axis=0)
    config = {
        "command": "benchmark",
        "spec": spec.to_dict(),
        "rng": RNG_ALGORITHM,
        "hct": {"params": _params_dict(analyzer), "scales": [float(a) for a in scales]},
        "morlet": {
            "center_freq": MORLET_CENTER,
            "sigma_frac": MORLET_SIGMA_FRAC,
            "scale_factor": MORLET_SCALE_FACTOR,
        },
        "stft": {"window": "hamming", "window_len": args.window, "hop": spectrogram.frame_hop},
        "tol": args.tol,
    }
    summary = {
        "hct": report.to_dict(),
        "hct_mean_r_squared": mean_r_squared(h_ridges),
        "morlet": m_report.to_dict(),
        "morlet_mean_r_squared": mean_r_squared(m_ridges),
        "stft_tone_bin": tone_bin,
        "stft_tone_frames": int(np.sum(ridge_bins == tone_bin)),
        "stft_frames": int(spectrogram.magnitudes.shape[1]),
        "measured_snr_db": None if spec.snr_db is None else measured_snr_db(sig, truth),
        "truth": truth.to_dict(),
        "design_bounds": {v.bound: v.passed for v in table2_gate(analyzer)},
    }

    def ridge_rows(name, ridges):
        for r_i, r in enumerate(ridges):
            for (si, sh, mag) in r.points:
                yield (name, r_i, si, float(scales[si] if name == "hct" else morlet_scales[si]), sh, mag)

    with OutputSet(args.out) as out:
        io.write_signal(out.path("signal.bin"), sig)
        io.write_signal_csv(out.path("signal.csv"), sig, config)
        io.write_json(out.path("truth.json"), truth.to_dict())
        io.write_grid_csv(
            out.path("stft.csv"), "bin", range(args.window), "frame", range(spectrogram.magnitudes.shape[1]),
            spectrogram.magnitudes, config,
        )
        io.write_grid_csv(out.path("morlet.csv"), "scale", morlet_scales, "shift", range(len(sig)), m.magnitude, config)
        io.write_grid_csv(out.path("hct.csv"), "scale", scales, "shift", range(len(sig)), h.magnitude, config)
        io.write_csv(
            out.path("ridges.csv"),
            ["transform", "ridge", "scale_index", "scale", "shift", "magnitude"],
            list(ridge_rows("hct", h_ridges)) + list(ridge_rows("morlet", m_ridges)),
            config,
        )
        io.write_json(out.path("report.json"), {"config": config, "summary": summary})
        if args.plot:
            from altes import plots

            plots.benchmark_figure(out.path("benchmark.png"), sig, truth, spectrogram, m, h)
    print(io.dumps_json(summary), end="")
    failed = report.misses > 0 or report.false_alarms > 0
    return EXIT_FAIL if failed else EXIT_OK


def cmd_verify(args) -> int:
    p = _chirplet_from_args(args, default=HCT_DEFAULT)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        entries = run_suite(p, n_fft=args.nfft, max_order=args.max_order)
    doc = {"params": _params_dict(p), "checks": entries, "passed": suite_passed(entries)}
    text = io.dumps_json(doc)
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text)
    print(text, end="")
    for e in entries:
        if e["name"] == "design_bounds":
            for msg in e["warnings"]:
                log.warning("design bound not met: %s", msg)
    return EXIT_OK if doc["passed"] else EXIT_FAIL


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.INFO)
        return args.func(args)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except (AltesError, ValueError) as e:
        print(f"altes: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ImportError as e:
        print(f"altes: error: {e} (install the 'plot' extra for --plot)", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
