"""Command-line front end.

Subcommands
-----------
spectrogram   eigenvalue spectrogram of a transition class over a phi grid
envelopes     exact or approximate outer/inner envelope table
eit           simulated EIT spectrogram from a scenario config
invert        recover candidate phase angles from a spectrum file
wigner        evaluate a single 3-j or 6-j symbol
roundtrip     eigenvalue-level forward-and-back consistency sweep

Every run that writes files also writes a manifest JSON next to the first
output recording the resolved arguments, so a run can be reproduced
exactly.  Angles are radians unless --degrees is given.  Exit codes:
0 success, 2 usage, 3 invalid input, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, replace

import numpy as np

from . import __version__
from .angular import HalfInt, wigner3j, wigner6j
from . import dressing
from .dressing import (
    TransitionClass,
    envelopes_approx,
    envelopes_exact,
    spectrogram,
    write_envelopes_csv,
)
from . import eitsim
from .inversion import (
    InversionError,
    NotInvertible,
    combine_candidates,
    extract_peaks,
    invert_five_half,
    invert_half,
    ratio_five_half,
    ratio_half,
    round_trip,
)
from .sop import OPTICS_PRESETS, sop_from_phi

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_NUMERICAL = 4


class CliError(Exception):
    def __init__(self, message, code=EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _parse_halfint(text: str) -> HalfInt:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            if int(den) != 2:
                raise ValueError
            return HalfInt(int(num))
        return HalfInt.of(float(text))
    except (ValueError, TypeError):
        raise CliError("%r is not an integer or half-integer" % text)


def _transition_class(args) -> TransitionClass:
    try:
        return TransitionClass(HalfInt(args.J2), args.p)
    except ValueError as exc:
        raise CliError(str(exc))


def _phi_grid(args) -> np.ndarray:
    if args.phi_steps < 2:
        raise CliError("--phi-steps must be at least 2")
    start, stop = args.phi_start, args.phi_stop
    if args.degrees:
        start, stop = math.radians(start), math.radians(stop)
    return np.linspace(start, stop, args.phi_steps)


def _write_manifest(out_path: str, command: str, payload: dict) -> None:
    manifest = {"tool": "rydpol", "version": __version__, "command": command}
    manifest.update(payload)
    base, _ = os.path.splitext(out_path)
    with open(base + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit_angle(value: float, degrees: bool) -> float:
    return math.degrees(value) if degrees else value


def cmd_spectrogram(args) -> int:
    cls = _transition_class(args)
    phi_grid = _phi_grid(args)
    spectra = spectrogram(cls, phi_grid)
    if args.format == "json":
        doc = dressing.spectrogram_json_dict(spectra)
        doc["class"] = {"J2": cls.J.twice, "p": cls.p}
        if args.envelopes:
            fn = envelopes_exact if args.envelopes == "exact" else envelopes_approx
            doc["envelopes"] = {
                "kind": args.envelopes,
                "rows": [list(asdict(fn(float(p))).values()) for p in phi_grid],
            }
        with open(args.output, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    else:
        dressing.write_spectrogram_csv(args.output, spectra)
        if args.envelopes:
            base, ext = os.path.splitext(args.output)
            write_envelopes_csv(
                base + "_envelopes" + (ext or ".csv"),
                phi_grid,
                exact=(args.envelopes == "exact"),
            )
    _write_manifest(
        args.output,
        "spectrogram",
        {
            "class": {"J2": cls.J.twice, "p": cls.p},
            "phi": {"start": args.phi_start, "stop": args.phi_stop,
                    "steps": args.phi_steps, "degrees": bool(args.degrees)},
            "envelopes": args.envelopes,
            "format": args.format,
            "output": args.output,
        },
    )
    return EXIT_OK


def cmd_envelopes(args) -> int:
    phi_grid = _phi_grid(args)
    write_envelopes_csv(args.output, phi_grid, exact=(args.kind == "exact"))
    _write_manifest(
        args.output,
        "envelopes",
        {
            "kind": args.kind,
            "phi": {"start": args.phi_start, "stop": args.phi_stop,
                    "steps": args.phi_steps, "degrees": bool(args.degrees)},
            "output": args.output,
        },
    )
    return EXIT_OK


def cmd_eit(args) -> int:
    try:
        scheme, params, phi_grid = eitsim.scenario_from_json(args.scenario)
    except FileNotFoundError:
        raise CliError("scenario file not found: %s" % args.scenario)
    except (ValueError, json.JSONDecodeError) as exc:
        raise CliError(str(exc))
    if args.optics is not None:
        preset = OPTICS_PRESETS.get(args.optics)
        if preset is None:
            raise CliError(
                "unknown optics preset %r (choices: %s)"
                % (args.optics, ", ".join(sorted(set(OPTICS_PRESETS))))
            )
        params = replace(params, optics=preset())
    if args.third_level is not None:
        if args.third_level <= 0:
            raise CliError("--third-level must be positive (MHz)")
        if scheme.third is not None:
            scheme = replace(
                scheme, third=replace(scheme.third, delta3_mhz=args.third_level)
            )
        else:
            scheme = eitsim.scheme_for_class(
                scheme.cls, third_delta3_mhz=args.third_level
            )
    try:
        spg = eitsim.eit_spectrogram(scheme, params, phi_grid)
    except np.linalg.LinAlgError as exc:
        raise CliError("steady-state solve failed: %s" % exc, EXIT_NUMERICAL)
    if args.format == "json":
        with open(args.output, "w") as fh:
            json.dump(eitsim.spectrogram_json_dict(spg), fh, indent=2)
            fh.write("\n")
    else:
        eitsim.write_spectrogram_csv(args.output, spg)
    _write_manifest(
        args.output,
        "eit",
        {
            "scenario": os.path.abspath(args.scenario),
            "optics_override": args.optics,
            "third_level_mhz": args.third_level,
            "format": args.format,
            "output": args.output,
        },
    )
    return EXIT_OK


def _load_spectrum(path: str):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise CliError("spectrum file not found: %s" % path)
    except json.JSONDecodeError as exc:
        raise CliError("invalid JSON in %s: %s" % (path, exc))
    problems = []
    for key in ("detuning_mhz", "amplitude", "class"):
        if key not in doc:
            problems.append("missing key %r" % key)
    if problems:
        raise CliError("%s: %s" % (path, "; ".join(problems)))
    try:
        cls = TransitionClass(HalfInt(int(doc["class"]["J2"])), int(doc["class"]["p"]))
    except (KeyError, ValueError, TypeError) as exc:
        raise CliError("%s: bad class spec: %s" % (path, exc))
    x = np.asarray(doc["detuning_mhz"], dtype=float)
    y = np.asarray(doc["amplitude"], dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise CliError("%s: detuning and amplitude must be equal-length 1-D" % path)
    config = doc.get("config", "standard")
    return cls, x, y, config


def _invert_one(cls, x, y, config, args):
    try:
        peaks = extract_peaks(
            x, y,
            min_prominence=args.min_prominence,
            merge_tol=args.merge_tol,
            central_tol=args.central_tol,
        )
    except InversionError as exc:
        raise CliError("peak extraction failed: %s" % exc, EXIT_NUMERICAL)
    if cls.J.twice == 1 and cls.p == 0:
        R = ratio_half(peaks)
        return peaks, invert_half(R)
    if cls.J.twice == 3 and cls.p != 0:
        R = ratio_five_half(peaks)
        rel = peaks.central_prominence / max(peaks.prominences)
        return peaks, invert_five_half(
            R, rel, args.central_threshold, config=config, tol=args.ratio_tol
        )
    raise CliError(
        "class %s is not invertible; supported classes are 1/2^0 and 3/2^+-"
        % cls.label()
    )


def cmd_invert(args) -> int:
    cls, x, y, config = _load_spectrum(args.input)
    if args.config is not None:
        config = args.config
    try:
        peaks, result = _invert_one(cls, x, y, config, args)
    except InversionError as exc:
        raise CliError(str(exc), EXIT_NUMERICAL)
    combined = None
    if args.second_input:
        cls2, x2, y2, config2 = _load_spectrum(args.second_input)
        if args.second_config is not None:
            config2 = args.second_config
        if (cls2.J, cls2.p) != (cls.J, cls.p):
            raise CliError("both spectra must declare the same transition class")
        try:
            _, result2 = _invert_one(cls2, x2, y2, config2, args)
        except InversionError as exc:
            raise CliError(str(exc), EXIT_NUMERICAL)
        combined = combine_candidates(result, result2, angle_tol=args.angle_tol)

    def angles(values):
        return [_emit_angle(v, args.degrees) for v in values]

    report = {
        "class": {"J2": cls.J.twice, "p": cls.p},
        "config": config,
        "ratio": result.ratio,
        "principal": _emit_angle(result.principal, args.degrees),
        "candidates": angles(result.candidates),
        "pruned": angles(result.pruned),
        "ambiguity_class": result.ambiguity_class,
        "angle_unit": "degrees" if args.degrees else "radians",
        "peak_positions_mhz": list(peaks.positions),
        "central_prominence": peaks.central_prominence,
        "candidate_stokes": [
            sop_from_phi(c).stokes().to_json_dict() for c in result.candidates
        ],
    }
    if combined is not None:
        report["combined"] = angles(combined)
        report["combined_unique"] = len(combined) == 1
    text = json.dumps(report, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        _write_manifest(
            args.output,
            "invert",
            {
                "input": os.path.abspath(args.input),
                "second_input": os.path.abspath(args.second_input)
                if args.second_input else None,
                "config": config,
                "central_threshold": args.central_threshold,
                "degrees": bool(args.degrees),
                "output": args.output,
            },
        )
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_wigner(args) -> int:
    vals = [_parse_halfint(v) for v in args.values]
    fn = wigner3j if args.symbol == "3j" else wigner6j
    try:
        result = fn(*vals)
    except ValueError as exc:
        raise CliError(str(exc))
    sys.stdout.write("%.15g\n" % result)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    cls = _transition_class(args)
    phi_grid = _phi_grid(args)
    configs = tuple(c.strip() for c in args.configs.split(",") if c.strip())
    rows = []
    failures = 0
    for phi in phi_grid:
        try:
            rep = round_trip(cls, float(phi), configs=configs, angle_tol=args.angle_tol)
        except NotInvertible as exc:
            raise CliError(str(exc))
        except InversionError as exc:
            raise CliError(str(exc), EXIT_NUMERICAL)
        if not rep.recovered:
            failures += 1
        rows.append(
            {
                "phi": _emit_angle(rep.phi_true, args.degrees),
                "recovered": rep.recovered,
                "combined": [_emit_angle(c, args.degrees) for c in rep.combined],
            }
        )
    report = {
        "class": {"J2": cls.J.twice, "p": cls.p},
        "configs": list(configs),
        "angle_tol": args.angle_tol,
        "angle_unit": "degrees" if args.degrees else "radians",
        "points": len(rows),
        "failures": failures,
        "rows": rows,
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        _write_manifest(
            args.output,
            "roundtrip",
            {
                "class": {"J2": cls.J.twice, "p": cls.p},
                "configs": list(configs),
                "phi": {"start": args.phi_start, "stop": args.phi_stop,
                        "steps": args.phi_steps, "degrees": bool(args.degrees)},
                "output": args.output,
            },
        )
    else:
        sys.stdout.write(text)
    return EXIT_OK if failures == 0 else EXIT_NUMERICAL


def _add_class_flags(p):
    p.add_argument("--J2", type=int, required=True,
                   help="doubled angular momentum 2J of the lower level")
    p.add_argument("--p", type=int, required=True, choices=(-1, 0, 1),
                   help="class parity index; J' = J + |p|")


def _add_phi_flags(p, steps=181):
    p.add_argument("--phi-start", type=float, default=0.0)
    p.add_argument("--phi-stop", type=float, default=2.0 * math.pi)
    p.add_argument("--phi-steps", type=int, default=steps)
    p.add_argument("--degrees", action="store_true",
                   help="interpret and emit angles in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydpol",
        description="RF-dressed Rydberg spectrograms, EIT simulation, and "
                    "SOP inversion",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrogram", help="eigenvalue spectrogram over phi")
    _add_class_flags(p)
    _add_phi_flags(p)
    p.add_argument("--envelopes", choices=("exact", "approx"), default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_spectrogram)

    p = sub.add_parser("envelopes", help="outer/inner envelope table")
    p.add_argument("--kind", choices=("exact", "approx"), default="exact")
    _add_phi_flags(p, steps=361)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_envelopes)

    p = sub.add_parser("eit", help="simulated EIT spectrogram")
    p.add_argument("--scenario", required=True, help="scenario config JSON")
    p.add_argument("--optics", default=None,
                   help="optics preset override (standard, tilted_linear, "
                        "rotated-circular)")
    p.add_argument("--third-level", type=float, default=None, metavar="MHZ",
                   help="enable or override the off-resonant third manifold")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_eit)

    p = sub.add_parser("invert", help="phase-angle candidates from a spectrum")
    p.add_argument("--input", required=True, help="spectrum JSON")
    p.add_argument("--config", default=None,
                   help="optics configuration of the measurement")
    p.add_argument("--second-input", default=None,
                   help="second spectrum (other optics) for combined pruning")
    p.add_argument("--second-config", default=None)
    p.add_argument("--central-threshold", type=float, default=0.5,
                   help="relative central-peak prominence dividing "
                        "inside/outside of the pruning interval")
    p.add_argument("--min-prominence", type=float, default=0.05)
    p.add_argument("--merge-tol", type=float, default=0.0, metavar="MHZ")
    p.add_argument("--central-tol", type=float, default=None, metavar="MHZ")
    p.add_argument("--ratio-tol", type=float, default=1e-6)
    p.add_argument("--angle-tol", type=float, default=1e-3)
    p.add_argument("--degrees", action="store_true")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_invert)

    p = sub.add_parser("wigner", help="evaluate a 3-j or 6-j symbol")
    p.add_argument("--symbol", choices=("3j", "6j"), required=True)
    p.add_argument("values", nargs=6, metavar="J",
                   help="six (half-)integers, e.g. 1 3/2 1/2 ...")
    p.set_defaults(fn=cmd_wigner)

    p = sub.add_parser("roundtrip", help="eigenvalue-level inversion sweep")
    _add_class_flags(p)
    _add_phi_flags(p)
    p.add_argument("--configs", default="standard",
                   help="comma-separated optics configurations")
    p.add_argument("--angle-tol", type=float, default=1e-6)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_roundtrip)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except CliError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return exc.code
    except NotInvertible as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_INVALID
    except InversionError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
