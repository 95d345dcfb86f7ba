"""Command line front end.

Exit codes: 0 success (boolean commands print ``true``/``false`` and exit 0
either way), 1 usage or I/O error, 2 parse error, 3 domain error, 4 numeric
failure.
"""

from __future__ import annotations

import argparse
import io
import sys
from dataclasses import dataclass

from . import __version__
from .behavior import behaviors_equivalent, kernel_new
from .errors import DomainError, NotScalar, NumericError, ParseError
from .laurent import LaurentMatrix, is_unimodular, normal_rank
from .process import LtiProcessModel, complementary, has_full_event_algebra, interconnect
from .sim import (SimConfig, compare_spectrum, simulate, welch_spectrum,
                  write_spectrum_csv, write_trajectory_csv)
from .spectral import (RationalMatrix, SpectralDensity, density_eval,
                       density_from_kernel, frequency_grid,
                       scalar_spectral_factor, shape_distance)
from .textio import format_matrix, read_matrix

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_DOMAIN, EXIT_NUMERIC = range(5)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class ToolConfig:
    tolerance: float = 1e-9
    grid_size: int = 1024
    seed: int = 0
    length: int = 131072
    burn_in: int = 1000
    output: str | None = None

    def __post_init__(self):
        if self.tolerance < 0:
            raise UsageError("tolerance must be non-negative")
        if self.grid_size < 64:
            raise UsageError("grid size must be at least 64")
        if self.length < 1 or self.burn_in < 0:
            raise UsageError("length must be positive and burn-in non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("seed must be a 64-bit unsigned integer")


def _bool(v: bool) -> str:
    return "true\n" if v else "false\n"


def _kernel(path):
    return kernel_new(read_matrix(path))


def _density(path, as_density: bool) -> SpectralDensity:
    """Kernel file by default; with ``as_density`` a 1x1 parahermitian Laurent
    polynomial ``[phi]`` or a 1x2 ratio ``[num , den]``."""
    M = read_matrix(path)
    if not as_density:
        return density_from_kernel(kernel_new(M))
    return SpectralDensity(scalar_spectral_factor(_rational(M)))


def _rational(M: LaurentMatrix) -> RationalMatrix:
    if M.shape == (1, 1):
        return RationalMatrix(M)
    if M.shape == (1, 2):
        return RationalMatrix.scalar(M[0, 0], M[0, 1])
    raise NotScalar(f"density file must be 1x1 or 1x2, got {M.shape[0]}x{M.shape[1]}")


def _emit(text: str, path: str | None, out: io.StringIO):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


def _cmd_rank(a, cfg, out):
    out.write(f"{normal_rank(read_matrix(a.file))}\n")


def _cmd_unimodular(a, cfg, out):
    out.write(_bool(is_unimodular(read_matrix(a.file))))


def _cmd_equivalent(a, cfg, out):
    out.write(_bool(behaviors_equivalent(_kernel(a.file1), _kernel(a.file2))))


def _cmd_complementary(a, cfg, out):
    out.write(_bool(complementary(_kernel(a.file1), _kernel(a.file2))))


def _cmd_interconnect(a, cfg, out):
    P = interconnect(LtiProcessModel(_kernel(a.file1)), LtiProcessModel(_kernel(a.file2)))
    _emit(format_matrix(P.kernel.matrix), cfg.output, out)


def _cmd_fullsigma(a, cfg, out):
    out.write(_bool(has_full_event_algebra(_kernel(a.file1), _kernel(a.file2))))


def _cmd_spectrum(a, cfg, out):
    D = density_from_kernel(_kernel(a.file))
    buf = io.StringIO()
    write_spectrum_csv(buf, frequency_grid(cfg.grid_size), density_eval(D, cfg.grid_size))
    _emit(buf.getvalue(), cfg.output, out)


def _cmd_factor(a, cfg, out):
    M = read_matrix(a.file)
    if a.as_density:
        phi = _rational(M)
    else:
        K = kernel_new(M)
        if K.m != 1 or K.n != 1:
            raise NotScalar("factor works on scalar densities only")
        phi = density_from_kernel(K).rational()
    w = scalar_spectral_factor(phi, tol=cfg.tolerance)
    doc = LaurentMatrix([[w.value.entries[0, 0], w.value.denominator]])
    _emit(format_matrix(doc), cfg.output, out)


def _cmd_distance(a, cfg, out):
    d = shape_distance(_density(a.file1, a.as_density), _density(a.file2, a.as_density),
                       cfg.grid_size)
    out.write(f"{d:.6g}\n")


def _cmd_simulate(a, cfg, out):
    P = LtiProcessModel(_kernel(a.file))
    traj = simulate(P, SimConfig(cfg.length, cfg.burn_in, cfg.seed))
    buf = io.StringIO()
    write_trajectory_csv(buf, traj)
    _emit(buf.getvalue(), cfg.output, out)


def _cmd_checkspec(a, cfg, out):
    K = _kernel(a.file)
    D = density_from_kernel(K)
    traj = simulate(LtiProcessModel(K), SimConfig(cfg.length, cfg.burn_in, cfg.seed))
    est = welch_spectrum(traj, a.segment, a.overlap)
    report = compare_spectrum(est, D)
    out.write(report.report())
    out.write(f"segments {est.segment_count}\nsegment_length {est.segment_length}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ltiproc", description="Behavioral LTI stochastic process toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, func, files, help_):
        sp = sub.add_parser(name, help=help_)
        for f in files:
            sp.add_argument(f)
        sp.set_defaults(func=func)
        return sp

    cmd("rank", _cmd_rank, ["file"], "normal rank of a matrix")
    cmd("unimodular", _cmd_unimodular, ["file"], "is the matrix Laurent unimodular")
    cmd("equivalent", _cmd_equivalent, ["file1", "file2"], "do two kernels define the same behavior")
    cmd("complementary", _cmd_complementary, ["file1", "file2"], "complementarity of two fibers")
    sp = cmd("interconnect", _cmd_interconnect, ["file1", "file2"], "stacked kernel of the interconnection")
    sp.add_argument("-o", "--output")
    cmd("fullsigma", _cmd_fullsigma, ["file1", "file2"], "does the interconnection carry all Borel events")
    sp = cmd("spectrum", _cmd_spectrum, ["file"], "tabulate the spectral density of a kernel")
    sp.add_argument("--grid", type=int, default=1024)
    sp.add_argument("-o", "--output")
    sp = cmd("factor", _cmd_factor, ["file"], "minimum-phase factor of a scalar density")
    sp.add_argument("--as-density", action="store_true")
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("-o", "--output")
    sp = cmd("distance", _cmd_distance, ["file1", "file2"], "scale-invariant log-spectral distance")
    sp.add_argument("--as-density", action="store_true")
    sp.add_argument("--grid", type=int, default=1024)
    for name, func in (("simulate", _cmd_simulate), ("checkspec", _cmd_checkspec)):
        sp = cmd(name, func, ["file"], "simulate a trajectory" if name == "simulate"
                 else "simulate, estimate and compare the spectrum")
        sp.add_argument("--len", dest="length", type=int, default=131072)
        sp.add_argument("--burn", type=int, default=1000)
        sp.add_argument("--seed", type=int, default=0)
        if name == "simulate":
            sp.add_argument("-o", "--output")
        else:
            sp.add_argument("--segment", type=int, default=64)
            sp.add_argument("--overlap", type=float, default=0.5)
    return p


def _config(a) -> ToolConfig:
    return ToolConfig(tolerance=getattr(a, "tol", 1e-9),
                      grid_size=getattr(a, "grid", 1024),
                      seed=getattr(a, "seed", 0),
                      length=getattr(a, "length", 131072),
                      burn_in=getattr(a, "burn", 1000),
                      output=getattr(a, "output", None))


def dispatch(argv) -> tuple[int, str, str]:
    """Run one invocation; returns ``(exit_code, stdout_text, stderr_text)``."""
    out = io.StringIO()
    try:
        a = build_parser().parse_args(argv)
        a.func(a, _config(a), out)
    except UsageError as exc:
        return EXIT_USAGE, out.getvalue(), f"{exc}\n"
    except ParseError as exc:
        return EXIT_PARSE, out.getvalue(), f"parse error: {exc}\n"
    except DomainError as exc:
        return EXIT_DOMAIN, out.getvalue(), f"error: {type(exc).__name__}: {exc}\n"
    except NumericError as exc:
        return EXIT_NUMERIC, out.getvalue(), f"numeric failure: {type(exc).__name__}: {exc}\n"
    except OSError as exc:
        return EXIT_USAGE, out.getvalue(), f"error: {exc}\n"
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0), out.getvalue(), ""
    return EXIT_OK, out.getvalue(), ""


def main(argv=None) -> int:
    code, out, err = dispatch(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
