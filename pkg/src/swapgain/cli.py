"""Command-line driver: parameter sweeps behind the three figures, threshold
location by bisection, and the heralded-optics event report.

Outputs are deterministic: identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .entfrac import (
    FamilyParams,
    initial_singlet_fraction,
    singlet_fraction_magic,
)
from .swap import phi_branch_closed, psi_branch_closed
from .teleport import strategy_one_fidelity, strategy_two_fidelity
from .optics import run_heralded_swap


class Figure(Enum):
    FIG1 = 1
    FIG2 = 2
    FIG3 = 3


class ThresholdTarget(Enum):
    INITIAL_F_HALF = "initial-f-half"
    PSI_F_HALF = "psi-f-half"
    PHI_F_HALF = "phi-f-half"
    STRATEGY1_CLASSICAL = "strategy1-classical"


FIGURE_COLUMNS = {
    Figure.FIG1: ("F_initial", "F_psi_branch", "prob_psi"),
    Figure.FIG2: ("F_initial", "F_phi_branch", "prob_phi"),
    Figure.FIG3: ("f_strategy1", "f_strategy2"),
}


class BracketError(ValueError):
    """The target function does not change sign on the given bracket."""


@dataclass(frozen=True)
class SweepConfig:
    figure: Figure
    p: float
    a_min: float
    a_max: float
    steps: int
    out: Path

    def __post_init__(self):
        if not (0.0 < self.a_min < self.a_max < 1.0):
            raise ValueError("need 0 < a_min < a_max < 1")
        if self.steps < 2:
            raise ValueError("steps must be at least 2")


@dataclass(frozen=True)
class FigureRow:
    a: float
    columns: dict[str, float]

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, *self.columns.values())):
            raise ValueError(f"non-finite value in row at a={self.a}")


@dataclass(frozen=True)
class ThresholdQuery:
    target: ThresholdTarget
    p: float
    bracket: tuple[float, float]
    tolerance: float = 1e-6


def _row_values(figure: Figure, p: float, a: float) -> dict[str, float]:
    params = FamilyParams(p, a)
    if figure is Figure.FIG1:
        branch = psi_branch_closed(params)
        return {
            "F_initial": initial_singlet_fraction(params),
            "F_psi_branch": branch.singlet_fraction,
            "prob_psi": branch.probability,
        }
    if figure is Figure.FIG2:
        branch = phi_branch_closed(params)
        return {
            "F_initial": initial_singlet_fraction(params),
            "F_phi_branch": branch.singlet_fraction,
            "prob_phi": branch.probability,
        }
    return {
        "f_strategy1": strategy_one_fidelity(params),
        "f_strategy2": strategy_two_fidelity(params),
    }


def sweep(config: SweepConfig) -> list[FigureRow]:
    """Rows at steps+1 uniformly spaced values of a, endpoints included."""
    rows = []
    span = config.a_max - config.a_min
    for i in range(config.steps + 1):
        a = config.a_min + span * i / config.steps
        rows.append(FigureRow(a, _row_values(config.figure, config.p, a)))
    return rows


def _threshold_function(target: ThresholdTarget, p: float):
    if target is ThresholdTarget.INITIAL_F_HALF:
        return lambda a: initial_singlet_fraction(FamilyParams(p, a)) - 0.5
    if target is ThresholdTarget.PSI_F_HALF:
        return lambda a: psi_branch_closed(FamilyParams(p, a)).singlet_fraction - 0.5
    if target is ThresholdTarget.PHI_F_HALF:
        return lambda a: phi_branch_closed(FamilyParams(p, a)).singlet_fraction - 0.5
    return lambda a: strategy_one_fidelity(FamilyParams(p, a)) - 2 / 3


def find_threshold(query: ThresholdQuery) -> float:
    """Bisection for the parameter a where the target quantity crosses its
    reference level; requires a sign change on the bracket."""
    lo, hi = query.bracket
    if not lo < hi:
        raise BracketError(f"invalid bracket ({lo}, {hi})")
    fn = _threshold_function(query.target, query.p)
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise BracketError(
            f"no sign change on bracket ({lo}, {hi}) for target {query.target.value}"
        )
    while hi - lo > query.tolerance:
        mid = (lo + hi) / 2
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return (lo + hi) / 2


def emit_csv(rows: list[FigureRow], path: Path | str) -> None:
    """Header plus one line per row, 12 significant digits, '\\n' separators,
    no trailing newline; byte-stable across runs."""
    if not rows:
        raise ValueError("no rows to emit")
    for prev, cur in zip(rows, rows[1:]):
        if not cur.a > prev.a:
            raise ValueError("rows must be strictly increasing in a")
    header = ",".join(["a", *rows[0].columns.keys()])
    lines = [header]
    for row in rows:
        values = [row.a, *row.columns.values()]
        lines.append(",".join(f"{v:.12g}" for v in values))
    try:
        Path(path).write_bytes("\n".join(lines).encode("ascii"))
    except OSError as exc:
        raise OSError(f"cannot write sweep output to {path}: {exc}") from exc


def _optics_report(p: float, a: float) -> dict:
    events = run_heralded_swap(FamilyParams(p, a))
    return {
        "p": p,
        "a": a,
        "events": [
            {
                "counts": list(ev.counts),
                "probability": ev.probability,
                "heralded_singlet_fraction": (
                    singlet_fraction_magic(ev.heralded_state) if ev.usable else None
                ),
            }
            for ev in events
        ],
    }


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swapgain",
        description="Entanglement-swapping singlet-fraction toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="regenerate the data behind one figure")
    p_sweep.add_argument("--figure", type=int, choices=(1, 2, 3), required=True)
    p_sweep.add_argument("--p", type=float, required=True)
    p_sweep.add_argument("--a-min", type=float, default=0.001)
    p_sweep.add_argument("--a-max", type=float, default=0.999)
    p_sweep.add_argument("--steps", type=int, default=999)
    p_sweep.add_argument("--out", type=Path, required=True)

    p_thr = sub.add_parser("threshold", help="bisect for a quoted threshold in a")
    p_thr.add_argument(
        "--target",
        choices=[t.value for t in ThresholdTarget],
        required=True,
    )
    p_thr.add_argument("--p", type=float, required=True)
    p_thr.add_argument("--lo", type=float, required=True)
    p_thr.add_argument("--hi", type=float, required=True)
    p_thr.add_argument("--tol", type=float, default=1e-6)

    p_opt = sub.add_parser("optics", help="heralded-swap detection-event report")
    p_opt.add_argument("--p", type=float, required=True)
    p_opt.add_argument("--a", type=float, required=True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            config = SweepConfig(
                Figure(args.figure), args.p, args.a_min, args.a_max, args.steps, args.out
            )
            emit_csv(sweep(config), config.out)
        elif args.command == "threshold":
            query = ThresholdQuery(
                ThresholdTarget(args.target), args.p, (args.lo, args.hi), args.tol
            )
            a_star = find_threshold(query)
            print(
                json.dumps(
                    {
                        "target": query.target.value,
                        "p": query.p,
                        "a_star": a_star,
                        "tol": query.tolerance,
                    }
                )
            )
        else:
            print(json.dumps(_optics_report(args.p, args.a)))
    except BracketError as exc:
        print(f"swapgain: bracket error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"swapgain: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"swapgain: invalid arguments: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
