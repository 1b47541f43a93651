"""Command-line surface: load channel spec files, run the capacity solver or
the implementation pipeline, and emit machine-readable reports.

Exit codes: 0 on success, 1 on numerical failure (solver did not converge,
infeasibility), 2 on input errors (malformed spec, missing file, budget or
validation violations). Reports are deterministic for a fixed config and
seed; wall-clock timings are reported but excluded from the config hash.
"""

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from .capacity import min_entropy_gain, thermo_capacity
from .channels import channel_from_kraus
from .errors import (
    BudgetExceededError,
    SpecFormatError,
    ThermocapError,
    ValidationError,
)
from .implementation import (
    DIAMOND_ACCURACY_BUDGET,
    build_universal_implementation,
    diamond_accuracy,
    iid_accuracy,
    reference_inputs,
    work_cost,
)
from .serialization import read_channel_spec
from .states import ThermoContext
from .typicality import DEFAULT_SLACK_COEFF, TypicalityParams

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INPUT = 2
DIAMOND_MAX_COPIES = 3


@dataclass(frozen=True)
class RunConfig:
    """One resolved CLI invocation."""

    command: str
    spec: str = None
    spec2: str = None
    beta: float = None
    n_list: tuple = ()
    tol: float = 1e-6
    eta: float = DEFAULT_SLACK_COEFF
    seed: int = 0
    fmt: str = "json"
    out: str = None

    def __post_init__(self):
        if self.command not in ("capacity", "implement", "interconvert"):
            raise ValidationError(f"unknown command {self.command!r}")
        if self.spec is None:
            raise ValidationError("a channel spec path is required")
        if self.command == "interconvert" and self.spec2 is None:
            raise ValidationError("interconvert needs a second channel spec")
        if self.command == "implement" and not self.n_list:
            raise ValidationError("implement needs a nonempty copy list")
        if any(int(n) < 1 for n in self.n_list):
            raise ValidationError(f"copy counts must be >= 1, got {self.n_list}")
        if self.beta is not None and not self.beta > 0:
            raise ValidationError(f"beta must be positive, got {self.beta}")
        if not self.tol > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tol}")
        if self.eta < 0:
            raise ValidationError(f"slack coefficient must be >= 0, got {self.eta}")
        if self.fmt not in ("json", "csv"):
            raise ValidationError(f"unknown output format {self.fmt!r}")


@dataclass(frozen=True)
class Report:
    """Result document for one command run."""

    command: str
    config: dict
    results: object
    timings: dict

    def config_hash(self) -> str:
        canonical = json.dumps(self.config, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "config_sha256": self.config_hash(),
            "results": self.results,
            "timings": self.timings,
        }

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_dict(), indent=2) + "\n"
        return self._render_csv()

    def _render_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.command == "implement":
            writer.writerow(
                ["n", "work_per_copy", "fidelity_min", "diamond", "preclip_norm"]
            )
            for row in self.results:
                writer.writerow(
                    [
                        row["n"],
                        repr(row["work_per_copy"]),
                        repr(row["fidelity_min"]),
                        "" if row["diamond"] is None else repr(row["diamond"]),
                        repr(row["diagnostics"]["preclip_norm"]),
                    ]
                )
        else:
            writer.writerow(["key", "value"])
            for key, value in self.results.items():
                if isinstance(value, list):
                    value = ";".join(repr(v) for v in value)
                elif isinstance(value, float):
                    value = repr(value)
                writer.writerow([key, value])
        return buf.getvalue()


def _config_echo(cfg: RunConfig, beta: float) -> dict:
    doc = {
        "command": cfg.command,
        "spec": cfg.spec,
        "beta": beta,
        "tol": cfg.tol,
        "seed": cfg.seed,
        "format": cfg.fmt,
    }
    if cfg.spec2 is not None:
        doc["spec2"] = cfg.spec2
    if cfg.command == "implement":
        doc["n"] = list(cfg.n_list)
        doc["eta"] = cfg.eta
    return doc


def _load(path: str, beta_flag):
    ch, beta_file = read_channel_spec(path)
    return ch, (beta_flag if beta_flag is not None else beta_file)


def _is_trivial(h) -> bool:
    return h is None or np.abs(h).max() == 0.0


def cmd_capacity(cfg: RunConfig) -> Report:
    ch, beta = _load(cfg.spec, cfg.beta)
    ctx = ThermoContext(beta=beta)
    start = time.perf_counter()
    cap = thermo_capacity(ch, ctx, tol=cfg.tol)
    spectrum = sorted(
        (float(v) for v in np.linalg.eigvalsh(cap.maximizer)), reverse=True
    )
    results = {
        "value": cap.value,
        "certificate_gap": cap.certificate_gap,
        "iterations": cap.iterations,
        "maximizer_spectrum": spectrum,
    }
    if _is_trivial(ch.h_in) and _is_trivial(ch.h_out):
        results["min_entropy_gain"] = min_entropy_gain(ch, tol=cfg.tol)
    timings = {"total_wall_seconds": time.perf_counter() - start}
    return Report(cfg.command, _config_echo(cfg, beta), results, timings)


def _sampled_state(seed: int, dim: int):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def cmd_implement(cfg: RunConfig) -> Report:
    ch, beta = _load(cfg.spec, cfg.beta)
    if ch.h_in is None or ch.h_out is None:
        h_in, h_out = ch.hamiltonians()
        ch = channel_from_kraus(ch.kraus, h_in=h_in, h_out=h_out)
    ctx = ThermoContext(beta=beta)
    start = time.perf_counter()
    cap = thermo_capacity(ch, ctx, tol=cfg.tol)
    params = TypicalityParams(threshold=cap.value, slack_coeff=cfg.eta)
    inputs = list(reference_inputs(ch.h_in, ctx))
    inputs.append(("sampled-0", _sampled_state(cfg.seed, ch.dim_in)))

    rows = []
    item_timings = []
    for n in cfg.n_list:
        t0 = time.perf_counter()
        impl = build_universal_implementation(ch, int(n), params=params, ctx=ctx)
        fidelities = {name: iid_accuracy(impl, rho) for name, rho in inputs}
        choi_dim = (ch.dim_in * ch.dim_out) ** int(n)
        diamond = (
            diamond_accuracy(impl)
            if int(n) <= DIAMOND_MAX_COPIES and choi_dim <= DIAMOND_ACCURACY_BUDGET
            else None
        )
        rows.append(
            {
                "n": int(n),
                "work_per_copy": work_cost(impl, ctx),
                "fidelities": fidelities,
                "fidelity_min": min(fidelities.values()),
                "diamond": diamond,
                "threshold": impl.threshold,
                "eta": impl.eta,
                "diagnostics": impl.diagnostics,
            }
        )
        item_timings.append({"n": int(n), "wall_seconds": time.perf_counter() - t0})
    timings = {
        "total_wall_seconds": time.perf_counter() - start,
        "items": item_timings,
    }
    return Report(cfg.command, _config_echo(cfg, beta), rows, timings)


def cmd_interconvert(cfg: RunConfig) -> Report:
    ch_a, beta_a = read_channel_spec(cfg.spec)
    ch_b, beta_b = read_channel_spec(cfg.spec2)
    if cfg.beta is not None:
        beta = cfg.beta
    elif beta_a == beta_b:
        beta = beta_a
    else:
        raise SpecFormatError(
            f"the two specs disagree on beta ({beta_a} vs {beta_b}); "
            "pass --beta to pick one"
        )
    ctx = ThermoContext(beta=beta)
    start = time.perf_counter()
    cap_a = thermo_capacity(ch_a, ctx, tol=cfg.tol)
    cap_b = thermo_capacity(ch_b, ctx, tol=cfg.tol)
    results = {
        "capacity_spec": cap_a.value,
        "capacity_spec2": cap_b.value,
        "rate": cap_b.value - cap_a.value,
        "certificate_gap_spec": cap_a.certificate_gap,
        "certificate_gap_spec2": cap_b.certificate_gap,
    }
    timings = {"total_wall_seconds": time.perf_counter() - start}
    return Report(cfg.command, _config_echo(cfg, beta), results, timings)


_DISPATCH = {
    "capacity": cmd_capacity,
    "implement": cmd_implement,
    "interconvert": cmd_interconvert,
}


def _parse_copies(text: str):
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"copy list must be comma-separated integers, got {text!r}"
        ) from None
    if not values:
        raise argparse.ArgumentTypeError("copy list is empty")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermocap",
        description="Thermodynamic capacity and universal implementations "
        "of quantum channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec2=False):
        p.add_argument("--spec", required=True, help="channel spec JSON path")
        if spec2:
            p.add_argument("--spec2", required=True, help="second channel spec path")
        p.add_argument(
            "--beta",
            type=float,
            default=None,
            help="inverse temperature; overrides the value in the spec file",
        )
        p.add_argument("--tol", type=float, default=1e-6, help="solver tolerance")
        p.add_argument(
            "--seed", type=int, default=0, help="seed for sampled test states"
        )
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="write the report here")

    common(sub.add_parser("capacity", help="compute the channel capacity"))
    p_impl = sub.add_parser("implement", help="build and verify implementations")
    common(p_impl)
    p_impl.add_argument(
        "--n",
        type=_parse_copies,
        required=True,
        help="comma-separated copy counts, e.g. 2,4,6",
    )
    p_impl.add_argument(
        "--eta",
        type=float,
        default=DEFAULT_SLACK_COEFF,
        help="slack coefficient; the constraint slack at n copies is ETA/sqrt(n)",
    )
    common(sub.add_parser("interconvert", help="work rate between two channels"), spec2=True)
    return parser


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        spec=args.spec,
        spec2=getattr(args, "spec2", None),
        beta=args.beta,
        n_list=getattr(args, "n", ()),
        tol=args.tol,
        eta=getattr(args, "eta", DEFAULT_SLACK_COEFF),
        seed=args.seed,
        fmt=args.format,
        out=args.out,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        report = _DISPATCH[cfg.command](cfg)
        text = report.render(cfg.fmt)
        if cfg.out is not None:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except (ValidationError, BudgetExceededError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ThermocapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
