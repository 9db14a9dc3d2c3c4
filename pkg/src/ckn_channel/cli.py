"""Command-line interface: ``ckn <subcommand> [options]``.

Exit codes: 0 success, 1 validation failure, 2 I/O error, 3 bad configuration.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import COLUMNS, EXPERIMENTS, ConfigError, build_config, run
from .records import to_csv

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_CONFIG = 0, 1, 2, 3

_DESCRIPTIONS = {
    "fig1": "single-photon error probabilities p1, p2, p3 and pure-state envelopes",
    "fig2": "double-scattering probability vs delta_phi with state-space envelopes",
    "fig3": "concurrence after full and post-selected double scattering",
    "kn-check": "Kraus single-scatter probability vs Klein-Nishina (exit 1 on mismatch > 1e-10)",
    "scan": "completeness/positivity over random geometries (exit 1 on violation)",
}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="ckn",
        description="Compton-Klein-Nishina quantum error channel datasets (CSV). "
                    "Angles are given in degrees.",
        epilog="Settings are merged as defaults < config file (--config or $CKN_CONFIG) < flags. "
               "The config file holds one 'key = value' per line ('#' comments).",
    )
    sub = parser.add_subparsers(dest="experiment", required=True, parser_class=_ArgumentParser)
    for name in EXPERIMENTS:
        p = sub.add_parser(
            name, help=_DESCRIPTIONS[name], description=_DESCRIPTIONS[name],
            epilog="CSV columns: " + ",".join(COLUMNS[name]) +
                   ". Floats are written with 17 significant digits.",
        )
        p.add_argument("--config", metavar="PATH", help="flat key=value config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int, help="Monte-Carlo samples (fig3 default 5000)")
        p.add_argument("--theta-a", type=float, metavar="DEG")
        p.add_argument("--theta-b", type=float, metavar="DEG")
        p.add_argument("--grid", type=int, metavar="N", help="grid points per sweep")
        p.add_argument("--sampling-law", choices=("uniform-theta", "uniform-solid-angle"))
        p.add_argument("--input", choices=("psi+", "psi-", "rho-mixed"),
                       help="two-photon input state for fig3 (default psi+)")
        p.add_argument("--workers", type=int, help="worker processes; output is identical for any value")
        p.add_argument("--out", metavar="PATH", help="output CSV file (default: standard output)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cli = {k: v for k, v in vars(args).items() if k not in ("experiment", "config")}
    try:
        cfg = build_config(args.experiment, cli, args.config)
        records, failures = run(cfg)
    except ConfigError as exc:
        print(f"ckn: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    text = to_csv(records)
    if cfg.out and cfg.out != "-":
        try:
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"ckn: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)

    if failures:
        print(f"ckn: {len(failures)} row(s) failed validation:", file=sys.stderr)
        sys.stderr.write(to_csv(failures))
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
