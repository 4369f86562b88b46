"""Command-line entry point.

    ncwalk run CONFIG [--set key=value ...] [--out DIR]
    ncwalk preset NAME [--variant V ...] [--set key=value ...] [--out DIR]
    ncwalk list-presets
    ncwalk validate (CONFIG | --preset NAME) [--set key=value ...]

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError, NumericalFailure
from .outputs import write_table_csv
from .presets import get_preset, list_presets
from .runner import RunConfig, load_config, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("ncwalk")


def _add_overrides(p: argparse.ArgumentParser):
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config field, e.g. --set params.delta_pair=0.5")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncwalk", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a YAML/JSON run configuration")
    p.add_argument("config", type=Path)
    p.add_argument("--out", type=Path, default=Path("results"))
    _add_overrides(p)

    p = sub.add_parser("preset", help="run the variants of a named preset")
    p.add_argument("name")
    p.add_argument("--variant", action="append", default=[], help="run only these variants")
    p.add_argument("--out", type=Path, default=Path("results"))
    _add_overrides(p)

    sub.add_parser("list-presets", help="show the preset catalog")

    p = sub.add_parser("validate", help="check a configuration without running it")
    p.add_argument("config", type=Path, nargs="?")
    p.add_argument("--preset")
    _add_overrides(p)
    return parser


def _preset_configs(name: str, variants: list[str], overrides: list[str]) -> list[RunConfig]:
    try:
        preset = get_preset(name)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    configs = preset.configs(overrides)
    if variants:
        wanted = {f"{name}-{v}" for v in variants}
        missing = wanted - {c.name for c in configs}
        if missing:
            raise ConfigError(f"unknown variants: {sorted(missing)}")
        configs = [c for c in configs if c.name in wanted]
    return configs


def _table_row(cfg: RunConfig, manifest) -> dict:
    row = {"variant": cfg.name, "graph": f"{cfg.graph['kind']}({cfg.graph['size']})"}
    row.update({k: float(v) for k, v in cfg.params.items()})
    row["disorder_strength"] = float(cfg.disorder["strength"]) if cfg.disorder else 0.0
    row["realizations"] = int(cfg.disorder.get("realizations", 100)) if cfg.disorder else 1
    row["dimension"] = manifest.dimension
    for key in ("max_mean_n", "final_sigma", "mean_long_time_ipr"):
        if key in manifest.summary:
            row[key] = manifest.summary[key]
    return row


def _execute(configs: list[RunConfig], out: Path, table: str | None) -> int:
    for cfg in configs:
        cfg.validate()
    rows = []
    for cfg in configs:
        log.info("running %s", cfg.name)
        manifest = run(cfg, out)
        rows.append(_table_row(cfg, manifest))
        print(f"{cfg.name}: dimension {manifest.dimension}, {manifest.wall_time:.1f} s -> {out / manifest.files['series']}")
    if table:
        path = write_table_csv(out / f"{table}.table.csv", rows)
        print(f"summary table -> {path}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "list-presets":
            for preset in list_presets():
                print(f"{preset.name:12s} {preset.description}")
                for variant in preset.variants:
                    print(f"{'':14s}- {variant['name']}")
            return EXIT_OK
        if args.command == "validate":
            if (args.config is None) == (args.preset is None):
                raise ConfigError("give either a config file or --preset")
            configs = (
                [load_config(args.config, args.overrides)]
                if args.config
                else _preset_configs(args.preset, [], args.overrides)
            )
            for cfg in configs:
                info = cfg.validate()
                print(", ".join(f"{k}={v}" for k, v in info.items()))
            return EXIT_OK
        if args.command == "run":
            return _execute([load_config(args.config, args.overrides)], args.out, None)
        if args.command == "preset":
            return _execute(_preset_configs(args.name, args.variant, args.overrides), args.out, args.name)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
