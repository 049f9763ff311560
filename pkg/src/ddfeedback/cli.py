"""Command line front end for the simulation harness.

Subcommands:

* ``run``          execute a preset (or a saved config) and write CSV output
* ``list-presets`` show every named experiment
* ``dump-config``  print a preset as a reloadable config file

Exit status is 0 on success and 2 on a configuration problem, with the
violations written to stderr.
"""

import argparse
import dataclasses
import sys

from . import harness


def _parse_sweep_values(text):
    values = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            values.append(int(tok))
        except ValueError:
            values.append(float(tok))
    return tuple(values)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ddfb",
        description="Monte-Carlo evaluation of limited-feedback channel "
                    "estimation schemes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment")
    src = run_p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="named experiment (see list-presets)")
    src.add_argument("--config", help="config file saved by dump-config or a "
                                      "previous run's spec.resolved.txt")
    run_p.add_argument("--trials", type=int, help="override the trial count")
    run_p.add_argument("--seed", type=int, help="override the master seed")
    run_p.add_argument("--workers", type=int, default=1,
                       help="worker processes (results do not depend on this)")
    run_p.add_argument("--out", default="out",
                       help="output directory (default: ./out)")
    run_p.add_argument("--sweep",
                       help="override sweep values, comma separated "
                            "(e.g. --sweep -10,0,10)")

    sub.add_parser("list-presets", help="list available experiments")

    dump_p = sub.add_parser("dump-config",
                            help="print a preset as a config file")
    dump_p.add_argument("--preset", required=True)
    dump_p.add_argument("--out", help="write to a file instead of stdout")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)

    if args.command == "list-presets":
        for name in harness.preset_names():
            print(name)
        return 0

    if args.command == "dump-config":
        try:
            text = harness.dump_config(harness.preset(args.preset))
        except ValueError as err:
            print(f"error: {err}", file=sys.stderr)
            return 2
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0

    # run
    try:
        if args.preset is not None:
            spec = harness.preset(args.preset)
        else:
            spec = harness.load_config(args.config)
    except (ValueError, OSError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.sweep is not None:
        overrides["sweep_values"] = _parse_sweep_values(args.sweep)
    if overrides:
        spec = dataclasses.replace(spec, **overrides)

    try:
        records, summary = harness.run_experiment(
            spec, out_dir=args.out, workers=args.workers,
            progress=lambda line: print(line, file=sys.stderr),
        )
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"{len(records)} records over {len(spec.sweep_values)} sweep "
          f"points -> {args.out}/records.csv, summary.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
