"""Velocity commands from one run CSV, with the box bound as dashed lines.

The bound comes from --bound, or failing that from the run manifest sitting
next to the trace file.
"""

from __future__ import annotations

import argparse
import sys

from .figstyle import add_io_arguments, plt, save_figure
from .schema import SchemaError, bound_from_manifest, load_trace


def render(trace, bound: float) -> "plt.Figure":
    fig, ax = plt.subplots(figsize=(7, 3.5))
    t = trace["t_s"]
    ax.plot(t, trace["cmd_vx_mps"], label="command x")
    ax.plot(t, trace["cmd_vy_mps"], label="command y")
    for sign in (1.0, -1.0):
        ax.axhline(sign * bound, linestyle="--", color="k", linewidth=1.0,
                   label="bound" if sign > 0 else None)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("velocity command [m/s]")
    ax.legend(loc="upper right")
    ax.grid(True, alpha=0.3)
    fig.suptitle("Control effort")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    add_io_arguments(parser)
    parser.add_argument("--bound", type=float, default=None,
                        help="command bound [m/s]; default: the run manifest")
    args = parser.parse_args(argv)
    try:
        trace = load_trace(args.in_path)
    except (OSError, SchemaError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 1
    bound = args.bound if args.bound is not None else bound_from_manifest(args.in_path)
    if bound is None:
        print("input error: no --bound given and no readable manifest next to "
              "the trace", file=sys.stderr)
        return 1
    save_figure(render(trace, bound), args.out_path, args.no_timestamp)
    print("wrote %s" % args.out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
