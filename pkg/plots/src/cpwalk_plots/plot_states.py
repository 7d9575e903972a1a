"""CoM position and velocity traces from one run CSV."""

from __future__ import annotations

import argparse
import sys

from .figstyle import add_io_arguments, plt, save_figure
from .schema import SchemaError, load_trace


def render(trace) -> "plt.Figure":
    fig, (ax_pos, ax_vel) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    t = trace["t_s"]
    ax_pos.plot(t, trace["com_x_m"], label="com x")
    ax_pos.plot(t, trace["com_y_m"], label="com y")
    ax_pos.set_ylabel("position [m]")
    ax_pos.legend(loc="upper right")
    ax_pos.grid(True, alpha=0.3)
    ax_vel.plot(t, trace["vel_x_mps"], label="vel x")
    ax_vel.plot(t, trace["vel_y_mps"], label="vel y")
    ax_vel.set_ylabel("velocity [m/s]")
    ax_vel.set_xlabel("time [s]")
    ax_vel.legend(loc="upper right")
    ax_vel.grid(True, alpha=0.3)
    fig.suptitle("Body states")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    add_io_arguments(parser)
    args = parser.parse_args(argv)
    try:
        trace = load_trace(args.in_path)
    except (OSError, SchemaError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 1
    save_figure(render(trace), args.out_path, args.no_timestamp)
    print("wrote %s" % args.out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
