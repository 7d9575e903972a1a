"""Body position with and without the tracking controller, on shared axes."""

from __future__ import annotations

import argparse
import sys

from .figstyle import add_io_arguments, plt, save_figure
from .schema import SchemaError, load_trace


def render(trace_qp, trace_noqp) -> "plt.Figure":
    fig, (ax_x, ax_y) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    for ax, column, label in ((ax_x, "com_x_m", "x"), (ax_y, "com_y_m", "y")):
        ax.plot(trace_qp["t_s"], trace_qp[column], label="with controller")
        ax.plot(trace_noqp["t_s"], trace_noqp[column],
                label="plain stepping", alpha=0.8)
        ax.axhline(0.0, linestyle=":", color="k", linewidth=1.0,
                   label="reference")
        ax.set_ylabel("com %s [m]" % label)
        ax.legend(loc="upper right")
        ax.grid(True, alpha=0.3)
    ax_y.set_xlabel("time [s]")
    fig.suptitle("Position regulation comparison")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in-qp", dest="in_qp", required=True,
                        help="trace CSV of the controlled run")
    parser.add_argument("--in-noqp", dest="in_noqp", required=True,
                        help="trace CSV of the plain-stepping run")
    add_io_arguments(parser, n_inputs=0)
    args = parser.parse_args(argv)
    try:
        trace_qp = load_trace(args.in_qp)
        trace_noqp = load_trace(args.in_noqp)
    except (OSError, SchemaError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 1
    save_figure(render(trace_qp, trace_noqp), args.out_path, args.no_timestamp)
    print("wrote %s" % args.out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
