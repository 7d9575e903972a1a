"""Capture-point behavior across thrust settings, from a sweep summary JSON."""

from __future__ import annotations

import argparse
import sys

from .figstyle import add_io_arguments, plt, save_figure
from .schema import SchemaError, load_sweep_summary


def render(summary) -> "plt.Figure":
    ok = [r for r in summary["rows"] if r["status"] == "ok"]
    thrusts = [r["thrust_n"] for r in ok]
    fig, (ax_exc, ax_gain) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    ax_exc.plot(thrusts, [r["max_abs_cp_m"] for r in ok], marker="o")
    ax_exc.set_ylabel("max |capture point| [m]")
    ax_exc.grid(True, alpha=0.3)
    ax_gain.plot(thrusts, [r["gain_factor_sqrt_s2pm"] for r in ok], marker="o",
                 label="gain factor sqrt(z0/g_eff)")
    ax_gain.plot(thrusts, [r["natural_frequency_radps"] for r in ok],
                 marker="s", label="natural frequency [rad/s]")
    ax_gain.set_xlabel("combined thrust [N]")
    ax_gain.legend(loc="center right")
    ax_gain.grid(True, alpha=0.3)
    fig.suptitle("Thrust sweep")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    add_io_arguments(parser)
    args = parser.parse_args(argv)
    try:
        summary = load_sweep_summary(args.in_path)
    except (OSError, SchemaError, ValueError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 1
    save_figure(render(summary), args.out_path, args.no_timestamp)
    print("wrote %s" % args.out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
