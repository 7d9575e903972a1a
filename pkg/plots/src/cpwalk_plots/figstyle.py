"""Shared figure plumbing: headless backend and reproducible saving."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

# stable ids inside SVG output; without this every run salts element ids
matplotlib.rcParams["svg.hashsalt"] = "cpwalk-plots"


def save_figure(fig, out_path: str, no_timestamp: bool) -> None:
    """Write the figure; with ``no_timestamp`` the output is byte-stable
    across reruns (the embedded creation date is the only varying part)."""
    metadata = None
    if no_timestamp:
        if str(out_path).endswith(".svg"):
            metadata = {"Date": None}
        elif str(out_path).endswith(".pdf"):
            metadata = {"CreationDate": None}
    fig.savefig(out_path, metadata=metadata)
    plt.close(fig)


def add_io_arguments(parser, n_inputs: int = 1) -> None:
    if n_inputs == 1:
        parser.add_argument("--in", dest="in_path", required=True,
                            help="input file produced by the cpwalk CLI")
    parser.add_argument("--out", dest="out_path", required=True,
                        help="output figure file (.svg or any matplotlib format)")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="suppress embedded timestamps for byte-identical reruns")
