"""Plot a CSV written by ``twophoton ... --sweep ... --out FILE`` (needs matplotlib)."""
import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv")
    ap.add_argument("-o", "--output", default="scan.png")
    args = ap.parse_args()

    with open(args.csv, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], [[float(v) for v in r] for r in rows[1:]]
    x = [r[0] for r in data]
    fig, ax = plt.subplots(figsize=(6, 4))
    for j, name in enumerate(header[1:], 1):
        ax.plot(x, [r[j] for r in data], label=name)
    ax.set_xlabel(header[0])
    ax.set_ylabel("coincidence rate")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
