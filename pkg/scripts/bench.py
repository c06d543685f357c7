"""Wall time of direct, kernel and Fourier evolution on a periodic window.

Same as ``weylwalk bench`` but sweeps window sizes too.
"""
import argparse
import sys

from weylwalk.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-max", type=int, default=64)
    ap.add_argument("--sizes", default="32,64,128")
    args = ap.parse_args()
    for size in map(int, args.sizes.split(",")):
        print(f"# window {size}x{size}", flush=True)
        code = cli_main(["bench", "--t-max", str(args.t_max), "--width", str(size)])
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
