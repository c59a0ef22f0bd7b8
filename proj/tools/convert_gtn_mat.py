#!/usr/bin/env python3
"""Convert the published guess-the-number epoch file (MATLAB .mat) to EPB v1.

The file is expected to hold one array of target epochs and one of
non-target epochs, each shaped epochs x channels x samples (a transposed
samples-last layout is detected). Targets are written first, then
non-targets; subject ids are unknown and stored as -1.

    python3 convert_gtn_mat.py gtn_epochs.mat gtn.epb

Pass --list to print the variables of the file when the default keys do not match.
"""

import argparse
import struct
import sys

import numpy as np


def load_mat(path):
    try:
        from scipy.io import loadmat

        return {k: v for k, v in loadmat(path).items() if not k.startswith("__")}
    except NotImplementedError:
        # MATLAB v7.3 files are HDF5 and store arrays with reversed axes.
        import h5py

        with h5py.File(path, "r") as f:
            return {k: np.array(f[k]).T for k in f.keys() if isinstance(f[k], h5py.Dataset)}


def as_epochs(a, n_channels, name):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 3:
        sys.exit(f"{name}: expected a 3-D array, got shape {a.shape}")
    if a.shape[1] != n_channels and a.shape[2] == n_channels:
        a = a.transpose(0, 2, 1)
    if a.shape[1] != n_channels:
        sys.exit(f"{name}: no axis of length {n_channels} in shape {a.shape}")
    return a


def write_epb(path, epochs, labels, rate, prestim, names):
    n, c, s = epochs.shape
    if not np.isfinite(epochs).all():
        sys.exit("non-finite amplitude in input")
    with open(path, "wb") as f:
        f.write(b"ERPB")
        f.write(struct.pack("<HIHIff", 1, n, c, s, rate, prestim))
        for name in names:
            f.write(name.encode("ascii")[:8].ljust(8, b" "))
        f.write(np.asarray(labels, dtype="u1").tobytes())
        f.write(np.full(n, -1, dtype="<i4").tobytes())
        f.write(np.ascontiguousarray(epochs, dtype="<f4").tobytes())


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("mat")
    p.add_argument("out", nargs="?")
    p.add_argument("--target-key", default="allTargetData")
    p.add_argument("--nontarget-key", default="allNonTargetData")
    p.add_argument("--channels", default="Fz,Cz,Pz")
    p.add_argument("--rate", type=float, default=1000.0)
    p.add_argument("--prestim", type=float, default=200.0)
    p.add_argument("--list", action="store_true", help="print the variables and exit")
    args = p.parse_args()

    data = load_mat(args.mat)
    if args.list or args.out is None:
        for k, v in data.items():
            print(k, getattr(v, "shape", type(v).__name__))
        return
    names = args.channels.split(",")
    for key in (args.target_key, args.nontarget_key):
        if key not in data:
            sys.exit(f"variable '{key}' not found; available: {', '.join(data)}")
    target = as_epochs(data[args.target_key], len(names), args.target_key)
    nontarget = as_epochs(data[args.nontarget_key], len(names), args.nontarget_key)
    if target.shape[2] != nontarget.shape[2]:
        sys.exit("target and non-target epochs differ in length")
    epochs = np.concatenate([target, nontarget])
    labels = [1] * len(target) + [0] * len(nontarget)
    write_epb(args.out, epochs, labels, args.rate, args.prestim, names)
    print(f"wrote {len(epochs)} epochs ({len(target)} targets) x {epochs.shape[1]} x {epochs.shape[2]} to {args.out}")


if __name__ == "__main__":
    main()
