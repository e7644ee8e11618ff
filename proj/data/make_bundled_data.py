#!/usr/bin/env python3
"""Regenerates the bundled datasets. Deterministic; requires numpy and
scikit-learn (for the wine data only). The shipped CSVs are the output of this
script and are committed so builds and tests never need to run it."""
import numpy as np

OUT_DIR = __file__.rsplit("/", 1)[0]


def write_csv(path, x, y, header):
    with open(path, "w") as f:
        f.write(header + "\n")
        for row, label in zip(x, y):
            f.write(",".join(f"{v:.10g}" for v in row) + f",{int(label)}\n")


def fourclass_like():
    # Two dominant blobs separable along x plus two small same-axis intruder
    # blobs deep inside the opposite class, so the best linear rule lands in
    # the mid-0.8 accuracy range like the original four-cluster benchmark.
    rng = np.random.default_rng(20240682)
    n_big, n_small = 300, 41
    pos_big = rng.normal([-1.0, 0.0], 0.55, size=(n_big, 2))
    neg_big = rng.normal([+1.0, 0.0], 0.55, size=(n_big, 2))
    pos_small = rng.normal([+2.1, 0.3], 0.35, size=(n_small, 2))
    neg_small = rng.normal([-2.1, -0.3], 0.35, size=(n_small, 2))
    x = np.vstack([pos_big, pos_small, neg_big, neg_small])
    y = np.array([1] * (n_big + n_small) + [-1] * (n_big + n_small))
    order = rng.permutation(len(y))
    write_csv(f"{OUT_DIR}/fourclass_like.csv", x[order], y[order], "x1,x2,label")


def two_moons():
    rng = np.random.default_rng(424242)
    n = 200  # per class
    t = rng.uniform(0.0, np.pi, size=n)
    upper = np.c_[np.cos(t), np.sin(t)] + rng.normal(0, 0.12, size=(n, 2))
    lower = np.c_[1.0 - np.cos(t), 0.35 - np.sin(t)] + rng.normal(0, 0.12, size=(n, 2))
    x = np.vstack([upper, lower])
    y = np.array([1] * n + [-1] * n)
    order = rng.permutation(len(y))
    write_csv(f"{OUT_DIR}/two_moons.csv", x[order], y[order], "x1,x2,label")


def wine_binary():
    from sklearn.datasets import load_wine

    wine = load_wine()
    y = np.where(wine.target == 0, 1, -1)  # cultivar 1 vs the other two
    header = ",".join(name.replace(",", "_") for name in wine.feature_names) + ",label"
    write_csv(f"{OUT_DIR}/wine_binary.csv", wine.data, y, header.rsplit(",label", 1)[0] + ",label")


if __name__ == "__main__":
    fourclass_like()
    two_moons()
    wine_binary()
    print("wrote fourclass_like.csv two_moons.csv wine_binary.csv")
