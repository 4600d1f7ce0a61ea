#!/usr/bin/env python3
"""Convert the small UCI benchmark sets into LIBSVM sparse text.

iris and wine come from the CSV copies bundled with scikit-learn; glass comes
from the UCI ``glass.data`` file (first column is a row id and is dropped).
Labels are written 1-based.
"""
import argparse
import csv
import os


def write_libsvm(rows, path):
    with open(path, "w", encoding="utf-8") as out:
        for label, feats in rows:
            parts = [str(label)]
            parts += [f"{j + 1}:{v}" for j, v in enumerate(feats) if float(v) != 0.0]
            out.write(" ".join(parts) + "\n")


def sklearn_csv(path):
    with open(path, newline="") as f:
        reader = csv.reader(f)
        next(reader)
        return [(int(r[-1]) + 1, r[:-1]) for r in reader if r]


def glass_data(path):
    with open(path, newline="") as f:
        return [(int(r[-1]), r[1:-1]) for r in csv.reader(f) if r]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sklearn-data", required=True, help="sklearn/datasets/data directory")
    ap.add_argument("--glass", required=True, help="path to UCI glass.data")
    ap.add_argument("--out", default="data")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    write_libsvm(sklearn_csv(os.path.join(args.sklearn_data, "iris.csv")), os.path.join(args.out, "iris.txt"))
    write_libsvm(sklearn_csv(os.path.join(args.sklearn_data, "wine_data.csv")), os.path.join(args.out, "wine.txt"))
    write_libsvm(glass_data(args.glass), os.path.join(args.out, "glass.txt"))


if __name__ == "__main__":
    main()
