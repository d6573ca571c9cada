#!/usr/bin/env python3
"""Assemble a benchmark dataset directory from offline-installable packages.

Writes numeric CSV files (class label in the last column) plus a
``manifest.json`` usable with ``kminit bench --manifest``.

Sources:
  * kminit's bundled files (Iris, Wine, Ruspini)
  * the ``keel_ds`` wheel, which ships KEEL copies of several UCI sets

Some KEEL copies differ slightly from the originals (a few duplicate rows
removed, a constant attribute dropped) and some carry binarized class labels;
for those the original class count is written to the manifest as ``k``.
Datasets with no offline source are listed at the end and skipped.

    pip install keel-ds
    python scripts/fetch_datasets.py --output data/
    export KMINIT_DATA_DIR=$PWD/data
"""

import argparse
import json
import shutil
import sys
from importlib import resources
from pathlib import Path

# table id, name, KEEL file, k override, leading columns to drop
KEEL = [
    (1, "abalone", "imbalanced/raw/abalone19.dat", 28, 1),
    (4, "ecoli", "imbalanced/raw/ecoli1.dat", 8, 0),
    (5, "glass", "imbalanced/raw/glass0.dat", 6, 0),
    (7, "ionosphere", "balanced/raw/ionosphere.dat", None, 0),
    (10, "landsat", "balanced/raw/satimage.dat", None, 0),
    (11, "letter", "balanced/raw/letter.dat", None, 0),
    (12, "magic", "balanced/raw/magic.dat", None, 0),
    (15, "optdigits", "balanced/raw/optdigits.dat", None, 0),
    (16, "pageblocks", "imbalanced/raw/page-blocks0.dat", 5, 0),
    (17, "pima", "balanced/raw/pima.dat", None, 0),
    (19, "spambase", "balanced/raw/spambase.dat", None, 0),
    (24, "yeast", "imbalanced/raw/yeast1.dat", 10, 0),
]

UNAVAILABLE = {
    2: "Breast Cancer Wisconsin (Original)", 3: "Breast Tissue", 6: "Heart Disease",
    9: "ISOLET", 13: "Multiple Features (Fourier)", 14: "Musk (Clean2)",
    18: "Shuttle (Statlog)", 20: "SPECTF Heart", 21: "Wall-Following Robot Navigation",
    22: "Wine Quality",
}


def convert(src: Path, dst: Path, drop: int):
    rows = 0
    with open(src, encoding="utf-8") as fin, open(dst, "w", encoding="utf-8") as fout:
        for line in fin:
            line = line.strip()
            if not line or line.startswith("@"):
                continue
            fields = [f.strip() for f in line.split(",")][drop:]
            fout.write(",".join(fields) + "\n")
            rows += 1
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument("--output", required=True)
    args = ap.parse_args(argv)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)

    bundled = Path(str(resources.files("kminit") / "data"))
    manifest = [item for item in json.loads((bundled / "manifest.json").read_text())
                if "id" in item]
    for item in manifest:
        shutil.copy(bundled / item["path"], out / item["path"])

    try:
        import keel_ds
    except ImportError:
        print("keel_ds not installed; only bundled datasets written", file=sys.stderr)
    else:
        root = Path(keel_ds.__file__).parent / "data"
        for tid, name, rel, k, drop in KEEL:
            rows = convert(root / rel, out / f"{name}.csv", drop)
            entry = {"id": tid, "name": name, "path": f"{name}.csv", "delimiter": ",",
                     "class_column": -1, "has_header": False}
            if k is not None:
                entry["k"] = k
            manifest.append(entry)
            print(f"{tid:>2} {name:<12} {rows} rows")

    manifest.sort(key=lambda e: e.get("id", 0))
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    for tid, name in sorted(UNAVAILABLE.items()):
        print(f"{tid:>2} {name}: no offline source, skipped", file=sys.stderr)


if __name__ == "__main__":
    main()
