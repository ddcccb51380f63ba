#!/usr/bin/env python3
#
# Project graphprint - Copyright 2026 The graphprint Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Rebuild data/delaney.csv from the processed ESOL table.

The source table is the widely redistributed processed Delaney (ESOL)
solubility set (columns "Compound ID", "smiles",
"measured log solubility in mols per litre").  SMILES are rewritten as
RDKit canonical aromatic SMILES because the graphprint parser takes
aromaticity from lowercase atom symbols only.  Stereo annotations are
dropped since the parser rejects them by default.

Usage: prepare_delaney.py ESOL.csv data/delaney.csv
"""

import csv
import sys

from rdkit import Chem


def main(src: str, dst: str) -> None:
    with open(src, newline="") as fh:
        rows = list(csv.DictReader(fh))
    with open(dst, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["id", "smiles", "log_solubility"])
        for row in rows:
            mol = Chem.MolFromSmiles(row["smiles"])
            if mol is None:
                raise SystemExit(f"unparseable: {row['smiles']}")
            out.writerow([row["Compound ID"].strip(),
                          Chem.MolToSmiles(mol, isomericSmiles=False),
                          row["measured log solubility in mols per litre"]])


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
