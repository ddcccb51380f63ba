#!/usr/bin/env python3
#
# Project graphprint - Copyright 2026 The graphprint Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Generate parser golden files with RDKit.

For every input SMILES, records the per-atom element, heavy-atom degree,
aromatic flag, formal charge and total hydrogen count, and per-bond
endpoints (sorted), bond type, conjugation and ring membership.  Atom
order is the SMILES input order, which RDKit preserves when parsing.

Usage:
  make_parser_golden.py smi FILE.smi OUT.json      (one "SMILES name" per line)
  make_parser_golden.py csv FILE.csv OUT.json      (column "smiles")
"""

import csv
import json
import sys

from rdkit import Chem

BOND_TYPES = {
    Chem.BondType.SINGLE: "single",
    Chem.BondType.DOUBLE: "double",
    Chem.BondType.TRIPLE: "triple",
    Chem.BondType.AROMATIC: "aromatic",
}


def describe(smiles: str) -> dict:
    mol = Chem.MolFromSmiles(smiles)
    if mol is None:
        raise SystemExit(f"RDKit cannot parse {smiles}")
    raw = Chem.MolFromSmiles(smiles, sanitize=False)
    atoms = []
    for atom, raw_atom in zip(mol.GetAtoms(), raw.GetAtoms()):
        if atom.GetIsAromatic() != raw_atom.GetIsAromatic():
            raise SystemExit(f"{smiles}: aromaticity not syntactic at atom {atom.GetIdx()}")
        atoms.append({
            "element": atom.GetSymbol(),
            "degree": atom.GetDegree(),
            "aromatic": atom.GetIsAromatic(),
            "charge": atom.GetFormalCharge(),
            "h": atom.GetTotalNumHs(),
        })
    bonds = []
    for bond in mol.GetBonds():
        i, j = sorted((bond.GetBeginAtomIdx(), bond.GetEndAtomIdx()))
        bonds.append({
            "i": i,
            "j": j,
            "order": BOND_TYPES[bond.GetBondType()],
            "conjugated": bond.GetIsConjugated(),
            "in_ring": bond.IsInRing(),
        })
    bonds.sort(key=lambda b: (b["i"], b["j"]))
    return {"smiles": smiles, "atoms": atoms, "bonds": bonds}


def main(kind: str, src: str, dst: str) -> None:
    if kind == "smi":
        with open(src) as fh:
            smiles = [line.split()[0] for line in fh if line.strip()]
    else:
        with open(src, newline="") as fh:
            smiles = [row["smiles"] for row in csv.DictReader(fh)]
    records = [describe(s) for s in smiles]
    with open(dst, "w") as fh:
        json.dump({"toolkit": "rdkit", "version": Chem.rdBase.rdkitVersion,
                   "molecules": records}, fh, separators=(",", ":"))
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2], sys.argv[3])
