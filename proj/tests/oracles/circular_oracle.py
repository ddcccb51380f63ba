#!/usr/bin/env python3
#
# Project graphprint - Copyright 2026 The graphprint Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Independent evaluation of the circular fingerprint hash chain.

Atom features are written out by hand from the documented 28-entry layout
(element C N O S F P Cl Br I other | degree 0-5 | H 0-4 | valence 0-5 |
aromatic); nothing here calls into graphprint.  Prints the values frozen
into tests/test_fingerprints.cpp.
"""

OFFSET = 0xCBF29CE484222325
PRIME = 0x100000001B3
ELEMENTS = ["C", "N", "O", "S", "F", "P", "Cl", "Br", "I", "other"]


def fnv1a(data: bytes) -> int:
    h = OFFSET
    for b in data:
        h ^= b
        h = (h * PRIME) % 2**64
    return h


def atom_bytes(element, degree, hydrogens, aromatic=False):
    f = [0] * 28
    f[ELEMENTS.index(element)] = 1
    f[10 + degree] = 1
    f[16 + min(hydrogens, 4)] = 1
    f[21 + min(hydrogens, 5)] = 1
    f[27] = int(aromatic)
    return bytes(f)


def le8(h):
    return h.to_bytes(8, "little")


def fingerprint(atoms, bonds, radius, length):
    """atoms: list of bytes; bonds: list of (i, j, key_prefix bytes)."""
    ids = list(atoms)
    bits = set()
    for _ in range(radius):
        new = []
        for a, own in enumerate(ids):
            keys = []
            for i, j, prefix in bonds:
                if a in (i, j):
                    other = j if a == i else i
                    keys.append(prefix + ids[other])
            h = fnv1a(own + b"".join(sorted(keys)))
            bits.add(h % length)
            new.append(le8(h))
        ids = new
    return sorted(bits)


print("fnv1a(empty) =", hex(fnv1a(b"")))
print("fnv1a(00)    =", hex(fnv1a(b"\x00")))
print("fnv1a('a')   =", hex(fnv1a(b"a")))

methane = [atom_bytes("C", 0, 4)]
print("C  R=1 S=16   ", fingerprint(methane, [], 1, 16))
print("C  hash       ", hex(fnv1a(methane[0])))

single = bytes([0, 0, 0])
methanol = [atom_bytes("C", 1, 3), atom_bytes("O", 1, 1)]
print("CO R=2 S=2048 ", fingerprint(methanol, [(0, 1, single)], 2, 2048))

ethane = [atom_bytes("C", 1, 3), atom_bytes("C", 1, 3)]
print("CC R=1 S=1024 ", fingerprint(ethane, [(0, 1, single)], 1, 1024))
