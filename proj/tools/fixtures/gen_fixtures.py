#!/usr/bin/env python3
# Copyright 2026 The OE-VQE Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the FCIDUMP fixtures under tests/fixtures.

Integrals are expressed in the Loewdin-orthogonalized STO-3G atomic basis,
which is orthonormal and keeps one orbital per hydrogen atom. Reference
energies (RHF, MP2, FCI) are written to references.json next to the dumps.

Requires pyscf. Run from the repository root:

    python3 tools/fixtures/gen_fixtures.py [--with-n2]
"""

import argparse
import json
import os

import numpy as np
from pyscf import ao2mo, fci, gto, lo, mp, scf

OUT = os.path.join(os.path.dirname(__file__), "..", "..", "tests", "fixtures")


def chain(n, d):
    return [("H", (0.0, 0.0, i * d)) for i in range(n)]


def write_fcidump(path, h1, eri, nelec, enuc, tol=1e-14):
    norb = h1.shape[0]
    with open(path, "w") as f:
        f.write(" &FCI NORB=%d,NELEC=%d,MS2=0,\n" % (norb, nelec))
        f.write("  ORBSYM=%s\n" % ("1," * norb))
        f.write("  ISYM=1,\n &END\n")
        for i in range(norb):
            for j in range(i + 1):
                for k in range(norb):
                    for l in range(k + 1):
                        if i * (i + 1) // 2 + j < k * (k + 1) // 2 + l:
                            continue
                        v = eri[i, j, k, l]
                        if abs(v) > tol:
                            f.write("%23.16e %4d %4d %4d %4d\n" % (v, i + 1, j + 1, k + 1, l + 1))
        for i in range(norb):
            for j in range(i + 1):
                if abs(h1[i, j]) > tol:
                    f.write("%23.16e %4d %4d %4d %4d\n" % (h1[i, j], i + 1, j + 1, 0, 0))
        f.write("%23.16e %4d %4d %4d %4d\n" % (enuc, 0, 0, 0, 0))


def generate(name, atoms, refs, run_fci=True):
    mol = gto.M(atom=atoms, basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-13
    mf.kernel()
    assert mf.converged, name
    c = lo.orth_ao(mol, "lowdin")
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), c.shape[1])
    write_fcidump(os.path.join(OUT, name + ".fcidump"), h1, eri, mol.nelectron, mol.energy_nuc())
    entry = {
        "norb": int(c.shape[1]),
        "nelec": int(mol.nelectron),
        "e_nuc": float(mol.energy_nuc()),
        "e_hf": float(mf.e_tot),
        "e_mp2": float(mp.MP2(mf).run().e_tot),
        "eri_0000": float(eri[0, 0, 0, 0]),
    }
    if run_fci:
        cis = fci.FCI(mf)
        cis.conv_tol = 1e-12
        entry["e_fci"] = float(cis.kernel()[0])
    refs[name] = entry


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--with-n2", action="store_true")
    args = ap.parse_args()
    os.makedirs(OUT, exist_ok=True)
    refs = {}
    generate("h2_0.74", chain(2, 0.74), refs)
    for d in (1.0, 2.0):
        generate("h4_%.2f" % d, chain(4, d), refs)
    for d in (1.0, 1.5, 2.0, 2.4):
        generate("h6_%.2f" % d, chain(6, d), refs)
    if args.with_n2:
        generate("n2_0.80", [("N", (0, 0, 0)), ("N", (0, 0, 0.8))], refs)
    with open(os.path.join(OUT, "references.json"), "w") as f:
        json.dump(refs, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
