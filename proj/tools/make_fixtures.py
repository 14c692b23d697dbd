#!/usr/bin/env python3
# Copyright 2026 The upart Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the spin-orbital integral fixtures under data/.

Requires pyscf. Not part of the build; the generated files are checked in.

Output convention (matches upart::parse_integrals):
    H = sum_pq h_pq a+_p a_q + 1/2 sum_pqrs h_pqrs a+_p a+_q a_r a_s
    h_pqrs = (ps|qr) in chemist notation over spin orbitals p = 2*i + spin.
Only one representative per 8-fold symmetry orbit is written.
"""

import argparse
import itertools
import pathlib

import numpy as np
from pyscf import ao2mo, gto, scf

MOLECULES = {
    "h2_sto3g": ("H 0 0 0; H 0 0 0.7414", 0, 0),
    "lih_sto3g": ("Li 0 0 0; H 0 0 1.5949", 0, 0),
    "h2o_sto3g": ("O 0 0 0.1173; H 0 0.7572 -0.4692; H 0 -0.7572 -0.4692", 0, 0),
    "beh2_sto3g": ("Be 0 0 0; H 0 0 1.3264; H 0 0 -1.3264", 0, 0),
    "hf_sto3g": ("F 0 0 0; H 0 0 0.9168", 0, 0),
    "h4_sto3g": ("H 0 0 0; H 0 0 0.9; H 0 0 1.8; H 0 0 2.7", 0, 0),
}

CUTOFF = 1e-10


def orbit(p, q, r, s):
    return {
        (p, q, r, s), (s, q, r, p), (p, r, q, s), (s, r, q, p),
        (q, p, s, r), (r, p, s, q), (q, s, p, r), (r, s, p, q),
    }


def write_fixture(name, geometry, charge, spin, outdir):
    mol = gto.M(atom=geometry, basis="sto-3g", charge=charge, spin=spin,
                unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    nmo = c.shape[1]
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), nmo)
    nso = 2 * nmo

    lines = [
        f"# {name}: RHF/STO-3G spin-orbital integrals, interleaved spin",
        f"# nuclear repulsion {mol.energy_nuc():.17g} (not part of the operator)",
        f"norb {nso}",
    ]
    for p, q in itertools.product(range(nso), repeat=2):
        if p > q or p % 2 != q % 2:
            continue
        v = h1[p // 2, q // 2]
        if abs(v) > CUTOFF:
            lines.append(f"1 {p} {q} {v:.17g}")
    seen = set()
    for p, q, r, s in itertools.product(range(nso), repeat=4):
        if p % 2 != s % 2 or q % 2 != r % 2:
            continue
        key = min(orbit(p, q, r, s))
        if key in seen:
            continue
        seen.add(key)
        v = eri[p // 2, s // 2, q // 2, r // 2]
        if abs(v) > CUTOFF:
            lines.append(f"2 {p} {q} {r} {s} {v:.17g}")
    path = outdir / f"{name}.int"
    path.write_text("\n".join(lines) + "\n")
    print(f"{path}: {nso} spin orbitals, E_hf = {mf.e_tot:.10f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    outdir = pathlib.Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, (geom, charge, spin) in MOLECULES.items():
        write_fixture(name, geom, charge, spin, outdir)


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    main()
