"""Regenerate the committed molecular fixtures (H4 chain, N2 active space).

Requires pyscf and openfermion. Writes interchange JSON into ../fixtures/.
Qubit q is spin-orbital q (even = alpha, odd = beta) under Jordan-Wigner.
"""
import json
import pathlib
import sys

import numpy as np
from openfermion import InteractionOperator, jordan_wigner
from openfermion.ops.representations import get_active_space_integrals
from pyscf import ao2mo, gto, scf

PRUNE = 1e-8
OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def export(name, mol, n_core, n_active, note):
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    e_hf = mf.kernel()
    if not mf.converged:
        sys.exit(f"{name}: SCF did not converge")
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    nmo = c.shape[1]
    h2 = ao2mo.restore(1, ao2mo.kernel(mol, c), nmo)
    # physicist-ordered spatial integrals <pq|rs> as openfermion expects
    phys = np.asarray(h2.transpose(0, 2, 3, 1), order="C")
    core = list(range(n_core))
    active = list(range(n_core, n_core + n_active))
    shift, h1a, h2a = get_active_space_integrals(h1, phys, core, active)
    const = mol.energy_nuc() + shift
    n = n_active
    one = np.zeros((2 * n, 2 * n))
    two = np.zeros((2 * n,) * 4)
    for p in range(n):
        for q in range(n):
            one[2 * p, 2 * q] = one[2 * p + 1, 2 * q + 1] = h1a[p, q]
            for r in range(n):
                for s in range(n):
                    v = h2a[p, q, r, s]
                    two[2 * p, 2 * q + 1, 2 * r + 1, 2 * s] = v
                    two[2 * p + 1, 2 * q, 2 * r, 2 * s + 1] = v
                    two[2 * p, 2 * q, 2 * r, 2 * s] = v
                    two[2 * p + 1, 2 * q + 1, 2 * r + 1, 2 * s + 1] = v
    op = InteractionOperator(const, one, two / 2.0)
    qop = jordan_wigner(op)
    nq = 2 * n
    terms = []
    constant = 0.0
    for ops, coeff in qop.terms.items():
        if abs(coeff.imag) > 1e-12:
            sys.exit(f"{name}: complex coefficient {coeff}")
        coeff = coeff.real
        if not ops:
            constant += coeff
            continue
        if abs(coeff) < PRUNE:
            continue
        label = ["I"] * nq
        for q, p in ops:
            label[q] = p
        terms.append({"pauli": "".join(label), "coeff": float(f"{coeff:.17g}")})
    terms.sort(key=lambda t: t["pauli"])
    n_elec_active = mol.nelectron - 2 * n_core
    reference = "1" * n_elec_active + "0" * (nq - n_elec_active)
    doc = {
        "n_qubits": nq,
        "reference": reference,
        "constant": float(f"{constant:.17g}"),
        "terms": terms,
        "metadata": {
            "name": name,
            "description": note,
            "basis": mol.basis,
            "rhf_energy": e_hf,
            "n_core": n_core,
            "n_active_orbitals": n_active,
            "encoding": "jordan-wigner, qubit 2p = alpha(p), 2p+1 = beta(p)",
        },
    }
    path = OUT / f"{name}.json"
    path.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"{name}: n_qubits={nq} M={len(terms)} E_RHF={e_hf:.12f} -> {path}")


def main():
    OUT.mkdir(exist_ok=True)
    r = 1.5
    h4 = gto.M(
        atom=[("H", (0, 0, i * r)) for i in range(4)],
        basis="sto-3g",
        unit="Angstrom",
    )
    export("h4_sto3g_1.5", h4, 0, 4, "linear H4 chain, equidistant 1.5 A, STO-3G")
    n2 = gto.M(
        atom=[("N", (0, 0, 0)), ("N", (0, 0, r))],
        basis="cc-pvdz",
        unit="Angstrom",
        symmetry=True,
    )
    export("n2_cas66_ccpvdz_1.5", n2, 4, 6, "N2 at 1.5 A, cc-pVDZ, CAS(6e,6o) of RHF MOs")


if __name__ == "__main__":
    main()
