"""Hide a known stabilizer algebra behind a random local unitary and recover its blocks.

The algebra is su(2) acting diagonally on qubits {1, 2}, another copy on {3, 5},
one A direction on qubit 4 and nothing on qubit 6.

    python demos/block_decomposition.py
"""

import numpy as np

from symstab import AlgebraBasis, LocalUnitary, Unitary2, decompose_algebra, verify_block_relations, weight
from symstab.pauli import conjugate_element, local_element
from symstab.stabilizer import standard_block


def random_su2(rng):
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    return Unitary2(complex(v[0], v[1]), complex(v[2], v[3]))


def main():
    n = 6
    rng = np.random.default_rng(3)
    elems = list(standard_block(n, (0, 1))) + list(standard_block(n, (2, 4)))
    elems.append(local_element(n, {3: (1.0, 0.0, 0.0)}))
    g = LocalUnitary(tuple(random_su2(rng) for _ in range(n)))
    K = AlgebraBasis.span(n, conjugate_element(g, np.array(elems)))
    print(f"stabilizer dim {K.dim}, closure residual {K.closure_residual():.1e}")

    D = decompose_algebra(K)
    for b, check in zip(D.blocks, verify_block_relations(D)):
        qubits = [q + 1 for q in b.qubits]
        worst = max(check.uv_w, check.vw_u, check.wu_v)
        print(f"block on qubits {qubits}: weight {weight(b.U)}, relation residual {worst:.1e}")
    print(f"S qubits {[q + 1 for q in D.s_qubits]}, R qubits {[q + 1 for q in D.r_qubits]}")

    # after the aligner, every block is the standard diagonal triple again
    aligned = K.conjugated(D.aligner)
    for b in D.blocks:
        res = max(aligned.residual(M / np.sqrt(len(b.qubits))) for M in standard_block(n, b.qubits))
        print(f"aligned block {[q + 1 for q in b.qubits]} matches standard form to {res:.1e}")


if __name__ == "__main__":
    main()
