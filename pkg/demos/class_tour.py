"""Walk through the stabilizer classes of symmetric states and print their normal forms.

    python demos/class_tour.py
"""

import numpy as np

from symstab import canonical_form, classify, conjugate
from symstab.states import completely_mixed, dicke_state, ghz_mixture, product_zero, singlet, werner_basis
from symstab.pauli import LocalUnitary, Unitary2


def random_su2(rng):
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    return Unitary2(complex(v[0], v[1]), complex(v[2], v[3]))


def tidy(v):
    if isinstance(v, dict):
        return {k: tidy(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [tidy(x) for x in v]
    return round(float(v), 4) + 0.0


def show(name, rho):
    cls = classify(rho)
    print(f"{name:<28} class={cls.tag:<7} dim={cls.dim:<2} p={cls.projection_dims[0]}")
    if cls.tag != "Zero":
        can = canonical_form(rho, cls=cls)
        print(f"{'':<28} coefficients={tidy(can.coefficients)}")


def main():
    states = [
        ("completely mixed, n=3", completely_mixed(3)),
        ("singlet", singlet()),
        ("Werner, n=4", (werner_basis(4, 0) + 0.1 * werner_basis(4, 1) - 0.02 * werner_basis(4, 2)) / 16),
        ("|000><000|", product_zero(3)),
        ("GHZ mixture, n=3", ghz_mixture(3, [0.1, 0.2, 0.15, 0.25], 0.3, 0.8, 0.6j)),
        ("pure Dicke, n=4 k=2", dicke_state(4, 2)),
    ]
    for name, rho in states:
        show(name, rho)

    # a uniform local rotation moves the state but keeps the class and normal form
    rng = np.random.default_rng(7)
    rho = states[4][1]
    moved = conjugate(LocalUnitary.uniform(random_su2(rng), 3), rho)
    print()
    show("GHZ mixture, rotated", moved)


if __name__ == "__main__":
    main()
