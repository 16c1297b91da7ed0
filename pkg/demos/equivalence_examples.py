"""Decide local unitary equivalence for a few small symmetric pairs and check the witnesses.

    python demos/equivalence_examples.py
"""

from symstab import PauliOperator, conjugate, lu_equivalent
from symstab.states import werner_basis, zz_example


def label(u):
    for name, (a, b) in {"Id": (1, 0), "iX": (0, 1j), "iZ": (1j, 0)}.items():
        if abs(u.a - a) + abs(u.b - b) < 1e-9:
            return name
    return f"({u.a:.3f}, {u.b:.3f})"


def compare(name, rho, rho2):
    eq = lu_equivalent(rho, rho2)
    print(f"{name:<34} {eq.verdict:<12} route={eq.route or '-'}")
    if eq.witness is not None:
        factors = " (x) ".join(label(u) for u in eq.witness.factors)
        back = (conjugate(eq.witness, rho) - rho2).max_abs()
        print(f"{'':<34} witness {factors}, residual {back:.1e}")
    elif eq.note:
        print(f"{'':<34} {eq.note}")


def werner(n, c):
    return sum((ck * werner_basis(n, k) for k, ck in enumerate(c)), PauliOperator(n))


def main():
    compare("Id/8 + a zzz  vs  Id/8 - a zzz", zz_example(0.05), zz_example(-0.05))
    compare("Id/4 + a zz   vs  Id/4 - a zz", PauliOperator(2, {"ii": 0.25, "zz": 0.1}), PauliOperator(2, {"ii": 0.25, "zz": -0.1}))
    # at even n a uniform flip leaves zzzz alone, yet one factor of iX still works
    compare("Id/16 + a zzzz vs Id/16 - a zzzz", PauliOperator(4, {"iiii": 1 / 16, "zzzz": 0.01}), PauliOperator(4, {"iiii": 1 / 16, "zzzz": -0.01}))
    # same class, different invariant
    compare("two Werner states, n=4", werner(4, [1 / 16, 0.01 / 15, 0.001]), werner(4, [1 / 16, 0.01 / 15, 0.0015]))
    compare("Werner vs product", werner(2, [0.25, 0.05]), PauliOperator(2, {"ii": 0.25, "zz": 0.05}))


if __name__ == "__main__":
    main()
