#!/usr/bin/env python3
"""Sweep the axiom checker over a grid of constructed algebras.

Covers the free algebras, powerset algebras, and products, coproducts,
downsets and opposites thereof, printing one verdict per algebra.
"""

from effectlogic import effect_algebra as ea

if __name__ == "__main__":
    basics = [(f"MO({n})", ea.mo_free(n)) for n in range(5)]
    basics += [(f"P({n})", ea.boolean_powerset_ea(n)) for n in range(5)]
    cases = list(basics)
    mo1 = ea.mo_free(1)
    p2 = ea.boolean_powerset_ea(2)
    cases += [
        ("MO(1) x P(2)", ea.product(mo1, p2)),
        ("MO(1) + MO(1)", ea.coproduct(mo1, mo1)),
        ("MO(2) + P(2)", ea.coproduct(ea.mo_free(2), p2)),
    ]
    p3 = ea.boolean_powerset_ea(3)
    cases += [(f"down(P(3), {p3.name_of(x)})", ea.downset(p3, x)) for x in (0, 3, 7)]
    cases += [(f"op({name})", ea.opposite(algebra)) for name, algebra in basics[:6]]
    width = max(len(name) for name, _ in cases)
    for name, algebra in cases:
        report = ea.check_axioms(algebra)
        print(f"{name:<{width}}  size {algebra.size:>3}  {report.describe(algebra)}")
