"""Command-line runner: scenario files, canned demos, randomized self tests.

Exit codes: 0 when every query evaluated, 1 when some query failed, 2 for
parse or usage errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import classical, config, effect_algebra, quantum, scenario, stochastic

POLARISATION_SCENARIO = """\
# Photons polarised straight up meet one or two filters.
instance quantum
let vertical = predicate(projector(ket1))
let diagonal = predicate(projector(ketNE))
query born(ket0, vertical)
query born(ket0, diagonal)
query born(ket0, andthen(diagonal, vertical))
query born(ket0, then(diagonal, vertical))
"""

DEMOS = ("polarisation", "stone", "axioms")


def demo(name: str, precision: int = 9) -> tuple[str, bool]:
    """Run a canned demo and return its report text."""
    if name == "polarisation":
        sc = scenario.parse_scenario(POLARISATION_SCENARIO)
        return scenario.run(sc, precision=precision)
    if name == "stone":
        lines = []
        for n in range(1, 5):
            points = classical.stone_states(n)
            lines.append(f"|S(X)| = {len(points)} for |X| = {n}")
        return "\n".join(lines) + "\n", True
    if name == "axioms":
        mo1 = effect_algebra.mo_free(1)
        cases = [(f"MO({n})", effect_algebra.mo_free(n)) for n in range(4)]
        cases += [(f"P({n})", effect_algebra.boolean_powerset_ea(n)) for n in range(4)]
        cases += [
            ("MO(1) x MO(1)", effect_algebra.product(mo1, mo1)),
            ("MO(1) + MO(1)", effect_algebra.coproduct(mo1, mo1)),
            ("MO(2) opposite", effect_algebra.opposite(effect_algebra.mo_free(2))),
        ]
        ok = True
        lines = []
        for label, algebra in cases:
            report = effect_algebra.check_axioms(algebra)
            ok = ok and report.passed
            lines.append(f"{label}: {report.describe(algebra)}")
        return "\n".join(lines) + "\n", ok
    raise ValueError(f"unknown demo {name!r}")


def _selftest_effect_algebra(rng: np.random.Generator, cases: int) -> int:
    checks = 0
    for _ in range(cases):
        n = int(rng.integers(0, 4))
        algebra = effect_algebra.mo_free(n)
        other = effect_algebra.boolean_powerset_ea(int(rng.integers(0, 3)))
        for built in (
            algebra,
            other,
            effect_algebra.product(algebra, other),
            effect_algebra.opposite(algebra),
            effect_algebra.downset(other, int(rng.integers(0, other.size))),
        ):
            assert effect_algebra.check_axioms(built).passed
            checks += 1
    return checks


def _selftest_classical(rng: np.random.Generator, cases: int) -> int:
    checks = 0
    for _ in range(cases):
        n = int(rng.integers(1, 6))
        c = classical.range_finset(n)
        members = frozenset(int(i) for i in np.nonzero(rng.random(n) < 0.5)[0])
        p = classical.BoolPredicate(c, members)
        back = classical.substitute(
            classical.predicate_as_map(p), classical.omega_predicate(c)
        )
        assert back == p
        assert classical.orthosum(p, p.complement()) == classical.truth(c)
        checks += 2
    return checks


def _selftest_stochastic(rng: np.random.Generator, cases: int) -> int:
    checks = 0
    for _ in range(cases):
        n = int(rng.integers(1, 6))
        c = classical.range_finset(n)
        p = stochastic.FuzzyPredicate(c, rng.uniform(size=n))
        q = stochastic.FuzzyPredicate(c, rng.uniform(size=n))
        lhs = stochastic.test_then(p, q).values
        rhs = 1.0 - stochastic.test_andthen(p, q.complement()).values
        assert np.max(np.abs(lhs - rhs)) < 1e-12
        omega = stochastic.omega_predicate(c)
        back = stochastic.substitute(stochastic.predicate_as_map(p), omega)
        assert np.max(np.abs(back.values - p.values)) < config.POST_EPS
        checks += 2
    return checks


def _selftest_quantum(rng: np.random.Generator, cases: int) -> int:
    checks = 0
    for _ in range(cases):
        n = int(rng.integers(1, 5))
        p = quantum.random_predicate(rng, n)
        x = quantum.random_pure_state(rng, n)
        direct = quantum.born_probability(x, p)
        spectral = quantum.born_spectral(x, p)
        assert abs(direct - spectral) < config.POST_EPS
        back = quantum.substitute(quantum.char_sqrt(p), quantum.omega_predicate(n))
        assert np.max(np.abs(back.first.matrix - p.first.matrix)) < config.POST_EPS
        checks += 2
    return checks


def selftest(seed: int = 0, cases: int = 50) -> tuple[str, bool]:
    """Seeded randomized batches over the three instances."""
    rng = np.random.default_rng(seed)
    lines = []
    ok = True
    for name, batch in (
        ("effect-algebra", _selftest_effect_algebra),
        ("classical", _selftest_classical),
        ("stochastic", _selftest_stochastic),
        ("quantum", _selftest_quantum),
    ):
        try:
            checks = batch(rng, cases)
            lines.append(f"selftest {name}: ok ({checks} checks)")
        except AssertionError as exc:
            lines.append(f"selftest {name}: FAILED ({exc})")
            ok = False
    return "\n".join(lines) + "\n", ok


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effectlogic",
        description="Evaluate classical, probabilistic and quantum predicate scenarios.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=9,
                        help="decimal digits for reported reals (default 9)")
    common.add_argument("--eps", type=float, default=None,
                        help="override the global structural tolerance")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", parents=[common], help="evaluate a scenario file")
    p_run.add_argument("file")
    p_demo = sub.add_parser("demo", parents=[common], help="run a canned demo")
    p_demo.add_argument("name", choices=DEMOS)
    p_self = sub.add_parser("selftest", parents=[common],
                            help="run seeded randomized law checks")
    p_self.add_argument("--seed", type=int, default=0)
    p_self.add_argument("--cases", type=int, default=50)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if getattr(args, "eps", None) is not None:
        config.set_epsilon(args.eps)

    if args.command == "run":
        try:
            with open(args.file, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            print(f"cannot read {args.file}: {exc}", file=sys.stderr)
            return 2
        try:
            sc = scenario.parse_scenario(text)
        except scenario.ScenarioError as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return 2
        text, ok = scenario.run(sc, precision=args.precision)
        sys.stdout.write(text)
        return 0 if ok else 1

    if args.command == "demo":
        text, ok = demo(args.name, precision=args.precision)
        sys.stdout.write(text)
        return 0 if ok else 1

    if args.command == "selftest":
        text, ok = selftest(seed=args.seed, cases=args.cases)
        sys.stdout.write(text)
        return 0 if ok else 1

    return 2


def console_entry() -> None:
    raise SystemExit(main())
