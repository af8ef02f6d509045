"""Seeded property suites and their deterministic reports.

Each suite draws from the standard sampling box with a caller-provided
seed and returns structured results; rendering excludes anything
nondeterministic (timing lives on stderr in the CLI), so a fixed
(config, seed, counts) triple always produces byte-identical text.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .indices import AlgebraConfig, ConfigError
from .algebra import (
    AlgebraElement, basis_element, bracket_closed, bracket_operator,
    format_basis_index, format_element, grading, multiply, partial,
    sample_index, weight, window_indices, window_size,
)
from .derivations import (
    LatticeHom, LinearOperator, check_derivation, diagonal_derivation,
    hom_space_basis, outer_indices, outer_lower_partial,
)
from .cohomology import (
    LinearFunctional, coboundary, recursion_probes, closed_form_regime,
    trivialize, verify_trivialization,
)


class SuiteResult:
    __slots__ = ("name", "passed", "samples", "witness")

    def __init__(self, name: str, passed: bool, samples: int, witness: str | None = None):
        self.name = name
        self.passed = passed
        self.samples = samples
        self.witness = witness


def _pair_witness(iu, iv) -> str:
    return f"{format_basis_index(iu)} , {format_basis_index(iv)}"


def run_suites(config: AlgebraConfig, seed: int, samples: int,
               bracket_fn=bracket_closed) -> list[SuiteResult]:
    rng = random.Random(seed)
    results = []

    def draw_pair():
        return sample_index(config, rng), sample_index(config, rng)

    # both bracket routes agree
    witness = None
    for _ in range(samples):
        iu, iv = draw_pair()
        xu = AlgebraElement.from_term(config, iu)
        xv = AlgebraElement.from_term(config, iv)
        if bracket_fn(xu, xv) != bracket_operator(xu, xv):
            witness = _pair_witness(iu, iv)
            break
    results.append(SuiteResult("oracle-equivalence", witness is None, samples, witness))

    witness = None
    for _ in range(samples):
        iu, iv = draw_pair()
        xu = AlgebraElement.from_term(config, iu)
        xv = AlgebraElement.from_term(config, iv)
        if not (bracket_fn(xu, xv) + bracket_fn(xv, xu)).is_zero():
            witness = _pair_witness(iu, iv)
            break
    results.append(SuiteResult("antisymmetry", witness is None, samples, witness))

    triple_count = max(1, samples // 2)
    witness = None
    for _ in range(triple_count):
        iu, iv, iw = (sample_index(config, rng) for _ in range(3))
        xu, xv, xw = (AlgebraElement.from_term(config, i) for i in (iu, iv, iw))
        total = (bracket_fn(bracket_fn(xu, xv), xw)
                 + bracket_fn(bracket_fn(xv, xw), xu)
                 + bracket_fn(bracket_fn(xw, xu), xv))
        if not total.is_zero():
            witness = f"{_pair_witness(iu, iv)} , {format_basis_index(iw)}"
            break
    results.append(SuiteResult("jacobi", witness is None, triple_count, witness))

    # derivative operators obey the product rule
    witness = None
    all_indices = list(config.shape.indices())
    for _ in range(samples):
        iu, iv = draw_pair()
        xu = AlgebraElement.from_term(config, iu)
        xv = AlgebraElement.from_term(config, iv)
        p = rng.choice(all_indices)
        lhs = partial(p, multiply(xu, xv))
        rhs = multiply(partial(p, xu), xv) + multiply(xu, partial(p, xv))
        if lhs != rhs:
            witness = f"index {config.shape.index_token(p)} on {_pair_witness(iu, iv)}"
            break
    results.append(SuiteResult("product-rule", witness is None, samples, witness))

    witness = None
    for _ in range(samples):
        idx = sample_index(config, rng)
        x = AlgebraElement.from_term(config, idx)
        if grading(x) != weight(config, idx) * x:
            witness = format_basis_index(idx)
            break
    results.append(SuiteResult("grading-eigenvalue", witness is None, samples, witness))

    # derivation law for diagonal and outer lowering derivations
    law_samples = max(1, samples // 4)
    pairs = [draw_pair() for _ in range(law_samples)]
    homs = hom_space_basis(config)
    operators: list[LinearOperator] = []
    for _ in range(3 if homs else 0):
        values = [Fraction(0)] * len(config.lattice.generators)
        for h in homs:
            c = rng.randint(-3, 3)
            if c:
                values = [a + c * b for a, b in zip(values, h.values)]
        operators.append(diagonal_derivation(LatticeHom(config, values)))
    for p in outer_indices(config):
        operators.append(outer_lower_partial(config, p))
    witness = None
    checked = 0
    for op in operators:
        rep = check_derivation(op, pairs)
        checked += rep.checked
        if not rep.passed:
            iu, iv, _, _ = rep.failures[0]
            witness = f"{op.tag} on {_pair_witness(iu, iv)}"
            break
    results.append(SuiteResult(
        "derivation-law", witness is None, checked or law_samples, witness))

    # trivializer round trip on a small random coboundary
    if closed_form_regime(config) or recursion_probes(config):
        table = {}
        for _ in range(6):
            table[sample_index(config, rng)] = Fraction(rng.randint(-4, 4), rng.randint(1, 2))
        g = LinearFunctional(config, table=table, tag="sampled")
        psi = coboundary(g)
        f = trivialize(psi)
        # exhaustive small window only when affordable; many-axis
        # configurations fall back to sampled pairs alone
        pair_list = []
        if window_size(config, 1) <= 600:
            window = window_indices(config, 1)
            pair_list = [(window[i], window[j])
                         for i in range(len(window)) for j in range(i, len(window))]
        extra = [draw_pair() for _ in range(law_samples)]
        rep = verify_trivialization(psi, f, pair_list + extra)
        witness = None
        if not rep.passed:
            iu, iv, _, _ = rep.failures[0]
            witness = _pair_witness(iu, iv)
        results.append(SuiteResult("round-trip", rep.passed, rep.checked, witness))

    return results


def config_label(config: AlgebraConfig) -> str:
    gens = "; ".join(
        " ".join(str(x) for x in g) for g in config.lattice.generators)
    mode = "naturals" if config.j0_naturals else "zero"
    return f"ell={' '.join(str(x) for x in config.shape.ell)} j0={mode} gamma=[{gens}]"


def render_report(config: AlgebraConfig, seed: int, samples: int,
                  results: list[SuiteResult]) -> str:
    lines = [
        f"configuration: {config_label(config)}",
        f"seed: {seed}",
        f"samples: {samples}",
    ]
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(f"{mark} {r.name} ({r.samples} samples)")
        if r.witness is not None:
            lines.append(f"  witness: {r.witness}")
    good = sum(1 for r in results if r.passed)
    overall = "PASS" if good == len(results) else "FAIL"
    lines.append(f"result: {overall} ({good}/{len(results)})")
    return "\n".join(lines) + "\n"
