"""Skew 2-forms on the bracket, their axioms, and constructive trivialization.

A cocycle here is a bilinear skew form evaluated on basis pairs.  The
trivializers build a linear functional f with psi(u,v) = f([u,v]) two
ways: a memoized recursion driven by a probe element (available whenever
zero-slot exponents are switched on or some block besides the first is
nonempty), and a four-case closed form for the remaining pure-group
regime.  Divisions are exact; the case guards are the case split.
"""

from __future__ import annotations

from fractions import Fraction

from .indices import AlgebraConfig, ConfigError
from .algebra import (
    AlgebraElement, BasisIndex, basis_element, bracket_closed,
    format_basis_index, unit,
)


class Cocycle:
    """Bilinear skew form given on basis pairs; extended bilinearly."""

    __slots__ = ("config", "tag")

    def __init__(self, config: AlgebraConfig, tag: str):
        self.config = config
        self.tag = tag

    def on_basis(self, iu: BasisIndex, iv: BasisIndex) -> Fraction:
        raise NotImplementedError

    def __call__(self, u: AlgebraElement, v: AlgebraElement) -> Fraction:
        total = Fraction(0)
        for iu, cu in u.terms.items():
            for iv, cv in v.terms.items():
                val = self.on_basis(iu, iv)
                if val:
                    total += cu * cv * val
        return total


class LinearFunctional:
    """Finite table plus an optional memoized rule for off-table indices."""

    __slots__ = ("config", "table", "rule", "tag", "_memo")

    def __init__(self, config: AlgebraConfig, table=None, rule=None, tag="table"):
        self.config = config
        self.table = dict(table or {})
        self.rule = rule
        self.tag = tag
        self._memo: dict[BasisIndex, Fraction] = {}

    def eval_basis(self, index: BasisIndex) -> Fraction:
        if index in self.table:
            return self.table[index]
        if self.rule is None:
            return Fraction(0)
        out = self._memo.get(index)
        if out is None:
            out = self.rule(index)
            self._memo[index] = out
        return out

    def eval_element(self, u: AlgebraElement) -> Fraction:
        total = Fraction(0)
        for idx, c in u.terms.items():
            val = self.eval_basis(idx)
            if val:
                total += c * val
        return total


class CoboundaryCocycle(Cocycle):
    """psi_f(u,v) = f([u,v]); satisfies the cocycle axioms identically."""

    __slots__ = ("functional",)

    def __init__(self, functional: LinearFunctional):
        super().__init__(functional.config, f"coboundary-of({functional.tag})")
        self.functional = functional

    def on_basis(self, iu, iv):
        xu = AlgebraElement.from_term(self.config, iu)
        xv = AlgebraElement.from_term(self.config, iv)
        return self.functional.eval_element(bracket_closed(xu, xv))


def coboundary(f: LinearFunctional) -> CoboundaryCocycle:
    return CoboundaryCocycle(f)


class TableCocycle(Cocycle):
    """Finite skew table; one orientation stored, the flip negated.

    Skew-symmetry holds by representation: diagonal pairs are zero and
    only the sorted orientation of each pair is kept.
    """

    __slots__ = ("entries",)

    def __init__(self, config: AlgebraConfig, entries):
        super().__init__(config, "table")
        canonical: dict[tuple, Fraction] = {}
        for (iu, iv), value in entries.items():
            value = Fraction(value)
            if iu == iv:
                if value:
                    raise ConfigError("diagonal cocycle entries must be zero")
                continue
            if iu.sort_key() <= iv.sort_key():
                key, val = (iu, iv), value
            else:
                key, val = (iv, iu), -value
            if key in canonical and canonical[key] != val:
                raise ConfigError(
                    "inconsistent values for the pair "
                    f"({format_basis_index(key[0])}, {format_basis_index(key[1])})")
            canonical[key] = val
        self.entries = {k: v for k, v in canonical.items() if v}

    def on_basis(self, iu, iv):
        if iu == iv:
            return Fraction(0)
        if iu.sort_key() <= iv.sort_key():
            return self.entries.get((iu, iv), Fraction(0))
        return -self.entries.get((iv, iu), Fraction(0))


class CompositeCocycle(Cocycle):
    """Scaled sum of cocycles."""

    __slots__ = ("parts",)

    def __init__(self, config: AlgebraConfig, parts):
        super().__init__(config, "composite")
        self.parts = [(Fraction(s), psi) for s, psi in parts]

    def on_basis(self, iu, iv):
        return sum((s * psi.on_basis(iu, iv) for s, psi in self.parts), Fraction(0))


class CocycleReport:
    """Outcome of the axiom check: skew on pairs, the three-term sum on triples."""

    __slots__ = ("pairs_checked", "triples_checked", "skew_failures", "sum_failures")

    def __init__(self, pairs_checked, triples_checked, skew_failures, sum_failures):
        self.pairs_checked = pairs_checked
        self.triples_checked = triples_checked
        self.skew_failures = skew_failures
        self.sum_failures = sum_failures

    @property
    def passed(self) -> bool:
        return not self.skew_failures and not self.sum_failures


def check_cocycle(psi: Cocycle, triples) -> CocycleReport:
    config = psi.config
    skew_failures = []
    sum_failures = []
    pairs_checked = 0
    triples_checked = 0
    seen_pairs = set()
    for triple in triples:
        iu, iv, iw = triple
        for a, b in ((iu, iv), (iv, iw), (iu, iw)):
            key = (a, b)
            if key in seen_pairs:
                continue
            seen_pairs.add(key)
            pairs_checked += 1
            if psi.on_basis(a, a) != 0 or psi.on_basis(a, b) + psi.on_basis(b, a) != 0:
                skew_failures.append((a, b))
        triples_checked += 1
        xu = AlgebraElement.from_term(config, iu)
        xv = AlgebraElement.from_term(config, iv)
        xw = AlgebraElement.from_term(config, iw)
        total = (psi(bracket_closed(xu, xv), xw)
                 + psi(bracket_closed(xv, xw), xu)
                 + psi(bracket_closed(xw, xu), xv))
        if total != 0:
            sum_failures.append((iu, iv, iw, total))
    return CocycleReport(pairs_checked, triples_checked, skew_failures, sum_failures)


# -- regimes and probes -----------------------------------------------

def closed_form_regime(config: AlgebraConfig) -> bool:
    """True for the pure-group regime: no zero-slot exponents and only
    the first block nonempty (so the exponent semigroup is trivial)."""
    return (not config.j0_naturals) and config.shape.n == config.shape.ell[0]


def recursion_probes(config: AlgebraConfig) -> list[int]:
    """Probe indices accepted by the recursive trivializer, in preference
    order: blocks 2, 3, 5, then 0 for the unit route."""
    shape = config.shape
    out = list(shape.blocks(2, 3)) + list(shape.blocks(5, 5))
    if config.j0_naturals:
        out.append(0)
    return out


def _probe_element(config: AlgebraConfig, p: int) -> AlgebraElement:
    if p == 0:
        return unit(config)
    shape = config.shape
    alpha = config.shift_coords[p].neg()
    if shape.block_of(p) == 5:
        exps = config.zero_exps.raised(shape.slot(p + shape.n))
    else:
        exps = config.zero_exps
    return AlgebraElement.from_term(config, BasisIndex(alpha, exps))


def trivialize_recursive(psi: Cocycle, probe: int) -> LinearFunctional:
    """Build f with psi = psi_f by downward recursion on one exponent.

    The probe picks the bracket identity the recursion inverts: bracketing
    with the probe's negative-shift monomial relates each basis value of f
    to values at lowered exponents, so f is solved top-down one exponent
    at a time.  Every route is confirmed by the round-trip verifier.
    """
    config = psi.config
    shape = config.shape
    if closed_form_regime(config):
        raise ConfigError("recursive trivializer needs exponents or a later block")
    if probe not in recursion_probes(config):
        raise ConfigError(f"invalid probe index {probe} for this configuration")
    w = _probe_element(config, probe)
    tag = f"probe {shape.index_token(probe)}"

    if probe == 0:
        def rule(b: BasisIndex) -> Fraction:
            a0 = b.alpha.vector[0]
            i0 = b.exps[0]
            x = AlgebraElement.from_term(config, b)
            if a0 != 0:
                val = psi(w, x)
                if i0:
                    val -= 2 * i0 * f.eval_basis(BasisIndex(b.alpha, b.exps.lowered(0)))
                return val / (2 * a0)
            raised = AlgebraElement.from_term(config, BasisIndex(b.alpha, b.exps.raised(0)))
            return psi(w, raised) / (2 * (i0 + 1))
    else:
        sp = shape.slot(probe)
        sq = shape.slot(probe + shape.n)
        block = shape.block_of(probe)

        def rule(b: BasisIndex) -> Fraction:
            vec = b.alpha.vector
            ap, aq = vec[sp], vec[sq]
            ip, iq = b.exps[sp], b.exps[sq]
            x = AlgebraElement.from_term(config, b)
            if block == 2:
                if aq != ap:
                    val = psi(w, x)
                    if iq:
                        val -= iq * f.eval_basis(BasisIndex(b.alpha, b.exps.lowered(sq)))
                    return val / (aq - ap)
                raised = AlgebraElement.from_term(
                    config, BasisIndex(b.alpha, b.exps.raised(sq)))
                return psi(w, raised) / (iq + 1)
            if block == 3:
                if aq != ap:
                    val = psi(w, x)
                    if ip:
                        val += ip * f.eval_basis(BasisIndex(b.alpha, b.exps.lowered(sp)))
                    if iq:
                        val -= iq * f.eval_basis(BasisIndex(b.alpha, b.exps.lowered(sq)))
                    return val / (aq - ap)
                raised_exps = b.exps.raised(sq)
                raised = AlgebraElement.from_term(config, BasisIndex(b.alpha, raised_exps))
                val = psi(w, raised)
                if ip:
                    val += ip * f.eval_basis(BasisIndex(b.alpha, raised_exps.lowered(sp)))
                return val / (iq + 1)
            # block 5: the raised probe pairs the mirror exponent against
            # the unbarred coordinate
            if iq != ap:
                val = psi(w, x)
                if ip:
                    val += ip * f.eval_basis(BasisIndex(b.alpha, b.exps.lowered(sp)))
                return val / (iq - ap)
            raised = AlgebraElement.from_term(config, BasisIndex(b.alpha, b.exps.raised(sp)))
            return -psi(w, raised) / (ip + 1)

    f = LinearFunctional(config, rule=rule, tag=tag)
    return f


def reference_vector_coords(config: AlgebraConfig):
    """Coordinates of the all-minus-one pure-group reference vector."""
    coords = config.lattice.zero
    for p in config.shape.blocks(1, 1):
        coords = coords.add(config.shift_coords[p])
    return coords


def pivot_index(config: AlgebraConfig, alpha) -> int:
    """First block-1 index where alpha leaves the reference pattern."""
    shape = config.shape
    vec = alpha.vector
    for p in shape.blocks(1, 1):
        if (vec[shape.slot(p)], vec[shape.slot(p + shape.n)]) != (-1, -1):
            return p
    raise ConfigError("vector equals the reference vector; no pivot index")


def trivialize_closed_form(psi: Cocycle) -> LinearFunctional:
    """Four-case closed form for the pure-group single-block regime."""
    config = psi.config
    shape = config.shape
    if not closed_form_regime(config):
        raise ConfigError("closed-form trivializer needs the pure-group regime")
    # zero-slot exponents are off, so the lattice must cover slot 0
    if not config.lattice.has_zero_slot:
        raise ConfigError("configuration invariant violated")  # pragma: no cover
    lattice = config.lattice
    ell1 = shape.ell[0]
    ref = reference_vector_coords(config)

    unit0 = lattice.membership(tuple(int(s == 0) for s in range(shape.dim)))
    unit_at = {}
    for p in shape.blocks(1, 1):
        for q in (p, p + shape.n):
            vec = [0] * shape.dim
            vec[shape.slot(q)] = 1
            unit_at[q] = lattice.membership(tuple(vec))

    one = unit(config)
    neg_two0 = basis_element(config, tuple(-2 * c for c in unit0))
    top = basis_element(
        config, tuple(2 * a + b for a, b in zip(unit0, ref.coords)))

    def rule(b: BasisIndex) -> Fraction:
        vec = b.alpha.vector
        x = AlgebraElement.from_term(config, b)
        if b.alpha.coords == ref.coords:
            return psi(neg_two0, top) / (4 * (2 + ell1))
        a0 = vec[0]
        if a0 != 0:
            return psi(one, x) / (2 * a0)
        p = pivot_index(config, b.alpha)
        ap = vec[shape.slot(p)]
        aq = vec[shape.slot(p + shape.n)]
        if ap != aq:
            probe = AlgebraElement.from_term(
                config, BasisIndex(config.shift_coords[p].neg(), config.zero_exps))
            return psi(probe, x) / (aq - ap)
        square = basis_element(config, tuple(2 * c for c in unit_at[p]))
        moved = b.alpha.add_coords(tuple(
            bq - bp for bp, bq in zip(unit_at[p], unit_at[p + shape.n])))
        shifted = AlgebraElement.from_term(config, BasisIndex(moved, b.exps))
        return psi(square, shifted) / (2 * (aq + 1))

    return LinearFunctional(config, rule=rule, tag="closed-form")


def trivialize(psi: Cocycle, probe: int | None = None) -> LinearFunctional:
    """Route to the applicable trivializer; pick a default probe if needed."""
    config = psi.config
    if closed_form_regime(config):
        return trivialize_closed_form(psi)
    probes = recursion_probes(config)
    if not probes:
        raise ConfigError("no trivializer route for this configuration")
    if probe is None:
        probe = probes[0]
    return trivialize_recursive(psi, probe)


class TrivializationReport:
    __slots__ = ("checked", "failures")

    def __init__(self, checked, failures):
        self.checked = checked
        self.failures = failures

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_trivialization(psi: Cocycle, f: LinearFunctional, pairs) -> TrivializationReport:
    """Exact comparison psi(u,v) vs f([u,v]) over the given basis pairs."""
    config = psi.config
    failures = []
    checked = 0
    for iu, iv in pairs:
        checked += 1
        lhs = psi.on_basis(iu, iv)
        xu = AlgebraElement.from_term(config, iu)
        xv = AlgebraElement.from_term(config, iv)
        rhs = f.eval_element(bracket_closed(xu, xv))
        if lhs != rhs:
            failures.append((iu, iv, lhs, rhs))
    return TrivializationReport(checked, failures)
