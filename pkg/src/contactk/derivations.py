"""Derivations of the contact bracket and their finite-window decomposition.

Covers the adjoint action, diagonal derivations from lattice
homomorphisms, the outer lowering derivations, the Leibniz-law checker,
the mirror-difference operator identity, the four probe families, and a
decomposer that matches a black-box operator against outer + diagonal +
adjoint directions on a finite window by exact linear algebra.
"""

from __future__ import annotations

from fractions import Fraction

from .indices import AlgebraConfig, ConfigError
from .linalg import nullspace
from .algebra import (
    AlgebraElement, BasisIndex, basis_element, bracket_closed,
    format_basis_index, format_element, lower_partial, unit,
)


class LinearOperator:
    """Basis rule extended linearly, with a memo and a descriptive tag."""

    __slots__ = ("config", "rule", "tag", "_memo")

    def __init__(self, config: AlgebraConfig, rule, tag: str):
        self.config = config
        self.rule = rule
        self.tag = tag
        self._memo: dict[BasisIndex, AlgebraElement] = {}

    def on_basis(self, index: BasisIndex) -> AlgebraElement:
        out = self._memo.get(index)
        if out is None:
            out = self.rule(index)
            self._memo[index] = out
        return out

    def __call__(self, u: AlgebraElement) -> AlgebraElement:
        out = AlgebraElement.zero(self.config)
        for idx, c in u.terms.items():
            out = out + c * self.on_basis(idx)
        return out

    @classmethod
    def combine(cls, config, parts) -> "LinearOperator":
        """Scaled sum of (scalar, operator) pairs."""
        parts = [(s, op) for s, op in parts]

        def rule(index):
            out = AlgebraElement.zero(config)
            for s, op in parts:
                out = out + s * op.on_basis(index)
            return out

        tag = " + ".join(f"{s}*({op.tag})" if s != 1 else op.tag for s, op in parts)
        return cls(config, rule, tag or "zero")


def ad(u: AlgebraElement) -> LinearOperator:
    config = u.config
    return LinearOperator(
        config,
        lambda idx: bracket_closed(u, AlgebraElement.from_term(config, idx)),
        f"ad {format_element(u)}")


class LatticeHom:
    """Rational homomorphism out of the lattice, given by generator values.

    Valid homomorphisms vanish on every shift vector of blocks 1..5; the
    constructor enforces that.
    """

    __slots__ = ("config", "values")

    def __init__(self, config: AlgebraConfig, values):
        self.config = config
        self.values = tuple(Fraction(v) for v in values)
        if len(self.values) != len(config.lattice.generators):
            raise ConfigError("hom needs one value per gamma generator")
        for p in config.shape.blocks(1, 5):
            if self.value_on_coords(config.shift_coords[p].coords) != 0:
                raise ConfigError(
                    f"hom does not vanish on the shift vector at index {p}")

    def value_on_coords(self, coords) -> Fraction:
        return sum(c * v for c, v in zip(coords, self.values))

    def __call__(self, alpha) -> Fraction:
        return self.value_on_coords(alpha.coords)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def __eq__(self, other):
        return isinstance(other, LatticeHom) and self.values == other.values

    def __repr__(self):
        return f"LatticeHom{self.values}"


def diagonal_derivation(hom: LatticeHom) -> LinearOperator:
    config = hom.config
    return LinearOperator(
        config,
        lambda idx: AlgebraElement.from_term(config, idx, hom(idx.alpha)),
        f"dmu {' '.join(str(v) for v in hom.values)}")


def mirror_difference_hom(config: AlgebraConfig, p: int) -> LatticeHom:
    """The hom alpha -> alpha_mirror(p) - alpha_p, for p in blocks 1..3."""
    shape = config.shape
    if p not in shape.blocks(1, 3):
        raise ConfigError(f"index {p} is not in blocks 1..3")
    sp, sq = shape.slot(p), shape.slot(p + shape.n)
    values = [g[sq] - g[sp] for g in config.lattice.generators]
    return LatticeHom(config, values)


def zero_slot_hom(config: AlgebraConfig) -> LatticeHom:
    """The hom alpha -> alpha_0 (zero when the lattice misses slot 0)."""
    return LatticeHom(config, [g[0] for g in config.lattice.generators])


def outer_indices(config: AlgebraConfig) -> list[int]:
    """Indices whose lowering operators are outer derivations."""
    shape = config.shape
    out = [p + shape.n for p in shape.blocks(2, 3)]
    out += shape.blocks(3, 3)
    out += shape.blocks(5, 5)
    return sorted(out)


def outer_lower_partial(config: AlgebraConfig, p: int) -> LinearOperator:
    if p not in outer_indices(config):
        raise ConfigError(
            f"lowering at index {config.shape.index_token(p)} is not an outer derivation")
    return LinearOperator(
        config,
        lambda idx: lower_partial(p, AlgebraElement.from_term(config, idx)),
        f"dt {config.shape.index_token(p)}")


class DerivationReport:
    """Outcome of a Leibniz-law check over sampled pairs."""

    __slots__ = ("checked", "failures")

    def __init__(self, checked: int, failures: list):
        self.checked = checked
        self.failures = failures

    @property
    def passed(self) -> bool:
        return not self.failures


def check_derivation(D: LinearOperator, pairs) -> DerivationReport:
    """Exact Leibniz check of D on basis pairs: D[u,v] = [Du,v] + [u,Dv]."""
    config = D.config
    failures = []
    checked = 0
    for iu, iv in pairs:
        checked += 1
        xu = AlgebraElement.from_term(config, iu)
        xv = AlgebraElement.from_term(config, iv)
        lhs = D(bracket_closed(xu, xv))
        rhs = bracket_closed(D(xu), xv) + bracket_closed(xu, D(xv))
        if lhs != rhs:
            failures.append((iu, iv, lhs, rhs))
    return DerivationReport(checked, failures)


def check_mirror_identity(config: AlgebraConfig, p: int, indices) -> DerivationReport:
    """Operator identity: the mirror-difference diagonal derivation equals
    ad of the negative-shift monomial plus the lowering difference."""
    shape = config.shape
    if p not in shape.blocks(1, 3):
        raise ConfigError(f"index {p} is not in blocks 1..3")
    hom = mirror_difference_hom(config, p)
    probe = AlgebraElement.from_term(
        config, BasisIndex(config.shift_coords[p].neg(), config.zero_exps))
    pb = p + shape.n
    failures = []
    checked = 0
    for idx in indices:
        checked += 1
        x = AlgebraElement.from_term(config, idx)
        lhs = hom(idx.alpha) * x
        rhs = bracket_closed(probe, x) + lower_partial(p, x) - lower_partial(pb, x)
        if lhs != rhs:
            failures.append((idx, None, lhs, rhs))
    return DerivationReport(checked, failures)


class ProbeSets:
    """The four probe families used by the decomposition arguments."""

    __slots__ = ("triangular", "diagonal", "raising", "lowering")

    def __init__(self, triangular, diagonal, raising, lowering):
        self.triangular = triangular
        self.diagonal = diagonal
        self.raising = raising
        self.lowering = lowering


def probe_sets(config: AlgebraConfig) -> ProbeSets:
    shape = config.shape
    lattice = config.lattice
    zero = config.zero_exps

    def negative_shift(p):
        return AlgebraElement.from_term(
            config, BasisIndex(config.shift_coords[p].neg(), zero))

    def negative_shift_raised(q):
        exps = zero.raised(shape.slot(q + shape.n))
        return AlgebraElement.from_term(
            config, BasisIndex(config.shift_coords[q].neg(), exps))

    def unit_coords(p):
        vec = [0] * shape.dim
        vec[shape.slot(p)] = 1
        coords = lattice.membership(tuple(vec))
        if coords is None:
            raise ConfigError("probe unit vector escapes gamma")  # pragma: no cover
        return coords

    triangular = [negative_shift(p) for p in shape.blocks(2, 3)]
    triangular += [negative_shift_raised(q) for q in shape.blocks(5, 5)]
    if config.j0_naturals:
        triangular.append(unit(config))

    diagonal = [negative_shift(p) for p in shape.blocks(1, 1)]
    diagonal += [negative_shift_raised(q) for q in shape.blocks(4, 4)]
    for r in shape.blocks(6, 6):
        exps = zero.raised(shape.slot(r)).raised(shape.slot(r + shape.n))
        diagonal.append(AlgebraElement.from_term(
            config, BasisIndex(lattice.zero, exps)))
    if not config.j0_naturals:
        diagonal.append(unit(config))

    raising = []
    for p in shape.blocks(1, 5):
        coords = tuple(2 * c for c in unit_coords(p))
        raising.append(basis_element(config, coords))
    for q in shape.blocks(6, 6):
        exps = [0] * shape.dim
        exps[shape.slot(q)] = 2
        raising.append(basis_element(config, (0,) * len(lattice.generators), exps))
    if lattice.has_zero_slot:
        raising.append(basis_element(config, tuple(2 * c for c in unit_coords(0))))
    else:
        raising.append(basis_element(
            config, (0,) * len(lattice.generators), zero.raised(0)))

    lowering = []
    for p in shape.blocks(1, 3):
        coords = tuple(2 * c for c in unit_coords(p + shape.n))
        lowering.append(basis_element(config, coords))
    for q in shape.blocks(4, 6):
        exps = [0] * shape.dim
        exps[shape.slot(q + shape.n)] = 2
        lowering.append(basis_element(config, (0,) * len(lattice.generators), exps))
    if lattice.has_zero_slot:
        lowering.append(basis_element(config, tuple(-2 * c for c in unit_coords(0))))

    return ProbeSets(triangular, diagonal, raising, lowering)


# -- homomorphism bases -----------------------------------------------

def hom_space_basis(config: AlgebraConfig) -> list[LatticeHom]:
    """Basis of all valid homomorphisms (vanishing on blocks 1..5 shifts)."""
    ngens = len(config.lattice.generators)
    rows = [[Fraction(c) for c in config.shift_coords[p].coords]
            for p in config.shape.blocks(1, 5)]
    if not rows:
        vectors = [[Fraction(int(i == j)) for j in range(ngens)] for i in range(ngens)]
    else:
        vectors = nullspace(rows, ngens)
    return [LatticeHom(config, v) for v in vectors]


def _pivot_hom_values(config: AlgebraConfig) -> list[tuple[Fraction, ...]]:
    """Value vectors of the homs whose diagonal derivations are inner
    (after lowering corrections): the mirror differences, plus the
    zero-slot hom when the zero-slot exponents are switched off."""
    pivots = [mirror_difference_hom(config, p).values
              for p in config.shape.blocks(1, 3)]
    if not config.j0_naturals:
        pivots.append(zero_slot_hom(config).values)
    return pivots


def hom_star_basis(config: AlgebraConfig) -> list[LatticeHom]:
    """Deterministic complement of the inner hom directions: extend the
    pivot rows to a basis of the hom space; the extension vectors are the
    reported complement."""
    ngens = len(config.lattice.generators)
    basis_rows: list[list[Fraction]] = []

    def try_add(values) -> bool:
        row = [Fraction(v) for v in values]
        for b in basis_rows:
            lead = next(i for i, x in enumerate(b) if x != 0)
            if row[lead]:
                f = row[lead] / b[lead]
                row = [a - f * c for a, c in zip(row, b)]
        if any(row):
            basis_rows.append(row)
            return True
        return False

    for values in _pivot_hom_values(config):
        try_add(values)
    star = []
    for hom in hom_space_basis(config):
        if try_add(hom.values):
            star.append(hom)
    return star


# -- decomposition ----------------------------------------------------

class ResidualError(Exception):
    """The operator is not in the decomposer's span on the window."""

    def __init__(self, window_index: BasisIndex, result_index: BasisIndex | None):
        self.window_index = window_index
        self.result_index = result_index
        at = format_basis_index(window_index)
        via = format_basis_index(result_index) if result_index is not None else "?"
        super().__init__(f"unmatched action on {at} at result term {via}")


class AmbiguousError(Exception):
    """The window is too small to pin all coefficients."""

    def __init__(self, free_labels):
        self.free_labels = list(free_labels)
        super().__init__(
            "window does not determine coefficients for: "
            + ", ".join(self.free_labels))


class DerivationDecomposition:
    """Exact coefficients of an operator over the decomposer's directions."""

    __slots__ = ("outer_coeffs", "hom", "hom_coords", "inner", "residual_zero")

    def __init__(self, outer_coeffs, hom, hom_coords, inner, residual_zero=True):
        self.outer_coeffs = outer_coeffs
        self.hom = hom
        self.hom_coords = hom_coords
        self.inner = inner
        self.residual_zero = residual_zero


class DerivationDecomposer:
    """Window-based solver reused across many operators.

    The coefficient matrix depends only on (config, window, inner
    support), so its elimination is done once; each decomposition then
    costs one right-hand side and one verification sweep.
    """

    def __init__(self, config: AlgebraConfig, window, inner_support):
        self.config = config
        self.window = list(window)
        self.inner_support = list(inner_support)
        self.outer = outer_indices(config)
        self.star = hom_star_basis(config)

        self.labels: list[tuple] = []
        self.column_ops: list[LinearOperator] = []
        for p in self.outer:
            self.labels.append(("dt", p))
            self.column_ops.append(outer_lower_partial(config, p))
        for k, hom in enumerate(self.star):
            self.labels.append(("hom", k))
            self.column_ops.append(diagonal_derivation(hom))
        for b in self.inner_support:
            self.labels.append(("ad", b))
            self.column_ops.append(ad(AlgebraElement.from_term(config, b)))
        self._factorize()

    def _factorize(self):
        ncols = len(self.labels)
        # rref rows: (pivot column, sparse row dict, combination over metas)
        basis: list[tuple[int, dict, dict]] = []
        self.metas: list[tuple[BasisIndex, BasisIndex]] = []
        pivoted: set[int] = set()

        for w in self.window:
            if len(basis) == ncols:
                break
            by_result: dict[BasisIndex, dict[int, Fraction]] = {}
            for ci, op in enumerate(self.column_ops):
                for r, coeff in op.on_basis(w).terms.items():
                    by_result.setdefault(r, {})[ci] = coeff
            for r in sorted(by_result, key=BasisIndex.sort_key):
                row = dict(by_result[r])
                comb = {len(self.metas): Fraction(1)}
                self.metas.append((w, r))
                for pc, brow, bcomb in basis:
                    f = row.get(pc)
                    if f:
                        for c, x in brow.items():
                            acc = row.get(c, 0) - f * x
                            if acc:
                                row[c] = acc
                            else:
                                row.pop(c, None)
                        for m, x in bcomb.items():
                            acc = comb.get(m, 0) - f * x
                            if acc:
                                comb[m] = acc
                            else:
                                comb.pop(m, None)
                if not row:
                    self.metas.pop()
                    continue
                pc = min(row)
                inv = Fraction(1) / row[pc]
                row = {c: x * inv for c, x in row.items()}
                comb = {m: x * inv for m, x in comb.items()}
                # keep full reduction so solutions read off the combinations
                for j, (opc, brow, bcomb) in enumerate(basis):
                    f = brow.get(pc)
                    if f:
                        for c, x in row.items():
                            acc = brow.get(c, 0) - f * x
                            if acc:
                                brow[c] = acc
                            else:
                                brow.pop(c, None)
                        for m, x in comb.items():
                            acc = bcomb.get(m, 0) - f * x
                            if acc:
                                bcomb[m] = acc
                            else:
                                bcomb.pop(m, None)
                basis.append((pc, row, comb))
                pivoted.add(pc)
                if len(basis) == ncols:
                    break
        self._basis = basis
        self._pivoted = pivoted

    @property
    def rank(self) -> int:
        return len(self._basis)

    def decompose(self, D: LinearOperator) -> DerivationDecomposition:
        ncols = len(self.labels)
        if self.rank < ncols:
            free = [self._label_text(c) for c in range(ncols) if c not in self._pivoted]
            raise AmbiguousError(free)

        action_cache: dict[BasisIndex, AlgebraElement] = {}

        def d_on(w):
            out = action_cache.get(w)
            if out is None:
                out = D.on_basis(w)
                action_cache[w] = out
            return out

        rhs = [d_on(w).terms.get(r, 0) for w, r in self.metas]
        solution = [Fraction(0)] * ncols
        for pc, _row, comb in self._basis:
            solution[pc] = sum(x * rhs[m] for m, x in comb.items())

        # verification sweep doubles as the residual check
        reconstruction = [(ci, c) for ci, c in enumerate(solution) if c]
        for w in self.window:
            total = AlgebraElement.zero(self.config)
            for ci, c in reconstruction:
                total = total + c * self.column_ops[ci].on_basis(w)
            expected = d_on(w)
            if total != expected:
                diff = total - expected
                witness = next(iter(diff.terms))
                raise ResidualError(w, witness)

        outer_coeffs = {}
        hom_coords = []
        inner = AlgebraElement.zero(self.config)
        hom_values = [Fraction(0)] * len(self.config.lattice.generators)
        for label, value in zip(self.labels, solution):
            kind = label[0]
            if kind == "dt":
                outer_coeffs[label[1]] = value
            elif kind == "hom":
                hom_coords.append(value)
                if value:
                    hv = self.star[label[1]].values
                    hom_values = [a + value * b for a, b in zip(hom_values, hv)]
            else:
                if value:
                    inner = inner + AlgebraElement.from_term(self.config, label[1], value)
        hom = LatticeHom(self.config, hom_values) if self.star else None
        return DerivationDecomposition(
            outer_coeffs, hom, tuple(hom_coords), inner, residual_zero=True)

    def _label_text(self, ci: int) -> str:
        label = self.labels[ci]
        if label[0] == "dt":
            return f"dt {self.config.shape.index_token(label[1])}"
        if label[0] == "hom":
            return f"hom {label[1]}"
        return f"ad {format_basis_index(label[1])}"


def decompose_derivation(config: AlgebraConfig, D: LinearOperator,
                         window, inner_support) -> DerivationDecomposition:
    """One-shot decomposition; build a DerivationDecomposer to amortize."""
    return DerivationDecomposer(config, window, inner_support).decompose(D)
