"""Sparse algebra elements, derivative operators, and the two bracket routes.

The bracket is implemented twice on purpose: `bracket_operator` composes
the defining differential operators literally and serves as the oracle,
while `bracket_closed` expands the same bilinear form per basis pair from
precomputed per-index tables.  They share nothing but the dropped-term
convention, which both must apply identically: a produced index with a
negative exponent entry is dropped (group parts always stay in the
lattice because they are built from lattice coordinates).
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product

from .indices import AlgebraConfig, ConfigError, ExponentVector, GroupElement


class LiteralError(ValueError):
    """Raised for malformed or out-of-lattice element literals."""


class BasisIndex:
    """One basis monomial: lattice element plus exponent vector."""

    __slots__ = ("alpha", "exps", "_hash", "_weight")

    def __init__(self, alpha: GroupElement, exps: ExponentVector):
        self.alpha = alpha
        self.exps = exps
        self._hash = None
        self._weight = None

    def __eq__(self, other):
        return (self.alpha.coords == other.alpha.coords
                and self.exps == other.exps)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.alpha.coords, self.exps))
        return self._hash

    def sort_key(self):
        return (self.alpha.vector, tuple(self.exps))

    def __repr__(self):
        return f"BasisIndex({self.alpha.coords}, {tuple(self.exps)})"


class AlgebraElement:
    """Finite rational combination of basis monomials, zero-free."""

    __slots__ = ("config", "terms")

    def __init__(self, config: AlgebraConfig, terms: dict[BasisIndex, Fraction]):
        self.config = config
        self.terms = terms

    @classmethod
    def zero(cls, config) -> "AlgebraElement":
        return cls(config, {})

    @classmethod
    def from_term(cls, config, index: BasisIndex, coeff=1) -> "AlgebraElement":
        return cls(config, {index: coeff} if coeff else {})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.terms == other.terms

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same_config(self, other)
        terms = dict(self.terms)
        for idx, c in other.terms.items():
            acc = terms.get(idx, 0) + c
            if acc:
                terms[idx] = acc
            else:
                terms.pop(idx, None)
        return AlgebraElement(self.config, terms)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "AlgebraElement":
        if not scalar:
            return AlgebraElement.zero(self.config)
        return AlgebraElement(self.config, {i: scalar * c for i, c in self.terms.items()})

    def __neg__(self) -> "AlgebraElement":
        return (-1) * self

    def __repr__(self):
        return f"<{format_element(self)}>"


def _check_same_config(u: AlgebraElement, v: AlgebraElement):
    if u.config is not v.config:
        raise ConfigError("elements belong to different configurations")


def basis_element(config: AlgebraConfig, coords, exps=None) -> AlgebraElement:
    """Convenience constructor from raw coordinates and exponent entries."""
    alpha = config.lattice.element(coords)
    vec = config.zero_exps if exps is None else ExponentVector.build(config, exps)
    return AlgebraElement.from_term(config, BasisIndex(alpha, vec))


def unit(config: AlgebraConfig) -> AlgebraElement:
    return basis_element(config, (0,) * len(config.lattice.generators))


def multiply(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """Commutative product: indices add in both components."""
    _check_same_config(u, v)
    terms: dict[BasisIndex, Fraction] = {}
    for iu, cu in u.terms.items():
        for iv, cv in v.terms.items():
            idx = BasisIndex(iu.alpha.add(iv.alpha), iu.exps.add(iv.exps))
            acc = terms.get(idx, 0) + cu * cv
            if acc:
                terms[idx] = acc
            else:
                terms.pop(idx, None)
    return AlgebraElement(u.config, terms)


def scale_partial(p: int, u: AlgebraElement) -> AlgebraElement:
    """Diagonal part of the p-th derivative: scale by the p-th coordinate."""
    shape = u.config.shape
    if not 0 <= p <= 2 * shape.n:
        raise ConfigError(f"index {p} out of range")
    s = shape.slot(p)
    terms = {}
    for idx, c in u.terms.items():
        a = idx.alpha.vector[s]
        if a:
            terms[idx] = a * c
    return AlgebraElement(u.config, terms)


def lower_partial(p: int, u: AlgebraElement) -> AlgebraElement:
    """Lowering part of the p-th derivative: power rule on the p-th exponent."""
    shape = u.config.shape
    if not 0 <= p <= 2 * shape.n:
        raise ConfigError(f"index {p} out of range")
    s = shape.slot(p)
    terms: dict[BasisIndex, Fraction] = {}
    for idx, c in u.terms.items():
        e = idx.exps[s]
        if e:
            lowered = idx.exps.lowered(s)
            if lowered is None:
                continue  # dropped-term convention
            new = BasisIndex(idx.alpha, lowered)
            acc = terms.get(new, 0) + e * c
            if acc:
                terms[new] = acc
            else:
                terms.pop(new, None)
    return AlgebraElement(u.config, terms)


def partial(p: int, u: AlgebraElement) -> AlgebraElement:
    """Full p-th derivative: diagonal plus lowering part."""
    return scale_partial(p, u) + lower_partial(p, u)


def grading(u: AlgebraElement) -> AlgebraElement:
    """The grading operator, composed literally from its summands."""
    config = u.config
    shape = config.shape
    out = AlgebraElement.zero(config)
    for s in config.weight_group_slots:
        out = out + scale_partial(_index_of_slot_cached(shape, s), u)
    for s in config.weight_exp_slots:
        p = _index_of_slot_cached(shape, s)
        t_p = AlgebraElement.from_term(
            config, BasisIndex(config.lattice.zero, config.zero_exps.raised(s)))
        out = out + multiply(t_p, lower_partial(p, u))
    return out


def _index_of_slot_cached(shape, s: int) -> int:
    if s == 0:
        return 0
    return (s + 1) // 2 if s % 2 else s // 2 + shape.n


def weight(config: AlgebraConfig, index: BasisIndex):
    """Grading eigenvalue of a basis monomial, cached on the index."""
    w = index._weight
    if w is None:
        w = config.weight(index.alpha, index.exps)
        index._weight = w
    return w


def bracket_operator(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """Bracket via literal operator composition; the oracle route."""
    _check_same_config(u, v)
    config = u.config
    shape = config.shape
    out = AlgebraElement.zero(config)
    for p in shape.blocks(1, 6):
        pb = p + shape.n
        shift = AlgebraElement.from_term(
            config, BasisIndex(config.shift_coords[p], config.zero_exps))
        cross = (multiply(partial(p, u), partial(pb, v))
                 - multiply(partial(pb, u), partial(p, v)))
        out = out + multiply(shift, cross)
    two_minus_u = 2 * u - grading(u)
    two_minus_v = 2 * v - grading(v)
    out = out + multiply(two_minus_u, partial(0, v))
    out = out - multiply(partial(0, u), two_minus_v)
    return out


def bracket_closed(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """Bracket via the per-basis-pair expansion; the production route."""
    _check_same_config(u, v)
    config = u.config
    terms: dict[BasisIndex, Fraction] = {}

    def emit(alpha, exps, coeff):
        if exps is None or not coeff:
            return  # dropped-term convention (negative exponent) or zero
        idx = BasisIndex(alpha, exps)
        acc = terms.get(idx, 0) + coeff
        if acc:
            terms[idx] = acc
        else:
            terms.pop(idx, None)

    for iu, cu in u.terms.items():
        avec = iu.alpha.vector
        ie = iu.exps
        for iv, cv in v.terms.items():
            bvec = iv.alpha.vector
            je = iv.exps
            c = cu * cv
            alpha_sum = iu.alpha.add(iv.alpha)
            exps_sum = ie.add(je)

            for sp, sq, shift, fam_gg, fam_ge, fam_eg, fam_ee in config.pair_rows:
                shifted = None
                if fam_gg:
                    k = avec[sp] * bvec[sq] - avec[sq] * bvec[sp]
                    if k:
                        shifted = alpha_sum.add_coords(shift.coords)
                        emit(shifted, exps_sum, c * k)
                if fam_ge:
                    k = avec[sp] * je[sq] - ie[sq] * bvec[sp]
                    if k:
                        if shifted is None:
                            shifted = alpha_sum.add_coords(shift.coords)
                        emit(shifted, exps_sum.lowered(sq), c * k)
                if fam_eg:
                    k = ie[sp] * bvec[sq] - je[sp] * avec[sq]
                    if k:
                        if shifted is None:
                            shifted = alpha_sum.add_coords(shift.coords)
                        emit(shifted, exps_sum.lowered(sp), c * k)
                if fam_ee:
                    k = ie[sp] * je[sq] - ie[sq] * je[sp]
                    if k:
                        if shifted is None:
                            shifted = alpha_sum.add_coords(shift.coords)
                        emit(shifted, exps_sum.lowered(sp, sq), c * k)

            wu = 2 - weight(config, iu)
            wv = 2 - weight(config, iv)
            k = wu * bvec[0] - avec[0] * wv
            if k:
                emit(alpha_sum, exps_sum, c * k)
            k = wu * je[0] - ie[0] * wv
            if k:
                emit(alpha_sum, exps_sum.lowered(0), c * k)

    return AlgebraElement(u.config, terms)


# -- literals ---------------------------------------------------------

_TERM_RE = re.compile(
    r"^\s*(?P<coeff>-?\d+(?:/\d+)?)\s*\*\s*"
    r"x\[(?P<alpha>[^\]]*)\]\s*"
    r"(?:t\[(?P<exps>[^\]]*)\])?\s*$")

_BASIS_RE = re.compile(
    r"^\s*(?:1\s*\*\s*)?x\[(?P<alpha>[^\]]*)\]\s*(?:t\[(?P<exps>[^\]]*)\])?\s*$")


def _parse_entries(config, text, what):
    parts = [x.strip() for x in text.split(",")] if text.strip() else []
    if len(parts) != config.shape.dim:
        raise LiteralError(
            f"{what} needs {config.shape.dim} comma-separated entries")
    try:
        return [Fraction(x) for x in parts]
    except (ValueError, ZeroDivisionError):
        raise LiteralError(f"bad rational in {what}") from None


def _parse_index_body(config, alpha_text, exps_text) -> BasisIndex:
    vec = _parse_entries(config, alpha_text, "x[...]")
    coords = config.lattice.membership(vec)
    if coords is None:
        raise LiteralError("x[...] coordinates are outside the lattice")
    if exps_text is None:
        exps = config.zero_exps
    else:
        entries = _parse_entries(config, exps_text, "t[...]")
        for e in entries:
            if e.denominator != 1 or e < 0:
                raise LiteralError("t[...] entries must be nonnegative integers")
        try:
            exps = ExponentVector.build(config, [int(e) for e in entries])
        except ConfigError as err:
            raise LiteralError(str(err)) from None
    return BasisIndex(config.lattice.element(coords), exps)


def parse_element(config: AlgebraConfig, text: str) -> AlgebraElement:
    """Parse a '+'-separated element literal; "0" is the zero element."""
    if text.strip() == "0":
        return AlgebraElement.zero(config)
    out = AlgebraElement.zero(config)
    for clause in text.split("+"):
        m = _TERM_RE.match(clause)
        if not m:
            raise LiteralError(f"cannot parse term {clause.strip()!r}")
        coeff = Fraction(m.group("coeff"))
        idx = _parse_index_body(config, m.group("alpha"), m.group("exps"))
        out = out + AlgebraElement.from_term(config, idx, coeff)
    return out


def parse_basis_index(config: AlgebraConfig, text: str) -> BasisIndex:
    """Parse a single basis monomial (optional leading "1*")."""
    m = _BASIS_RE.match(text)
    if not m:
        raise LiteralError(f"cannot parse basis literal {text!r}")
    return _parse_index_body(config, m.group("alpha"), m.group("exps"))


def _format_rational(q) -> str:
    return str(q)


def format_basis_index(index: BasisIndex) -> str:
    body = "x[" + ",".join(_format_rational(x) for x in index.alpha.vector) + "]"
    if any(index.exps):
        body += "t[" + ",".join(str(e) for e in index.exps) + "]"
    return body


def format_element(u: AlgebraElement) -> str:
    if u.is_zero():
        return "0"
    pieces = []
    for idx in sorted(u.terms, key=BasisIndex.sort_key):
        pieces.append(f"{_format_rational(u.terms[idx])}*{format_basis_index(idx)}")
    return " + ".join(pieces)


# -- windows and sampling ---------------------------------------------

WINDOW_CAP = 500_000


def window_size(config: AlgebraConfig, radius: int) -> int:
    """Cardinality of the radius window without materializing it."""
    if radius < 0:
        raise ConfigError("radius must be nonnegative")
    ngens = len(config.lattice.generators)
    return (2 * radius + 1) ** ngens * (radius + 1) ** len(config.exp_slots)


def window_indices(config: AlgebraConfig, radius: int) -> list[BasisIndex]:
    """All basis indices with generator coordinates in [-radius, radius]
    and exponent entries in [0, radius], in a fixed deterministic order."""
    size = window_size(config, radius)
    if size > WINDOW_CAP:
        raise ConfigError(
            f"window of radius {radius} holds {size} indices; "
            f"the cap is {WINDOW_CAP}")
    ngens = len(config.lattice.generators)
    slots = sorted(config.exp_slots)
    out = []
    for coords in product(range(-radius, radius + 1), repeat=ngens):
        alpha = config.lattice.element(coords)
        for exp_choice in product(range(0, radius + 1), repeat=len(slots)):
            entries = [0] * config.shape.dim
            for s, e in zip(slots, exp_choice):
                entries[s] = e
            out.append(BasisIndex(alpha, ExponentVector(entries)))
    return out


COORD_BOUND = 3
EXP_BOUND = 4


def sample_index(config: AlgebraConfig, rng) -> BasisIndex:
    """Draw one basis index from the standard sampling box."""
    ngens = len(config.lattice.generators)
    coords = tuple(rng.randint(-COORD_BOUND, COORD_BOUND) for _ in range(ngens))
    entries = [0] * config.shape.dim
    for s in sorted(config.exp_slots):
        entries[s] = rng.randint(0, EXP_BOUND)
    return BasisIndex(config.lattice.element(coords), ExponentVector(entries))


def sample_element(config: AlgebraConfig, rng, max_terms: int = 3) -> AlgebraElement:
    """Draw a small element with nonzero rational coefficients."""
    out = AlgebraElement.zero(config)
    for _ in range(rng.randint(1, max_terms)):
        coeff = 0
        while not coeff:
            coeff = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        out = out + AlgebraElement.from_term(config, sample_index(config, rng), coeff)
    return out


# -- structure table --------------------------------------------------

def structure_rows(config: AlgebraConfig, radius: int) -> list[tuple[str, str, str, str]]:
    """CSV rows for all ordered bracket pairs in the window, sorted for diffing."""
    window = window_indices(config, radius)
    rows = []
    for iu in window:
        lu = format_basis_index(iu)
        xu = AlgebraElement.from_term(config, iu)
        for iv in window:
            lv = format_basis_index(iv)
            xv = AlgebraElement.from_term(config, iv)
            result = bracket_closed(xu, xv)
            if result.is_zero():
                rows.append((lu, lv, "0", "0"))
            else:
                for ir in result.terms:
                    rows.append((lu, lv, format_basis_index(ir),
                                 _format_rational(result.terms[ir])))
    rows.sort()
    return rows
