"""Exact cluster dynamics: rational and Laurent-polynomial seed mutation.

Cluster values are either fractions.Fraction (numeric orbits) or sparse
Laurent polynomials in the initial cluster (symbolic orbits).  Coefficient
values (the y-variables) are always positive fractions.

Exponent vectors are packed into single integers (64 bits per variable with a
large positive bias), so multiplying monomials is one integer addition; all
packing is internal to this module.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .quiver import (
    ExchangeMatrix,
    Period2Spec,
    Permutation,
    QuiverError,
    is_period2,
    mutate,
    permute,
)


class NonLaurentError(ArithmeticError):
    """A cluster exchange produced a value outside the Laurent ring."""


_LIMB = 64
_BIAS = 1 << 32


def _pack(exps: Sequence[int]) -> int:
    p = 0
    for i, e in enumerate(exps):
        p |= (e + _BIAS) << (_LIMB * i)
    return p


def _unpack(p: int, nvars: int) -> tuple[int, ...]:
    mask = (1 << _LIMB) - 1
    return tuple(((p >> (_LIMB * i)) & mask) - _BIAS for i in range(nvars))


def _pack_zero(nvars: int) -> int:
    return _pack((0,) * nvars)


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


_COEFF_FAIL = object()  # sentinel: integer pass hit a non-divisible coefficient


class LaurentPoly:
    """Sparse polynomial with integer exponent vectors, possibly negative.

    The canonical form never stores a zero coefficient; equality and hashing
    follow the term dictionary.
    """

    __slots__ = ("nvars", "_terms", "_zero")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], object] | None = None):
        self.nvars = nvars
        self._zero = _pack_zero(nvars)
        packed = {}
        for exps, c in (terms or {}).items():
            if c != 0:
                packed[_pack(exps)] = _norm_coeff(c)
        self._terms = packed

    @classmethod
    def _raw(cls, nvars: int, packed: dict[int, object]) -> "LaurentPoly":
        self = cls.__new__(cls)
        self.nvars = nvars
        self._zero = _pack_zero(nvars)
        self._terms = packed
        return self

    @property
    def terms(self) -> dict[tuple[int, ...], object]:
        """Exponent-tuple view of the terms (unpacked copy)."""
        return {_unpack(p, self.nvars): c for p, c in self._terms.items()}

    # -- constructors ------------------------------------------------------
    @staticmethod
    def constant(nvars: int, c) -> "LaurentPoly":
        return LaurentPoly(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(nvars: int, i: int, power: int = 1) -> "LaurentPoly":
        """x_i^power, i in 1..nvars."""
        if not 1 <= i <= nvars:
            raise QuiverError(f"variable index {i} out of range 1..{nvars}")
        exps = [0] * nvars
        exps[i - 1] = power
        return LaurentPoly(nvars, {tuple(exps): 1})

    @staticmethod
    def zero(nvars: int) -> "LaurentPoly":
        return LaurentPoly(nvars, {})

    @staticmethod
    def one(nvars: int) -> "LaurentPoly":
        return LaurentPoly.constant(nvars, 1)

    # -- ring structure ----------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise QuiverError("variable count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return LaurentPoly._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        small, big = self._terms, other._terms
        if len(small) > len(big):
            small, big = big, small
        big_items = list(big.items())
        zero = self._zero
        terms: dict[int, object] = {}
        get = terms.get
        for e1, c1 in small.items():
            e1z = e1 - zero
            for e2, c2 in big_items:
                e = e1z + e2
                v = get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        return LaurentPoly._raw(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, exp: int):
        if exp < 0:
            raise QuiverError("negative powers only via division")
        result = LaurentPoly.one(self.nvars)
        base = self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base if exp > 1 else base
            exp >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.nvars, other)
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- inspection --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def term_count(self) -> int:
        return len(self._terms)

    def has_integer_coefficients(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    def eval(self, values: Sequence[Fraction]) -> Fraction:
        if len(values) != self.nvars:
            raise QuiverError("value count mismatch")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = Fraction(c)
            for v, p in zip(values, e):
                term *= Fraction(v) ** p
            total += term
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = [
                f"x{i + 1}" + (f"^{p}" if p != 1 else "")
                for i, p in enumerate(e)
                if p
            ]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    # -- division ----------------------------------------------------------
    def monomial_div(self, q: "LaurentPoly") -> "LaurentPoly":
        """Divide by a single-term polynomial (always exact in the Laurent ring)."""
        q = self._coerce(q)
        if not q.is_monomial():
            raise QuiverError("divisor is not a monomial")
        (qe, qc), = q._terms.items()
        shift = qe - self._zero
        terms = {}
        for e, c in self._terms.items():
            terms[e - shift] = _norm_coeff(Fraction(c, 1) / qc) if qc != 1 else c
        return LaurentPoly._raw(self.nvars, terms)

    def _min_exponents(self) -> int:
        """Packed componentwise minimum over all exponent vectors."""
        mask = (1 << _LIMB) - 1
        mins = None
        for e in self._terms:
            comps = [(e >> (_LIMB * i)) & mask for i in range(self.nvars)]
            mins = comps if mins is None else [min(a, b) for a, b in zip(mins, comps)]
        p = 0
        for i, m in enumerate(mins):
            p |= m << (_LIMB * i)
        return p

    def divide(self, divisor: "LaurentPoly") -> "LaurentPoly | None":
        """Exact quotient self / divisor in the Laurent ring, or None.

        Both operands are shifted so per-variable minimum exponents are 0;
        the shifted divisor then shares no monomial factor, so Laurent
        divisibility reduces to ordinary exact division by leading-term
        elimination in graded-lex order.  An all-integer pass runs first when
        possible; a coefficient non-divisibility falls back to rationals.
        """
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero(self.nvars)
        if divisor.is_monomial():
            return self.monomial_div(divisor)
        nvars = self.nvars
        zero = self._zero
        p_min = self._min_exponents()
        d_min = divisor._min_exponents()
        p_terms = {e - p_min + zero: c for e, c in self._terms.items()}
        d_terms = {e - d_min + zero: c for e, c in divisor._terms.items()}
        quo = None
        if all(isinstance(c, int) for c in p_terms.values()) and all(
            isinstance(c, int) for c in d_terms.values()
        ):
            quo = _exact_div(p_terms, d_terms, nvars, zero, integral=True)
            if quo is _COEFF_FAIL:
                quo = None
        if quo is None:
            quo = _exact_div(
                {e: Fraction(c) for e, c in p_terms.items()},
                {e: Fraction(c) for e, c in d_terms.items()},
                nvars,
                zero,
                integral=False,
            )
        if quo is None or quo is _COEFF_FAIL:
            return None
        # quo keys carry the bias; adding the relative shift keeps them biased
        shift = p_min - d_min
        return LaurentPoly._raw(
            nvars, {e + shift: _norm_coeff(c) for e, c in quo.items()}
        )


def _grlex_key(e: int, nvars: int):
    t = _unpack(e, nvars)
    return (-sum(t), tuple(-x for x in t))


def _exact_div(p_terms: dict, d_terms: dict, nvars: int, zero: int, integral: bool):
    """Exact division of nonneg-exponent packed-term polynomials.

    Returns the quotient dict, None when the division is not exact, or
    _COEFF_FAIL when integral=True and a coefficient fails to divide.  The
    leading term is tracked with a lazily cleaned heap in graded-lex order.
    """
    order = lambda e: _grlex_key(e, nvars)
    d_lead = min(d_terms, key=order)
    d_lead_c = d_terms[d_lead]
    d_tail = [(e - d_lead, c) for e, c in d_terms.items() if e != d_lead]
    rem = dict(p_terms)
    heap = [(order(e), e) for e in rem]
    heapq.heapify(heap)
    mask_ok = zero  # packed all-zero exponent; diffs below it are negative
    quo: dict = {}
    while rem:
        while heap and heap[0][1] not in rem:
            heapq.heappop(heap)
        if not heap:
            break
        r_lead = heap[0][1]
        r_lead_c = rem[r_lead]
        diff = r_lead - d_lead + zero
        # negative component iff any limb underflows below the bias
        if any(x < 0 for x in _unpack(diff, nvars)):
            return None
        if integral:
            coeff, mod = divmod(r_lead_c, d_lead_c)
            if mod:
                return _COEFF_FAIL
        else:
            coeff = r_lead_c / d_lead_c
        quo[diff] = quo.get(diff, 0) + coeff
        del rem[r_lead]
        heapq.heappop(heap)
        diffz = diff - zero
        for e, c in d_tail:
            k2 = diffz + e + d_lead  # = diff + (e_orig - zero)
            if k2 in rem:
                v = rem[k2] - coeff * c
                if v:
                    rem[k2] = v
                else:
                    del rem[k2]
            else:
                rem[k2] = -coeff * c
                heapq.heappush(heap, (order(k2), k2))
    return quo


@dataclass(frozen=True)
class RatFunc:
    """Unreduced quotient of Laurent polynomials; carried only when an
    exchange value falls outside the Laurent ring (lenient mode)."""

    num: LaurentPoly
    den: LaurentPoly


SymbolicValue = Union[LaurentPoly, RatFunc]


def _as_pair(v: SymbolicValue) -> tuple[LaurentPoly, LaurentPoly]:
    if isinstance(v, RatFunc):
        return v.num, v.den
    return v, LaurentPoly.one(v.nvars)


@dataclass(frozen=True)
class Seed:
    """Exchange matrix with cluster values x and coefficient values y."""

    B: ExchangeMatrix
    x: tuple
    y: tuple

    def __post_init__(self):
        n = self.B.n
        if len(self.x) != n or len(self.y) != n:
            raise QuiverError("cluster sizes must equal the vertex count")
        for v in self.y:
            if not isinstance(v, (int, Fraction)):
                raise QuiverError("y-values must be rational")
            if v <= 0:
                raise QuiverError("y-values must be strictly positive")

    @property
    def symbolic(self) -> bool:
        return any(isinstance(v, (LaurentPoly, RatFunc)) for v in self.x)

    @staticmethod
    def ones(B: ExchangeMatrix) -> "Seed":
        n = B.n
        return Seed(B, tuple(Fraction(1) for _ in range(n)), tuple(Fraction(1) for _ in range(n)))

    @staticmethod
    def initial(B: ExchangeMatrix) -> "Seed":
        """Symbolic seed: x_i is the i-th initial cluster variable."""
        n = B.n
        return Seed(
            B,
            tuple(LaurentPoly.variable(n, i) for i in range(1, n + 1)),
            tuple(Fraction(1) for _ in range(n)),
        )


def mutate_seed(seed: Seed, k: int, strict: bool = True) -> Seed:
    """Seed mutation at vertex k: exchange relation for x_k, coefficient
    update for every y, matrix mutation for B.

    In symbolic mode the exchange quotient is computed in the fraction field
    and re-expressed as a Laurent polynomial; if that fails, strict mode
    raises NonLaurentError and lenient mode stores the flagged quotient.
    """
    B = seed.B
    n = B.n
    if not 1 <= k <= n:
        raise QuiverError(f"vertex {k} out of range 1..{n}")
    x = list(seed.x)
    y = list(seed.y)
    xk = x[k - 1]

    if seed.symbolic:
        num_in = LaurentPoly.one(n)
        den_in = LaurentPoly.one(n)
        num_out = LaurentPoly.one(n)
        den_out = LaurentPoly.one(n)
        for i in range(1, n + 1):
            w = B.b(i, k)
            if w > 0:
                ni, di = _as_pair(x[i - 1])
                num_in = num_in * ni ** w
                den_in = den_in * di ** w
            elif w < 0:
                ni, di = _as_pair(x[i - 1])
                num_out = num_out * ni ** (-w)
                den_out = den_out * di ** (-w)
        sum_num = num_in * den_out + num_out * den_in
        sum_den = den_in * den_out
        xk_num, xk_den = _as_pair(xk)
        new_num = sum_num * xk_den
        new_den = sum_den * xk_num
        if new_den.is_zero():
            raise ZeroDivisionError("cluster value x_k is zero")
        quotient = new_num.divide(new_den)
        if quotient is None:
            if strict:
                raise NonLaurentError(
                    f"exchange at vertex {k} left the Laurent ring"
                )
            new_xk: SymbolicValue = RatFunc(new_num, new_den)
        else:
            new_xk = quotient
        x[k - 1] = new_xk
    else:
        if xk == 0:
            raise ZeroDivisionError("cluster value x_k is zero")
        m_in = Fraction(1)
        m_out = Fraction(1)
        for i in range(1, n + 1):
            w = B.b(i, k)
            if w > 0:
                m_in *= Fraction(x[i - 1]) ** w
            elif w < 0:
                m_out *= Fraction(x[i - 1]) ** (-w)
        x[k - 1] = (m_in + m_out) / Fraction(xk)

    yk = Fraction(y[k - 1])
    new_y = []
    for j in range(1, n + 1):
        if j == k:
            new_y.append(1 / yk)
            continue
        w = B.b(j, k)
        if w == 0:
            new_y.append(y[j - 1])
        elif w > 0:
            new_y.append(Fraction(y[j - 1]) * (1 + yk) ** w)
        else:
            new_y.append(Fraction(y[j - 1]) * (1 + 1 / yk) ** w)
    return Seed(mutate(B, k), tuple(x), tuple(new_y))


def relabel_seed(seed: Seed, s: Permutation) -> Seed:
    n = seed.B.n
    x = [None] * n
    y = [None] * n
    for i in range(1, n + 1):
        x[s(i) - 1] = seed.x[i - 1]
        y[s(i) - 1] = seed.y[i - 1]
    return Seed(permute(seed.B, s), tuple(x), tuple(y))


@dataclass
class OrbitTrace:
    """Mutation-orbit record with the slot sequences of the induced systems.

    seq holds z(q), y(q) (cluster values replaced at steps 2q and 2q+1) and
    A(q), B(q) (the matching coefficient values).  states[u] is the seed just
    before step u, in coordinates relabeled so the next even mutation is at
    vertex 1; accessors translate back to fixed vertex labels.
    """

    spec: Period2Spec
    B0: ExchangeMatrix
    steps: int
    seq: dict[str, list] = field(default_factory=dict)
    states: list[Seed] | None = None

    def _translate(self, i: int, u: int) -> int:
        r = u // 2
        return (self.spec.sigma() ** r)(i)

    def x_at(self, i: int, u: int):
        return self.states[u].x[self._translate(i, u) - 1]

    def y_at(self, i: int, u: int):
        return self.states[u].y[self._translate(i, u) - 1]

    def b_at(self, u: int) -> ExchangeMatrix:
        r = u // 2
        return permute(self.states[u].B, self.spec.sigma() ** (-r))


def run_orbit(
    s0: Seed,
    spec: Period2Spec,
    steps: int,
    strict: bool = True,
    keep_states: bool = True,
) -> OrbitTrace:
    """Alternate mutations at (the images of) vertices 1 and k.

    The schedule mutates at 1, then at k, then relabels by sigma and repeats,
    which tracks the mutation points of the periodic orbit; the recorded z/y
    (and A/B) sequences are the values replaced at each step.
    """
    if steps < 0:
        raise QuiverError("steps must be >= 0")
    if not is_period2(s0.B, spec):
        raise QuiverError("seed matrix does not satisfy the period-2 equation")
    sigma = spec.sigma()
    k = spec.k
    seq: dict[str, list] = {"z": [], "y": [], "A": [], "B": []}
    states = [s0] if keep_states else None
    state = s0
    for u in range(steps):
        if u % 2 == 0:
            seq["z"].append(state.x[0])
            seq["A"].append(state.y[0])
            state = mutate_seed(state, 1, strict=strict)
        else:
            seq["y"].append(state.x[k - 1])
            seq["B"].append(state.y[k - 1])
            state = mutate_seed(state, k, strict=strict)
            state = relabel_seed(state, sigma)
        if keep_states:
            states.append(state)
    return OrbitTrace(spec, s0.B, steps, seq, states)


@dataclass
class LaurentReport:
    """Per-mutation record of whether the new cluster value stayed Laurent."""

    depth: int
    laurent: list[bool]
    integral: list[bool]
    values: list

    @property
    def all_laurent(self) -> bool:
        return all(self.laurent) and all(self.integral)


def laurent_check(
    B: ExchangeMatrix, spec: Period2Spec | None, depth: int
) -> LaurentReport:
    """Run a symbolic orbit and report Laurentness of every new variable.

    With a period-2 spec the orbit schedule is used; with spec=None the
    mutation schedule cycles through the vertices 1, 2, ..., n, 1, ...
    (used for quivers with no periodicity structure).
    """
    n = B.n
    seed = Seed.initial(B)
    laurent: list[bool] = []
    integral: list[bool] = []
    values: list = []

    def record(value):
        if isinstance(value, RatFunc):
            laurent.append(False)
            integral.append(False)
        else:
            laurent.append(True)
            integral.append(value.has_integer_coefficients())
        values.append(value)

    if spec is None:
        state = seed
        for u in range(depth):
            v = u % n + 1
            state = mutate_seed(state, v, strict=False)
            record(state.x[v - 1])
    else:
        trace = run_orbit(seed, spec, depth, strict=False)
        sigma_k = spec.sigma()(spec.k)
        for u in range(depth):
            if u % 2 == 0:
                record(trace.states[u + 1].x[0])
            else:
                # odd steps end with the sigma-relabeling, which moves the
                # fresh value from vertex k to sigma(k)
                record(trace.states[u + 1].x[sigma_k - 1])
    return LaurentReport(depth, laurent, integral, values)
