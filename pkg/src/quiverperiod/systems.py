"""T- and Y-systems of period-2 quivers: mutation points, exponent rules,
closed-form extraction, forward iteration and periodic quantities.

Slot naming: ("z", p) and ("y", p) address the two interleaved sequences of a
system; for Y-kind systems the same slots carry the coefficient sequences
(printed as A and B).  Two independent routes build a system: extract_system
reads the exponents off B(0) and B(1) = mu_1(B) via the closed forms, while
tabulate_system walks the mutation-point windows; the test suite requires them
to agree exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .cluster import OrbitTrace, Seed, run_orbit
from .quiver import (
    ONE_CYCLE,
    TWO_CYCLE,
    ExchangeMatrix,
    Period2Spec,
    QuiverError,
    is_period2,
    mutate,
)

Slot = tuple[str, int]


# ---------------------------------------------------------------------------
# forward mutation points
# ---------------------------------------------------------------------------


@dataclass
class MutationPointTable:
    """Vertices mutated at each time step, with the gaps to the neighbouring
    mutations at the same vertex (lambda_plus forward, lambda_minus back)."""

    spec: Period2Spec
    window: tuple[int, int]
    points: dict[int, int]  # u -> vertex
    lambda_plus: dict[tuple[int, int], int]
    lambda_minus: dict[tuple[int, int], int]


def vertex_at(spec: Period2Spec, u: int) -> int:
    """The vertex mutated at time u: nu^r(1) for u = 2r, nu^r(k) for u = 2r+1."""
    r, l = divmod(u, 2)
    nu = spec.nu()
    base = 1 if l == 0 else spec.k
    return (nu ** r)(base)


def lambdas_at(spec: Period2Spec, i: int, u: int) -> tuple[int, int]:
    """(lambda_plus, lambda_minus) for the point (i, u)."""
    n, k = spec.n, spec.k
    if spec.shape == ONE_CYCLE:
        if u % 2 == 0:
            return 2 * k - 1, 2 * n - 2 * k + 1
        return 2 * n - 2 * k + 1, 2 * k - 1
    gap = 2 * (k - 1) if i <= k - 1 else 2 * (n - k + 1)
    return gap, gap


def forward_points(spec: Period2Spec, window: tuple[int, int]) -> MutationPointTable:
    lo, hi = window
    points = {}
    lp = {}
    lm = {}
    for u in range(lo, hi + 1):
        i = vertex_at(spec, u)
        points[u] = i
        plus, minus = lambdas_at(spec, i, u)
        lp[(i, u)] = plus
        lm[(i, u)] = minus
    return MutationPointTable(spec, window, points, lp, lm)


def _b_at(spec: Period2Spec, B0: ExchangeMatrix, B1: ExchangeMatrix, j: int, i: int, u: int) -> int:
    """b[j][i] at time u, reduced to B(0)/B(1) by orbit periodicity."""
    r, l = divmod(u, 2)
    s = spec.sigma() ** r
    mat = B0 if l == 0 else B1
    return mat.b(s(j), s(i))


def h_exponent(
    j: int, v: int, i: int, u: int,
    spec: Period2Spec, B0: ExchangeMatrix, B1: ExchangeMatrix,
) -> tuple[int, int]:
    """(H+, H-) for the pair of mutation points (j, v) and (i, u).

    Nonzero only when u lies strictly inside (v - lambda_minus(j, v), v); the
    value is the positive (resp. negative) part of b[j][i] at time u.
    """
    if vertex_at(spec, v) != j or vertex_at(spec, u) != i:
        raise QuiverError("not forward mutation points")
    _, lam_minus = lambdas_at(spec, j, v)
    if not v - lam_minus < u < v:
        return 0, 0
    b = _b_at(spec, B0, B1, j, i, u)
    return max(b, 0), max(-b, 0)


def g_exponent(
    j: int, v: int, i: int, u: int,
    spec: Period2Spec, B0: ExchangeMatrix, B1: ExchangeMatrix,
) -> tuple[int, int]:
    """(G+, G-): nonzero when v lies inside (u, u + lambda_plus(i, u)), with
    the sign bracket taken on -b[j][i] at time v."""
    if vertex_at(spec, v) != j or vertex_at(spec, u) != i:
        raise QuiverError("not forward mutation points")
    lam_plus, _ = lambdas_at(spec, i, u)
    if not u < v < u + lam_plus:
        return 0, 0
    b = _b_at(spec, B0, B1, j, i, v)
    return max(-b, 0), max(b, 0)


# ---------------------------------------------------------------------------
# system specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquationSpec:
    """One of the two interleaved equations.

    lhs is a product of two slots; iterating forward solves for lhs[1].
    For T-kind systems, plus/minus are the exponent maps of the two monomials
    on the right; for Y-kind, they are the exponents on (1 + S(q+p)) in the
    numerator and (1 + S(q+p)^-1) in the denominator.
    """

    lhs: tuple[Slot, Slot]
    plus: dict[Slot, int] = field(hash=False, default_factory=dict)
    minus: dict[Slot, int] = field(hash=False, default_factory=dict)


@dataclass(frozen=True)
class SystemSpec:
    kind: str  # "T", "Y" or "TZ"
    spec: Period2Spec
    B0: ExchangeMatrix
    eq1: EquationSpec
    eq2: EquationSpec

    def __post_init__(self):
        for eq in (self.eq1, self.eq2):
            for table in (eq.plus, eq.minus):
                for slot, e in table.items():
                    if e < 0:
                        raise QuiverError(f"negative exponent at {slot}")

    def equations(self) -> tuple[EquationSpec, EquationSpec]:
        return self.eq1, self.eq2

    # -- rendering ---------------------------------------------------------
    def _slot_name(self, slot: Slot) -> str:
        seq, off = slot
        if self.kind == "Y":
            seq = {"z": "A", "y": "B"}[seq]
        arg = "q" if off == 0 else f"q+{off}"
        return f"{seq}({arg})"

    def _monomial(self, table: dict[Slot, int], wrap: str | None = None) -> str:
        if not table:
            return "1"
        parts = []
        for slot in sorted(table):
            e = table[slot]
            name = self._slot_name(slot)
            if wrap == "plus":
                name = f"(1+{name})"
            elif wrap == "minus":
                name = f"(1+{name}^-1)"
            parts.append(name + (f"^{e}" if e != 1 else ""))
        return "*".join(parts)

    def text(self) -> str:
        lines = []
        for label, eq in (("eq1", self.eq1), ("eq2", self.eq2)):
            lhs = "*".join(self._slot_name(s) for s in eq.lhs)
            if self.kind in ("T", "TZ"):
                rhs = f"{self._monomial(eq.plus)} + {self._monomial(eq.minus)}"
                if self.kind == "TZ":
                    zname = "Zz" if label == "eq1" else "Zy"
                    rhs = f"{zname}(q)*({rhs})"
            else:
                rhs = f"{self._monomial(eq.plus, 'plus')} / {self._monomial(eq.minus, 'minus')}"
            lines.append(f"{label}: {lhs} = {rhs}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        def enc(eq):
            return {
                "lhs": [[s, o] for s, o in eq.lhs],
                "plus": [[s, o, e] for (s, o), e in sorted(eq.plus.items())],
                "minus": [[s, o, e] for (s, o), e in sorted(eq.minus.items())],
            }

        return {
            "format": "quiverperiod/system-v1",
            "kind": self.kind,
            "n": self.spec.n,
            "shape": self.spec.shape,
            "k": self.spec.k,
            "b": [list(r) for r in self.B0.rows],
            "eq1": enc(self.eq1),
            "eq2": enc(self.eq2),
        }

    @staticmethod
    def from_dict(data: dict) -> "SystemSpec":
        if data.get("format") != "quiverperiod/system-v1":
            raise QuiverError("not a quiverperiod/system-v1 object")

        def dec(obj):
            return EquationSpec(
                lhs=tuple((s, o) for s, o in obj["lhs"]),
                plus={(s, o): e for s, o, e in obj["plus"]},
                minus={(s, o): e for s, o, e in obj["minus"]},
            )

        spec = Period2Spec(data["n"], data["shape"], data["k"])
        return SystemSpec(
            data["kind"],
            spec,
            ExchangeMatrix.from_rows(data["b"]),
            dec(data["eq1"]),
            dec(data["eq2"]),
        )


def _bar(n: int):
    return lambda v: (v - 1) % n + 1


def extract_system(B: ExchangeMatrix, spec: Period2Spec, kind: str) -> SystemSpec:
    """Closed-form system: exponents read directly off B(0) and B(1) = mu_1(B)."""
    kind = kind.upper()
    if kind not in ("T", "Y", "TZ"):
        raise QuiverError(f"unknown system kind {kind!r}")
    if not is_period2(B, spec):
        raise QuiverError("matrix does not satisfy the period-2 equation")
    n, k = spec.n, spec.k
    B1 = mutate(B, 1)
    bar = _bar(n)
    nu = spec.nu()

    def bracket(x):
        return max(x, 0)

    def table(pairs) -> tuple[dict[Slot, int], dict[Slot, int]]:
        plus = {}
        minus = {}
        for slot, b in pairs:
            if bracket(b):
                plus[slot] = bracket(b)
            if bracket(-b):
                minus[slot] = bracket(-b)
        return plus, minus

    if kind in ("T", "TZ"):
        if spec.shape == ONE_CYCLE:
            pairs1 = [(("z", p), B.b(bar(1 - p), 1)) for p in range(1, n - k + 1)]
            pairs1 += [(("y", p), B.b(bar(k - p), 1)) for p in range(0, k - 1)]
            eq1 = EquationSpec((("z", 0), ("y", k - 1)), *table(pairs1))
            pairs2 = [(("z", p), B1.b(bar(1 - p), k)) for p in range(1, n - k + 1)]
            pairs2 += [(("y", p), B1.b(bar(k - p), k)) for p in range(1, k)]
            eq2 = EquationSpec((("y", 0), ("z", n - k + 1)), *table(pairs2))
        else:
            pairs1 = [(("z", p), B.b((nu ** p)(1), 1)) for p in range(1, k - 1)]
            pairs1 += [(("y", p), B.b((nu ** p)(k), 1)) for p in range(0, n - k + 1)]
            eq1 = EquationSpec((("z", 0), ("z", k - 1)), *table(pairs1))
            pairs2 = [(("z", p), B1.b((nu ** p)(1), k)) for p in range(1, k)]
            pairs2 += [(("y", p), B1.b((nu ** p)(k), k)) for p in range(1, n - k + 1)]
            eq2 = EquationSpec((("y", 0), ("y", n - k + 1)), *table(pairs2))
        return SystemSpec(kind, spec, B, eq1, eq2)

    # Y-kind: numerator exponents [-b], denominator [b], entries at time of
    # the running product point.
    if spec.shape == ONE_CYCLE:
        pairs1 = [(("z", p), -B.b(1, bar(1 + p))) for p in range(1, k)]
        pairs1 += [(("y", p), -B1.b(k, bar(1 + p))) for p in range(0, k - 1)]
        eq1 = EquationSpec((("z", 0), ("y", k - 1)), *table(pairs1))
        pairs2 = [(("z", p), -B.b(1, bar(k + p))) for p in range(1, n - k + 1)]
        pairs2 += [(("y", p), -B1.b(k, bar(k + p))) for p in range(1, n - k + 1)]
        eq2 = EquationSpec((("y", 0), ("z", n - k + 1)), *table(pairs2))
    else:
        pairs1 = [(("z", p), -B.b(1, (nu ** (-p))(1))) for p in range(1, k - 1)]
        pairs1 += [(("y", p), -B1.b(k, (nu ** (-p))(1))) for p in range(0, k - 1)]
        eq1 = EquationSpec((("z", 0), ("z", k - 1)), *table(pairs1))
        pairs2 = [(("z", p), -B.b(1, (nu ** (-p))(k))) for p in range(1, n - k + 2)]
        pairs2 += [(("y", p), -B1.b(k, (nu ** (-p))(k))) for p in range(1, n - k + 1)]
        eq2 = EquationSpec((("y", 0), ("y", n - k + 1)), *table(pairs2))
    return SystemSpec("Y", spec, B, eq1, eq2)


def tabulate_system(B: ExchangeMatrix, spec: Period2Spec, kind: str) -> SystemSpec:
    """First-principles system: walk the mutation-point windows and collect
    H (T-kind) or G (Y-kind) exponents.  Independent of extract_system."""
    kind = kind.upper()
    if kind not in ("T", "Y", "TZ"):
        raise QuiverError(f"unknown system kind {kind!r}")
    if not is_period2(B, spec):
        raise QuiverError("matrix does not satisfy the period-2 equation")
    n = spec.n
    B1 = mutate(B, 1)
    expo = h_exponent if kind in ("T", "TZ") else g_exponent

    def build(u: int) -> EquationSpec:
        i = vertex_at(spec, u)
        lam_plus, _ = lambdas_at(spec, i, u)
        plus: dict[Slot, int] = {}
        minus: dict[Slot, int] = {}
        for v in range(u - 4 * n, u + 4 * n + 1):
            if v == u:
                continue
            j = vertex_at(spec, v)
            hp, hm = expo(j, v, i, u, spec, B, B1)
            r, l = divmod(v, 2)
            slot = ("z" if l == 0 else "y", r)
            if hp:
                plus[slot] = plus.get(slot, 0) + hp
            if hm:
                minus[slot] = minus.get(slot, 0) + hm
        out_u = u + lam_plus
        r, l = divmod(out_u, 2)
        out_slot = ("z" if l == 0 else "y", r)
        r, l = divmod(u, 2)
        lhs = (("z" if l == 0 else "y", r), out_slot)
        return EquationSpec(lhs, plus, minus)

    return SystemSpec(kind, spec, B, build(0), build(1))


# ---------------------------------------------------------------------------
# iteration
# ---------------------------------------------------------------------------


def required_window(sys: SystemSpec) -> dict[str, int]:
    """Initial values needed per sequence: indices 0 .. (producer offset - 1)."""
    out = {}
    for eq in sys.equations():
        seq, off = eq.lhs[1]
        out[seq] = off
    return out


def initial_window_from_seed(sys: SystemSpec, x0: Sequence) -> dict[str, list]:
    """The window whose iteration matches run_orbit from cluster values x0:
    z(q) = x0 at nu^q(1), y(q) = x0 at nu^q(k)."""
    spec = sys.spec
    nu = spec.nu()
    need = required_window(sys)
    window = {"z": [], "y": []}
    for q in range(need.get("z", 0)):
        window["z"].append(Fraction(x0[(nu ** q)(1) - 1]))
    for q in range(need.get("y", 0)):
        window["y"].append(Fraction(x0[(nu ** q)(spec.k) - 1]))
    return window


def iterate_system(
    sys: SystemSpec,
    initial: dict[str, Sequence],
    steps: int,
    Z: dict[str, Sequence] | None = None,
) -> dict[str, list]:
    """Forward-evaluate the two interleaved equations exactly.

    initial provides the z- and y-windows (sizes must match required_window).
    For TZ-kind systems, Z["z"] and Z["y"] multiply the right-hand sides of
    eq1 and eq2.  Returns the extended sequences as Fractions.
    """
    need = required_window(sys)
    seqs: dict[str, list] = {}
    for name in ("z", "y"):
        want = need.get(name, 0)
        got = list(initial.get(name, ()))
        if len(got) != want:
            raise QuiverError(
                f"initial window for {name!r} must have exactly {want} values, got {len(got)}"
            )
        seqs[name] = [Fraction(v) for v in got]
    if sys.kind == "TZ":
        if Z is None:
            Z = {"z": [1] * steps, "y": [1] * steps}
        for name in ("z", "y"):
            if len(Z.get(name, ())) < steps:
                raise QuiverError(f"Z[{name!r}] must provide at least {steps} values")
    elif Z is not None:
        raise QuiverError("Z sequences are only accepted for TZ-kind systems")

    def value(slot: Slot, q: int) -> Fraction:
        seq, off = slot
        idx = q + off
        if idx >= len(seqs[seq]):
            raise QuiverError(f"internal: slot {slot} not yet available at q={q}")
        return seqs[seq][idx]

    def rhs(eq: EquationSpec, q: int) -> Fraction:
        if sys.kind in ("T", "TZ"):
            prod_p = Fraction(1)
            for slot, e in eq.plus.items():
                prod_p *= value(slot, q) ** e
            prod_m = Fraction(1)
            for slot, e in eq.minus.items():
                prod_m *= value(slot, q) ** e
            return prod_p + prod_m
        num = Fraction(1)
        for slot, e in eq.plus.items():
            num *= (1 + value(slot, q)) ** e
        den = Fraction(1)
        for slot, e in eq.minus.items():
            v = value(slot, q)
            if v == 0:
                raise ZeroDivisionError("zero value in Y-system denominator")
            den *= (1 + 1 / v) ** e
        return num / den

    for q in range(steps):
        for idx, eq in enumerate(sys.equations()):
            divisor = value(eq.lhs[0], q)
            if divisor == 0:
                raise ZeroDivisionError(
                    f"zero divisor at q={q} (non-generic initial data)"
                )
            val = rhs(eq, q)
            if sys.kind == "TZ":
                val *= Fraction(Z["z" if idx == 0 else "y"][q])
            val /= divisor
            out_seq, out_off = eq.lhs[1]
            if len(seqs[out_seq]) != q + out_off:
                raise QuiverError("internal: sequence produced out of order")
            seqs[out_seq].append(val)
    return seqs


# ---------------------------------------------------------------------------
# periodic quantities
# ---------------------------------------------------------------------------

Monomial = tuple[int, tuple[tuple[Slot, int], ...]]  # (coefficient, ((slot, exp), ...))


@dataclass(frozen=True)
class PeriodicQuantityTemplate:
    """Rational expression in window slots with a claimed exact period."""

    name: str
    num: tuple[Monomial, ...]
    den: tuple[Monomial, ...]
    claimed_period: int  # 1 means constant

    def eval_at(self, seqs: dict[str, Sequence], q: int) -> Fraction:
        def side(monomials):
            total = Fraction(0)
            for coeff, factors in monomials:
                term = Fraction(coeff)
                for (seq, off), e in factors:
                    term *= Fraction(seqs[seq][q + off]) ** e
                total += term
            return total

        den = side(self.den)
        if den == 0:
            raise ZeroDivisionError(f"template {self.name} denominator vanished at q={q}")
        return side(self.num) / den

    def max_offset(self) -> int:
        out = 0
        for side in (self.num, self.den):
            for _, factors in side:
                for (_, off), _e in factors:
                    out = max(out, off)
        return out

    def text(self) -> str:
        def fmt(monomials):
            parts = []
            for coeff, factors in monomials:
                bits = [
                    f"{seq}(q+{off})" if off else f"{seq}(q)"
                    for (seq, off), e in factors
                    for _ in [0]
                ]
                bits = []
                for (seq, off), e in factors:
                    name = f"{seq}(q+{off})" if off else f"{seq}(q)"
                    bits.append(name + (f"^{e}" if e != 1 else ""))
                if not bits:
                    parts.append(str(coeff))
                elif coeff == 1:
                    parts.append("*".join(bits))
                else:
                    parts.append(f"{coeff}*" + "*".join(bits))
            return " + ".join(parts)

        return f"({fmt(self.num)}) / ({fmt(self.den)})"


def _mono(coeff: int, *factors: tuple[str, int, int]) -> Monomial:
    return (coeff, tuple(sorted(((seq, off), e) for seq, off, e in factors)))


BUILTIN_TEMPLATES: dict[str, PeriodicQuantityTemplate] = {
    "s81": PeriodicQuantityTemplate(
        "s81", (_mono(1, ("y", 0, 1)),), (_mono(1, ("z", 1, 1)),), 2
    ),
    "s82": PeriodicQuantityTemplate(
        "s82", (_mono(1, ("z", 0, 1)), _mono(1, ("z", 3, 1))), (_mono(1, ("y", 0, 1)),), 1
    ),
    "s83": PeriodicQuantityTemplate(
        "s83",
        (_mono(1, ("y", 0, 1), ("y", 2, 1)), _mono(1, ("y", 1, 1))),
        (_mono(1, ("z", 1, 1), ("z", 2, 1)),),
        1,
    ),
    "s84": PeriodicQuantityTemplate(
        "s84", (_mono(1, ("z", 0, 1)), _mono(1, ("z", 3, 1))), (_mono(1, ("y", 1, 1)),), 1
    ),
    "s85": PeriodicQuantityTemplate(
        "s85", (_mono(1, ("z", 0, 1)), _mono(1)), (_mono(1, ("y", 0, 1), ("y", 2, 1)),), 2
    ),
    "s86": PeriodicQuantityTemplate(
        "s86",
        (_mono(1, ("y", 0, 1), ("y", 1, 1)), _mono(1, ("y", 3, 1), ("y", 4, 1))),
        (_mono(1, ("z", 1, 1)),),
        1,
    ),
}


_TERM_RE = re.compile(r"([zyAB])\(q(?:\+(\d+))?\)(?:\^(-?\d+))?")


def parse_template(text: str, claimed_period: int = 1, name: str = "custom") -> PeriodicQuantityTemplate:
    """Parse expressions like "(z(q)+z(q+3))/y(q+1)" or "y(q)/z(q+1)".

    Terms are sums of products of slot powers (A/B are aliases for z/y);
    an integer literal term is a constant monomial.
    """
    text = text.replace(" ", "")
    if "/" not in text:
        num_text, den_text = text, "1"
    else:
        depth = 0
        split = None
        for idx, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0:
                split = idx
                break
        if split is None:
            raise QuiverError(f"cannot split numerator/denominator in {text!r}")
        num_text, den_text = text[:split], text[split + 1 :]

    def strip_parens(s):
        while s.startswith("(") and s.endswith(")"):
            depth = 0
            ok = True
            for idx, ch in enumerate(s):
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                    if depth == 0 and idx != len(s) - 1:
                        ok = False
                        break
            if not ok:
                break
            s = s[1:-1]
        return s

    def split_terms(s):
        terms = []
        depth = 0
        current = []
        for ch in s:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "+" and depth == 0:
                terms.append("".join(current))
                current = []
            else:
                current.append(ch)
        terms.append("".join(current))
        return terms

    def parse_side(s) -> tuple[Monomial, ...]:
        s = strip_parens(s)
        monomials = []
        for term in split_terms(s):
            term = strip_parens(term)
            factors = []
            coeff = 1
            rest = term
            m = re.match(r"^(\d+)\*?", rest)
            if m and not rest.startswith(("z", "y", "A", "B")):
                coeff = int(m.group(1))
                rest = rest[m.end():]
            pos = 0
            while pos < len(rest):
                m = _TERM_RE.match(rest, pos)
                if not m:
                    raise QuiverError(f"cannot parse template term {term!r}")
                seq = {"A": "z", "B": "y"}.get(m.group(1), m.group(1))
                off = int(m.group(2) or 0)
                e = int(m.group(3) or 1)
                factors.append((seq, off, e))
                pos = m.end()
                if pos < len(rest) and rest[pos] == "*":
                    pos += 1
            monomials.append(_mono(coeff, *factors))
        return tuple(monomials)

    return PeriodicQuantityTemplate(name, parse_side(num_text), parse_side(den_text), claimed_period)


@dataclass
class PeriodicReport:
    template: PeriodicQuantityTemplate
    horizon: int
    ok: bool
    first_failure: int | None = None
    values: list = field(default_factory=list)


def verify_periodic(
    seqs: dict[str, Sequence] | OrbitTrace,
    template: PeriodicQuantityTemplate,
    horizon: int,
) -> PeriodicReport:
    """Exact check of value(q + period) == value(q) for q = 0 .. horizon-1."""
    if isinstance(seqs, OrbitTrace):
        seqs = seqs.seq
    period = template.claimed_period
    need = horizon + period + template.max_offset()
    for name in ("z", "y"):
        used = any(
            (seq == name)
            for side in (template.num, template.den)
            for _, factors in side
            for (seq, _), _ in factors
        )
        if used and len(seqs[name]) < need:
            raise QuiverError(
                f"trace too short: template needs {need} values of {name!r}, "
                f"have {len(seqs[name])}"
            )
    values = [template.eval_at(seqs, q) for q in range(horizon + period)]
    ok = True
    first_failure = None
    for q in range(horizon):
        if values[q + period] != values[q]:
            ok = False
            first_failure = q
            break
    return PeriodicReport(template, horizon, ok, first_failure, values)


def template_search(
    trace: OrbitTrace | dict[str, Sequence],
    shift_bound: int,
    exp_bound: int,
    max_period: int = 4,
    extension: dict[str, Sequence] | None = None,
) -> list[PeriodicQuantityTemplate]:
    """All templates (m1 + m2)/m3 or m1/m2 over the bounded slot window that
    are exactly periodic with period <= max_period along the trace.

    Monomials are products of at most two slot powers (or the constant 1).
    Hits are re-verified on `extension` (a longer, independently generated
    trace) when provided; results are empirical observations, not proofs.
    """
    seqs = trace.seq if isinstance(trace, OrbitTrace) else trace
    slots = [(s, off) for s in ("z", "y") for off in range(shift_bound + 1)]
    monomials: list[Monomial] = [_mono(1)]
    for idx, slot in enumerate(slots):
        for e in range(1, exp_bound + 1):
            monomials.append(_mono(1, (slot[0], slot[1], e)))
        for jdx in range(idx + 1, len(slots)):
            other = slots[jdx]
            for e1 in range(1, exp_bound + 1):
                for e2 in range(1, exp_bound + 1):
                    monomials.append(
                        _mono(1, (slot[0], slot[1], e1), (other[0], other[1], e2))
                    )
    zlen = len(seqs["z"])
    ylen = len(seqs["y"])
    usable = min(zlen, ylen) - shift_bound - max_period
    if usable < 3:
        raise QuiverError("trace too short for template search")

    def values_of(mono: Monomial, count: int):
        out = []
        for q in range(count):
            coeff, factors = mono
            v = Fraction(coeff)
            for (seq, off), e in factors:
                v *= Fraction(seqs[seq][q + off]) ** e
            out.append(v)
        return out

    mono_vals = [values_of(m, usable) for m in monomials]
    found = []
    n_mono = len(monomials)
    for ni in range(n_mono):
        for nj in range(ni, n_mono):
            if ni == nj:
                num_vals = mono_vals[ni]
                num = (monomials[ni],)
            else:
                num_vals = [a + b for a, b in zip(mono_vals[ni], mono_vals[nj])]
                num = (monomials[ni], monomials[nj])
            for di in range(n_mono):
                if di == ni and ni == nj:
                    continue
                den_vals = mono_vals[di]
                if any(v == 0 for v in den_vals):
                    continue
                vals = [a / b for a, b in zip(num_vals, den_vals)]
                for period in range(1, max_period + 1):
                    if all(
                        vals[q + period] == vals[q] for q in range(usable - period)
                    ):
                        tmpl = PeriodicQuantityTemplate(
                            f"found-p{period}", num, (monomials[di],), period
                        )
                        if extension is not None:
                            ext_h = (
                                min(len(extension["z"]), len(extension["y"]))
                                - shift_bound
                                - period
                                - 1
                            )
                            if not verify_periodic(extension, tmpl, ext_h).ok:
                                break
                        found.append(tmpl)
                        break
    return found


# ---------------------------------------------------------------------------
# T_Z systems
# ---------------------------------------------------------------------------


def tz_condition_holds(sys: SystemSpec, Z: dict[str, Sequence], steps: int) -> bool:
    """The multiplicative constraint: for each equation and every q, the
    product of Z over its slots with exponents (plus - minus) equals 1."""
    for idx, eq in enumerate(sys.equations()):
        nets: dict[Slot, int] = {}
        for slot, e in eq.plus.items():
            nets[slot] = nets.get(slot, 0) + e
        for slot, e in eq.minus.items():
            nets[slot] = nets.get(slot, 0) - e
        max_off = max((off for (_, off) in nets), default=0)
        for q in range(steps - max_off):
            prod = Fraction(1)
            for (seq, off), e in nets.items():
                prod *= Fraction(Z[seq][q + off]) ** e
            if prod != 1:
                return False
    return True


def check_TZ_condition(
    Z: dict[str, Sequence],
    sys: SystemSpec,
    initial: dict[str, Sequence] | None = None,
    steps: int = 12,
) -> bool:
    """Whether the monomial substitution into the Y-system solves it.

    Evaluates the product condition on the Z sequences and cross-checks it by
    iterating the TZ system, forming the plus/minus monomial ratio for each
    equation, and plugging the result into the extracted Y-system for `steps`
    values of q.  The two verdicts must agree (they do, by construction of the
    systems); disagreement raises.
    """
    if sys.kind not in ("T", "TZ"):
        raise QuiverError("check_TZ_condition needs a T- or TZ-kind system")
    tz = SystemSpec("TZ", sys.spec, sys.B0, sys.eq1, sys.eq2)
    need = required_window(tz)
    if initial is None:
        initial = {name: [Fraction(1)] * cnt for name, cnt in need.items()}
    # random Z breaks the exchange cancellations, so value sizes blow up
    # quickly: keep the iterated window as tight as the checks allow
    run = steps + 2 * sys.spec.n + 2
    seqs = iterate_system(tz, initial, run, Z=Z)

    def bar_sequence(eq: EquationSpec, count: int) -> list[Fraction]:
        out = []
        for q in range(count):
            v = Fraction(1)
            for slot, e in eq.plus.items():
                seq, off = slot
                v *= Fraction(seqs[seq][q + off]) ** e
            for slot, e in eq.minus.items():
                seq, off = slot
                v *= Fraction(seqs[seq][q + off]) ** (-e)
            out.append(v)
        return out

    count = steps + sys.spec.n + 1
    bars = {"z": bar_sequence(tz.eq1, count), "y": bar_sequence(tz.eq2, count)}
    ysys = extract_system(sys.B0, sys.spec, "Y")
    solves = True
    for eq in ysys.equations():
        (s0, o0), (s1, o1) = eq.lhs
        for q in range(steps):
            lhs = bars[s0][q + o0] * bars[s1][q + o1]
            num = Fraction(1)
            for (seq, off), e in eq.plus.items():
                num *= (1 + bars[seq][q + off]) ** e
            den = Fraction(1)
            for (seq, off), e in eq.minus.items():
                den *= (1 + 1 / bars[seq][q + off]) ** e
            if lhs != num / den:
                solves = False
                break
        if not solves:
            break
    cond = tz_condition_holds(sys, Z, steps + sys.spec.n + 1)
    if cond != solves:
        raise QuiverError(
            "internal inconsistency: Z-product condition and direct substitution disagree"
        )
    return solves
