"""Exchange matrices, quiver mutation, permutation action and periodicity predicates.

Vertices are numbered 1..n everywhere in the public interface; b[i][j] > 0 means
b[i][j] arrows from i to j.  All values are immutable and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

ONE_CYCLE = "1-cycle"
TWO_CYCLE = "2-cycle"


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n}, stored as the image tuple (image[i-1] = s(i))."""

    n: int
    image: tuple[int, ...]

    def __post_init__(self):
        if len(self.image) != self.n or sorted(self.image) != list(range(1, self.n + 1)):
            raise QuiverError(f"not a bijection of 1..{self.n}: {self.image}")

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, im in enumerate(self.image, start=1):
            inv[im - 1] = i
        return Permutation(self.n, tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(i) = self(other(i))."""
        if self.n != other.n:
            raise QuiverError("degree mismatch")
        return Permutation(self.n, tuple(self(other(i)) for i in range(1, self.n + 1)))

    def __pow__(self, exp: int) -> "Permutation":
        base = self if exp >= 0 else self.inverse()
        result = Permutation.identity(self.n)
        for _ in range(abs(exp)):
            result = base.compose(result)
        return result

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(n, tuple(range(1, n + 1)))

    @staticmethod
    def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        image = list(range(1, n + 1))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + type(cycle)([cycle[0]])):
                image[a - 1] = b
        return Permutation(n, tuple(image))

    @staticmethod
    def rotation(n: int) -> "Permutation":
        """The full cycle (1,2,...,n)."""
        return Permutation.from_cycles(n, [list(range(1, n + 1))])


@dataclass(frozen=True)
class ExchangeMatrix:
    """Skew-symmetric integer matrix of signed arrow counts."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        for i in range(n):
            if len(self.rows[i]) != n:
                raise QuiverError("matrix is not square")
            if self.rows[i][i] != 0:
                raise QuiverError(f"diagonal entry b[{i + 1}][{i + 1}] is nonzero")
            for j in range(i + 1, n):
                if self.rows[i][j] != -self.rows[j][i]:
                    raise QuiverError(
                        f"not skew-symmetric at ({i + 1},{j + 1}): "
                        f"{self.rows[i][j]} vs {self.rows[j][i]}"
                    )

    @property
    def n(self) -> int:
        return len(self.rows)

    def b(self, i: int, j: int) -> int:
        """Entry b[i][j], 1-based."""
        return self.rows[i - 1][j - 1]

    def first_row(self) -> tuple[int, ...]:
        """(b[1][2], ..., b[1][n])."""
        return self.rows[0][1:]

    def flatten(self) -> tuple[int, ...]:
        return tuple(x for row in self.rows for x in row)

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "ExchangeMatrix":
        return ExchangeMatrix(tuple(tuple(int(x) for x in row) for row in rows))

    @staticmethod
    def zero(n: int) -> "ExchangeMatrix":
        return ExchangeMatrix(tuple((0,) * n for _ in range(n)))

    @staticmethod
    def from_entries(n: int, entries: dict[tuple[int, int], int]) -> "ExchangeMatrix":
        """Build from (i, j) -> b[i][j] for i < j; skew-symmetry fills the rest."""
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in entries.items():
            if not (1 <= i < j <= n):
                raise QuiverError(f"bad entry index ({i},{j})")
            rows[i - 1][j - 1] = int(v)
            rows[j - 1][i - 1] = -int(v)
        return ExchangeMatrix.from_rows(rows)

    def __str__(self):
        width = max(len(str(x)) for row in self.rows for x in row)
        return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in self.rows)


@dataclass(frozen=True)
class Period2Spec:
    """One defining equation sigma mu_k mu_1 (Q) = Q.

    shape "1-cycle" takes sigma = (1,2,...,n); shape "2-cycle" takes
    sigma = (1,...,k-1)(k,...,n).  Any 2 <= k <= n is a valid equation; the
    canonical search range of the classification (k <= floor((n+1)/2), resp.
    floor((n+2)/2)) is exposed via in_canonical_range().
    """

    n: int
    shape: str
    k: int

    def __post_init__(self):
        if self.shape not in (ONE_CYCLE, TWO_CYCLE):
            raise QuiverError(f"unknown shape {self.shape!r}")
        if not 2 <= self.k <= self.n:
            raise QuiverError(f"k={self.k} out of range for n={self.n}")

    def sigma(self) -> Permutation:
        if self.shape == ONE_CYCLE:
            return Permutation.rotation(self.n)
        return Permutation.from_cycles(
            self.n, [list(range(1, self.k)), list(range(self.k, self.n + 1))]
        )

    def nu(self) -> Permutation:
        """The inverse of sigma; drives the mutation-point bookkeeping."""
        return self.sigma().inverse()

    def in_canonical_range(self) -> bool:
        if self.shape == ONE_CYCLE:
            return 2 <= self.k <= (self.n + 1) // 2
        return 2 <= self.k <= (self.n + 2) // 2

    def partner_k(self) -> int:
        """Second mutation vertex of the mu_1-companion equation."""
        return self.n - self.k + 1 if self.shape == ONE_CYCLE else self.n - self.k + 2


def epsilon(B: ExchangeMatrix, i: int, j: int, l: int) -> int:
    """(|b[i][j]| b[j][l] + b[i][j] |b[j][l]|) / 2, always an integer."""
    n = B.n
    for v in (i, j, l):
        if not 1 <= v <= n:
            raise QuiverError(f"vertex {v} out of range 1..{n}")
    a, c = B.b(i, j), B.b(j, l)
    return (abs(a) * c + a * abs(c)) // 2


def mutate(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Quiver mutation at vertex k.

    b'[i][j] = -b[i][j] when i = k or j = k, otherwise
    b[i][j] + (|b[i][k]| b[k][j] + b[i][k] |b[k][j]|) / 2.
    """
    n = B.n
    if not 1 <= k <= n:
        raise QuiverError(f"vertex {k} out of range 1..{n}")
    k0 = k - 1
    old = B.rows
    rows = []
    for i in range(n):
        bik = old[i][k0]
        if i == k0:
            rows.append(tuple(-x for x in old[i]))
            continue
        row = list(old[i])
        for j in range(n):
            if j == k0:
                row[j] = -row[j]
            else:
                bkj = old[k0][j]
                row[j] += (abs(bik) * bkj + bik * abs(bkj)) // 2
        rows.append(tuple(row))
    return ExchangeMatrix(tuple(rows))


def permute(B: ExchangeMatrix, s: Permutation) -> ExchangeMatrix:
    """Relabel vertices: the result C satisfies C[s(i)][s(j)] = B[i][j]."""
    if B.n != s.n:
        raise QuiverError(f"degree mismatch: matrix {B.n}, permutation {s.n}")
    n = B.n
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        si = s(i) - 1
        for j in range(1, n + 1):
            rows[si][s(j) - 1] = B.rows[i - 1][j - 1]
    return ExchangeMatrix(tuple(tuple(r) for r in rows))


def is_period1(B: ExchangeMatrix) -> bool:
    """Whether rho mu_1 (Q) = Q for rho = (1,2,...,n)."""
    return permute(mutate(B, 1), Permutation.rotation(B.n)) == B


def is_period2(B: ExchangeMatrix, spec: Period2Spec) -> bool:
    """Whether sigma mu_k mu_1 (Q) = Q for the given sigma-shape and k."""
    if B.n != spec.n:
        raise QuiverError(f"degree mismatch: matrix {B.n}, spec {spec.n}")
    return permute(mutate(mutate(B, 1), spec.k), spec.sigma()) == B


def period1_from_row(row: Sequence[int]) -> ExchangeMatrix:
    """The unique mutation-periodic matrix with the given first row (b[1][2..n]).

    The row must be palindromic (row[j] = row[n+2-j] in b[1][j] indexing); the
    remaining entries b[i][j] for i > j are b[i-j+1][1] + sum_{m=2..j} of the
    epsilon correction built from first-row entries only.  That fill produces a
    quiver periodic under the inverse relabeling; conjugating by the reversal
    fixing vertex 1 (i -> n+2-i) converts it to the permute() convention used
    throughout, without touching the (palindromic) first row.
    """
    row = tuple(int(x) for x in row)
    n = len(row) + 1
    for j in range(2, n + 1):
        # row index t holds b[1][t+1]
        if row[j - 2] != row[n - j]:
            raise QuiverError(
                f"first row is not palindromic: b[1][{j}]={row[j - 2]} "
                f"!= b[1][{n + 2 - j}]={row[n - j]}"
            )
    b1 = {j: row[j - 2] for j in range(2, n + 1)}  # b[1][j]

    def eps_row(m: int, l: int) -> int:
        a, c = -b1[m], b1[l]
        return (abs(a) * c + a * abs(c)) // 2

    rows = [[0] * n for _ in range(n)]
    for j in range(2, n + 1):
        rows[0][j - 1] = b1[j]
        rows[j - 1][0] = -b1[j]
    for j in range(2, n):
        for i in range(j + 1, n + 1):
            v = -b1[i - j + 1] + sum(eps_row(m, i - j + m) for m in range(2, j + 1))
            rows[i - 1][j - 1] = v
            rows[j - 1][i - 1] = -v
    filled = ExchangeMatrix.from_rows(rows)
    reversal = Permutation(n, tuple([1] + [n + 2 - i for i in range(2, n + 1)]))
    return permute(filled, reversal)


def mu1_partner(
    B: ExchangeMatrix, spec: Period2Spec
) -> tuple[ExchangeMatrix, Period2Spec]:
    """Mutate at 1 and relabel so the companion solves its own period-2 equation.

    For the one-cycle shape the relabeling is the inverse of i -> i+k-1 (mod n)
    and the companion equation has k' = n-k+1; for the two-cycle shape a second
    relabeling inside the cycle (n-k+2,...,n) moves the mutation vertex to
    n-k+2, giving k' = n-k+2.
    """
    if not is_period2(B, spec):
        raise QuiverError("input does not satisfy its period-2 equation")
    n, k = spec.n, spec.k
    Bp = mutate(B, 1)
    shift_inv = Permutation(n, tuple((i - (k - 1) - 1) % n + 1 for i in range(1, n + 1)))
    if spec.shape == ONE_CYCLE:
        B2 = permute(Bp, shift_inv)
        spec2 = Period2Spec(n, ONE_CYCLE, n - k + 1)
    else:
        kp = n - k + 2
        image = list(range(1, n + 1))
        for i in range(kp, n):
            image[i - 1] = i + 1
        image[n - 1] = kp
        second_cycle = Permutation(n, tuple(image))
        B2 = permute(permute(Bp, shift_inv), second_cycle)
        spec2 = Period2Spec(n, TWO_CYCLE, kp)
    if not is_period2(B2, spec2):
        raise QuiverError("internal error: companion fails its period-2 equation")
    return B2, spec2


def is_connected(B: ExchangeMatrix) -> bool:
    """Connectivity of the underlying undirected graph (edge iff b[i][j] != 0)."""
    n = B.n
    if n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j not in seen and B.rows[i][j] != 0:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def find_relabeling(A: ExchangeMatrix, B: ExchangeMatrix) -> Permutation | None:
    """A permutation s with permute(A, s) == B, or None.  Exhaustive over n!."""
    from itertools import permutations as iterperms

    if A.n != B.n:
        return None
    for image in iterperms(range(1, A.n + 1)):
        s = Permutation(A.n, image)
        if permute(A, s) == B:
            return s
    return None
