"""Exact finite-dimensional Lie theory for sl(n+1) over the rationals.

Everything here is bit-exact: matrix entries, structure constants and form
values are `fractions.Fraction`; no floating point enters anywhere in the
package.  The module provides the traceless-matrix element type, the root
system of type A_n, invariant forms, parabolic decompositions with their
Sigma-height grading, and the mode-level bracket of the centrally extended
loop algebra.

Conventions
-----------
* Matrix indices are 1-based, matching the root labels eps_i - eps_j.
* The root vector attached to a positive root eps_i - eps_j (i < j) on the
  *opposite* side is the matrix unit E_{ji}; no Chevalley sign normalisation
  is imposed, signs are whatever matrix commutators give.
* The invariant form is the trace form (a, b) = tr(ab), which is the form
  normalised by (theta, theta) = 2 for sl(n+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Q = Fraction

#: largest supported rank; (n+1)^2 - 1 basis elements stay manageable below this.
MAX_RANK = 12


def as_scalar(x) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to an exact scalar."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


class LieElement:
    """A traceless (n+1)x(n+1) matrix with sparse exact entries.

    Immutable; safe to hash, share and use as a cache key.
    """

    __slots__ = ("n", "entries", "_hash")

    def __init__(self, n: int, entries: Mapping[tuple[int, int], Fraction] | None = None):
        if not 1 <= n <= MAX_RANK:
            raise ValueError(f"rank {n} outside supported range 1..{MAX_RANK}")
        clean: dict[tuple[int, int], Fraction] = {}
        size = n + 1
        trace = Fraction(0)
        for (i, j), c in (entries or {}).items():
            if not (1 <= i <= size and 1 <= j <= size):
                raise ValueError(f"index ({i},{j}) outside 1..{size}")
            c = as_scalar(c)
            if c == 0:
                continue
            clean[(i, j)] = c
            if i == j:
                trace += c
        if trace != 0:
            raise ValueError(f"matrix has nonzero trace {trace}")
        self.n = n
        self.entries = clean
        self._hash = None

    # -- value semantics -------------------------------------------------

    def key(self) -> tuple:
        return tuple(sorted((i, j, c.numerator, c.denominator)
                            for (i, j), c in self.entries.items()))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.key()))
        return self._hash

    def __eq__(self, other):
        return (isinstance(other, LieElement)
                and self.n == other.n and self.entries == other.entries)

    def __repr__(self):
        if not self.entries:
            return f"LieElement(sl({self.n + 1}), 0)"
        body = " + ".join(f"{c}*E{i}.{j}" for (i, j), c in sorted(self.entries.items()))
        return f"LieElement(sl({self.n + 1}), {body})"

    # -- arithmetic -------------------------------------------------------

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check_rank(other)
        out = dict(self.entries)
        for k, c in other.entries.items():
            s = out.get(k, Fraction(0)) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return _raw(self.n, out)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __neg__(self) -> "LieElement":
        return _raw(self.n, {k: -c for k, c in self.entries.items()})

    def scale(self, c) -> "LieElement":
        c = as_scalar(c)
        if c == 0:
            return _raw(self.n, {})
        return _raw(self.n, {k: c * v for k, v in self.entries.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def _check_rank(self, other: "LieElement"):
        if self.n != other.n:
            raise ValueError(f"rank mismatch: sl({self.n + 1}) vs sl({other.n + 1})")

    def matmul_entries(self, other: "LieElement") -> dict[tuple[int, int], Fraction]:
        """Sparse matrix product a*b as a raw entry dict (not traceless)."""
        self._check_rank(other)
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (i, j), c in other.entries.items():
            by_row.setdefault(i, []).append((j, c))
        out: dict[tuple[int, int], Fraction] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                s = out.get(key, Fraction(0)) + a * b
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return out


def _raw(n: int, entries: dict) -> LieElement:
    """Internal constructor skipping validation (entries already clean)."""
    el = LieElement.__new__(LieElement)
    el.n = n
    el.entries = entries
    el._hash = None
    return el


def zero(n: int) -> LieElement:
    return LieElement(n, {})


def matrix_unit(n: int, i: int, j: int) -> LieElement:
    """E_{ij} for i != j (off-diagonal units are traceless)."""
    if i == j:
        raise ValueError("diagonal matrix units are not traceless; use diag_element")
    return LieElement(n, {(i, j): Fraction(1)})


def diag_element(n: int, values: Iterable) -> LieElement:
    vals = [as_scalar(v) for v in values]
    if len(vals) != n + 1:
        raise ValueError(f"need {n + 1} diagonal values")
    return LieElement(n, {(i + 1, i + 1): v for i, v in enumerate(vals) if v != 0})


def cartan_h(n: int, i: int) -> LieElement:
    """Simple coroot H_i = E_{ii} - E_{i+1,i+1}."""
    if not 1 <= i <= n:
        raise ValueError(f"Cartan index {i} outside 1..{n}")
    return LieElement(n, {(i, i): Fraction(1), (i + 1, i + 1): Fraction(-1)})


def bracket(a: LieElement, b: LieElement) -> LieElement:
    """Matrix commutator [a, b] = ab - ba."""
    a._check_rank(b)
    out = a.matmul_entries(b)
    for k, c in b.matmul_entries(a).items():
        s = out.get(k, Fraction(0)) - c
        if s == 0:
            out.pop(k, None)
        else:
            out[k] = s
    return _raw(a.n, out)


def form(a: LieElement, b: LieElement) -> Fraction:
    """Trace form (a, b) = tr(ab); normalised so the highest root has norm 2."""
    a._check_rank(b)
    total = Fraction(0)
    for (i, j), c in a.entries.items():
        d = b.entries.get((j, i))
        if d is not None:
            total += c * d
    return total


@dataclass(frozen=True)
class Root:
    """The root eps_i - eps_j of sl(n+1); positive iff i < j."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("a root needs i != j")

    @property
    def positive(self) -> bool:
        return self.i < self.j

    def __neg__(self) -> "Root":
        return Root(self.j, self.i)

    def value_on(self, h: LieElement) -> Fraction:
        """alpha(h) for diagonal h."""
        return h.entry(self.i, self.i) - h.entry(self.j, self.j)

    def __repr__(self):
        return f"Root({self.i},{self.j})"


def all_roots(n: int) -> tuple[Root, ...]:
    size = n + 1
    return tuple(Root(i, j) for i in range(1, size + 1)
                 for j in range(1, size + 1) if i != j)


def root_vector(n: int, root: Root) -> LieElement:
    return matrix_unit(n, root.i, root.j)


@dataclass(frozen=True)
class SimpleAlgebra:
    """Basis data for sl(n+1): Cartan elements first, then matrix units."""

    n: int
    names: tuple[str, ...]
    basis: tuple[LieElement, ...]
    cartan: tuple[LieElement, ...]
    roots: tuple[Root, ...]
    theta: Root

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, name: str) -> LieElement:
        try:
            return self.basis[self.names.index(name)]
        except ValueError:
            raise KeyError(f"unknown basis name {name!r}") from None


def _canonical_basis(n: int) -> tuple[tuple[str, ...], tuple[LieElement, ...]]:
    names: list[str] = []
    elems: list[LieElement] = []
    for i in range(1, n + 1):
        names.append(f"H{i}")
        elems.append(cartan_h(n, i))
    for i in range(1, n + 2):
        for j in range(1, n + 2):
            if i != j:
                names.append(f"E{i}.{j}")
                elems.append(matrix_unit(n, i, j))
    return tuple(names), tuple(elems)


def build_sl(n: int) -> SimpleAlgebra:
    """Construct sl(n+1) with a deterministic basis ordering."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"rank must be a positive integer, got {n!r}")
    if n > MAX_RANK:
        raise ValueError(f"rank {n} exceeds supported maximum {MAX_RANK}")
    names, elems = _canonical_basis(n)
    cartan = elems[:n]
    return SimpleAlgebra(
        n=n,
        names=names,
        basis=elems,
        cartan=tuple(cartan),
        roots=all_roots(n),
        theta=Root(1, n + 1),
    )


def coords_in_basis(a: LieElement) -> dict[str, Fraction]:
    """Coordinates of a in the canonical basis {H_i} + {E_ij}.

    Diagonal parts use the partial-sum trick: diag(d_1..d_{n+1}) with zero sum
    equals sum_i (d_1 + ... + d_i) H_i.
    """
    out: dict[str, Fraction] = {}
    partial = Fraction(0)
    for i in range(1, a.n + 1):
        partial += a.entry(i, i)
        if partial != 0:
            out[f"H{i}"] = partial
    for (i, j), c in a.entries.items():
        if i != j:
            out[f"E{i}.{j}"] = c
    return out


def killing_form(a: LieElement, b: LieElement) -> Fraction:
    """tr(ad(a) ad(b)) computed over the canonical basis of sl(n+1)."""
    a._check_rank(b)
    names, elems = _canonical_basis(a.n)
    total = Fraction(0)
    for name, x in zip(names, elems):
        y = bracket(a, bracket(b, x))
        total += coords_in_basis(y).get(name, Fraction(0))
    return total


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve an exact linear system with full column rank; None if inconsistent.

    Gaussian elimination over Q; free columns (rank-deficient input) are set
    to zero, which keeps the answer deterministic.
    """
    m = [row[:] + [r] for row, r in zip(rows, rhs)]
    nrows = len(m)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, nrows) if m[k][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [v / inv for v in m[r]]
        for k in range(nrows):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [v - f * w for v, w in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for k in range(r, nrows):
        if m[k][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for row_idx, c in enumerate(pivots):
        sol[c] = m[row_idx][ncols]
    return sol


class ParabolicData:
    """A standard parabolic of sl(n+1) cut out by a set Sigma of simple roots.

    Carries the triangular decomposition g = ubar + l + u, the Sigma-height
    grading, the ordered enumeration of Delta(u) (lexicographic in
    (height, i, j)) with the matched bases {f_alpha} of ubar and {e_alpha}
    of u, and exact projections.
    """

    def __init__(self, n: int, sigma: Iterable[int] = ()):
        if not isinstance(n, int) or n < 1 or n > MAX_RANK:
            raise ValueError(f"rank must be in 1..{MAX_RANK}, got {n!r}")
        sig = frozenset(sigma)
        for s in sig:
            if not isinstance(s, int) or not 1 <= s <= n:
                raise ValueError(f"simple-root index {s!r} outside 1..{n}")
        self.n = n
        self.sigma = sig
        self.theta = Root(1, n + 1)

        self._ht: dict[Root, int] = {}
        for root in all_roots(n):
            lo, hi = (root.i, root.j) if root.positive else (root.j, root.i)
            h = sum(1 for r in range(lo, hi) if r not in sig)
            self._ht[root] = h if root.positive else -h
        self.depth_k = self._ht[self.theta]

        pos = [r for r in all_roots(n) if r.positive and self._ht[r] > 0]
        pos.sort(key=lambda r: (self._ht[r], r.i, r.j))
        self.delta_u: tuple[Root, ...] = tuple(pos)
        self.f_basis: tuple[LieElement, ...] = tuple(
            matrix_unit(n, r.j, r.i) for r in pos)
        self.e_basis: tuple[LieElement, ...] = tuple(
            matrix_unit(n, r.i, r.j) for r in pos)
        self._alpha_index = {r: k for k, r in enumerate(pos)}

        self.cartan: tuple[LieElement, ...] = tuple(cartan_h(n, i) for i in range(1, n + 1))
        levi_names = [f"H{i}" for i in range(1, n + 1)]
        levi = list(self.cartan)
        sig_pos = [r for r in all_roots(n) if r.positive and self._ht[r] == 0]
        sig_pos.sort(key=lambda r: (r.i, r.j))
        for r in sig_pos:
            levi_names.append(f"E{r.i}.{r.j}")
            levi.append(matrix_unit(n, r.i, r.j))
        for r in sig_pos:
            levi_names.append(f"E{r.j}.{r.i}")
            levi.append(matrix_unit(n, r.j, r.i))
        self.levi_basis: tuple[LieElement, ...] = tuple(levi)
        self.levi_names: tuple[str, ...] = tuple(levi_names)

        # center of the Levi: fundamental coweight-style elements, one per
        # simple root outside Sigma
        cb: list[LieElement] = []
        cb_names: list[str] = []
        for r in range(1, n + 1):
            if r not in sig:
                vals = [Fraction(1) - Fraction(r, n + 1)] * r + \
                       [Fraction(-r, n + 1)] * (n + 1 - r)
                cb.append(diag_element(n, vals))
                cb_names.append(f"w{r}")
        self.center_basis: tuple[LieElement, ...] = tuple(cb)
        self.center_names: tuple[str, ...] = tuple(cb_names)

        names, elems = _canonical_basis(n)
        self.homogeneous_basis: tuple[tuple[str, LieElement, int], ...] = tuple(
            (name, el, self.height_of(el)) for name, el in zip(names, elems))

        self._center_cache: dict[LieElement, tuple[Fraction, ...]] = {}

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, ParabolicData)
                and self.n == other.n and self.sigma == other.sigma)

    def __hash__(self):
        return hash((self.n, self.sigma))

    def __repr__(self):
        return f"ParabolicData(n={self.n}, sigma={sorted(self.sigma)})"

    @property
    def num_alpha(self) -> int:
        return len(self.delta_u)

    def alpha_index(self, root: Root) -> int:
        return self._alpha_index[root]

    def height(self, root: Root) -> int:
        return self._ht[root]

    def height_of(self, a: LieElement) -> int | None:
        """Sigma-height of a homogeneous element; None if mixed."""
        h: int | None = None
        for (i, j) in a.entries:
            hij = 0 if i == j else self._ht[Root(i, j)]
            if h is None:
                h = hij
            elif h != hij:
                return None
        return 0 if h is None else h

    # -- projections -------------------------------------------------------

    def project(self, a: LieElement, part: str) -> LieElement:
        """Component of a in ubar, l, u or p = l + u (entrywise by height)."""
        if a.n != self.n:
            raise ValueError("rank mismatch between element and parabolic data")
        if part not in ("ubar", "l", "u", "p"):
            raise ValueError(f"unknown part {part!r}")
        out = {}
        for (i, j), c in a.entries.items():
            h = 0 if i == j else self._ht[Root(i, j)]
            keep = ((part == "ubar" and h < 0)
                    or (part == "l" and h == 0)
                    or (part == "u" and h > 0)
                    or (part == "p" and h >= 0))
            if keep:
                out[(i, j)] = c
        return LieElement(self.n, out)

    def ubar_coords(self, a: LieElement) -> list[tuple[int, Fraction]]:
        """Decompose an element of ubar over the f-basis; (alpha index, coeff)."""
        out = []
        for (i, j), c in a.entries.items():
            if i == j or self._ht[Root(i, j)] >= 0:
                raise ValueError("element is not in ubar")
            out.append((self._alpha_index[Root(j, i)], c))
        out.sort()
        return out

    def cartan_coords(self, a: LieElement) -> tuple[Fraction, ...]:
        """Coordinates of the diagonal part of a over H_1..H_n (partial sums)."""
        coords = []
        partial = Fraction(0)
        for i in range(1, self.n + 1):
            partial += a.entry(i, i)
            coords.append(partial)
        return tuple(coords)

    def center_coords(self, a: LieElement) -> tuple[Fraction, ...]:
        """Coefficients of proj_{z(l)}(a) over the center basis.

        The Levi part of a splits as z(l) + [l,l]; root-vector entries and the
        Cartan piece spanned by coroots of Sigma are dropped.
        """
        al = self.project(a, "l")
        cached = self._center_cache.get(al)
        if cached is not None:
            return cached
        diag = [al.entry(i, i) for i in range(1, self.n + 2)]
        cols = list(self.center_basis) + [cartan_h(self.n, s) for s in sorted(self.sigma)]
        rows = [[col.entry(i, i) for col in cols] for i in range(1, self.n + 2)]
        sol = _solve_exact(rows, diag)
        if sol is None:
            raise ValueError("diagonal part not in the Levi Cartan (unreachable)")
        res = tuple(sol[:len(self.center_basis)])
        self._center_cache[al] = res
        return res

    def in_center(self, a: LieElement) -> bool:
        """True iff a lies in z(l) exactly."""
        if any(i != j for (i, j) in a.entries):
            return False
        coeffs = self.center_coords(a)
        rebuilt = zero(self.n)
        for c, b in zip(coeffs, self.center_basis):
            rebuilt = rebuilt + b.scale(c)
        return rebuilt == a

    def decompose_p(self, a: LieElement) -> tuple[tuple[str, LieElement, Fraction], ...]:
        """Split a p-element into canonical units: H_i's plus matrix units.

        Deterministic order: Cartan coordinates first, then off-diagonal
        units sorted by (i, j).  Raises if a has a ubar component.
        """
        if not self.project(a, "ubar").is_zero():
            raise ValueError("element has a component outside p")
        parts: list[tuple[str, LieElement, Fraction]] = []
        for idx, c in enumerate(self.cartan_coords(a)):
            if c != 0:
                parts.append((f"H{idx + 1}", self.cartan[idx], c))
        offdiag = sorted((i, j, c) for (i, j), c in a.entries.items() if i != j)
        for i, j, c in offdiag:
            parts.append((f"E{i}.{j}", matrix_unit(self.n, i, j), c))
        return tuple(parts)


def parabolic_decompose(n: int, sigma: Iterable[int] = ()) -> ParabolicData:
    return ParabolicData(n, sigma)


class LoopElement:
    """Finite sum of a_m = a (x) t^m plus a central coefficient."""

    __slots__ = ("n", "terms", "central")

    def __init__(self, n: int, terms: Mapping[int, LieElement] | None = None,
                 central: Fraction = Fraction(0)):
        self.n = n
        self.terms: dict[int, LieElement] = {}
        for m, el in (terms or {}).items():
            if el.n != n:
                raise ValueError("rank mismatch inside loop element")
            if not el.is_zero():
                self.terms[m] = el
        self.central = as_scalar(central)

    def __eq__(self, other):
        return (isinstance(other, LoopElement) and self.n == other.n
                and self.terms == other.terms and self.central == other.central)

    def __repr__(self):
        body = " + ".join(f"({el!r})_{m}" for m, el in sorted(self.terms.items()))
        if self.central:
            body = f"{body} + {self.central}*c" if body else f"{self.central}*c"
        return f"LoopElement({body or '0'})"

    def __add__(self, other: "LoopElement") -> "LoopElement":
        if self.n != other.n:
            raise ValueError("rank mismatch")
        terms = dict(self.terms)
        for m, el in other.terms.items():
            s = terms.get(m, zero(self.n)) + el
            if s.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = s
        return LoopElement(self.n, terms, self.central + other.central)

    def __neg__(self):
        return LoopElement(self.n, {m: -el for m, el in self.terms.items()}, -self.central)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LoopElement":
        c = as_scalar(c)
        return LoopElement(self.n, {m: el.scale(c) for m, el in self.terms.items()},
                           c * self.central)

    def is_zero(self) -> bool:
        return not self.terms and self.central == 0


def loop(a: LieElement, m: int) -> LoopElement:
    return LoopElement(a.n, {m: a})


def loop_central(n: int, kappa) -> LoopElement:
    return LoopElement(n, {}, as_scalar(kappa))


def loop_bracket(x: LoopElement, y: LoopElement) -> LoopElement:
    """[a_m, b_n] = [a,b]_{m+n} + m (a,b) delta_{m,-n} c, extended bilinearly."""
    if x.n != y.n:
        raise ValueError("rank mismatch")
    out = LoopElement(x.n)
    for m, a in x.terms.items():
        for n_, b in y.terms.items():
            out = out + loop(bracket(a, b), m + n_)
            if m == -n_ and m != 0:
                out = out + loop_central(x.n, Fraction(m) * form(a, b))
    return out
