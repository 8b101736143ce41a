"""Free field realization of the affine algebra on Fock states.

For a parabolic decomposition of sl(n+1) and an inducing module V, every
Sigma-homogeneous element a and mode m gets a finite normal-ordered operator
pi(a_m) acting on polynomial Fock states tensored with V.  Two engines build
these operators:

* the general engine expands the exponential-adjoint series

      pi(a(z)) = -sum_alpha a_alpha(z) [ F(ad u(z)) (exp(-ad u(z)) a)_ubar ]_alpha
                 + (exp(-ad u(z)) a)_p
                 - ( G(ad u(z)) d_z u(z), a ) c,

  with F(x) = x e^x/(e^x - 1), G(x) = (e^x - 1)/x and u(z) the tautological
  ubar-valued series; every series truncates exactly by grading nilpotency.
* the closed-form engine transcribes the explicit generator formulas that are
  available for the maximal parabolic with abelian nilradical (and hence for
  the rank-one Borel case).

A normal-ordered term keeps its annihilator modes symbolic and only the
matches against the finitely many variables of a state are enumerated, so
applying an operator is always a finite exact computation.

Normal ordering is fixed as "annihilators act first"; the D-part creator mode
is m plus the sum of the annihilator modes, the Levi head acts on the V-factor
at that same combined mode, and the central part constrains the annihilator
modes to sum to -m with a linear weight on the differentiated slot.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from math import factorial

from .fock import FockState, mono_from_pairs, mono_mul_var
from .formal_dist import LaurentPoly
from .lie import (
    LieElement,
    ParabolicData,
    as_scalar,
    bracket,
    coords_in_basis,
    form,
)

Q = Fraction

BERNOULLI_BOUND = 32


class _CentralElement:
    """Sentinel for the central element of the affine algebra."""

    __slots__ = ()

    def __repr__(self):
        return "c"


CENTRAL = _CentralElement()

_bernoulli_cache: list[Fraction] = [Q(1)]


def bernoulli(k: int, bound: int = BERNOULLI_BOUND) -> Fraction:
    """Bernoulli number B_k in the convention with B_1 = -1/2.

    Computed from the defining recurrence sum_{j<=k} C(k+1, j) B_j = 0.
    """
    if k < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    if k > bound:
        raise ValueError(f"Bernoulli index {k} exceeds configured bound {bound}")
    while len(_bernoulli_cache) <= k:
        r = len(_bernoulli_cache)
        acc = Q(0)
        for j in range(r):
            acc += _binom(r + 1, j) * _bernoulli_cache[j]
        _bernoulli_cache.append(-acc / (r + 1))
    return _bernoulli_cache[k]


def _binom(a: int, b: int) -> Fraction:
    return Q(factorial(a), factorial(b) * factorial(a - b))


def _coeff_flow(j: int) -> Fraction:
    """Coefficient of x^j in x e^x / (e^x - 1), i.e. (-1)^j B_j / j!."""
    return Q((-1) ** j) * bernoulli(j) / factorial(j)


def _coeff_exp_neg(j: int) -> Fraction:
    return Q((-1) ** j, factorial(j))


def _coeff_g(j: int) -> Fraction:
    """Coefficient of x^j in (e^x - 1)/x."""
    return Q(1, factorial(j + 1))


@dataclass(frozen=True)
class SeriesTerm:
    """coefficient * x_{w_1} ... x_{w_r} * (ad f_{w_r} o ... o ad f_{w_1})(base)."""

    word: tuple[int, ...]
    base: LieElement
    coeff: Fraction


def _ad_levels(pd: ParabolicData, base: LieElement) -> list[list[tuple[tuple[int, ...], LieElement]]]:
    """Iterated adjoint words of the f-basis applied to base, by word length.

    Terminates by grading nilpotency; the hard cap 2*depth_k + 2 is asserted
    never to be reached with surviving terms.
    """
    cap = 2 * pd.depth_k + 2
    levels: list[list[tuple[tuple[int, ...], LieElement]]] = []
    current = [((), base)] if not base.is_zero() else []
    levels.append(current)
    while levels[-1]:
        if len(levels) > cap:
            raise AssertionError("adjoint series failed to truncate (grading bug)")
        nxt = []
        for word, x in levels[-1]:
            for beta, f in enumerate(pd.f_basis):
                y = bracket(f, x)
                if not y.is_zero():
                    nxt.append((word + (beta,), y))
        levels.append(nxt)
    return levels


def series_expand(pd: ParabolicData, a: LieElement, kind: str) -> list[SeriesTerm]:
    """Exact finite expansion of the D / A / C summand for homogeneous a.

    D returns the ubar-valued series F(ad u)((exp(-ad u) a)_ubar) before the
    overall minus sign of the assembled operator; A returns the p-projected
    exponential series; C returns the scalar-paired central series, with the
    differentiated slot first in each word.
    """
    if a.n != pd.n:
        raise ValueError("rank mismatch")
    if pd.height_of(a) is None:
        raise ValueError("series expansion needs a Sigma-homogeneous element")
    out: list[SeriesTerm] = []
    if kind == "D":
        for i, level in enumerate(_ad_levels(pd, a)):
            c1 = _coeff_exp_neg(i)
            for word1, x in level:
                x_ubar = pd.project(x, "ubar")
                if x_ubar.is_zero():
                    continue
                for j, level2 in enumerate(_ad_levels(pd, x_ubar)):
                    c2 = _coeff_flow(j)
                    if c2 == 0:
                        continue
                    for word2, y in level2:
                        out.append(SeriesTerm(word1 + word2, y, c1 * c2))
    elif kind == "A":
        for i, level in enumerate(_ad_levels(pd, a)):
            c = _coeff_exp_neg(i)
            for word, x in level:
                xp = pd.project(x, "p")
                if not xp.is_zero():
                    out.append(SeriesTerm(word, xp, c))
    elif kind == "C":
        # The scalar correction picked up when conjugating a mode series by
        # exp(ad u) is exactly this G-weighted pairing against d_z u; it is
        # assembled as the operator's central summand, never as a separate
        # operation.  The slot written first is the differentiated one.
        for beta0 in range(pd.num_alpha):
            for j, level in enumerate(_ad_levels(pd, pd.f_basis[beta0])):
                c = _coeff_g(j)
                for word, x in level:
                    pairing = form(x, a)
                    if pairing != 0:
                        out.append(SeriesTerm((beta0,) + word, x, c * pairing))
    else:
        raise ValueError(f"unknown series kind {kind!r}")
    return _merge_series(out)


def _merge_series(terms: list[SeriesTerm]) -> list[SeriesTerm]:
    merged: dict[tuple, tuple] = {}
    for t in terms:
        key = (t.word, t.base.key())
        prev = merged.get(key)
        merged[key] = (t.word, t.base, t.coeff if prev is None else prev[2] + t.coeff)
    out = [SeriesTerm(w, b, c) for w, b, c in merged.values() if c != 0]
    out.sort(key=lambda t: (len(t.word), t.word, t.base.key()))
    return out


@dataclass(frozen=True)
class ModeExpr:
    """base + sum of the modes of the referenced annihilator slots."""

    base: int
    slots: tuple[int, ...]

    def resolve(self, modes) -> int:
        return self.base + sum(modes[s] for s in self.slots)

    def render(self) -> str:
        return " + ".join([str(self.base)] + [f"n{s}" for s in self.slots])


@dataclass(frozen=True)
class Term:
    """One normal-ordered summand: annihilators (right) then a head (left).

    `annihilators` lists the variable family of each slot; slot modes are free
    summation variables.  `mode_factor` names the slot whose mode multiplies
    the coefficient (the differentiated slot of central terms), and
    `constraint_sum` fixes the total of all slot modes (central terms only).
    """

    coeff: Fraction
    annihilators: tuple[int, ...]
    head_kind: str  # "create" | "levi" | "central" | "id"
    head_alpha: int | None = None
    head_elem: LieElement | None = None
    head_name: str | None = None
    head_mode: ModeExpr | None = None
    mode_factor: int | None = None
    constraint_sum: int | None = None

    def render(self) -> str:
        bits = [str(self.coeff)]
        if self.mode_factor is not None:
            bits.append(f"n{self.mode_factor}")
        bits.extend(f"x({a},n{i})" for i, a in enumerate(self.annihilators))
        if self.head_kind == "create":
            bits.append(f"b({self.head_alpha}, {self.head_mode.render()})")
        elif self.head_kind == "levi":
            bits.append(f"{self.head_name}({self.head_mode.render()})")
        elif self.head_kind == "central":
            bits.append("kappa")
        else:
            bits.append("1")
        text = " * ".join(bits)
        if self.constraint_sum is not None:
            text += f" [sum n = {self.constraint_sum}]"
        return text


@dataclass(frozen=True)
class NormalOrderedOperator:
    terms: tuple[Term, ...]
    provenance: str

    def render(self) -> str:
        return "\n".join(t.render() for t in self.terms)

    def with_flipped_term(self, index: int) -> "NormalOrderedOperator":
        """Negative-control helper: negate one term's coefficient."""
        terms = list(self.terms)
        terms[index] = replace(terms[index], coeff=-terms[index].coeff)
        return NormalOrderedOperator(tuple(terms), self.provenance + "+flip")


def _canonical_terms(pd: ParabolicData, raw: list[Term]) -> tuple[Term, ...]:
    """Canonical form: Levi heads split into basis units, slots sorted,
    identical patterns merged, deterministic final order."""
    expanded: list[Term] = []
    for t in raw:
        if t.coeff == 0:
            continue
        if t.head_kind == "levi":
            for name, unit, c in pd.decompose_p(t.head_elem):
                expanded.append(replace(t, coeff=t.coeff * c, head_elem=unit,
                                        head_name=name))
        else:
            expanded.append(t)

    merged: dict[tuple, tuple[Term, Fraction]] = {}
    for t in expanded:
        r = len(t.annihilators)
        order = sorted(range(r),
                       key=lambda s: (t.annihilators[s],
                                      0 if s == t.mode_factor else 1, s))
        annih = tuple(t.annihilators[s] for s in order)
        mode_factor = order.index(t.mode_factor) if t.mode_factor is not None else None
        head_mode = t.head_mode
        if head_mode is not None:
            if set(head_mode.slots) != set(range(r)):
                raise AssertionError("mode expressions must cover every slot")
            head_mode = ModeExpr(head_mode.base, tuple(range(r)))
        t = replace(t, annihilators=annih, mode_factor=mode_factor,
                    head_mode=head_mode)
        key = (annih, t.head_kind, t.head_alpha,
               t.head_elem.key() if t.head_elem is not None else None,
               (head_mode.base, head_mode.slots) if head_mode is not None else None,
               mode_factor, t.constraint_sum)
        prev = merged.get(key)
        if prev is None:
            merged[key] = (t, t.coeff)
        else:
            merged[key] = (prev[0], prev[1] + t.coeff)

    final = []
    for key in sorted(merged, key=_term_sort_key):
        t, coeff = merged[key]
        if coeff != 0:
            final.append(replace(t, coeff=coeff))
    return tuple(final)


_HEAD_RANK = {"create": 0, "levi": 1, "central": 2, "id": 3}


def _term_sort_key(key):
    annih, kind, alpha, elem_key, mode, mf, constraint = key
    return (len(annih), _HEAD_RANK[kind],
            -1 if alpha is None else alpha,
            elem_key or (), annih, mode or (0, ()),
            -1 if mf is None else mf,
            0 if constraint is None else constraint)


def build_operator_general(pd: ParabolicData, a: LieElement, m: int,
                           ) -> NormalOrderedOperator:
    """Assemble pi(a_m) from the exponential-adjoint series."""
    raw: list[Term] = []
    for st in series_expand(pd, a, "D"):
        r = len(st.word)
        expr = ModeExpr(m, tuple(range(r)))
        for alpha, c_alpha in pd.ubar_coords(st.base):
            raw.append(Term(coeff=-st.coeff * c_alpha, annihilators=st.word,
                            head_kind="create", head_alpha=alpha, head_mode=expr))
    for st in series_expand(pd, a, "A"):
        r = len(st.word)
        raw.append(Term(coeff=st.coeff, annihilators=st.word, head_kind="levi",
                        head_elem=st.base, head_mode=ModeExpr(m, tuple(range(r)))))
    for st in series_expand(pd, a, "C"):
        raw.append(Term(coeff=-st.coeff, annihilators=st.word,
                        head_kind="central", mode_factor=0, constraint_sum=-m))
    return NormalOrderedOperator(_canonical_terms(pd, raw), "general")


def _is_max_parabolic(pd: ParabolicData) -> bool:
    return pd.sigma == frozenset(range(2, pd.n + 1))


def build_operator_explicit_sl(pd: ParabolicData, a: LieElement, m: int,
                               ) -> NormalOrderedOperator:
    """Transcribe the closed generator formulas of the abelian-nilradical case.

    Requires the maximal parabolic omitting the first simple root (which for
    n = 1 is the Borel case).  Any homogeneous element is handled by linear
    decomposition into the f_i / h / h_A / e_i generator family.
    """
    if not _is_max_parabolic(pd):
        raise ValueError("closed-form engine needs sigma = {2..n}")
    if pd.height_of(a) is None:
        raise ValueError("closed-form engine needs a Sigma-homogeneous element")
    n = pd.n
    raw: list[Term] = []

    for alpha, c in pd.ubar_coords(pd.project(a, "ubar")):
        raw.append(Term(coeff=-c, annihilators=(), head_kind="create",
                        head_alpha=alpha, head_mode=ModeExpr(m, ())))

    a_l = pd.project(a, "l")
    if not a_l.is_zero():
        gamma = a_l.entry(1, 1)
        if gamma != 0:
            for j in range(n):
                raw.append(Term(coeff=gamma * (1 + Q(1, n)), annihilators=(j,),
                                head_kind="create", head_alpha=j,
                                head_mode=ModeExpr(m, (0,))))
        for r in range(1, n + 1):
            for s in range(1, n + 1):
                val = a_l.entry(r + 1, s + 1)
                if r == s:
                    val += gamma / n
                if val != 0:
                    raw.append(Term(coeff=-val, annihilators=(s - 1,),
                                    head_kind="create", head_alpha=r - 1,
                                    head_mode=ModeExpr(m, (0,))))
        raw.append(Term(coeff=Q(1), annihilators=(), head_kind="levi",
                        head_elem=a_l, head_mode=ModeExpr(m, ())))

    a_u = pd.project(a, "u")
    if not a_u.is_zero():
        h_elem = _max_parabolic_h(n)
        for i in range(1, n + 1):
            c = a_u.entry(1, i + 1)
            if c == 0:
                continue
            for j in range(n):
                raw.append(Term(coeff=c, annihilators=(i - 1, j),
                                head_kind="create", head_alpha=j,
                                head_mode=ModeExpr(m, (0, 1))))
            raw.append(Term(coeff=-c, annihilators=(i - 1,), head_kind="central",
                            mode_factor=0, constraint_sum=-m))
            raw.append(Term(coeff=c, annihilators=(i - 1,), head_kind="levi",
                            head_elem=h_elem, head_mode=ModeExpr(m, (0,))))
            for j in range(1, n + 1):
                block = _block_unit_minus_trace(n, j, i)
                if not block.is_zero():
                    raw.append(Term(coeff=-c, annihilators=(j - 1,),
                                    head_kind="levi", head_elem=block,
                                    head_mode=ModeExpr(m, (0,))))
            raw.append(Term(coeff=c, annihilators=(), head_kind="levi",
                            head_elem=pd.e_basis[i - 1], head_mode=ModeExpr(m, ())))

    return NormalOrderedOperator(_canonical_terms(pd, raw), "explicit_sl")


def _max_parabolic_h(n: int) -> LieElement:
    entries = {(1, 1): Q(1)}
    for s in range(2, n + 2):
        entries[(s, s)] = Q(-1, n)
    return LieElement(n, entries)


def _block_unit_minus_trace(n: int, j: int, i: int) -> LieElement:
    """Levi element with Levi-block matrix E_{ji} - delta_{ij} (1/n) I_n."""
    entries: dict[tuple[int, int], Fraction] = {}
    entries[(j + 1, i + 1)] = entries.get((j + 1, i + 1), Q(0)) + 1
    if i == j:
        for s in range(2, n + 2):
            entries[(s, s)] = entries.get((s, s), Q(0)) - Q(1, n)
    return LieElement(n, entries)


# --- applying operators to states ------------------------------------------------

def apply_operator(op: NormalOrderedOperator, state: FockState, module,
                   ) -> FockState:
    """Evaluate a normal-ordered operator on a state, exactly and finitely.

    For each state monomial, annihilator slots are matched against the
    variables actually present (ordered assignments, each contributing a
    factor of minus the running exponent), the central constraint filters the
    mode tuple, and the head then acts: create a variable, act on the V-factor
    through the inducing module, or scale by the level.
    """
    out: dict = {}
    kappa = module.level
    for (mono, vidx), cstate in state.terms.items():
        var_exp: dict[tuple[int, int], int] = {(a, n): e for a, n, e in mono}
        fam: dict[int, list[int]] = {}
        for a, n, _e in mono:
            fam.setdefault(a, []).append(n)
        for term in op.terms:
            _eval_term(term, var_exp, fam, vidx, cstate, kappa, module, out, mono)
    st = FockState.__new__(FockState)
    st.terms = out
    return st


def _eval_term(term: Term, var_exp, fam, vidx, cstate, kappa, module, out, mono):
    slots = term.annihilators
    r = len(slots)
    modes = [0] * r

    def emit(acc: int):
        if term.constraint_sum is not None and sum(modes) != term.constraint_sum:
            return
        if term.mode_factor is not None:
            nf = modes[term.mode_factor]
            if nf == 0:
                return
            acc *= nf
        f = term.coeff * acc
        rem = mono if r == 0 else tuple(
            sorted((a, n, e) for (a, n), e in var_exp.items() if e > 0))
        kind = term.head_kind
        if kind == "create":
            mode = term.head_mode.resolve(modes)
            key = (mono_mul_var(rem, term.head_alpha, mode), vidx)
            s = out.get(key, Q(0)) + f * cstate
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        elif kind == "levi":
            mode = term.head_mode.resolve(modes)
            for w, d in module.act(term.head_elem, mode, vidx).items():
                key = (rem, w)
                s = out.get(key, Q(0)) + f * cstate * d
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        elif kind == "central":
            if kappa != 0:
                key = (rem, vidx)
                s = out.get(key, Q(0)) + f * cstate * kappa
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        else:
            key = (rem, vidx)
            s = out.get(key, Q(0)) + f * cstate
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s

    def rec(i: int, acc: int):
        if i == r:
            emit(acc)
            return
        alpha = slots[i]
        for nmode in fam.get(alpha, ()):
            e = var_exp[(alpha, nmode)]
            if e == 0:
                continue
            modes[i] = nmode
            var_exp[(alpha, nmode)] = e - 1
            rec(i + 1, acc * -e)
            var_exp[(alpha, nmode)] = e

    rec(0, 1)


def instantiate_operator(op: NormalOrderedOperator, window: int,
                         ) -> dict[tuple, Fraction]:
    """Expand symbolic terms over a concrete mode window, as a coefficient map.

    Keys are (sorted (alpha, mode) annihilator multiset, head descriptor);
    equal maps mean the operators agree on every state supported in the
    window.  Used for structural comparisons.
    """
    out: dict[tuple, Fraction] = {}
    for term in op.terms:
        r = len(term.annihilators)
        for modes in product(range(-window, window + 1), repeat=r):
            if term.constraint_sum is not None and sum(modes) != term.constraint_sum:
                continue
            coeff = term.coeff
            if term.mode_factor is not None:
                coeff *= modes[term.mode_factor]
            if coeff == 0:
                continue
            annih = tuple(sorted(zip(term.annihilators, modes)))
            if term.head_kind == "create":
                head = ("create", term.head_alpha, term.head_mode.resolve(modes))
            elif term.head_kind == "levi":
                head = ("levi", term.head_elem.key(), term.head_mode.resolve(modes))
            elif term.head_kind == "central":
                head = ("central",)
            else:
                head = ("id",)
            key = (annih, head)
            s = out.get(key, Q(0)) + coeff
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
    return out


# --- the realization ----------------------------------------------------------------

class Realization:
    """pi for a fixed parabolic, inducing module and engine, with caching.

    Operators depend only on (element, mode, parabolic, engine); the cache is
    a value-immutable memo table, so duplicate construction under concurrency
    would be harmless.  `operator_hook` post-processes built operators and is
    meant for negative controls; it bypasses the cache.
    """

    def __init__(self, pd: ParabolicData, module, engine: str = "general",
                 operator_hook=None):
        if module.pd != pd:
            raise ValueError("module was built for a different parabolic")
        if engine not in ("general", "explicit"):
            raise ValueError(f"unknown engine {engine!r}")
        if engine == "explicit" and not _is_max_parabolic(pd):
            raise ValueError("closed-form engine needs sigma = {2..n}")
        self.pd = pd
        self.module = module
        self.engine = engine
        self.operator_hook = operator_hook
        self._cache: dict[tuple[LieElement, int], NormalOrderedOperator] = {}

    def operator(self, a: LieElement, m: int) -> NormalOrderedOperator:
        key = (a, m)
        op = self._cache.get(key)
        if op is not None:
            return op
        if self.engine == "general":
            op = build_operator_general(self.pd, a, m)
        else:
            op = build_operator_explicit_sl(self.pd, a, m)
        if self.operator_hook is not None:
            return self.operator_hook(a, m, op)
        self._cache[key] = op
        return op

    def act(self, a, m: int, state: FockState) -> FockState:
        """pi(a_m) state; the central sentinel acts by the level."""
        if a is CENTRAL:
            return state.scale(self.module.level)
        if a.is_zero():
            return FockState.zero()
        return apply_operator(self.operator(a, m), state, self.module)

    def act_laurent(self, a, g: LaurentPoly, state: FockState) -> FockState:
        """pi(a (x) g(t)) state for a Laurent polynomial g."""
        out = FockState.zero()
        for mode, c in g.coeffs.items():
            out = out + self.act(a, mode, state).scale(c)
        return out

    def check_bracket(self, a, b, m: int, n: int, state: FockState,
                      ) -> tuple[bool, FockState]:
        """Residual of the bracket relation on a state; (passed, witness)."""
        left = (self.act(a, m, self.act(b, n, state))
                - self.act(b, n, self.act(a, m, state)))
        if a is CENTRAL or b is CENTRAL:
            residual = left
        else:
            residual = left - self.act(bracket(a, b), m + n, state)
            if m == -n and m != 0:
                pairing = form(a, b)
                if pairing != 0:
                    residual = residual - state.scale(
                        Q(m) * pairing * self.module.level)
        return residual.is_zero(), residual

    def vacuum_expected(self, a: LieElement, m: int, v_index: int = 0) -> FockState:
        """1 (x) sigma(a_m) v, the required value of pi(a_m) on the vacuum."""
        return FockState({((), w): c
                          for w, c in self.module.act(a, m, v_index).items()})

    def pbw_leading_check(self, seq) -> bool:
        """Apply pi(f^{g_1}) ... pi(f^{g_r}) to the vacuum and compare the top
        filtration layer with (-1)^r times the plain product of the matching
        creation polynomials."""
        seq = list(seq)
        state = FockState.vacuum(0)
        for alpha, g in reversed(seq):
            state = self.act_laurent(self.pd.f_basis[alpha], g, state)
        expected: dict = {((), 0): Q((-1) ** len(seq))}
        for alpha, g in seq:
            nxt: dict = {}
            for (mono, v), c in expected.items():
                for mode, gc in g.coeffs.items():
                    key = (mono_mul_var(mono, alpha, mode), v)
                    s = nxt.get(key, Q(0)) + c * gc
                    if s == 0:
                        nxt.pop(key, None)
                    else:
                        nxt[key] = s
            expected = nxt
        top = FockState({k: c for k, c in state.terms.items()
                         if _mono_degree(k[0]) == len(seq)})
        return top == FockState(expected)


def _mono_degree(mono) -> int:
    return sum(e for _, _, e in mono)


def _axpy(acc: dict, state: FockState, c: Fraction):
    if c == 0:
        return
    for key, v in state.terms.items():
        s = acc.get(key, 0) + c * v
        if s == 0:
            acc.pop(key, None)
        else:
            acc[key] = s


def bracket_sweep(real: Realization, max_mode: int, states, on_check=None):
    """Full homomorphism sweep over ordered homogeneous basis pairs.

    Checks pi([a_m, b_n]) = [pi(a_m), pi(b_n)] on every state for all modes
    |m|, |n| <= max_mode.  Actions of basis elements on the input states are
    hoisted out of the quadruple loop, and bracket values are resolved through
    their basis coordinates, so each check costs two fresh operator
    applications.  Returns (checks_done, failure), failure being None or a
    dict with the witness residual; stops at the first failure.
    """
    pd = real.pd
    basis = pd.homogeneous_basis
    kappa = real.module.level
    wide = 2 * max_mode

    P = [[[real.act(elem, m, s) for s in states]
          for m in range(-wide, wide + 1)]
         for _name, elem, _h in basis]

    def p_at(i, m, si):
        return P[i][m + wide][si]

    idx_of = {name: i for i, (name, _, _) in enumerate(basis)}
    btab = []
    ftab = []
    for _, a, _ in basis:
        brow = []
        frow = []
        for _, b, _ in basis:
            coords = coords_in_basis(bracket(a, b))
            brow.append(tuple((idx_of[nm], c) for nm, c in sorted(coords.items())))
            frow.append(form(a, b))
        btab.append(brow)
        ftab.append(frow)

    checks = 0
    for i, (aname, a, _) in enumerate(basis):
        for j, (bname, b, _) in enumerate(basis):
            coords = btab[i][j]
            pairing = ftab[i][j]
            for m in range(-max_mode, max_mode + 1):
                for n in range(-max_mode, max_mode + 1):
                    for si, s in enumerate(states):
                        checks += 1
                        acc: dict = {}
                        _axpy(acc, real.act(a, m, p_at(j, n, si)), Q(1))
                        _axpy(acc, real.act(b, n, p_at(i, m, si)), Q(-1))
                        for k, c in coords:
                            _axpy(acc, p_at(k, m + n, si), -c)
                        if m == -n and m != 0 and pairing != 0 and kappa != 0:
                            _axpy(acc, s, -Q(m) * pairing * kappa)
                        ok = not acc
                        if on_check is not None:
                            on_check(aname, bname, m, n, si, ok)
                        if not ok:
                            return checks, {"a": aname, "b": bname, "m": m,
                                            "n": n, "state": si,
                                            "residual": FockState(acc)}
    return checks, None
