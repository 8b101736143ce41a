"""Polynomial Fock states tensored with an inducing module.

States live in the symmetric algebra on creation variables b(alpha, n), one
family per root alpha of the nilradical enumeration and one variable per
integer mode n, tensored with vectors of an inducing module V.  A state is a
finite exact-rational combination of (monomial, V-basis-index) pairs.

Sign convention (normative for the whole package): the creation operator for
(alpha, n) is multiplication by b(alpha, n), and the matching annihilation
operator acts as minus the partial derivative, so that

    [annihilate(alpha, n), create(beta, m)] = -delta_{alpha beta} delta_{nm} id.

Monomials are stored canonically as tuples of (alpha, mode, exponent) sorted
by (alpha, mode), which makes serialization bit-exact.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator

from .lie import LieElement, ParabolicData, as_scalar

Q = Fraction

#: canonical monomial: sorted tuple of (alpha_index, mode, exponent>=1)
Monomial = tuple

EMPTY_MONOMIAL: Monomial = ()


def mono_from_pairs(pairs: Iterable[tuple[int, int, int]]) -> Monomial:
    acc: dict[tuple[int, int], int] = {}
    for alpha, mode, exp in pairs:
        if exp < 0:
            raise ValueError("exponents must be nonnegative")
        if exp:
            acc[(alpha, mode)] = acc.get((alpha, mode), 0) + exp
    return tuple(sorted((a, n, e) for (a, n), e in acc.items()))


def mono_degree(mono: Monomial) -> int:
    return sum(e for _, _, e in mono)


def mono_mode_sum(mono: Monomial) -> int:
    return sum(n * e for _, n, e in mono)


def mono_mul_var(mono: Monomial, alpha: int, mode: int) -> Monomial:
    out = []
    placed = False
    for a, n, e in mono:
        if (a, n) == (alpha, mode):
            out.append((a, n, e + 1))
            placed = True
        else:
            out.append((a, n, e))
    if not placed:
        out.append((alpha, mode, 1))
        out.sort()
    return tuple(out)


def mono_d_var(mono: Monomial, alpha: int, mode: int) -> tuple[int, Monomial] | None:
    """Partial derivative data: (old exponent, reduced monomial), or None."""
    for idx, (a, n, e) in enumerate(mono):
        if (a, n) == (alpha, mode):
            if e == 1:
                return e, mono[:idx] + mono[idx + 1:]
            return e, mono[:idx] + ((a, n, e - 1),) + mono[idx + 1:]
    return None


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return mono_from_pairs(list(m1) + list(m2))


class FockState:
    """Exact linear combination of monomial (x) V-basis-vector terms."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[Monomial, int], Fraction] | None = None):
        self.terms: dict[tuple[Monomial, int], Fraction] = {}
        for key, c in (terms or {}).items():
            c = as_scalar(c)
            if c != 0:
                self.terms[key] = c

    @classmethod
    def vacuum(cls, v_index: int = 0) -> "FockState":
        return cls({(EMPTY_MONOMIAL, v_index): Q(1)})

    @classmethod
    def zero(cls) -> "FockState":
        return cls({})

    def __eq__(self, other):
        return isinstance(other, FockState) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "FockState(0)"
        bits = []
        for (mono, v), c in sorted(self.terms.items()):
            vars_ = "".join(f"b({a},{n})^{e}" if e > 1 else f"b({a},{n})"
                            for a, n, e in mono) or "1"
            bits.append(f"{c}*{vars_}|v{v}>")
        return "FockState(" + " + ".join(bits) + ")"

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> Iterator[tuple[tuple[Monomial, int], Fraction]]:
        return iter(self.terms.items())

    def __add__(self, other: "FockState") -> "FockState":
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, Q(0)) + c
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        st = FockState.__new__(FockState)
        st.terms = out
        return st

    def __neg__(self) -> "FockState":
        st = FockState.__new__(FockState)
        st.terms = {k: -c for k, c in self.terms.items()}
        return st

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FockState":
        c = as_scalar(c)
        if c == 0:
            return FockState.zero()
        st = FockState.__new__(FockState)
        st.terms = {k: c * v for k, v in self.terms.items()}
        return st


def apply_creation(state: FockState, alpha: int, mode: int) -> FockState:
    """Multiplication by b(alpha, mode); raises the polynomial degree by one."""
    out: dict = {}
    for (mono, v), c in state.terms.items():
        out[(mono_mul_var(mono, alpha, mode), v)] = c
    st = FockState.__new__(FockState)
    st.terms = out
    return st


def apply_annihilation(state: FockState, alpha: int, mode: int) -> FockState:
    """Minus the partial derivative in b(alpha, mode); kills the vacuum."""
    out: dict = {}
    for (mono, v), c in state.terms.items():
        hit = mono_d_var(mono, alpha, mode)
        if hit is None:
            continue
        exp, reduced = hit
        key = (reduced, v)
        s = out.get(key, Q(0)) - exp * c
        if s == 0:
            out.pop(key, None)
        else:
            out[key] = s
    st = FockState.__new__(FockState)
    st.terms = out
    return st


def pbw_degree(state: FockState) -> int:
    """Degree of the highest monomial; 0 for the zero state."""
    if not state.terms:
        return 0
    return max(mono_degree(mono) for mono, _ in state.terms)


def degree_component(state: FockState, degree: int) -> FockState:
    return FockState({k: c for k, c in state.terms.items()
                      if mono_degree(k[0]) == degree})


def total_mode(state: FockState, module=None) -> int | None:
    """Common total mode of all terms, or None when mixed.

    The mode of a term is the mode sum of its monomial plus the V-grading of
    its vector when the module is mode-graded; modules whose vectors carry no
    mode grading make the result None unless the state is empty.
    """
    result: int | None = None
    for (mono, v), _ in state.terms.items():
        base = mono_mode_sum(mono)
        if module is not None:
            vm = module.v_mode(v)
            if vm is None:
                return None
            base += vm
        if result is None:
            result = base
        elif result != base:
            return None
    return result


def h_weight(state: FockState, h: LieElement, pd: ParabolicData, module=None,
             ) -> Fraction | None:
    """Common h-eigenvalue of all terms, or None when mixed.

    Each variable b(alpha, n) shifts the weight by -alpha(h); the V-factor
    contributes its own weight when the module provides one.
    """
    result: Fraction | None = None
    for (mono, v), _ in state.terms.items():
        w = Q(0)
        for a, _n, e in mono:
            w -= e * pd.delta_u[a].value_on(h)
        if module is not None:
            vw = module.v_weight(v, h)
            if vw is None:
                return None
            w += vw
        if result is None:
            result = w
        elif result != w:
            return None
    return result


# --- serialization ----------------------------------------------------------

def state_to_obj(state: FockState, module=None) -> dict:
    """Canonical JSON-ready form; bit-exact for round-tripping.

    Modules with a registry-backed basis (graded-infinite V) contribute a
    `vbasis` table describing every referenced index.
    """
    records = []
    for (mono, v), c in sorted(state.terms.items()):
        records.append({
            "coeff": str(c),
            "monomial": [[a, n, e] for a, n, e in mono],
            "v": v,
        })
    obj: dict = {"terms": records}
    if module is not None and getattr(module, "needs_vbasis", False):
        used = sorted({v for _, v in state.terms})
        obj["vbasis"] = {str(v): module.v_to_obj(v) for v in used}
    return obj


def state_from_obj(obj: dict, module=None) -> FockState:
    remap: dict[int, int] = {}
    if module is not None and getattr(module, "needs_vbasis", False):
        for key, desc in (obj.get("vbasis") or {}).items():
            remap[int(key)] = module.v_from_obj(desc)
    terms: dict = {}
    for rec in obj.get("terms", []):
        mono = mono_from_pairs((int(a), int(n), int(e)) for a, n, e in rec["monomial"])
        v = int(rec["v"])
        v = remap.get(v, v)
        if module is not None:
            module.check_v_index(v)
            for a, _n, _e in mono:
                if not 0 <= a < module.pd.num_alpha:
                    raise ValueError(f"variable family {a} outside the "
                                     f"nilradical enumeration")
        key = (mono, v)
        terms[key] = terms.get(key, Q(0)) + as_scalar(rec["coeff"])
    return FockState(terms)


def state_to_text(state: FockState, module=None) -> str:
    return json.dumps(state_to_obj(state, module), sort_keys=True,
                      separators=(",", ":")) + "\n"


def state_from_text(text: str, module=None) -> FockState:
    return state_from_obj(json.loads(text), module)
