"""Inducing modules: concrete continuous representations of the natural parabolic.

Three constructible families are provided.  In each, the nilradical loop part
acts by zero and the central element acts by the level kappa:

* ``character`` -- one-dimensional, supported on the center of the Levi;
  necessarily level 0 (the center of the affine algebra lies in the derived
  Levi loop algebra, which a character kills).
* ``evaluation`` -- a finite-dimensional Levi representation evaluated at a
  point s, acting by s^j rho(x) in mode j; necessarily level 0 because the
  trace of a commutator of finite matrices vanishes.
* ``heisenberg_fock`` -- for the Borel case (empty Sigma): the level-kappa
  Fock module of the Cartan loop algebra, with negative modes creating,
  positive modes annihilating (scaled by kappa * n * Gram), and mode zero
  acting by the highest weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .lie import (
    LieElement,
    ParabolicData,
    _solve_exact,
    as_scalar,
    bracket,
    form,
)

Q = Fraction


def levi_coords(pd: ParabolicData, x: LieElement) -> list[Fraction]:
    """Coordinates of a Levi element over pd.levi_basis."""
    if not (pd.project(x, "u").is_zero() and pd.project(x, "ubar").is_zero()):
        raise ValueError("element is not in the Levi subalgebra")
    coords = list(pd.cartan_coords(x))
    for name in pd.levi_names[pd.n:]:
        i, j = name[1:].split(".")
        coords.append(x.entry(int(i), int(j)))
    return coords


class InducingModule:
    """Common interface; see the concrete kinds below."""

    kind: str = "abstract"
    needs_vbasis: bool = False

    def __init__(self, pd: ParabolicData, level):
        self.pd = pd
        self.level = as_scalar(level)
        self._levi_cache: dict[LieElement, LieElement] = {}

    # subclasses implement act(x, mode, v_index) -> {v_index: coeff}

    def act_vec(self, x: LieElement, mode: int, vec: dict[int, Fraction],
                ) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for v, c in vec.items():
            for w, d in self.act(x, mode, v).items():
                s = out.get(w, Q(0)) + c * d
                if s == 0:
                    out.pop(w, None)
                else:
                    out[w] = s
        return out

    def v_weight(self, v_index: int, h: LieElement) -> Fraction | None:
        raise NotImplementedError

    def v_mode(self, v_index: int) -> int | None:
        raise NotImplementedError

    def check_v_index(self, v_index: int):
        raise NotImplementedError

    def sample_v(self, sampler) -> int:
        raise NotImplementedError

    def describe(self) -> str:
        return f"{self.kind}(level={self.level})"

    # registry-backed kinds override these
    def v_to_obj(self, v_index: int):
        raise NotImplementedError

    def v_from_obj(self, obj) -> int:
        raise NotImplementedError

    def _levi_part(self, x: LieElement) -> LieElement:
        part = self._levi_cache.get(x)
        if part is None:
            if x.n != self.pd.n:
                raise ValueError("rank mismatch between element and module")
            part = self.pd.project(x, "l")
            self._levi_cache[x] = part
        return part


class CharacterModule(InducingModule):
    """One-dimensional module defined by a finitely supported character.

    The character is supported on the center of the Levi; per mode j it is a
    linear functional on z(l), stored over the canonical center basis.
    """

    kind = "character"

    def __init__(self, pd: ParabolicData,
                 assignments: Iterable[tuple[LieElement, int, Fraction]] = (),
                 level=0):
        super().__init__(pd, level)
        if self.level != 0:
            raise ValueError("a one-dimensional module forces level 0")
        by_mode: dict[int, list[tuple[list[Fraction], Fraction]]] = {}
        for elem, mode, value in assignments:
            if not pd.in_center(elem):
                raise ValueError(
                    "character assignments must lie in the center of the Levi")
            coords = list(pd.center_coords(elem))
            by_mode.setdefault(int(mode), []).append((coords, as_scalar(value)))
        nz = len(pd.center_basis)
        self.chi: dict[int, tuple[Fraction, ...]] = {}
        for mode, rows in by_mode.items():
            sol = _solve_exact([r for r, _ in rows], [v for _, v in rows])
            if sol is None:
                raise ValueError(f"inconsistent character values at mode {mode}")
            # verify (solver zeroes free directions; dependent rows must agree)
            for coords, value in rows:
                if sum(c * s for c, s in zip(coords, sol)) != value:
                    raise ValueError(f"inconsistent character values at mode {mode}")
            if any(s != 0 for s in sol):
                self.chi[mode] = tuple(sol[:nz])
        self._graded = all(m == 0 for m in self.chi)
        self._val_cache: dict[tuple[LieElement, int], Fraction] = {}

    def describe(self) -> str:
        modes = ",".join(str(m) for m in sorted(self.chi))
        return f"character(modes=[{modes}], level={self.level})"

    @property
    def dim(self) -> int:
        return 1

    def chi_value(self, x: LieElement, mode: int) -> Fraction:
        func = self.chi.get(mode)
        if func is None:
            return Q(0)
        coords = self.pd.center_coords(x)
        return sum((c * f for c, f in zip(coords, func)), Q(0))

    def act(self, x: LieElement, mode: int, v_index: int) -> dict[int, Fraction]:
        self.check_v_index(v_index)
        key = (x, mode)
        val = self._val_cache.get(key)
        if val is None:
            val = self.chi_value(self._levi_part(x), mode)
            self._val_cache[key] = val
        return {0: val} if val != 0 else {}

    def v_weight(self, v_index: int, h: LieElement) -> Fraction:
        return self.chi_value(self.pd.project(h, "l"), 0)

    def v_mode(self, v_index: int) -> int | None:
        return 0 if self._graded else None

    def check_v_index(self, v_index: int):
        if v_index != 0:
            raise ValueError("character module has a single basis vector")

    def sample_v(self, sampler) -> int:
        return 0


class EvaluationModule(InducingModule):
    """Finite-dimensional Levi representation evaluated at a point.

    x (x) t^j acts by s^j rho(x_l); the nilradical part acts by zero.  With
    s = 0 positive modes act by zero and negative modes are rejected.
    """

    kind = "evaluation"

    def __init__(self, pd: ParabolicData, rho: Sequence[Sequence[Sequence]],
                 s, level=0, check: bool = True):
        super().__init__(pd, level)
        if self.level != 0:
            raise ValueError(
                "finite-dimensional inducing modules force level 0: "
                "tr[rho(x_m), rho(y_{-m})] = 0 while the bracket demands "
                "m (x,y) kappa dim")
        if len(rho) != len(pd.levi_basis):
            raise ValueError("need one representation matrix per Levi basis element")
        mats = []
        dim = None
        for mat in rho:
            rows = tuple(tuple(as_scalar(v) for v in row) for row in mat)
            if dim is None:
                dim = len(rows)
            if len(rows) != dim or any(len(r) != dim for r in rows):
                raise ValueError("representation matrices must be square, same size")
            mats.append(rows)
        self.rho = tuple(mats)
        self.dim = dim or 0
        self.s = as_scalar(s)
        if check:
            self._check_bracket_relations()
        self._matrix_cache: dict[LieElement, tuple[tuple[Fraction, ...], ...]] = {}
        self._scaled_cache: dict = {}

    def _check_bracket_relations(self):
        basis = self.pd.levi_basis
        for i, x in enumerate(basis):
            for j, y in enumerate(basis):
                lhs = _mat_sub(_mat_mul(self.rho[i], self.rho[j]),
                               _mat_mul(self.rho[j], self.rho[i]))
                coords = levi_coords(self.pd, bracket(x, y))
                rhs = _mat_zero(self.dim)
                for c, mat in zip(coords, self.rho):
                    if c != 0:
                        rhs = _mat_add(rhs, _mat_scale(mat, c))
                if lhs != rhs:
                    raise ValueError(
                        f"rho is not a Levi representation: fails on basis pair "
                        f"({i},{j})")

    def matrix_of(self, x_l: LieElement) -> tuple[tuple[Fraction, ...], ...]:
        cached = self._matrix_cache.get(x_l)
        if cached is None:
            coords = levi_coords(self.pd, x_l)
            cached = _mat_zero(self.dim)
            for c, mat in zip(coords, self.rho):
                if c != 0:
                    cached = _mat_add(cached, _mat_scale(mat, c))
            self._matrix_cache[x_l] = cached
        return cached

    def act(self, x: LieElement, mode: int, v_index: int) -> dict[int, Fraction]:
        self.check_v_index(v_index)
        key = (x, mode)
        mat = self._scaled_cache.get(key, False)
        if mat is False:
            x_l = self._levi_part(x)
            if x_l.is_zero():
                mat = None
            elif self.s == 0:
                if mode < 0:
                    raise ValueError(
                        "negative modes are undefined at evaluation point 0")
                mat = self.matrix_of(x_l) if mode == 0 else None
            else:
                scale = self.s ** mode
                mat = tuple(tuple(v * scale for v in row)
                            for row in self.matrix_of(x_l))
            self._scaled_cache[key] = mat
        if mat is None:
            return {}
        out = {}
        for row in range(self.dim):
            val = mat[row][v_index]
            if val != 0:
                out[row] = val
        return out

    def v_weight(self, v_index: int, h: LieElement) -> Fraction | None:
        mat = self.matrix_of(self._levi_part(h))
        col = [mat[r][v_index] for r in range(self.dim)]
        if any(c != 0 for r, c in enumerate(col) if r != v_index):
            return None
        return col[v_index]

    def v_mode(self, v_index: int) -> int | None:
        return None

    def check_v_index(self, v_index: int):
        if not 0 <= v_index < self.dim:
            raise ValueError(f"v index {v_index} outside module of dim {self.dim}")

    def sample_v(self, sampler) -> int:
        return sampler.randint(0, self.dim - 1)

    def describe(self) -> str:
        return f"evaluation(dim={self.dim}, s={self.s}, level={self.level})"


class HeisenbergFockModule(InducingModule):
    """Level-kappa Fock module of the Cartan loop algebra (Borel case only).

    V is the polynomial space on variables y(i, r) for Cartan direction i and
    depth r >= 1 (mode -r).  Basis monomials are interned into an index
    registry in order of first use, so indices are reproducible for a fixed
    computation; serialized states carry an explicit basis table.
    """

    kind = "heisenberg_fock"
    needs_vbasis = True

    def __init__(self, pd: ParabolicData, lam: Sequence, level):
        super().__init__(pd, level)
        if pd.sigma:
            raise ValueError("heisenberg_fock requires the Borel case (empty Sigma)")
        lam = tuple(as_scalar(v) for v in lam)
        if len(lam) != pd.n:
            raise ValueError(f"need {pd.n} highest-weight values")
        self.lam = lam
        self.gram = tuple(tuple(form(a, b) for b in pd.cartan) for a in pd.cartan)
        self._mono_by_index: list[tuple] = []
        self._index_by_mono: dict[tuple, int] = {}
        self._coord_cache: dict[LieElement, tuple[Fraction, ...]] = {}
        self.intern(())

    def intern(self, vmono: tuple) -> int:
        idx = self._index_by_mono.get(vmono)
        if idx is None:
            idx = len(self._mono_by_index)
            self._mono_by_index.append(vmono)
            self._index_by_mono[vmono] = idx
        return idx

    def act(self, x: LieElement, mode: int, v_index: int) -> dict[int, Fraction]:
        self.check_v_index(v_index)
        coords = self._coord_cache.get(x)
        if coords is None:
            coords = self.pd.cartan_coords(self._levi_part(x))
            self._coord_cache[x] = coords
        if not any(coords):
            return {}
        mono = self._mono_by_index[v_index]
        out: dict[int, Fraction] = {}
        if mode == 0:
            val = sum((c * l for c, l in zip(coords, self.lam)), Q(0))
            if val != 0:
                out[v_index] = val
        elif mode < 0:
            r = -mode
            for i, c in enumerate(coords):
                if c == 0:
                    continue
                new = _vmono_mul(mono, i, r)
                idx = self.intern(new)
                s = out.get(idx, Q(0)) + c
                if s == 0:
                    out.pop(idx, None)
                else:
                    out[idx] = s
        else:
            kappa = self.level
            if kappa != 0:
                for i, c in enumerate(coords):
                    if c == 0:
                        continue
                    for j in range(self.pd.n):
                        g = self.gram[i][j]
                        if g == 0:
                            continue
                        hit = _vmono_d(mono, j, mode)
                        if hit is None:
                            continue
                        exp, reduced = hit
                        idx = self.intern(reduced)
                        s = out.get(idx, Q(0)) + c * kappa * mode * g * exp
                        if s == 0:
                            out.pop(idx, None)
                        else:
                            out[idx] = s
        return out

    def v_weight(self, v_index: int, h: LieElement) -> Fraction:
        coords = self.pd.cartan_coords(self.pd.project(h, "l"))
        return sum((c * l for c, l in zip(coords, self.lam)), Q(0))

    def v_mode(self, v_index: int) -> int:
        mono = self._mono_by_index[v_index]
        return -sum(r * e for _, r, e in mono)

    def check_v_index(self, v_index: int):
        if not 0 <= v_index < len(self._mono_by_index):
            raise ValueError(f"v index {v_index} not registered in this module")

    def sample_v(self, sampler) -> int:
        deg = sampler.randint(0, 2)
        mono = ()
        for _ in range(deg):
            i = sampler.randint(0, self.pd.n - 1)
            r = sampler.randint(1, 2)
            mono = _vmono_mul(mono, i, r)
        return self.intern(mono)

    def v_to_obj(self, v_index: int):
        return [[i, r, e] for i, r, e in self._mono_by_index[v_index]]

    def v_from_obj(self, obj) -> int:
        acc: dict[tuple[int, int], int] = {}
        for i, r, e in obj:
            if r < 1 or e < 1:
                raise ValueError("invalid V-monomial entry")
            acc[(int(i), int(r))] = acc.get((int(i), int(r)), 0) + int(e)
        return self.intern(tuple(sorted((i, r, e) for (i, r), e in acc.items())))

    def describe(self) -> str:
        lam = ",".join(str(v) for v in self.lam)
        return f"heisenberg_fock(lam=[{lam}], level={self.level})"


def _vmono_mul(mono: tuple, i: int, r: int) -> tuple:
    out = dict(((a, b), e) for a, b, e in mono)
    out[(i, r)] = out.get((i, r), 0) + 1
    return tuple(sorted((a, b, e) for (a, b), e in out.items()))


def _vmono_d(mono: tuple, i: int, r: int):
    for idx, (a, b, e) in enumerate(mono):
        if (a, b) == (i, r):
            reduced = mono[:idx] + mono[idx + 1:] if e == 1 else \
                mono[:idx] + ((a, b, e - 1),) + mono[idx + 1:]
            return e, reduced
    return None


def _mat_zero(dim):
    return tuple(tuple(Q(0) for _ in range(dim)) for _ in range(dim))


def _mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_scale(a, c):
    return tuple(tuple(c * x for x in row) for row in a)


def _mat_mul(a, b):
    dim = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(dim))
                       for j in range(dim)) for i in range(dim))


# --- constructors -------------------------------------------------------------

def character_module(pd: ParabolicData, assignments=(), level=0) -> CharacterModule:
    return CharacterModule(pd, assignments, level)


def evaluation_module(pd: ParabolicData, rho, s, level=0, check=True,
                      ) -> EvaluationModule:
    return EvaluationModule(pd, rho, s, level, check)


def heisenberg_fock(pd: ParabolicData, lam, level) -> HeisenbergFockModule:
    return HeisenbergFockModule(pd, lam, level)


def levi_blocks(pd: ParabolicData) -> list[list[int]]:
    """Maximal runs of indices 1..n+1 glued by the simple roots in Sigma."""
    blocks: list[list[int]] = [[1]]
    for i in range(1, pd.n + 1):
        if i in pd.sigma:
            blocks[-1].append(i + 1)
        else:
            blocks.append([i + 1])
    return blocks


def natural_block_rep(pd: ParabolicData, block: int) -> list[list[list[Fraction]]]:
    """Representation matrices restricting each Levi basis element to a block."""
    idxs = levi_blocks(pd)[block]
    mats = []
    for x in pd.levi_basis:
        mats.append([[x.entry(i, j) for j in idxs] for i in idxs])
    return mats


@dataclass
class AxiomReport:
    passed: bool
    checks: int
    failure: str | None = None

    def __str__(self):
        if self.passed:
            return f"PASS {self.checks} commutator checks"
        return f"FAIL after {self.checks} checks: {self.failure}"


def axiom_check(module: InducingModule, window: int,
                states: Sequence[dict[int, Fraction]]) -> AxiomReport:
    """Verify the mode-level bracket relations on the given V-vectors.

    For every ordered pair (x, y) of Levi basis elements and |m|, |n| within
    the window, compares sigma([x_m, y_n]) including the central term against
    the commutator of the separate actions.
    """
    pd = module.pd
    checks = 0
    for x in pd.levi_basis:
        for y in pd.levi_basis:
            xy = bracket(x, y)
            pairing = form(x, y)
            for m in range(-window, window + 1):
                for n in range(-window, window + 1):
                    for si, vec in enumerate(states):
                        checks += 1
                        lhs = module.act_vec(xy, m + n, vec)
                        if m == -n and m != 0 and pairing != 0:
                            extra = m * pairing * module.level
                            for v, c in vec.items():
                                s = lhs.get(v, Q(0)) + extra * c
                                if s == 0:
                                    lhs.pop(v, None)
                                else:
                                    lhs[v] = s
                        rhs = module.act_vec(x, m, module.act_vec(y, n, vec))
                        for v, c in module.act_vec(y, n, module.act_vec(x, m, vec)).items():
                            s = rhs.get(v, Q(0)) - c
                            if s == 0:
                                rhs.pop(v, None)
                            else:
                                rhs[v] = s
                        if lhs != rhs:
                            return AxiomReport(
                                False, checks,
                                f"x={x!r} y={y!r} m={m} n={n} state#{si}: "
                                f"sigma([x_m,y_n]) = {lhs} but commutator = {rhs}")
    return AxiomReport(True, checks)
