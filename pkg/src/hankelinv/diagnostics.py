"""Hypothesis and solution checks: identities, zero locations, contraction.

Every check returns a :class:`CheckReport`, a list of named residuals with
a pass/fail/inconclusive verdict each.  A verdict is ``pass`` exactly when
value <= threshold; ``inconclusive`` is reserved for empty margins,
circle-adjacent roots and checks whose precondition failed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError, ShapeError, SingularCornerError
from .inversion import DataSet, build_omega, identity_residual_triple
from .series import LaurentPoly, SubspaceTag
from .structured import OpKind, build

CIRCLE_BAND = 1e-8
DEFLATION_TOL = 1e-13
POSDEF_REL_TOL = 1e-12


@dataclass
class CheckEntry:
    name: str
    value: float
    threshold: float
    verdict: str  # 'pass' | 'fail' | 'inconclusive'
    extra: dict = field(default_factory=dict)


@dataclass
class CheckReport:
    entries: list

    def entry(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def values(self) -> dict:
        return {e.name: e.value for e in self.entries}

    @property
    def passed(self) -> bool:
        return all(e.verdict == "pass" for e in self.entries)

    @property
    def any_fail(self) -> bool:
        return any(e.verdict == "fail" for e in self.entries)

    @property
    def any_inconclusive(self) -> bool:
        return any(e.verdict == "inconclusive" for e in self.entries)

    def overall(self) -> str:
        if self.any_fail:
            return "fail"
        if self.any_inconclusive:
            return "inconclusive"
        return "pass"

    def merged(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(self.entries + other.entries)


def _residual_entry(name, value, threshold, extra=None):
    verdict = "pass" if value <= threshold else "fail"
    return CheckEntry(name, float(value), float(threshold), verdict, extra or {})


def _maxabs(x) -> float:
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


# -- data identities ---------------------------------------------------------


def check_identities(data: DataSet, tol: float = 1e-10) -> CheckReport:
    """Residuals of the three data identities and their dual forms.

    The direct triple compares alpha* alpha - gamma* gamma against a0 and
    so on; the dual triple is the equivalent set obtained by conjugating
    with the corner matrices, which vanishes together with the direct one
    whenever a0 and d0 are invertible.
    """
    al, be, ga, de = data.alpha, data.beta, data.gamma, data.delta
    r1, r2, r3 = identity_residual_triple(data)
    entries = [
        _residual_entry("identity_a", r1, tol),
        _residual_entry("identity_d", r2, tol),
        _residual_entry("identity_cross", r3, tol),
        _residual_entry("a0_hermitian", _maxabs(data.a0 - data.a0.conj().T), tol),
        _residual_entry("d0_hermitian", _maxabs(data.d0 - data.d0.conj().T), tol),
    ]
    try:
        a0inv, d0inv = data.corner_inverses()
    except SingularCornerError:
        entries.append(CheckEntry("dual_triple", float("nan"), tol, "inconclusive"))
        return CheckReport(entries)
    ai = LaurentPoly.constant(a0inv)
    di = LaurentPoly.constant(d0inv)
    e_p = LaurentPoly.identity(data.p)
    e_q = LaurentPoly.identity(data.q)
    s1 = (al * ai * al.adjoint() - be * di * be.adjoint() - e_p).sup_norm()
    s2 = (de * di * de.adjoint() - ga * ai * ga.adjoint() - e_q).sup_norm()
    s3 = (al * ai * ga.adjoint() - be * di * de.adjoint()).sup_norm()
    entries += [
        _residual_entry("dual_a", s1, tol),
        _residual_entry("dual_d", s2, tol),
        _residual_entry("dual_cross", s3, tol),
    ]
    return CheckReport(entries)


# -- zero locations ----------------------------------------------------------


def _poly_roots(coeffs):
    """Roots of sum_j coeffs[j] z**j with leading-coefficient deflation."""
    c = np.asarray(coeffs, dtype=complex)
    while c.size and abs(c[-1]) < DEFLATION_TOL:
        c = c[:-1]
    if c.size == 0:
        raise DegenerateError("determinant is identically zero")
    if c.size == 1:
        return np.array([], dtype=complex)
    return np.roots(c[::-1])  # companion-matrix eigenvalues


def _root_entry(name, roots, band):
    if roots.size == 0:
        return CheckEntry(name, -1.0, 0.0, "pass", {"roots": roots})
    min_mod = float(np.min(np.abs(roots)))
    value = (1.0 + band) - min_mod
    if min_mod > 1.0 + band:
        verdict = "pass"
    elif min_mod < 1.0 - band:
        verdict = "fail"
    else:
        verdict = "inconclusive"  # circle-adjacent root
    return CheckEntry(name, value, 0.0, verdict, {"roots": roots, "min_modulus": min_mod})


def check_zero_locations(data: DataSet, band: float = CIRCLE_BAND) -> CheckReport:
    """Locations of det(alpha) and det(delta) zeros relative to the circle.

    alpha passes when det(alpha) has no zero with |z| <= 1 + band; delta is
    mapped through z -> 1/z first, so it passes when det(delta) has no zero
    with |z| >= 1 - band.  Roots inside the band around the circle give an
    inconclusive verdict instead of a guess.
    """
    det_a = data.alpha.det()
    if det_a.is_zero:
        raise DegenerateError("det(alpha) is identically zero")
    ca = np.zeros(det_a.hi + 1, dtype=complex)
    for d in det_a.degrees():
        ca[d] = det_a.coeff(d)[0, 0]
    roots_a = _poly_roots(ca)

    det_d = data.delta.det()
    if det_d.is_zero:
        raise DegenerateError("det(delta) is identically zero")
    # substitute mu = 1/z: coefficient of mu**j is the degree -j coefficient
    cd = np.zeros(-det_d.lo + 1, dtype=complex)
    for d in det_d.degrees():
        cd[-d] = det_d.coeff(d)[0, 0]
    roots_d = _poly_roots(cd)

    return CheckReport(
        [
            _root_entry("alpha_det_zeros", roots_a, band),
            _root_entry("delta_det_zeros", roots_d, band),
        ]
    )


# -- contraction -------------------------------------------------------------


def hankel_norm(g: LaurentPoly) -> float:
    """Operator norm of the Hankel operator of a polynomial plus symbol.

    For a polynomial of degree m the Hankel operator is supported on an
    (m+1) x (m+1) block corner, so the largest singular value of that
    corner window is the exact operator norm.
    """
    if not g.in_subspace(SubspaceTag.PLUS):
        raise ShapeError("hankel_norm needs a symbol supported on degrees >= 0")
    if g.is_zero:
        return 0.0
    corner = build(OpKind.HANKEL_PLUS, g, g.hi + 1).dense
    return float(np.linalg.svd(corner, compute_uv=False)[0])


def _posdef_entry(name, mat):
    herm = 0.5 * (mat + mat.conj().T)
    eigs = np.linalg.eigvalsh(herm)
    lam_min = float(eigs[0])
    scale = max(float(np.linalg.norm(mat, 2)), 1e-300)
    return CheckEntry(
        name,
        -lam_min,
        -POSDEF_REL_TOL * scale,
        "pass" if lam_min > POSDEF_REL_TOL * scale else "fail",
        {"min_eigenvalue": lam_min},
    )


def check_strict_contraction(data: DataSet, g: LaurentPoly = None, tol: float = 1e-10) -> CheckReport:
    """The three solvability-with-contraction conditions, plus direct checks.

    Conditions: a0 and d0 positive definite, the data identities, and the
    determinant zero locations.  When a candidate solution g is supplied
    (or can be computed), the direct Hankel-norm check and the positivity
    of the shifted corner operator are appended.
    """
    entries = [
        _posdef_entry("a0_positive", data.a0),
        _posdef_entry("d0_positive", data.d0),
    ]
    idrep = check_identities(data, tol)
    entries += [idrep.entry(n) for n in ("identity_a", "identity_d", "identity_cross")]
    entries += check_zero_locations(data).entries

    if g is None and not CheckReport(entries).any_fail:
        from .solver import solve_polynomial  # deferred: solver imports this module

        try:
            g = solve_polynomial(data, tol=tol).g
        except ValueError:
            g = None
    if g is not None:
        norm = hankel_norm(g)
        entries.append(
            CheckEntry(
                "hankel_norm", norm, 1.0, "pass" if norm < 1.0 else "fail"
            )
        )
        m = g.hi + 1 if not g.is_zero else 1
        g1 = g.shifted(-1).project(SubspaceTag.PLUS)
        corner1 = build(OpKind.HANKEL_PLUS, g1, m).dense
        omega1 = np.block(
            [
                [np.eye(corner1.shape[0]), corner1],
                [corner1.conj().T, np.eye(corner1.shape[1])],
            ]
        )
        lam1 = float(np.linalg.eigvalsh(omega1)[0])
        if norm < 1.0:
            entries.append(
                CheckEntry(
                    "omega1_positive",
                    -lam1,
                    0.0,
                    "pass" if lam1 > 0 else "fail",
                    {"min_eigenvalue": lam1},
                )
            )
    return CheckReport(entries)


# -- solution verification ---------------------------------------------------


def verify_solution(data: DataSet, g: LaurentPoly, tol: float = 1e-10) -> CheckReport:
    """Residuals of the four membership inclusions defining a solution.

    Each entry is the sup norm of the forbidden-support part of one of the
    four combinations; all four vanish exactly when g solves the inverse
    problem for the data.
    """
    if g.shape != (data.p, data.q):
        raise ShapeError(f"g must be {(data.p, data.q)}, got {g.shape}")
    al, be, ga, de = data.alpha, data.beta, data.gamma, data.delta
    e_p = LaurentPoly.identity(data.p)
    e_q = LaurentPoly.identity(data.q)
    gs = g.adjoint()
    res = {
        "alpha_g_gamma": (al + g * ga - e_p).project(SubspaceTag.PLUS).sup_norm(),
        "gstar_alpha_gamma": (gs * al + ga).project(SubspaceTag.MINUS).sup_norm(),
        "delta_gstar_beta": (de + gs * be - e_q).project(SubspaceTag.MINUS).sup_norm(),
        "g_delta_beta": (g * de + be).project(SubspaceTag.PLUS).sup_norm(),
    }
    return CheckReport([_residual_entry(k, v, tol) for k, v in res.items()])


def inclusion_residuals(data: DataSet, g: LaurentPoly):
    """The four inclusion residuals as a tuple (order as in verify_solution)."""
    rep = verify_solution(data, g)
    return tuple(e.value for e in rep.entries)


# -- corner extraction and congruences ---------------------------------------


def check_appendix_structure(
    data: DataSet, g: LaurentPoly, n_blocks: int, tol: float = 1e-10
) -> CheckReport:
    """Corner extraction and congruence structure of the window of Omega.

    Checks that the corner blocks of Omega^-1 reproduce a0 and d0, that the
    two congruences by the first/last solution columns reduce Omega to
    diag(a0, Omega_1) and diag(Omega_1, d0), and the positivity links
    between Omega, Omega_1 and the Hankel norm of g.
    """
    N = int(n_blocks)
    p, q = data.p, data.q
    g_extent = 1 if g.is_zero else g.hi + 1
    margin = max(0, N - g_extent + 1)
    omega = build_omega(g, N)
    om = omega.dense
    dim = om.shape[0]
    norm = hankel_norm(g)

    entries = []
    if margin <= 0:
        entries.append(CheckEntry("schur_a0", float("nan"), tol, "inconclusive"))
        entries.append(CheckEntry("schur_d0", float("nan"), tol, "inconclusive"))
        return CheckReport(entries)

    # Corner extraction: first/last unit block columns of Omega^-1.
    e_first = np.zeros((dim, p), dtype=complex)
    e_first[:p] = np.eye(p)
    e_last = np.zeros((dim, q), dtype=complex)
    e_last[-q:] = np.eye(q)
    col_first = np.linalg.solve(om, e_first)
    col_last = np.linalg.solve(om, e_last)
    a0_ex = col_first[:p]
    d0_ex = col_last[-q:]
    entries.append(_residual_entry("schur_a0", _maxabs(a0_ex - data.a0), tol))
    entries.append(_residual_entry("schur_d0", _maxabs(d0_ex - data.d0), tol))

    # Congruence by the first column: E* Omega E = diag(a0, Omega_1).
    hp_g = om[: N * p, N * p :]
    e1 = np.eye(dim, dtype=complex)
    e1[:, :p] = col_first
    lhs1 = e1.conj().T @ om @ e1
    omega1_rows = np.block(
        [
            [np.eye((N - 1) * p), hp_g[p:, :]],
            [hp_g[p:, :].conj().T, np.eye(N * q)],
        ]
    )
    target1 = np.zeros_like(lhs1)
    target1[:p, :p] = a0_ex
    target1[p:, p:] = omega1_rows
    entries.append(_residual_entry("congruence_first", _maxabs(lhs1 - target1), tol))

    # Congruence by the last column: E* Omega E = diag(Omega_1, d0).
    e2 = np.eye(dim, dtype=complex)
    e2[:, -q:] = col_last
    lhs2 = e2.conj().T @ om @ e2
    omega1_cols = np.block(
        [
            [np.eye(N * p), hp_g[:, : (N - 1) * q]],
            [hp_g[:, : (N - 1) * q].conj().T, np.eye((N - 1) * q)],
        ]
    )
    target2 = np.zeros_like(lhs2)
    target2[: dim - q, : dim - q] = omega1_cols
    target2[-q:, -q:] = d0_ex
    entries.append(_residual_entry("congruence_last", _maxabs(lhs2 - target2), tol))

    # Positivity links with the contraction norm.
    lam_omega = float(np.linalg.eigvalsh(0.5 * (om + om.conj().T))[0])
    entries.append(
        _residual_entry(
            "omega_positivity_link",
            abs(lam_omega - (1.0 - norm)),
            tol,
            {"min_eigenvalue": lam_omega, "hankel_norm": norm},
        )
    )
    lam1 = float(np.linalg.eigvalsh(0.5 * (omega1_rows + omega1_rows.conj().T))[0])
    if norm < 1.0:
        entries.append(
            CheckEntry(
                "omega1_positive_under_contraction",
                -lam1,
                0.0,
                "pass" if lam1 > 0 else "fail",
                {"min_eigenvalue": lam1},
            )
        )
    else:
        entries.append(
            CheckEntry(
                "omega1_positive_under_contraction",
                -lam1,
                0.0,
                "inconclusive",
                {"min_eigenvalue": lam1},
            )
        )
    return CheckReport(entries)
