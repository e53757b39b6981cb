"""Recovery of the analytic symbol g from a data set.

Three independent routes are implemented:

* ``solve_polynomial`` - exact closed-form coefficients through two block
  triangular Toeplitz solves (one driven by the b/d pair, one by the a/c
  pair), with the gap between the two sides reported;
* ``solve_truncated`` - the operator route: solve the windowed systems
  M11 x = b and M22 y = c and read the coefficients off the columns, with
  smallest-singular-value certificates for the injectivity condition;
* ``solve_factorization`` - the analytic-factorization route, available
  per side whenever the corresponding determinant has no zeros on the
  wrong side of the circle.

``tri_toeplitz_solve`` is the shared structured kernel: an O(m^2)
block-recursive solver for triangular block Toeplitz systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import diagnostics
from .errors import (
    DataIdentityError,
    FactorizationUnavailableError,
    InjectivityError,
    ShapeError,
    SingularBlockError,
)
from .inversion import (
    DataSet,
    build_m,
    identity_residual_triple,
    minus_coeff_column,
    plus_coeff_column,
)
from .series import LaurentPoly, poly_gap

DEFAULT_TOL = 1e-10
REFUSAL_FACTOR = 100.0
_IDENTITY_NAMES = ("identity_a", "identity_d", "identity_cross")


@dataclass
class SolveReport:
    """Recovered symbol plus its residual ledger."""

    g: LaurentPoly
    method: str
    residual_identities: tuple
    residual_inclusions: tuple
    cross_method_gap: float = None
    phi: LaurentPoly = None
    tol: float = DEFAULT_TOL
    flags: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return max(self.residual_inclusions) <= self.tol


# -- triangular block Toeplitz kernel ----------------------------------------


def _stack_blocks(blocks, what):
    """Stack a sequence of equally shaped blocks into one (m, k, r) array."""
    try:
        arr = np.asarray(blocks, dtype=complex)
    except (ValueError, TypeError) as exc:
        raise ShapeError(f"{what} blocks must share one shape: {exc}") from exc
    if arr.ndim == 1:       # sequence of scalars
        arr = arr[:, None, None]
    elif arr.ndim == 2:     # sequence of 1-d blocks: treat as columns
        arr = arr[:, :, None]
    elif arr.ndim != 3:
        raise ShapeError(f"{what} blocks must be matrices")
    if arr.size and not (
        np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))
    ):
        raise ValueError(f"{what} blocks must be finite")
    return arr


def _chunked_scalar_lower(t, rhs, chunk=64):
    """Forward recursion for a scalar lower triangular Toeplitz system.

    ``t`` holds the diagonal sequence (t[0] on the diagonal), ``rhs`` is
    (m, r).  Work is O(m^2) split into Toeplitz-slice updates so that the
    per-element cost stays at compiled speed.
    """
    m = t.shape[0]
    x = np.empty_like(rhs)
    b = rhs.copy()
    ln = min(chunk, m)
    first_col = np.concatenate([t[:1], np.zeros(ln - 1, dtype=t.dtype)])
    lower = np.tril(scipy.linalg.toeplitz(t[:ln], first_col))
    for s in range(0, m, chunk):
        e = min(s + chunk, m)
        w = e - s
        x[s:e] = scipy.linalg.solve_triangular(lower[:w, :w], b[s:e], lower=True)
        if e < m:
            # rows e..m-1 see the chunk through the Toeplitz slice t[e-s+i-j]
            cross = scipy.linalg.toeplitz(t[w : w + (m - e)], t[w:0:-1][:w])
            b[e:] -= cross @ x[s:e]
    return x


def _block_lower(tt, rhs, lu):
    """Row-by-row forward recursion for block systems (small m path)."""
    m = rhs.shape[0]
    x = np.empty_like(rhs)
    for i in range(m):
        acc = rhs[i]
        if i:
            hist = min(i, tt.shape[0] - 1)
            if hist:
                acc = acc - np.einsum(
                    "jkl,jlr->kr", tt[1 : hist + 1][::-1], x[i - hist : i]
                )
        x[i] = scipy.linalg.lu_solve(lu, acc)
    return x


def tri_toeplitz_solve(coeff_blocks, rhs_blocks, orientation="lower"):
    """Solve a triangular block Toeplitz system by block recursion.

    Parameters
    ----------
    coeff_blocks : sequence of (k, k) arrays
        ``coeff_blocks[j]`` is the block on the j-th subdiagonal (lower)
        or j-th superdiagonal (upper); ``coeff_blocks[0]`` is the diagonal
        block and must be invertible.  For a lower system this is the
        first block column, for an upper system the first block row.
    rhs_blocks : sequence of (k, r) arrays
        Right-hand side block column; its length sets the system size.
    orientation : 'lower' or 'upper'

    Returns
    -------
    list of (k, r) arrays

    Notes
    -----
    Cost is O(m^2) block multiplies; the inverse of the system matrix is
    again triangular block Toeplitz, which is what the recursion exploits.
    An upper system is solved by index reversal of the equivalent lower
    system.
    """
    if orientation not in ("lower", "upper"):
        raise ValueError(f"unknown orientation {orientation!r}")
    tt = _stack_blocks(coeff_blocks, "coefficient")
    if tt.shape[0] == 0:
        raise ShapeError("need at least the diagonal block")
    k = tt.shape[1]
    if tt.shape[2] != k:
        raise ShapeError("coefficient blocks must be square")
    B = _stack_blocks(rhs_blocks, "right-hand side")
    m = B.shape[0]
    if m == 0:
        return []
    if B.shape[1] != k:
        raise ShapeError(f"right-hand side blocks must have {k} rows")

    T = np.zeros((m, k, k), dtype=complex)
    T[: min(m, tt.shape[0])] = tt[:m]
    if orientation == "upper":
        B = B[::-1]

    if np.linalg.cond(T[0]) > 1e12:
        raise SingularBlockError("diagonal block of the triangular system is singular")

    if k == 1:
        X = _chunked_scalar_lower(T[:, 0, 0], B[:, 0, :])[:, None, :]
    else:
        lu = scipy.linalg.lu_factor(T[0])
        X = _block_lower(T, B, lu)
    if orientation == "upper":
        X = X[::-1]
    return [X[i] for i in range(m)]


# -- shared gates -------------------------------------------------------------


def _identity_gate(data: DataSet, tol: float, flags: list):
    """Refuse on gross identity violations, flag moderate ones."""
    res = identity_residual_triple(data)
    worst_val = max(res)
    worst_name = _IDENTITY_NAMES[res.index(worst_val)]
    if worst_val > REFUSAL_FACTOR * tol:
        raise DataIdentityError(
            f"data identities violated: {worst_name} residual {worst_val:.3e} "
            f"exceeds {REFUSAL_FACTOR:.0f} x tol = {REFUSAL_FACTOR * tol:.3e}",
            residuals=res,
            worst=worst_name,
        )
    if worst_val > tol:
        flags.append(f"identity residual {worst_name} = {worst_val:.3e} above tol")
    return res


def _report(data, g, method, id_res, tol, flags, details, phi=None):
    incl = diagnostics.inclusion_residuals(data, g)
    return SolveReport(
        g=g,
        method=method,
        residual_identities=tuple(id_res),
        residual_inclusions=incl,
        phi=phi,
        tol=tol,
        flags=flags,
        details=details,
    )


# -- polynomial route ----------------------------------------------------------


def _c_side_blocks(data: DataSet, m: int):
    """Coefficients from the upper triangular system driven by a and c."""
    acols = [data.alpha.coeff(i).conj().T for i in range(m + 1)]
    rhs = [-data.gamma.coeff(-i).conj().T for i in range(m + 1)]
    return tri_toeplitz_solve(acols, rhs, orientation="upper")


def _b_side_blocks(data: DataSet, m: int):
    """Coefficients from the d-driven unit solve followed by the b product."""
    q = data.q
    dcols = [data.delta.coeff(-j) for j in range(m + 1)]
    rhs = [np.zeros((q, q), dtype=complex) for _ in range(m)] + [np.eye(q, dtype=complex)]
    x = tri_toeplitz_solve(dcols, rhs, orientation="upper")
    e = x[::-1]  # e[s] solves the unit system at anti-diagonal position s
    out = []
    for kdeg in range(m + 1):
        acc = np.zeros((data.p, q), dtype=complex)
        for s in range(m - kdeg + 1):
            acc += data.beta.coeff(kdeg + s) @ e[s]
        out.append(-acc)
    return out


def solve_polynomial(data: DataSet, tol: float = DEFAULT_TOL) -> SolveReport:
    """Closed-form coefficients of g for polynomial data of degree <= m.

    Both triangular routes are computed and their gap is recorded; the
    b-side result is returned.  The dual minus-side symbol phi is computed
    as well and its adjoint gap against g is reported.
    """
    data.corner_inverses()
    flags = []
    id_res = _identity_gate(data, tol, flags)
    m = data.m
    gb = _b_side_blocks(data, m)
    gc = _c_side_blocks(data, m)
    gap = max(float(np.max(np.abs(b - c))) for b, c in zip(gb, gc))
    g = LaurentPoly(data.p, data.q, {k: gb[k] for k in range(m + 1)})
    phi = solve_dual_phi(data, tol=tol, _gate=False)
    details = {
        "two_sided_gap": gap,
        "degree_bound": m,
        "phi_adjoint_gap": poly_gap(phi.adjoint(), g),
    }
    return _report(data, g, "polynomial", id_res, tol, flags, details, phi=phi)


# -- truncated operator route --------------------------------------------------


def _hankel_window_stats(mat, p, q, n_blocks):
    """Mean diagonal blocks and the spread around them for a window matrix.

    In window coordinates the Hankel operator is constant along diagonals;
    returns ({degree: block}, defect).
    """
    N = n_blocks
    defect = 0.0
    blocks = {}
    for off in range(-(N - 1), N):
        samples = []
        j0 = max(0, -off)
        for t in range(N - abs(off)):
            i, j = j0 + off + t, j0 + t
            samples.append(mat[i * p : (i + 1) * p, j * q : (j + 1) * q])
        stack = np.array(samples)
        mean = stack.mean(axis=0)
        if len(samples) > 1:
            defect = max(defect, float(np.max(np.abs(stack - mean))))
        deg = off + (N - 1)
        blocks[deg] = mean
    return blocks, defect


def solve_truncated(data: DataSet, n_blocks: int = None, tol: float = DEFAULT_TOL) -> SolveReport:
    """Window solve of M11 x = b and M22 y = c.

    The smallest singular values of the M11 and M22 windows are the
    injectivity certificates; below ``tol`` times the window dimension the
    solve refuses.  The report carries the gap between the two columns,
    the Hankel-structure defect of -M11^-1 M12 and, for windows narrower
    than the 4m+4 default, the coefficient mass the window cannot certify.
    """
    data.corner_inverses()
    flags = []
    id_res = _identity_gate(data, tol, flags)
    m = data.m
    N = int(n_blocks) if n_blocks else 4 * m + 4
    p, q = data.p, data.q

    big = build_m(data, N, "alternate")
    m11, m12, m22 = big.pp, big.pq, big.qq
    s11 = float(np.linalg.svd(m11, compute_uv=False)[-1])
    s22 = float(np.linalg.svd(m22, compute_uv=False)[-1])
    for name, sval, dim in (("M11", s11, N * p), ("M22", s22, N * q)):
        if sval <= tol * dim:
            raise InjectivityError(
                f"no solution: windowed {name} is not one-to-one "
                f"(smallest singular value {sval:.3e} <= {tol * dim:.3e})",
                sigma_min=sval,
                which=name,
            )

    x = np.linalg.solve(m11, plus_coeff_column(data.beta, N))
    g_blocks = {kdeg: -x[kdeg * p : (kdeg + 1) * p, :] for kdeg in range(N)}
    tail = 0.0
    for kdeg in range(m + 1, N):
        tail = max(tail, float(np.max(np.abs(g_blocks[kdeg]))))
    g = LaurentPoly(p, q, g_blocks)

    y = np.linalg.solve(m22, minus_coeff_column(data.gamma, N))
    g2_blocks = {}
    for w in range(N):
        deg = w - (N - 1)  # y block w is the adjoint coefficient at deg
        g2_blocks[-deg] = (-y[w * q : (w + 1) * q, :]).conj().T
    g2 = LaurentPoly(p, q, g2_blocks)

    hmat = -np.linalg.solve(m11, m12)
    hblocks, hdefect = _hankel_window_stats(hmat, p, q, N)
    g3 = LaurentPoly(p, q, hblocks)

    cert_m = (N - 4) // 4
    tail_mass = 0.0
    for sym in (data.alpha, data.beta, data.gamma, data.delta):
        for deg in sym.degrees():
            if abs(deg) > cert_m:
                tail_mass += float(np.max(np.abs(sym.coeff(deg))))

    details = {
        "column_gap": poly_gap(g, g2),
        "hankel_structure_defect": hdefect,
        "hankel_column_gap": poly_gap(g, g3),
        "sigma_min_m11": s11,
        "sigma_min_m22": s22,
        "injectivity_threshold": (tol * N * p, tol * N * q),
        "tail_beyond_degree": tail,
        "tail_mass_uncertified": tail_mass,
        "window": N,
    }
    return _report(data, g, "truncated", id_res, tol, flags, details)


# -- factorization route -------------------------------------------------------


def solve_factorization(data: DataSet, tol: float = DEFAULT_TOL) -> SolveReport:
    """Analytic-factorization solve; each side gated by zero locations.

    The alpha side computes -(alpha^-* gamma*)_+ through the upper
    triangular system in the adjoint alpha coefficients; the delta side is
    the reflected construction through the adjoint delta coefficients.
    When both sides clear their determinant gate their gap is reported.
    """
    data.corner_inverses()
    flags = []
    id_res = _identity_gate(data, tol, flags)
    m = data.m
    zeros = diagnostics.check_zero_locations(data)
    verdict_a = zeros.entry("alpha_det_zeros").verdict
    verdict_d = zeros.entry("delta_det_zeros").verdict

    g1 = g2 = None
    if verdict_a == "pass":
        g1 = LaurentPoly(
            data.p, data.q, {k: blk for k, blk in enumerate(_c_side_blocks(data, m))}
        )
    if verdict_d == "pass":
        dcols = [data.delta.adjoint().coeff(i) for i in range(m + 1)]
        rhs = [-data.beta.coeff(k).conj().T for k in range(m + 1)]
        x = tri_toeplitz_solve(dcols, rhs, orientation="upper")
        g2 = LaurentPoly(data.p, data.q, {k: x[k].conj().T for k in range(m + 1)})

    if g1 is None and g2 is None:
        raise FactorizationUnavailableError(
            "both factorization paths unavailable: "
            f"alpha zeros {verdict_a}, delta zeros {verdict_d}"
        )
    details = {
        "alpha_path": verdict_a,
        "delta_path": verdict_d,
    }
    if g1 is not None and g2 is not None:
        details["path_gap"] = poly_gap(g1, g2)
    g = g1 if g1 is not None else g2
    if g1 is None or g2 is None:
        flags.append("only one factorization path available")
    return _report(data, g, "factorization", id_res, tol, flags, details)


# -- the dual minus-side symbol ------------------------------------------------


def solve_dual_phi(data: DataSet, tol: float = DEFAULT_TOL, _gate: bool = True) -> LaurentPoly:
    """The unique minus-side polynomial paired with the b/d data.

    phi satisfies delta + phi beta - e_q in the strictly-plus class and
    phi* delta + beta in the strictly-minus class; when all three data
    identities hold, phi* equals g.  Computed from the last block row of
    the inverse of the adjoint delta system applied to the adjoint beta
    triangle.
    """
    data.corner_inverses()
    if _gate:
        res = identity_residual_triple(data)
        if res[1] > REFUSAL_FACTOR * tol:
            raise DataIdentityError(
                f"second data identity residual {res[1]:.3e} too large for the dual solve",
                residuals=res,
                worst="identity_d",
            )
    m = data.m
    p, q = data.p, data.q
    ds = data.delta.adjoint()
    dcols = [ds.coeff(j) for j in range(m + 1)]  # (delta*)_j = (d_{-j})*
    # right-hand side: the adjoint beta triangle, one block row at a time
    bs = data.beta.adjoint()
    rhs = []
    for i in range(m + 1):
        row = np.zeros((q, (m + 1) * p), dtype=complex)
        for j in range(i + 1):
            row[:, j * p : (j + 1) * p] = bs.coeff(-(m - i + j))
        rhs.append(row)
    z = tri_toeplitz_solve(dcols, rhs, orientation="lower")
    last = -z[m]
    phi_coeffs = {
        -j: last[:, j * p : (j + 1) * p] for j in range(m + 1)
    }
    return LaurentPoly(q, p, phi_coeffs)


# -- method aggregation --------------------------------------------------------


def solve_all(data: DataSet, n_blocks: int = None, tol: float = DEFAULT_TOL):
    """Run every applicable route and report the largest pairwise gap.

    Returns (reports dict, cross_method_gap, notes).  A factorization
    route blocked by its determinant gate is skipped with a note rather
    than failing the whole solve.
    """
    reports = {}
    notes = []
    reports["polynomial"] = solve_polynomial(data, tol=tol)
    reports["truncated"] = solve_truncated(data, n_blocks=n_blocks, tol=tol)
    try:
        reports["factorization"] = solve_factorization(data, tol=tol)
    except FactorizationUnavailableError as exc:
        notes.append(str(exc))
    gap = 0.0
    names = sorted(reports)
    for i, n1 in enumerate(names):
        for n2 in names[i + 1 :]:
            gap = max(gap, poly_gap(reports[n1].g, reports[n2].g))
    for rep in reports.values():
        rep.cross_method_gap = gap
    return reports, gap, notes
