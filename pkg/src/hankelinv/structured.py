"""Truncated block Toeplitz and Hankel matrices built from symbols.

Coordinate convention (fixed once, used everywhere): a truncated
plus-window indexes blocks 0..N-1 top-to-bottom, a minus-window indexes
blocks -N+1..0 left-to-right.  With abstract indices i (codomain) and j
(domain) every operator here has block entry symbol[i - j]; only the index
ranges differ between the kinds.  In window coordinates the minus index j
maps to column position j + N - 1.

Identities that suffer truncation corner effects are asserted only on a
conservative exact margin: ``margin = N - sum(symbol support widths)``.
The margin sub-window hugs the anchored corner of each space (top rows for
a plus codomain, bottom rows for a minus codomain, and likewise for the
domain columns).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .series import LaurentPoly, as_matrix


class OpKind(enum.Enum):
    TOEPLITZ_PLUS = "toeplitz_plus"
    TOEPLITZ_MINUS = "toeplitz_minus"
    HANKEL_PLUS = "hankel_plus"
    HANKEL_MINUS = "hankel_minus"
    DIAG_DELTA = "diag_delta"
    SHIFT_PLUS = "shift_plus"
    SHIFT_MINUS = "shift_minus"


# (domain space, codomain space) per kind; DIAG_DELTA takes the caller's space.
_SPACES = {
    OpKind.TOEPLITZ_PLUS: ("plus", "plus"),
    OpKind.TOEPLITZ_MINUS: ("minus", "minus"),
    OpKind.HANKEL_PLUS: ("minus", "plus"),
    OpKind.HANKEL_MINUS: ("plus", "minus"),
    OpKind.SHIFT_PLUS: ("plus", "plus"),
    OpKind.SHIFT_MINUS: ("minus", "minus"),
}


@dataclass(frozen=True)
class Window:
    """A truncation window: N retained blocks and the exact margin."""

    n_blocks: int
    margin: int

    @property
    def conclusive(self) -> bool:
        return self.margin > 0


@dataclass(frozen=True)
class StructuredOp:
    kind: OpKind
    symbol: object           # LaurentPoly, matrix (DIAG_DELTA) or block dim (shifts)
    n_blocks: int
    block_shape: tuple       # (rows, cols) of one block
    domain: str              # 'plus' or 'minus'
    codomain: str
    dense: np.ndarray
    window: Window

    @property
    def shape(self):
        return self.dense.shape


def margin_for(n_blocks: int, *symbols) -> int:
    """Conservative exact margin: N minus the sum of support widths."""
    total = 0
    for sym in symbols:
        if isinstance(sym, LaurentPoly):
            total += sym.width()
        else:
            total += 1
    return max(0, n_blocks - total)


def _fill_block_diagonal(dense, offset, block, n_blocks):
    """Place ``block`` on every window position with row - col == offset."""
    br, bc = block.shape
    if abs(offset) > n_blocks - 1:
        return
    j0 = max(0, -offset)
    i0 = j0 + offset
    for t in range(n_blocks - abs(offset)):
        i, j = i0 + t, j0 + t
        dense[i * br : (i + 1) * br, j * bc : (j + 1) * bc] = block


def build(kind: OpKind, symbol, n_blocks: int, space: str = "plus") -> StructuredOp:
    """Assemble the dense N-block window of a structured operator.

    ``symbol`` is a LaurentPoly for the Toeplitz/Hankel kinds, a square
    matrix r0 for DIAG_DELTA, and a block dimension (int) for the shifts.
    ``space`` is only consulted for DIAG_DELTA, which lives on a single
    space.  A window narrower than the symbol support is not an error; it
    just comes back with margin 0.
    """
    N = int(n_blocks)
    if N < 1:
        raise ShapeError("window must retain at least one block")

    if kind in (OpKind.SHIFT_PLUS, OpKind.SHIFT_MINUS):
        n = int(symbol)
        dense = np.zeros((N * n, N * n), dtype=complex)
        offset = 1 if kind is OpKind.SHIFT_PLUS else -1
        _fill_block_diagonal(dense, offset, np.eye(n, dtype=complex), N)
        domain, codomain = _SPACES[kind]
        return StructuredOp(kind, n, N, (n, n), domain, codomain, dense, Window(N, N - 1))

    if kind is OpKind.DIAG_DELTA:
        r0 = as_matrix(symbol)
        if r0.shape[0] != r0.shape[1]:
            raise ShapeError("diagonal operator needs a square block")
        n = r0.shape[0]
        dense = np.kron(np.eye(N), r0)
        return StructuredOp(kind, r0, N, (n, n), space, space, dense, Window(N, N))

    if not isinstance(symbol, LaurentPoly):
        symbol = LaurentPoly.constant(symbol)
    br, bc = symbol.rows, symbol.cols
    dense = np.zeros((N * br, N * bc), dtype=complex)
    if kind is OpKind.TOEPLITZ_PLUS or kind is OpKind.TOEPLITZ_MINUS:
        anchor = 0
    elif kind is OpKind.HANKEL_PLUS:
        anchor = -(N - 1)  # window offset = degree - (N - 1)
    elif kind is OpKind.HANKEL_MINUS:
        anchor = N - 1
    else:  # pragma: no cover
        raise ValueError(f"unknown kind {kind}")
    for deg in symbol.degrees():
        _fill_block_diagonal(dense, deg + anchor, symbol.coeff(deg), N)
    domain, codomain = _SPACES[kind]
    window = Window(N, margin_for(N, symbol))
    return StructuredOp(kind, symbol, N, (br, bc), domain, codomain, dense, window)


def apply_column(op: StructuredOp, blocks) -> list:
    """Apply the windowed operator to a block column.

    ``blocks`` is a sequence of N matrices with op.block_shape[1] rows;
    the result is the block form of the dense matrix-vector product.
    """
    N = op.n_blocks
    blocks = [as_matrix(b) for b in blocks]
    if len(blocks) != N:
        raise ShapeError(f"expected {N} blocks, got {len(blocks)}")
    bc = op.block_shape[1]
    width = blocks[0].shape[1]
    for b in blocks:
        if b.shape != (bc, width):
            raise ShapeError(f"block shape {b.shape} does not match ({bc}, {width})")
    out = op.dense @ np.vstack(blocks)
    br = op.block_shape[0]
    return [out[i * br : (i + 1) * br, :] for i in range(N)]


def corner_slice(space: str, n_blocks: int, margin: int, block: int) -> slice:
    """Rows/columns of the exact corner for one space of the window."""
    if margin <= 0:
        return slice(0, 0)
    m = min(margin, n_blocks)
    if space == "plus":
        return slice(0, m * block)
    return slice((n_blocks - m) * block, n_blocks * block)


def restrict_to_margin(mat, codomain, domain, n_blocks, margin, block_rows, block_cols):
    """Sub-matrix of the window on which a truncated identity is exact."""
    rs = corner_slice(codomain, n_blocks, margin, block_rows)
    cs = corner_slice(domain, n_blocks, margin, block_cols)
    return mat[rs, cs]


def margin_residual(lhs, rhs, codomain, domain, n_blocks, margin, block_rows, block_cols):
    diff = lhs - rhs
    sub = restrict_to_margin(diff, codomain, domain, n_blocks, margin, block_rows, block_cols)
    if sub.size == 0:
        return float("nan")
    return float(np.max(np.abs(sub)))


def check_product_rules(rho: LaurentPoly, phi: LaurentPoly, n_blocks: int) -> dict:
    """Residuals of the four Toeplitz/Hankel product identities.

    The identities relate the window of a product symbol to products of
    windows; they hold exactly on the margin sub-window.  Returns a dict
    with one residual per identity, the window used and an inconclusive
    flag when the margin is empty.
    """
    if rho.cols != phi.rows:
        raise ShapeError("symbols do not compose")
    N = int(n_blocks)
    prod = rho * phi
    margin = margin_for(N, rho, phi)

    def dn(kind, sym):
        return build(kind, sym, N).dense

    tp, tm = OpKind.TOEPLITZ_PLUS, OpKind.TOEPLITZ_MINUS
    hp, hm = OpKind.HANKEL_PLUS, OpKind.HANKEL_MINUS
    n, m, k = rho.rows, rho.cols, phi.cols

    residuals = {
        "toeplitz_plus": margin_residual(
            dn(tp, prod),
            dn(tp, rho) @ dn(tp, phi) + dn(hp, rho.shifted(-1)) @ dn(hm, phi.shifted(1)),
            "plus", "plus", N, margin, n, k,
        ),
        "hankel_plus": margin_residual(
            dn(hp, prod.shifted(-1)),
            dn(hp, rho.shifted(-1)) @ dn(tm, phi) + dn(tp, rho) @ dn(hp, phi.shifted(-1)),
            "plus", "minus", N, margin, n, k,
        ),
        "hankel_minus": margin_residual(
            dn(hm, prod.shifted(1)),
            dn(tm, rho) @ dn(hm, phi.shifted(1)) + dn(hm, rho.shifted(1)) @ dn(tp, phi),
            "minus", "plus", N, margin, n, k,
        ),
        "toeplitz_minus": margin_residual(
            dn(tm, prod),
            dn(tm, rho) @ dn(tm, phi) + dn(hm, rho.shifted(1)) @ dn(hp, phi.shifted(-1)),
            "minus", "minus", N, margin, n, k,
        ),
    }
    return {
        "residuals": residuals,
        "window": Window(N, margin),
        "inconclusive": margin == 0,
    }


def check_shift_relations(rho: LaurentPoly, n_blocks: int) -> dict:
    """Residuals of the shift/Hankel rewrite rules on the margin window.

    Checks S-* H-(rho) = H-(z rho) and S+* H+(rho) = H+(rho / z).
    """
    N = int(n_blocks)
    margin = margin_for(N, rho)
    n, m = rho.rows, rho.cols
    sm = build(OpKind.SHIFT_MINUS, n, N).dense
    sp = build(OpKind.SHIFT_PLUS, n, N).dense
    res_minus = margin_residual(
        sm.conj().T @ build(OpKind.HANKEL_MINUS, rho, N).dense,
        build(OpKind.HANKEL_MINUS, rho.shifted(1), N).dense,
        "minus", "plus", N, margin, n, m,
    )
    res_plus = margin_residual(
        sp.conj().T @ build(OpKind.HANKEL_PLUS, rho, N).dense,
        build(OpKind.HANKEL_PLUS, rho.shifted(-1), N).dense,
        "plus", "minus", N, margin, n, m,
    )
    return {
        "residuals": {"minus": res_minus, "plus": res_plus},
        "window": Window(N, margin),
        "inconclusive": margin == 0,
    }


def hankel_shift_intertwine_residuals(rho: LaurentPoly, n_blocks: int) -> dict:
    """Residuals of S+* H+ = H+ S- and S-* H- = H- S+ off the far edge.

    The relations hold exactly except possibly on the last block row and
    column of the window, which is what gets excluded here.
    """
    N = int(n_blocks)
    n, m = rho.rows, rho.cols
    hp = build(OpKind.HANKEL_PLUS, rho, N).dense
    hm = build(OpKind.HANKEL_MINUS, rho, N).dense
    sp_n = build(OpKind.SHIFT_PLUS, n, N).dense
    sm_m = build(OpKind.SHIFT_MINUS, m, N).dense
    sm_n = build(OpKind.SHIFT_MINUS, n, N).dense
    sp_m = build(OpKind.SHIFT_PLUS, m, N).dense

    d_plus = sp_n.conj().T @ hp - hp @ sm_m
    d_minus = sm_n.conj().T @ hm - hm @ sp_m
    # plus relation: drop the last plus row block and the first minus column
    # block (the far edges of each space).
    res_plus = float(np.max(np.abs(d_plus[: (N - 1) * n, m:]))) if N > 1 else 0.0
    res_minus = float(np.max(np.abs(d_minus[n:, : (N - 1) * m]))) if N > 1 else 0.0
    return {"plus": res_plus, "minus": res_minus}
