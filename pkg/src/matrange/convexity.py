"""Matrix-range membership, inclusion, separation, and polytope bodies.

Membership of a point tuple B in the matrix range of A is the existence of
a unital completely positive map sending the coordinates of A to those of
B.  That existence is a semidefinite feasibility problem on the Choi matrix
of the map, with unitality and interpolation constraints on the Hermitian
coordinates.  An infeasibility certificate converts into a separating
linear pencil, reported at the level of B and valid on the whole range
because pencil inequalities are preserved by UCP maps.

Choi convention (locked by a golden test): the Choi matrix of a map
Phi: M_n -> M_m is C = sum_{ii'} E_ii' (x) Phi(E_ii') of side n*m in
input (x) output order, and Phi(X) = Tr_in[(X^T (x) I) C].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .decomp import commutant_dim, irreducible_decomposition
from .errors import (
    CertificateError,
    DimensionError,
    NoGapError,
    NotSeparableError,
)
from .matcore import MatrixTuple, direct_sum_all, frob, herm_split
from .sdp import (
    BlockProgram,
    SolveOptions,
    detect_blocks,
    hermitian_basis,
    solve_feasibility,
)

FEAS_TOL = 1e-7
VALIDATE_TOL = 1e-6

IN = "in"
OUT = "out"
MARGINAL = "marginal"

BOUNDARY_IN = "in"
BOUNDARY_MARGINAL = "marginal"


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChoiCertificate:
    """PSD Choi matrix of a UCP map, side n_in * m_out, input (x) output."""

    choi: np.ndarray
    map_dims: tuple  # (n_in, m_out)

    @property
    def n_in(self) -> int:
        return self.map_dims[0]

    @property
    def m_out(self) -> int:
        return self.map_dims[1]

    def apply(self, x: np.ndarray) -> np.ndarray:
        n, m = self.map_dims
        c4 = self.choi.reshape(n, m, n, m)
        return np.einsum("ij,irjs->rs", np.asarray(x, dtype=complex), c4)

    def unitality_residual(self) -> float:
        return frob(self.apply(np.eye(self.n_in)) - np.eye(self.m_out))

    def min_eig(self) -> float:
        c = (self.choi + self.choi.conj().T) / 2.0
        return float(np.linalg.eigvalsh(c)[0])

    def to_dict(self) -> dict:
        c = self.choi
        return {
            "map_dims": [self.n_in, self.m_out],
            "choi": [[[float(c[r, q].real), float(c[r, q].imag)]
                      for q in range(c.shape[1])] for r in range(c.shape[0])],
        }


def choi_of_compression(v: np.ndarray) -> ChoiCertificate:
    """Choi matrix of X -> V* X V for an isometry V (n x m)."""
    v = np.asarray(v, dtype=complex)
    if v.ndim == 1:
        v = v.reshape(-1, 1)
    n, m = v.shape
    w = v.conj().reshape(-1)  # w[(i,r)] = conj(V[i,r]), input-major
    return ChoiCertificate(choi=np.outer(w, w.conj()), map_dims=(n, m))


def assemble_output_blocks(n_in: int, m_out: int,
                           pieces: Sequence[tuple]) -> ChoiCertificate:
    """Choi of Phi(X) = sum_b W_b Phi_b(X) W_b* from per-block certificates.

    pieces: (ChoiCertificate for Phi_b, W_b) with W_b an m_out x m_b isometry
    onto the b-th output slot.
    """
    c = np.zeros((n_in * m_out, n_in * m_out), dtype=complex)
    eye = np.eye(n_in, dtype=complex)
    for cert, w in pieces:
        lift = np.kron(eye, np.asarray(w, dtype=complex))
        c += lift @ cert.choi @ lift.conj().T
    return ChoiCertificate(choi=c, map_dims=(n_in, m_out))


@dataclass(frozen=True)
class Pencil:
    """Affine matrix pencil L(X) = sum_j G_j (x) X_j + offset (x) I.

    Coefficients act on the Hermitian coordinates of a tuple (raw
    coordinates when the tuple is Hermitian, interleaved real/imaginary
    parts otherwise).  The defining inequalities are lambda_max(L) <= 1 on
    the range side and > 1 at the separated point.  A zero offset is the
    plain form sum G_j (x) X_j <= I; a nonzero offset records the interior
    point translation in original coordinates.
    """

    coeffs: np.ndarray  # (D, k, k)
    offset: np.ndarray  # (k, k)
    level: int
    hermitian_input: bool = True

    @property
    def d(self) -> int:
        return self.coeffs.shape[0]

    def coordinates_of(self, t: MatrixTuple) -> np.ndarray:
        coords = t.mats if self.hermitian_input else t.herm_form
        if coords.shape[0] != self.d:
            raise DimensionError(
                f"pencil consumes {self.d} coordinates, tuple offers "
                f"{coords.shape[0]}")
        return coords

    def evaluate(self, t: MatrixTuple) -> np.ndarray:
        coords = self.coordinates_of(t)
        n = t.n
        out = np.kron(self.offset, np.eye(n, dtype=complex))
        for g, x in zip(self.coeffs, coords):
            out = out + np.kron(g, x)
        return out

    def max_eig(self, t: MatrixTuple) -> float:
        m = self.evaluate(t)
        return float(np.linalg.eigvalsh((m + m.conj().T) / 2.0)[-1])

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "d": int(self.d),
            "hermitian_input": self.hermitian_input,
            "coeffs": [[[[float(g[r, c].real), float(g[r, c].imag)]
                         for c in range(self.level)] for r in range(self.level)]
                       for g in self.coeffs],
            "offset": [[[float(self.offset[r, c].real),
                         float(self.offset[r, c].imag)]
                        for c in range(self.level)] for r in range(self.level)],
        }


@dataclass(frozen=True)
class MembershipVerdict:
    status: str
    margin: float
    witness: Optional[ChoiCertificate] = None
    separator: Optional[Pencil] = None
    separator_violation: Optional[float] = None
    detail: dict = field(default_factory=dict)

    @property
    def is_in(self) -> bool:
        return self.status == IN

    @property
    def is_out(self) -> bool:
        return self.status == OUT

    @property
    def is_marginal(self) -> bool:
        return self.status == MARGINAL

    def to_dict(self) -> dict:
        margin = float(self.margin)
        doc = {"status": self.status,
               "margin": margin if np.isfinite(margin) else None}
        if self.witness is not None:
            doc["witness"] = self.witness.to_dict()
        if self.separator is not None:
            doc["separator"] = self.separator.to_dict()
            doc["violation"] = float(self.separator_violation)
        return doc


# ---------------------------------------------------------------------------
# Coordinate hygiene: shared Hermitian coordinates, affine relations,
# interior translation
# ---------------------------------------------------------------------------

def _shared_coords(point: MatrixTuple, rng_t: MatrixTuple):
    """Hermitian coordinate arrays for both tuples, split consistently."""
    if point.d != rng_t.d:
        raise DimensionError(
            f"coordinate counts differ: point d={point.d}, range d={rng_t.d}")
    if point.is_hermitian and rng_t.is_hermitian:
        return point.mats, rng_t.mats, True
    return herm_split(point).mats, herm_split(rng_t).mats, False


def find_relations(coords: np.ndarray, tol: float = 1e-10) -> list[tuple]:
    """Affine relations sum_j alpha_j H_j = beta I satisfied by the range
    coordinates, each normalized to |alpha| = 1."""
    dd, n, _ = coords.shape
    cols = [np.eye(n, dtype=complex).reshape(-1)]
    cols += [coords[j].reshape(-1) for j in range(dd)]
    mat = np.stack(cols, axis=1)
    real = np.vstack([mat.real, mat.imag])
    u, s, vh = np.linalg.svd(real, full_matrices=True)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    out = []
    for i in range(vh.shape[0]):
        if i < len(s) and s[i] > tol * scale:
            continue
        v = vh[i]
        alpha = v[1:]
        nrm = float(np.linalg.norm(alpha))
        if nrm < tol:
            continue
        out.append((alpha / nrm, -float(v[0]) / nrm))
    return out


@dataclass(frozen=True)
class CoordinateFrame:
    """Kept coordinate indices, interior translation, and dropped relations."""

    total: int
    kept: tuple
    center: np.ndarray  # length total; zero on dropped coordinates
    relations: tuple    # of (alpha over all coords, beta)
    hermitian_input: bool

    @property
    def reduced_dim(self) -> int:
        return len(self.kept)


def build_frame(range_coords: np.ndarray, hermitian_input: bool) -> CoordinateFrame:
    dd, n, _ = range_coords.shape
    kept = list(range(dd))
    relations: list[tuple] = []
    while len(kept) > 0:
        rels = find_relations(range_coords[kept])
        if not rels:
            break
        alpha_red, beta = rels[0]
        alpha = np.zeros(dd)
        for idx, j in enumerate(kept):
            alpha[j] = alpha_red[idx]
        relations.append((alpha, beta))
        kept.remove(kept[int(np.argmax(np.abs(alpha_red)))])
    center = np.zeros(dd)
    for j in kept:
        center[j] = float(np.trace(range_coords[j]).real) / n
    return CoordinateFrame(total=dd, kept=tuple(kept), center=center,
                           relations=tuple(relations),
                           hermitian_input=hermitian_input)


def _relation_pencil(frame: CoordinateFrame, alpha: np.ndarray, beta: float,
                     violation: np.ndarray, level: int) -> tuple[Pencil, float]:
    """Level-`level` pencil from a violated affine relation of the range."""
    evals = np.linalg.eigvalsh((violation + violation.conj().T) / 2.0)
    lam = float(evals[-1]) if abs(evals[-1]) >= abs(evals[0]) else float(evals[0])
    gamma = 2.0 / lam  # signed so the violated side evaluates to 2
    eye = np.eye(level, dtype=complex)
    coeffs = np.stack([gamma * alpha[j] * eye for j in range(frame.total)])
    offset = -gamma * beta * eye
    pencil = Pencil(coeffs=coeffs, offset=offset, level=level,
                    hermitian_input=frame.hermitian_input)
    return pencil, 1.0


# ---------------------------------------------------------------------------
# Choi feasibility program
# ---------------------------------------------------------------------------

def _choi_program(range_coords: np.ndarray, point_coords: np.ndarray,
                  frame: CoordinateFrame) -> tuple[BlockProgram, list, int]:
    """Feasibility program for a UCP map interpolating the kept coordinates,
    with the range side split along its block-diagonal support."""
    n = range_coords.shape[1]
    m = point_coords.shape[1]
    kept = list(frame.kept)
    shifted_range = [range_coords[j] - frame.center[j] * np.eye(n) for j in kept]
    shifted_point = [point_coords[j] - frame.center[j] * np.eye(m) for j in kept]

    comps = detect_blocks(shifted_range, n)
    basis = hermitian_basis(m)
    rows_per_block: list[list[np.ndarray]] = [[] for _ in comps]
    bvals: list[float] = []
    eye_m = np.eye(m)
    for p, e in enumerate(basis):
        for bi, idx in enumerate(comps):
            rows_per_block[bi].append(np.kron(np.eye(len(idx)), e))
        bvals.append(float(np.einsum("ij,ij->", e.conj(), eye_m).real))
    for h, k in zip(shifted_range, shifted_point):
        for e in basis:
            for bi, idx in enumerate(comps):
                rows_per_block[bi].append(np.kron(h[np.ix_(idx, idx)].T, e))
            bvals.append(float(np.einsum("ij,ij->", e.conj(), k).real))
    prog = BlockProgram(
        sizes=tuple(len(idx) * m for idx in comps),
        F=[np.stack(rows) for rows in rows_per_block],
        b=np.array(bvals),
    )
    return prog, comps, m


def _assemble_choi(blocks: list, comps: list, n: int, m: int) -> ChoiCertificate:
    c = np.zeros((n * m, n * m), dtype=complex)
    for xb, idx in zip(blocks, comps):
        lift = np.zeros((n * m, len(idx) * m), dtype=complex)
        for a, i in enumerate(idx):
            lift[i * m : (i + 1) * m, a * m : (a + 1) * m] = np.eye(m)
        c += lift @ xb @ lift.conj().T
    return ChoiCertificate(choi=c, map_dims=(n, m))


def _farkas_pencil(farkas_y: np.ndarray, frame: CoordinateFrame, m: int,
                   t_star: float) -> Pencil:
    """Convert the Farkas certificate of the Choi program into a pencil.

    The multipliers regroup into Hermitian Z_0 (unitality block) and Z_j
    (one per kept coordinate) with I (x) Z_0 + sum_j H_j^T (x) Z_j PSD on
    the range and a strictly negative value at the point.  Conjugating and
    swapping tensor factors turns this into the affine pencil
    Q (x) I + sum_j conj(Z_j) (x) X_j >= 0 around the translated origin,
    and Q > 0 because the translated origin is interior; normalizing by
    Q^{-1/2} yields the lambda_max form.
    """
    basis = hermitian_basis(m)
    mm = m * m
    z0 = sum(farkas_y[p] * basis[p] for p in range(mm))
    zs = []
    for r, _ in enumerate(frame.kept):
        off = (r + 1) * mm
        zs.append(sum(farkas_y[off + p] * basis[p] for p in range(mm)))

    q = z0.conj()
    zbar = [z.conj() for z in zs]
    # regularize the joint kernel so Q is strictly positive definite
    evals, evecs = np.linalg.eigh((q + q.conj().T) / 2.0)
    qscale = max(float(evals[-1]), 1e-30)
    small = evals < 1e-12 * qscale
    if np.any(small):
        budget = abs(t_star) / (4.0 * max(1, int(small.sum())))
        delta = min(budget, 1e-6 * qscale) if t_star < 0 else 1e-12 * qscale
        delta = max(delta, 1e-30)
        proj = evecs[:, small] @ evecs[:, small].conj().T
        q = q + delta * proj
        evals, evecs = np.linalg.eigh((q + q.conj().T) / 2.0)
    inv_sqrt = evecs @ np.diag(1.0 / np.sqrt(np.maximum(evals, 1e-300))) \
        @ evecs.conj().T

    coeffs = np.zeros((frame.total, m, m), dtype=complex)
    for r, j in enumerate(frame.kept):
        g = -inv_sqrt @ zbar[r] @ inv_sqrt
        coeffs[j] = (g + g.conj().T) / 2.0
    # back to original coordinates: the translation folds into the offset
    offset = np.zeros((m, m), dtype=complex)
    for j in frame.kept:
        offset -= frame.center[j] * coeffs[j]
    return Pencil(coeffs=coeffs, offset=(offset + offset.conj().T) / 2.0,
                  level=m, hermitian_input=frame.hermitian_input)


def _pad_pencil(p: Pencil, level: int) -> Pencil:
    """Zero-pad coefficients to a larger level; max-eigenvalue bounds keep."""
    if p.level == level:
        return p
    if p.level > level:
        raise DimensionError("cannot shrink a pencil")
    coeffs = np.zeros((p.d, level, level), dtype=complex)
    coeffs[:, : p.level, : p.level] = p.coeffs
    offset = np.zeros((level, level), dtype=complex)
    offset[: p.level, : p.level] = p.offset
    return Pencil(coeffs=coeffs, offset=offset, level=level,
                  hermitian_input=p.hermitian_input)


# ---------------------------------------------------------------------------
# Certificate validation (independent of the solve path; raises on failure)
# ---------------------------------------------------------------------------

def validate_witness(cert: ChoiCertificate, range_coords: np.ndarray,
                     point_coords: np.ndarray, tol: float = VALIDATE_TOL) -> None:
    scale = max(1.0, float(np.abs(range_coords).max()),
                float(np.abs(point_coords).max()))
    lam = cert.min_eig()
    if lam < -10 * FEAS_TOL * max(1.0, frob(cert.choi)):
        raise CertificateError(f"Choi witness has eigenvalue {lam}")
    if cert.unitality_residual() > tol * scale:
        raise CertificateError("Choi witness is not unital within tolerance")
    for h, k in zip(range_coords, point_coords):
        resid = frob(cert.apply(h) - k)
        if resid > tol * scale:
            raise CertificateError(
                f"Choi witness interpolation residual {resid} exceeds tolerance")


def validate_separator(pencil: Pencil, range_tuple: MatrixTuple,
                       point: MatrixTuple, tol: float = VALIDATE_TOL
                       ) -> tuple[float, float]:
    on_range = pencil.max_eig(range_tuple)
    at_point = pencil.max_eig(point)
    if on_range > 1.0 + tol:
        raise CertificateError(
            f"separator exceeds 1 on the range: lambda_max = {on_range}")
    if at_point <= 1.0 + FEAS_TOL:
        raise CertificateError(
            f"separator does not violate at the point: lambda_max = {at_point}")
    return on_range, at_point


# ---------------------------------------------------------------------------
# Membership / inclusion
# ---------------------------------------------------------------------------

def _fast_subblock_witness(point: MatrixTuple, rng_t: MatrixTuple,
                           tol: float = 1e-12) -> Optional[ChoiCertificate]:
    """Witness when the point literally equals a block of the range."""
    n, m = rng_t.n, point.n
    if m > n:
        return None
    scale = max(1.0, float(np.abs(rng_t.mats).max()),
                float(np.abs(point.mats).max()))
    candidates: list[np.ndarray] = []
    if m == n:
        candidates.append(np.arange(n))
    comps = detect_blocks(list(rng_t.mats) + [m_.conj().T for m_ in rng_t.mats], n)
    candidates.extend(idx for idx in comps if len(idx) == m)
    for idx in candidates:
        sub = rng_t.mats[:, idx[:, None], idx[None, :]]
        if float(np.abs(sub - point.mats).max()) <= tol * scale:
            v = np.zeros((n, m), dtype=complex)
            v[idx, np.arange(m)] = 1.0
            return choi_of_compression(v)
    return None


def membership(point: MatrixTuple, rng_t: MatrixTuple, *,
               feas_tol: float = FEAS_TOL,
               boundary: str = BOUNDARY_IN,
               split_point: bool = True,
               solve_opts: Optional[SolveOptions] = None) -> MembershipVerdict:
    """Is the point tuple in the matrix range of rng_t?

    In-verdicts carry a validated Choi witness, Out-verdicts a validated
    separating pencil at the level of the point; boundary cases within
    feas_tol resolve to In under boundary="in" (ranges are closed) and to
    Marginal under boundary="marginal".
    """
    point_coords, range_coords, hermitian_input = _shared_coords(point, rng_t)
    opts = solve_opts or SolveOptions(feas_tol=feas_tol)

    # range-side affine relations must be satisfied by any member
    frame = build_frame(range_coords, hermitian_input)
    scale = max(1.0, float(np.abs(range_coords).max()),
                float(np.abs(point_coords).max()))
    for alpha, beta in frame.relations:
        viol = sum(alpha[j] * point_coords[j] for j in range(frame.total)) \
            - beta * np.eye(point.n)
        vnorm = frob(viol)
        if vnorm > feas_tol * scale:
            pencil, violation = _relation_pencil(frame, alpha, beta, viol, point.n)
            validate_separator(pencil, rng_t, point)
            return MembershipVerdict(status=OUT, margin=vnorm, separator=pencil,
                                     separator_violation=violation,
                                     detail={"relation_violation": vnorm})

    if boundary == BOUNDARY_IN:
        fast = _fast_subblock_witness(point, rng_t)
        if fast is not None:
            validate_witness(fast, range_coords, point_coords)
            return MembershipVerdict(status=IN, margin=0.0, witness=fast,
                                     detail={"witness_path": "subblock"})

    if split_point and point.n > 1 and commutant_dim(point) > 1:
        return _membership_split_point(point, rng_t, point_coords, range_coords,
                                       frame, feas_tol, boundary, opts)

    prog, comps, m = _choi_program(range_coords, point_coords, frame)
    feas = solve_feasibility(prog, opts)
    t_star = feas.t_star
    if not feas.resolves(feas_tol):
        return MembershipVerdict(status=MARGINAL, margin=t_star,
                                 detail={"solver_stalled": True})

    if t_star > feas_tol:
        cert = _assemble_choi(feas.X, comps, rng_t.n, m)
        validate_witness(cert, range_coords, point_coords)
        return MembershipVerdict(status=IN, margin=t_star, witness=cert)
    if t_star >= -feas_tol:
        if boundary == BOUNDARY_IN and feas.X is not None:
            cert = _assemble_choi(feas.X, comps, rng_t.n, m)
            try:
                validate_witness(cert, range_coords, point_coords)
            except CertificateError:
                return MembershipVerdict(status=MARGINAL, margin=t_star)
            return MembershipVerdict(status=IN, margin=t_star, witness=cert)
        return MembershipVerdict(status=MARGINAL, margin=t_star)

    pencil = _farkas_pencil(feas.farkas_y, frame, m, t_star)
    try:
        _, at_point = validate_separator(pencil, rng_t, point)
    except CertificateError:
        return MembershipVerdict(status=MARGINAL, margin=t_star,
                                 detail={"separator_failed_validation": True})
    return MembershipVerdict(status=OUT, margin=abs(t_star), separator=pencil,
                             separator_violation=at_point - 1.0)


def _membership_split_point(point, rng_t, point_coords, range_coords, frame,
                            feas_tol, boundary, opts) -> MembershipVerdict:
    """Reduce a reducible point to its irreducible summands.

    The point lies in the range exactly when every summand does; witnesses
    reassemble through the decomposition unitary and separators lift by
    zero padding.
    """
    dec = irreducible_decomposition(point, seed=7)
    u = dec.unitary
    pieces = []
    offset = 0
    worst = np.inf
    for blk, mult in dec.blocks:
        sub = membership(blk, rng_t, feas_tol=feas_tol, boundary=boundary,
                         split_point=False, solve_opts=opts)
        if sub.is_out:
            lifted = _pad_pencil(sub.separator, point.n)
            _, at_point = validate_separator(lifted, rng_t, point)
            return MembershipVerdict(status=OUT, margin=sub.margin,
                                     separator=lifted,
                                     separator_violation=at_point - 1.0,
                                     detail={"out_summand_size": blk.n})
        if sub.is_marginal:
            return MembershipVerdict(status=MARGINAL, margin=sub.margin)
        worst = min(worst, sub.margin)
        for _ in range(mult):
            w = u[:, offset : offset + blk.n]
            pieces.append((sub.witness, w))
            offset += blk.n
    cert = assemble_output_blocks(rng_t.n, point.n, pieces)
    validate_witness(cert, range_coords, point_coords)
    return MembershipVerdict(status=IN, margin=worst, witness=cert,
                             detail={"witness_path": "point_split"})


def inclusion(a: MatrixTuple, b: MatrixTuple, **kwargs) -> MembershipVerdict:
    """W(a) subseteq W(b), decided as membership of a in W(b) at level a.n."""
    return membership(a, b, **kwargs)


def separating_pencil(rng_t: MatrixTuple, point: MatrixTuple, *,
                      feas_tol: float = FEAS_TOL,
                      solve_opts: Optional[SolveOptions] = None
                      ) -> tuple[Pencil, float]:
    """Pencil at the point's level with lambda_max <= 1 on W(rng_t) and
    >= 1 + margin at the point.  Raises NotSeparableError unless the
    membership verdict is Out."""
    verdict = membership(point, rng_t, feas_tol=feas_tol,
                         boundary=BOUNDARY_MARGINAL, solve_opts=solve_opts)
    if not verdict.is_out:
        raise NotSeparableError(
            f"membership verdict is '{verdict.status}', not out")
    return verdict.separator, verdict.separator_violation


def exposing_pencil(summands: Sequence[MatrixTuple], index: int, *,
                    feas_tol: float = FEAS_TOL,
                    solve_opts: Optional[SolveOptions] = None
                    ) -> tuple[Pencil, float]:
    """Pencil touching the chosen summand at 1 while every other summand
    stays below 1 - eps; returns (pencil, eps).

    Raises NoGapError when the chosen summand is not separated from the
    others at feas_tol, which is the numerical signature of a redundant
    (non-crucial) summand.
    """
    if not 0 <= index < len(summands):
        raise DimensionError("summand index out of range")
    y = summands[index]
    others = [s for i, s in enumerate(summands) if i != index]
    if not others:
        return _lone_exposing_pencil(y), 1.0
    rest = direct_sum_all(others)
    try:
        pencil, _ = separating_pencil(rest, y, feas_tol=feas_tol,
                                      solve_opts=solve_opts)
    except NotSeparableError as exc:
        raise NoGapError(
            "no exposing gap: summand is inside the hull of the others "
            f"({exc})") from exc
    lam_y = pencil.max_eig(y)
    scaled = Pencil(coeffs=pencil.coeffs / lam_y, offset=pencil.offset / lam_y,
                    level=pencil.level, hermitian_input=pencil.hermitian_input)
    eps = 1.0 - max(scaled.max_eig(x) for x in others)
    if eps <= feas_tol:
        raise NoGapError(f"exposing gap {eps} is below tolerance {feas_tol}")
    touch = scaled.max_eig(y)
    if abs(touch - 1.0) > VALIDATE_TOL:
        raise CertificateError(f"exposing pencil touch value {touch} != 1")
    return scaled, eps


def _lone_exposing_pencil(y: MatrixTuple) -> Pencil:
    """Touching pencil for a single summand: coefficients proportional to the
    centered coordinates themselves."""
    coords = y.mats if y.is_hermitian else y.herm_form
    dd, m, _ = coords.shape
    centered = np.stack([h - (np.trace(h).real / m) * np.eye(m) for h in coords])
    if frob(centered) < 1e-12:
        # the summand is a multiple of the identity in every coordinate;
        # expose with the unitality direction
        coeffs = np.zeros((dd, m, m), dtype=complex)
        return Pencil(coeffs=coeffs, offset=np.eye(m, dtype=complex), level=m,
                      hermitian_input=y.is_hermitian)
    raw = Pencil(coeffs=np.stack([h.conj() for h in centered]),
                 offset=np.zeros((m, m), dtype=complex), level=m,
                 hermitian_input=y.is_hermitian)
    lam = raw.max_eig(y)
    if lam <= 0:
        raise NoGapError("could not orient a touching pencil")
    return Pencil(coeffs=raw.coeffs / lam, offset=raw.offset / lam, level=m,
                  hermitian_input=y.is_hermitian)


# ---------------------------------------------------------------------------
# Polytope bodies, Wmin and Wmax
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolytopeBody:
    """Convex polytope in R^dim, by vertices and/or halfspaces a.x <= b."""

    dim: int
    vertices: tuple = ()
    halfspaces: tuple = ()

    def __post_init__(self):
        vs = tuple(tuple(float(c) for c in v) for v in self.vertices)
        if any(len(v) != self.dim for v in vs):
            raise DimensionError("vertex dimension mismatch")
        hs = tuple((tuple(float(c) for c in a), float(b))
                   for a, b in self.halfspaces)
        if any(len(a) != self.dim for a, _ in hs):
            raise DimensionError("halfspace dimension mismatch")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "halfspaces", hs)

    def require_vertices(self):
        if not self.vertices:
            raise DimensionError("polytope has no vertex representation")

    def require_halfspaces(self):
        if not self.halfspaces:
            raise DimensionError("empty H-representation")

    def vertex_flags(self) -> list[bool]:
        """LP cross-check: flag points that are genuine hull vertices."""
        self.require_vertices()
        pts = np.array(self.vertices)
        flags = []
        for i in range(len(pts)):
            others = np.delete(pts, i, axis=0)
            flags.append(not _in_hull(pts[i], others))
        return flags

    def to_dict(self) -> dict:
        doc: dict = {"dim": self.dim}
        if self.vertices:
            doc["vertices"] = [list(v) for v in self.vertices]
        if self.halfspaces:
            doc["halfspaces"] = [{"a": list(a), "b": b} for a, b in self.halfspaces]
        return doc


def polytope_from_dict(doc: dict) -> PolytopeBody:
    return PolytopeBody(
        dim=int(doc["dim"]),
        vertices=tuple(tuple(v) for v in doc.get("vertices", [])),
        halfspaces=tuple((tuple(h["a"]), float(h["b"]))
                         for h in doc.get("halfspaces", [])),
    )


def _in_hull(point: np.ndarray, pts: np.ndarray, tol: float = 1e-9) -> bool:
    if len(pts) == 0:
        return False
    a_eq = np.vstack([pts.T, np.ones(len(pts))])
    b_eq = np.concatenate([point, [1.0]])
    res = linprog(c=np.zeros(len(pts)), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * len(pts), method="highs")
    return bool(res.status == 0)


def square_halfspaces(dim: int = 2) -> list:
    out = []
    for j in range(dim):
        a = [0.0] * dim
        a[j] = 1.0
        out.append((tuple(a), 1.0))
        a2 = [0.0] * dim
        a2[j] = -1.0
        out.append((tuple(a2), 1.0))
    return out


def vertex_tuple(k: PolytopeBody) -> MatrixTuple:
    """Diagonal tuple over the vertices of K; its matrix range is Wmin(K)."""
    k.require_vertices()
    vs = sorted(k.vertices)
    mats = [np.diag([complex(v[j]) for v in vs]) for j in range(k.dim)]
    return MatrixTuple.from_mats(mats)


def wmin_membership(x: MatrixTuple, k: PolytopeBody, **kwargs) -> MembershipVerdict:
    """Membership in Wmin(K): a positive spectral decomposition over the
    vertices, decided through the vertex-diagonal tuple."""
    if x.d != k.dim:
        raise DimensionError(f"tuple has d={x.d} but polytope dim={k.dim}")
    if not x.is_hermitian:
        raise DimensionError("wmin membership needs Hermitian coordinates")
    return membership(x, vertex_tuple(k), **kwargs)


def wmax_membership(x: MatrixTuple, k: PolytopeBody, *,
                    feas_tol: float = FEAS_TOL,
                    boundary: str = BOUNDARY_IN) -> MembershipVerdict:
    """Membership in Wmax(K): every halfspace a.x <= b of K holds as the
    operator inequality sum_j a_j X_j <= b I."""
    if x.d != k.dim:
        raise DimensionError(f"tuple has d={x.d} but polytope dim={k.dim}")
    if not x.is_hermitian:
        raise DimensionError("wmax membership needs Hermitian coordinates")
    k.require_halfspaces()
    scale = max(1.0, float(np.abs(x.mats).max()))
    slacks = []
    worst = (np.inf, None)
    for a, b in k.halfspaces:
        mat = sum(aj * x.mats[j] for j, aj in enumerate(a))
        lam = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)[-1])
        slack = b - lam
        slacks.append(slack)
        if slack < worst[0]:
            worst = (slack, (a, b, lam))
    margin = min(slacks)
    if margin > feas_tol * scale or (boundary == BOUNDARY_IN
                                     and margin >= -feas_tol * scale):
        return MembershipVerdict(status=IN, margin=margin,
                                 detail={"halfspace_slacks": slacks})
    if abs(margin) <= feas_tol * scale:
        return MembershipVerdict(status=MARGINAL, margin=margin,
                                 detail={"halfspace_slacks": slacks})
    a, b, lam = worst[1]
    pencil = _halfspace_pencil(np.array(a), b, k)
    validate_separator(pencil, vertex_tuple(k) if k.vertices else _wmax_probe(k),
                       x)
    return MembershipVerdict(status=OUT, margin=-margin, separator=pencil,
                             separator_violation=pencil.max_eig(x) - 1.0,
                             detail={"violated_halfspace": {"a": list(a), "b": b}})


def _wmax_probe(k: PolytopeBody) -> MatrixTuple:
    """A scalar tuple inside K, for separator validation when no vertices
    are stored."""
    c = _chebyshev_center(k)
    return MatrixTuple.scalar_point(c)


def _halfspace_pencil(a: np.ndarray, b: float, k: PolytopeBody) -> Pencil:
    dim = len(a)
    if b > 0:
        coeffs = np.stack([np.array([[complex(aj / b)]]) for aj in a])
        offset = np.zeros((1, 1), dtype=complex)
    else:
        c = _chebyshev_center(k)
        bprime = b - float(a @ c)
        if bprime <= 0:
            raise CertificateError("halfspace does not contain the interior point")
        coeffs = np.stack([np.array([[complex(aj / bprime)]]) for aj in a])
        offset = np.array([[complex(-(a @ c) / bprime)]])
    return Pencil(coeffs=coeffs, offset=offset, level=1, hermitian_input=True)


def _chebyshev_center(k: PolytopeBody) -> np.ndarray:
    if k.vertices:
        return np.mean(np.array(k.vertices), axis=0)
    k.require_halfspaces()
    a_ub = []
    b_ub = []
    for a, b in k.halfspaces:
        arr = np.asarray(a)
        a_ub.append(np.concatenate([arr, [float(np.linalg.norm(arr))]]))
        b_ub.append(b)
    c = np.zeros(k.dim + 1)
    c[-1] = -1.0
    res = linprog(c=c, A_ub=np.array(a_ub), b_ub=np.array(b_ub),
                  bounds=[(None, None)] * k.dim + [(0, None)], method="highs")
    if res.status != 0:
        raise CertificateError("could not locate an interior point of K")
    return res.x[: k.dim]


def hull_vertices(k: PolytopeBody) -> list[tuple]:
    """Distinct genuine hull vertices of K, in canonical (sorted) order."""
    k.require_vertices()
    pts = []
    for v in k.vertices:
        if not any(np.allclose(v, w, atol=1e-12) for w in pts):
            pts.append(v)
    body = PolytopeBody(dim=k.dim, vertices=tuple(pts))
    flags = body.vertex_flags()
    return sorted(v for v, keep in zip(body.vertices, flags) if keep)


def level1_hull_samples(t: MatrixTuple, num_random: int = 100_000,
                        num_angles: int = 360, seed: int = 0) -> np.ndarray:
    """Samples of the first level of a d=2 Hermitian tuple: quadratic forms
    v* H v over random unit vectors, enriched with extreme eigenvectors of
    directional combinations so the hull boundary is covered."""
    if t.d != 2 or not t.is_hermitian:
        raise DimensionError("level-1 sampling expects a Hermitian pair")
    h1, h2 = t.mats[0], t.mats[1]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((num_random, t.n)) + 1j * rng.standard_normal(
        (num_random, t.n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    xs = np.einsum("ki,ij,kj->k", v.conj(), h1, v).real
    ys = np.einsum("ki,ij,kj->k", v.conj(), h2, v).real
    extra = []
    for theta in np.linspace(0, 2 * np.pi, num_angles, endpoint=False):
        m = np.cos(theta) * h1 + np.sin(theta) * h2
        _, vecs = np.linalg.eigh(m)
        for w in (vecs[:, 0], vecs[:, -1]):
            extra.append((float((w.conj() @ h1 @ w).real),
                          float((w.conj() @ h2 @ w).real)))
    return np.vstack([np.stack([xs, ys], axis=1), np.array(extra)])


def planar_hull_verdict(samples: np.ndarray, point: Sequence[float],
                        band: float = 1e-3) -> str:
    """Point-in-hull test over sampled level-1 points: "in", "out", or
    "band" when within the stated distance of the hull boundary."""
    hull = ConvexHull(samples)
    eqs = hull.equations  # rows a.x + b <= 0 inside
    vals = eqs[:, :2] @ np.asarray(point) + eqs[:, 2]
    worst = float(vals.max())
    if abs(worst) <= band:
        return "band"
    return IN if worst < 0 else OUT
