"""Minimal presentations, crucial summand classification, and uniqueness.

A matrix tuple is minimal exactly when it is multiplicity-free and every
irreducible summand is crucial: outside the matrix range generated by the
other summands.  Minimal presentations of the same matrix range are
unitarily equivalent, and the unitary is recovered here by matching
summands through their intertwiners.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .convexity import (
    BOUNDARY_IN,
    ChoiCertificate,
    MembershipVerdict,
    Pencil,
    PolytopeBody,
    assemble_output_blocks,
    choi_of_compression,
    exposing_pencil,
    hull_vertices,
    membership,
    validate_witness,
    vertex_tuple,
)
from .decomp import (
    BlockDecomposition,
    canonical_key,
    irreducible_decomposition,
    unitary_equivalent,
)
from .errors import (
    CertificateError,
    DimensionError,
    IndeterminateError,
    NoGapError,
    NotEquivalentError,
    NotMinimalError,
)
from .matcore import (
    MatrixTuple,
    conjugate,
    direct_sum_all,
    frob,
    tuple_to_dict,
)
from .sdp import FEAS_TOL

EQUIV_TOL = 1e-6

CRUCIAL = "crucial"
REDUNDANT = "redundant"
REDUNDANT_DUPLICATE = "redundant_duplicate"
REDUNDANT_ABSORBED = "redundant_absorbed"


@dataclass(frozen=True)
class SummandReport:
    summand: MatrixTuple
    status: str
    exposing_gap: Optional[float] = None
    witness: Optional[ChoiCertificate] = None
    separator: Optional[Pencil] = None
    margin: float = 0.0

    def to_dict(self) -> dict:
        margin = float(self.margin)
        doc = {"size": self.summand.n, "status": self.status,
               "margin": margin if np.isfinite(margin) else None,
               "tuple": tuple_to_dict(self.summand)}
        if self.exposing_gap is not None:
            doc["exposing_gap"] = float(self.exposing_gap)
        if self.witness is not None:
            doc["witness"] = self.witness.to_dict()
        if self.separator is not None:
            doc["separator"] = self.separator.to_dict()
        return doc


@dataclass(frozen=True)
class MinimalReport:
    input: MatrixTuple
    minimal: MatrixTuple
    summands: tuple  # of SummandReport, crucial ones first in canonical order
    verified: bool
    decomposition: BlockDecomposition
    inclusion_witnesses: tuple = ()  # (input-in-minimal, minimal-in-input)

    @property
    def crucial(self) -> list[MatrixTuple]:
        return [s.summand for s in self.summands if s.status == CRUCIAL]

    @property
    def removed(self) -> list[SummandReport]:
        return [s for s in self.summands if s.status != CRUCIAL]

    def is_trivial(self) -> bool:
        """No duplicate and no absorbed summand was removed."""
        return not self.removed

    def to_dict(self) -> dict:
        return {
            "input_n": self.input.n,
            "minimal": tuple_to_dict(self.minimal),
            "summands": [s.to_dict() for s in self.summands],
            "verified": self.verified,
        }


@dataclass(frozen=True)
class EquivalenceWitness:
    unitary: np.ndarray
    block_permutation: tuple
    residual: float


def classify_crucial(index: int, summands: Sequence[MatrixTuple], *,
                     feas_tol: float = FEAS_TOL,
                     boundary: str = BOUNDARY_IN) -> tuple[str, MembershipVerdict]:
    """Crucial iff the summand lies outside the matrix range of the direct
    sum of the others.  Marginal verdicts raise IndeterminateError with the
    near-certificates attached."""
    if not 0 <= index < len(summands):
        raise DimensionError("summand index out of range")
    others = [s for i, s in enumerate(summands) if i != index]
    if not others:
        verdict = MembershipVerdict(status="out", margin=np.inf,
                                    detail={"lone_summand": True})
        return CRUCIAL, verdict
    verdict = membership(summands[index], direct_sum_all(others),
                         feas_tol=feas_tol, boundary=boundary)
    if verdict.is_marginal:
        raise IndeterminateError(
            "summand classification is marginal at feas_tol",
            near_certificates={"verdict": verdict})
    return (CRUCIAL if verdict.is_out else REDUNDANT), verdict


def minimal_presentation(t: MatrixTuple, seed: int = 0, *,
                         feas_tol: float = FEAS_TOL,
                         boundary: str = BOUNDARY_IN,
                         compute_gaps: bool = True) -> MinimalReport:
    """Decompose, strip multiplicities, then remove redundant summands one
    at a time until every remaining summand is crucial; finally verify that
    the matrix range was preserved by validating mutual inclusion
    certificates."""
    dec = irreducible_decomposition(t, seed=seed)

    working: list[MatrixTuple] = [blk for blk, _ in dec.blocks]
    duplicates: list[SummandReport] = []
    for blk, mult in dec.blocks:
        for _ in range(mult - 1):
            duplicates.append(SummandReport(summand=blk,
                                            status=REDUNDANT_DUPLICATE))

    absorbed: list[MatrixTuple] = []
    while len(working) > 1:
        redundant: list[tuple[float, int]] = []
        for i in range(len(working)):
            status, verdict = classify_crucial(i, working, feas_tol=feas_tol,
                                               boundary=boundary)
            if status == REDUNDANT:
                redundant.append((verdict.margin, i))
        if not redundant:
            break
        # drop the most interior summand first, then re-classify
        _, drop = max(redundant)
        absorbed.append(working.pop(drop))

    working.sort(key=canonical_key)
    minimal = direct_sum_all(working)

    summand_reports: list[SummandReport] = []
    for i, blk in enumerate(working):
        status, verdict = classify_crucial(i, working, feas_tol=feas_tol,
                                           boundary=boundary)
        if status != CRUCIAL:
            raise IndeterminateError(
                "fixed point lost cruciality on re-classification")
        gap: Optional[float] = None
        if compute_gaps:
            try:
                _, gap = exposing_pencil(working, i, feas_tol=feas_tol)
            except NoGapError:
                gap = None
        summand_reports.append(SummandReport(
            summand=blk, status=CRUCIAL, exposing_gap=gap,
            separator=verdict.separator, margin=verdict.margin))

    # re-certify every absorbed summand directly against the minimal tuple
    absorbed_reports: list[SummandReport] = []
    for blk in absorbed:
        verdict = membership(blk, minimal, feas_tol=feas_tol, boundary=boundary)
        if not verdict.is_in:
            raise IndeterminateError(
                "absorbed summand failed re-certification against the "
                "minimal tuple")
        absorbed_reports.append(SummandReport(
            summand=blk, status=REDUNDANT_ABSORBED, witness=verdict.witness,
            margin=verdict.margin))

    verified, witnesses = _verify_range_preserved(
        t, dec, working, absorbed_reports, minimal, feas_tol)

    return MinimalReport(
        input=t, minimal=minimal,
        summands=tuple(summand_reports + duplicates + absorbed_reports),
        verified=verified, decomposition=dec, inclusion_witnesses=witnesses)


def _verify_range_preserved(t, dec, working, absorbed_reports, minimal,
                            feas_tol) -> tuple[bool, tuple]:
    """Mutual-inclusion certificates between input and minimal.

    W(minimal) <= W(input): the minimal tuple is a compression of the input
    by the isometry selecting one slot per kept class.  W(input) <= W(minimal):
    the input reassembles from per-slot UCP maps out of the minimal tuple,
    projections for kept slots and absorption witnesses for removed ones.
    Both certificates are validated by direct computation.
    """
    u = dec.unitary
    n_min = minimal.n

    offsets_min = {}
    pos = 0
    for blk in working:
        offsets_min[canonical_key(blk)] = pos
        pos += blk.n

    absorbed_by_key = {canonical_key(r.summand): r for r in absorbed_reports}

    pieces = []
    sel_cols: list[np.ndarray] = []
    taken = set()
    offset = 0
    ok = True
    for blk, mult in dec.blocks:
        key = canonical_key(blk)
        for copy in range(mult):
            cols = u[:, offset : offset + blk.n]
            offset += blk.n
            if key in offsets_min:
                p = offsets_min[key]
                proj = np.zeros((n_min, blk.n), dtype=complex)
                proj[p : p + blk.n, :] = np.eye(blk.n)
                pieces.append((choi_of_compression(proj), cols))
                if key not in taken:
                    taken.add(key)
                    sel_cols.append(cols)
            elif key in absorbed_by_key and absorbed_by_key[key].witness is not None:
                pieces.append((absorbed_by_key[key].witness, cols))
            else:
                ok = False
    if not ok or len(sel_cols) != len(working):
        return False, ()

    input_in_minimal = assemble_output_blocks(n_min, t.n, pieces)
    v = np.hstack(sel_cols)
    minimal_in_input = choi_of_compression(v)
    try:
        validate_witness(input_in_minimal, minimal.mats, t.mats)
        validate_witness(minimal_in_input, t.mats, minimal.mats)
    except CertificateError:
        return False, ()
    return True, (input_in_minimal, minimal_in_input)


def is_fully_compressed(t: MatrixTuple, seed: int = 0, *,
                        feas_tol: float = FEAS_TOL,
                        compute_gaps: bool = True) -> tuple[bool, MinimalReport]:
    """A block-diagonalizable tuple is fully compressed iff its minimal
    presentation keeps every summand: multiplicity-free with all summands
    crucial."""
    report = minimal_presentation(t, seed=seed, feas_tol=feas_tol,
                                  compute_gaps=compute_gaps)
    return report.is_trivial(), report


def _fix_phase(w: np.ndarray) -> np.ndarray:
    flat = np.argmax(np.abs(w))
    entry = w.reshape(-1)[flat]
    if abs(entry) < 1e-300:
        return w
    return w * (abs(entry) / entry)


def recover_unitary(s: MatrixTuple, t: MatrixTuple, seed: int = 0, *,
                    feas_tol: float = FEAS_TOL,
                    equiv_tol: float = EQUIV_TOL) -> EquivalenceWitness:
    """Unitary U with U* S U = T for minimal tuples with equal matrix range.

    Matches the irreducible summands pairwise through intertwiners and
    conjugates the block permutation back through both decompositions.
    Raises NotMinimalError when an input is not fully compressed and
    NotEquivalentError (with a separating certificate) when the ranges
    differ.
    """
    if s.d != t.d:
        raise DimensionError("tuples must share the coordinate count")
    ok_s, rep_s = is_fully_compressed(s, seed=seed, feas_tol=feas_tol,
                                      compute_gaps=False)
    if not ok_s:
        raise NotMinimalError("first tuple is not minimal")
    ok_t, rep_t = is_fully_compressed(t, seed=seed, feas_tol=feas_tol,
                                      compute_gaps=False)
    if not ok_t:
        raise NotMinimalError("second tuple is not minimal")

    blocks_s = rep_s.crucial
    blocks_t = rep_t.crucial
    perm: list[int] = []
    intertwiners: list[np.ndarray] = []
    used = set()
    matched = len(blocks_s) == len(blocks_t)
    if matched:
        for bs in blocks_s:
            found = None
            for j, bt in enumerate(blocks_t):
                if j in used or bt.n != bs.n:
                    continue
                w = unitary_equivalent(bs, bt, equiv_tol)
                if w is not None:
                    found = (j, _fix_phase(w))
                    break
            if found is None:
                matched = False
                break
            perm.append(found[0])
            used.add(found[0])
            intertwiners.append(found[1])
    if not matched:
        _raise_not_equivalent(blocks_s, blocks_t, s, t, feas_tol)

    u_s = rep_s.decomposition.unitary
    u_t = rep_t.decomposition.unitary
    sizes_s = [b.n for b in blocks_s]
    sizes_t = [b.n for b in blocks_t]
    off_s = np.concatenate([[0], np.cumsum(sizes_s)])
    off_t = np.concatenate([[0], np.cumsum(sizes_t)])
    n = s.n
    bd = np.zeros((n, n), dtype=complex)
    p = np.zeros((n, n), dtype=complex)
    for k, (w, j) in enumerate(zip(intertwiners, perm)):
        bd[off_s[k] : off_s[k + 1], off_s[k] : off_s[k + 1]] = w
        p[off_s[k] : off_s[k + 1], off_t[j] : off_t[j + 1]] = np.eye(sizes_s[k])
    u = u_s @ bd @ p @ u_t.conj().T

    conjugated = conjugate(s, u)
    residual = max(frob(conjugated.mats[j] - t.mats[j]) for j in range(t.d))
    if residual > equiv_tol * max(1.0, s.scale()):
        raise NotEquivalentError(
            f"assembled unitary has residual {residual} above equiv_tol")
    return EquivalenceWitness(unitary=u, block_permutation=tuple(perm),
                              residual=residual)


def _raise_not_equivalent(blocks_s, blocks_t, s: MatrixTuple, t: MatrixTuple,
                          feas_tol: float):
    """Summand matching failed, so the ranges should differ: scan both
    summand lists for one separated from the other tuple's range."""
    for block, other in [(b, t) for b in blocks_s] + [(b, s) for b in blocks_t]:
        verdict = membership(block, other, feas_tol=feas_tol,
                             boundary="marginal")
        if verdict.is_out:
            raise NotEquivalentError(
                "matrix ranges differ: a crucial summand of one tuple is "
                "separated from the other tuple's range",
                separator=verdict.separator)
    raise IndeterminateError(
        "summand matching failed but no separating certificate was found")


def wmin_minimal_tuple(k: PolytopeBody) -> tuple[MatrixTuple, list]:
    """The fully compressed tuple for Wmin(K): the diagonal tuple over the
    distinct genuine vertices of K."""
    k.require_vertices()
    verts = hull_vertices(k)
    if not verts:
        raise DimensionError("polytope has no vertices after filtering")
    body = PolytopeBody(dim=k.dim, vertices=tuple(verts))
    return vertex_tuple(body), verts
