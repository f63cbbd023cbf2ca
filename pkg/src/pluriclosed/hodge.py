"""Hermitian metrics, Hodge star, adjoints, Laplacians and harmonic spaces.

A metric is a positive definite Hermitian coefficient matrix h in the model
coframe, with fundamental form omega = i sum h_jk phi^j wedge phibar^k.  All
inner products come from the Cholesky factor h = L L*: the coframe
e^a = sum_j L_ja phi^j is unitary, its basis monomials are declared
orthonormal pointwise, and the L2 product carries the metric volume
det(h) (the reference volume element of ``integrate_top`` has volume 1, so
the identity metric has total volume 1).

The Hodge star is the complex-linear isomorphism Lambda^{p,q} ->
Lambda^{n-q,n-p} fixed by  u wedge star(conjugate v) = <u, v> dV.  In the
unitary coframe it acts monomial by monomial,

    star(e^A wedge ebar^B) = i^{n^2} (-1)^{n|A|} eps(A) eps(B)
                             e^{comp B} wedge ebar^{comp A},

with eps the shuffle sign of (A, complement A).  Adjoints are Gram adjoints;
the classical formulas del* = -star delbar star etc. are tested invariants,
not definitions, because their sign conventions vary across sources while
the Gram adjoint is unambiguous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import algebra as alg
from .algebra import BigradedOperator, Form, LieModel
from .errors import CrossCheckError, MetricError, PreconditionError
from .linalg import column_space, hermitian_kernel

__all__ = [
    "HermitianMetric",
    "metric_from_matrix",
    "metric_from_document",
    "metric_to_document",
    "identity_metric",
    "random_metric",
    "matrix_of_11_form",
    "form_of_hermitian_matrix",
    "gram_matrix",
    "inner",
    "l2_norm",
    "volume_form",
    "omega_power",
    "hodge_star",
    "star_matrix",
    "primitive_star_check",
    "lefschetz_L",
    "lefschetz_matrix",
    "lambda_contraction",
    "lambda_matrix",
    "is_primitive",
    "is_kahler",
    "adjoint",
    "adjoint_blocks",
    "laplacian_bc",
    "laplacian_a",
    "laplacian_delbar",
    "laplacian_derham",
    "harmonic_basis",
    "harmonic_space",
    "harmonic_projection",
    "orthonormal_span",
    "subspace_residual",
    "DecompositionReport",
    "three_space_decomposition",
    "quasi_isometry_bounds",
    "lefschetz_harmonic_rank",
    "random_primitive_form",
]

_EPS = float(np.finfo(np.float64).eps)


@dataclass(eq=False)
class HermitianMetric:
    """Positive definite Hermitian metric on a model, immutable after construction."""

    model: LieModel
    h: np.ndarray
    omega: Form
    cholesky: np.ndarray
    volume: float
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.model.n


def matrix_of_11_form(u: Form, n: int) -> np.ndarray:
    """Coefficient matrix m of a (1,1)-form u = i sum m_jk phi^j wedge phibar^k."""
    if u.bidegree != (1, 1):
        raise ValueError("matrix_of_11_form needs a (1,1)-form")
    m = np.zeros((n, n), dtype=complex)
    for mi, c in u.coeffs.items():
        m[mi.holo[0] - 1, mi.anti[0] - 1] = c / 1j
    return m


def form_of_hermitian_matrix(m: np.ndarray) -> Form:
    """(1,1)-form i sum m_jk phi^j wedge phibar^k; real whenever m is Hermitian."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    coeffs = {}
    for j in range(n):
        for k in range(n):
            if m[j, k] != 0:
                coeffs[alg.MultiIndex((j + 1,), (k + 1,))] = 1j * m[j, k]
    return Form(1, 1, coeffs)


def metric_from_matrix(model: LieModel, h: np.ndarray, tol: float | None = None) -> HermitianMetric:
    """Validate h (Hermitian, positive definite) and build the metric."""
    h = np.asarray(h, dtype=complex)
    n = model.n
    if h.shape != (n, n):
        raise MetricError(f"expected a {n}x{n} matrix, got {h.shape}")
    scale = float(np.max(np.abs(h))) or 1.0
    if np.max(np.abs(h - h.conj().T)) > (tol if tol is not None else n * _EPS * scale * 10):
        raise MetricError("coefficient matrix is not Hermitian")
    h = 0.5 * (h + h.conj().T)
    eigvals = np.linalg.eigvalsh(h)
    cut = tol if tol is not None else n * _EPS * float(eigvals[-1])
    if eigvals[0] <= cut:
        raise MetricError(f"not positive definite (minimum eigenvalue {eigvals[0]:.3e})")
    cholesky = np.linalg.cholesky(h)
    volume = float(np.prod(eigvals))
    return HermitianMetric(
        model=model, h=h, omega=form_of_hermitian_matrix(h), cholesky=cholesky, volume=volume
    )


def identity_metric(model: LieModel, scale: float = 1.0) -> HermitianMetric:
    return metric_from_matrix(model, scale * np.eye(model.n))


def metric_from_document(model: LieModel, doc: dict) -> HermitianMetric:
    """Metric from JSON ``{"name": str, "h": [[[re, im], ...], ...]}``."""
    from .errors import ParseError

    if not isinstance(doc, dict) or "h" not in doc:
        raise ParseError("metric document must contain 'h'")
    rows = doc["h"]
    try:
        h = np.array([[complex(e[0], e[1]) for e in row] for row in rows], dtype=complex)
    except (TypeError, IndexError) as exc:
        raise ParseError(f"malformed 'h': {exc}", "h") from exc
    return metric_from_matrix(model, h)


def metric_to_document(g: HermitianMetric, name: str = "") -> dict:
    return {
        "name": name,
        "h": [[[g.h[j, k].real, g.h[j, k].imag] for k in range(g.n)] for j in range(g.n)],
    }


def random_metric(model: LieModel, rng: np.random.Generator) -> HermitianMetric:
    """Well-conditioned random metric: unitary conjugate of diag in [0.5, 2]."""
    n = model.n
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    qmat, _ = np.linalg.qr(a)
    diag = rng.uniform(0.5, 2.0, size=n)
    return metric_from_matrix(model, (qmat * diag) @ qmat.conj().T)


# ---------------------------------------------------------------------------
# coordinate changes and Gram structure


def _coframe_change(g: HermitianMetric, p: int, q: int) -> np.ndarray:
    """Matrix Q sending coframe coordinates to unitary-coframe coordinates."""
    key = ("Q", p, q)
    hit = g._cache.get(key)
    if hit is not None:
        return hit
    n = g.n
    if not (0 <= p <= n and 0 <= q <= n):
        return np.zeros((0, 0), dtype=complex)
    # e^a = sum_j cholesky[j, a] phi^j is the unitary coframe, so the e-coordinates
    # of phi^j are the columns of the inverse factor
    r = np.linalg.inv(g.cholesky)  # phi^j = sum_a r[a, j] e^a
    combos_p = list(combinations(range(n), p))
    combos_q = list(combinations(range(n), q))

    def compound(sets):
        k = len(sets)
        out = np.empty((k, k), dtype=complex)
        for a, rows in enumerate(sets):
            for b, cols in enumerate(sets):
                sub = r[np.ix_(rows, cols)]
                out[a, b] = np.linalg.det(sub) if sub.size else 1.0
        return out

    qmat = np.kron(compound(combos_p), compound(combos_q).conj())
    qmat.setflags(write=False)
    g._cache[key] = qmat
    return qmat


def _coframe_change_inv(g: HermitianMetric, p: int, q: int) -> np.ndarray:
    key = ("Qinv", p, q)
    hit = g._cache.get(key)
    if hit is None:
        qmat = _coframe_change(g, p, q)
        hit = np.linalg.inv(qmat) if qmat.size else qmat
        hit.setflags(write=False)
        g._cache[key] = hit
    return hit


def _block(g: HermitianMetric, bidegs: tuple[tuple[int, int], ...], inverse: bool = False) -> np.ndarray:
    """Block-diagonal coordinate change over a tuple of bidegrees."""
    n = g.n
    dims = [alg.space_dim(n, p, q) for p, q in bidegs]
    total = sum(dims)
    out = np.zeros((total, total), dtype=complex)
    off = 0
    for (p, q), w in zip(bidegs, dims):
        blk = _coframe_change_inv(g, p, q) if inverse else _coframe_change(g, p, q)
        out[off : off + w, off : off + w] = blk
        off += w
    return out


def gram_matrix(g: HermitianMetric, p: int, q: int) -> np.ndarray:
    """L2 Gram matrix on Lambda^{p,q} over the canonical coframe basis."""
    key = ("gram", p, q)
    hit = g._cache.get(key)
    if hit is None:
        qmat = _coframe_change(g, p, q)
        hit = g.volume * (qmat.conj().T @ qmat)
        hit.setflags(write=False)
        g._cache[key] = hit
    return hit


def inner(g: HermitianMetric, u: Form, v: Form) -> complex:
    """L2 inner product <<u, v>>, linear in u and conjugate-linear in v."""
    if u.bidegree != v.bidegree:
        return 0j
    n = g.n
    gram = gram_matrix(g, u.p, u.q)
    return complex(alg.to_vector(v, n).conj() @ gram @ alg.to_vector(u, n))


def l2_norm(g: HermitianMetric, u: Form) -> float:
    val = inner(g, u, u).real
    return math.sqrt(max(val, 0.0))


def omega_power(g: HermitianMetric, k: int) -> Form:
    """Normalized power omega_k = omega^k / k!."""
    key = ("omega-power", k)
    if key not in g._cache:
        g._cache[key] = (1.0 / math.factorial(k)) * alg.wedge_power(g.omega, k)
    return g._cache[key]


def volume_form(g: HermitianMetric) -> Form:
    """dV = omega^n / n!."""
    return omega_power(g, g.n)


# ---------------------------------------------------------------------------
# Hodge star


def _shuffle_sign(indices: tuple[int, ...], n: int) -> int:
    comp = [c for c in range(1, n + 1) if c not in indices]
    inversions = sum(1 for a in indices for c in comp if a > c)
    return -1 if inversions % 2 else 1


def _star_unitary(n: int, p: int, q: int) -> np.ndarray:
    """Star on unitary-coframe coordinates: a signed permutation matrix."""
    src = alg.multiindices(n, p, q)
    tgt_index = alg.basis_index(n, n - q, n - p)
    mat = np.zeros((alg.space_dim(n, n - q, n - p), len(src)), dtype=complex)
    i_n2 = (1j) ** (n * n % 4)
    for col, mi in enumerate(src):
        holo, anti = mi
        comp_holo = tuple(c for c in range(1, n + 1) if c not in holo)
        comp_anti = tuple(c for c in range(1, n + 1) if c not in anti)
        gamma = i_n2 * ((-1) ** ((n * p) % 2)) * _shuffle_sign(holo, n) * _shuffle_sign(anti, n)
        mat[tgt_index[alg.MultiIndex(comp_anti, comp_holo)], col] = gamma
    return mat


def star_matrix(g: HermitianMetric, p: int, q: int) -> np.ndarray:
    """Matrix of the Hodge star Lambda^{p,q} -> Lambda^{n-q,n-p} over coframe bases."""
    key = ("star", p, q)
    hit = g._cache.get(key)
    if hit is None:
        n = g.n
        hit = (
            _coframe_change_inv(g, n - q, n - p)
            @ _star_unitary(n, p, q)
            @ _coframe_change(g, p, q)
        )
        hit.setflags(write=False)
        g._cache[key] = hit
    return hit


def hodge_star(g: HermitianMetric, u: Form) -> Form:
    n = g.n
    if not (0 <= u.p <= n and 0 <= u.q <= n):
        return alg.zero_form(n - u.q, n - u.p)
    vec = star_matrix(g, u.p, u.q) @ alg.to_vector(u, n)
    return alg.from_vector(vec, n, n - u.q, n - u.p)


# ---------------------------------------------------------------------------
# Lefschetz operators and primitivity


def lefschetz_matrix(g: HermitianMetric, p: int, q: int) -> np.ndarray:
    """Matrix of L = omega wedge . : Lambda^{p,q} -> Lambda^{p+1,q+1}."""
    key = ("L", p, q)
    hit = g._cache.get(key)
    if hit is None:
        hit = alg.wedge_matrix(g.model, g.omega, p, q)
        hit.setflags(write=False)
        g._cache[key] = hit
    return hit


def lambda_matrix(g: HermitianMetric, p: int, q: int) -> np.ndarray:
    """Matrix of the contraction Lambda_omega, the Gram adjoint of L."""
    key = ("Lambda", p, q)
    hit = g._cache.get(key)
    if hit is None:
        hit = _gram_adjoint(g, lefschetz_matrix(g, p - 1, q - 1), (p - 1, q - 1), (p, q))
        hit.setflags(write=False)
        g._cache[key] = hit
    return hit


def lefschetz_L(g: HermitianMetric, k: int, u: Form) -> Form:
    """omega^k wedge u."""
    return alg.wedge(alg.wedge_power(g.omega, k), u)


def lambda_contraction(g: HermitianMetric, u: Form) -> Form:
    n = g.n
    if u.p < 1 or u.q < 1:
        return alg.zero_form(u.p - 1, u.q - 1)
    vec = lambda_matrix(g, u.p, u.q) @ alg.to_vector(u, n)
    return alg.from_vector(vec, n, u.p - 1, u.q - 1)


def _lefschetz_power_opnorm(g: HermitianMetric, power: int, p: int, q: int) -> float:
    """Largest singular value of omega^power wedge . on Lambda^{p,q} in L2 geometry."""
    key = ("L-power-opnorm", power, p, q)
    hit = g._cache.get(key)
    if hit is None:
        n = g.n
        mat = (
            _coframe_change(g, p + power, q + power)
            @ alg.wedge_matrix(g.model, alg.wedge_power(g.omega, power), p, q)
            @ _coframe_change_inv(g, p, q)
        )
        s = np.linalg.svd(mat, compute_uv=False) if mat.size else np.zeros(1)
        hit = float(s[0]) if s.size else 0.0
        g._cache[key] = hit
    return hit


def is_primitive(g: HermitianMetric, u: Form, tol: float = 1e-9) -> bool:
    """Primitivity via the contraction kernel, cross-checked against the power test.

    Lambda_omega u = 0 and omega^{n-k+1} wedge u = 0 (k = deg u) are
    equivalent characterizations; both are evaluated (the power residual
    relative to the operator norm of the power map) and must agree.
    """
    n = g.n
    scale = max(l2_norm(g, u), 1e-30)
    by_contraction = l2_norm(g, lambda_contraction(g, u)) <= tol * scale
    power = n - u.degree + 1
    if power < 0:
        by_power = by_contraction
    else:
        opnorm = max(_lefschetz_power_opnorm(g, power, u.p, u.q), 1.0)
        by_power = l2_norm(g, lefschetz_L(g, power, u)) <= tol * scale * opnorm
    if by_contraction != by_power:
        raise CrossCheckError(
            "primitivity tests disagree (contraction vs power); threshold failure"
        )
    return by_contraction


def primitive_star_check(g: HermitianMetric, v: Form, tol: float = 1e-9) -> float:
    """Relative residual of the closed star formula on a primitive form.

    On a primitive (p,q)-form v with k = p + q the star acts as
    (-1)^{k(k+1)/2} i^{p-q} omega_{n-p-q} wedge v; returns the L2 residual
    of that identity divided by |v|.
    """
    if v.is_zero():
        return 0.0
    if not is_primitive(g, v, tol=tol):
        raise PreconditionError(
            "form is not omega-primitive",
            {"lambda_contraction": l2_norm(g, lambda_contraction(g, v))},
        )
    n, p, q = g.n, v.p, v.q
    k = p + q
    sign = (-1) ** ((k * (k + 1) // 2) % 2)
    phase = (1j) ** ((p - q) % 4)
    predicted = sign * phase * alg.wedge(omega_power(g, n - p - q), v)
    return l2_norm(g, hodge_star(g, v) - predicted) / l2_norm(g, v)


def random_primitive_form(
    g: HermitianMetric, p: int, q: int, rng: np.random.Generator
) -> Form | None:
    """Random element of the primitive subspace of Lambda^{p,q}; None if trivial."""
    from .linalg import nullspace

    n = g.n
    if alg.space_dim(n, p, q) == 0:
        return None
    null = nullspace(lambda_matrix(g, p, q))
    if null.shape[1] == 0:
        return None
    weights = rng.standard_normal(null.shape[1]) + 1j * rng.standard_normal(null.shape[1])
    return alg.from_vector(null @ weights, n, p, q)


def is_kahler(g: HermitianMetric, tol: float = 1e-10) -> bool:
    d_omega = alg.d_form(g.model, g.omega)
    return max(f.norm() for f in d_omega) <= tol * g.omega.norm()


# ---------------------------------------------------------------------------
# adjoints and Laplacians


def _gram_adjoint(
    g: HermitianMetric,
    mat: np.ndarray,
    src: tuple[int, int],
    tgt: tuple[int, int],
) -> np.ndarray:
    """Adjoint of mat: src -> tgt w.r.t. the per-bidegree Gram products."""
    qs_inv = _coframe_change_inv(g, *src)
    qt = _coframe_change(g, *tgt)
    return qs_inv @ (qs_inv.conj().T @ (mat.conj().T @ (qt.conj().T @ qt)))


def adjoint_blocks(
    g: HermitianMetric,
    mat: np.ndarray,
    sources: tuple[tuple[int, int], ...],
    targets: tuple[tuple[int, int], ...],
) -> np.ndarray:
    """Gram adjoint for block operators over sums of bidegrees."""
    qs_inv = _block(g, sources, inverse=True)
    qt = _block(g, targets)
    return qs_inv @ (qs_inv.conj().T @ (mat.conj().T @ (qt.conj().T @ qt)))


def adjoint(g: HermitianMetric, op: BigradedOperator) -> BigradedOperator:
    """Gram adjoint of a BigradedOperator; <A u, v> = <u, A* v> at matrix level."""
    return BigradedOperator(
        sources=op.targets,
        targets=op.sources,
        matrix=adjoint_blocks(g, op.matrix, op.sources, op.targets),
    )


def _del(g, p, q):
    return alg.del_matrix(g.model, p, q)


def _delbar(g, p, q):
    return alg.delbar_matrix(g.model, p, q)


def _del_adj(g, p, q):
    """Adjoint of del: Lambda^{p+1,q} -> Lambda^{p,q}."""
    return _gram_adjoint(g, _del(g, p, q), (p, q), (p + 1, q))


def _delbar_adj(g, p, q):
    return _gram_adjoint(g, _delbar(g, p, q), (p, q), (p, q + 1))


def laplacian_bc(g: HermitianMetric, p: int, q: int) -> BigradedOperator:
    """Fourth-order Bott-Chern Laplacian on Lambda^{p,q}.

    del* del + delbar* delbar
    + (del delbar)* (del delbar) + (del delbar)(del delbar)*
    + (del* delbar)* (del* delbar) + (del* delbar)(del* delbar)*
    """
    key = ("lap-bc", p, q)
    if key in g._cache:
        return g._cache[key]
    d1 = _del(g, p, q)
    db1 = _delbar(g, p, q)
    ddb = _del(g, p, q + 1) @ _delbar(g, p, q)  # (p,q) -> (p+1,q+1)
    ddb_in = _del(g, p - 1, q) @ _delbar(g, p - 1, q - 1)  # (p-1,q-1) -> (p,q)
    # del* delbar from (p,q) and into (p,q)
    m_out = _del_adj(g, p - 1, q + 1) @ db1  # (p,q) -> (p-1,q+1)
    m_in = _del_adj(g, p, q) @ _delbar(g, p + 1, q - 1)  # (p+1,q-1) -> (p,q)
    lap = (
        _del_adj(g, p, q) @ d1
        + _delbar_adj(g, p, q) @ db1
        + _gram_adjoint(g, ddb, (p, q), (p + 1, q + 1)) @ ddb
        + ddb_in @ _gram_adjoint(g, ddb_in, (p - 1, q - 1), (p, q))
        + _gram_adjoint(g, m_out, (p, q), (p - 1, q + 1)) @ m_out
        + m_in @ _gram_adjoint(g, m_in, (p + 1, q - 1), (p, q))
    )
    op = BigradedOperator(((p, q),), ((p, q),), lap)
    g._cache[key] = op
    return op


def laplacian_a(g: HermitianMetric, p: int, q: int) -> BigradedOperator:
    """Fourth-order Aeppli Laplacian on Lambda^{p,q}.

    del del* + delbar delbar*
    + (del delbar)* (del delbar) + (del delbar)(del delbar)*
    + (del delbar*)(del delbar*)* + (del delbar*)* (del delbar*)
    """
    key = ("lap-a", p, q)
    if key in g._cache:
        return g._cache[key]
    d0 = _del(g, p - 1, q)  # (p-1,q) -> (p,q)
    db0 = _delbar(g, p, q - 1)
    ddb = _del(g, p, q + 1) @ _delbar(g, p, q)
    ddb_in = _del(g, p - 1, q) @ _delbar(g, p - 1, q - 1)
    # del delbar* into (p,q) and from (p,q)
    k_in = _del(g, p - 1, q) @ _delbar_adj(g, p - 1, q)  # (p-1,q+1) -> (p,q)
    k_out = _del(g, p, q - 1) @ _delbar_adj(g, p, q - 1)  # (p,q) -> (p+1,q-1)
    lap = (
        d0 @ _gram_adjoint(g, d0, (p - 1, q), (p, q))
        + db0 @ _gram_adjoint(g, db0, (p, q - 1), (p, q))
        + _gram_adjoint(g, ddb, (p, q), (p + 1, q + 1)) @ ddb
        + ddb_in @ _gram_adjoint(g, ddb_in, (p - 1, q - 1), (p, q))
        + k_in @ _gram_adjoint(g, k_in, (p - 1, q + 1), (p, q))
        + _gram_adjoint(g, k_out, (p, q), (p + 1, q - 1)) @ k_out
    )
    op = BigradedOperator(((p, q),), ((p, q),), lap)
    g._cache[key] = op
    return op


def laplacian_delbar(g: HermitianMetric, p: int, q: int) -> BigradedOperator:
    """Dolbeault Laplacian delbar delbar* + delbar* delbar."""
    key = ("lap-dolbeault", p, q)
    if key in g._cache:
        return g._cache[key]
    db1 = _delbar(g, p, q)
    db0 = _delbar(g, p, q - 1)
    lap = _delbar_adj(g, p, q) @ db1 + db0 @ _gram_adjoint(g, db0, (p, q - 1), (p, q))
    op = BigradedOperator(((p, q),), ((p, q),), lap)
    g._cache[key] = op
    return op


def laplacian_derham(g: HermitianMetric, k: int) -> BigradedOperator:
    """de Rham Laplacian d d* + d* d on total degree k, blocked over bidegrees."""
    key = ("lap-derham", k)
    if key in g._cache:
        return g._cache[key]
    n = g.n
    bidegs = alg.bidegrees_of_degree(n, k)
    d_up = alg.d_matrix(g.model, k)
    d_down = alg.d_matrix(g.model, k - 1)
    up_adj = adjoint_blocks(g, d_up, bidegs, alg.bidegrees_of_degree(n, k + 1))
    down_adj = adjoint_blocks(g, d_down, alg.bidegrees_of_degree(n, k - 1), bidegs)
    lap = up_adj @ d_up + d_down @ down_adj
    op = BigradedOperator(bidegs, bidegs, lap)
    g._cache[key] = op
    return op


# ---------------------------------------------------------------------------
# harmonic spaces and decompositions


def harmonic_basis(g: HermitianMetric, op: BigradedOperator, tol: float | None = None) -> np.ndarray:
    """L2-orthonormal kernel basis (columns, coframe coordinates) of a PSD operator."""
    if op.sources != op.targets:
        raise ValueError("harmonic_basis needs an endomorphism")
    qmat = _block(g, op.sources)
    q_inv = _block(g, op.sources, inverse=True)
    kernel = hermitian_kernel(qmat @ op.matrix @ q_inv, tol=tol)
    return (q_inv @ kernel) / math.sqrt(g.volume)


def harmonic_space(g: HermitianMetric, op: BigradedOperator, tol: float | None = None) -> list[Form]:
    """Kernel basis as Forms; single-bidegree operators only."""
    if len(op.sources) != 1:
        raise ValueError("harmonic_space needs a single-bidegree operator")
    basis = harmonic_basis(g, op, tol=tol)
    p, q = op.sources[0]
    return [alg.from_vector(basis[:, j], g.n, p, q) for j in range(basis.shape[1])]


def harmonic_projection(g: HermitianMetric, basis: list[Form], u: Form) -> Form:
    """Orthogonal projection of u onto the span of an L2-orthonormal basis."""
    out = alg.zero_form(u.p, u.q)
    for b in basis:
        out = out + inner(g, u, b) * b
    return out


def orthonormal_span(
    g: HermitianMetric,
    bidegs: tuple[tuple[int, int], ...],
    columns: np.ndarray,
    tol: float | None = None,
) -> np.ndarray:
    """L2-orthonormal basis of the column span, in coframe coordinates."""
    qmat = _block(g, bidegs)
    basis = column_space(qmat @ columns, tol=tol)
    return (_block(g, bidegs, inverse=True) @ basis) / math.sqrt(g.volume)


def subspace_residual(
    g: HermitianMetric,
    bidegs: tuple[tuple[int, int], ...],
    a: np.ndarray,
    b: np.ndarray,
) -> float:
    """Largest |<a_i, b_j>| between two L2-orthonormal families."""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return 0.0
    n = g.n
    dims = [alg.space_dim(n, p, q) for p, q in bidegs]
    gram = np.zeros((sum(dims), sum(dims)), dtype=complex)
    off = 0
    for (p, q), w in zip(bidegs, dims):
        gram[off : off + w, off : off + w] = gram_matrix(g, p, q)
        off += w
    return float(np.max(np.abs(b.conj().T @ gram @ a)))


@dataclass
class DecompositionReport:
    """Orthogonal three-space splitting of Lambda^{p,q} for one Laplacian.

    For the Bott-Chern flavor the parts are (kernel, image of del delbar,
    image of del* + image of delbar*); for the Aeppli flavor they are
    (kernel, image of (del delbar)*, image of del + image of delbar).
    ``closed_dim`` is the dimension of the matching closed space
    (ker del & ker delbar, resp. ker del delbar), which must split as
    kernel (+) middle part, resp. kernel (+) last part.
    """

    theory: str
    p: int
    q: int
    dim_total: int
    dim_kernel: int
    dim_exact: int
    dim_coexact: int
    orthogonality_residual: float
    dims_sum_ok: bool
    closed_dim: int
    closed_split_ok: bool
    image_rank: int
    image_split_ok: bool

    def as_dict(self) -> dict:
        return self.__dict__.copy()


def three_space_decomposition(
    g: HermitianMetric, theory: str, p: int, q: int, tol: float | None = None
) -> DecompositionReport:
    """Verify the orthogonal splitting induced by the Bott-Chern or Aeppli Laplacian."""
    from .linalg import nullspace, numeric_rank

    n = g.n
    model = g.model
    total = alg.space_dim(n, p, q)
    bid = ((p, q),)
    if theory == "bc":
        lap = laplacian_bc(g, p, q)
        exact_cols = alg.deldelbar_matrix(model, p - 1, q - 1)
        coexact_cols = np.hstack([_del_adj(g, p, q), _delbar_adj(g, p, q)])
        closed_cols = np.vstack([_del(g, p, q), _delbar(g, p, q)])
    elif theory == "aeppli":
        lap = laplacian_a(g, p, q)
        exact_cols = _gram_adjoint(
            g, alg.deldelbar_matrix(model, p, q), (p, q), (p + 1, q + 1)
        )
        coexact_cols = np.hstack([_del(g, p - 1, q), _delbar(g, p, q - 1)])
        closed_cols = alg.deldelbar_matrix(model, p, q)
    else:
        raise ValueError("theory must be 'bc' or 'aeppli'")

    kernel = harmonic_basis(g, lap, tol=tol)
    exact = orthonormal_span(g, bid, exact_cols, tol=tol)
    coexact = orthonormal_span(g, bid, coexact_cols, tol=tol)
    residual = max(
        subspace_residual(g, bid, kernel, exact),
        subspace_residual(g, bid, kernel, coexact),
        subspace_residual(g, bid, exact, coexact),
    )
    closed_dim = nullspace(closed_cols, tol=tol).shape[1]
    if theory == "bc":
        closed_split_ok = closed_dim == kernel.shape[1] + exact.shape[1]
    else:
        closed_split_ok = closed_dim == kernel.shape[1] + coexact.shape[1]
    image_rank = numeric_rank(lap.matrix, tol=tol)
    return DecompositionReport(
        theory=theory,
        p=p,
        q=q,
        dim_total=total,
        dim_kernel=kernel.shape[1],
        dim_exact=exact.shape[1],
        dim_coexact=coexact.shape[1],
        orthogonality_residual=residual,
        dims_sum_ok=total == kernel.shape[1] + exact.shape[1] + coexact.shape[1],
        closed_dim=closed_dim,
        closed_split_ok=closed_split_ok,
        image_rank=image_rank,
        image_split_ok=image_rank == exact.shape[1] + coexact.shape[1],
    )


# ---------------------------------------------------------------------------
# Lefschetz power maps on harmonic forms


def _lefschetz_power_matrix(g: HermitianMetric, k: int, degree: int) -> np.ndarray:
    """Block matrix of omega^k wedge . : Lambda^degree -> Lambda^{degree+2k}."""
    n = g.n
    w = alg.wedge_power(g.omega, k)
    src = alg.bidegrees_of_degree(n, degree)
    tgt = alg.bidegrees_of_degree(n, degree + 2 * k)
    tgt_offset = {}
    pos = 0
    for pq in tgt:
        tgt_offset[pq] = pos
        pos += alg.space_dim(n, *pq)
    mat = np.zeros((pos, sum(alg.space_dim(n, *pq) for pq in src)), dtype=complex)
    off = 0
    for p, q in src:
        width = alg.space_dim(n, p, q)
        pq_t = (p + k, q + k)
        if pq_t in tgt_offset:
            r = tgt_offset[pq_t]
            mat[r : r + alg.space_dim(n, *pq_t), off : off + width] = alg.wedge_matrix(
                g.model, w, p, q
            )
        off += width
    return mat


def quasi_isometry_bounds(
    g: HermitianMetric,
    k: int,
    p: int,
    restrict_harmonic: bool = True,
    tol: float | None = None,
) -> tuple[float, float]:
    """Extreme singular values of omega^k wedge . on (harmonic) p-forms.

    With ``restrict_harmonic`` the domain is the space of de Rham harmonic
    p-forms, which requires a Kahler metric; sigma_min > 0 certifies
    injectivity there (expected whenever 2p + 2k <= 2n).  Without the
    restriction any metric is accepted and the raw singular values over all
    of Lambda^p are returned.
    """
    if restrict_harmonic and not is_kahler(g):
        raise PreconditionError("harmonic restriction needs a Kahler metric")
    if k == 0:
        return (1.0, 1.0)
    n = g.n
    if p + 2 * k > 2 * n or p > 2 * n:
        return (0.0, 0.0)
    if restrict_harmonic:
        domain = harmonic_basis(g, laplacian_derham(g, p), tol=tol)
    else:
        src = alg.bidegrees_of_degree(n, p)
        domain = _block(g, src, inverse=True) / math.sqrt(g.volume)
    if domain.shape[1] == 0:
        return (0.0, 0.0)
    tgt = alg.bidegrees_of_degree(n, p + 2 * k)
    image = _block(g, tgt) @ (_lefschetz_power_matrix(g, k, p) @ domain) * math.sqrt(g.volume)
    s = np.linalg.svd(image, compute_uv=False)
    cols = domain.shape[1]
    sigma_max = float(s[0]) if s.size else 0.0
    sigma_min = float(s[cols - 1]) if s.size >= cols else 0.0
    return (sigma_min, sigma_max)


def lefschetz_harmonic_rank(
    g: HermitianMetric, k: int, p: int, tol: float | None = None
) -> tuple[int, int]:
    """(rank of omega^k wedge . from harmonic p-forms into harmonic (p+2k)-forms, target dim)."""
    from .linalg import numeric_rank

    if not is_kahler(g):
        raise PreconditionError("harmonic rank check needs a Kahler metric")
    n = g.n
    if p + 2 * k > 2 * n:
        return (0, 0)
    domain = harmonic_basis(g, laplacian_derham(g, p), tol=tol)
    target = harmonic_basis(g, laplacian_derham(g, p + 2 * k), tol=tol)
    if k == 0:
        return (domain.shape[1], target.shape[1])
    tgt = alg.bidegrees_of_degree(n, p + 2 * k)
    dims = [alg.space_dim(n, pp, qq) for pp, qq in tgt]
    gram = np.zeros((sum(dims), sum(dims)), dtype=complex)
    off = 0
    for (pp, qq), w in zip(tgt, dims):
        gram[off : off + w, off : off + w] = gram_matrix(g, pp, qq)
        off += w
    coords = target.conj().T @ gram @ (_lefschetz_power_matrix(g, k, p) @ domain)
    return (numeric_rank(coords, tol=tol), target.shape[1])
