"""Cone feasibility: SKT membership of Aeppli (1,1)-classes and pairing probes.

An Aeppli (1,1)-class is SKT-feasible when some representative is a
positive definite real (1,1)-form with del delbar = 0.  On the invariant
complex every real representative of a class is

    gamma(u) = alpha_0 + del u + conjugate(del u),      u a (0,1)-form,

with alpha_0 the real harmonic representative, and del delbar gamma(u) = 0
holds automatically, so feasibility is the semidefinite question of making
the Hermitian coefficient matrix of gamma(u) positive definite.  The solver
maximizes the (concave) minimum eigenvalue by projected subgradient ascent
with restarts and a 1/k step schedule.

Verdict discipline: YES needs a checkable witness, NO needs a separating
pairing with a stored closed weakly-positive (n-1,n-1)-form, everything
else is inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import algebra as alg
from . import hodge
from .algebra import Form, LieModel
from .cohomology import (
    CohomologyClass,
    class_of,
    harmonic_representative,
    integrate_pairing,
    is_real_class,
)
from .errors import CrossCheckError, PreconditionError
from .linalg import nullspace

__all__ = [
    "ConeMembershipResult",
    "skt_cone_feasibility",
    "ClosedPositiveProbe",
    "closed_positive_probes",
    "weak_positivity_matrix",
    "SktProbe",
    "skt_probe_from_metric",
    "CopsefPairingReport",
    "copsef_pairing_test",
]

TOL_PD = 1e-7  # absolute threshold on unit-normalized class representatives


@dataclass
class ConeMembershipResult:
    verdict: str  # feasible_with_witness | infeasible_certified | inconclusive
    witness: Form | None
    witness_matrix: np.ndarray | None
    best_min_eigenvalue: float
    iterations: int
    certificate: dict | None = None


def _real_11_matrix(u: Form, n: int) -> np.ndarray:
    m = hodge.matrix_of_11_form(u, n)
    return 0.5 * (m + m.conj().T)


def skt_cone_feasibility(
    cls: CohomologyClass,
    seed: int = 0,
    max_iterations: int = 10_000,
    restarts: int = 4,
    tol_pd: float = TOL_PD,
    probes: list["ClosedPositiveProbe"] | None = None,
) -> ConeMembershipResult:
    """Decide SKT membership of a real Aeppli (1,1)-class.

    Searches representatives alpha_0 + 2 Re(del u) for the best minimum
    eigenvalue; certifies infeasibility only through a negative pairing with
    a stored closed weakly-positive probe.
    """
    space = cls.space
    g = space.metric
    model = g.model
    n = g.n
    if (space.theory, space.p, space.q) != ("aeppli", 1, 1):
        raise PreconditionError("class must be an Aeppli (1,1)-class")
    if not is_real_class(cls):
        raise PreconditionError("class must be real")

    rep = harmonic_representative(cls)
    alpha0 = 0.5 * (rep + alg.conjugate(rep))  # de-noise the imaginary part
    m0 = _real_11_matrix(alpha0, n)
    class_norm = hodge.l2_norm(g, alpha0)
    scale = class_norm if class_norm > 0 else 1.0

    # directions: matrices of del phibar^k, entering as u_k B_k + h.c.
    directions = [
        hodge.matrix_of_11_form(alg.del_form(model, alg.basis_form((), (k,))), n)
        for k in range(1, n + 1)
    ]

    def hermitian_at(theta: np.ndarray) -> np.ndarray:
        m = m0.copy()
        for k, b in enumerate(directions):
            u_k = theta[2 * k] + 1j * theta[2 * k + 1]
            m += u_k * b + (u_k * b).conj().T
        return m

    rng = np.random.default_rng(seed)
    dim = 2 * n
    cap = max(1, max_iterations // max(1, restarts))
    best_value = -math.inf
    best_theta = np.zeros(dim)
    used = 0
    for restart in range(restarts):
        theta = (
            np.zeros(dim)
            if restart == 0
            else rng.normal(scale=0.1 * scale, size=dim)
        )
        stale = 0
        for it in range(1, cap + 1):
            used += 1
            eigvals, eigvecs = np.linalg.eigh(hermitian_at(theta))
            if eigvals[0] > best_value:
                best_value = float(eigvals[0])
                best_theta = theta.copy()
                stale = 0
            else:
                stale += 1
            if stale > 200:
                break
            x = eigvecs[:, 0]
            grad = np.empty(dim)
            for k, b in enumerate(directions):
                grad[2 * k] = (x.conj() @ (b + b.conj().T) @ x).real
                grad[2 * k + 1] = (x.conj() @ (1j * (b - b.conj().T)) @ x).real
            gnorm = float(np.linalg.norm(grad))
            if gnorm < 1e-14:
                break
            theta = theta + (scale / it) * grad / gnorm

    best_matrix = hermitian_at(best_theta)
    best_value = float(np.linalg.eigvalsh(best_matrix)[0])

    if best_value / scale > tol_pd:
        witness = hodge.form_of_hermitian_matrix(best_matrix)
        # the witness must still represent cls and be del delbar-closed
        check = class_of(space, witness)
        drift = float(np.linalg.norm(check.coords - cls.coords))
        if drift > 1e-8 * max(1.0, float(np.linalg.norm(cls.coords))):
            raise CrossCheckError(f"witness left its Aeppli class (drift {drift:.3e})")
        return ConeMembershipResult(
            verdict="feasible_with_witness",
            witness=witness,
            witness_matrix=best_matrix,
            best_min_eigenvalue=best_value,
            iterations=used,
        )

    for probe in probes if probes is not None else closed_positive_probes(model, seed=seed):
        value = integrate_pairing(model, probe.form, alpha0).real
        probe_scale = max(probe.form.norm(), 1e-30) * scale
        if value < -tol_pd * probe_scale:
            return ConeMembershipResult(
                verdict="infeasible_certified",
                witness=None,
                witness_matrix=None,
                best_min_eigenvalue=best_value,
                iterations=used,
                certificate={"probe": probe.label, "pairing": value},
            )
    return ConeMembershipResult(
        verdict="inconclusive",
        witness=None,
        witness_matrix=None,
        best_min_eigenvalue=best_value,
        iterations=used,
    )


# ---------------------------------------------------------------------------
# closed weakly-positive (n-1,n-1) probes


def weak_positivity_matrix(t: Form, n: int) -> np.ndarray:
    """Hermitian matrix whose PSD-ness is weak positivity of a real (n-1,n-1)-form.

    Entry (k, j) is the integral of t wedge i phi^j wedge phibar^k, so for a
    (1,0)-form xi with coefficients a the volume coefficient of
    t wedge i xi wedge conj(xi) equals a* M a.
    """
    if t.bidegree != (n - 1, n - 1):
        raise ValueError("expected an (n-1,n-1)-form")
    m = np.zeros((n, n), dtype=complex)
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            probe = alg.basis_form((j,), (k,), 1j)
            m[k - 1, j - 1] = alg.integrate_top(alg.wedge(t, probe), n)
    return m


@dataclass
class ClosedPositiveProbe:
    """d-closed weakly semi-positive real (n-1,n-1)-form with its certificates."""

    form: Form
    label: str
    closedness_residual: float
    min_positivity_eigenvalue: float


def _try_probe(model: LieModel, t: Form, label: str, tol: float) -> ClosedPositiveProbe | None:
    n = model.n
    if t.norm() <= tol:
        return None
    d_res = max(f.norm() for f in alg.d_form(model, t)) / t.norm()
    if d_res > tol:
        return None
    if not alg.is_real_form(t, tol=1e-9):
        return None
    m = weak_positivity_matrix(t, n)
    min_eig = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    if min_eig < -tol * max(1.0, float(np.max(np.abs(m)))):
        return None
    return ClosedPositiveProbe(
        form=t, label=label, closedness_residual=d_res, min_positivity_eigenvalue=min_eig
    )


def closed_positive_probes(
    model: LieModel, count: int = 8, seed: int = 0, tol: float = 1e-9
) -> list[ClosedPositiveProbe]:
    """Stored co-positive probe family for separation certificates.

    Candidates: the (n-1)-power of the identity metric, the coordinate
    monomials i^{(n-1)^2} phi^K wedge phibar^K over |K| = n-1, and random
    real d-closed forms that happen to have a PSD positivity matrix.  Only
    candidates passing the closedness and positivity certificates are kept.
    """
    n = model.n
    probes: list[ClosedPositiveProbe] = []

    reference = hodge.identity_metric(model)
    p = _try_probe(model, hodge.omega_power(reference, n - 1), "identity-power", tol)
    if p:
        probes.append(p)

    from itertools import combinations

    phase = (1j) ** ((n - 1) ** 2 % 4)
    for subset in combinations(range(1, n + 1), n - 1):
        t = alg.basis_form(subset, subset, phase)
        p = _try_probe(model, t, f"monomial-{''.join(map(str, subset))}", tol)
        if p:
            probes.append(p)

    closed = nullspace(
        np.vstack(
            [alg.del_matrix(model, n - 1, n - 1), alg.delbar_matrix(model, n - 1, n - 1)]
        )
    )
    if closed.shape[1]:
        rng = np.random.default_rng(seed)
        for idx in range(count):
            z = rng.standard_normal(closed.shape[1]) + 1j * rng.standard_normal(closed.shape[1])
            t = alg.from_vector(closed @ z, n, n - 1, n - 1)
            t = 0.5 * (t + alg.conjugate(t))
            p = _try_probe(model, t, f"sampled-{idx}", tol)
            if p:
                probes.append(p)
    return probes


# ---------------------------------------------------------------------------
# pairing tests against SKT probes


@dataclass
class SktProbe:
    """An SKT class given through its witness metric form."""

    witness: Form
    label: str = ""


def skt_probe_from_metric(g: hodge.HermitianMetric, label: str = "") -> SktProbe:
    from .cohomology import require_skt

    require_skt(g)
    return SktProbe(witness=g.omega, label=label or "metric")


@dataclass
class CopsefPairingReport:
    verdict: str  # consistent | violated
    pairings: list[tuple[str, float]]
    violations: list[tuple[str, float]]
    warning: str | None
    note: str = (
        "consistency against finitely many probes is necessary, not sufficient; "
        "this is not a membership certificate"
    )


def copsef_pairing_test(
    cls: CohomologyClass, probes: list[SktProbe], tol: float = 1e-9
) -> CopsefPairingReport:
    """Pair a real BC (n-1,n-1)-class against verified SKT probes.

    Any pairing below -tol (suitably normalized) excludes the class from the
    cone of closed weakly-positive forms; a fully consistent report is
    explicitly not a membership proof.
    """
    space = cls.space
    g = space.metric
    model = g.model
    n = g.n
    if (space.theory, space.p, space.q) != ("bc", n - 1, n - 1):
        raise PreconditionError("class must be a BC class of bidegree (n-1,n-1)")
    if not is_real_class(cls):
        raise PreconditionError("class must be real")

    pairings: list[tuple[str, float]] = []
    violations: list[tuple[str, float]] = []
    for idx, probe in enumerate(probes):
        if probe.witness is None:
            raise PreconditionError(f"probe {idx} carries no witness")
        if probe.witness.bidegree != (1, 1):
            raise PreconditionError(f"probe {idx} witness is not a (1,1)-form")
        skt_res = alg.del_form(model, alg.delbar_form(model, probe.witness)).norm()
        if skt_res > tol * probe.witness.norm():
            raise PreconditionError(
                f"probe {idx} witness is not SKT", {"del_delbar": skt_res}
            )
        m = _real_11_matrix(probe.witness, n)
        if float(np.linalg.eigvalsh(m)[0]) <= 0:
            raise PreconditionError(f"probe {idx} witness is not positive definite")
        value = integrate_pairing(model, cls.representative, probe.witness).real
        label = probe.label or f"probe-{idx}"
        pairings.append((label, value))
        scale = max(1.0, cls.representative.norm() * probe.witness.norm())
        if value < -tol * scale:
            violations.append((label, value))
    warning = "empty probe list: nothing was tested" if not probes else None
    return CopsefPairingReport(
        verdict="violated" if violations else "consistent",
        pairings=pairings,
        violations=violations,
        warning=warning,
    )
