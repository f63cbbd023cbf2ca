"""Bott-Chern, Aeppli, Dolbeault and de Rham cohomology of a model.

Every space is computed twice: once as a quotient rank (kernel dimension
minus image rank, metric-free) and once as the kernel dimension of the
matching Laplacian for a chosen metric.  The finite Hodge isomorphism makes
the two dimensions equal exactly; a mismatch is a numerical-threshold
failure and raises CrossCheckError.

On top of the spaces this module builds the duality pairing
H^{n-1,n-1}_BC x H^{1,1}_A -> C by integration, the primitive hyperplane cut
out by an SKT metric, and the induced Lefschetz-type splitting of
H^{n-1,n-1}_BC with its lambda coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra as alg
from . import hodge
from .algebra import Form, LieModel
from .errors import CrossCheckError, PreconditionError
from .linalg import nullspace, numeric_rank

__all__ = [
    "THEORIES",
    "CohomologySpace",
    "CohomologyClass",
    "quotient_dimension",
    "cohomology_space",
    "class_of",
    "harmonic_representative",
    "is_real_class",
    "integrate_pairing",
    "duality_pairing",
    "PrimitiveHyperplane",
    "primitive_hyperplane",
    "require_skt",
    "harmonic_part_of_omega",
    "harmonic_part_of_omega_power",
    "lefschetz_decompose_class",
    "lambda_sign_partition",
]

THEORIES = ("bc", "aeppli", "dolbeault", "derham")


@dataclass(eq=False)
class CohomologySpace:
    """One cohomology space with both computation routes recorded.

    ``q`` is None for de Rham, where ``p`` is the total degree.  ``basis``
    holds L2-orthonormal harmonic representatives (None for de Rham, whose
    classes are not manipulated further).
    """

    theory: str
    p: int
    q: int | None
    metric: hodge.HermitianMetric
    dimension: int
    quotient_dimension: int
    harmonic_dimension: int
    basis: list[Form] | None


@dataclass(eq=False)
class CohomologyClass:
    space: CohomologySpace
    coords: np.ndarray
    representative: Form

    def scaled(self, scalar: complex) -> "CohomologyClass":
        return CohomologyClass(self.space, scalar * self.coords, scalar * self.representative)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        if other.space is not self.space:
            raise ValueError("classes live in different spaces")
        return CohomologyClass(
            self.space, self.coords + other.coords, self.representative + other.representative
        )


def quotient_dimension(model: LieModel, theory: str, p: int, q: int | None, tol=None) -> int:
    """Cohomology dimension by rank-nullity on the invariant complex."""
    if theory == "bc":
        closed = nullspace(
            np.vstack([alg.del_matrix(model, p, q), alg.delbar_matrix(model, p, q)]), tol=tol
        ).shape[1]
        exact = numeric_rank(alg.deldelbar_matrix(model, p - 1, q - 1), tol=tol)
    elif theory == "aeppli":
        closed = nullspace(alg.deldelbar_matrix(model, p, q), tol=tol).shape[1]
        exact = numeric_rank(
            np.hstack([alg.del_matrix(model, p - 1, q), alg.delbar_matrix(model, p, q - 1)]),
            tol=tol,
        )
    elif theory == "dolbeault":
        closed = nullspace(alg.delbar_matrix(model, p, q), tol=tol).shape[1]
        exact = numeric_rank(alg.delbar_matrix(model, p, q - 1), tol=tol)
    elif theory == "derham":
        closed = nullspace(alg.d_matrix(model, p), tol=tol).shape[1]
        exact = numeric_rank(alg.d_matrix(model, p - 1), tol=tol)
    else:
        raise ValueError(f"unknown theory {theory!r}")
    return closed - exact


def _laplacian_for(g: hodge.HermitianMetric, theory: str, p: int, q: int | None):
    if theory == "bc":
        return hodge.laplacian_bc(g, p, q)
    if theory == "aeppli":
        return hodge.laplacian_a(g, p, q)
    if theory == "dolbeault":
        return hodge.laplacian_delbar(g, p, q)
    if theory == "derham":
        return hodge.laplacian_derham(g, p)
    raise ValueError(f"unknown theory {theory!r}")


def cohomology_space(
    g: hodge.HermitianMetric, theory: str, p: int, q: int | None = None, tol=None
) -> CohomologySpace:
    """Compute one space via both routes and insist that they agree."""
    model = g.model
    key = ("cohomology", theory, p, q, tol)
    hit = g._cache.get(key)
    if hit is not None:
        return hit
    qdim = quotient_dimension(model, theory, p, q, tol=tol)
    lap = _laplacian_for(g, theory, p, q)
    if theory == "derham":
        hdim = hodge.harmonic_basis(g, lap, tol=tol).shape[1]
        basis = None
    else:
        basis = hodge.harmonic_space(g, lap, tol=tol)
        hdim = len(basis)
    if qdim != hdim:
        raise CrossCheckError(
            f"{theory} ({p},{q}): quotient rank {qdim} != harmonic dimension {hdim}"
        )
    space = CohomologySpace(
        theory=theory,
        p=p,
        q=q,
        metric=g,
        dimension=hdim,
        quotient_dimension=qdim,
        harmonic_dimension=hdim,
        basis=basis,
    )
    g._cache[key] = space
    return space


def class_of(space: CohomologySpace, u: Form, tol: float = 1e-9) -> CohomologyClass:
    """Class of a form, after checking it represents one."""
    g = space.metric
    model = g.model
    scale = max(u.norm(), 1.0)
    if space.theory == "bc":
        bad = max(alg.del_form(model, u).norm(), alg.delbar_form(model, u).norm())
        if bad > tol * scale:
            raise PreconditionError("form is not del- and delbar-closed", {"residual": bad})
    elif space.theory == "aeppli":
        bad = alg.del_form(model, alg.delbar_form(model, u)).norm()
        if bad > tol * scale:
            raise PreconditionError("form is not del delbar-closed", {"residual": bad})
    else:
        raise ValueError("classes are only built for the bc and aeppli theories")
    coords = np.array([hodge.inner(g, u, b) for b in space.basis], dtype=complex)
    return CohomologyClass(space=space, coords=coords, representative=u)


def harmonic_representative(cls: CohomologyClass) -> Form:
    out = alg.zero_form(cls.space.p, cls.space.q)
    for c, b in zip(cls.coords, cls.space.basis):
        out = out + c * b
    return out


def is_real_class(cls: CohomologyClass, tol: float = 1e-9) -> bool:
    rep = harmonic_representative(cls)
    return (alg.conjugate(rep) - rep).norm() <= tol * max(1.0, rep.norm())


# ---------------------------------------------------------------------------
# duality pairing


def integrate_pairing(model: LieModel, u: Form, v: Form) -> complex:
    """Integral of u wedge v against the normalized volume element."""
    return alg.integrate_top(alg.wedge(u, v), model.n)


def duality_pairing(c_bc: CohomologyClass, c_a: CohomologyClass) -> complex:
    """Serre-type pairing of a BC (n-1,n-1)-class with an Aeppli (1,1)-class.

    Computed on the stored representatives; representative independence
    holds exactly on unimodular models, which is why non-unimodular ones are
    rejected.
    """
    g = c_bc.space.metric
    n = g.n
    if (c_bc.space.theory, c_bc.space.p, c_bc.space.q) != ("bc", n - 1, n - 1):
        raise PreconditionError("first argument must be a BC class of bidegree (n-1,n-1)")
    if (c_a.space.theory, c_a.space.p, c_a.space.q) != ("aeppli", 1, 1):
        raise PreconditionError("second argument must be an Aeppli class of bidegree (1,1)")
    if not alg.is_unimodular(g.model):
        raise PreconditionError("pairing is representative-independent only on unimodular models")
    return integrate_pairing(g.model, c_bc.representative, c_a.representative)


# ---------------------------------------------------------------------------
# primitive hyperplane and the Lefschetz-type splitting


def require_skt(g: hodge.HermitianMetric, tol: float = 1e-9) -> None:
    residual = alg.del_form(g.model, alg.delbar_form(g.model, g.omega)).norm()
    if residual > tol * g.omega.norm():
        raise PreconditionError("metric is not SKT", {"del_delbar_omega": residual})


@dataclass(eq=False)
class PrimitiveHyperplane:
    """Kernel of the top-degree wedge functional [G] -> integral of omega wedge G.

    ``functional`` holds the values of that map on the harmonic basis of
    H^{n-1,n-1}_BC; ``basis`` spans its kernel in harmonic coordinates
    (orthonormal columns), of codimension exactly one.
    """

    space: CohomologySpace
    functional: np.ndarray
    basis: np.ndarray

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def classes(self) -> list[CohomologyClass]:
        out = []
        for j in range(self.basis.shape[1]):
            coords = self.basis[:, j]
            rep = alg.zero_form(self.space.p, self.space.q)
            for c, b in zip(coords, self.space.basis):
                rep = rep + c * b
            out.append(CohomologyClass(self.space, coords.copy(), rep))
        return out


def primitive_hyperplane(g: hodge.HermitianMetric, tol: float = 1e-9) -> PrimitiveHyperplane:
    """Hyperplane of omega-primitive BC (n-1,n-1)-classes of an SKT metric."""
    require_skt(g, tol=tol)
    n = g.n
    space = cohomology_space(g, "bc", n - 1, n - 1)
    functional = np.array(
        [integrate_pairing(g.model, b, g.omega) for b in space.basis], dtype=complex
    )
    norm = float(np.linalg.norm(functional))
    if norm <= tol:
        raise CrossCheckError(
            "wedge functional vanished on all of H^{n-1,n-1}_BC; "
            "an SKT metric must cut out a hyperplane"
        )
    basis = nullspace(functional.reshape(1, -1))
    if basis.shape[1] != space.dimension - 1:
        raise CrossCheckError("primitive subspace is not of codimension one")
    return PrimitiveHyperplane(space=space, functional=functional, basis=basis)


def harmonic_part_of_omega(g: hodge.HermitianMetric, tol=None) -> Form:
    """Aeppli-harmonic component of omega."""
    key = ("omega-harmonic-a", tol)
    if key not in g._cache:
        basis = hodge.harmonic_space(g, hodge.laplacian_a(g, 1, 1), tol=tol)
        g._cache[key] = hodge.harmonic_projection(g, basis, g.omega)
    return g._cache[key]


def harmonic_part_of_omega_power(g: hodge.HermitianMetric, tol=None) -> Form:
    """Bott-Chern-harmonic component of omega_{n-1} = omega^{n-1}/(n-1)!."""
    key = ("omega-power-harmonic-bc", tol)
    if key not in g._cache:
        n = g.n
        basis = hodge.harmonic_space(g, hodge.laplacian_bc(g, n - 1, n - 1), tol=tol)
        g._cache[key] = hodge.harmonic_projection(g, basis, hodge.omega_power(g, n - 1))
    return g._cache[key]


def lefschetz_decompose_class(
    g: hodge.HermitianMetric, cls: CohomologyClass, tol: float = 1e-8
) -> tuple[CohomologyClass, complex]:
    """Split a BC (n-1,n-1)-class into primitive part plus lambda times the
    class of the harmonic part of omega_{n-1}.

    lambda is computed twice: from the closed formula
    lambda = (integral of rep wedge omega) / |omega_h|^2 and as the orthogonal
    projection coefficient of the harmonic representative onto the line of
    (omega_{n-1})_h.  The two routes must agree to ``tol``.
    """
    require_skt(g)
    if not alg.is_unimodular(g.model):
        raise PreconditionError("decomposition needs a unimodular model")
    n = g.n
    space = cohomology_space(g, "bc", n - 1, n - 1)
    if cls.space is not space:
        raise PreconditionError("class does not live in H^{n-1,n-1}_BC for this metric")

    omega_h = harmonic_part_of_omega(g)
    denominator = hodge.inner(g, omega_h, omega_h).real
    if denominator <= 1e-14 * hodge.inner(g, g.omega, g.omega).real:
        raise CrossCheckError(
            "harmonic part of omega is numerically degenerate; "
            "it cannot vanish for an SKT metric"
        )
    lam_formula = integrate_pairing(g.model, cls.representative, g.omega) / denominator

    power_h = harmonic_part_of_omega_power(g)
    power_sq = hodge.inner(g, power_h, power_h).real
    if power_sq <= 1e-14 * hodge.inner(g, g.omega, g.omega).real:
        raise CrossCheckError("harmonic part of omega_{n-1} is numerically degenerate")
    lam_projection = hodge.inner(g, harmonic_representative(cls), power_h) / power_sq

    if abs(lam_formula - lam_projection) > tol * max(1.0, abs(lam_formula)):
        raise CrossCheckError(
            f"lambda routes disagree: formula {lam_formula} vs projection {lam_projection}"
        )

    power_cls = class_of(space, power_h)
    primitive = CohomologyClass(
        space=space,
        coords=cls.coords - lam_formula * power_cls.coords,
        representative=cls.representative - lam_formula * power_h,
    )
    return primitive, lam_formula


def lambda_sign_partition(
    g: hodge.HermitianMetric, cls: CohomologyClass, tol: float = 1e-9
) -> str:
    """'positive', 'primitive' or 'negative' side of the primitive hyperplane.

    Only defined for real classes; lambda is real there and its sign is
    tested against ``tol``.
    """
    if not is_real_class(cls, tol=tol):
        raise PreconditionError("sign partition is defined on real classes only")
    _, lam = lefschetz_decompose_class(g, cls)
    value = lam.real
    scale = max(1.0, float(np.linalg.norm(cls.coords)))
    if abs(value) <= tol * scale:
        return "primitive"
    return "positive" if value > 0 else "negative"
