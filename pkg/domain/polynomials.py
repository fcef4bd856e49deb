# domain/polynomials.py

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from functools import reduce
from typing import List, NamedTuple, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from numpy.polynomial.chebyshev import chebvander
from scipy.optimize import linprog, minimize_scalar
from scipy.special import logsumexp

from domain.models import ScheduleError, StepSchedule

logger = logging.getLogger(__name__)

Series = Union[Polynomial, Chebyshev]

MAX_DEGREE = 200
EXTREMAL_GRID = 2048
MARKOV_GRID = 8192
NORMALIZATION_TOL = 1e-10


class PolynomialError(ValueError):
    """
    Erreur de calcul extrémal : κ <= 1, degré trop grand, recherche non bornée,
    données inexploitables.
    """


# ---------------------------------------------------------------------------
# Polynômes résiduels
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ResidualPolynomial:
    """
    Polynôme résiduel p avec p(0) = 1.

    L'évaluation passe par la série numpy sous-jacente (base de Chebyshev sur [0, ζ_max]
    pour les polynômes ajustés) ; `coeffs` donne les coefficients monomiaux en ζ,
    degré croissant, pour l'export JSON.
    """

    series: Series
    degree: int

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise PolynomialError(f"Degré négatif: {self.degree}.")
        at_zero = float(self.series(0.0))
        # erreur d'arrondi de l'évaluation proportionnelle à la masse des coefficients
        tol = NORMALIZATION_TOL * max(1.0, float(np.sum(np.abs(self.series.coef))))
        if not abs(at_zero - 1.0) <= tol:
            logger.error("Polynôme résiduel non normalisé: p(0)=%r.", at_zero)
            raise PolynomialError(f"p(0) = {at_zero!r} au lieu de 1.")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[float]) -> "ResidualPolynomial":
        coef = np.asarray(coeffs, dtype=float).reshape(-1)
        if coef.size == 0:
            raise PolynomialError("Liste de coefficients vide.")
        return cls(series=Polynomial(coef), degree=coef.size - 1)

    @classmethod
    def normalized(cls, series: Series, degree: int) -> "ResidualPolynomial":
        """Divise la série par sa valeur en 0 pour garantir p(0) = 1."""
        at_zero = float(series(0.0))
        if at_zero == 0.0 or not math.isfinite(at_zero):
            raise PolynomialError(f"Normalisation impossible: p(0) = {at_zero!r}.")
        return cls(series=series / at_zero, degree=degree)

    @property
    def coeffs(self) -> np.ndarray:
        mono = self.series.convert(kind=Polynomial).coef
        out = np.zeros(self.degree + 1)
        n = min(mono.size, out.size)
        out[:n] = mono[:n]
        out[0] = 1.0
        return out

    def __call__(self, zeta):
        return self.series(zeta)

    def max_abs_on(self, nodes: Sequence[float]) -> float:
        return float(np.max(np.abs(self.series(np.asarray(nodes, dtype=float)))))


# ---------------------------------------------------------------------------
# Cadre de Chebyshev
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChebyshevFrame:
    """
    Repère affine de [μ, L] :
        ξ(ζ) = (2ζ − (L+μ))/(L−μ),  ξ₀ = ξ(0) = −(L+μ)/(L−μ)
        κ = L/μ,  ρ = (√κ+1)/(√κ−1)
    """

    mu: float
    L: float

    def __post_init__(self) -> None:
        if not (self.mu > 0.0 and math.isfinite(self.L)):
            raise PolynomialError(f"μ doit être > 0 (reçu {self.mu}).")
        if not self.L > self.mu:
            raise PolynomialError(f"κ = L/μ doit être > 1 (L={self.L}, μ={self.mu}).")

    @property
    def kappa(self) -> float:
        return self.L / self.mu

    @property
    def xi0(self) -> float:
        return -(self.L + self.mu) / (self.L - self.mu)

    @property
    def rho(self) -> float:
        s = math.sqrt(self.kappa)
        return (s + 1.0) / (s - 1.0)

    @property
    def rate(self) -> float:
        return 1.0 / self.rho

    def rho_from_xi0(self) -> float:
        a = abs(self.xi0)
        return a + math.sqrt(a * a - 1.0)

    def xi(self, zeta):
        return (2.0 * np.asarray(zeta, dtype=float) - (self.L + self.mu)) / (self.L - self.mu)

    def residual(self, T: int) -> ResidualPolynomial:
        """T_T(ξ(ζ))/T_T(ξ₀), optimum minimax de degré T sur [μ, L]."""
        basis = Chebyshev.basis(T, domain=[self.mu, self.L])
        return ResidualPolynomial(series=basis / chebyshev_T(T, self.xi0), degree=T)


# ---------------------------------------------------------------------------
# Chebyshev de première espèce
# ---------------------------------------------------------------------------


def _chebyshev_recurrence(t: int, x: float) -> float:
    prev, cur = 1.0, x
    if t == 0:
        return prev
    for _ in range(t - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def _chebyshev_closed(t: int, x: float) -> float:
    if abs(x) <= 1.0:
        return math.cos(t * math.acos(x))
    sign = -1.0 if (x < 0.0 and t % 2 == 1) else 1.0
    a = abs(x)
    r = a + math.sqrt(a * a - 1.0)
    try:
        return sign * 0.5 * (r**t + r ** (-t))
    except OverflowError:
        return sign * math.inf


def chebyshev_T(t: int, x: float, path: str = "auto") -> float:
    """
    T_t(x) par récurrence à trois termes ("recurrence") ou forme close ("closed").
    "auto" : récurrence sur [−1, 1], forme close au-delà.
    """
    if t < 0:
        raise PolynomialError(f"Degré négatif: {t}.")
    x = float(x)
    if path == "recurrence":
        return _chebyshev_recurrence(t, x)
    if path == "closed":
        return _chebyshev_closed(t, x)
    if path != "auto":
        raise PolynomialError(f"Chemin d'évaluation inconnu: {path!r}.")
    return _chebyshev_recurrence(t, x) if abs(x) <= 1.0 else _chebyshev_closed(t, x)


def strong_convex_rate(kappa: float) -> float:
    """(√κ−1)/(√κ+1)."""
    s = math.sqrt(kappa)
    return (s - 1.0) / (s + 1.0)


def strong_convex_extremal_value(kappa: float, T: int) -> float:
    """
    2/(ρ^T + ρ^{−T}), valeur minimax de degré T sur [μ, L] avec κ = L/μ.
    """
    if not (math.isfinite(kappa) and kappa > 1.0):
        raise PolynomialError(f"κ doit être > 1 (reçu {kappa}); ρ n'est pas défini.")
    if T < 0:
        raise PolynomialError(f"T doit être >= 0 (reçu {T}).")

    inv = strong_convex_rate(kappa) ** T
    value = 2.0 * inv / (1.0 + inv * inv)
    if value < inv * (1.0 - 1e-12):
        logger.error("Chaîne 2/(ρ^T+ρ^−T) >= ρ^−T violée: %r < %r.", value, inv)
        raise PolynomialError("Incohérence numérique de la valeur extrémale.")
    return value


# ---------------------------------------------------------------------------
# Minimax discret
# ---------------------------------------------------------------------------


class MinimaxResult(NamedTuple):
    value: float
    polynomial: ResidualPolynomial
    degenerate: bool


def _lagrange_reference(nodes: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Sur k nœuds distincts et un degré k−1 : valeur v = 1/Σ|ℓ_j(0)| et valeurs
    alternées y_j = sign(ℓ_j(0))·v du polynôme optimal.
    """
    log_abs = np.empty(nodes.size)
    signs = np.empty(nodes.size)
    log_nodes = np.log(nodes)
    for j in range(nodes.size):
        others = np.delete(nodes, j)
        diffs = others - nodes[j]
        log_abs[j] = np.sum(np.delete(log_nodes, j)) - np.sum(np.log(np.abs(diffs)))
        signs[j] = 1.0 if np.count_nonzero(diffs < 0.0) % 2 == 0 else -1.0
    value = math.exp(-float(logsumexp(log_abs)))
    return value, signs * value


def _interpolate_residual(nodes: np.ndarray, values: np.ndarray, T: int) -> ResidualPolynomial:
    top = float(nodes.max())
    xs = np.concatenate([[0.0], nodes])
    ys = np.concatenate([[1.0], values])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", np.exceptions.RankWarning)
        series = Chebyshev.fit(xs, ys, T, domain=[0.0, top])
    return ResidualPolynomial.normalized(series, T)


def minimax_on_nodes(nodes: Sequence[float], T: int) -> MinimaxResult:
    """
    min_{deg p <= T, p(0)=1} max_k |p(ζ_k)| sur un ensemble fini de nœuds > 0.

    - moins de T+1 nœuds distincts : valeur 0, p s'annule sur tous les nœuds (dégénéré)
    - exactement T+1 : solution exacte par les poids de Lagrange
    - plus : programme linéaire (HiGHS) en base de Chebyshev, puis un échange sur les
      T+1 nœuds de plus grand résidu, retenu s'il certifie l'optimalité
    """
    if T < 0:
        raise PolynomialError(f"T doit être >= 0 (reçu {T}).")
    if T > MAX_DEGREE:
        raise PolynomialError(f"Degré {T} au-delà du plafond {MAX_DEGREE}.")
    arr = np.asarray(nodes, dtype=float).reshape(-1)
    if arr.size == 0 or not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise PolynomialError("Les nœuds doivent être finis et strictement positifs.")

    distinct = np.unique(arr)
    k = distinct.size

    if k <= T:
        series = Polynomial.fromroots(distinct)
        poly = ResidualPolynomial.normalized(series, T)
        logger.warning(
            "minimax_on_nodes: %d nœuds distincts pour un degré %d, problème dégénéré.", k, T
        )
        return MinimaxResult(0.0, poly, True)

    if k == T + 1:
        value, values = _lagrange_reference(distinct)
        return MinimaxResult(value, _interpolate_residual(distinct, values, T), False)

    # Programme linéaire : variables (c_0..c_T, s), minimiser s
    top = float(distinct.max())
    mapped = 2.0 * distinct / top - 1.0
    V = chebvander(mapped, T)
    ones = np.ones((k, 1))
    A_ub = np.vstack([np.hstack([V, -ones]), np.hstack([-V, -ones])])
    b_ub = np.zeros(2 * k)
    A_eq = np.concatenate([(-1.0) ** np.arange(T + 1), [0.0]]).reshape(1, -1)
    cost = np.zeros(T + 2)
    cost[-1] = 1.0
    bounds = [(None, None)] * (T + 1) + [(0.0, None)]

    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0], bounds=bounds, method="highs")
    if not res.success:
        logger.error("linprog a échoué: %s", res.message)
        raise PolynomialError(f"Programme linéaire minimax en échec: {res.message}")

    lp_series = Chebyshev(res.x[: T + 1], domain=[0.0, top])
    lp_poly = ResidualPolynomial.normalized(lp_series, T)
    lp_value = lp_poly.max_abs_on(distinct)
    logger.debug("minimax LP: %d nœuds, degré %d, valeur %.12g.", k, T, lp_value)

    residuals = np.abs(lp_poly(distinct))
    reference = np.sort(distinct[np.argsort(-residuals, kind="stable")[: T + 1]])
    ref_value, ref_values = _lagrange_reference(reference)
    try:
        ref_poly = _interpolate_residual(reference, ref_values, T)
    except PolynomialError:
        return MinimaxResult(lp_value, lp_poly, False)
    if ref_poly.max_abs_on(distinct) <= ref_value * (1.0 + 1e-9):
        logger.debug("minimax: échange certifié (valeur %.12g).", ref_value)
        return MinimaxResult(ref_value, ref_poly, False)
    return MinimaxResult(lp_value, lp_poly, False)


# ---------------------------------------------------------------------------
# Extrémal de forme produit
# ---------------------------------------------------------------------------


def product_values(alphas: Sequence[float], zeta) -> np.ndarray:
    """Φ(ζ) = ζ·∏(1 − α_k ζ), vectorisé en ζ."""
    z = np.atleast_1d(np.asarray(zeta, dtype=float))
    a = np.asarray(alphas, dtype=float).reshape(-1)
    if a.size == 0:
        return z.copy()
    return z * np.prod(1.0 - np.outer(z, a), axis=1)


def product_extremal(schedule: StepSchedule, L: float) -> Tuple[float, float]:
    """
    max_{ζ∈[0,L]} ζ·∏(1 − α_k ζ) : grille de 2048 points puis recherche bornée
    (Brent / section dorée) sur l'intervalle encadrant le meilleur point de grille.
    """
    if not (L > 0.0 and math.isfinite(L)):
        raise PolynomialError(f"L doit être > 0 (reçu {L}).")
    alphas = schedule.alphas
    if np.any(alphas > (1.0 / L) * (1.0 + 1e-12)):
        raise ScheduleError(f"Calendrier hors du plafond 1/L={1.0 / L}.")

    grid = np.linspace(0.0, L, EXTREMAL_GRID)
    values = product_values(alphas, grid)
    i = int(np.argmax(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]

    res = minimize_scalar(
        lambda z: -float(product_values(alphas, z)[0]),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-10 * L},
    )
    if not res.success:
        logger.error("Recherche bornée en échec sur [%g, %g]: %s", lo, hi, res.message)
        raise PolynomialError(f"Maximum non encadré pour Φ sur [{lo}, {hi}].")

    refined = float(product_values(alphas, res.x)[0])
    if refined > values[i]:
        zeta_star, value = float(res.x), refined
    else:
        zeta_star, value = float(grid[i]), float(values[i])

    floor = L / (4.0 * (alphas.size + 1))
    if value < floor:
        logger.warning("Φ⋆=%g sous le plancher L/(4(t+1))=%g.", value, floor)
    return zeta_star, value


def constant_schedule_extremal(L: float, t: int) -> float:
    """(L/(t+1))·(1 − 1/(t+1))^t, maximum de Φ pour α ≡ 1/L."""
    return (L / (t + 1)) * (1.0 - 1.0 / (t + 1)) ** t


# ---------------------------------------------------------------------------
# Plancher de Markov
# ---------------------------------------------------------------------------


def markov_floor(L: float, t: int) -> float:
    """L/(2(t+1)²)."""
    if t < 0 or not L > 0.0:
        raise PolynomialError(f"Paramètres invalides (L={L}, t={t}).")
    return L / (2.0 * (t + 1) ** 2)


def grid_max_abs_zeta_p(poly: ResidualPolynomial, L: float, n_grid: int = MARKOV_GRID) -> float:
    """max |ζ p(ζ)| sur une grille uniforme de [0, L]."""
    grid = np.linspace(0.0, L, n_grid)
    return float(np.max(np.abs(grid * poly(grid))))


def random_residual_polynomials(
    t: int,
    count: int,
    L: float,
    rng: np.random.Generator,
) -> List[ResidualPolynomial]:
    """
    Polynômes aléatoires de degré t avec p(0) = 1 : la moitié par racines tirées dans
    [−2L, 2L] (hors d'un voisinage de 0), l'autre par coefficients gaussiens en ζ/L.
    """
    if t < 0:
        raise PolynomialError(f"Degré négatif: {t}.")
    polys: List[ResidualPolynomial] = []
    for k in range(count):
        if k % 2 == 0:
            roots = rng.uniform(-2.0 * L, 2.0 * L, size=t)
            small = np.abs(roots) < 1e-3 * L
            while np.any(small):
                roots[small] = rng.uniform(-2.0 * L, 2.0 * L, size=int(small.sum()))
                small = np.abs(roots) < 1e-3 * L
            series = Chebyshev.fromroots(roots, domain=[0.0, L]) if t else Chebyshev([1.0])
        else:
            coef = rng.standard_normal(t + 1)
            while abs(coef[0]) < 1e-3:
                coef[0] = rng.standard_normal()
            series = Polynomial(coef, domain=[0.0, L], window=[0.0, 1.0])
        polys.append(ResidualPolynomial.normalized(series, t))
    return polys


# ---------------------------------------------------------------------------
# Résidus issus d'un calendrier ou d'une trace
# ---------------------------------------------------------------------------


def residual_from_schedule(schedule: StepSchedule) -> ResidualPolynomial:
    """Développement monomial de ∏(1 − α_k ζ)."""
    if len(schedule) > MAX_DEGREE:
        raise PolynomialError(f"Degré {len(schedule)} au-delà du plafond {MAX_DEGREE}.")
    coeffs = reduce(np.convolve, ([1.0, -a] for a in schedule.alphas), np.array([1.0]))
    return ResidualPolynomial(series=Polynomial(coeffs), degree=len(schedule))


class FitResult(NamedTuple):
    polynomial: ResidualPolynomial
    fit_residual: float
    excluded: np.ndarray
    rank_deficient: bool


def fit_residual_from_trace(
    eigs: Sequence[float],
    e0: Sequence[float],
    eT: Sequence[float],
    T: int,
) -> FitResult:
    """
    Ajuste p de degré T avec p(0) = 1 sur les rapports eT_i/e0_i aux valeurs propres.

    On écrit p = 1 + ζ·q et q est ajusté en moindres carrés pondérés par ζ
    (base de Chebyshev sur [0, ζ_max]), ce qui minimise Σ(p(ζ_i) − r_i)².
    Les composantes où e0 est nul sont exclues et signalées.
    """
    zeta = np.asarray(eigs, dtype=float).reshape(-1)
    start = np.asarray(e0, dtype=float).reshape(-1)
    end = np.asarray(eT, dtype=float).reshape(-1)
    if not (zeta.size == start.size == end.size) or zeta.size == 0:
        raise PolynomialError("eigs, e0 et eT doivent avoir la même longueur non nulle.")
    if T < 0 or T > MAX_DEGREE:
        raise PolynomialError(f"Degré {T} hors de [0, {MAX_DEGREE}].")

    keep = start != 0.0
    excluded = np.flatnonzero(~keep)
    if excluded.size:
        logger.warning("%d composantes à e0 nul exclues de l'ajustement.", excluded.size)
    if not np.any(keep):
        raise PolynomialError("Toutes les composantes de e0 sont nulles.")

    zeta = zeta[keep]
    ratios = end[keep] / start[keep]
    top = float(zeta.max()) if zeta.max() > 0.0 else 1.0
    rank_deficient = False

    nonzero = zeta > 0.0
    if T == 0 or not np.any(nonzero):
        series = Chebyshev([1.0], domain=[0.0, top])
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", np.exceptions.RankWarning)
            q, info = Chebyshev.fit(
                zeta[nonzero],
                (ratios[nonzero] - 1.0) / zeta[nonzero],
                T - 1,
                domain=[0.0, top],
                w=zeta[nonzero],
                full=True,
            )
        rank = int(info[1])
        if rank < T:
            rank_deficient = True
            logger.debug("Ajustement de rang %d < %d (interpolation exacte).", rank, T)
        series = 1.0 + Chebyshev.identity(domain=[0.0, top]) * q

    poly = ResidualPolynomial.normalized(series, T)
    fit_residual = float(np.max(np.abs(poly(zeta) - ratios)))
    logger.debug("fit_residual_from_trace: degré %d, résidu %.3e.", T, fit_residual)
    return FitResult(poly, fit_residual, excluded, rank_deficient)


# ---------------------------------------------------------------------------
# Complexités
# ---------------------------------------------------------------------------


def strong_convex_iteration_floor(kappa: float, mu: float, R: float, eps: float) -> int:
    """Plus petit T avec μR·((√κ−1)/(√κ+1))^T <= ε."""
    if not (kappa > 1.0 and mu > 0.0 and R > 0.0 and eps > 0.0):
        raise PolynomialError(f"Paramètres invalides (κ={kappa}, μ={mu}, R={R}, ε={eps}).")
    r = strong_convex_rate(kappa)
    T = max(0, math.ceil(math.log(mu * R / eps) / -math.log(r)))
    while mu * R * r**T > eps:
        T += 1
    while T > 0 and mu * R * r ** (T - 1) <= eps:
        T -= 1
    return T


def agd_sufficient_iterations_convex(L: float, R: float, eps: float) -> int:
    """⌈2LR/ε⌉ − 1, borné à 0."""
    if not (L > 0.0 and R >= 0.0 and eps > 0.0):
        raise PolynomialError(f"Paramètres invalides (L={L}, R={R}, ε={eps}).")
    return max(0, math.ceil(2.0 * L * R / eps) - 1)


def agd_sufficient_iterations_strongly_convex(L: float, mu: float, R: float, eps: float) -> int:
    """⌈ln(√(L(L+μ))R/ε)/ln ρ⌉, borné à 0."""
    frame = ChebyshevFrame(mu=mu, L=L)
    if not (R >= 0.0 and eps > 0.0):
        raise PolynomialError(f"Paramètres invalides (R={R}, ε={eps}).")
    scale = math.sqrt(L * (L + mu)) * R
    if scale <= eps:
        return 0
    return max(0, math.ceil(math.log(scale / eps) / math.log(frame.rho)))


def agd_classical_iterations_strongly_convex(L: float, mu: float, R: float, eps: float) -> int:
    """
    ⌈2 ln(√(L(L+μ))R/ε) / (−ln(1 − √(μ/L)))⌉, borné à 0 : nombre de pas qui garantit
    𝒢 <= ε avec la contraction 1 − √(μ/L) de l'AGD à moment constant.
    """
    if not (0.0 < mu < L and R >= 0.0 and eps > 0.0):
        raise PolynomialError(f"Paramètres invalides (L={L}, μ={mu}, R={R}, ε={eps}).")
    scale = math.sqrt(L * (L + mu)) * R
    if scale <= eps:
        return 0
    return max(0, math.ceil(2.0 * math.log(scale / eps) / -math.log1p(-math.sqrt(mu / L))))


def coefficient_distance(p: ResidualPolynomial, q: ResidualPolynomial, L: float) -> float:
    """
    Écart maximal entre les coefficients de p et q dans la base de Chebyshev de [0, L].
    """
    a = p.series.convert(kind=Chebyshev, domain=[0.0, L]).coef
    b = q.series.convert(kind=Chebyshev, domain=[0.0, L]).coef
    n = max(a.size, b.size)
    return float(np.max(np.abs(np.pad(a, (0, n - a.size)) - np.pad(b, (0, n - b.size)))))
