# domain/stationarity.py

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import DEFAULT_MAX_ITER, DEFAULT_TOL
from domain.models import MooLiftedInstance, Point, SimplexWeights

logger = logging.getLogger(__name__)

# Seuil de conditionnement du système KKT au-delà duquel on bascule sur Frank–Wolfe.
KKT_COND_MAX = 1e12
WEIGHT_EPS = 1e-15


class ConvergenceError(RuntimeError):
    """
    Le solveur de point de norme minimale n'a pas atteint la tolérance
    (plafond d'itérations dépassé ou entrées non finies).
    """


@dataclass(frozen=True)
class GapCertificate:
    """
    Certificat du gap de stationnarité de Pareto.

    - gap         : ‖d‖, norme du point de norme minimale
    - weights     : λ ∈ Δᵐ tel que d = Σ λ_i g_i
    - min_point   : d
    - descent_dir : −d/‖d‖ si gap > tol, sinon None
    - iterations  : itérations consommées par le solveur
    - fallback    : True si la voie Frank–Wolfe a été utilisée
    """

    gap: float
    weights: SimplexWeights
    min_point: np.ndarray
    descent_dir: Optional[np.ndarray]
    iterations: int = 0
    fallback: bool = False

    def is_stationary(self, tol: float = DEFAULT_TOL) -> bool:
        return self.gap <= tol

    def verify(self, gradients: np.ndarray, tol: float = DEFAULT_TOL) -> List[str]:
        """
        Contrôle les invariants du certificat contre les gradients d'entrée.
        Retourne la liste des problèmes (vide si tout est cohérent).
        """
        problems: List[str] = []
        P = np.atleast_2d(np.asarray(gradients, dtype=float))

        if abs(float(np.linalg.norm(self.min_point)) - self.gap) > 1e-10:
            problems.append("‖min_point‖ diffère de gap.")

        inner = P @ self.min_point
        wolfe_floor = self.gap * self.gap - tol * max(1.0, self.gap)
        if np.any(inner < wolfe_floor):
            problems.append(f"Optimalité de Wolfe violée (min ⟨g_i, d⟩ = {inner.min()!r}).")

        if self.gap > tol:
            if self.descent_dir is None:
                problems.append("gap > tol mais aucune direction de descente.")
            else:
                slopes = P @ self.descent_dir
                if np.any(slopes > -self.gap + tol):
                    problems.append(f"Direction non commune (max pente {slopes.max()!r}).")
        elif self.descent_dir is not None:
            problems.append("gap <= tol mais une direction de descente est fournie.")

        return problems


# ---------------------------------------------------------------------------
# Solveur de point de norme minimale
# ---------------------------------------------------------------------------


def _as_matrix(gradients: Union[Sequence[Sequence[float]], np.ndarray]) -> np.ndarray:
    P = np.asarray(gradients, dtype=float)
    if P.ndim == 1:
        P = P.reshape(-1, 1)
    if P.ndim != 2 or P.shape[0] == 0:
        raise ConvergenceError("Au moins un vecteur est requis pour le point de norme minimale.")
    if not np.all(np.isfinite(P)):
        logger.error("Gradients non finis passés au solveur: %r", P)
        raise ConvergenceError("Gradients non finis.")
    return P


def _affine_min_norm(Ps: np.ndarray) -> Optional[np.ndarray]:
    """
    Minimise ‖Σ α_i p_i‖ sous Σ α_i = 1 (sans contrainte de signe) via le système KKT.
    Les lignes de Ps sont de norme <= 1, ce qui rend le seuil de conditionnement
    indépendant de l'échelle des gradients. Retourne None si le système est singulier
    ou mal conditionné.
    """
    k = Ps.shape[0]
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = Ps @ Ps.T
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0

    if np.linalg.cond(kkt) > KKT_COND_MAX:
        return None
    try:
        sol = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError:
        return None
    return sol[:k]


def _frank_wolfe(
    P: np.ndarray,
    lam: np.ndarray,
    tol: float,
    max_iter: int,
    used: int,
) -> Tuple[np.ndarray, int]:
    """
    Frank–Wolfe avec pas d'éloignement (away steps) sur le simplexe, recherche linéaire exacte
    pour ½‖λᵀP‖². Démarre depuis λ.
    """
    gram = P @ P.T
    lam = lam.copy()
    iterations = used

    while True:
        x = lam @ P
        norm_x = float(np.linalg.norm(x))
        grad = gram @ lam
        s = int(np.argmin(grad))
        fw_gap = float(lam @ grad - grad[s])
        if norm_x <= tol or fw_gap <= tol * norm_x:
            return lam, iterations

        iterations += 1
        if iterations > max_iter:
            logger.error("Frank–Wolfe: plafond de %d itérations atteint (gap FW=%g).", max_iter, fw_gap)
            raise ConvergenceError(
                f"Point de norme minimale non convergé en {max_iter} itérations."
            )

        active = np.flatnonzero(lam > 0.0)
        a = int(active[np.argmax(grad[active])])
        away_gap = float(grad[a] - lam @ grad)

        if fw_gap >= away_gap:
            direction = -lam.copy()
            direction[s] += 1.0
            step_max = 1.0
        else:
            direction = lam.copy()
            direction[a] -= 1.0
            step_max = lam[a] / (1.0 - lam[a]) if lam[a] < 1.0 else math.inf

        curvature = float(direction @ gram @ direction)
        slope = float(grad @ direction)
        step = step_max if curvature <= 0.0 else min(step_max, -slope / curvature)
        lam = np.clip(lam + step * direction, 0.0, None)
        lam /= lam.sum()


def min_norm_point(
    gradients: Union[Sequence[Sequence[float]], np.ndarray],
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> GapCertificate:
    """
    Point de norme minimale de conv{g_1, ..., g_m} (algorithme de Wolfe à ensemble actif).

    Arrêt quand ⟨d, g_j⟩ >= ‖d‖² − tol·‖d‖ pour le sommet j le plus « bas », ou ‖d‖ <= tol.
    Les égalités de l'étape de minimisation linéaire sont tranchées par le plus petit indice.
    Les gradients sont ramenés à une norme maximale de 1 avant résolution ; le solveur
    vise tol/2 pour garder de la marge à l'arrondi. Tout certificat avec gap > tol est
    vérifié avant d'être rendu : en cas d'échec (système affine singulier ou sortie
    sur stagnation), on termine par Frank–Wolfe avec pas d'éloignement, puis
    ConvergenceError si le certificat reste invalide.
    """
    if not tol > 0.0:
        raise ValueError(f"tol doit être > 0 (reçu {tol}).")

    P = _as_matrix(gradients)
    m = P.shape[0]

    zero_rows = np.flatnonzero(~np.any(P != 0.0, axis=1))
    if zero_rows.size:
        lam = SimplexWeights.vertex(m, int(zero_rows[0]))
        logger.debug("min_norm_point: gradient nul à l'indice %d, gap = 0.", zero_rows[0])
        return GapCertificate(
            gap=0.0,
            weights=lam,
            min_point=np.zeros(P.shape[1]),
            descent_dir=None,
        )

    scale = float(np.max(np.linalg.norm(P, axis=1)))
    Q = P / scale
    inner_tol = 0.5 * tol / scale

    start = int(np.argmin(np.einsum("ij,ij->i", Q, Q)))
    active: List[int] = [start]
    weights = np.array([1.0])
    x = Q[start].copy()
    iterations = 0
    fallback = False

    while True:
        norm_x = float(np.linalg.norm(x))
        if norm_x <= inner_tol:
            break
        j = int(np.argmin(Q @ x))
        if float(Q[j] @ x) >= norm_x * norm_x - inner_tol * norm_x or j in active:
            break

        active.append(j)
        weights = np.append(weights, 0.0)

        # Cycle mineur : projection affine puis retour dans le simplexe si besoin
        while True:
            iterations += 1
            if iterations > max_iter:
                logger.error("Wolfe: plafond de %d itérations atteint.", max_iter)
                raise ConvergenceError(
                    f"Point de norme minimale non convergé en {max_iter} itérations."
                )

            alpha = _affine_min_norm(Q[active])
            if alpha is None:
                fallback = True
                break
            if np.all(alpha > WEIGHT_EPS):
                weights = alpha
                break

            neg = alpha <= WEIGHT_EPS
            denom = weights[neg] - alpha[neg]
            ratios = np.divide(
                weights[neg], denom, out=np.zeros_like(denom), where=denom > 0.0
            )
            theta = float(np.min(ratios))
            weights = theta * alpha + (1.0 - theta) * weights
            keep = weights > WEIGHT_EPS
            logger.debug(
                "Wolfe cycle mineur: %d sommets retirés de l'ensemble actif.",
                int((~keep).sum()),
            )
            active = [idx for idx, k in zip(active, keep) if k]
            weights = weights[keep]

        if fallback:
            break
        x = weights @ Q[active]
        if j not in active:
            # le sommet ajouté a été rejeté aussitôt : stagnation numérique
            break

    full = np.zeros(m)
    full[active] = weights
    if fallback:
        logger.warning(
            "Système KKT singulier sur %d sommets actifs, bascule sur Frank–Wolfe.",
            len(active),
        )
        full = np.clip(full, 0.0, None)
        full /= full.sum()
        full, iterations = _frank_wolfe(Q, full, inner_tol, max_iter, iterations)

    cert = _certificate(P, full, tol, iterations, fallback)
    problems = _check(cert, P, tol)
    if problems and not fallback:
        logger.warning("Certificat de Wolfe refusé (%s), bascule sur Frank–Wolfe.", problems[0])
        full, iterations = _frank_wolfe(Q, cert.weights.lam, inner_tol, max_iter, iterations)
        cert = _certificate(P, full, tol, iterations, True)
        problems = _check(cert, P, tol)
    if problems:
        logger.error("Certificat invalide après Frank–Wolfe: %s", problems)
        raise ConvergenceError(f"Point de norme minimale non certifié: {problems[0]}")

    logger.debug(
        "min_norm_point: m=%d, gap=%.3e, itérations=%d, fallback=%s",
        m,
        cert.gap,
        cert.iterations,
        cert.fallback,
    )
    return cert


def _certificate(
    P: np.ndarray, raw: np.ndarray, tol: float, iterations: int, fallback: bool
) -> GapCertificate:
    lam = SimplexWeights.from_raw(raw)
    d = lam.lam @ P
    gap = float(np.linalg.norm(d))
    return GapCertificate(
        gap=gap,
        weights=lam,
        min_point=d,
        descent_dir=-d / gap if gap > tol else None,
        iterations=iterations,
        fallback=fallback,
    )


def _check(cert: GapCertificate, P: np.ndarray, tol: float) -> List[str]:
    # un point de l'enveloppe de norme <= tol suffit à conclure à la stationnarité
    if cert.gap <= tol:
        return []
    return cert.verify(P, tol)


# ---------------------------------------------------------------------------
# Gap sur les instances
# ---------------------------------------------------------------------------


def pareto_gap(
    inst: MooLiftedInstance,
    x: Union[Point, np.ndarray],
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> GapCertificate:
    """𝒢(x) : gradients des m objectifs puis point de norme minimale."""
    point = inst.split(x)
    gradients = np.vstack([inst.objective(i, point)[1].as_vector() for i in range(inst.m)])
    return min_norm_point(gradients, tol=tol, max_iter=max_iter)


def dist_to_hull(
    point: Union[float, Sequence[float], np.ndarray],
    anchors: Union[Sequence[Sequence[float]], np.ndarray],
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """dist(point, conv{a_i}) = norme du point de norme minimale de {a_i − point}."""
    A = np.asarray(anchors, dtype=float)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    p = np.asarray(point, dtype=float).reshape(-1)
    if A.shape[0] == 0:
        raise ValueError("Ensemble d'ancres vide.")
    if A.shape[1] != p.size:
        raise ValueError(f"Dimension du point {p.size} ≠ dimension des ancres {A.shape[1]}.")
    return min_norm_point(A - p, tol=tol, max_iter=max_iter).gap


def lifted_gap_closed_form(
    inst: MooLiftedInstance,
    x: Union[Point, np.ndarray],
    tol: float = DEFAULT_TOL,
) -> float:
    """√(‖∇g(x_V)‖² + γ²·dist(x_W, conv{a_i})²)."""
    point = inst.split(x)
    grad_v = inst.g.gradient(point.v_part)
    dist_w = dist_to_hull(point.w_part, inst.anchors, tol=tol)
    return math.hypot(float(np.linalg.norm(grad_v)), inst.gamma * dist_w)


def common_descent_direction(
    gradients: Union[Sequence[Sequence[float]], np.ndarray],
    tol: float = DEFAULT_TOL,
) -> Optional[np.ndarray]:
    """
    Alternative de Gordan : une direction v avec ⟨g_i, v⟩ < 0 pour tout i,
    ou None si le gap est <= tol.
    """
    return min_norm_point(gradients, tol=tol).descent_dir


def dominates(fy: Sequence[float], fx: Sequence[float]) -> bool:
    """y domine x : F(y) <= F(x) composante par composante avec au moins une inégalité stricte."""
    a = np.asarray(fy, dtype=float)
    b = np.asarray(fx, dtype=float)
    return bool(np.all(a <= b) and np.any(a < b))


def is_weakly_pareto_optimal(
    inst: MooLiftedInstance,
    x: Union[Point, np.ndarray],
    tol: float = DEFAULT_TOL,
) -> bool:
    # Instances convexes : faible optimalité de Pareto ⇔ 𝒢(x) <= tol
    return pareto_gap(inst, x, tol=tol).is_stationary(tol)
