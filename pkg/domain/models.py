# domain/models.py

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

MAX_EIGS = 10_000
SIMPLEX_TOL = 1e-12
BOUND_RTOL = 1e-12


class InstanceError(ValueError):
    """
    Erreur métier sur une instance (données invalides, dimensions incohérentes, ...).
    """


class ScheduleError(ValueError):
    """
    Erreur métier sur un calendrier de pas (plafond 1/L violé, longueur insuffisante).
    """


def _as_vector(values: Union[Sequence[float], np.ndarray], name: str) -> np.ndarray:
    """
    Copie les valeurs dans un vecteur float 1-D en lecture seule.
    Lève InstanceError si une entrée est non finie.
    """
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        logger.error("%s contient des valeurs non finies: %r", name, arr)
        raise InstanceError(f"{name} contient des valeurs non finies.")
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    """
    Point x = x_V + x_W d'une instance relevée : coordonnées dans la base propre
    de V et coordonnées dans W.
    """

    v_part: np.ndarray
    w_part: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "v_part", _as_vector(self.v_part, "v_part"))
        object.__setattr__(self, "w_part", _as_vector(self.w_part, "w_part"))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.v_part, self.w_part])

    @classmethod
    def from_vector(cls, vector: np.ndarray, dim_v: int) -> "Point":
        vec = np.asarray(vector, dtype=float).reshape(-1)
        return cls(v_part=vec[:dim_v], w_part=vec[dim_v:])


# ---------------------------------------------------------------------------
# Quadratique spectrale
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralQuadratic:
    """
    Quadratique g(x) = ½ Σ ζ_i x_i² écrite dans sa base propre.

    Le minimiseur est fixé à l'origine (b = 0), donc x⋆ = 0, ∇g(x) = ζ ⊙ x
    et l'erreur initiale e0 coïncide avec le point de départ x_V⁽⁰⁾.
    Immuable après construction : les tableaux sont en lecture seule.
    """

    eigs: np.ndarray
    e0: np.ndarray
    mu_bound: float
    L_bound: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "eigs", _as_vector(self.eigs, "eigs"))
        object.__setattr__(self, "e0", _as_vector(self.e0, "e0"))
        object.__setattr__(self, "mu_bound", float(self.mu_bound))
        object.__setattr__(self, "L_bound", float(self.L_bound))
        self.validate()

    # ------------------------------------------------------------------ #
    # Validation
    # ------------------------------------------------------------------ #

    def validate(self) -> None:
        """
        Vérifie les invariants du spectre déclaré.
        Lève InstanceError avec la liste des problèmes détectés.
        """
        errors: List[str] = []

        if not (math.isfinite(self.mu_bound) and math.isfinite(self.L_bound)):
            errors.append("mu_bound et L_bound doivent être finis.")
        if self.L_bound <= 0.0:
            errors.append(f"L_bound doit être > 0 (reçu {self.L_bound}).")
        if self.mu_bound < 0.0:
            errors.append(f"mu_bound doit être >= 0 (reçu {self.mu_bound}).")
        if self.mu_bound > self.L_bound:
            errors.append(f"mu_bound={self.mu_bound} dépasse L_bound={self.L_bound}.")

        n = self.eigs.size
        if n == 0:
            errors.append("Le spectre est vide.")
        if n > MAX_EIGS:
            errors.append(f"Au plus {MAX_EIGS} valeurs propres (reçu {n}).")
        if self.e0.size != n:
            errors.append(f"e0 a {self.e0.size} composantes pour {n} valeurs propres.")

        if n and not errors:
            lo = self.mu_bound * (1.0 - BOUND_RTOL)
            hi = self.L_bound * (1.0 + BOUND_RTOL)
            outside = self.eigs[(self.eigs < lo) | (self.eigs > hi)]
            if outside.size:
                errors.append(
                    f"{outside.size} valeurs propres hors de [{self.mu_bound}, {self.L_bound}]."
                )

        if errors:
            logger.error("Validation SpectralQuadratic échouée: %s", errors)
            raise InstanceError(" / ".join(errors))

    # ------------------------------------------------------------------ #
    # Grandeurs dérivées
    # ------------------------------------------------------------------ #

    @property
    def dimension(self) -> int:
        return int(self.eigs.size)

    @property
    def R(self) -> float:
        return float(np.linalg.norm(self.e0))

    @property
    def smoothness(self) -> float:
        return self.L_bound

    @property
    def strongly_convex(self) -> bool:
        return self.mu_bound > 0.0

    @property
    def minimizer(self) -> np.ndarray:
        return np.zeros(self.dimension)

    @property
    def x0(self) -> np.ndarray:
        return np.array(self.e0)

    # ------------------------------------------------------------------ #
    # Oracle du premier ordre
    # ------------------------------------------------------------------ #

    def _check(self, x: np.ndarray) -> np.ndarray:
        vec = np.asarray(x, dtype=float).reshape(-1)
        if vec.size != self.dimension:
            raise InstanceError(
                f"Dimension incompatible: {vec.size} au lieu de {self.dimension}."
            )
        return vec

    def value(self, x: np.ndarray) -> float:
        vec = self._check(x)
        return 0.5 * float(np.dot(self.eigs * vec, vec))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.eigs * self._check(x)

    def suboptimality(self, x: np.ndarray) -> float:
        # g⋆ = 0 par convention
        return self.value(x)


# ---------------------------------------------------------------------------
# Instance MOO relevée
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MooLiftedInstance:
    """
    Instance non dégénérée à m objectifs :
        f_i(x) = g(x_V) + (γ/2)‖x_W − a_i‖²

    - g       : bloc V (quadratique spectrale)
    - anchors : matrice m × dim(W) des ancres a_i
    - gamma   : courbure de couplage (μ si g fortement convexe, sinon L)
    """

    g: SpectralQuadratic
    anchors: np.ndarray
    gamma: float

    def __post_init__(self) -> None:
        anchors = np.array(self.anchors, dtype=float)
        if anchors.ndim == 1:
            anchors = anchors.reshape(-1, 1)
        if not np.all(np.isfinite(anchors)):
            raise InstanceError("Les ancres contiennent des valeurs non finies.")
        anchors.setflags(write=False)
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(self, "gamma", float(self.gamma))
        self.validate()

    def validate(self) -> None:
        errors: List[str] = []

        if self.anchors.ndim != 2:
            errors.append("anchors doit être une matrice m × dim(W).")
        elif self.m < 2:
            errors.append(f"Au moins 2 objectifs requis (reçu m={self.m}).")
        elif self.hull_dimension() != self.m - 1:
            errors.append(
                f"Ancres affinement dépendantes (rang {self.hull_dimension()} au lieu de {self.m - 1})."
            )

        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            errors.append(f"gamma doit être > 0 (reçu {self.gamma}).")
        elif self.gamma > self.g.L_bound * (1.0 + BOUND_RTOL):
            errors.append(f"gamma={self.gamma} casse la L-régularité (L={self.g.L_bound}).")

        if errors:
            logger.error("Validation MooLiftedInstance échouée: %s", errors)
            raise InstanceError(" / ".join(errors))

    # ------------------------------------------------------------------ #
    # Dimensions et géométrie
    # ------------------------------------------------------------------ #

    @property
    def m(self) -> int:
        return int(self.anchors.shape[0])

    @property
    def dim_v(self) -> int:
        return self.g.dimension

    @property
    def dim_w(self) -> int:
        return int(self.anchors.shape[1])

    @property
    def dimension(self) -> int:
        return self.dim_v + self.dim_w

    @property
    def smoothness(self) -> float:
        return max(self.g.L_bound, self.gamma)

    def hull_dimension(self) -> int:
        """Dimension affine de conv{a_i} (m − 1 pour des ancres affinement indépendantes)."""
        if self.anchors.shape[0] < 2:
            return 0
        diffs = self.anchors[1:] - self.anchors[0]
        return int(np.linalg.matrix_rank(diffs))

    def objectives_distinct(self) -> bool:
        """Les f_i sont deux à deux distincts ssi les ancres le sont."""
        for i in range(self.m):
            for j in range(i + 1, self.m):
                if np.array_equal(self.anchors[i], self.anchors[j]):
                    return False
        return True

    def split(self, x: Union[Point, np.ndarray]) -> Point:
        """
        Convertit un vecteur plat (x_V, x_W) en Point, en vérifiant les dimensions.
        """
        if isinstance(x, Point):
            point = x
        else:
            vec = np.asarray(x, dtype=float).reshape(-1)
            if vec.size != self.dimension:
                raise InstanceError(
                    f"Dimension incompatible: {vec.size} au lieu de {self.dimension}."
                )
            point = Point.from_vector(vec, self.dim_v)

        if point.v_part.size != self.dim_v or point.w_part.size != self.dim_w:
            raise InstanceError(
                f"Point de dimensions ({point.v_part.size}, {point.w_part.size}) "
                f"pour une instance ({self.dim_v}, {self.dim_w})."
            )
        return point

    def objective(self, i: int, x: Union[Point, np.ndarray]) -> Tuple[float, Point]:
        """
        Valeur et gradient de f_i en x (indice i à partir de 0) :
            ∇f_i(x) = (∇g(x_V), γ(x_W − a_i)).
        """
        if not 0 <= i < self.m:
            logger.error("Indice d'objectif %r hors de [0, %d).", i, self.m)
            raise InstanceError(f"Indice d'objectif {i} hors de [0, {self.m}).")
        point = self.split(x)
        diff = point.w_part - self.anchors[i]
        value = self.g.value(point.v_part) + 0.5 * self.gamma * float(np.dot(diff, diff))
        grad = Point(v_part=self.g.gradient(point.v_part), w_part=self.gamma * diff)
        return value, grad

    def gradient_matrix(self, x: Union[Point, np.ndarray]) -> np.ndarray:
        """Gradients des m objectifs empilés en lignes (m × dimension)."""
        point = self.split(x)
        grad_v = self.g.gradient(point.v_part)
        grad_w = self.gamma * (point.w_part[None, :] - self.anchors)
        return np.hstack([np.tile(grad_v, (self.m, 1)), grad_w])

    def value_vector(self, x: Union[Point, np.ndarray]) -> np.ndarray:
        """F(x) = (f_1(x), ..., f_m(x))."""
        point = self.split(x)
        gv = self.g.value(point.v_part)
        diffs = point.w_part[None, :] - self.anchors
        return gv + 0.5 * self.gamma * np.sum(diffs * diffs, axis=1)

    def pareto_point(self, weights: "SimplexWeights") -> Point:
        """Point de Pareto (x⋆_V, Σ λ_i a_i), minimiseur de f_λ."""
        if weights.m != self.m:
            raise InstanceError(f"{weights.m} poids pour {self.m} objectifs.")
        return Point(v_part=self.g.minimizer, w_part=weights.lam @ self.anchors)


# ---------------------------------------------------------------------------
# Poids simpliciaux
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplexWeights:
    """
    λ ∈ Δᵐ : entrées >= 0, somme égale à 1 à 1e-12 près.
    """

    lam: np.ndarray

    def __post_init__(self) -> None:
        lam = np.array(self.lam, dtype=float).reshape(-1)
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

        errors: List[str] = []
        if lam.size == 0:
            errors.append("λ est vide.")
        elif not np.all(np.isfinite(lam)):
            errors.append("λ contient des valeurs non finies.")
        else:
            if np.any(lam < 0.0):
                errors.append(f"λ a des entrées négatives: {lam.tolist()}")
            if abs(float(lam.sum()) - 1.0) > SIMPLEX_TOL:
                errors.append(f"Σλ = {float(lam.sum())!r} ≠ 1.")
        if errors:
            logger.error("SimplexWeights invalide: %s", errors)
            raise InstanceError(" / ".join(errors))

    @property
    def m(self) -> int:
        return int(self.lam.size)

    @classmethod
    def vertex(cls, m: int, index: int) -> "SimplexWeights":
        if not 0 <= index < m:
            raise InstanceError(f"Indice de sommet {index} hors de [0, {m}).")
        lam = np.zeros(m)
        lam[index] = 1.0
        return cls(lam)

    @classmethod
    def uniform(cls, m: int) -> "SimplexWeights":
        return cls(np.full(m, 1.0 / m))

    @classmethod
    def from_raw(cls, values: Sequence[float]) -> "SimplexWeights":
        """
        Projette des poids numériquement bruités (solveur) sur le simplexe :
        coupe les négatifs résiduels puis renormalise.
        """
        raw = np.clip(np.asarray(values, dtype=float).reshape(-1), 0.0, None)
        total = float(raw.sum())
        if not total > 0.0:
            raise InstanceError("Poids bruts tous nuls: impossible de normaliser.")
        return cls(raw / total)


# ---------------------------------------------------------------------------
# Calendrier de pas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepSchedule:
    """
    Pas pré-calculés α_t d'une méthode oblivious à un pas, plafonnés à 1/L.
    """

    alphas: np.ndarray
    L: float

    def __post_init__(self) -> None:
        alphas = np.array(self.alphas, dtype=float).reshape(-1)
        alphas.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "L", float(self.L))

        errors: List[str] = []
        if not (self.L > 0.0 and math.isfinite(self.L)):
            errors.append(f"L doit être > 0 (reçu {self.L}).")
        elif not np.all(np.isfinite(alphas)):
            errors.append("Pas non finis dans le calendrier.")
        else:
            bad = np.flatnonzero((alphas < 0.0) | (alphas > self.cap * (1.0 + BOUND_RTOL)))
            if bad.size:
                errors.append(
                    f"Pas hors de [0, 1/L] aux indices {bad.tolist()[:10]} (cap={self.cap})."
                )
        if errors:
            logger.error("StepSchedule invalide: %s", errors)
            raise ScheduleError(" / ".join(errors))

    @property
    def cap(self) -> float:
        return 1.0 / self.L

    def __len__(self) -> int:
        return int(self.alphas.size)

    def partial_sums(self) -> np.ndarray:
        """S_t = Σ_{k<t} α_k pour t = 0..len."""
        return np.concatenate([[0.0], np.cumsum(self.alphas)])

    @classmethod
    def constant(cls, L: float, T: int) -> "StepSchedule":
        return cls(np.full(T, 1.0 / L), L)

    @classmethod
    def random(cls, L: float, T: int, rng: np.random.Generator) -> "StepSchedule":
        return cls(rng.uniform(0.0, 1.0 / L, size=T), L)


# ---------------------------------------------------------------------------
# Traces d'itérés
# ---------------------------------------------------------------------------


@dataclass
class IterateTrace:
    """
    États par itération t = 0..T d'une exécution.

    - points     : itérés (vecteurs plats)
    - fvals      : valeurs de l'objectif scalarisé suivi
    - f_gaps     : f(x⁽ᵗ⁾) − f⋆ (NaN si non défini)
    - grad_norms : normes du gradient scalarisé
    - gaps       : 𝒢(x⁽ᵗ⁾), rempli pour les exécutions MOO
    """

    method_tag: str
    points: List[np.ndarray] = field(default_factory=list)
    fvals: List[float] = field(default_factory=list)
    f_gaps: List[float] = field(default_factory=list)
    grad_norms: List[float] = field(default_factory=list)
    gaps: List[float] = field(default_factory=list)

    def record(
        self,
        x: np.ndarray,
        fval: float,
        f_gap: float,
        grad_norm: float,
        gap: Optional[float] = None,
    ) -> None:
        self.points.append(np.array(x, dtype=float))
        self.fvals.append(float(fval))
        self.f_gaps.append(float(f_gap))
        self.grad_norms.append(float(grad_norm))
        if gap is not None:
            self.gaps.append(float(gap))

    @property
    def T(self) -> int:
        return len(self.points) - 1

    def validate(self) -> None:
        """
        Vérifie que toutes les séries ont T+1 entrées finies (NaN toléré pour f_gaps).
        """
        n = len(self.points)
        errors: List[str] = []
        for name in ("fvals", "f_gaps", "grad_norms"):
            if len(getattr(self, name)) != n:
                errors.append(f"{name} a {len(getattr(self, name))} entrées au lieu de {n}.")
        if self.gaps and len(self.gaps) != n:
            errors.append(f"gaps a {len(self.gaps)} entrées au lieu de {n}.")
        if any(not np.all(np.isfinite(p)) for p in self.points):
            errors.append("Itéré non fini dans la trace.")
        if any(not math.isfinite(v) for v in self.grad_norms + self.gaps):
            errors.append("Norme ou gap non fini dans la trace.")
        if errors:
            logger.error("Trace '%s' invalide: %s", self.method_tag, errors)
            raise ValueError(" / ".join(errors))


# ---------------------------------------------------------------------------
# État AGD
# ---------------------------------------------------------------------------


@dataclass
class AgdState:
    """
    État de la méthode accélérée.

    Variante convexe : t_0 = 1, t_{k+1} = (1 + √(1 + 4t_k²)) / 2.
    Variante fortement convexe : q = √(μ/L), β = (1 − q)/(1 + q).
    """

    x: np.ndarray
    y: np.ndarray
    t_k: float = 1.0
    beta: Optional[float] = None
    q: Optional[float] = None

    @classmethod
    def convex(cls, x0: np.ndarray) -> "AgdState":
        x = np.array(x0, dtype=float)
        return cls(x=x, y=x.copy(), t_k=1.0)

    @classmethod
    def strongly_convex(cls, x0: np.ndarray, L: float, mu: float) -> "AgdState":
        q = math.sqrt(mu / L)
        x = np.array(x0, dtype=float)
        return cls(x=x, y=x.copy(), beta=(1.0 - q) / (1.0 + q), q=q)

    def momentum(self) -> float:
        """
        Coefficient d'extrapolation de l'étape courante ; fait avancer t_k en variante convexe.
        """
        if self.beta is not None:
            return self.beta
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * self.t_k * self.t_k))
        coef = (self.t_k - 1.0) / t_next
        self.t_k = t_next
        return coef
