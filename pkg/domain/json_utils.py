# domain/json_utils.py

from __future__ import annotations

import json
import logging
import math
from typing import Any, Dict, List

import numpy as np

from domain.models import MooLiftedInstance, SpectralQuadratic
from domain.polynomials import ResidualPolynomial
from domain.stationarity import GapCertificate

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """
    Convertit récursivement numpy / NaN en types JSON natifs.

    Les flottants gardent la représentation la plus courte qui se relit à l'identique
    (repr Python) ; NaN et ±inf deviennent null.
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        return f if math.isfinite(f) else None
    return value


def dumps(document: Any) -> str:
    """Sérialisation déterministe (ordre d'insertion des clés conservé)."""
    return json.dumps(to_jsonable(document), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def safe_json_parse(text: str) -> Dict[str, Any]:
    """
    Parse un document JSON objet.

    Stratégie :
    1) tentative directe json.loads
    2) fallback : tout ce qui est entre le premier '{' et le dernier '}'
    3) sinon : ValueError
    """
    if text is None:
        raise ValueError("Texte JSON vide (None).")

    raw = text.strip()
    logger.debug("safe_json_parse: début, longueur=%d", len(raw))

    try:
        parsed = json.loads(raw)
        if isinstance(parsed, dict):
            return parsed
        raise ValueError("Le document JSON doit être un objet.")
    except json.JSONDecodeError:
        logger.debug("safe_json_parse: échec parse direct, tentative sur la sous-chaîne {...}.")

    start = raw.find("{")
    end = raw.rfind("}")
    if start != -1 and end > start:
        try:
            parsed = json.loads(raw[start : end + 1])
            if isinstance(parsed, dict):
                return parsed
        except json.JSONDecodeError as exc:
            logger.error("safe_json_parse: échec parse fallback: %s", exc)

    logger.error("Impossible de parser le JSON. Contenu tronqué: %s", raw[:300])
    raise ValueError("JSON invalide ou introuvable.")


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------


def quadratic_to_dict(g: SpectralQuadratic) -> Dict[str, Any]:
    return {
        "eigs": g.eigs.tolist(),
        "e0": g.e0.tolist(),
        "mu": g.mu_bound,
        "L": g.L_bound,
    }


def instance_to_dict(inst: MooLiftedInstance) -> Dict[str, Any]:
    data = quadratic_to_dict(inst.g)
    data["anchors"] = inst.anchors.tolist()
    data["gamma"] = inst.gamma
    return data


def quadratic_from_dict(data: Dict[str, Any]) -> SpectralQuadratic:
    return SpectralQuadratic(
        eigs=data["eigs"],
        e0=data["e0"],
        mu_bound=data["mu"],
        L_bound=data["L"],
    )


def instance_from_dict(data: Dict[str, Any]) -> MooLiftedInstance:
    return MooLiftedInstance(
        g=quadratic_from_dict(data),
        anchors=data["anchors"],
        gamma=data["gamma"],
    )


def instance_to_json(inst: MooLiftedInstance) -> str:
    return dumps(instance_to_dict(inst))


def instance_from_json(text: str) -> MooLiftedInstance:
    return instance_from_dict(safe_json_parse(text))


# ---------------------------------------------------------------------------
# Certificats et polynômes
# ---------------------------------------------------------------------------


def certificate_to_dict(cert: GapCertificate) -> Dict[str, Any]:
    return {
        "gap": cert.gap,
        "lambda": cert.weights.lam.tolist(),
        "d": cert.min_point.tolist(),
        "v": None if cert.descent_dir is None else cert.descent_dir.tolist(),
    }


def polynomial_to_list(poly: ResidualPolynomial) -> List[float]:
    """Coefficients monomiaux, degré croissant."""
    return poly.coeffs.tolist()


def polynomial_from_list(coeffs: List[float]) -> ResidualPolynomial:
    return ResidualPolynomial.from_coeffs(coeffs)
