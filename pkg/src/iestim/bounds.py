"""Closed-form bound evaluators with audit-friendly reports."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from .errors import InvalidArgument


@dataclass
class BoundReport:
    name: str
    inputs: dict
    value: float
    source: str
    extra: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise InvalidArgument(f"bound {self.name} evaluated to {self.value}")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_delta(delta):
    if not 0 < delta < 1:
        raise InvalidArgument("delta must lie in (0, 1)")


def c_finite(T: int, card_Z: int, delta: float) -> float:
    """Decaying-error level ``128 ln(2 T |Z| / delta)`` for finite ``Z``."""
    if T < 1 or card_Z < 1:
        raise InvalidArgument("T and |Z| must be >= 1")
    _check_delta(delta)
    return 128.0 * math.log(2.0 * T * card_Z / delta)


def ls_guarantee_c(T: int, cover_size: int, beta: float = 2.0, beta_prime: float = 4.0, delta: float = 0.1) -> float:
    """``16 beta beta' ln(2 T N / delta)`` for a cover of size ``N``."""
    if not beta > 0 or beta_prime < 2 * beta:
        raise InvalidArgument("need beta' >= 2 beta > 0")
    if T < 1 or cover_size < 1:
        raise InvalidArgument("T and cover size must be >= 1")
    _check_delta(delta)
    return 16.0 * beta * beta_prime * math.log(2.0 * T * cover_size / delta)


def optimistic_radius(T: int, cover_size: int, beta: float = 2.0, beta_prime: float = 4.0, delta: float = 0.1) -> float:
    return ls_guarantee_c(T, cover_size, beta, beta_prime, delta)


def optimistic_c(T: int, cover_size: int, beta: float = 2.0, beta_prime: float = 4.0, delta: float = 0.1) -> float:
    return 4.0 * optimistic_radius(T, cover_size, beta, beta_prime, delta)


def bad_query_bound(d: float, C: float, eps: float, T: int | None = None, alpha: float | None = None) -> BoundReport:
    """Cap on the number of queries with mean below ``alpha - eps``."""
    if d < 1 or not eps > 0 or C < 0:
        raise InvalidArgument("need d >= 1, eps > 0, C >= 0")
    general = 2 * d**1.5 * math.log(4.0 / eps) + 12 * d**2.5 * C / eps**2
    simple = 36 * d**2.5 * C / eps**2
    noiseless = 2 * d**1.5 * math.log(4.0 / eps)
    notes = []
    if alpha is not None and eps >= 1 + alpha:
        notes.append("eps >= 1 + alpha: no query can be eps-bad")
    return BoundReport(
        "bad_query_bound", {"d": d, "C": C, "eps": eps, "T": T}, general, "few bad queries",
        extra={
            "simplified": simple,
            "simplified_applies": T is not None and C >= math.log(2 * T),
            "zero_C": noiseless,
            "zero_C_applies": C == 0,
        },
        notes=notes,
    )


def regret_bound(d: float, C: float, T: int, deterministic: bool = False) -> BoundReport:
    if d < 1 or T < 1:
        raise InvalidArgument("need d >= 1 and T >= 1")
    notes = []
    if deterministic:
        value = 1 + 12 * d**1.5
    else:
        if C < math.log(2 * T):
            notes.append("precondition C >= ln(2T) violated")
        value = 1 + 12 * d**1.25 * math.sqrt(C * T)
    return BoundReport("regret_bound", {"d": d, "C": C, "T": T, "deterministic": deterministic},
                       value, "regret theorem", notes=notes)


def deterministic_t_min(d: float, eps: float) -> int:
    """Least integer strictly above ``2 d^1.5 ln(4/eps)``."""
    return math.floor(2 * d**1.5 * math.log(4.0 / eps)) + 1


def pac_params(d: float, C_half_delta: float, eps: float, delta: float, deterministic: bool = False) -> dict:
    """``(T_min, n1, n2, total_queries)`` for the PAC wrapper."""
    if not eps > 0:
        raise InvalidArgument("eps must be positive")
    _check_delta(delta)
    if deterministic:
        t_min = deterministic_t_min(d, eps)
        return {"T_min": t_min, "n1": 0, "n2": 0, "total_queries": t_min}
    t_min = math.ceil(64 * d**2.5 * C_half_delta / eps**2)
    n1 = math.ceil(math.log2(4.0 / delta))
    n2 = math.ceil(128 * math.log(8 * n1 / delta) / eps**2)
    return {"T_min": t_min, "n1": n1, "n2": n2, "total_queries": t_min + n1 * n2}


def oracle_radius(regret_sq_T: float, beta: float = 2.0, beta_prime: float = 4.0, T: int = 1, delta: float = 0.1) -> float:
    """``8 Regret_sq(T) + 64 beta max(beta, beta') ln(T / delta)``."""
    if regret_sq_T < 0:
        raise InvalidArgument("regret must be nonnegative")
    _check_delta(delta)
    return 8.0 * regret_sq_T + 64.0 * beta * max(beta, beta_prime) * math.log(T / delta)


_FAMILIES = ("linear", "karmed", "separation", "glm", "relu", "eluder_relation")


def dim_bound(family: str, **params) -> BoundReport:
    """Dimension upper bounds by family; asymptotic families carry no constant."""
    if family == "linear":
        n = int(params["n"])
        value = 2 * n + 1 if params.get("alpha") == 1 else 4 * n + 3
        return BoundReport("dim_bound", {"family": family, **params}, value, "linear theorem")
    if family == "karmed":
        return BoundReport("dim_bound", {"family": family, **params}, int(params["K"]), "multi-armed proposition")
    if family == "separation":
        return BoundReport("dim_bound", {"family": family, **params}, 16, "separation proposition")
    if family == "eluder_relation":
        d_e = params["eluder"]
        return BoundReport("dim_bound", {"family": family, **params}, 9 * max(1, d_e), "eluder relation",
                           extra={"gap_scale": 1.5})
    if family == "glm":
        n, r, hbar, eps = params["n"], params["r"], params["hbar"], params["eps"]
        expr = n * r * r * math.log(hbar / eps)
        return BoundReport("dim_bound", {"family": family, **params}, expr, "GLM theorem",
                           extra={"asymptotic": True, "expression": "O(n r^2 log(hbar/eps))"},
                           notes=["asymptotic, no constant"])
    if family == "relu":
        n, eps = params["n"], params["eps"]
        expr = eps ** (-n / 2)
        return BoundReport("dim_bound", {"family": family, **params}, expr, "ReLU theorem",
                           extra={"asymptotic": True, "expression": "Theta(eps^(-n/2))"},
                           notes=["asymptotic, no constant"])
    raise InvalidArgument(f"unknown family {family!r}; expected one of {_FAMILIES}")


def helper_sum_bound(kind: str, kappa_tau: float, tau: float, T: int, a: float = 1.0) -> float:
    """``T tau + 2 sqrt(kappa T)`` (sqrt kind) or ``T tau + a (1 + kappa) exp(-1/kappa)`` (log kind)."""
    if T < 1:
        raise InvalidArgument("T must be >= 1")
    if kind == "sqrt":
        if kappa_tau < 0:
            raise InvalidArgument("kappa must be nonnegative")
        return T * tau + 2 * math.sqrt(kappa_tau * T)
    if kind == "log":
        if not kappa_tau > 0:
            raise InvalidArgument("kappa must be positive for the log form")
        return T * tau + a * (1 + kappa_tau) * math.exp(-1.0 / kappa_tau)
    raise InvalidArgument(f"unknown kind {kind!r}")


def lower_bound_comparators(N: int, T: int, eps: float) -> dict:
    """Probability and regret comparators of the indicator construction."""
    m = min(N / 2, T)
    return {
        "prob_comparator": (1 - 2 / N) ** m,
        "prob_floor": 1 / (2 * math.e),
        "regret_comparator": (m - 1) * eps / (2 * math.e),
    }
