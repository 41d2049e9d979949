"""Caloric observables of a d-excursion: entropy change and temperature change."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Iterator

import numpy as np
from scipy import optimize

from ..config import CalorexConfig
from ..exceptions import NoBracket, QuadratureNotConverged
from ..models.caloric import CaloricResult, GammaIntegral, IntervalSide, interval_side
from ..models.chain import classify_d
from .thermo import entropy_at, evaluate, gamma_at, specific_heat

logger = logging.getLogger(__name__)

Mapper = Callable[[Callable[[float], float], Iterable[float]], Iterator[float]]

REGIME_TOLERANCE = 0.2
FIRST_RULE = 4


def _proxy(d: float, other: float, d_eps: float) -> float:
    """Replace an endpoint closer than d_eps to 0 by +-d_eps on the side of ``other``."""
    if abs(d) >= d_eps:
        return d
    if d != 0.0:
        return math.copysign(d_eps, d)
    return math.copysign(d_eps, other) if other != 0.0 else d_eps


def delta_entropy(d1: float, d2: float, t: float, config: CalorexConfig | None = None) -> float:
    """Isothermal entropy change S(d2, t) - S(d1, t).

    Endpoints within d_eps of the isotropic point are evaluated at +-d_eps on the
    interior side, so a crossing of d = 0 includes the entropy jump.
    """
    config = config or CalorexConfig()
    if d1 == d2:
        return 0.0
    d_eps = config.nlie.d_eps
    e1, e2 = _proxy(d1, d2, d_eps), _proxy(d2, d1, d_eps)
    if e1 == e2:
        return 0.0
    return entropy_at(e2, t, 0.0, config) - entropy_at(e1, t, 0.0, config)


def gauss_legendre(
    func: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float,
    max_nodes: int,
    mapper: Mapper = map,
) -> tuple[float, int]:
    """Integral of ``func`` over [a, b], doubling the Gauss-Legendre rule until it settles.

    Raises:
        QuadratureNotConverged: If the node budget is exhausted first.
    """
    history: list[float] = []
    n = FIRST_RULE
    previous: float | None = None
    while n <= max_nodes:
        nodes, weights = np.polynomial.legendre.leggauss(n)
        xs = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        values = np.fromiter(mapper(func, [float(x) for x in xs]), dtype=float, count=n)
        estimate = 0.5 * (b - a) * float(weights @ values)
        history.append(estimate)
        if previous is not None and abs(estimate - previous) <= rel_tol * max(abs(estimate), 1e-14):
            return estimate, n
        previous = estimate
        n *= 2
    raise QuadratureNotConverged(
        f"Gauss-Legendre quadrature over [{a}, {b}] did not settle within {max_nodes} nodes",
        diagnostics={"a": a, "b": b, "estimates": history, "max_nodes": max_nodes},
    )


def integrate_gamma(
    d1: float,
    d2: float,
    t: float,
    config: CalorexConfig | None = None,
    mapper: Mapper = map,
) -> GammaIntegral:
    """Integral of Gamma_d from d1 to d2 at fixed t.

    A crossing of d = 0 is split at +-d_eps; the crossing itself contributes
    ln[S(side of d2) / S(side of d1)], which is the integral of alpha_d / c_d when
    c_d equals S. The regime flag reports where that does not hold.
    """
    config = config or CalorexConfig()
    d_eps = config.nlie.d_eps
    rel_tol, max_nodes = config.caloric.quad_rel_tol, config.caloric.max_nodes

    def gamma(d: float) -> float:
        return gamma_at(d, t, 0.0, config)

    if d1 == d2:
        return GammaIntegral(value=0.0, smooth_part=0.0, jump_contribution=0.0)

    side = interval_side(d1, d2)
    if side is not IntervalSide.CROSSING or abs(d1) < d_eps and abs(d2) < d_eps:
        a, b = _proxy(d1, d2, d_eps), _proxy(d2, d1, d_eps)
        if a == b:
            return GammaIntegral(value=0.0, smooth_part=0.0, jump_contribution=0.0)
        value, nodes = gauss_legendre(gamma, a, b, rel_tol, max_nodes, mapper)
        return GammaIntegral(value=value, smooth_part=value, jump_contribution=0.0, nodes=(nodes,))

    start = math.copysign(d_eps, d1)
    end = math.copysign(d_eps, d2)
    smooth = 0.0
    used: list[int] = []
    for a, b in ((d1, start), (end, d2)):
        if max(abs(a), abs(b)) <= d_eps:
            continue
        value, nodes = gauss_legendre(gamma, a, b, rel_tol, max_nodes, mapper)
        smooth += value
        used.append(nodes)

    s_start = evaluate(classify_d(start, config.model.delta_max), t, 0.0, config)
    s_end = evaluate(classify_d(end, config.model.delta_max), t, 0.0, config)
    jump = math.log(s_end.entropy / s_start.entropy)

    flag = False
    for proxy, state in ((start, s_start), (end, s_end)):
        c_d, _ = specific_heat(
            classify_d(proxy, config.model.delta_max), t, 0.0, config, initial=state.aux
        )
        ratio = c_d / state.entropy
        if abs(ratio - 1.0) > REGIME_TOLERANCE:
            flag = True
            logger.warning(
                "c/S = %.3g at d = %.3g, t = %.3g; the crossing term assumes c = S",
                ratio,
                proxy,
                t,
            )
    return GammaIntegral(
        value=smooth + jump,
        smooth_part=smooth,
        jump_contribution=jump,
        nodes=tuple(used),
        regime_flag=flag,
    )


def delta_temperature_paper(
    d1: float,
    d2: float,
    t: float,
    config: CalorexConfig | None = None,
    mapper: Mapper = map,
) -> CaloricResult:
    """Interval-averaged temperature change (t / (d2 - d1)) * int Gamma_d dd.

    Raises:
        QuadratureNotConverged: If a segment exceeds ``caloric.max_nodes``.
    """
    config = config or CalorexConfig()
    if d1 == d2:
        return CaloricResult(d1=d1, d2=d2, t_initial=t, delta_S=0.0, delta_t_paper=0.0)
    integral = integrate_gamma(d1, d2, t, config, mapper)
    prefactor = t / (d2 - d1)
    return CaloricResult(
        d1=d1,
        d2=d2,
        t_initial=t,
        delta_S=delta_entropy(d1, d2, t, config),
        delta_t_paper=prefactor * integral.value,
        jump_contribution=prefactor * integral.jump_contribution,
        metadata={
            "gamma_integral": integral.value,
            "smooth_part": integral.smooth_part,
            "crossing_log_ratio": integral.jump_contribution,
            "nodes": list(integral.nodes),
            "regime_flag": integral.regime_flag,
            "d_eps": config.nlie.d_eps,
        },
    )


def delta_temperature_isentrope(
    d1: float, d2: float, t1: float, config: CalorexConfig | None = None
) -> float:
    """t2 - t1 such that S(d2, t2) = S(d1, t1).

    The bracket grows geometrically from t1 inside [t1/100, 100 t1]; Brent's
    method then matches the entropies to 1e-8.

    Raises:
        NoBracket: If no temperature in [t1/100, 100 t1] matches.
    """
    config = config or CalorexConfig()
    if d1 == d2:
        return 0.0
    d_eps = config.nlie.d_eps
    e1, e2 = _proxy(d1, d2, d_eps), _proxy(d2, d1, d_eps)
    target = entropy_at(e1, t1, 0.0, config)

    values: dict[float, float] = {}

    def mismatch(temperature: float) -> float:
        if temperature not in values:
            values[temperature] = entropy_at(e2, temperature, 0.0, config) - target
        return values[temperature]

    f1 = mismatch(t1)
    if abs(f1) < 1e-12:
        return 0.0
    t_low, t_high = t1 / 100.0, 100.0 * t1
    # S increases with t, so a positive mismatch puts t2 below t1.
    if f1 > 0.0:
        hi, lo = t1, max(t1 / 2.0, t_low)
        while mismatch(lo) > 0.0 and lo > t_low:
            hi, lo = lo, max(lo / 2.0, t_low)
    else:
        lo, hi = t1, min(2.0 * t1, t_high)
        while mismatch(hi) < 0.0 and hi < t_high:
            lo, hi = hi, min(2.0 * hi, t_high)
    if mismatch(lo) * mismatch(hi) > 0.0:
        raise NoBracket(
            f"Entropy {target:.6g} at d={d1} cannot be matched at d={d2} "
            f"for t in [{t_low}, {t_high}]",
            diagnostics={
                "target": target,
                "probed": sorted(values),
                "d1": d1,
                "d2": d2,
                "t1": t1,
            },
        )
    t2 = optimize.brentq(mismatch, lo, hi, xtol=1e-12 * t1, rtol=4 * np.finfo(float).eps)
    logger.debug("Isentrope d=%.4g -> %.4g: t %.6g -> %.6g", d1, d2, t1, t2)
    return t2 - t1


def asymptotic_caloric(
    d1: float,
    d2: float,
    t: float,
    side: IntervalSide | None = None,
    closed_form: bool = True,
) -> float:
    """Closed-form low-temperature temperature change.

    ``closed_form`` selects t/(3|dd|) (both negative), t/(3 dd) (both positive) and
    t ln2 / dd (crossing). Otherwise the forms that a constant Gamma = -1/3 gives
    under the interval-averaged definition are returned: -t/3 on one side and
    t ln2 / |dd| - t/3 across d = 0.
    """
    dd = d2 - d1
    if dd == 0.0:
        return 0.0
    side = side or interval_side(d1, d2)
    if closed_form:
        if side is IntervalSide.NEGATIVE:
            return t / (3.0 * abs(dd))
        if side is IntervalSide.POSITIVE:
            return t / (3.0 * dd)
        return t * math.log(2.0) / dd
    if side is IntervalSide.CROSSING:
        return t * math.log(2.0) / abs(dd) - t / 3.0
    return -t / 3.0


def caloric_excursion(
    d1: float,
    d2: float,
    t: float,
    config: CalorexConfig | None = None,
    *,
    paper: bool = True,
    isentrope: bool = True,
    mapper: Mapper = map,
) -> CaloricResult:
    """Evaluate the requested temperature-change definitions for one excursion."""
    config = config or CalorexConfig()
    if paper:
        result = delta_temperature_paper(d1, d2, t, config, mapper)
    else:
        result = CaloricResult(d1=d1, d2=d2, t_initial=t, delta_S=delta_entropy(d1, d2, t, config))
    if not isentrope:
        return result
    return CaloricResult(
        d1=result.d1,
        d2=result.d2,
        t_initial=result.t_initial,
        delta_S=result.delta_S,
        delta_t_paper=result.delta_t_paper,
        delta_t_isentrope=delta_temperature_isentrope(d1, d2, t, config),
        jump_contribution=result.jump_contribution,
        metadata=result.metadata,
    )
