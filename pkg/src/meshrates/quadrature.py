"""Deterministic adaptive integration on the unit interval.

Adaptive composite Simpson with Richardson extrapolation and absolute error
control; sufficient for the smooth periodic spectral integrands that show up
in the joint-decoding bounds. The contract is the tolerance, not the rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

DEFAULT_TOL = 1e-9
MAX_EVALUATIONS = 2 ** 20
_MIN_WIDTH = 1e-13


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    err_estimate: float
    evaluations: int


class QuadratureError(RuntimeError):
    """Raised when the evaluation cap is hit before reaching tolerance.

    Carries the best available estimate in ``partial``.
    """

    def __init__(self, message: str, partial: QuadratureResult):
        super().__init__(message)
        self.partial = partial


def _eval(fn: Callable[[float], float], x: float) -> float:
    y = float(fn(x))
    if not math.isfinite(y):
        raise ValueError(f"integrand returned non-finite value {y!r} at {x!r}")
    return y


def integrate_unit(
    integrand: Callable[[float], float],
    tol: float = DEFAULT_TOL,
    max_evals: int = MAX_EVALUATIONS,
) -> QuadratureResult:
    """Integrate ``integrand`` over [0, 1] to absolute tolerance ``tol``.

    Raises QuadratureError (carrying the partial estimate) if ``max_evals``
    integrand calls are not enough, and ValueError for invalid inputs.
    """
    if not (math.isfinite(tol) and tol > 0.0):
        raise ValueError(f"tolerance must be finite and positive, got {tol!r}")

    fa = _eval(integrand, 0.0)
    fm = _eval(integrand, 0.5)
    fb = _eval(integrand, 1.0)
    evals = 3
    whole = (fa + 4.0 * fm + fb) / 6.0

    # Stack entries: (a, b, fa, fm, fb, simpson_estimate, local_tol)
    stack = [(0.0, 1.0, fa, fm, fb, whole, tol)]
    value = 0.0
    err = 0.0

    while stack:
        a, b, fa, fm, fb, s_whole, local_tol = stack.pop()
        if evals + 2 > max_evals:
            pending = s_whole + sum(item[5] for item in stack)
            partial = QuadratureResult(value + pending, math.inf, evals)
            raise QuadratureError(
                f"quadrature did not converge within {max_evals} evaluations "
                f"(partial value {partial.value!r})",
                partial,
            )
        m = 0.5 * (a + b)
        flm = _eval(integrand, 0.5 * (a + m))
        frm = _eval(integrand, 0.5 * (m + b))
        evals += 2
        s_left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
        s_right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
        delta = s_left + s_right - s_whole
        if abs(delta) <= 15.0 * local_tol or (b - a) <= _MIN_WIDTH:
            value += s_left + s_right + delta / 15.0
            err += abs(delta) / 15.0
        else:
            half_tol = 0.5 * local_tol
            stack.append((a, m, fa, flm, fm, s_left, half_tol))
            stack.append((m, b, fm, frm, fb, s_right, half_tol))

    return QuadratureResult(value, err, evals)
