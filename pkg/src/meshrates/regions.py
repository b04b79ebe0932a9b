"""Achievable-rate polytopes in the (private rate, common rate) plane.

Each receiver sees a small Gaussian multiple-access channel once the decoding
strategy fixes which interfering codebooks are decoded and which are treated
as noise. Every builder here emits the reduced constraint set of that MAC as
labeled halfspaces ``coef_private*R_p + coef_common*R_c <= bound``.

The two-message min-type common bounds are emitted as two separate halfspaces
(2-user and 3-user) so linear programs over the raw polytope can report
binding constraints faithfully.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import HopSplit, NetworkParams, RatePair, capacity
from .quadrature import integrate_unit

LABEL_PRIVATE = "private-single"
LABEL_COMMON2 = "common-2user"
LABEL_COMMON3 = "common-3user"
LABEL_SUM2 = "sum-2"
LABEL_SUM3 = "sum-3"
LABEL_COMMON = "common-joint"
LABEL_SUM = "sum-joint"


@dataclass(frozen=True)
class Halfspace:
    """One constraint coef_private*R_p + coef_common*R_c <= bound."""

    coef_private: int
    coef_common: int
    bound: float
    label: str

    def __post_init__(self) -> None:
        if self.coef_private == 0 and self.coef_common == 0:
            raise ValueError("halfspace needs at least one non-zero coefficient")
        if not (math.isfinite(self.bound) and self.bound >= 0.0):
            raise ValueError(f"halfspace bound must be finite and >= 0, got {self.bound!r}")

    def slack(self, point: RatePair) -> float:
        return self.bound - (self.coef_private * point.r_private
                             + self.coef_common * point.r_common)


@dataclass(frozen=True)
class RateRegion:
    """Bounded polytope of achievable (R_private, R_common) pairs.

    The origin is always feasible (bounds are non-negative) and boundedness
    is guaranteed by requiring a pure private constraint and a pure common
    constraint.
    """

    halfspaces: tuple[Halfspace, ...]
    provenance: str

    def __post_init__(self) -> None:
        if not any(h.coef_private >= 1 and h.coef_common == 0 for h in self.halfspaces):
            raise ValueError("region is unbounded in R_private: needs a (1,0) constraint")
        if not any(h.coef_private == 0 and h.coef_common >= 1 for h in self.halfspaces):
            raise ValueError("region is unbounded in R_common: needs a (0,k) constraint")

    @property
    def short_name(self) -> str:
        return self.provenance.split("(", 1)[0]


@dataclass(frozen=True)
class FilterTaps:
    """Amplitude taps of the equivalent inter-cell impulse responses seen by
    a joint decoder in the second hop (square roots of power gains)."""

    private_taps: tuple[float, float, float]
    common_taps: tuple[float, float, float, float, float]


def filter_taps(params: NetworkParams) -> FilterTaps:
    g = math.sqrt(params.gamma2)
    e = math.sqrt(params.eta2)
    return FilterTaps(
        private_taps=(e, g, e),
        common_taps=(e, g + e, g + 2 * e, g + e, e),
    )


# ---------------------------------------------------------------------------
# Bound formulas. The *_bounds helpers accept scalars or numpy arrays for the
# power pair so the split optimizers can sweep many splits in one call; the
# public region builders wrap the scalar case into labeled halfspaces.
# ---------------------------------------------------------------------------

def _log1p_rate(x):
    return np.log2(1.0 + x)


def mac_bounds(cross2, intra2, p_private, p_common):
    """Reduced 4-user MAC constraint bounds for one hop with rate splitting.

    ``cross2``/``intra2`` are the inter-/intra-cell power gains of the hop.
    Returns the bounds keyed by (coef_private, coef_common).
    """
    noise = 1.0 + 2.0 * cross2 * p_private
    return {
        (1, 0): _log1p_rate(intra2 * p_private / noise),
        (0, 2): _log1p_rate(2.0 * cross2 * p_common / noise),
        (0, 3): _log1p_rate((2.0 * cross2 + intra2) * p_common / noise),
        (1, 2): _log1p_rate((intra2 * p_private + 2.0 * cross2 * p_common) / noise),
        (1, 3): _log1p_rate((intra2 * p_private + (2.0 * cross2 + intra2) * p_common) / noise),
    }


def coop_bounds(gamma2, eta2, p_private, p_common):
    """Second-hop MAC bounds when the three adjacent relays transmit each
    common codeword cooperatively, splitting its power three ways.

    Coherent combining turns the common-signal receive powers into
    (gamma+eta)^2 and (gamma+2*eta)^2 terms; the two leaked outer-cell common
    codewords and the adjacent private codewords raise the noise floor.
    """
    g = np.sqrt(gamma2)
    e = np.sqrt(eta2)
    per_code = p_common / 3.0
    noise = 1.0 + 2.0 * eta2 * (p_private + per_code)
    two_user = 2.0 * (g + e) ** 2
    three_user = two_user + (g + 2.0 * e) ** 2
    return {
        (1, 0): _log1p_rate(gamma2 * p_private / noise),
        (0, 2): _log1p_rate(two_user * per_code / noise),
        (0, 3): _log1p_rate(three_user * per_code / noise),
        (1, 2): _log1p_rate((gamma2 * p_private + two_user * per_code) / noise),
        (1, 3): _log1p_rate((gamma2 * p_private + three_user * per_code) / noise),
    }


def mcp_integrands(params: NetworkParams, split: HopSplit) -> dict[str, Callable]:
    """Spectral-domain integrands of the three joint-decoding bounds.

    Each maps a frequency in [0, 1] (scalar or ndarray) to bits/channel use.
    """
    taps = filter_taps(params)
    e, g, _ = taps.private_taps
    pw = split.powers(params.p2)
    p_private, per_code = pw.p_private, pw.p_common / 3.0

    def private_response(f):
        return g + 2.0 * e * np.cos(2.0 * np.pi * f)

    def common_response(f):
        return (g + 2.0 * e
                + 2.0 * (g + e) * np.cos(2.0 * np.pi * f)
                + 2.0 * e * np.cos(4.0 * np.pi * f))

    return {
        "private": lambda f: _log1p_rate(p_private * private_response(f) ** 2),
        "common": lambda f: _log1p_rate(per_code * common_response(f) ** 2),
        "sum": lambda f: _log1p_rate(p_private * private_response(f) ** 2
                                     + per_code * common_response(f) ** 2),
    }


def _mac_region(cross2, intra2, p_private, p_common, provenance: str) -> RateRegion:
    b = mac_bounds(cross2, intra2, p_private, p_common)
    return RateRegion(
        halfspaces=(
            Halfspace(1, 0, float(b[(1, 0)]), LABEL_PRIVATE),
            Halfspace(0, 2, float(b[(0, 2)]), LABEL_COMMON2),
            Halfspace(0, 3, float(b[(0, 3)]), LABEL_COMMON3),
            Halfspace(1, 2, float(b[(1, 2)]), LABEL_SUM2),
            Halfspace(1, 3, float(b[(1, 3)]), LABEL_SUM3),
        ),
        provenance=provenance,
    )


def hop1_region(params: NetworkParams, split: HopSplit) -> RateRegion:
    """Rate region of the terminal-to-relay hop for a fixed power split."""
    pw = split.powers(params.p1)
    return _mac_region(
        params.alpha2, params.beta2, pw.p_private, pw.p_common,
        f"hop1(alpha2={params.alpha2:g}, beta2={params.beta2:g}, "
        f"p_private={pw.p_private:g}, p_common={pw.p_common:g})",
    )


def hop2_rs_region(params: NetworkParams, split: HopSplit) -> RateRegion:
    """Relay-to-base hop region when relays re-split independently
    (same constraint structure as hop 1 with the hop-2 gains and power)."""
    pw = split.powers(params.p2)
    return _mac_region(
        params.eta2, params.gamma2, pw.p_private, pw.p_common,
        f"hop2-rs(eta2={params.eta2:g}, gamma2={params.gamma2:g}, "
        f"p_private={pw.p_private:g}, p_common={pw.p_common:g})",
    )


def hop2_coop_region(params: NetworkParams, split: HopSplit) -> RateRegion:
    """Relay-to-base hop region with cooperative common-message relaying."""
    pw = split.powers(params.p2)
    b = coop_bounds(params.gamma2, params.eta2, pw.p_private, pw.p_common)
    return RateRegion(
        halfspaces=(
            Halfspace(1, 0, float(b[(1, 0)]), LABEL_PRIVATE),
            Halfspace(0, 2, float(b[(0, 2)]), LABEL_COMMON2),
            Halfspace(0, 3, float(b[(0, 3)]), LABEL_COMMON3),
            Halfspace(1, 2, float(b[(1, 2)]), LABEL_SUM2),
            Halfspace(1, 3, float(b[(1, 3)]), LABEL_SUM3),
        ),
        provenance=f"hop2-coop(eta2={params.eta2:g}, gamma2={params.gamma2:g}, "
                   f"p_private={pw.p_private:g}, p_common={pw.p_common:g})",
    )


def hop2_mcp_region(params: NetworkParams, split: HopSplit, tol: float = 1e-9) -> RateRegion:
    """Relay-to-base hop region with joint decoding across all base stations.

    The three bounds are unit-interval integrals of spectral rate densities,
    evaluated adaptively to absolute tolerance ``tol``.
    """
    if not (math.isfinite(tol) and tol > 0.0):
        raise ValueError(f"quadrature tolerance must be positive, got {tol!r}")
    integrands = mcp_integrands(params, split)
    pw = split.powers(params.p2)
    bounds = {name: integrate_unit(fn, tol=tol).value for name, fn in integrands.items()}
    return RateRegion(
        halfspaces=(
            Halfspace(1, 0, max(bounds["private"], 0.0), LABEL_PRIVATE),
            Halfspace(0, 1, max(bounds["common"], 0.0), LABEL_COMMON),
            Halfspace(1, 1, max(bounds["sum"], 0.0), LABEL_SUM),
        ),
        provenance=f"hop2-mcp(eta2={params.eta2:g}, gamma2={params.gamma2:g}, "
                   f"p_private={pw.p_private:g}, p_common={pw.p_common:g}, tol={tol:g})",
    )


# ---------------------------------------------------------------------------
# Analytic corner points
# ---------------------------------------------------------------------------

def corner_sum_rate(cross2, intra2, p_private, p_common):
    """Maximum R_p + R_c over the reduced MAC region (vectorized).

    Achieved by jointly decoding the three common codewords first (all
    private signals still on air), cancelling them, then decoding the
    private codeword interference-free from same-cell common signals.
    """
    noise0 = 1.0 + 2.0 * cross2 * p_private
    noise_first = 1.0 + (2.0 * cross2 + intra2) * p_private
    r_private = _log1p_rate(intra2 * p_private / noise0)
    rc_two = 0.5 * _log1p_rate(2.0 * cross2 * p_common / noise_first)
    rc_three = _log1p_rate((2.0 * cross2 + intra2) * p_common / noise_first) / 3.0
    return r_private + np.minimum(rc_two, rc_three)


def vertex_a(params: NetworkParams, split: HopSplit, hop: int = 1) -> tuple[RatePair, float]:
    """Sum-rate-maximizing corner of a hop's rate-splitting region.

    Returns the corner itself and its sum rate. ``hop`` selects which hop's
    gains and power are used (hop 2 follows the plain substitution rule).
    """
    if hop == 1:
        cross2, intra2, total = params.alpha2, params.beta2, params.p1
    elif hop == 2:
        cross2, intra2, total = params.eta2, params.gamma2, params.p2
    else:
        raise ValueError(f"hop must be 1 or 2, got {hop!r}")
    pw = split.powers(total)
    noise0 = 1.0 + 2.0 * cross2 * pw.p_private
    noise_first = 1.0 + (2.0 * cross2 + intra2) * pw.p_private
    r_private = capacity(intra2 * pw.p_private / noise0)
    rc_two = 0.5 * capacity(2.0 * cross2 * pw.p_common / noise_first)
    rc_three = capacity((2.0 * cross2 + intra2) * pw.p_common / noise_first) / 3.0
    r_common = min(rc_two, rc_three)
    point = RatePair(r_private, r_common)
    return point, point.total


def vertices_bc(params: NetworkParams, split: HopSplit) -> dict[str, RatePair]:
    """Candidate corner points of the first-hop region from fixed
    successive-cancellation orders.

    B decodes the same-cell common codeword first and the adjacent common
    codewords last; B' decodes the private codeword first; C sits at the
    crossing of the two mixed sum constraints. Each candidate is an actual
    corner only in its own interference regime: outside it the point exits
    the region (for membership checks pair this with ``polytope.contains``).
    """
    cross2, intra2 = params.alpha2, params.beta2
    pw = split.powers(params.p1)
    pp, pc = pw.p_private, pw.p_common
    noise0 = 1.0 + 2.0 * cross2 * pp

    b_common = 0.5 * capacity(2.0 * cross2 * pc / noise0)
    b_private = capacity(intra2 * pp / (noise0 + 2.0 * cross2 * pc))

    bp_common = capacity((2.0 * cross2 + intra2) * pc / noise0) / 3.0
    bp_private = capacity(intra2 * pp / (noise0 + (2.0 * cross2 + intra2) * pc))

    c_common = capacity(intra2 * pc / (noise0 + intra2 * pp + 2.0 * cross2 * pc))
    sum2 = capacity((intra2 * pp + 2.0 * cross2 * pc) / noise0)
    c_private = max(sum2 - 2.0 * c_common, 0.0)

    return {
        "B": RatePair(b_private, b_common),
        "B_prime": RatePair(bp_private, bp_common),
        "C": RatePair(c_private, c_common),
    }
