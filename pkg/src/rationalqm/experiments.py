"""Physics demonstrations on the discretised sphere: interferometer
definability, delayed choice, phase-splitting identities, uncertainty
relations, counterfactual non-commutativity, and the Bell harness.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import mpmath

from .exact import (ExactCosine, RationalAngle, TriangleVerdict, cos_squared,
                    itc_verdict, niven_cosine)
from .lattice import LatticePoint
from .states import (HiddenPermutation, canonical_two_qubit_strings,
                     make_singlet, singlet_params)

PRECISION_BITS = 200
RESIDUAL_TOL = mpmath.mpf(2) ** -150

CosineValue = Union[Fraction, float, mpmath.mpf]


class SnapInfeasibleError(ValueError):
    """No lattice latitude lies within the requested tolerance."""


def _mpf(x: CosineValue) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _cis(angle: RationalAngle) -> mpmath.mpc:
    return mpmath.exp(1j * angle.radians(PRECISION_BITS))


# ---------------------------------------------------------------------------
# Mach-Zehnder interferometer and delayed choice
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MZReport:
    phi: RationalAngle
    inside_definable: bool
    inside_certificate: str
    output_definable: bool
    output_certificate: ExactCosine
    output_probabilities: Tuple[CosineValue, CosineValue]  # (sin^2, cos^2) of phi/2
    numeric_residual: float


def mz_simulate(phi: RationalAngle) -> MZReport:
    """Two-beamsplitter state algebra with exact definability certificates.

    Inside the interferometer the squared amplitudes are 1/2 and the phase is
    a rational turn fraction, so the inside basis is always definable for a
    rational-turn input. The output basis needs cos^2(phi/2), hence cos(phi),
    rational; the two demands only coincide on the exceptional angles.
    """
    with mpmath.workprec(PRECISION_BITS):
        e = _cis(phi)
        amp_keep = (1 + e) / 2   # port that reproduces the input at phi = 0
        amp_cross = (1 - e) / 2
        half = phi.radians(PRECISION_BITS) / 2
        residual = max(abs(abs(amp_cross) ** 2 - mpmath.sin(half) ** 2),
                       abs(abs(amp_keep) ** 2 - mpmath.cos(half) ** 2))
        assert residual < RESIDUAL_TOL

    cert = niven_cosine(phi)
    if cert.is_rational:
        c = cert.rational
        probs: Tuple[CosineValue, CosineValue] = ((1 - c) / 2, (1 + c) / 2)
    else:
        with mpmath.workprec(PRECISION_BITS):
            probs = (mpmath.sin(half) ** 2, mpmath.cos(half) ** 2)
    return MZReport(
        phi=phi,
        inside_definable=True,
        inside_certificate=(f"squared amplitudes 1/2 rational; phase "
                            f"{phi.turns} of a turn rational"),
        output_definable=cert.is_rational,
        output_certificate=cert,
        output_probabilities=probs,
        numeric_residual=float(residual),
    )


@dataclass(frozen=True)
class DelayedChoiceReport:
    phi: RationalAngle
    second_mirror_in: bool
    demanded: str
    satisfied: bool
    certificate: ExactCosine


def delayed_choice(phi: RationalAngle, second_mirror_in: bool) -> DelayedChoiceReport:
    """Which rationality condition the configuration demands of the phase.

    Mirror in: the output basis demands cos(phi) rational. Mirror out: the
    which-path basis demands only the turn fraction rational, which a
    rational-turn input satisfies by construction.
    """
    cert = niven_cosine(phi)
    if second_mirror_in:
        return DelayedChoiceReport(phi=phi, second_mirror_in=True,
                                   demanded="cos(phi) rational",
                                   satisfied=cert.is_rational, certificate=cert)
    return DelayedChoiceReport(phi=phi, second_mirror_in=False,
                               demanded="phi/2pi rational",
                               satisfied=True, certificate=cert)


# ---------------------------------------------------------------------------
# Phase-splitting identities (sum/difference of unit phasors)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    phi_a: RationalAngle
    phi_b: RationalAngle
    sum_identity_ok: bool
    diff_identity_ok: bool
    difference_is_zero: bool
    half_diff: RationalAngle
    cos_sq_half_diff: Optional[Fraction]
    sin_sq_half_diff: Optional[Fraction]
    amplitude_rational: bool
    clash: bool           # amplitude and phase rationality mutually exclusive
    exception_hit: bool   # both hold: the sparse exceptional set


def identity_split_check(phi_a: RationalAngle, phi_b: RationalAngle) -> IdentityReport:
    """Verify the phasor sum/difference identities at 200-bit precision and
    report the rationality clash between the split amplitudes and the
    individual phases.

    The finite-difference (momentum) reading is the difference identity with
    half-difference argument: its amplitude is rational iff sin^2 of the
    half-difference is rational, which fails off the exceptional set.
    """
    with mpmath.workprec(PRECISION_BITS):
        ea, eb = _cis(phi_a), _cis(phi_b)
        half_sum_rad = (phi_a.radians(PRECISION_BITS)
                        + phi_b.radians(PRECISION_BITS)) / 2
        half_diff_rad = (phi_a.radians(PRECISION_BITS)
                         - phi_b.radians(PRECISION_BITS)) / 2
        mid = mpmath.exp(1j * half_sum_rad)
        res_sum = abs(2 * mpmath.cos(half_diff_rad) * mid - (ea + eb))
        res_diff = abs(2j * mpmath.sin(half_diff_rad) * mid - (ea - eb))
        diff_zero = abs(ea - eb) < RESIDUAL_TOL

    half_diff = RationalAngle((phi_a.turns - phi_b.turns) / 2)
    c2 = cos_squared(half_diff)
    s2 = None if c2 is None else 1 - c2
    amplitude_rational = c2 is not None
    return IdentityReport(
        phi_a=phi_a, phi_b=phi_b,
        sum_identity_ok=bool(res_sum < RESIDUAL_TOL),
        diff_identity_ok=bool(res_diff < RESIDUAL_TOL),
        difference_is_zero=bool(diff_zero),
        half_diff=half_diff,
        cos_sq_half_diff=c2,
        sin_sq_half_diff=s2,
        amplitude_rational=amplitude_rational,
        clash=not amplitude_rational,
        exception_hit=amplitude_rational,
    )


# ---------------------------------------------------------------------------
# Uncertainty
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UncertaintyReport:
    cosines: Tuple[CosineValue, CosineValue, CosineValue]
    sigma_product: CosineValue       # sin(theta') * sin(theta'')
    mu_abs: CosineValue              # |cos(theta)|
    holds: bool
    rational_flags: Tuple[bool, bool, bool]
    niven_note: str


def uncertainty_check(cosines: Sequence[CosineValue],
                      tol: Optional[mpmath.mpf] = None) -> UncertaintyReport:
    """Check sin(theta')*sin(theta'') >= |cos(theta)| for a direction given
    by its three direction cosines (squares summing to one).

    Exact Fraction inputs are compared exactly via squares; numeric inputs
    at 200-bit precision within `tol` (default 2^-150).
    """
    if len(cosines) != 3:
        raise ValueError("need exactly three direction cosines")
    tol = RESIDUAL_TOL if tol is None else tol
    exact = all(isinstance(c, Fraction) for c in cosines)
    c, cp, cpp = cosines
    if exact:
        if c * c + cp * cp + cpp * cpp != 1:
            raise ValueError("direction cosines do not have unit square sum")
        lhs_sq = (1 - cp * cp) * (1 - cpp * cpp)
        rhs_sq = c * c
        holds = lhs_sq >= rhs_sq
        with mpmath.workprec(PRECISION_BITS):
            sigma = mpmath.sqrt(_mpf(lhs_sq))
        mu = abs(c)
    else:
        with mpmath.workprec(PRECISION_BITS):
            mc, mcp, mcpp = _mpf(c), _mpf(cp), _mpf(cpp)
            if abs(mc ** 2 + mcp ** 2 + mcpp ** 2 - 1) > tol:
                raise ValueError("direction cosines do not have unit square sum")
            sigma = mpmath.sqrt((1 - mcp ** 2) * (1 - mcpp ** 2))
            mu = abs(mc)
            holds = bool(sigma >= mu - tol)
    flags = tuple(isinstance(v, Fraction) for v in cosines)
    note = ("all three direction cosines rational: only possible on the "
            "exceptional angle set" if all(flags) else
            "spin values along two axes are not simultaneously rational off "
            "the exceptional angle set")
    return UncertaintyReport(cosines=tuple(cosines), sigma_product=sigma,
                             mu_abs=mu, holds=holds,
                             rational_flags=flags, niven_note=note)


@dataclass(frozen=True)
class AggregateReport:
    samples: int
    seed: Optional[int]
    bound: float                 # sqrt(mean sigma'^2) * sqrt(mean sigma''^2)
    mean_abs_cos: float
    holds: bool                  # bound >= 1/2
    degenerate: bool             # every sample sits on the equality case


def aggregate_directions(directions: Sequence[Tuple[float, float]],
                         seed: Optional[int] = None) -> AggregateReport:
    """Aggregate the squared-deviation bound over explicit (cos_theta,
    phi_radians) direction samples."""
    if not directions:
        raise ValueError("need at least one direction")
    sum_sp = sum_spp = sum_abs = 0.0
    degenerate = True
    for c, phi in directions:
        s = math.sqrt(max(0.0, 1.0 - c * c))
        cp = s * math.cos(phi)
        cpp = s * math.sin(phi)
        sp = 1.0 - cp * cp
        spp = 1.0 - cpp * cpp
        sum_sp += sp
        sum_spp += spp
        sum_abs += abs(c)
        if abs(sp * spp - c * c) > 1e-12:
            degenerate = False
    n = len(directions)
    bound = math.sqrt(sum_sp / n) * math.sqrt(sum_spp / n)
    mean_abs = sum_abs / n
    return AggregateReport(samples=n, seed=seed, bound=bound,
                           mean_abs_cos=mean_abs, holds=bound >= 0.5,
                           degenerate=degenerate)


def position_momentum_aggregate(M: int, seed: int) -> AggregateReport:
    """Sample M directions uniform in cos(theta) (so mean |cos| -> 1/2) and
    uniform in azimuth, then aggregate the deviation-product bound."""
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    rng = random.Random(seed)
    directions = [(rng.uniform(-1.0, 1.0), rng.uniform(0.0, 2 * math.pi))
                  for _ in range(M)]
    return aggregate_directions(directions, seed=seed)


# ---------------------------------------------------------------------------
# Nominal settings and lattice snapping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NominalSetting:
    target_cos: float
    neighborhood: Fraction
    snapped: LatticePoint

    @property
    def exact_cos(self) -> Fraction:
        return self.snapped.cos_theta


def snap_to_lattice(target_cos: float, L: int,
                    epsilon: Optional[Fraction] = None,
                    parity: Optional[int] = None) -> NominalSetting:
    """Nearest lattice latitude cos(theta) = 2m/L - 1 to the target.

    `parity`, when given, restricts m to that parity (needed when a
    half-length sub-block must carry an integer count); the grid spacing is
    then 4/L instead of 2/L.
    """
    if not -1.0 <= target_cos <= 1.0:
        raise ValueError(f"|target_cos| must be <= 1, got {target_cos}")
    if L < 2:
        raise ValueError(f"L must be >= 2, got {L}")
    epsilon = Fraction(2, L) if epsilon is None else Fraction(epsilon)
    exact_target = Fraction(target_cos)
    raw = (exact_target + 1) * L / 2
    if parity is None:
        m = round(raw)
        m = min(max(m, 0), L)
    else:
        m = 2 * round((raw - parity) / 2) + parity
        m = min(max(m, parity), L - (L - parity) % 2)
    err = abs(Fraction(2 * m - L, L) - exact_target)
    if err > epsilon:
        raise SnapInfeasibleError(
            f"nearest lattice cos differs from target by {float(err):.3g} "
            f"> epsilon {float(epsilon):.3g} at L={L}")
    return NominalSetting(target_cos=target_cos, neighborhood=epsilon,
                          snapped=LatticePoint(m, 0, L))


def exact_setting(cos: Fraction) -> NominalSetting:
    """A setting whose exact lattice cosine equals the given rational: uses
    the smallest granularity 2q that realises cos = p/q on the latitude grid."""
    cos = Fraction(cos)
    if abs(cos) > 1:
        raise ValueError(f"|cos| must be <= 1, got {cos}")
    L = 2 * cos.denominator
    m = cos.numerator + cos.denominator
    return NominalSetting(target_cos=float(cos), neighborhood=Fraction(0),
                          snapped=LatticePoint(m, 0, L))


# ---------------------------------------------------------------------------
# Stern-Gerlach counterfactual
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SGReport:
    cos_ab: Fraction
    cos_bc: Fraction
    phi_b: RationalAngle
    verdict: TriangleVerdict

    @property
    def definable(self) -> bool:
        return self.verdict.possible

    @property
    def degenerate(self) -> bool:
        return self.verdict.reason == "degenerate"


def sg_counterfactual(setting_ab: NominalSetting, setting_bc: NominalSetting,
                      phi_b: RationalAngle) -> SGReport:
    """Whether the order-swapped run of two sequential analysers is
    simultaneously definable with the real one: needs the third relative
    cosine rational, decided by the impossible-triangle check."""
    verdict = itc_verdict(setting_ab.exact_cos, setting_bc.exact_cos, phi_b)
    return SGReport(cos_ab=setting_ab.exact_cos, cos_bc=setting_bc.exact_cos,
                    phi_b=phi_b, verdict=verdict)


# ---------------------------------------------------------------------------
# Bell harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairStats:
    label: str
    relative_turns: Fraction
    nominal_cos: float
    snapped_cos: Fraction
    trials: int
    seed: int
    correlation: float
    std_error: float
    predicted_nominal: float     # -cos of the nominal relative angle
    predicted_snapped: Fraction  # -cos of the snapped lattice angle


@dataclass(frozen=True)
class BellReport:
    L: int
    trials_per_pair: int
    seed: int
    pairs: List[PairStats]
    bell_quantity: float
    bell_quantity_nominal: float

    @property
    def violates(self) -> bool:
        return self.bell_quantity > 1.0


def _pair_seed(seed: int, index: int) -> int:
    # Disjoint deterministic streams per sub-ensemble.
    return seed * 1_000_003 + index


def _singlet_pair_correlation(relative_turns: Fraction, L: int, trials: int,
                              stream_seed: int, label: str) -> PairStats:
    nominal_cos = math.cos(2 * math.pi * float(relative_turns))
    setting = snap_to_lattice(nominal_cos, L, parity=L % 2)
    snapped_cos = setting.exact_cos
    top, bottom = canonical_two_qubit_strings(singlet_params(snapped_cos), L)

    # A uniform hidden permutation sends a uniformly random source position
    # to the front, and the halving dynamics reads exactly that position on
    # both strings; sampling the position directly draws from the same
    # distribution without materialising the full permutation each trial.
    rng = random.Random(stream_seed)
    total = 0
    for _ in range(trials):
        pos = rng.randrange(L)
        total += top[pos] * bottom[pos]
    corr = total / trials
    se = math.sqrt(max(0.0, 1.0 - corr * corr) / trials)
    return PairStats(label=label, relative_turns=relative_turns,
                     nominal_cos=nominal_cos, snapped_cos=snapped_cos,
                     trials=trials, seed=stream_seed,
                     correlation=corr, std_error=se,
                     predicted_nominal=-nominal_cos,
                     predicted_snapped=-snapped_cos)


def bell_run(nominal_a: Fraction, nominal_b: Fraction, nominal_c: Fraction,
             L: int, trials_per_pair: int, seed: int) -> BellReport:
    """Three independent singlet sub-ensembles, one per setting pair, each at
    the snapped relative angle; returns the per-pair correlations and the
    Bell quantity |Co(A,B) - Co(A,C)| - Co(B,C)."""
    if trials_per_pair < 100:
        raise ValueError(
            f"trials_per_pair = {trials_per_pair} < 100 is statistically meaningless")
    if L % 2 != 0:
        raise ValueError(f"singlet construction needs even L, got {L}")
    labels = [("AB", nominal_a, nominal_b),
              ("AC", nominal_a, nominal_c),
              ("BC", nominal_b, nominal_c)]
    pairs = []
    for idx, (label, t1, t2) in enumerate(labels):
        delta = (Fraction(t1) - Fraction(t2)) % 1
        pairs.append(_singlet_pair_correlation(
            delta, L, trials_per_pair, _pair_seed(seed, idx), label))
    co = {p.label: p.correlation for p in pairs}
    pred = {p.label: p.predicted_nominal for p in pairs}
    quantity = abs(co["AB"] - co["AC"]) - co["BC"]
    quantity_nominal = abs(pred["AB"] - pred["AC"]) - pred["BC"]
    return BellReport(L=L, trials_per_pair=trials_per_pair, seed=seed,
                      pairs=pairs, bell_quantity=quantity,
                      bell_quantity_nominal=quantity_nominal)


def single_trial_outcomes(cos_theta_ab: Fraction, L: int,
                          xi_seed: int) -> Tuple[int, int]:
    """Full-machinery reference path for one Bell trial: build the singlet,
    permute both strings with the same hidden permutation, and run the
    halving measurement on each."""
    from .reduction import measure
    xi = HiddenPermutation.from_seed(xi_seed, L)
    state = make_singlet(cos_theta_ab, L, xi)
    return measure(state.top).outcome, measure(state.bottom).outcome


# ---------------------------------------------------------------------------
# Bell-sum definability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BellSumReport:
    cos_ab: Fraction
    cos_ac: Fraction
    phi_a: RationalAngle
    first_counterfactual_satisfiable: bool
    second_verdict: TriangleVerdict
    bellsum_defined: bool
    degenerate: bool
    nominal_setting_independent: bool
    exact_setting_independent: bool
    reason: str


def bellsum_definability(setting_ab: NominalSetting, setting_ac: NominalSetting,
                         phi_a: RationalAngle) -> BellSumReport:
    """Definability of the per-hidden-variable three-correlation sum.

    The first counterfactual (a free exact third setting in its nominal
    neighbourhood) is always satisfiable. The second requires the remaining
    relative cosine rational given the exact interior angle at the shared
    vertex, which is the impossible-triangle question. Hidden variables are
    drawn independently of nominal settings, but the set on which all three
    products are defined depends on the exact settings.
    """
    verdict = itc_verdict(setting_ab.exact_cos, setting_ac.exact_cos, phi_a)
    degenerate = verdict.reason == "degenerate"
    defined = verdict.possible
    if degenerate:
        reason = "degenerate configuration: trivially definable"
    elif defined:
        reason = "exceptional angle set: all three correlation terms defined"
    else:
        reason = ("second counterfactual undefined: third relative cosine "
                  "cannot be rational")
    return BellSumReport(
        cos_ab=setting_ab.exact_cos, cos_ac=setting_ac.exact_cos, phi_a=phi_a,
        first_counterfactual_satisfiable=True,
        second_verdict=verdict,
        bellsum_defined=defined,
        degenerate=degenerate,
        nominal_setting_independent=True,
        exact_setting_independent=defined,
        reason=reason)
