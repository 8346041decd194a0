#pragma once

#include <diracint/model.hpp>
#include <diracint/types.hpp>

namespace diracint {

/// An element (q, p, eta, xi) of T*T*Q in chart coordinates. The covector
/// blocks follow the (q, p, -dp, dq) coordinate convention, so eta pairs
/// against velocity-like and xi against momentum-like directions.
struct CotangentCotangentElement {
    Vec base_q;
    Vec base_p;
    Vec eta;
    Vec xi;
};

/// Three consecutive cotangent points. The (+) hat-quantities consume
/// next.p, the (-) ones consume prev.p; mid is always the anchor.
struct PhaseTriple {
    PhaseState prev;
    PhaseState mid;
    PhaseState next;
};

/// An element ((q0, q1), (-p0, p1)) of T*(Q x Q).
struct CotangentProductElement {
    ConfigPair pair_q;
    Vec neg_p0;
    Vec p1;
};

/// Coordinate shuffle ((q0, p0), (q1, p1)) -> ((q0, q1), (-p0, p1)).
CotangentProductElement kappa_d(const PhaseState& z0, const PhaseState& z1);

/// Inverse of kappa_d.
void kappa_d_inverse(const CotangentProductElement& elem, PhaseState& z0, PhaseState& z1);

/// (+)-discrete flat map on the pair (prev, mid), the extra momentum taken
/// from next: (q1, p1, -(p2 - p1)/h, (q1 - q0)/h).
CotangentCotangentElement flat_plus(const PhaseTriple& triple, double h);

/// (-)-discrete flat map on the pair (mid, next), the extra momentum taken
/// from prev: (q0, p0, -(p0 - p_prev)/h, (q1 - q0)/h).
CotangentCotangentElement flat_minus(const PhaseTriple& triple, double h);

/// gamma_plus = flat_plus o kappa_d^{-1}. `elem` must decode to the
/// (prev, mid) states of `context` up to 1e-12, which supplies next.p.
CotangentCotangentElement gamma_plus(const CotangentProductElement& elem, const PhaseTriple& context,
                                     double h);

/// gamma_minus = flat_minus o kappa_d^{-1}; `elem` must decode to
/// (mid, next) of `context`, which supplies prev.p.
CotangentCotangentElement gamma_minus(const CotangentProductElement& elem, const PhaseTriple& context,
                                      double h);

/// (+)-discrete dual pairing of zeta (based at z1) against the pair (z0, z1):
/// <eta, (q1 - q0)/h> + <(p2 - p1)/h, xi>.
double pairing_plus(const CotangentCotangentElement& zeta, const PhaseState& z0, const PhaseState& z1,
                    const Vec& p2, double h);

/// (-)-discrete dual pairing of zeta (based at z0) against the pair (z0, z1):
/// <eta, (q1 - q0)/h> + <(p0 - p_prev)/h, xi>.
double pairing_minus(const CotangentCotangentElement& zeta, const PhaseState& z0, const PhaseState& z1,
                     const Vec& p_prev, double h);

/// (+)-discrete Dirac differential of L_d at the Pontryagin pair (q0, v0),
/// with `next_pair` = (q1, v1) supplying the hat-approximation:
///   ( v0, D2 L_d(q0, v0), -(1/h)(D2 L_d(q1, v1) + D1 L_d(q1, v1)), (v0 - q0)/h ).
CotangentCotangentElement dirac_differential_plus(const DiscreteSetup& setup, const Vec& q0, const Vec& v0,
                                                  const ConfigPair& next_pair);

/// (-)-discrete Dirac differential of L_d at (v1, q1), with `prev_pair` =
/// (v0, q0) supplying the hat-approximation:
///   ( v1, -D1 L_d(v1, q1), -(1/h)(D2 L_d(v0, q0) + D1 L_d(v0, q0)), (q1 - v1)/h ).
/// Signs are taken verbatim from the displayed coordinate formulas of the
/// two differentials; the membership test below validates them against the
/// equations the structures generate.
CotangentCotangentElement dirac_differential_minus(const DiscreteSetup& setup, const Vec& v1, const Vec& q1,
                                                   const ConfigPair& prev_pair);

/// Data for one membership check of (evolution operator, Dirac differential)
/// against the discrete induced Dirac structure.
///
/// Plus scheme:  pair_a = (q_k, v_k), pair_b = (q_{k+1}, v_{k+1}),
///               p_first = p_{k+1}, p_second = p_{k+2};
///               momenta are the (+)-Legendre values D2 L_d of the pairs.
/// Minus scheme: pair_a = (v_k, q_k), pair_b = (v_{k+1}, q_{k+1}),
///               p_first = p_{k-1}, p_second = p_k;
///               momenta are the (-)-Legendre values -D1 L_d of the pairs.
struct MembershipWindow {
    ConfigPair pair_a;
    ConfigPair pair_b;
    Vec p_first;
    Vec p_second;
};

/// Extended-precision window, for certifying long trajectories at the
/// precision the stepper carried them (Trajectory::exact_states).
struct MembershipWindowL {
    VecL a0, a1;  // pair_a
    VecL b0, b1;  // pair_b
    Vec p_first, p_second;
};

struct MembershipResidual {
    double constraint = 0.0;    // discrete constraint residual norm
    double second_order = 0.0;  // |gamma - q_hat|: the velocity slot collapse
    double annihilator = 0.0;   // distance of beta + p_hat from the annihilator

    double max_component() const {
        double m = constraint > second_order ? constraint : second_order;
        return annihilator > m ? annihilator : m;
    }
};

/// Residuals of the three local membership conditions; all near zero iff the
/// window's data lies in the scheme's discrete induced Dirac structure.
MembershipResidual membership_residual(const DiscreteSetup& setup, const MembershipWindow& window);
MembershipResidual membership_residual(const DiscreteSetup& setup, const MembershipWindowL& window);

/// Samples `trials` random pairs of structure elements at `base` (velocities
/// from the kernel of omega, covectors as flat images plus annihilator
/// offsets) and returns max |<alpha, v'> + <alpha', v>| over the sampled
/// pairs under the scheme's discrete pairing. Near zero certifies isotropy.
/// Deterministic for a fixed seed.
double isotropy_samples(const DiscreteSetup& setup, const PhaseState& base, int trials, unsigned rng_seed);

}  // namespace diracint
