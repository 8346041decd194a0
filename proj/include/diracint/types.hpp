#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace diracint {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Extended-precision column vector used internally by the stepper so that
/// long trajectories do not lose the small differences q_{k+1} - q_k to
/// cancellation at large |q|.
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// Selects the forward (+) or backward (-) branch of the discrete theory.
enum class Scheme { Plus, Minus };

inline const char* scheme_name(Scheme s) { return s == Scheme::Plus ? "plus" : "minus"; }

/// Cotangent point (q, p) in chart coordinates.
struct PhaseState {
    Vec q;
    Vec p;
};

/// Pontryagin point (q, v, p); v is an independent velocity slot until the
/// equations collapse it onto a neighbour configuration.
struct PontryaginState {
    Vec q;
    Vec v;
    Vec p;
};

/// A pair of configurations (q0, q1) in Q x Q.
struct ConfigPair {
    Vec q0;
    Vec q1;
};

/// Base point plus velocity, the image of a finite difference map in TQ.
struct TangentVector {
    Vec base;
    Vec velocity;
};

/// Per-step structure-preservation measurements.
struct DiagRecord {
    double energy_plus = 0.0;
    double energy_minus = 0.0;
    double constraint_norm = 0.0;
    double dirac_residual = 0.0;
    bool dirac_residual_valid = false;
};

struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a constraint matrix loses row rank at a queried point.
struct RankDeficientConstraint : std::runtime_error {
    explicit RankDeficientConstraint(const std::string& what) : std::runtime_error(what) {}
};

inline void require_same_dim(const Vec& a, const Vec& b, const char* where) {
    if (a.size() != b.size())
        throw DimensionError(std::string(where) + ": dimension mismatch (" +
                             std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

inline VecL to_long(const Vec& v) { return v.cast<long double>(); }
inline Vec to_double(const VecL& v) { return v.cast<double>(); }

}  // namespace diracint
