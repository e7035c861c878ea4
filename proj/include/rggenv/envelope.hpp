#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "rggenv/dpp.hpp"
#include "rggenv/geometry.hpp"
#include "rggenv/linalg.hpp"

namespace rggenv {

/// C^2 test function with analytic derivatives and the two constants the
/// consistency bound consumes.
struct SmoothTestFunction {
    std::function<double(std::span<const double>)> value;
    std::function<Point(std::span<const double>)> gradient;
    std::function<SymMatrix(std::span<const double>)> hessian;
    double hessian_bound = 0.0;    // C_phi: sup |D^2 phi| (spectral) on the unit cube
    double lipschitz_bound = 0.0;  // C'_phi: sup |grad phi| on the unit cube
};

/// phi(x) = 1/2 <A x, x> + <b, x> + c0.
SmoothTestFunction quadratic_test_function(SymMatrix a, Point b, double c0 = 0.0);

/// phi(x) = 1/2 |x|^2.
SmoothTestFunction half_squared_norm(int dim);

enum class EnvelopeKind { constant, affine, saddle };

/// Boundary datum with a known convex envelope.
///   constant: f = c
///   affine:   f = <a, x> + b
///   saddle:   f = (x1 - c1)^2 - (x2 - c2)^2 on a disc B(c, R); envelope 2 (x1 - c1)^2 - R^2
struct EnvelopeCase {
    EnvelopeKind kind = EnvelopeKind::constant;
    DomainSpec domain;
    double constant = 0.0;
    Point slope;
    double offset = 0.0;

    static EnvelopeCase make_constant(DomainSpec domain, double c);
    static EnvelopeCase make_affine(DomainSpec domain, Point a, double b);
    static EnvelopeCase make_saddle(DomainSpec domain);

    std::string id() const;
    double datum_value(std::span<const double> x) const;
    BoundaryDatum datum() const;

    /// Oscillation of the datum over the boundary of D.
    double boundary_oscillation() const;

    /// sup |grad f| over the r-neighborhood of D.
    double lipschitz_bound(double r) const;
};

const char* to_string(EnvelopeKind kind);

/// Closed-form envelope. Throws out_of_domain outside the closure of D.
double analytic_envelope(const EnvelopeCase& c, std::span<const double> x);

/// Independent ground truth for d = 2: the infimum over sampled convex
/// combinations of boundary values that average to x (triples, plus the chord
/// through x from each sampled point). Sample i uses only (oracle_seed, i),
/// so the result is a running minimum and never increases with m_samples.
double brute_envelope_oracle(const DomainSpec& domain,
                             const std::function<double(std::span<const double>)>& f_boundary,
                             std::span<const double> x, std::size_t m_samples,
                             std::uint64_t oracle_seed);

}  // namespace rggenv
