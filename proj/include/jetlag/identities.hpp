#pragma once

#include "jetlag/semispray.hpp"
#include "jetlag/zero.hpp"

#include <random>
#include <string>
#include <vector>

namespace jetlag {

struct IdentityResult {
    std::string name;
    ZeroVerdict verdict;  // weakest evidence over the identity's components
};

/// Deterministic random polynomial of total degree <= 2 with rational
/// coefficients in [-3, 3].
Expr random_polynomial(std::mt19937_64& rng, int n);

/// Random semispray with such polynomials as coefficients.
Semispray random_semispray(std::mt19937_64& rng, int n);

/// Runs every structural identity the geometry of a semispray must satisfy:
/// curvature relations, bracket identities, covariant-derivative rules and
/// the commutation formulae applied to random forms (drawn from rng_seed).
std::vector<IdentityResult> run_identity_suite(const Semispray& s, ZeroTester& tester,
                                               std::uint64_t rng_seed);

bool all_passed(const std::vector<IdentityResult>& results);

}  // namespace jetlag
