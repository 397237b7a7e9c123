#pragma once

#include "logfol/foliation.hpp"

#include <cstdint>

namespace logfol {

/// Six seeded general-position planes in P^3 with a generic admissible
/// residue tensor sampled from the radial kernel (all 15 entries nonzero).
LogFoliationSpec p3_planes_spec(std::uint64_t seed);

/// r = p + 1 fibration datum: three seeded generic poles of degrees
/// (1, 2, 3) on P^3 with the unique projective tensor.
LogFoliationSpec rational_fibration_spec(std::uint64_t seed);

/// Seeded pole system of r linear forms on P^n in general position.
PoleSystem seeded_linear_poles(int n, int r, std::uint64_t seed);

/// The Claim-3.1 perturbation datum on P^n (r = n linear poles, degrees all
/// one): tensor is the wedge of the perturbed covector family at tau.
LogFoliationSpec perturbation_spec(int n, const std::vector<std::vector<Rational>>& tau,
                                   std::uint64_t seed);

/// Seeded generic projective spec: r poles of the given degrees on P^n and
/// a random tensor drawn from the radial kernel (retries until every
/// kernel-combination entry is nonzero where possible).
LogFoliationSpec seeded_projective_spec(int n, int p, const std::vector<int>& degrees,
                                        std::uint64_t seed);

}  // namespace logfol
