#pragma once

#include "mori/mfs_model.hpp"

#include <random>

namespace mori {

using Rng = std::mt19937_64;

/// Unimodular matrix with small entries, a product of `steps` elementary moves.
IntMatrix random_unimodular(Rng& rng, std::size_t n, int steps = 6);

/// Rewrites a surface in a random basis: gram -> P^T G P, classes -> P^{-1} c.
SurfaceData change_basis(const SurfaceData& s, const IntMatrix& p);

/// A valid surface with lattice rank <= max_rank (odd and even forms,
/// chi = 1 or 2), optionally in a scrambled basis.
SurfaceData random_surface(Rng& rng, std::size_t max_rank, bool scramble = true);

SmoothConicBundle random_smooth_bundle(Rng& rng, std::size_t max_rank, bool scramble = true);
SingularConicBundle random_singular_bundle(Rng& rng, std::size_t max_rank, bool scramble = true);
DelPezzoFibration random_delpezzo(Rng& rng);
FanoRankOne random_fano(Rng& rng);

/// Uniform over the four families.
MfsDescription random_model(Rng& rng, std::size_t max_rank = 6);

} // namespace mori
