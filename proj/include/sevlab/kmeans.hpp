#pragma once

#include <cstdint>
#include <vector>

#include "sevlab/matrix.hpp"

namespace sevlab {

struct KMeansResult {
    std::vector<std::vector<double>> centers;
    std::vector<int> assignment; // per row
    int iterations = 0;
};

// Lloyd's algorithm with kmeans++ seeding. Empty clusters are reseeded to
// the point farthest from its center. Capped at max_iter sweeps.
KMeansResult kmeans(const Matrix& x, int k, std::uint64_t seed, int max_iter = 100);

} // namespace sevlab
