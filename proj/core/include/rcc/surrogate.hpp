#pragma once

#include <cstddef>
#include <cstdint>

#include "rcc/curve.hpp"
#include "rcc/ingest.hpp"

namespace rcc {

/// Stand-in for the measured response database when it is not installed:
/// one linear curve plus seeded draws from gamma, log, generalised-gamma,
/// film S-curve and saturating-exponential families, each forced monotone
/// with endpoints 0 and 1.
DorfDatabase surrogate_dorf(std::uint64_t seed = 7, std::size_t count = kCanonicalDorfCurveCount,
                            std::size_t samples = kDefaultCurveSamples);

/// Principal-component basis of a database's forward or inverse curves.
/// Eigenvectors have unit L2 norm and are ordered by decreasing variance;
/// each is signed so its largest-magnitude entry is positive.
EmorBasis pca_basis(const DorfDatabase& db, EmorKind kind, std::size_t k = 11);

}  // namespace rcc
