#pragma once

#include <cstddef>
#include <span>

namespace rotwalk {

struct LinearFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double rss = 0.0;  //!< weighted residual sum of squares
    std::size_t n = 0;
};

/// Weighted least squares y = intercept + slope * x. Empty `w` means unit weights.
/// Throws DomainError with fewer than two points or no spread in x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> w = {});

}  // namespace rotwalk
