#include "rotwalk/regression.hpp"

#include <cmath>

#include "rotwalk/error.hpp"

namespace rotwalk {

LinearFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> w)
{
    const std::size_t n = x.size();
    if (y.size() != n || (!w.empty() && w.size() != n))
        throw DomainError("fit_line: mismatched input lengths");
    if (n < 2)
        throw DomainError("fit_line: need at least two points");

    auto weight = [&](std::size_t i) { return w.empty() ? 1.0 : w[i]; };

    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sw += weight(i);
        sx += weight(i) * x[i];
        sy += weight(i) * y[i];
    }
    const double mx = sx / sw;
    const double my = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sxx += weight(i) * (x[i] - mx) * (x[i] - mx);
        sxy += weight(i) * (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw DomainError("fit_line: no spread in x");

    LinearFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        fit.rss += weight(i) * r * r;
    }
    if (n > 2)
    {
        // Weights rescaled to mean one so the variance estimate is in y units.
        const double scale = static_cast<double>(n) / sw;
        const double s2 = fit.rss * scale / static_cast<double>(n - 2);
        fit.slope_stderr = std::sqrt(s2 / (sxx * scale));
    }
    return fit;
}

}  // namespace rotwalk
