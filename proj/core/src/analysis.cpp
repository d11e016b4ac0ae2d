#include "rotwalk/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "rotwalk/arclength.hpp"
#include "rotwalk/error.hpp"
#include "rotwalk/geometry.hpp"
#include "rotwalk/regression.hpp"
#include "rotwalk/sampling.hpp"

namespace rotwalk {
namespace {

constexpr double lemma_slack = 1e-9;
constexpr std::size_t max_recorded_rows = 100;

// Tallies one per-event comparison into a report, keeping the first few
// violations as rows.
void tally(BoundReport& report, double key, double observed, double bound)
{
    ++report.count;
    const double excess = observed - bound;
    if (report.count == 1 || excess > report.max_excess)
        report.max_excess = excess;
    if (excess > 0.0)
    {
        ++report.violations;
        if (report.rows.size() < max_recorded_rows)
            report.rows.push_back({key, observed, bound, 1, true});
    }
}

double median_of(std::vector<double> values)
{
    if (values.empty())
        throw DomainError("median of empty range");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lower + upper);
}

}  // namespace

void BoundReport::finalize() noexcept
{
    violation_fraction = count == 0 ? 0.0
                                    : static_cast<double>(violations) / static_cast<double>(count);
}

//---------------------------------------------------------------------------//
// Fluctuations
//---------------------------------------------------------------------------//

double prop1_bound(double eta_bar, double delta_bar, double lambda, double omega, double e0_norm,
                   std::int64_t k)
{
    if (!(eta_bar < 1.0))
        throw DomainError("no energy loss; bound diverges");
    const double stationary = (delta_bar * lambda + omega * eta_bar) / (lambda * (1.0 - eta_bar));
    return stationary + e0_norm * std::pow(eta_bar, static_cast<double>(k));
}

void FluctuationAccumulator::grow(std::size_t k)
{
    if (k >= count_.size())
    {
        count_.resize(k + 1, 0);
        sum_.resize(k + 1, 0.0);
        sum_sq_.resize(k + 1, 0.0);
    }
}

void FluctuationAccumulator::add_initial(double e0_norm)
{
    grow(0);
    ++trajectories_;
    ++count_[0];
    sum_[0] += e0_norm;
    sum_sq_[0] += e0_norm * e0_norm;
}

void FluctuationAccumulator::add(const CollisionEvent& ev)
{
    const auto k = static_cast<std::size_t>(ev.k);
    grow(k);
    const double e = norm(ev.e_after);
    ++count_[k];
    sum_[k] += e;
    sum_sq_[k] += e * e;
}

void FluctuationAccumulator::merge(const FluctuationAccumulator& other)
{
    if (other.count_.empty())
        return;
    grow(other.count_.size() - 1);
    trajectories_ += other.trajectories_;
    for (std::size_t k = 0; k < other.count_.size(); ++k)
    {
        count_[k] += other.count_[k];
        sum_[k] += other.sum_[k];
        sum_sq_[k] += other.sum_sq_[k];
    }
}

double FluctuationAccumulator::mean(std::size_t k) const
{
    const auto n = static_cast<double>(count_.at(k));
    return n > 0 ? sum_[k] / n : 0.0;
}

double FluctuationAccumulator::stderr_of_mean(std::size_t k) const
{
    const auto n = static_cast<double>(count_.at(k));
    if (n < 2)
        return 0.0;
    const double m = sum_[k] / n;
    const double var = std::max(0.0, (sum_sq_[k] - n * m * m) / (n - 1));
    return std::sqrt(var / n);
}

BoundReport check_fluctuation_bound(const FluctuationAccumulator& acc, const SimConfig& config)
{
    if (acc.trajectories() == 0)
        throw DomainError("empty ensemble");

    const double eta_bar = config.eta.mean_norm();
    const double delta_bar = NoiseLaw{config.sigma}.mean_norm();
    const double e0 = norm(config.v0 - field_at(config.omega, config.x0));

    BoundReport report;
    report.quantity = "mean |E_k|";
    if (acc.trajectories() < 100)
        report.warnings.push_back("low ensemble count");

    for (std::size_t k = 0; k < acc.size(); ++k)
    {
        if (acc.count(k) == 0)
            continue;
        const double observed = acc.mean(k);
        const double bound = prop1_bound(eta_bar, delta_bar, config.lambda, config.omega, e0,
                                         static_cast<std::int64_t>(k));
        const bool violated = observed > bound;
        report.rows.push_back({static_cast<double>(k), observed, bound, acc.count(k), violated});
        ++report.count;
        if (violated)
            ++report.violations;
        const double excess = observed - bound;
        if (report.count == 1 || excess > report.max_excess)
            report.max_excess = excess;
        report.half_width = std::max(report.half_width, 3.0 * acc.stderr_of_mean(k));
    }
    report.finalize();
    return report;
}

BoundReport check_fluctuation_bound(std::span<const std::vector<CollisionEvent>> ensemble,
                                    const SimConfig& config)
{
    FluctuationAccumulator acc;
    const double e0 = norm(config.v0 - field_at(config.omega, config.x0));
    for (const auto& events : ensemble)
    {
        acc.add_initial(e0);
        for (const auto& ev : events)
            acc.add(ev);
    }
    return check_fluctuation_bound(acc, config);
}

BoundReport check_prop1_recursion(std::span<const CollisionEvent> events, double omega,
                                  double e0_norm)
{
    BoundReport report;
    report.quantity = "|E_k| recursion";
    double previous = e0_norm;
    for (const auto& ev : events)
    {
        const double noise = norm(ev.delta);
        const double bound = (previous + omega * ev.xi + noise) * norm(ev.eta) + noise + lemma_slack;
        const double observed = norm(ev.e_after);
        tally(report, static_cast<double>(ev.k), observed, bound);
        previous = observed;
    }
    report.finalize();
    return report;
}

//---------------------------------------------------------------------------//
// Deterministic per-event checks
//---------------------------------------------------------------------------//

BoundReport check_lemma1(std::span<const CollisionEvent> events, double omega)
{
    BoundReport report;
    report.quantity = "|F(X_k) - F(X_k+1)|";
    for_each_flight(events, [&](const Vec3& start, const CollisionEvent& ev) {
        const double observed = norm(field_at(omega, start) - field_at(omega, ev.x));
        tally(report, static_cast<double>(ev.k), observed, omega * ev.xi + lemma_slack);
    });
    report.finalize();
    return report;
}

BoundReport check_lemma1_comoving(std::span<const CollisionEvent> events, double omega)
{
    BoundReport report;
    report.quantity = "|F(P_rot(X_k, tau_k)) - F(X_k+1)|";
    for_each_flight(events, [&](const Vec3& start, const CollisionEvent& ev) {
        const Vec3 carried = rotate_point(omega, start, ev.tau);
        const double observed = norm(field_at(omega, carried) - field_at(omega, ev.x));
        tally(report, static_cast<double>(ev.k), observed, omega * ev.xi + lemma_slack);
    });
    report.finalize();
    return report;
}

BoundReport check_collision_norm_identity(std::span<const CollisionEvent> events, double rel_tol)
{
    BoundReport report;
    report.quantity = "| |v_after - w| - |v_before - w| |eta| |";
    for (const auto& ev : events)
    {
        const Vec3 w = ev.u + ev.delta;
        const double before = norm(ev.v_before - w);
        const double expected = before * norm(ev.eta);
        // The record must agree with itself to rounding first.
        const double drift = norm((ev.v_after - ev.u) - ev.e_after);
        const double drift_tol = 1e-14 * (norm(ev.u) + norm(ev.v_after) + 1.0);
        if (drift > drift_tol)
        {
            tally(report, static_cast<double>(ev.k), drift, drift_tol);
            continue;
        }
        // v_after - w = e_after - delta, which avoids cancelling against u.
        const double observed = std::abs(norm(ev.e_after - ev.delta) - expected);
        // Relative to the incoming relative speed, the quantity being scaled.
        tally(report, static_cast<double>(ev.k), observed, rel_tol * before);
    }
    report.finalize();
    return report;
}

BoundReport check_clock_consistency(std::span<const CollisionEvent> events, double omega, double tol)
{
    BoundReport report;
    report.quantity = "|D(tau_k) - xi_k|";
    for_each_flight(events, [&](const Vec3& start, const CollisionEvent& ev) {
        const auto problem = ArcLengthProblem::from_state(omega, start, ev.v_before);
        const double observed = std::abs(arc_length(problem, ev.tau) - ev.xi);
        tally(report, static_cast<double>(ev.k), observed, tol * (1.0 + ev.xi));
    });
    report.finalize();
    return report;
}

//---------------------------------------------------------------------------//
// Lemmas
//---------------------------------------------------------------------------//

Lemma2Result check_lemma2_instance(const Vec3& x, const Vec3& e, double c, double omega)
{
    const double dr = radial_distance(x);
    if (!(dr > 0.0))
        throw DomainError("radial frame undefined on axis");
    const Vec3 v = field_at(omega, x) + e;
    const double t = c / std::sqrt(dr);
    const double scale = omega * omega * c * c;

    Lemma2Result r;
    r.arc = arc_length(ArcLengthProblem::from_state(omega, x, v), t);
    r.radial_gain = radial_distance(x + t * v) - dr;
    r.passes = r.arc <= scale && r.radial_gain >= scale / 6.0;
    return r;
}

Lemma3Result check_lemma3_instance(const Vec3& x, const Vec3& e, double xi, double omega)
{
    const double dr = radial_distance(x);
    if (!(dr > 0.0))
        throw DomainError("radial frame undefined on axis");
    const Vec3 v = field_at(omega, x) + e;
    const double t = 2.0 * std::max(2.0, xi) / (omega * std::sqrt(dr));

    Lemma3Result r;
    r.arc = arc_length(ArcLengthProblem::from_state(omega, x, v), t);
    r.passes = r.arc >= xi;
    return r;
}

//---------------------------------------------------------------------------//
// Radial profile
//---------------------------------------------------------------------------//

double RadialBinStats::Bin::stderr_of_mean() const noexcept
{
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

RadialBinStats::RadialBinStats(std::vector<double> edges) : edges_(std::move(edges))
{
    if (edges_.size() < 2)
        throw DomainError("radial profile needs at least two edges");
    if (!std::is_sorted(edges_.begin(), edges_.end())
        || std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw DomainError("radial profile edges must be strictly increasing");
    bins_.resize(edges_.size() - 1);
}

RadialBinStats RadialBinStats::geometric(double lo, double hi, std::size_t bins)
{
    if (!(lo > 0.0 && hi > lo) || bins == 0)
        throw DomainError("geometric bins need 0 < lo < hi and at least one bin");
    std::vector<double> edges(bins + 1);
    const double ratio = std::log(hi / lo);
    for (std::size_t i = 0; i <= bins; ++i)
        edges[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(bins));
    edges.front() = lo;
    edges.back() = hi;
    return RadialBinStats(std::move(edges));
}

void RadialBinStats::add(double start_radius, double drift, double tau)
{
    if (start_radius < edges_.front() || start_radius >= edges_.back())
    {
        ++outside_;
        return;
    }
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), start_radius);
    Bin& bin = bins_[static_cast<std::size_t>(it - edges_.begin()) - 1];
    ++bin.count;
    const auto n = static_cast<double>(bin.count);
    const double delta = drift - bin.mean;
    bin.mean += delta / n;
    bin.m2 += delta * (drift - bin.mean);
    bin.mean_tau += (tau - bin.mean_tau) / n;
}

void RadialBinStats::add(const Vec3& start, const CollisionEvent& ev)
{
    const double r0 = radial_distance(start);
    add(r0, (radial_distance(ev.x) - r0) / ev.tau, ev.tau);
}

void RadialBinStats::merge(const RadialBinStats& other)
{
    if (other.edges_ != edges_)
        throw DomainError("cannot merge radial profiles with different edges");
    outside_ += other.outside_;
    for (std::size_t i = 0; i < bins_.size(); ++i)
    {
        Bin& a = bins_[i];
        const Bin& b = other.bins_[i];
        if (b.count == 0)
            continue;
        if (a.count == 0)
        {
            a = b;
            continue;
        }
        const auto na = static_cast<double>(a.count);
        const auto nb = static_cast<double>(b.count);
        const double n = na + nb;
        const double delta = b.mean - a.mean;
        a.mean += delta * nb / n;
        a.m2 += b.m2 + delta * delta * na * nb / n;
        a.mean_tau += (b.mean_tau - a.mean_tau) * nb / n;
        a.count += b.count;
    }
}

std::size_t RadialBinStats::total() const noexcept
{
    std::size_t n = 0;
    for (const auto& b : bins_)
        n += b.count;
    return n;
}

RadialBinStats radial_velocity_profile(std::span<const CollisionEvent> events,
                                       std::vector<double> edges)
{
    RadialBinStats stats(std::move(edges));
    for_each_flight(events, [&](const Vec3& start, const CollisionEvent& ev) { stats.add(start, ev); });
    return stats;
}

PowerLawFit fit_power_law(const RadialBinStats& stats, double lo, double hi)
{
    std::vector<double> x, y, w;
    double lo_edge = 0.0, hi_edge = 0.0;
    const auto& bins = stats.bins();
    for (std::size_t i = 0; i < bins.size(); ++i)
    {
        const double center = stats.center(i);
        if (bins[i].count == 0 || !(bins[i].mean > 0.0) || center < lo || center > hi)
            continue;
        if (x.empty())
            lo_edge = stats.edges()[i];
        hi_edge = stats.edges()[i + 1];
        x.push_back(std::log(center));
        y.push_back(std::log(bins[i].mean));
        w.push_back(static_cast<double>(bins[i].count));
    }
    if (x.size() < 5)
        throw DomainError("power-law fit needs at least 5 populated bins");
    if (hi_edge / lo_edge < 100.0 * (1.0 - 1e-9))
        throw DomainError("power-law fit needs bins spanning at least 2 decades");

    const LinearFit fit = fit_line(x, y, w);
    return {fit.slope, std::exp(fit.intercept), fit.slope_stderr, x.size()};
}

//---------------------------------------------------------------------------//
// Collision-time bracket
//---------------------------------------------------------------------------//

TimeBracket collision_time_bracket(double radius, double xi, double omega) noexcept
{
    const double root = std::sqrt(radius);
    return {std::sqrt(xi) / (omega * root), 2.0 * std::max(xi, 2.0) / (omega * root)};
}

TimeBracketAccumulator::TimeBracketAccumulator(double omega, std::vector<double> thresholds)
    : omega_(omega),
      thresholds_(std::move(thresholds)),
      count_(thresholds_.size(), 0),
      below_(thresholds_.size(), 0),
      above_(thresholds_.size(), 0)
{}

void TimeBracketAccumulator::add(const Vec3& start, const CollisionEvent& ev)
{
    const double r = radial_distance(start);
    const TimeBracket bracket = collision_time_bracket(r, ev.xi, omega_);
    const bool low = !(ev.tau > bracket.lower);
    const bool high = !(ev.tau < bracket.upper);
    for (std::size_t i = 0; i < thresholds_.size(); ++i)
    {
        if (!(r > thresholds_[i]))
            continue;
        ++count_[i];
        below_[i] += low ? 1 : 0;
        above_[i] += high ? 1 : 0;
    }
}

void TimeBracketAccumulator::merge(const TimeBracketAccumulator& other)
{
    if (other.thresholds_ != thresholds_)
        throw DomainError("cannot merge time brackets with different thresholds");
    for (std::size_t i = 0; i < thresholds_.size(); ++i)
    {
        count_[i] += other.count_[i];
        below_[i] += other.below_[i];
        above_[i] += other.above_[i];
    }
}

BoundReport TimeBracketAccumulator::report() const
{
    BoundReport report;
    report.quantity = "tau outside collision-time bracket";
    for (std::size_t i = 0; i < thresholds_.size(); ++i)
    {
        const std::size_t bad = below_[i] + above_[i];
        const double fraction =
            count_[i] == 0 ? 0.0 : static_cast<double>(bad) / static_cast<double>(count_[i]);
        report.rows.push_back({thresholds_[i], fraction, 0.0, count_[i], bad > 0});
    }
    if (!thresholds_.empty())
    {
        // Headline numbers are those of the largest threshold.
        const auto last = static_cast<std::size_t>(
            std::max_element(thresholds_.begin(), thresholds_.end()) - thresholds_.begin());
        report.count = count_[last];
        report.violations = below_[last] + above_[last];
    }
    report.finalize();
    report.max_excess = report.violation_fraction;
    return report;
}

BoundReport check_collision_time_bounds(std::span<const CollisionEvent> events, double omega,
                                        std::vector<double> thresholds)
{
    TimeBracketAccumulator acc(omega, std::move(thresholds));
    for_each_flight(events, [&](const Vec3& start, const CollisionEvent& ev) { acc.add(start, ev); });
    return acc.report();
}

//---------------------------------------------------------------------------//
// Growth and alignment
//---------------------------------------------------------------------------//

GrowthEstimate growth_rate(std::span<const double> radii, std::size_t min_events)
{
    if (radii.size() < min_events || radii.empty())
        throw DomainError("growth rate needs at least " + std::to_string(min_events) + " events");
    const std::size_t n = radii.size();
    GrowthEstimate g;
    bool first = true;
    for (std::size_t i = n - n / 2; i <= n; ++i)
    {
        if (i == 0)
            continue;
        const double ratio = radii[i - 1] / static_cast<double>(i);
        if (first)
        {
            g.beta_hat = g.alpha_hat = ratio;
            first = false;
        }
        g.beta_hat = std::min(g.beta_hat, ratio);
        g.alpha_hat = std::max(g.alpha_hat, ratio);
    }
    return g;
}

GrowthEstimate growth_rate(std::span<const CollisionEvent> events, std::size_t min_events)
{
    std::vector<double> radii;
    radii.reserve(events.size());
    for (const auto& ev : events)
        radii.push_back(radial_distance(ev.x));
    return growth_rate(radii, min_events);
}

double alignment_median(std::span<const double> ratios)
{
    const std::size_t n = ratios.size();
    const std::size_t first = n / 10;
    return median_of({ratios.begin() + static_cast<std::ptrdiff_t>(first), ratios.end()});
}

double alignment_median(std::span<const CollisionEvent> events)
{
    std::vector<double> ratios;
    ratios.reserve(events.size());
    for (const auto& ev : events)
        ratios.push_back(norm(ev.e_after) / norm(ev.u));
    return alignment_median(ratios);
}

//---------------------------------------------------------------------------//
// Comparison variable
//---------------------------------------------------------------------------//

CramerConstants cramer_constants(double lambda, double omega)
{
    return {std::sqrt(1.0 / (7.0 * lambda * omega * omega)),
            (7.0 - 6.0 * std::exp(1.0 / 7.0)) / 14.0};
}

double cramer_mean_Y(double p, double c, double lambda, double omega)
{
    const double s = lambda * omega * omega * c * c;
    return (-6.0 + std::exp(-s) * (1.0 - p) * (6.0 + 7.0 * s)) / (6.0 * lambda);
}

double cramer_mgf_Y(double theta, double p, double c, double lambda, double omega)
{
    if (!(theta > -lambda))
        throw DomainError("mgf argument must exceed -lambda");
    const double c2 = omega * omega * c * c;
    const double ratio = lambda / (theta + lambda);
    return (1.0 - p) * (std::exp(c2 * (theta / 6.0 - lambda)) - ratio * std::exp(-c2 * (theta + lambda)))
           + ratio;
}

}  // namespace rotwalk
