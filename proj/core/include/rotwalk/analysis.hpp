#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotwalk/dynamics.hpp"
#include "rotwalk/vec3.hpp"

namespace rotwalk {

//---------------------------------------------------------------------------//
// Reports
//---------------------------------------------------------------------------//

struct BoundRow
{
    double key = 0.0;  //!< k, bin center or radius threshold
    double observed = 0.0;
    double bound = 0.0;
    std::size_t samples = 0;
    bool violated = false;
};

/// Observed values against a theoretical bound.
struct BoundReport
{
    std::string quantity;
    std::vector<BoundRow> rows;
    std::size_t count = 0;       //!< items checked
    std::size_t violations = 0;  //!< items over the bound
    double violation_fraction = 0.0;
    double max_excess = 0.0;  //!< largest observed - bound (negative when all pass)
    double half_width = 0.0;  //!< confidence half-width of the observed values, if statistical
    std::vector<std::string> warnings;

    bool passed() const noexcept { return violations == 0; }

    /// Recomputes violation_fraction from count and violations (0 when count is 0).
    void finalize() noexcept;
};

//---------------------------------------------------------------------------//
// Event iteration
//---------------------------------------------------------------------------//

/// Position at the start of the flight that ended in `ev`.
inline Vec3 flight_start(const CollisionEvent& ev) noexcept
{
    return ev.x - ev.tau * ev.v_before;
}

/// Calls fn(start, event) for each event, taking the start from the previous
/// event's collision point where one exists.
template<class Fn>
void for_each_flight(std::span<const CollisionEvent> events, Fn&& fn)
{
    for (std::size_t i = 0; i < events.size(); ++i)
    {
        const Vec3 start = i == 0 ? flight_start(events[0]) : events[i - 1].x;
        fn(start, events[i]);
    }
}

//---------------------------------------------------------------------------//
// Fluctuation of the velocity around the medium velocity
//---------------------------------------------------------------------------//

/// Upper bound on E|E_k| for scattering mean eta_bar < 1 and noise mean delta_bar.
/// Throws DomainError("no energy loss; bound diverges") when eta_bar >= 1.
double prop1_bound(double eta_bar, double delta_bar, double lambda, double omega,
                   double e0_norm, std::int64_t k);

/// Per-k sums of |E_k| over an ensemble. Merging is associative.
class FluctuationAccumulator
{
  public:
    void add_initial(double e0_norm);
    void add(const CollisionEvent& ev);
    void merge(const FluctuationAccumulator& other);

    std::size_t trajectories() const noexcept { return trajectories_; }
    std::size_t size() const noexcept { return count_.size(); }
    std::size_t count(std::size_t k) const { return count_.at(k); }
    double mean(std::size_t k) const;
    double stderr_of_mean(std::size_t k) const;

  private:
    void grow(std::size_t k);

    std::size_t trajectories_ = 0;
    std::vector<std::size_t> count_;
    std::vector<double> sum_;
    std::vector<double> sum_sq_;
};

/// Ensemble mean |E_k| against prop1_bound for every k.
BoundReport check_fluctuation_bound(const FluctuationAccumulator& acc, const SimConfig& config);

/// Convenience overload over per-trajectory event streams.
BoundReport check_fluctuation_bound(std::span<const std::vector<CollisionEvent>> ensemble,
                                    const SimConfig& config);

/// Eventwise |E_k| <= (|E_{k-1}| + omega xi_k + |Delta_k|)|eta_k| + |Delta_k| + 1e-9.
BoundReport check_prop1_recursion(std::span<const CollisionEvent> events, double omega,
                                  double e0_norm);

//---------------------------------------------------------------------------//
// Deterministic per-event checks
//---------------------------------------------------------------------------//

/// |F(X_k) - F(X_{k+1})| <= omega xi_k + 1e-9, field vectors compared in the lab frame.
BoundReport check_lemma1(std::span<const CollisionEvent> events, double omega);

/// |F(P_rot(X_k, tau_k)) - F(X_{k+1})| <= omega xi_k + 1e-9: the start point is
/// carried along with the medium for the flight duration before comparing.
BoundReport check_lemma1_comoving(std::span<const CollisionEvent> events, double omega);

/// |v_after - w| = |v_before - w| |eta| to `rel_tol` relative to |v_before - w|,
/// with w = u + delta. The outgoing side is read as e_after - delta, after
/// checking that e_after matches v_after - u to rounding.
BoundReport check_collision_norm_identity(std::span<const CollisionEvent> events,
                                          double rel_tol = 1e-12);

/// Re-evaluates the arc length of each flight at tau and compares with xi.
BoundReport check_clock_consistency(std::span<const CollisionEvent> events, double omega,
                                    double tol = 1e-9);

//---------------------------------------------------------------------------//
// Geometric lemmas on single instances
//---------------------------------------------------------------------------//

struct Lemma2Result
{
    double arc = 0.0;
    double radial_gain = 0.0;
    bool passes = false;
};

/// With v = F(x) + e and t* = C / sqrt(d_r(x)): passes iff D(t*) <= omega^2 C^2
/// and d_r(x + t* v) - d_r(x) >= omega^2 C^2 / 6. Throws DomainError on the axis.
Lemma2Result check_lemma2_instance(const Vec3& x, const Vec3& e, double c, double omega);

struct Lemma3Result
{
    double arc = 0.0;
    bool passes = false;
};

/// With t* = 2 max(2, xi) / (omega sqrt(d_r(x))): passes iff D(t*) >= xi.
Lemma3Result check_lemma3_instance(const Vec3& x, const Vec3& e, double xi, double omega);

//---------------------------------------------------------------------------//
// Radial velocity profile
//---------------------------------------------------------------------------//

/*!
 * Binned conditional mean of (d_r(X_{k+1}) - d_r(X_k)) / tau_k given d_r(X_k).
 *
 * Samples whose start radius falls outside the edges are counted in
 * `outside()` and otherwise ignored.
 */
class RadialBinStats
{
  public:
    struct Bin
    {
        std::size_t count = 0;
        double mean = 0.0;
        double m2 = 0.0;  //!< sum of squared deviations
        double mean_tau = 0.0;

        double variance() const noexcept { return count > 1 ? m2 / (count - 1) : 0.0; }
        double stderr_of_mean() const noexcept;
    };

    explicit RadialBinStats(std::vector<double> edges);

    /// `bins` edges spaced geometrically over [lo, hi].
    static RadialBinStats geometric(double lo, double hi, std::size_t bins);

    void add(double start_radius, double drift, double tau);
    void add(const Vec3& start, const CollisionEvent& ev);
    void merge(const RadialBinStats& other);

    const std::vector<double>& edges() const noexcept { return edges_; }
    const std::vector<Bin>& bins() const noexcept { return bins_; }
    double center(std::size_t i) const { return std::sqrt(edges_.at(i) * edges_.at(i + 1)); }
    std::size_t total() const noexcept;
    std::size_t outside() const noexcept { return outside_; }

  private:
    std::vector<double> edges_;
    std::vector<Bin> bins_;
    std::size_t outside_ = 0;
};

RadialBinStats radial_velocity_profile(std::span<const CollisionEvent> events,
                                       std::vector<double> edges);

struct PowerLawFit
{
    double exponent = 0.0;
    double amplitude = 0.0;
    double stderr = 0.0;
    std::size_t bins_used = 0;
};

/*!
 * Count-weighted least squares of log(mean drift) on log(bin center).
 *
 * Only populated bins with positive mean and center inside [lo, hi] are used.
 * Throws DomainError when fewer than 5 bins remain or their outer edges span
 * less than two decades.
 */
PowerLawFit fit_power_law(const RadialBinStats& stats, double lo = 0.0,
                          double hi = std::numeric_limits<double>::infinity());

//---------------------------------------------------------------------------//
// Collision-time bracket
//---------------------------------------------------------------------------//

/// Lower and upper bound on the flight time from radius d_r with path length xi.
struct TimeBracket
{
    double lower = 0.0;
    double upper = 0.0;
};

TimeBracket collision_time_bracket(double radius, double xi, double omega) noexcept;

/// Fraction of flights outside the bracket among those starting beyond each threshold.
class TimeBracketAccumulator
{
  public:
    TimeBracketAccumulator(double omega, std::vector<double> thresholds);

    void add(const Vec3& start, const CollisionEvent& ev);
    void merge(const TimeBracketAccumulator& other);

    /// One row per threshold: observed = violation fraction, samples = flights counted.
    BoundReport report() const;

    std::size_t below_lower(std::size_t i) const { return below_.at(i); }
    std::size_t above_upper(std::size_t i) const { return above_.at(i); }

  private:
    double omega_;
    std::vector<double> thresholds_;
    std::vector<std::size_t> count_;
    std::vector<std::size_t> below_;
    std::vector<std::size_t> above_;
};

BoundReport check_collision_time_bounds(std::span<const CollisionEvent> events, double omega,
                                        std::vector<double> thresholds);

//---------------------------------------------------------------------------//
// Growth and alignment
//---------------------------------------------------------------------------//

struct GrowthEstimate
{
    double beta_hat = 0.0;   //!< min of d_r(X_n) / n over the last half
    double alpha_hat = 0.0;  //!< max of the same
};

/// `radii[n - 1]` is d_r(X_n). Throws DomainError with fewer than `min_events` entries.
GrowthEstimate growth_rate(std::span<const double> radii, std::size_t min_events = 10000);
GrowthEstimate growth_rate(std::span<const CollisionEvent> events, std::size_t min_events = 10000);

/// Median of |E_k| / |F(X_k)| over k in (N/10, N].
double alignment_median(std::span<const double> ratios);
double alignment_median(std::span<const CollisionEvent> events);

//---------------------------------------------------------------------------//
// Comparison variable of the biased-walk coupling
//---------------------------------------------------------------------------//

/// C = sqrt(1 / (7 lambda omega^2)) and p = (7 - 6 e^{1/7}) / 14.
struct CramerConstants
{
    double c = 0.0;
    double p = 0.0;
};

CramerConstants cramer_constants(double lambda, double omega);

/// E[Y] in closed form.
double cramer_mean_Y(double p, double c, double lambda, double omega);

/// E[exp(theta Y)] for theta > -lambda; throws DomainError otherwise.
double cramer_mgf_Y(double theta, double p, double c, double lambda, double omega);

}  // namespace rotwalk
