#include "rotwalk/cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "CLI11.hpp"
#include "rotwalk/analysis.hpp"
#include "rotwalk/cli/config.hpp"
#include "rotwalk/cli/ensemble.hpp"
#include "rotwalk/cli/event_io.hpp"
#include "rotwalk/cli/manifest.hpp"
#include "rotwalk/cli/workers.hpp"
#include "rotwalk/error.hpp"
#include "rotwalk/geometry.hpp"
#include "rotwalk/langevin.hpp"

namespace rotwalk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunConfig load(const CommonOptions& opt)
{
    json doc = opt.config_path.empty() ? default_config() : load_config(opt.config_path);
    for (const auto& s : opt.sets)
        apply_override(doc, s);
    if (opt.seed)
        doc["seed"] = parse_seed(*opt.seed);
    return resolve(doc);
}

int guarded(std::ostream& err, const std::function<int()>& body)
{
    try
    {
        return body();
    }
    catch (const ConfigError& e)
    {
        err << "config error [" << e.key() << "]: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

void prepare_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
}

/// Accumulates lines of a CSV file and writes it in one go.
class CsvFile
{
  public:
    CsvFile(fs::path path, std::string_view header) : path_(std::move(path))
    {
        text_.append(header);
        text_.push_back('\n');
    }

    CsvFile& num(double d)
    {
        sep();
        append_double(text_, d);
        return *this;
    }

    CsvFile& integer(long long v)
    {
        sep();
        text_ += std::to_string(v);
        return *this;
    }

    CsvFile& text(std::string_view s)
    {
        sep();
        text_.append(s);
        return *this;
    }

    CsvFile& blank()
    {
        sep();
        return *this;
    }

    void end_row()
    {
        text_.push_back('\n');
        fresh_ = true;
    }

    void write() const
    {
        std::ofstream out(path_, std::ios::binary);
        out.write(text_.data(), static_cast<std::streamsize>(text_.size()));
        if (!out)
            throw Error("cannot write " + path_.string());
    }

  private:
    void sep()
    {
        if (!fresh_)
            text_.push_back(',');
        fresh_ = false;
    }

    fs::path path_;
    std::string text_;
    bool fresh_ = true;
};

void write_json(const fs::path& path, const json& doc)
{
    std::ofstream out(path);
    out << doc.dump(2) << '\n';
    if (!out)
        throw Error("cannot write " + path.string());
}

json report_json(const BoundReport& r)
{
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"key", row.key},
                        {"observed", row.observed},
                        {"bound", row.bound},
                        {"samples", row.samples},
                        {"violated", row.violated}});
    return {{"quantity", r.quantity},
            {"passed", r.passed()},
            {"count", r.count},
            {"violations", r.violations},
            {"violation_fraction", r.violation_fraction},
            {"max_excess", r.max_excess},
            {"half_width", r.half_width},
            {"warnings", r.warnings},
            {"rows", rows}};
}

json fit_json(const std::optional<PowerLawFit>& fit)
{
    if (!fit)
        return nullptr;
    return {{"exponent", fit->exponent},
            {"amplitude", fit->amplitude},
            {"stderr", fit->stderr},
            {"bins_used", fit->bins_used}};
}

void write_fluctuation_csv(const fs::path& path, const FluctuationAccumulator& acc,
                           const BoundReport& report)
{
    CsvFile csv(path, "k,count,mean,stderr,bound");
    for (const auto& row : report.rows)
    {
        const auto k = static_cast<std::size_t>(row.key);
        csv.integer(static_cast<long long>(k)).integer(static_cast<long long>(row.samples));
        csv.num(row.observed).num(acc.stderr_of_mean(k)).num(row.bound);
        csv.end_row();
    }
    csv.write();
}

void write_profile_csv(const fs::path& path, const RadialBinStats& stats,
                       const std::optional<PowerLawFit>& fit, const AnalysisSettings& s)
{
    CsvFile csv(path, "lo,hi,center,count,mean,stderr,mean_tau,fit");
    for (std::size_t i = 0; i < stats.bins().size(); ++i)
    {
        const auto& b = stats.bins()[i];
        const double center = stats.center(i);
        csv.num(stats.edges()[i]).num(stats.edges()[i + 1]).num(center);
        csv.integer(static_cast<long long>(b.count)).num(b.mean).num(b.stderr_of_mean()).num(b.mean_tau);
        if (fit && center >= s.fit_lo && center <= s.fit_hi)
            csv.num(fit->amplitude * std::pow(center, fit->exponent));
        else
            csv.blank();
        csv.end_row();
    }
    csv.write();
}

void write_bracket_csv(const fs::path& path, const TimeBracketAccumulator& acc)
{
    const BoundReport r = acc.report();
    CsvFile csv(path, "threshold,samples,below,above,fraction");
    for (std::size_t i = 0; i < r.rows.size(); ++i)
    {
        csv.num(r.rows[i].key).integer(static_cast<long long>(r.rows[i].samples));
        csv.integer(static_cast<long long>(acc.below_lower(i)));
        csv.integer(static_cast<long long>(acc.above_upper(i)));
        csv.num(r.rows[i].observed);
        csv.end_row();
    }
    csv.write();
}

double median(std::vector<double> v)
{
    if (v.empty())
        return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

json write_aggregate(const fs::path& dir, const EnsembleAggregate& agg, const RunConfig& rc,
                     Manifest& manifest)
{
    const BoundReport fluct = check_fluctuation_bound(agg.fluctuation, rc.sim);
    write_fluctuation_csv(dir / "fluctuation.csv", agg.fluctuation, fluct);
    manifest.add_output("fluctuation.csv");

    const auto fit = fit_profile(agg.profile, rc.analysis);
    write_profile_csv(dir / "profile.csv", agg.profile, fit, rc.analysis);
    manifest.add_output("profile.csv");

    write_bracket_csv(dir / "time_bracket.csv", agg.bracket);
    manifest.add_output("time_bracket.csv");

    CsvFile traj(dir / "trajectories.csv",
                 "index,events,final_time,final_radius,stop_reason,beta_hat,alpha_hat,alignment_median");
    std::vector<double> alignments;
    std::optional<double> min_beta;
    std::size_t with_growth = 0;
    std::map<std::string, std::size_t> reasons;
    for (std::size_t i = 0; i < agg.trajectories.size(); ++i)
    {
        const auto& t = agg.trajectories[i];
        traj.integer(static_cast<long long>(i)).integer(t.events).num(t.final_time).num(t.final_radius);
        traj.text(to_string(t.reason));
        if (t.growth)
        {
            traj.num(t.growth->beta_hat).num(t.growth->alpha_hat);
            ++with_growth;
            min_beta = min_beta ? std::min(*min_beta, t.growth->beta_hat) : t.growth->beta_hat;
        }
        else
            traj.blank().blank();
        if (t.alignment)
        {
            traj.num(*t.alignment);
            alignments.push_back(*t.alignment);
        }
        else
            traj.blank();
        traj.end_row();
        ++reasons[to_string(t.reason)];
    }
    traj.write();
    manifest.add_output("trajectories.csv");

    const double eta_bar = rc.sim.eta.mean_norm();
    json summary = {
        {"trajectories", agg.trajectories.size()},
        {"stop_reasons", reasons},
        {"fluctuation",
         {{"passed", fluct.passed()},
          {"checked", fluct.count},
          {"violations", fluct.violations},
          {"max_excess", fluct.max_excess},
          {"warnings", fluct.warnings},
          {"bound_limit",
           eta_bar < 1.0 ? json(prop1_bound(eta_bar, NoiseLaw{rc.sim.sigma}.mean_norm(),
                                            rc.sim.lambda, rc.sim.omega, 0.0, 0))
                         : json(nullptr)}}},
        {"profile_fit", fit_json(fit)},
        {"time_bracket", report_json(agg.bracket.report())},
        {"growth",
         {{"trajectories_measured", with_growth},
          {"min_beta_hat", min_beta ? json(*min_beta) : json(nullptr)},
          {"all_beta_positive", with_growth > 0 && *min_beta > 0.0},
          {"median_alignment", alignments.empty() ? json(nullptr) : json(median(alignments))}}},
    };
    write_json(dir / "aggregate.json", summary);
    manifest.add_output("aggregate.json");
    return summary;
}

}  // namespace

const std::vector<std::string>& known_checks()
{
    static const std::vector<std::string> names{
        "lemma1", "lemma1-comoving", "norm", "clock", "prop1", "timebounds",
        "radial-profile", "growth", "cramer", "compare"};
    return names;
}

int cmd_simulate(const CommonOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const RunConfig rc = load(opt);
        prepare_dir(opt.out);
        Manifest manifest("simulate", rc.resolved, opt.out);
        EventWriter writer(opt.out / "events.csv");
        const EnsembleAggregate agg = run_one(rc, 0, &writer);
        writer.close();
        manifest.add_output("events.csv");

        const TrajectoryStats& t = agg.trajectories.front();
        manifest.extra() = {{"events", t.events},
                            {"stop_reason", to_string(t.reason)},
                            {"final_time", t.final_time},
                            {"final_radius", t.final_radius}};
        manifest.write();
        out << "simulate: " << t.events << " events, stop " << to_string(t.reason)
            << ", final radius " << t.final_radius << '\n';
        return int{exit_ok};
    });
}

int cmd_ensemble(const CommonOptions& opt, long trajectories, bool aggregate_only,
                 std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (trajectories < 1)
            throw ConfigError("trajectories", "trajectories must be at least 1");
        const RunConfig rc = load(opt);
        const std::size_t workers = resolve_workers(opt.workers);
        prepare_dir(opt.out);
        Manifest manifest("ensemble", rc.resolved, opt.out);
        const auto n = static_cast<std::size_t>(trajectories);

        std::optional<fs::path> event_dir;
        if (!aggregate_only)
            event_dir = opt.out;
        const EnsembleAggregate agg = run_ensemble(rc, n, workers, event_dir);
        if (event_dir)
            for (std::size_t i = 0; i < n; ++i)
                manifest.add_output(event_file_name(i));

        const json summary = write_aggregate(opt.out, agg, rc, manifest);
        manifest.extra() = {{"trajectories", n},
                            {"workers", workers},
                            {"aggregate_only", aggregate_only},
                            {"stop_reasons", summary.at("stop_reasons")}};
        manifest.write();
        out << "ensemble: " << n << " trajectories on " << workers << " workers\n";
        return int{exit_ok};
    });
}

int cmd_langevin(const CommonOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const RunConfig rc = load(opt);
        prepare_dir(opt.out);
        Manifest manifest("langevin", rc.resolved, opt.out);
        CsvFile csv(opt.out / "langevin.csv", langevin_header);
        std::string line;
        RngState rng(rc.langevin.seed);
        const LangevinSummary summary = integrate(rc.langevin, rng, [&](const LangevinSample& s) {
            line.clear();
            format_langevin_sample(line, s);
            csv.text(line);
            csv.end_row();
        });
        csv.write();
        manifest.add_output("langevin.csv");
        manifest.extra() = {{"steps", summary.steps},
                            {"final_time", summary.final_sample.t},
                            {"final_radius", summary.final_sample.radius()}};
        manifest.write();
        out << "langevin: " << summary.steps << " steps, final radius "
            << summary.final_sample.radius() << '\n';
        return int{exit_ok};
    });
}

namespace {

/// Sums per-file deterministic reports into one.
void absorb(BoundReport& total, const BoundReport& part)
{
    if (part.count > 0 && (total.count == 0 || part.max_excess > total.max_excess))
        total.max_excess = part.max_excess;
    total.quantity = part.quantity;
    total.count += part.count;
    total.violations += part.violations;
    total.finalize();
}

std::string verdict(bool ok)
{
    return ok ? "PASS" : "FAIL";
}

}  // namespace

int cmd_analyze(const CommonOptions& opt, const AnalyzeOptions& analyze, std::ostream& out,
                std::ostream& err)
{
    return guarded(err, [&] {
        if (analyze.inputs.empty())
            throw ConfigError("inputs", "analyze needs at least one event file");
        std::vector<std::string> checks = analyze.checks;
        if (checks.empty())
            checks = {"lemma1-comoving", "norm", "clock"};
        for (const auto& c : checks)
            if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
                throw ConfigError("checks", "unknown check " + c);
        auto wants = [&](std::string_view name) {
            return std::find(checks.begin(), checks.end(), name) != checks.end();
        };
        if (wants("compare") && !analyze.langevin)
            throw ConfigError("langevin", "the compare check needs --langevin FILE");

        const RunConfig rc = load(opt);
        const SimConfig& sim = rc.sim;
        prepare_dir(opt.out);
        Manifest manifest("analyze", rc.resolved, opt.out);
        json inputs = json::array();
        for (const auto& p : analyze.inputs)
            inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});

        const std::vector<std::string> deterministic{"lemma1", "lemma1-comoving", "norm", "clock"};
        std::map<std::string, BoundReport> exact;
        FluctuationAccumulator fluct;
        RadialBinStats profile = RadialBinStats::geometric(
            rc.analysis.profile_lo, rc.analysis.profile_hi, rc.analysis.profile_bins);
        TimeBracketAccumulator bracket(sim.omega, rc.analysis.time_thresholds);
        json growth_rows = json::array();
        std::vector<RadiusSample> collision_series;

        for (std::size_t f = 0; f < analyze.inputs.size(); ++f)
        {
            const fs::path& path = analyze.inputs[f];
            const std::vector<CollisionEvent> events = read_events(path);
            if (events.empty())
                throw InputError(path, 0, "no events");
            for (std::size_t i = 0; i < events.size(); ++i)
                if (events[i].k != events.front().k + static_cast<std::int64_t>(i))
                    throw InputError(path, i + 1, "event index out of sequence");

            if (wants("lemma1"))
                absorb(exact["lemma1"], check_lemma1(events, sim.omega));
            if (wants("lemma1-comoving"))
                absorb(exact["lemma1-comoving"], check_lemma1_comoving(events, sim.omega));
            if (wants("norm"))
                absorb(exact["norm"], check_collision_norm_identity(events));
            if (wants("clock"))
                absorb(exact["clock"], check_clock_consistency(events, sim.omega));

            if (wants("prop1"))
            {
                fluct.add_initial(norm(sim.v0 - field_at(sim.omega, sim.x0)));
                for (const auto& ev : events)
                    fluct.add(ev);
            }
            for_each_flight(events, [&](const Vec3& start, const CollisionEvent& ev) {
                if (wants("radial-profile"))
                    profile.add(start, ev);
                if (wants("timebounds"))
                    bracket.add(start, ev);
            });
            if (wants("growth"))
            {
                json row = {{"file", path.string()}, {"events", events.size()}};
                try
                {
                    const GrowthEstimate g = growth_rate(events);
                    row["beta_hat"] = g.beta_hat;
                    row["alpha_hat"] = g.alpha_hat;
                }
                catch (const DomainError& e)
                {
                    row["error"] = e.what();
                }
                row["alignment_median"] = alignment_median(events);
                growth_rows.push_back(row);
            }
            if (f == 0)
            {
                // Plot data: trajectory thinned to at most 100000 points.
                CsvFile csv(opt.out / "trajectory.csv", "t,x1,x2,x3");
                const Vec3 x0 = flight_start(events.front());
                csv.num(events.front().t_before).num(x0.x).num(x0.y).num(x0.z);
                csv.end_row();
                const std::size_t stride = std::max<std::size_t>(1, (events.size() + 99999) / 100000);
                for (std::size_t i = 0; i < events.size(); ++i)
                {
                    if ((i + 1) % stride != 0 && i + 1 != events.size())
                        continue;
                    const auto& ev = events[i];
                    csv.num(ev.t_after).num(ev.x.x).num(ev.x.y).num(ev.x.z);
                    csv.end_row();
                }
                csv.write();
                manifest.add_output("trajectory.csv");
                if (wants("compare"))
                    for (const auto& ev : events)
                        collision_series.push_back({ev.t_after, radial_distance(ev.x)});
            }
        }

        bool ok = true;
        json results = json::object();
        for (const auto& name : deterministic)
        {
            if (!wants(name))
                continue;
            const BoundReport& r = exact[name];
            const std::string file = "report_" + name + ".json";
            json doc = report_json(r);
            doc["check"] = name;
            write_json(opt.out / file, doc);
            manifest.add_output(file);
            results[name] = r.passed();
            ok = ok && r.passed();
            out << name << ": " << verdict(r.passed()) << " (" << r.violations << " of " << r.count
                << " violate, fraction " << r.violation_fraction << ")\n";
        }

        if (wants("prop1"))
        {
            const BoundReport r = check_fluctuation_bound(fluct, sim);
            write_fluctuation_csv(opt.out / "fluctuation.csv", fluct, r);
            manifest.add_output("fluctuation.csv");
            json doc = report_json(r);
            doc["check"] = "prop1";
            doc.erase("rows");
            write_json(opt.out / "report_prop1.json", doc);
            manifest.add_output("report_prop1.json");
            results["prop1"] = r.passed();
            out << "prop1: " << verdict(r.passed()) << " (" << r.violations << " of " << r.count
                << " k over the bound)\n";
        }
        if (wants("timebounds"))
        {
            const BoundReport r = bracket.report();
            write_bracket_csv(opt.out / "time_bracket.csv", bracket);
            manifest.add_output("time_bracket.csv");
            bool monotone = true;
            for (std::size_t i = 1; i < r.rows.size(); ++i)
                monotone = monotone && r.rows[i].observed <= r.rows[i - 1].observed;
            const bool passed = monotone && r.violation_fraction < 0.01;
            json doc = report_json(r);
            doc["check"] = "timebounds";
            doc["nonincreasing"] = monotone;
            doc["passed"] = passed;
            write_json(opt.out / "report_timebounds.json", doc);
            manifest.add_output("report_timebounds.json");
            results["timebounds"] = passed;
            out << "timebounds: " << verdict(passed) << " (fraction " << r.violation_fraction
                << " beyond the largest threshold)\n";
        }
        if (wants("radial-profile"))
        {
            const auto fit = fit_profile(profile, rc.analysis);
            write_profile_csv(opt.out / "profile.csv", profile, fit, rc.analysis);
            manifest.add_output("profile.csv");
            const bool passed = fit && fit->exponent >= 0.4 && fit->exponent <= 0.6;
            json doc = {{"check", "radial-profile"},
                        {"fit", fit_json(fit)},
                        {"fit_lo", rc.analysis.fit_lo},
                        {"fit_hi", rc.analysis.fit_hi},
                        {"passed", passed}};
            write_json(opt.out / "report_radial-profile.json", doc);
            manifest.add_output("report_radial-profile.json");
            results["radial-profile"] = passed;
            out << "radial-profile: " << verdict(passed);
            if (fit)
                out << " (exponent " << fit->exponent << " +/- " << fit->stderr << ")\n";
            else
                out << " (too few populated bins in the fit range)\n";
        }
        if (wants("growth"))
        {
            bool passed = true;
            for (const auto& row : growth_rows)
                passed = passed && row.contains("beta_hat") && row["beta_hat"].get<double>() > 0.0 &&
                         row["alignment_median"].get<double>() < 0.05;
            write_json(opt.out / "report_growth.json",
                       {{"check", "growth"}, {"passed", passed}, {"files", growth_rows}});
            manifest.add_output("report_growth.json");
            results["growth"] = passed;
            out << "growth: " << verdict(passed) << '\n';
        }
        if (wants("cramer"))
        {
            const auto [c, p] = cramer_constants(sim.lambda, sim.omega);
            const double mean = cramer_mean_Y(p, c, sim.lambda, sim.omega);
            const double mgf1 = cramer_mgf_Y(1.0, p, c, sim.lambda, sim.omega);
            RngState rng = derive_stream(sim.seed, 0);
            const double c2 = sim.omega * sim.omega * c * c;
            const int n = 1000000;
            double s = 0, ss = 0, m = 0, mm = 0;
            for (int i = 0; i < n; ++i)
            {
                const double xi = exponential_quantile(rng.uniform(), sim.lambda);
                const bool bad = rng.uniform() < p;
                const double y = (!bad && xi > c2) ? c2 / 6.0 : -xi;
                s += y;
                ss += y * y;
                m += std::exp(y);
                mm += std::exp(2.0 * y);
            }
            const double mc_mean = s / n;
            const double se = std::sqrt((ss / n - mc_mean * mc_mean) / n);
            const double mc_mgf = m / n;
            const double mgf_se = std::sqrt((mm / n - mc_mgf * mc_mgf) / n);
            const bool passed = cramer_mgf_Y(0.0, p, c, sim.lambda, sim.omega) == 1.0 && mean > 0.0 &&
                                std::abs(mc_mean - mean) <= 3.0 * se &&
                                std::abs(mc_mgf - mgf1) <= 3.0 * mgf_se;
            write_json(opt.out / "report_cramer.json",
                       {{"check", "cramer"},
                        {"c", c},
                        {"p", p},
                        {"mean_Y", mean},
                        {"mgf_at_1", mgf1},
                        {"monte_carlo", {{"samples", n}, {"mean", mc_mean}, {"mean_stderr", se},
                                         {"mgf_at_1", mc_mgf}, {"mgf_stderr", mgf_se}}},
                        {"passed", passed}});
            manifest.add_output("report_cramer.json");
            results["cramer"] = passed;
            out << "cramer: " << verdict(passed) << " (E[Y] = " << mean << ")\n";
        }
        if (wants("compare"))
        {
            std::vector<RadiusSample> lang;
            for (const auto& s : read_langevin(*analyze.langevin))
                lang.push_back({s.t, s.radius()});
            const GrowthComparison cmp = compare_growth(collision_series, lang);
            auto law = [](const GrowthLawFit& f) {
                return json{{"winner", to_string(f.winner)},
                            {"exponential_rate", f.exponential.slope},
                            {"exponential_rss", f.exponential.rss},
                            {"polynomial_exponent", f.polynomial.slope},
                            {"polynomial_rss", f.polynomial.rss},
                            {"samples", f.samples}};
            };
            const bool passed = cmp.collision.winner == GrowthLaw::polynomial &&
                                cmp.langevin.winner == GrowthLaw::exponential;
            write_json(opt.out / "report_compare.json", {{"check", "compare"},
                                                          {"collision", law(cmp.collision)},
                                                          {"langevin", law(cmp.langevin)},
                                                          {"passed", passed}});
            manifest.add_output("report_compare.json");
            results["compare"] = passed;
            out << "compare: collision " << to_string(cmp.collision.winner) << " (exponent "
                << cmp.collision.polynomial.slope << "), langevin " << to_string(cmp.langevin.winner)
                << " (rate " << cmp.langevin.exponential.slope << ")\n";
        }

        manifest.extra() = {{"inputs", inputs}, {"checks", checks}, {"passed", results},
                            {"deterministic_checks_passed", ok}};
        manifest.write();
        return ok ? int{exit_ok} : int{exit_failure};
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Random walk in a rotating medium: simulation and analysis"};
    app.require_subcommand(1);

    CommonOptions opt;
    long trajectories = 1;
    bool aggregate_only = false;
    AnalyzeOptions analyze;
    std::string checks_text;
    std::string langevin_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON configuration file");
        sub->add_option("--set", opt.sets, "Override a config key, e.g. stop.max_events=1000")
            ->take_all();
        sub->add_option("--seed", opt.seed, "Seed, decimal or 0x-hex");
        sub->add_option("--workers", opt.workers, "Worker threads (default: ROTWALK_WORKERS or cores)");
        sub->add_option("--out", opt.out, "Output directory");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Run one trajectory and log its events");
    add_common(simulate);
    CLI::App* ensemble = app.add_subcommand("ensemble", "Run independent trajectories and aggregate");
    add_common(ensemble);
    ensemble->add_option("-n,--trajectories", trajectories, "Number of trajectories")->required();
    ensemble->add_flag("--aggregate-only", aggregate_only, "Skip per-trajectory event files");
    CLI::App* langevin = app.add_subcommand("langevin", "Integrate the planar Langevin comparator");
    add_common(langevin);
    CLI::App* analyzer = app.add_subcommand("analyze", "Run checks over event files");
    add_common(analyzer);
    analyzer->add_option("inputs", analyze.inputs, "Event files")->required();
    analyzer->add_option("--checks", checks_text, "Comma-separated checks");
    analyzer->add_option("--langevin", langevin_path, "Langevin samples for the compare check");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? int{exit_ok} : int{exit_usage};
    }

    if (simulate->parsed())
        return cmd_simulate(opt, out, err);
    if (ensemble->parsed())
        return cmd_ensemble(opt, trajectories, aggregate_only, out, err);
    if (langevin->parsed())
        return cmd_langevin(opt, out, err);

    std::size_t pos = 0;
    while (pos < checks_text.size())
    {
        const auto comma = checks_text.find(',', pos);
        const auto part = checks_text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!part.empty())
            analyze.checks.push_back(part);
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    if (!langevin_path.empty())
        analyze.langevin = langevin_path;
    return cmd_analyze(opt, analyze, out, err);
}

}  // namespace rotwalk::cli
