#include "estent/harness.hpp"

#include <cmath>

#include "estent/random.hpp"

namespace estent {

namespace {

struct Context {
    const Scenario& scenario;
    BenchmarkSystem system;
    StabilityClass stability;
    double mu_bar = 0.0;
    std::filesystem::path out_dir;
    std::vector<std::pair<std::string, std::string>> facts;
    HarnessResult result;

    void fact(std::string key, std::string value) {
        facts.emplace_back(std::move(key), std::move(value));
    }
    void property(std::string name, bool passed, std::string detail) {
        result.properties.push_back({std::move(name), passed, std::move(detail)});
    }
    void write(const std::string& file, const std::string& text) {
        const auto path = out_dir / file;
        write_text(path, text);
        result.files.push_back(path);
    }
};

void run_verify(Context& ctx) {
    const Scenario& s = ctx.scenario;
    const SystemModel& model = ctx.system.model;
    ctx.stability.validate();
    const ApproxSet aset = build_approx_set(model, ctx.stability, ctx.mu_bar, s.period,
                                            s.resolution_scale, s.cover_cap);
    std::vector<VerifyReport> reports;
    std::size_t violations = 0;
    std::size_t trials = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::uint64_t seed : s.seeds) {
        VerifyOptions opt;
        opt.trials = s.verify_trials;
        opt.seed = seed;
        opt.hold_steps = s.hold_steps;
        opt.step = s.step;
        reports.push_back(verify_approximating(model, aset, opt));
        violations += reports.back().violations;
        trials += reports.back().trials.size();
        worst = std::max(worst, reports.back().worst_margin);
    }
    ctx.write("verify_approx.csv", to_csv(verify_table(reports, model.state_dim())));
    ctx.fact("approx.exponent", format_real(aset.formula.exponent));
    ctx.fact("approx.delta", format_real(aset.cover.delta()));
    ctx.fact("approx.cardinality", std::to_string(aset.cover.size()));
    ctx.fact("approx.guarantee", aset.guarantee());
    ctx.fact("approx.tolerance", format_real(reports.front().tolerance));
    ctx.property("approximating-set", violations == 0,
                 std::to_string(violations) + " violations in " + std::to_string(trials) +
                     " trials, worst margin " + format_real(worst));
}

bool unit_width(const Box& box) {
    for (Eigen::Index i = 0; i < box.dim(); ++i) {
        if (std::abs(2.0 * box.half_widths()(i) - 1.0) > 1e-12) return false;
    }
    return true;
}

void run_entropy(Context& ctx) {
    const Scenario& s = ctx.scenario;
    const SystemModel& model = ctx.system.model;
    TraceSampling sampling;
    sampling.state_points_per_axis = s.trace_state_points;
    sampling.disturbance_points_per_axis = s.trace_disturbance_points;
    sampling.random_streams = s.trace_random_streams;
    sampling.seed = s.seeds.front();
    sampling.step = s.step;
    sampling.hold_steps = s.hold_steps;
    const EntropyReport report = make_entropy_report(model, ctx.stability, ctx.mu_bar,
                                                     s.curve_horizons, s.epsilon_ladder,
                                                     sampling, s.cover_cap);
    ctx.write("entropy_curve.csv", to_csv(entropy_curve_table(report)));
    ctx.write("entropy_summary.yaml", entropy_summary(report));
    ctx.fact("entropy.case", to_string(report.entropy_case));
    ctx.fact("entropy.upper_nats", format_real(report.upper));
    ctx.fact("entropy.lower_nats", format_real(report.lower));
    ctx.property("entropy-bounds", report.consistent(),
                 "lower " + format_real(report.lower) + " <= upper " + format_real(report.upper));

    // The convergence gap only has a closed form for a unit-width K.
    if (!unit_width(model.initial_set())) {
        ctx.fact("entropy.curve_gap", "skipped (K is not unit width)");
        return;
    }
    const int n = model.state_dim();
    for (const auto& curve : report.curves) {
        if (curve.epsilon > 0.5) continue;
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& p : curve.points) {
            worst = std::max(worst, std::abs(p.rate - curve.analytic_limit) -
                                        curve_gap_bound(n, curve.epsilon, p.horizon));
        }
        ctx.property("entropy-curve-gap eps=" + format_real(curve.epsilon),
                     !curve.points.empty() && worst <= 1e-12,
                     std::to_string(curve.points.size()) + " horizons" +
                         (curve.truncated ? " (truncated)" : "") + ", worst excess " +
                         format_real(worst));
    }
}

void run_estimate(Context& ctx) {
    const Scenario& s = ctx.scenario;
    const SystemModel& model = ctx.system.model;
    if (!s.alpha) {
        throw ConfigError("stability.alpha: estimate mode needs an exponential rate");
    }
    EstimatorConfig config = make_estimator_config(*s.alpha, s.epsilon, s.period, ctx.mu_bar,
                                                   model.initial_set(), s.step);
    if (s.m_constant) config.m_constant = *s.m_constant;
    config.cover_cap = s.cover_cap;
    config.validate();
    ctx.fact("estimate.M", format_real(config.m_constant));
    ctx.fact("estimate.d0", format_real(config.initial_radius()));
    ctx.fact("estimate.asymptotic_bound", format_real(asymptotic_bound(config)));
    ctx.fact("estimate.frames", std::to_string(s.frames));
    if (s.frames == 0) {
        return;
    }

    // With epsilon = 0 the guarantee only covers the undisturbed plant.
    const bool undisturbed = s.epsilon == 0.0;
    const double hold = s.hold_steps * s.step;
    const double horizon = s.frames * s.period;
    std::vector<RunLog> logs;
    std::size_t contained_bad = 0;
    std::size_t bound_bad = 0;
    std::size_t tail_bad = 0;
    std::size_t tail_checked = 0;
    std::size_t bits_bad = 0;
    std::uint64_t run_id = 0;
    double worst_tail = 0.0;
    for (std::uint64_t seed : s.seeds) {
        for (std::uint64_t r = 0; r < s.estimate_runs; ++r, ++run_id) {
            Rng rng(seed, r);
            const Vec x0 = rng.point_in(model.initial_set());
            const DisturbanceSignal d =
                undisturbed ? DisturbanceSignal::zero(model.dist_dim())
                            : random_disturbance(rng, model.disturbance_set(), hold, horizon);
            RunOptions opt;
            opt.frames = s.frames;
            opt.run_id = run_id;
            RunLog log = run_estimation(model, config, x0, d, opt);
            contained_bad += log.containment_violations;
            bound_bad += log.bound_violations;
            if (log.tail_error) {
                ++tail_checked;
                worst_tail = std::max(worst_tail, *log.tail_error);
                if (!log.tail_ok) ++tail_bad;
            }
            for (const auto& f : log.frames) {
                if (f.bits != bits_for_frame(f.cardinality)) ++bits_bad;
            }
            logs.push_back(std::move(log));
        }
    }
    ctx.write("runlog.csv", to_csv(runlog_table(logs)));
    ctx.fact("estimate.runs", std::to_string(logs.size()));
    ctx.fact("estimate.tolerance", format_real(logs.front().tolerance));
    ctx.property("estimator-containment", contained_bad == 0,
                 std::to_string(contained_bad) + " frames outside the region");
    ctx.property("estimator-error-bound", bound_bad == 0,
                 std::to_string(bound_bad) + " frames above the error bound");
    if (tail_checked > 0) {
        ctx.property("estimator-tail-bound", tail_bad == 0,
                     std::to_string(tail_bad) + " of " + std::to_string(tail_checked) +
                         " runs above the asymptotic bound, worst tail error " +
                         format_real(worst_tail));
    }
    ctx.property("estimator-bits", bits_bad == 0,
                 std::to_string(bits_bad) + " frames with inconsistent bit counts");
}

}  // namespace

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::VerifyApprox: return "verify-approx";
        case Mode::Entropy: return "entropy";
        case Mode::Estimate: return "estimate";
        case Mode::All: return "all";
    }
    return "unknown";
}

Mode parse_mode(const std::string& text) {
    if (text == "verify-approx") return Mode::VerifyApprox;
    if (text == "entropy") return Mode::Entropy;
    if (text == "estimate") return Mode::Estimate;
    if (text == "all") return Mode::All;
    throw ConfigError("unknown mode '" + text + "' (expected verify-approx, entropy, estimate, all)");
}

std::vector<std::string> HarnessResult::violated() const {
    std::vector<std::string> names;
    for (const auto& p : properties) {
        if (!p.passed) names.push_back(p.name);
    }
    return names;
}

std::string tool_version() { return ESTENT_VERSION; }

HarnessResult run_scenario(const Scenario& scenario, Mode mode) {
    if (auto problems = validate_scenario(scenario); !problems.empty()) {
        throw ScenarioError(std::move(problems));
    }
    Context ctx{scenario, build_system(scenario), build_stability(scenario), 0.0,
                scenario.output_dir, {}, {}};
    const SystemModel& model = ctx.system.model;

    ctx.fact("model", model.name());
    ctx.fact("state_dim", std::to_string(model.state_dim()));
    if (scenario.mu_bar) {
        ctx.mu_bar = *scenario.mu_bar;
        ctx.fact("mu_bar_source", "scenario");
    } else {
        const MuBarEstimate est = estimate_mu_bar(model, scenario.mu_grid);
        ctx.mu_bar = est.value;
        ctx.fact("mu_bar_source",
                 "sampled on a grid (" + std::to_string(est.samples) + " points, uncertified)");
    }
    ctx.fact("mu_bar", format_real(ctx.mu_bar));
    ctx.fact("stability", to_string(scenario.kind));

    if (mode == Mode::VerifyApprox || mode == Mode::All) run_verify(ctx);
    if (mode == Mode::Entropy || mode == Mode::All) run_entropy(ctx);
    if (mode == Mode::Estimate || (mode == Mode::All && scenario.alpha)) {
        run_estimate(ctx);
    } else if (mode == Mode::All) {
        ctx.fact("estimate", "skipped (no alpha in the stability class)");
    }

    Summary summary{tool_version(), to_string(mode), ctx.facts, ctx.result.properties,
                    save_scenario(scenario)};
    ctx.write("summary.txt", render_summary(summary));
    ctx.result.exit_code = ctx.result.violated().empty() ? kExitPass : kExitViolation;
    return ctx.result;
}

}  // namespace estent
