// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runtime budgets are part of each criterion.

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "estent/approx_sets.hpp"
#include "estent/entropy.hpp"
#include "estent/estimator.hpp"
#include "estent/harness.hpp"
#include "estent/matrix_measure.hpp"
#include "estent/random.hpp"
#include "estent/systems.hpp"

using namespace estent;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

Box cube(int n, double lo, double hi) {
    return Box::from_bounds(Vec::Constant(n, lo), Vec::Constant(n, hi));
}

Scenario reference_scenario() {
    return load_scenario(fs::path(ESTENT_SCENARIO_DIR) / "scalar_contracting.yaml");
}

// Benchmarks with the mu_bar each is certified for on its default K x D.
std::vector<BenchmarkSystem> all_benchmarks() {
    std::vector<BenchmarkSystem> out;
    for (const auto& name : benchmark_names()) out.push_back(make_benchmark(name));
    return out;
}

Outcome sandwich() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::size_t violations = 0;
    double worst = -1e300;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 5;
        Mat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = u(rng);
        const double mu = matrix_measure_inf(a);
        const double norm = induced_norm_inf(a);
        const Eigen::VectorXcd eig = Eigen::EigenSolver<Mat>(a, false).eigenvalues();
        for (Eigen::Index i = 0; i < eig.size(); ++i) {
            worst = std::max(worst, eig(i).real() - mu);
            if (eig(i).real() > mu + 1e-8) ++violations;
        }
        worst = std::max(worst, mu - norm);
        if (mu > norm + 1e-8) ++violations;
    }
    return {violations == 0,
            "1000 matrices, " + std::to_string(violations) + " violations, worst slack " + fmt(worst)};
}

Outcome divergence() {
    const double T = 2.0;
    std::size_t failures = 0;
    std::string per_model;
    for (const auto& sys : all_benchmarks()) {
        const auto& m = sys.model;
        double worst = -1e300;
        for (std::uint64_t p = 0; p < 100; ++p) {
            Rng rng(7, p);
            const Vec x1 = rng.point_in(m.initial_set());
            const Vec x2 = rng.point_in(m.initial_set());
            const auto d = random_disturbance(rng, m.disturbance_set(), 0.01, T);
            // Both trajectories must stay where mu_bar is certified.
            const auto t1 = integrate(m, x1, d, T, 1e-3);
            const auto t2 = integrate(m, x2, d, T, 1e-3);
            const double reach = std::max(t1.states.cwiseAbs().maxCoeff(), t2.states.cwiseAbs().maxCoeff());
            if (reach > sys.certified_radius) {
                ++failures;
                continue;
            }
            const auto r = divergence_bound_check(m, x1, x2, d, T, sys.certified_mu_bar, 1e-3);
            worst = std::max(worst, r.max_violation);
            if (!r.passed()) ++failures;
        }
        per_model += " " + m.name() + "=" + fmt(worst);
    }
    return {failures == 0, std::to_string(failures) + " failing pairs; worst violation" + per_model};
}

Outcome flow_determinant() {
    double worst = 0.0;
    std::size_t cases = 0;
    for (const auto& sys : all_benchmarks()) {
        const auto& m = sys.model;
        const auto starts = box_grid(m.initial_set(), 3);
        for (std::size_t i = 0; i < starts.size(); ++i) {
            Rng rng(11, i);
            const auto d = random_disturbance(rng, m.disturbance_set(), 0.01, 1.0);
            const auto fd = flow_determinant_pair(m, starts[i], d, 1.0, 1e-3);
            worst = std::max(worst, fd.relative_gap());
            ++cases;
        }
    }
    return {worst <= 1e-4, std::to_string(cases) + " cases, worst relative gap " + fmt(worst)};
}

Outcome resolutions() {
    struct Row {
        StabilityKind kind;
        double alpha, eps, mu, T, expected;
    };
    using K = StabilityKind;
    // Expected values evaluated by hand from exp(-rate * T) * eps.
    const std::vector<Row> rows{
        {K::Practical, 0, 0.1, -1.0, 1.0, 0.1},                        // c = 0
        {K::Practical, 0, 0.1, 1.0, 1.0, 0.1 * std::exp(-1.0)},
        {K::Practical, 0, 0.05, 0.3, 10.0, 0.05 * std::exp(-3.0)},
        {K::Asymptotic, 0, 0.2, 0.0, 5.0, 0.2},                        // c = 0
        {K::Asymptotic, 0, 0.2, 2.0, 0.5, 0.2 * std::exp(-1.0)},
        {K::Asymptotic, 0, 1e-3, 0.25, 4.0, 1e-3 * std::exp(-1.0)},
        {K::PracticalExponential, 1.0, 0.3, -2.0, 4.0, 0.3},           // M + alpha = 0
        {K::PracticalExponential, 0.5, 0.1, 1.0, 2.0, 0.1 * std::exp(-3.0)},
        {K::PracticalExponential, 2.0, 0.1, -0.5, 1.0, 0.1 * std::exp(-1.5)},
        {K::Exponential, 0.9, 0.5, -1.0, 3.0, 0.5},                    // M + alpha = 0
        {K::Exponential, 1.0, 0.01, 0.5, 2.0, 0.01 * std::exp(-3.0)},
        {K::Exponential, 0.25, 0.2, 0.0, 8.0, 0.2 * std::exp(-2.0)},
    };
    double worst = 0.0;
    for (const auto& r : rows) {
        const StabilityClass s{r.kind, RateFunction(), r.alpha, r.eps};
        const double got = resolution(s, r.mu, r.T);
        worst = std::max(worst, std::abs(got - r.expected) / r.expected);
    }
    return {worst <= 1e-12, "12 triples, worst relative error " + fmt(worst)};
}

Outcome approximating_sets() {
    using K = StabilityKind;
    std::string detail;
    bool ok = true;
    for (const char* name : {"scalar-contracting", "linear-2d"}) {
        const auto sys = make_benchmark(name);
        for (auto kind : {K::Practical, K::PracticalExponential, K::Asymptotic, K::Exponential}) {
            const StabilityClass s{kind, RateFunction(0.9), 0.9, 0.1};
            const auto aset = build_approx_set(sys.model, s, sys.certified_mu_bar, 1.0);
            VerifyOptions opt;
            opt.trials = 500;
            opt.seed = 1;
            const auto rep = verify_approximating(sys.model, aset, opt);
            ok = ok && rep.violations == 0;
            detail += std::string(" ") + name + "/" + to_string(kind) + "=" +
                      std::to_string(rep.violations);
        }
    }
    // Negative control: expanding dx = 0.5 x with a cover 10x coarser than allowed.
    const auto expanding = make_benchmark("scalar-contracting", {{"a", -0.5}});
    const StabilityClass s{K::Asymptotic, RateFunction(0.1), 0.0, 0.1};
    const auto aset = build_approx_set(expanding.model, s, 0.5, 2.0, 10.0);
    VerifyOptions opt;
    opt.trials = 500;
    opt.seed = 1;
    const auto control = verify_approximating(expanding.model, aset, opt);
    ok = ok && control.violations >= 1;
    return {ok, "violations:" + detail + "; negative control " +
                    std::to_string(control.violations) + "/500"};
}

Outcome entropy_consistency() {
    using K = StabilityKind;
    bool ok = true;
    std::string detail;
    TraceSampling sampling;
    std::vector<BenchmarkSystem> contracting;
    for (auto& sys : all_benchmarks()) {
        if (sys.certified_mu_bar < 0.0) contracting.push_back(std::move(sys));
    }
    contracting.push_back(make_benchmark("cubic", {{"a", 0.5}}));
    for (const auto& sys : contracting) {
        const double alpha = -sys.certified_mu_bar;
        for (auto kind : {K::Practical, K::PracticalExponential, K::Exponential}) {
            const StabilityClass s{kind, RateFunction(), alpha, 0.1};
            const auto r = make_entropy_report(sys.model, s, sys.certified_mu_bar, {1.0, 5.0},
                                               {0.1}, sampling);
            ok = ok && r.consistent();
            detail += " " + sys.model.name() + "/" + to_string(r.entropy_case) + ":" +
                      fmt(r.lower) + "<=" + fmt(r.upper);
        }
    }
    // Curve convergence on unit-width K, contracting and expanding rates.
    // Each (n, mu, eps) keeps the T = 20 cover under the default cardinality cap.
    struct CurveCase {
        int n;
        double mu;
        double eps;
    };
    std::vector<CurveCase> cases;
    for (double mu : {-1.0, 0.4, 1.0})
        for (double eps : {0.1, 0.01, 0.001}) cases.push_back({1, mu, eps});
    for (double mu : {-1.0, 0.4})
        for (double eps : {0.1, 0.01}) cases.push_back({2, mu, eps});
    for (double mu : {-1.0, 0.25}) cases.push_back({3, mu, 0.1});
    const std::vector<double> horizons{1, 2, 5, 10, 20};
    double worst_excess = -1e300;
    std::size_t points = 0;
    for (const auto& cc : cases) {
        const StabilityClass s{K::Practical, RateFunction(), 0.0, cc.eps};
        const auto curve = empirical_entropy_curve(cube(cc.n, 0, 1), s, cc.mu, horizons);
        ok = ok && !curve.truncated;
        for (const auto& p : curve.points) {
            worst_excess = std::max(worst_excess, std::abs(p.rate - curve.analytic_limit) -
                                                      curve_gap_bound(cc.n, cc.eps, p.horizon));
            ++points;
        }
    }
    ok = ok && worst_excess <= 1e-12 && points == cases.size() * horizons.size();
    return {ok, "bounds" + detail + "; curve gap worst excess " + fmt(worst_excess) + " over " +
                    std::to_string(points) + " points"};
}

bool property_passed(const HarnessResult& r, const std::string& name) {
    for (const auto& p : r.properties) {
        if (p.name == name) return p.passed;
    }
    return false;
}

std::string property_detail(const HarnessResult& r, const std::string& name) {
    for (const auto& p : r.properties) {
        if (p.name == name) return p.detail;
    }
    return "missing";
}

Outcome tracking() {
    Scenario s = reference_scenario();
    s.output_dir = (fs::temp_directory_path() / "estent_acceptance_tracking").string();
    const auto r = run_scenario(s, Mode::Estimate);
    bool ok = property_passed(r, "estimator-containment") &&
              property_passed(r, "estimator-error-bound") &&
              property_passed(r, "estimator-tail-bound");
    std::string detail = "reference 200x50: " + property_detail(r, "estimator-containment") +
                         "; " + property_detail(r, "estimator-error-bound") + "; " +
                         property_detail(r, "estimator-tail-bound");

    // Same check where covers are non-trivial.
    Scenario p = load_scenario(fs::path(ESTENT_SCENARIO_DIR) / "linear_2d.yaml");
    p.output_dir = (fs::temp_directory_path() / "estent_acceptance_tracking_2d").string();
    const auto r2 = run_scenario(p, Mode::Estimate);
    ok = ok && r2.exit_code == kExitPass;
    detail += "; linear-2d with M=0: " + std::string(r2.exit_code == kExitPass ? "pass" : "fail");
    return {ok, detail};
}

Outcome disturbance_free() {
    std::size_t violations = 0;
    std::size_t samples = 0;
    double worst = -1e300;
    auto check = [&](const SystemModel& m, const EstimatorConfig& c) {
        for (std::uint64_t run = 0; run < 50; ++run) {
            Rng rng(99, run);
            const Vec x0 = rng.point_in(m.initial_set());
            RunOptions opt;
            opt.frames = 10;
            opt.run_id = run;
            opt.keep_signal = true;
            const auto zero = DisturbanceSignal::zero(m.dist_dim());
            const auto log = run_estimation(m, c, x0, zero, opt);
            const auto truth = integrate(m, x0, zero, opt.frames * c.period, c.step);
            for (std::size_t i = 0; i + 1 < truth.size(); ++i) {
                const double t = truth.times[i];
                const double err = inf_norm(truth.state(i) - estimate_at(log, c, t));
                const double margin = err - std::exp(-c.alpha * t) * log.d0;
                worst = std::max(worst, margin);
                if (margin > log.tolerance) ++violations;
                ++samples;
            }
        }
    };
    const auto scalar = make_benchmark("scalar-contracting").model;
    check(scalar, make_estimator_config(0.9, 0.0, 1.0, -1.0, scalar.initial_set()));
    const auto planar = make_benchmark("linear-2d").model;
    auto c = make_estimator_config(0.9, 0.0, 1.0, -1.0, planar.initial_set());
    c.m_constant = 0.0;
    check(planar, c);
    return {violations == 0, "2 systems x 50 runs, " + std::to_string(samples) +
                                 " grid times, worst margin " + fmt(worst)};
}

Outcome delta_recursion() {
    double worst = 0.0;
    for (double alpha : {0.01, 0.3, 0.9, 2.0}) {
        for (double eps : {0.0, 0.05, 0.2}) {
            for (double d0 : {0.5, 1.0, 3.0}) {
                EstimatorConfig c;
                c.alpha = alpha;
                c.epsilon = eps;
                double delta = d0;
                const double a = std::exp(-alpha);
                for (std::uint32_t k = 0; k <= 1000; ++k) {
                    const double closed = delta_closed_form(c, d0, k);
                    worst = std::max(worst, std::abs(delta - closed) / std::max(1.0, std::abs(closed)));
                    delta = a * delta + 2.0 * eps;
                }
            }
        }
    }
    return {worst <= 1e-12, "36 configurations, k <= 1000, worst difference " + fmt(worst)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const auto base = fs::temp_directory_path() / "estent_acceptance_det";
    fs::remove_all(base);
    for (const char* run : {"a", "b"}) {
        Scenario s = reference_scenario();
        s.output_dir = (base / run).string();
        run_scenario(s, Mode::All);
    }
    std::size_t compared = 0;
    bool same = true;
    for (const auto& entry : fs::directory_iterator(base / "a")) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        same = same && slurp(entry.path()) == slurp(base / "b" / entry.path().filename());
    }
    return {same && compared == 3,
            std::to_string(compared) + " CSV files compared, " + (same ? "identical" : "different")};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "matrix measure between spectrum and induced norm", 5, sandwich},
        {2, "trajectory divergence bounded by exp(mu_bar t)", 30, divergence},
        {3, "variational determinant equals exp of trace integral", 10, flow_determinant},
        {4, "closed-form approximating-set resolutions", 1, resolutions},
        {5, "approximating-set inequalities and negative control", 120, approximating_sets},
        {6, "entropy bounds consistent and curves converge", 60, entropy_consistency},
        {7, "estimator containment, error bound and tail bound", 300, tracking},
        {8, "disturbance-free estimator error bound", 60, disturbance_free},
        {9, "radius recursion matches closed form", 1, delta_recursion},
        {10, "reference scenario outputs are byte-identical", 120, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs < c.budget_seconds;
        const bool passed = o.passed && in_budget;
        failed += passed ? 0 : 1;
        std::printf("%s [%d] %s: %s (%.2fs, budget %.0fs%s)\n", passed ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), o.detail.c_str(), secs, c.budget_seconds,
                    in_budget ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
