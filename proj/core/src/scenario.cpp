#include "estent/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "estent/dynamics.hpp"

namespace estent {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "invalid scenario:";
    for (const auto& p : problems) {
        out += "\n  " + p;
    }
    return out;
}

// Shortest text that parses back to the same double.
std::string exact_text(double value) {
    if (std::isnan(value)) return ".nan";
    if (std::isinf(value)) return value > 0 ? ".inf" : "-.inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eE") == std::string::npos) {
        s += ".0";
    }
    return s;
}

class Reader {
public:
    Reader(std::string origin, std::vector<std::string>& problems)
        : origin_(std::move(origin)), problems_(problems) {}

    std::string where(const YAML::Node& node) const {
        const YAML::Mark m = node.Mark();
        if (m.is_null()) {
            return origin_;
        }
        return origin_ + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
    }

    void problem(const YAML::Node& node, const std::string& text) {
        problems_.push_back(where(node) + ": " + text);
    }

    // Flags keys outside `allowed`; returns false if `node` is not a map.
    bool check_map(const YAML::Node& node, const std::string& path,
                   std::initializer_list<const char*> allowed) {
        if (!node.IsMap()) {
            problem(node, path + ": expected a mapping");
            return false;
        }
        const std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!keys.contains(key)) {
                problem(kv.first, "unknown key '" + (path.empty() ? key : path + "." + key) + "'");
            }
        }
        return true;
    }

    template <typename T>
    void read(const YAML::Node& parent, const char* key, const std::string& path, T& out) {
        const YAML::Node node = parent[key];
        if (!node || node.IsNull()) {
            return;
        }
        convert(node, path, out);
    }

    template <typename T>
    void read(const YAML::Node& parent, const char* key, const std::string& path,
              std::optional<T>& out) {
        const YAML::Node node = parent[key];
        if (!node || node.IsNull()) {
            return;
        }
        T value{};
        if (convert(node, path, value)) {
            out = value;
        }
    }

private:
    bool convert(const YAML::Node& node, const std::string& path, double& out) {
        try {
            out = node.as<double>();
            return true;
        } catch (const YAML::Exception&) {
            problem(node, path + ": expected a real number");
            return false;
        }
    }

    bool convert(const YAML::Node& node, const std::string& path, std::string& out) {
        if (!node.IsScalar()) {
            problem(node, path + ": expected a string");
            return false;
        }
        out = node.as<std::string>();
        return true;
    }

    bool convert_integer(const YAML::Node& node, const std::string& path, long long lo,
                         long long& out) {
        try {
            out = node.as<long long>();
        } catch (const YAML::Exception&) {
            problem(node, path + ": expected an integer");
            return false;
        }
        if (out < lo) {
            problem(node, path + ": must be >= " + std::to_string(lo));
            return false;
        }
        return true;
    }

    bool convert(const YAML::Node& node, const std::string& path, int& out) {
        long long v = 0;
        if (!convert_integer(node, path, std::numeric_limits<int>::min(), v)) return false;
        if (v > std::numeric_limits<int>::max()) {
            problem(node, path + ": integer too large");
            return false;
        }
        out = static_cast<int>(v);
        return true;
    }

    bool convert(const YAML::Node& node, const std::string& path, std::uint32_t& out) {
        long long v = 0;
        if (!convert_integer(node, path, 0, v)) return false;
        if (v > std::numeric_limits<std::uint32_t>::max()) {
            problem(node, path + ": integer too large");
            return false;
        }
        out = static_cast<std::uint32_t>(v);
        return true;
    }

    bool convert(const YAML::Node& node, const std::string& path, std::uint64_t& out) {
        long long v = 0;
        if (!convert_integer(node, path, 0, v)) return false;
        out = static_cast<std::uint64_t>(v);
        return true;
    }

    template <typename T>
    bool convert(const YAML::Node& node, const std::string& path, std::vector<T>& out) {
        if (!node.IsSequence()) {
            problem(node, path + ": expected a list");
            return false;
        }
        std::vector<T> values;
        bool ok = true;
        for (std::size_t i = 0; i < node.size(); ++i) {
            T v{};
            ok = convert(node[i], path + "[" + std::to_string(i) + "]", v) && ok;
            values.push_back(v);
        }
        if (ok) {
            out = std::move(values);
        }
        return ok;
    }

    std::string origin_;
    std::vector<std::string>& problems_;
};

std::optional<Bounds> read_bounds(Reader& r, const YAML::Node& parent, const char* key,
                                  const std::string& path) {
    const YAML::Node node = parent[key];
    if (!node || node.IsNull()) {
        return std::nullopt;
    }
    if (!r.check_map(node, path, {"lo", "hi"})) {
        return std::nullopt;
    }
    Bounds b;
    if (!node["lo"] || !node["hi"]) {
        r.problem(node, path + ": needs both 'lo' and 'hi'");
        return std::nullopt;
    }
    r.read(node, "lo", path + ".lo", b.lo);
    r.read(node, "hi", path + ".hi", b.hi);
    return b;
}

void parse_into(Scenario& s, const YAML::Node& root, Reader& r) {
    if (!root || root.IsNull()) {
        r.problem(root, "empty scenario");
        return;
    }
    if (!r.check_map(root, "",
                     {"model", "stability", "horizon", "integrator", "analysis", "sweep",
                      "output"})) {
        return;
    }
    if (const YAML::Node m = root["model"]; m && r.check_map(m, "model", {"name", "params", "K", "D"})) {
        r.read(m, "name", "model.name", s.model);
        if (const YAML::Node p = m["params"]; p && !p.IsNull()) {
            if (!p.IsMap()) {
                r.problem(p, "model.params: expected a mapping");
            } else {
                for (const auto& kv : p) {
                    const auto key = kv.first.as<std::string>();
                    double v = 0.0;
                    try {
                        v = kv.second.as<double>();
                    } catch (const YAML::Exception&) {
                        r.problem(kv.second, "model.params." + key + ": expected a real number");
                        continue;
                    }
                    s.params[key] = v;
                }
            }
        }
        s.initial_set = read_bounds(r, m, "K", "model.K");
        s.disturbance_set = read_bounds(r, m, "D", "model.D");
    } else if (!m) {
        r.problem(root, "missing required section 'model'");
    }

    if (const YAML::Node st = root["stability"];
        st && r.check_map(st, "stability", {"kind", "alpha", "epsilon", "beta"})) {
        std::string kind = to_string(s.kind);
        r.read(st, "kind", "stability.kind", kind);
        try {
            s.kind = parse_stability_kind(kind);
        } catch (const ConfigError& e) {
            r.problem(st["kind"], std::string("stability.kind: ") + e.what());
        }
        r.read(st, "alpha", "stability.alpha", s.alpha);
        r.read(st, "epsilon", "stability.epsilon", s.epsilon);
        if (const YAML::Node b = st["beta"];
            b && !b.IsNull() && r.check_map(b, "stability.beta", {"gain", "lambda"})) {
            r.read(b, "gain", "stability.beta.gain", s.beta_gain);
            r.read(b, "lambda", "stability.beta.lambda", s.beta_lambda);
        }
    }

    if (const YAML::Node h = root["horizon"];
        h && r.check_map(h, "horizon", {"T", "frames", "T_values", "epsilon_ladder"})) {
        r.read(h, "T", "horizon.T", s.period);
        r.read(h, "frames", "horizon.frames", s.frames);
        r.read(h, "T_values", "horizon.T_values", s.curve_horizons);
        r.read(h, "epsilon_ladder", "horizon.epsilon_ladder", s.epsilon_ladder);
    }

    if (const YAML::Node i = root["integrator"];
        i && r.check_map(i, "integrator", {"step", "hold_steps"})) {
        r.read(i, "step", "integrator.step", s.step);
        r.read(i, "hold_steps", "integrator.hold_steps", s.hold_steps);
    }

    if (const YAML::Node a = root["analysis"];
        a && r.check_map(a, "analysis",
                         {"mu_bar", "mu_grid", "M", "resolution_scale", "cover_cap", "trace"})) {
        r.read(a, "mu_bar", "analysis.mu_bar", s.mu_bar);
        r.read(a, "mu_grid", "analysis.mu_grid", s.mu_grid);
        r.read(a, "M", "analysis.M", s.m_constant);
        r.read(a, "resolution_scale", "analysis.resolution_scale", s.resolution_scale);
        r.read(a, "cover_cap", "analysis.cover_cap", s.cover_cap);
        if (const YAML::Node t = a["trace"];
            t && !t.IsNull() &&
            r.check_map(t, "analysis.trace", {"state_points", "disturbance_points", "random_streams"})) {
            r.read(t, "state_points", "analysis.trace.state_points", s.trace_state_points);
            r.read(t, "disturbance_points", "analysis.trace.disturbance_points",
                   s.trace_disturbance_points);
            r.read(t, "random_streams", "analysis.trace.random_streams", s.trace_random_streams);
        }
    }

    if (const YAML::Node w = root["sweep"];
        w && r.check_map(w, "sweep", {"seeds", "verify_trials", "estimate_runs"})) {
        r.read(w, "seeds", "sweep.seeds", s.seeds);
        r.read(w, "verify_trials", "sweep.verify_trials", s.verify_trials);
        r.read(w, "estimate_runs", "sweep.estimate_runs", s.estimate_runs);
    }

    if (const YAML::Node o = root["output"]; o && r.check_map(o, "output", {"dir"})) {
        r.read(o, "dir", "output.dir", s.output_dir);
    }
}

void check_bounds(const Bounds& b, int dim, const std::string& path,
                  std::vector<std::string>& problems) {
    if (b.lo.size() != b.hi.size()) {
        problems.push_back(path + ": lo and hi differ in length");
        return;
    }
    if (static_cast<int>(b.lo.size()) != dim) {
        problems.push_back(path + ": dimension " + std::to_string(b.lo.size()) +
                           " does not match the model (" + std::to_string(dim) + ")");
        return;
    }
    for (std::size_t i = 0; i < b.lo.size(); ++i) {
        if (!std::isfinite(b.lo[i]) || !std::isfinite(b.hi[i]) || b.lo[i] > b.hi[i]) {
            problems.push_back(path + ": need finite lo <= hi on axis " + std::to_string(i));
        }
    }
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

Box Bounds::to_box() const {
    return Box::from_bounds(Eigen::Map<const Vec>(lo.data(), static_cast<Eigen::Index>(lo.size())),
                            Eigen::Map<const Vec>(hi.data(), static_cast<Eigen::Index>(hi.size())));
}

ScenarioError::ScenarioError(std::vector<std::string> problems)
    : ConfigError(join_problems(problems)), problems_(std::move(problems)) {}

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> problems;
    std::optional<BenchmarkSystem> sys;
    try {
        sys = make_benchmark(s.model, s.params);
    } catch (const ConfigError& e) {
        problems.push_back(std::string("model: ") + e.what());
    }
    if (sys) {
        if (s.initial_set) {
            check_bounds(*s.initial_set, sys->model.state_dim(), "model.K", problems);
        }
        if (s.disturbance_set) {
            const auto before = problems.size();
            check_bounds(*s.disturbance_set, sys->model.dist_dim(), "model.D", problems);
            if (problems.size() == before) {
                for (std::size_t i = 0; i < s.disturbance_set->lo.size(); ++i) {
                    if (s.disturbance_set->lo[i] > 0.0 || s.disturbance_set->hi[i] < 0.0) {
                        problems.push_back("model.D: must contain the origin (axis " +
                                           std::to_string(i) + ")");
                    }
                }
            }
        }
    }

    if (is_exponential(s.kind) && !s.alpha) {
        problems.push_back("stability.alpha: required for kind '" + to_string(s.kind) + "'");
    }
    if (s.alpha && !(*s.alpha > 0.0 && finite(*s.alpha))) {
        problems.push_back("stability.alpha: must be positive");
    }
    if (!(s.epsilon >= 0.0) || !finite(s.epsilon)) {
        problems.push_back("stability.epsilon: must be non-negative");
    } else if (s.epsilon == 0.0 && s.kind != StabilityKind::Exponential) {
        problems.push_back("stability.epsilon: zero is only allowed for kind 'exponential'");
    }
    if (!(s.beta_gain >= 1.0) || !finite(s.beta_gain)) {
        problems.push_back("stability.beta.gain: must be >= 1");
    }
    if (!(s.beta_lambda > 0.0) || !finite(s.beta_lambda)) {
        problems.push_back("stability.beta.lambda: must be positive");
    }

    if (!(s.period > 0.0) || !finite(s.period)) {
        problems.push_back("horizon.T: must be positive");
    }
    if (!(s.step > 0.0) || !finite(s.step)) {
        problems.push_back("integrator.step: must be positive");
    } else if (s.period > 0.0 && finite(s.period)) {
        try {
            step_count(s.period, s.step);
        } catch (const ConfigError&) {
            problems.push_back("integrator.step: must divide horizon.T");
        }
    }
    if (s.curve_horizons.empty()) {
        problems.push_back("horizon.T_values: must not be empty");
    }
    for (std::size_t i = 0; i < s.curve_horizons.size(); ++i) {
        if (!(s.curve_horizons[i] > 0.0) ||
            (i > 0 && !(s.curve_horizons[i] > s.curve_horizons[i - 1]))) {
            problems.push_back("horizon.T_values: must be positive and increasing");
            break;
        }
    }
    if (s.epsilon_ladder.empty()) {
        problems.push_back("horizon.epsilon_ladder: must not be empty");
    }
    for (double e : s.epsilon_ladder) {
        if (!(e > 0.0) || !finite(e)) {
            problems.push_back("horizon.epsilon_ladder: entries must be positive");
            break;
        }
    }
    if (s.hold_steps < 1) problems.push_back("integrator.hold_steps: must be >= 1");
    if (s.mu_grid < 1) problems.push_back("analysis.mu_grid: must be >= 1");
    if (s.mu_bar && !finite(*s.mu_bar)) problems.push_back("analysis.mu_bar: must be finite");
    if (s.m_constant) {
        if (!finite(*s.m_constant)) {
            problems.push_back("analysis.M: must be finite");
        } else if (s.alpha && *s.m_constant < -*s.alpha) {
            problems.push_back("analysis.M: must satisfy M >= -alpha");
        }
    }
    if (!(s.resolution_scale > 0.0) || !finite(s.resolution_scale)) {
        problems.push_back("analysis.resolution_scale: must be positive");
    }
    if (s.cover_cap < 1) problems.push_back("analysis.cover_cap: must be >= 1");
    if (s.trace_state_points < 1) problems.push_back("analysis.trace.state_points: must be >= 1");
    if (s.trace_disturbance_points < 1) {
        problems.push_back("analysis.trace.disturbance_points: must be >= 1");
    }
    if (s.trace_random_streams < 0) {
        problems.push_back("analysis.trace.random_streams: must be >= 0");
    }
    if (s.seeds.empty()) problems.push_back("sweep.seeds: must not be empty");
    if (s.output_dir.empty()) problems.push_back("output.dir: must not be empty");
    return problems;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ScenarioError({origin + ":" + std::to_string(e.mark.line + 1) + ":" +
                             std::to_string(e.mark.column + 1) + ": parse error: " + e.msg});
    }
    Scenario s;
    std::vector<std::string> problems;
    Reader reader(origin, problems);
    parse_into(s, root, reader);
    if (problems.empty()) {
        problems = validate_scenario(s);
    }
    if (!problems.empty()) {
        throw ScenarioError(std::move(problems));
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError({path.string() + ": cannot open scenario file"});
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str(), path.string());
}

namespace {

void emit_reals(YAML::Emitter& out, const std::vector<double>& values) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double v : values) out << exact_text(v);
    out << YAML::EndSeq;
}

void emit_bounds(YAML::Emitter& out, const char* key, const std::optional<Bounds>& b) {
    if (!b) return;
    out << YAML::Key << key << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "lo" << YAML::Value;
    emit_reals(out, b->lo);
    out << YAML::Key << "hi" << YAML::Value;
    emit_reals(out, b->hi);
    out << YAML::EndMap;
}

}  // namespace

std::string save_scenario(const Scenario& s) {
    YAML::Emitter out;
    out << YAML::BeginMap;

    out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << s.model;
    out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : s.params) out << YAML::Key << k << YAML::Value << exact_text(v);
    out << YAML::EndMap;
    emit_bounds(out, "K", s.initial_set);
    emit_bounds(out, "D", s.disturbance_set);
    out << YAML::EndMap;

    out << YAML::Key << "stability" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << to_string(s.kind);
    if (s.alpha) out << YAML::Key << "alpha" << YAML::Value << exact_text(*s.alpha);
    out << YAML::Key << "epsilon" << YAML::Value << exact_text(s.epsilon);
    out << YAML::Key << "beta" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "gain" << YAML::Value << exact_text(s.beta_gain);
    out << YAML::Key << "lambda" << YAML::Value << exact_text(s.beta_lambda);
    out << YAML::EndMap << YAML::EndMap;

    out << YAML::Key << "horizon" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "T" << YAML::Value << exact_text(s.period);
    out << YAML::Key << "frames" << YAML::Value << s.frames;
    out << YAML::Key << "T_values" << YAML::Value;
    emit_reals(out, s.curve_horizons);
    out << YAML::Key << "epsilon_ladder" << YAML::Value;
    emit_reals(out, s.epsilon_ladder);
    out << YAML::EndMap;

    out << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "step" << YAML::Value << exact_text(s.step);
    out << YAML::Key << "hold_steps" << YAML::Value << s.hold_steps;
    out << YAML::EndMap;

    out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
    if (s.mu_bar) out << YAML::Key << "mu_bar" << YAML::Value << exact_text(*s.mu_bar);
    out << YAML::Key << "mu_grid" << YAML::Value << s.mu_grid;
    if (s.m_constant) out << YAML::Key << "M" << YAML::Value << exact_text(*s.m_constant);
    out << YAML::Key << "resolution_scale" << YAML::Value << exact_text(s.resolution_scale);
    out << YAML::Key << "cover_cap" << YAML::Value << s.cover_cap;
    out << YAML::Key << "trace" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "state_points" << YAML::Value << s.trace_state_points;
    out << YAML::Key << "disturbance_points" << YAML::Value << s.trace_disturbance_points;
    out << YAML::Key << "random_streams" << YAML::Value << s.trace_random_streams;
    out << YAML::EndMap << YAML::EndMap;

    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto seed : s.seeds) out << seed;
    out << YAML::EndSeq;
    out << YAML::Key << "verify_trials" << YAML::Value << s.verify_trials;
    out << YAML::Key << "estimate_runs" << YAML::Value << s.estimate_runs;
    out << YAML::EndMap;

    out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dir" << YAML::Value << s.output_dir;
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

BenchmarkSystem build_system(const Scenario& s) {
    BenchmarkSystem sys = make_benchmark(s.model, s.params);
    if (s.initial_set || s.disturbance_set) {
        Box k = s.initial_set ? s.initial_set->to_box() : sys.model.initial_set();
        Box d = s.disturbance_set ? s.disturbance_set->to_box() : sys.model.disturbance_set();
        sys.model = sys.model.with_sets(std::move(k), std::move(d));
    }
    return sys;
}

StabilityClass build_stability(const Scenario& s) {
    return StabilityClass{s.kind, RateFunction(s.beta_lambda, s.beta_gain), s.alpha.value_or(0.0),
                          s.epsilon};
}

}  // namespace estent
