#include "estent/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "estent/errors.hpp"

namespace estent {

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string to_csv(const Table& table) {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(table.columns);
    for (const auto& row : table.rows) line(row);
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw std::runtime_error("cannot create directory " + path.parent_path().string() +
                                     ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

Table runlog_table(const std::vector<RunLog>& logs) {
    Table t;
    t.columns = {"run_id",   "k",         "t_start",       "delta_k",    "N_k",           "bits",
                 "cum_bits", "quant_err", "frame_max_err", "thm3_bound", "violation_flag"};
    for (const auto& log : logs) {
        for (const auto& f : log.frames) {
            t.rows.push_back({std::to_string(log.run_id), std::to_string(f.k),
                              format_real(f.t_start), format_real(f.delta),
                              std::to_string(f.cardinality), std::to_string(f.bits),
                              std::to_string(f.cumulative_bits), format_real(f.quantization_error),
                              format_real(f.max_error), format_real(f.bound_at_start),
                              f.violation() ? "1" : "0"});
        }
    }
    return t;
}

Table verify_table(const std::vector<VerifyReport>& reports, int state_dim) {
    Table t;
    t.columns = {"seed", "trial"};
    for (int i = 0; i < state_dim; ++i) t.columns.push_back("x0_" + std::to_string(i + 1));
    t.columns.push_back("worst_margin");
    t.columns.push_back("violated");
    for (const auto& r : reports) {
        for (const auto& trial : r.trials) {
            std::vector<std::string> row{std::to_string(trial.seed), std::to_string(trial.trial)};
            for (int i = 0; i < state_dim; ++i) row.push_back(format_real(trial.x0(i)));
            row.push_back(format_real(trial.worst_margin));
            row.push_back(trial.violated ? "1" : "0");
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

Table entropy_curve_table(const EntropyReport& report) {
    Table t;
    t.columns = {"epsilon", "T", "delta", "N", "rate_nats", "rate_bits", "analytic_limit"};
    for (const auto& curve : report.curves) {
        for (const auto& p : curve.points) {
            t.rows.push_back({format_real(curve.epsilon), format_real(p.horizon),
                              format_real(p.delta), std::to_string(p.cardinality),
                              format_real(p.rate), format_real(nats_to_bits(p.rate)),
                              format_real(curve.analytic_limit)});
        }
    }
    return t;
}

std::string entropy_summary(const EntropyReport& r) {
    std::ostringstream out;
    out << "case: " << to_string(r.entropy_case) << '\n';
    out << "n: " << r.n << '\n';
    out << "mu_bar: " << format_real(r.mu_bar) << '\n';
    out << "c_bar: " << format_real(r.c_bar) << '\n';
    if (r.alpha) out << "alpha: " << format_real(*r.alpha) << '\n';
    if (r.m_constant) out << "M: " << format_real(*r.m_constant) << '\n';
    out << "trace_horizon: " << format_real(r.trace_horizon) << '\n';
    out << "trace_inf: " << format_real(r.trace_inf.value) << '\n';
    out << "trace_inf_finite: " << (r.trace_inf.finite ? "true" : "false") << '\n';
    out << "trace_samples: " << r.trace_inf.samples << '\n';
    out << "upper_nats: " << format_real(r.upper) << '\n';
    out << "lower_nats: " << format_real(r.lower) << '\n';
    out << "upper_bits: " << format_real(nats_to_bits(r.upper)) << '\n';
    out << "lower_bits: " << format_real(nats_to_bits(r.lower)) << '\n';
    out << "consistent: " << (r.consistent() ? "true" : "false") << '\n';
    out << "curves:\n";
    for (const auto& c : r.curves) {
        out << "  - epsilon: " << format_real(c.epsilon) << '\n';
        out << "    analytic_limit: " << format_real(c.analytic_limit) << '\n';
        out << "    points: " << c.points.size() << '\n';
        out << "    truncated: " << (c.truncated ? "true" : "false") << '\n';
    }
    return out.str();
}

std::string render_summary(const Summary& s) {
    std::ostringstream out;
    out << "estent " << s.tool_version << '\n';
    out << "mode: " << s.mode << '\n';
    out << "\n[properties]\n";
    for (const auto& p : s.properties) {
        out << (p.passed ? "PASS " : "FAIL ") << p.name;
        if (!p.detail.empty()) out << ": " << p.detail;
        out << '\n';
    }
    out << "\n[facts]\n";
    for (const auto& [k, v] : s.facts) out << k << ": " << v << '\n';
    out << "\n[scenario]\n" << s.scenario_yaml;
    return out.str();
}

}  // namespace estent
