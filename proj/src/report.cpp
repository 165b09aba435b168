#include "nsd/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nsd {

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};
constexpr int kPaletteSize = 10;

}  // namespace

std::string format_double(double value, const char* spec) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), spec, value);
    return buffer;
}

void write_results_csv(const std::string& path, const UnitResult& result) {
    std::ofstream out = open_or_throw(path);
    out << "policy,round,mean_cum_regret,ci_low,ci_high\n";
    for (const PolicyAggregate& agg : result.policies) {
        for (int t = 0; t < result.horizon; ++t) {
            out << agg.label << ',' << (t + 1) << ',' << format_double(agg.mean[t]) << ','
                << format_double(agg.mean[t] - agg.ci_half[t]) << ','
                << format_double(agg.mean[t] + agg.ci_half[t]) << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRound>& rounds) {
    std::ofstream out = open_or_throw(path);
    out << "round,action,signal,reward_origin,reward_value,regret\n";
    for (const TrajectoryRound& r : rounds) {
        out << r.round << ',' << r.action << ',' << r.signal << ',';
        for (std::size_t i = 0; i < r.delivered.size(); ++i) {
            if (i) out << ';';
            out << r.delivered[i].origin_round;
        }
        out << ',';
        for (std::size_t i = 0; i < r.delivered.size(); ++i) {
            if (i) out << ';';
            out << format_double(r.delivered[i].reward, "%.17g");
        }
        out << ',' << format_double(r.per_round_regret, "%.17g") << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

struct Axis {
    double lo, hi;
    double to_px(double v, double px_lo, double px_hi) const {
        double f = (v - lo) / (hi - lo);
        return px_lo + f * (px_hi - px_lo);
    }
};

std::vector<double> linear_ticks(double lo, double hi, int target) {
    double span = hi - lo;
    double raw = span / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    std::vector<double> ticks;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
        ticks.push_back(v);
    }
    return ticks;
}

}  // namespace

void write_svg_plot(const std::string& path, const UnitResult& result,
                    const PlotOptions& options) {
    const double width = 880, height = 540;
    const double left = 78, right = width - 24, top = 46, bottom = height - 52;
    const int horizon = result.horizon;
    const int stride = std::max(1, horizon / 1200);

    double y_max = 1.0;
    double y_min_pos = 1.0;
    for (const PolicyAggregate& agg : result.policies) {
        for (int t = 0; t < horizon; ++t) {
            y_max = std::max(y_max, agg.mean[t] + agg.ci_half[t]);
            double lo = agg.mean[t] - agg.ci_half[t];
            if (lo > 0) y_min_pos = std::min(y_min_pos, std::max(lo, 1e-3));
        }
    }

    Axis x_axis{0.0, static_cast<double>(horizon)};
    Axis y_axis;
    auto y_value = [&](double v) {
        if (!options.log_y) return v;
        return std::log10(std::max(v, y_min_pos));
    };
    if (options.log_y) {
        y_axis = {std::floor(std::log10(y_min_pos)), std::ceil(std::log10(y_max))};
        if (y_axis.hi <= y_axis.lo) y_axis.hi = y_axis.lo + 1;
    } else {
        y_axis = {0.0, y_max * 1.05};
    }

    auto px = [&](double xv, double yv) {
        double x = x_axis.to_px(xv, left, right);
        double y = y_axis.to_px(y_value(yv), bottom, top);
        std::ostringstream s;
        s << format_double(x, "%.2f") << ',' << format_double(y, "%.2f");
        return s.str();
    };

    std::ofstream out = open_or_throw(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        out << "<text x=\"" << (width / 2) << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << options.title << "</text>\n";
    }

    // axes
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n";
    for (double tick : linear_ticks(0, horizon, 6)) {
        double x = x_axis.to_px(tick, left, right);
        out << "<line x1=\"" << x << "\" y1=\"" << bottom << "\" x2=\"" << x << "\" y2=\""
            << (bottom + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << (bottom + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << format_double(tick, "%.0f") << "</text>\n";
    }
    std::vector<double> y_ticks;
    if (options.log_y) {
        for (double d = y_axis.lo; d <= y_axis.hi + 1e-9; d += 1.0) y_ticks.push_back(d);
    } else {
        y_ticks = linear_ticks(y_axis.lo, y_axis.hi, 6);
    }
    for (double tick : y_ticks) {
        double y = y_axis.to_px(tick, bottom, top);
        out << "<line x1=\"" << (left - 5) << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\""
            << y << "\" stroke=\"black\"/>\n";
        double shown = options.log_y ? std::pow(10.0, tick) : tick;
        out << "<text x=\"" << (left - 9) << "\" y=\"" << (y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << format_double(shown, "%g") << "</text>\n";
    }
    out << "<text x=\"" << ((left + right) / 2) << "\" y=\"" << (height - 14)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">round</text>\n";
    out << "<text x=\"20\" y=\"" << ((top + bottom) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << ((top + bottom) / 2)
        << ")\">mean cumulative regret</text>\n";

    for (std::size_t p = 0; p < result.policies.size(); ++p) {
        const PolicyAggregate& agg = result.policies[p];
        const char* color = kPalette[p % kPaletteSize];

        // confidence band
        out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
        for (int t = 0; t < horizon; t += stride) {
            out << px(t + 1, agg.mean[t] + agg.ci_half[t]) << ' ';
        }
        for (int t = horizon - 1; t >= 0; t -= stride) {
            out << px(t + 1, std::max(0.0, agg.mean[t] - agg.ci_half[t])) << ' ';
        }
        out << "\"/>\n";

        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (int t = 0; t < horizon; t += stride) out << px(t + 1, agg.mean[t]) << ' ';
        out << px(horizon, agg.mean[horizon - 1]);
        out << "\"/>\n";
    }

    // legend
    double ly = top + 12;
    for (std::size_t p = 0; p < result.policies.size(); ++p) {
        const char* color = kPalette[p % kPaletteSize];
        out << "<line x1=\"" << (left + 14) << "\" y1=\"" << ly << "\" x2=\"" << (left + 44)
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2.4\"/>\n";
        out << "<text x=\"" << (left + 50) << "\" y=\"" << (ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << result.policies[p].label
            << "</text>\n";
        ly += 17;
    }

    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string format_run_header(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "nsdlab run\n";
    out << "source: " << cfg.source_name << '\n';
    out << "master seed: " << cfg.master_seed << '\n';
    out << "replications: " << cfg.replications << '\n';
    out << "delta: " << format_double(cfg.delta) << '\n';
    out << "threads: " << cfg.threads << '\n';
    out << "indexing: rounds are 1-based, actions and signals 0-based\n";
    for (const ExperimentUnit& unit : cfg.units) {
        out << "unit " << unit.label << ":\n";
        const NsdInstance& inst = unit.base;
        out << "  K=" << inst.num_actions << " S=" << inst.num_signals << " T=" << inst.horizon
            << '\n';
        out << "  theta:";
        for (double v : inst.theta) out << ' ' << format_double(v);
        out << '\n';
        if (inst.delay.is_constant()) {
            out << "  delay: constant " << inst.delay.constant_delay() << '\n';
        } else {
            out << "  delay: geometric p=" << format_double(inst.delay.geometric_p()) << '\n';
        }
        if (!unit.change_rounds.empty()) {
            out << "  change rounds:";
            for (int r : unit.change_rounds) out << ' ' << r;
            if (unit.pinned_shifts) {
                out << "  pinned shifts:";
                for (int r : *unit.pinned_shifts) out << ' ' << r;
            }
            out << '\n';
        }
        if (inst.mixture) {
            out << "  mixture alpha=" << format_double(inst.mixture->alpha) << " mu:";
            for (double v : inst.mixture->mu[0]) out << ' ' << format_double(v);
            out << '\n';
        }
        out << "  policies:";
        for (const PolicySpec& s : unit.policies) {
            out << ' ' << s.effective_label();
            if (s.window) out << "(W=" << *s.window << ')';
        }
        out << '\n';
    }
    return out.str();
}

std::string format_summary_table(const std::vector<UnitResult>& results) {
    std::ostringstream out;
    out << "final mean cumulative regret (+/- 95% half-width)\n";
    for (const UnitResult& unit : results) {
        out << "unit " << unit.label << ":\n";
        for (const PolicyAggregate& agg : unit.policies) {
            out << "  " << agg.label;
            for (std::size_t pad = agg.label.size(); pad < 18; ++pad) out << ' ';
            out << format_double(agg.final_mean(), "%10.2f") << " +/- "
                << format_double(agg.final_ci_half(), "%.2f") << '\n';
        }
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out = open_or_throw(path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace nsd
