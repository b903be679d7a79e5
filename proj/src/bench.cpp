// Copyright 2026 The hydraq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hydraq/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "hydraq/errors.hpp"

namespace hydraq {

namespace fs = std::filesystem;

namespace {

void check_pair(std::span<const double> y, std::span<const double> yhat,
                std::size_t min_size) {
    if (y.size() != yhat.size()) {
        throw ShapeError("metric inputs differ in length: " +
                         std::to_string(y.size()) + " vs " +
                         std::to_string(yhat.size()));
    }
    if (y.size() < min_size) {
        throw ShapeError("metric needs at least " + std::to_string(min_size) +
                         " values");
    }
}

std::string fmt(const char *pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string model_name(ModelKind kind) { return std::string(to_string(kind)); }
std::string task_name(Task task) { return std::string(to_string(task)); }

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

const char *colour(ModelKind kind) {
    switch (kind) {
    case ModelKind::Boosted:
        return "#1f77b4";
    case ModelKind::Qsm:
        return "#d62728";
    case ModelKind::SuSymmetric:
        return "#2ca02c";
    }
    return "#000000";
}

int rank(ModelKind kind) {
    switch (kind) {
    case ModelKind::Boosted:
        return 0;
    case ModelKind::Qsm:
        return 1;
    case ModelKind::SuSymmetric:
        return 2;
    }
    return 3;
}

constexpr double kPlotSize = 420.0;
constexpr double kMargin = 50.0;
constexpr std::size_t kBins = 20;

std::string svg_open(const std::string &title) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlotSize
      << "\" height=\"" << kPlotSize << "\" viewBox=\"0 0 " << kPlotSize << ' '
      << kPlotSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kPlotSize / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    return s.str();
}

std::string svg_axes(const std::string &xlabel, const std::string &ylabel,
                     double xlo, double xhi, double ylo, double yhi) {
    const double lo = kMargin;
    const double hi = kPlotSize - kMargin;
    std::ostringstream s;
    s << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << lo << "\" y1=\"" << hi << "\" x2=\"" << hi
      << "\" y2=\"" << hi << "\"/>\n"
      << "<line x1=\"" << lo << "\" y1=\"" << hi << "\" x2=\"" << lo
      << "\" y2=\"" << lo << "\"/>\n"
      << "</g>\n"
      << "<g font-family=\"sans-serif\" font-size=\"10\">\n"
      << "<text x=\"" << lo << "\" y=\"" << hi + 14 << "\">"
      << fmt("%.3g", xlo) << "</text>\n"
      << "<text x=\"" << hi << "\" y=\"" << hi + 14
      << "\" text-anchor=\"end\">" << fmt("%.3g", xhi) << "</text>\n"
      << "<text x=\"" << lo - 4 << "\" y=\"" << hi
      << "\" text-anchor=\"end\">" << fmt("%.3g", ylo) << "</text>\n"
      << "<text x=\"" << lo - 4 << "\" y=\"" << lo + 8
      << "\" text-anchor=\"end\">" << fmt("%.3g", yhi) << "</text>\n"
      << "<text x=\"" << kPlotSize / 2 << "\" y=\"" << kPlotSize - 12
      << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
      << "<text x=\"14\" y=\"" << kPlotSize / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << kPlotSize / 2 << ")\">" << ylabel << "</text>\n"
      << "</g>\n";
    return s.str();
}

std::string svg_legend(std::span<const PlotSeries> series) {
    std::ostringstream s;
    double y = kMargin + 4;
    for (const auto &p : series) {
        s << "<rect x=\"" << kMargin + 8 << "\" y=\"" << y
          << "\" width=\"10\" height=\"10\" fill=\"" << colour(p.model)
          << "\"/>\n"
          << "<text x=\"" << kMargin + 22 << "\" y=\"" << y + 9
          << "\" font-family=\"sans-serif\" font-size=\"10\">"
          << model_name(p.model) << "</text>\n";
        y += 14;
    }
    return s.str();
}

double to_pixel(double v, double lo, double hi, bool flip) {
    const double span = kPlotSize - 2 * kMargin;
    const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    return flip ? kPlotSize - kMargin - t * span : kMargin + t * span;
}

struct Histogram {
    double lo = -1.0;
    double hi = 1.0;
    std::vector<std::vector<std::size_t>> counts; // per series
};

Histogram histogram(std::span<const PlotSeries> series) {
    double m = 0.0;
    for (const auto &p : series) {
        for (std::size_t i = 0; i < p.y.size(); ++i) {
            m = std::max(m, std::abs(p.y[i] - p.yhat[i]));
        }
    }
    Histogram h;
    if (m > 0.0) {
        h.lo = -m;
        h.hi = m;
    }
    const double width = (h.hi - h.lo) / static_cast<double>(kBins);
    for (const auto &p : series) {
        std::vector<std::size_t> c(kBins, 0);
        for (std::size_t i = 0; i < p.y.size(); ++i) {
            const double r = p.y[i] - p.yhat[i];
            auto b = static_cast<std::size_t>(std::floor((r - h.lo) / width));
            c[std::min(b, kBins - 1)] += 1;
        }
        h.counts.push_back(std::move(c));
    }
    return h;
}

std::vector<double> sorted_copy(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return s;
}

double quantile(const std::vector<double> &sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

void reject_unknown(const KvDocument &doc, const std::string &section,
                    const std::vector<std::string> &allowed) {
    const auto bad = doc.unknown_keys(section, allowed);
    if (!bad.empty()) {
        throw ConfigError(doc.where(section, bad.front()) + ": unknown key");
    }
}

} // namespace

double r_squared(std::span<const double> y, std::span<const double> yhat) {
    check_pair(y, yhat, 2);
    double mean = 0.0;
    for (double v : y) {
        mean += v;
    }
    mean /= static_cast<double>(y.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (!(ss_tot > 0.0)) {
        throw UndefinedVarianceError("R2 is undefined for a constant target");
    }
    return 1.0 - ss_res / ss_tot;
}

double mae(std::span<const double> y, std::span<const double> yhat) {
    check_pair(y, yhat, 1);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        s += std::abs(y[i] - yhat[i]);
    }
    return s / static_cast<double>(y.size());
}

Deltas tolerance_accuracy(std::span<const double> y,
                          std::span<const double> yhat, const Deltas &deltas) {
    check_pair(y, yhat, 1);
    if (!(deltas[0] > 0.0 && deltas[0] < deltas[1] && deltas[1] < deltas[2])) {
        throw ConfigError("tolerances must be positive and strictly increasing");
    }
    Deltas out{};
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = std::abs(y[i] - yhat[i]);
        for (std::size_t k = 0; k < 3; ++k) {
            if (e <= deltas[k]) {
                out[k] += 1.0;
            }
        }
    }
    for (auto &v : out) {
        v /= static_cast<double>(y.size());
    }
    return out;
}

Deltas task_deltas(Task task) {
    if (task == Task::Volume) {
        return {25.0, 50.0, 75.0};
    }
    return {1.0, 2.0, 3.0};
}

ResidualSet summarize_residuals(std::span<const double> y,
                                std::span<const double> yhat) {
    check_pair(y, yhat, 1);
    ResidualSet s;
    for (std::size_t i = 0; i < y.size(); ++i) {
        s.residuals.push_back(y[i] - yhat[i]);
    }
    const double n = static_cast<double>(y.size());
    for (double r : s.residuals) {
        s.mean += r;
    }
    s.mean /= n;
    for (double r : s.residuals) {
        s.std += (r - s.mean) * (r - s.mean);
    }
    s.std = std::sqrt(s.std / n);
    const auto sorted = sorted_copy(s.residuals);
    const double qs[] = {0.05, 0.25, 0.5, 0.75, 0.95};
    for (std::size_t k = 0; k < 5; ++k) {
        s.quantiles[k] = quantile(sorted, qs[k]);
    }
    return s;
}

MetricRow score(Task task, ModelKind model, std::span<const double> y,
                std::span<const double> yhat) {
    MetricRow row;
    row.task = task;
    row.model = model;
    row.r2 = r_squared(y, yhat);
    row.mae = mae(y, yhat);
    row.accuracy = tolerance_accuracy(y, yhat, task_deltas(task));
    row.n_test = y.size();
    return row;
}

BenchConfig bench_config_from(const KvDocument &doc) {
    const std::vector<std::string> known{"data",  "bench", "split", "preprocess",
                                         "train", "qsm",   "su",    "boosted"};
    for (const auto &s : doc.sections()) {
        if (s.empty()) {
            reject_unknown(doc, s, {});
        } else if (std::find(known.begin(), known.end(), s) == known.end()) {
            throw ConfigError(doc.source() + ": unknown section [" + s + "]");
        }
    }
    BenchConfig c;
    c.model = model_config_from(doc);

    reject_unknown(doc, "data", {"source", "path", "n", "seed", "noise"});
    const auto source = doc.get_string("data", "source", "synthetic");
    if (source == "synthetic") {
        c.data.kind = DataSource::Kind::Synthetic;
    } else if (source == "csv") {
        c.data.kind = DataSource::Kind::Csv;
        fs::path p = doc.get_string("data", "path");
        if (p.is_relative()) {
            p = fs::path(doc.source()).parent_path() / p;
        }
        c.data.path = p.string();
    } else {
        throw ConfigError(doc.where("data", "source") +
                          ": expected 'synthetic' or 'csv', got '" + source + "'");
    }
    const auto n = doc.get_int("data", "n", static_cast<std::int64_t>(c.data.n));
    if (n < 2) {
        throw ConfigError(doc.where("data", "n") + ": must be >= 2");
    }
    c.data.n = static_cast<std::size_t>(n);
    c.data.seed = static_cast<std::uint64_t>(
        doc.get_int("data", "seed", static_cast<std::int64_t>(c.data.seed)));
    c.data.noise = doc.get_double("data", "noise", c.data.noise);
    if (!(c.data.noise >= 0.0)) {
        throw ConfigError(doc.where("data", "noise") + ": must be >= 0");
    }

    reject_unknown(doc, "bench", {"tasks", "models", "out"});
    if (doc.has("bench", "tasks")) {
        c.tasks.clear();
        for (const auto &t : doc.get_list("bench", "tasks")) {
            try {
                c.tasks.push_back(parse_task(t));
            } catch (const ConfigError &e) {
                throw ConfigError(doc.where("bench", "tasks") + ": " + e.what());
            }
        }
    }
    if (doc.has("bench", "models")) {
        c.models.clear();
        for (const auto &m : doc.get_list("bench", "models")) {
            try {
                c.models.push_back(parse_model_kind(m));
            } catch (const ConfigError &e) {
                throw ConfigError(doc.where("bench", "models") + ": " + e.what());
            }
        }
    }
    if (c.tasks.empty() || c.models.empty()) {
        throw ConfigError(doc.source() + ": bench needs at least one task and model");
    }
    c.out = doc.get_string("bench", "out", c.out);
    return c;
}

BenchConfig load_bench_config(const std::string &path) {
    return bench_config_from(KvDocument::load(path));
}

Dataset load_data(const DataSource &source) {
    if (source.kind == DataSource::Kind::Csv) {
        return load_csv(source.path);
    }
    return generate(source.n, source.seed, source.noise);
}

bool BenchReport::ordering_failed() const {
    return std::any_of(ordering.begin(), ordering.end(), [](const auto &o) {
        return o.gap > kOrderingTolerance;
    });
}

std::vector<OrderingIssue> check_ordering(std::span<const MetricRow> rows) {
    std::vector<OrderingIssue> out;
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = 0; b < rows.size(); ++b) {
            const auto &hi = rows[a];
            const auto &lo = rows[b];
            if (hi.task != lo.task || hi.failed || lo.failed ||
                rank(hi.model) >= rank(lo.model)) {
                continue;
            }
            if (lo.r2 > hi.r2) {
                out.push_back({hi.task, hi.model, lo.model, lo.r2 - hi.r2});
            }
        }
    }
    return out;
}

const std::vector<ReferenceRow> &reference_rows() {
    using A = std::array<double, 5>;
    static const std::vector<ReferenceRow> rows{
        {Task::Usg, ModelKind::Boosted, A{0.91, 1.69, 0.41, 0.75, 0.80}},
        {Task::Usg, ModelKind::Qsm, A{0.84, 2.35, 0.29, 0.54, 0.75}},
        {Task::Usg, ModelKind::SuSymmetric, A{0.52, 4.57, 0.18, 0.29, 0.44}},
        {Task::Conductivity, ModelKind::Boosted, A{0.88, 1.74, 0.49, 0.69, 0.81}},
        {Task::Conductivity, ModelKind::Qsm, A{0.67, 3.61, 0.14, 0.37, 0.48}},
        {Task::Conductivity, ModelKind::SuSymmetric,
         A{0.49, 4.78, 0.16, 0.28, 0.42}},
        {Task::Volume, ModelKind::Boosted, A{0.90, 22.41, 0.66, 0.94, 0.96}},
        {Task::Volume, ModelKind::Qsm, A{0.89, 26.54, 0.61, 0.89, 0.95}},
        {Task::Volume, ModelKind::SuSymmetric, std::nullopt},
    };
    return rows;
}

std::string metrics_csv(std::span<const MetricRow> rows) {
    std::ostringstream s;
    s << "Task,Model,R2,MAE,Acc_delta1,Acc_delta2,Acc_delta3\n";
    for (const auto &r : rows) {
        s << task_name(r.task) << ',' << model_name(r.model);
        if (r.failed) {
            s << ",-,-,-,-,-\n";
            continue;
        }
        s << ',' << format_double(r.r2) << ',' << format_double(r.mae);
        for (double a : r.accuracy) {
            s << ',' << format_double(a);
        }
        s << '\n';
    }
    return s.str();
}

std::string reference_csv() {
    std::ostringstream s;
    s << "Task,Model,R2,MAE,Acc_delta1,Acc_delta2,Acc_delta3\n";
    for (const auto &r : reference_rows()) {
        s << task_name(r.task) << ',' << model_name(r.model);
        if (!r.values) {
            s << ",-,-,-,-,-\n";
            continue;
        }
        for (double v : *r.values) {
            s << ',' << fmt("%.2f", v);
        }
        s << '\n';
    }
    return s.str();
}

std::string metrics_text(const BenchReport &report) {
    std::ostringstream s;
    char line[160];
    const auto header = [&] {
        std::snprintf(line, sizeof line, "%-14s %-14s %8s %10s %8s %8s %8s\n",
                      "Task", "Model", "R2", "MAE", "Acc_d1", "Acc_d2",
                      "Acc_d3");
        s << line;
    };
    s << "Held-out metrics (synthetic or supplied data)\n";
    s << "Tolerances: usg (1, 2, 3); conductivity (1, 2, 3); volume (25, 50, 75)\n\n";
    header();
    for (const auto &r : report.rows) {
        if (r.failed) {
            std::snprintf(line, sizeof line,
                          "%-14s %-14s %8s %10s %8s %8s %8s\n",
                          task_name(r.task).c_str(), model_name(r.model).c_str(),
                          "-", "-", "-", "-", "-");
        } else {
            std::snprintf(line, sizeof line,
                          "%-14s %-14s %8.4f %10.4f %8.4f %8.4f %8.4f\n",
                          task_name(r.task).c_str(), model_name(r.model).c_str(),
                          r.r2, r.mae, r.accuracy[0], r.accuracy[1],
                          r.accuracy[2]);
        }
        s << line;
    }
    for (const auto &r : report.rows) {
        if (r.failed) {
            s << "\nFAILED " << task_name(r.task) << '/' << model_name(r.model)
              << ": " << r.failure;
        }
    }

    s << "\n\nOrdering check (boosted >= qsm >= su_symmetric by R2, "
      << "tolerance " << fmt("%.2f", kOrderingTolerance) << "): ";
    if (report.ordering.empty()) {
        s << "ok\n";
    } else {
        s << (report.ordering_failed() ? "FAILED\n" : "warnings\n");
        for (const auto &o : report.ordering) {
            s << "  WARNING " << task_name(o.task) << ": "
              << model_name(o.worse) << " R2 exceeds " << model_name(o.better)
              << " by " << fmt("%.4f", o.gap) << '\n';
        }
    }

    s << "\nPublished reference values (original clinical data; context only, "
         "not reproduced here)\n";
    header();
    for (const auto &r : reference_rows()) {
        if (!r.values) {
            std::snprintf(line, sizeof line,
                          "%-14s %-14s %8s %10s %8s %8s %8s\n",
                          task_name(r.task).c_str(), model_name(r.model).c_str(),
                          "-", "-", "-", "-", "-");
        } else {
            const auto &v = *r.values;
            std::snprintf(line, sizeof line,
                          "%-14s %-14s %8.2f %10.2f %8.2f %8.2f %8.2f\n",
                          task_name(r.task).c_str(), model_name(r.model).c_str(),
                          v[0], v[1], v[2], v[3], v[4]);
        }
        s << line;
    }
    return s.str();
}

std::string residuals_csv(std::span<const std::size_t> rows,
                          std::span<const double> y,
                          std::span<const double> yhat) {
    std::ostringstream s;
    s << "row,y_true,y_pred,residual\n";
    for (std::size_t i = 0; i < y.size(); ++i) {
        s << rows[i] << ',' << format_double(y[i]) << ','
          << format_double(yhat[i]) << ',' << format_double(y[i] - yhat[i])
          << '\n';
    }
    return s.str();
}

std::string scatter_csv(std::span<const PlotSeries> series) {
    std::ostringstream s;
    s << "model,y_true,y_pred\n";
    for (const auto &p : series) {
        for (std::size_t i = 0; i < p.y.size(); ++i) {
            s << model_name(p.model) << ',' << format_double(p.y[i]) << ','
              << format_double(p.yhat[i]) << '\n';
        }
    }
    return s.str();
}

std::string scatter_svg(Task task, std::span<const PlotSeries> series) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto &p : series) {
        for (std::size_t i = 0; i < p.y.size(); ++i) {
            lo = std::min({lo, p.y[i], p.yhat[i]});
            hi = std::max({hi, p.y[i], p.yhat[i]});
        }
    }
    if (!(lo < hi)) {
        lo = std::isfinite(lo) ? lo - 1.0 : 0.0;
        hi = lo + 2.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    std::ostringstream s;
    s << svg_open(task_name(task) + ": predicted vs true");
    s << svg_axes("true", "predicted", lo, hi, lo, hi);
    s << "<line x1=\"" << fmt("%.2f", to_pixel(lo, lo, hi, false)) << "\" y1=\""
      << fmt("%.2f", to_pixel(lo, lo, hi, true)) << "\" x2=\""
      << fmt("%.2f", to_pixel(hi, lo, hi, false)) << "\" y2=\""
      << fmt("%.2f", to_pixel(hi, lo, hi, true))
      << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto &p : series) {
        s << "<g fill=\"" << colour(p.model) << "\" fill-opacity=\"0.6\">\n";
        for (std::size_t i = 0; i < p.y.size(); ++i) {
            s << "<circle cx=\"" << fmt("%.2f", to_pixel(p.y[i], lo, hi, false))
              << "\" cy=\"" << fmt("%.2f", to_pixel(p.yhat[i], lo, hi, true))
              << "\" r=\"2\"/>\n";
        }
        s << "</g>\n";
    }
    s << svg_legend(series) << "</svg>\n";
    return s.str();
}

std::string errors_csv(std::span<const PlotSeries> series) {
    const auto h = histogram(series);
    const double width = (h.hi - h.lo) / static_cast<double>(kBins);
    std::ostringstream s;
    s << "model,bin_lo,bin_hi,count\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        for (std::size_t b = 0; b < kBins; ++b) {
            s << model_name(series[k].model) << ','
              << format_double(h.lo + width * static_cast<double>(b)) << ','
              << format_double(h.lo + width * static_cast<double>(b + 1)) << ','
              << h.counts[k][b] << '\n';
        }
    }
    return s.str();
}

std::string errors_svg(Task task, std::span<const PlotSeries> series) {
    const auto h = histogram(series);
    std::size_t peak = 1;
    for (const auto &c : h.counts) {
        peak = std::max(peak, *std::max_element(c.begin(), c.end()));
    }
    const double width = (h.hi - h.lo) / static_cast<double>(kBins);
    std::ostringstream s;
    s << svg_open(task_name(task) + ": residual distribution");
    s << svg_axes("residual (true - predicted)", "count", h.lo, h.hi, 0.0,
                  static_cast<double>(peak));
    for (std::size_t k = 0; k < series.size(); ++k) {
        s << "<polyline fill=\"none\" stroke=\"" << colour(series[k].model)
          << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t b = 0; b < kBins; ++b) {
            const double x0 = to_pixel(h.lo + width * static_cast<double>(b),
                                       h.lo, h.hi, false);
            const double x1 = to_pixel(h.lo + width * static_cast<double>(b + 1),
                                       h.lo, h.hi, false);
            const double y = to_pixel(static_cast<double>(h.counts[k][b]), 0.0,
                                      static_cast<double>(peak), true);
            s << fmt("%.2f", x0) << ',' << fmt("%.2f", y) << ' '
              << fmt("%.2f", x1) << ',' << fmt("%.2f", y) << ' ';
        }
        s << "\"/>\n";
    }
    s << svg_legend(series) << "</svg>\n";
    return s.str();
}

BenchReport run_benchmark(const BenchConfig &config, const Dataset &data) {
    const fs::path out = config.out;
    fs::create_directories(out);
    const auto parts =
        split(data.size(), config.model.test_fraction, config.model.split_seed);
    const Dataset test = data.subset(parts.test);
    const Matrix test_x = test.features();

    BenchReport report;
    for (Task task : config.tasks) {
        const auto y = test.target(task);
        std::vector<PlotSeries> series;
        for (ModelKind kind : config.models) {
            const std::string stem = task_name(task) + "_" + model_name(kind);
            MetricRow row;
            row.task = task;
            row.model = kind;
            row.n_test = y.size();
            try {
                const auto bundle = build_and_train(kind, data, task, config.model);
                const auto yhat = predict(bundle, test_x);
                row = score(task, kind, y, yhat);
                write_file(out / (stem + "_residuals.csv"),
                           residuals_csv(parts.test, y, yhat));
                if (!bundle.metadata.loss_history.empty()) {
                    write_file(out / (stem + "_loss.csv"),
                               loss_history_csv(bundle.metadata.loss_history));
                }
                if (!bundle.search_log.empty()) {
                    std::ostringstream log;
                    log << "trial,num_trees,max_depth,shrinkage,min_leaf,"
                           "subsample,validation_mse\n";
                    for (const auto &t : bundle.search_log) {
                        log << t.index << ',' << t.params.num_trees << ','
                            << t.params.max_depth << ','
                            << format_double(t.params.shrinkage) << ','
                            << t.params.min_leaf << ','
                            << format_double(t.params.subsample) << ','
                            << format_double(t.validation_mse) << '\n';
                    }
                    write_file(out / (stem + "_search.csv"), log.str());
                }
                series.push_back({kind, y, yhat});
            } catch (const DivergenceError &e) {
                row.failed = true;
                row.failure = e.what();
            } catch (const UndefinedVarianceError &e) {
                row.failed = true;
                row.failure = e.what();
            }
            report.rows.push_back(row);
        }
        const std::string t = task_name(task);
        write_file(out / (t + "_scatter.csv"), scatter_csv(series));
        write_file(out / (t + "_scatter.svg"), scatter_svg(task, series));
        write_file(out / (t + "_errors.csv"), errors_csv(series));
        write_file(out / (t + "_errors.svg"), errors_svg(task, series));
    }
    report.ordering = check_ordering(report.rows);
    write_file(out / "metrics.csv", metrics_csv(report.rows));
    write_file(out / "metrics.txt", metrics_text(report));
    write_file(out / "reference_table3.csv", reference_csv());
    return report;
}

GradcheckSummary gradient_check(std::size_t circuits, std::size_t draws,
                                std::uint64_t seed, double h) {
    constexpr double kPi = std::numbers::pi;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> qubits(2, 4);
    std::uniform_int_distribution<std::size_t> depth(1, 3);
    std::uniform_int_distribution<int> pattern(0, 3);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    GradcheckSummary out;
    out.circuits = circuits;
    out.draws = draws;
    for (std::size_t c = 0; c < circuits; ++c) {
        const std::size_t k = qubits(rng);
        const std::size_t layers = depth(rng);
        const std::size_t reuploads = depth(rng);
        const auto circuit =
            build_qsm(k, layers, reuploads,
                      static_cast<EntanglerPattern>(pattern(rng)), per_qubit_z(k));
        const HeadSpec head{HeadKind::Linear, k, 1.0 + unit(rng), unit(rng)};
        for (std::size_t d = 0; d < draws; ++d) {
            std::vector<double> f(k);
            for (auto &v : f) {
                v = angle(rng);
            }
            std::vector<double> p(circuit.num_parameters() + head.num_parameters());
            for (std::size_t i = 0; i < p.size(); ++i) {
                p[i] = i < circuit.num_parameters() ? angle(rng) : unit(rng);
            }
            const double target = unit(rng);
            const auto ps = parameter_shift_gradient(circuit, f, p, head, target);
            const auto fd = finite_difference_gradient(circuit, f, p, head, target, h);
            for (std::size_t i = 0; i < ps.size(); ++i) {
                out.max_deviation = std::max(out.max_deviation, std::abs(ps[i] - fd[i]));
            }
            ++out.gradients;
        }
    }
    return out;
}

} // namespace hydraq
