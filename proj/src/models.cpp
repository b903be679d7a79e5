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

#include "hydraq/models.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hydraq/errors.hpp"
#include "json.hpp"

namespace hydraq {

using nlohmann::json;

namespace {

std::string range_text(Range<std::size_t> r) {
    return std::to_string(r.lo) + ", " + std::to_string(r.hi);
}

std::string range_text(Range<double> r) {
    return format_double(r.lo) + ", " + format_double(r.hi);
}

template <typename T>
Range<T> read_range(const KvDocument &doc, const std::string &key,
                    Range<T> fallback) {
    if (!doc.has("boosted", key)) {
        return fallback;
    }
    const auto items = doc.get_list("boosted", key);
    if (items.size() != 2) {
        throw ConfigError(doc.where("boosted", key) +
                          ": expected 'low, high'");
    }
    Range<T> out{};
    T *slots[] = {&out.lo, &out.hi};
    for (int i = 0; i < 2; ++i) {
        if constexpr (std::is_same_v<T, double>) {
            const auto v = parse_double(items[i]);
            if (!v) {
                throw ConfigError(doc.where("boosted", key) +
                                  ": not a number: '" + items[i] + "'");
            }
            *slots[i] = *v;
        } else {
            const auto v = parse_int(items[i]);
            if (!v || *v < 0) {
                throw ConfigError(doc.where("boosted", key) +
                                  ": not a non-negative integer: '" +
                                  items[i] + "'");
            }
            *slots[i] = static_cast<T>(*v);
        }
    }
    return out;
}

std::size_t read_count(const KvDocument &doc, const std::string &section,
                       const std::string &key, std::size_t fallback) {
    const auto v = doc.get_int(section, key, static_cast<std::int64_t>(fallback));
    if (v < 0) {
        throw ConfigError(doc.where(section, key) + ": must be >= 0");
    }
    return static_cast<std::size_t>(v);
}

void reject_unknown(const KvDocument &doc, const std::string &section,
                    const std::vector<std::string> &allowed) {
    const auto bad = doc.unknown_keys(section, allowed);
    if (!bad.empty()) {
        throw ConfigError(doc.where(section, bad.front()) + ": unknown key");
    }
}

CircuitSpec make_circuit(ModelKind kind, std::size_t num_features,
                         const ModelConfig &config) {
    if (kind == ModelKind::Qsm) {
        return build_qsm(num_features, config.qsm_layers, config.qsm_reuploads,
                         config.qsm_entangler, per_qubit_z(num_features));
    }
    return build_su_symmetric(num_features, config.su_reuploads,
                              config.su_blocks);
}

[[noreturn]] void missing(const std::string &what) {
    throw IntegrityError("bundle: missing or malformed field '" + what + "'");
}

const json &field(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        missing(key);
    }
    return j.at(key);
}

template <typename T> T read(const json &j, const char *key) {
    try {
        return field(j, key).get<T>();
    } catch (const json::exception &) {
        missing(key);
    }
}

json ensemble_to_json(const BoostedEnsemble &m) {
    json trees = json::array();
    for (const auto &t : m.trees) {
        json f = json::array(), th = json::array(), l = json::array(),
             r = json::array(), v = json::array();
        for (const auto &n : t.nodes) {
            f.push_back(n.feature);
            th.push_back(n.threshold);
            l.push_back(n.left);
            r.push_back(n.right);
            v.push_back(n.value);
        }
        trees.push_back({{"feature", f},
                         {"threshold", th},
                         {"left", l},
                         {"right", r},
                         {"value", v}});
    }
    return {{"num_features", m.num_features},
            {"base_prediction", m.base_prediction},
            {"shrinkage", m.shrinkage},
            {"trees", trees}};
}

BoostedEnsemble ensemble_from_json(const json &j) {
    BoostedEnsemble m;
    m.num_features = read<std::size_t>(j, "num_features");
    m.base_prediction = read<double>(j, "base_prediction");
    m.shrinkage = read<double>(j, "shrinkage");
    for (const auto &t : field(j, "trees")) {
        const auto f = read<std::vector<int>>(t, "feature");
        const auto th = read<std::vector<double>>(t, "threshold");
        const auto l = read<std::vector<int>>(t, "left");
        const auto r = read<std::vector<int>>(t, "right");
        const auto v = read<std::vector<double>>(t, "value");
        const auto n = f.size();
        if (n == 0 || th.size() != n || l.size() != n || r.size() != n ||
            v.size() != n) {
            missing("trees");
        }
        RegressionTree tree;
        for (std::size_t k = 0; k < n; ++k) {
            const bool split = f[k] >= 0;
            const auto in_range = [&](int idx) {
                return idx > static_cast<int>(k) && idx < static_cast<int>(n);
            };
            if (split && (static_cast<std::size_t>(f[k]) >= m.num_features ||
                          !in_range(l[k]) || !in_range(r[k]))) {
                missing("trees");
            }
            tree.nodes.push_back({f[k], th[k], l[k], r[k], v[k]});
        }
        m.trees.push_back(std::move(tree));
    }
    return m;
}

json pipeline_to_json(const PreprocessPipeline &p) {
    json j;
    j["feature_names"] = p.feature_names;
    j["standardizer"] = {{"means", p.standardizer.means},
                         {"stds", p.standardizer.stds}};
    if (p.pca) {
        std::vector<std::vector<double>> comps;
        for (std::size_t r = 0; r < p.pca->components.rows(); ++r) {
            const auto row = p.pca->components.row(r);
            comps.emplace_back(row.begin(), row.end());
        }
        j["pca"] = {{"mean", p.pca->mean},
                    {"components", comps},
                    {"eigenvalues", p.pca->eigenvalues},
                    {"retained", p.pca->retained},
                    {"alpha", p.pca->alpha}};
    } else {
        j["pca"] = nullptr;
    }
    if (p.angles) {
        j["angles"] = {{"mins", p.angles->mins}, {"maxs", p.angles->maxs}};
    } else {
        j["angles"] = nullptr;
    }
    return j;
}

PreprocessPipeline pipeline_from_json(const json &j) {
    PreprocessPipeline p;
    p.feature_names = read<std::vector<std::string>>(j, "feature_names");
    const auto &s = field(j, "standardizer");
    p.standardizer.means = read<std::vector<double>>(s, "means");
    p.standardizer.stds = read<std::vector<double>>(s, "stds");
    const std::size_t d = p.standardizer.means.size();
    if (p.standardizer.stds.size() != d || d == 0) {
        missing("standardizer");
    }
    const auto &pca = field(j, "pca");
    if (!pca.is_null()) {
        PcaParams q;
        q.mean = read<std::vector<double>>(pca, "mean");
        q.eigenvalues = read<std::vector<double>>(pca, "eigenvalues");
        q.retained = read<std::size_t>(pca, "retained");
        q.alpha = read<double>(pca, "alpha");
        const auto comps =
            read<std::vector<std::vector<double>>>(pca, "components");
        if (q.mean.size() != d || comps.size() != d || q.retained == 0) {
            missing("pca");
        }
        try {
            q.components = Matrix::from_rows(comps);
        } catch (const ShapeError &) {
            missing("pca.components");
        }
        if (q.components.cols() != q.retained) {
            missing("pca.components");
        }
        p.pca = std::move(q);
    }
    const auto &angles = field(j, "angles");
    if (!angles.is_null()) {
        AngleScalerParams a;
        a.mins = read<std::vector<double>>(angles, "mins");
        a.maxs = read<std::vector<double>>(angles, "maxs");
        if (a.mins.size() != p.output_dimension() ||
            a.maxs.size() != a.mins.size()) {
            missing("angles");
        }
        p.angles = std::move(a);
    }
    return p;
}

} // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::Boosted:
        return "boosted";
    case ModelKind::Qsm:
        return "qsm";
    case ModelKind::SuSymmetric:
        return "su_symmetric";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view text) {
    const auto t = trim(text);
    if (t == "boosted" || t == "classical") {
        return ModelKind::Boosted;
    }
    if (t == "qsm") {
        return ModelKind::Qsm;
    }
    if (t == "su_symmetric" || t == "su") {
        return ModelKind::SuSymmetric;
    }
    throw ConfigError("unknown model '" + std::string(t) +
                      "' (expected boosted, qsm or su_symmetric)");
}

ModelConfig model_config_from(const KvDocument &doc) {
    ModelConfig c;
    reject_unknown(doc, "split", {"test_fraction", "seed"});
    c.test_fraction = doc.get_double("split", "test_fraction", c.test_fraction);
    c.split_seed = static_cast<std::uint64_t>(
        doc.get_int("split", "seed", static_cast<std::int64_t>(c.split_seed)));

    reject_unknown(doc, "preprocess", {"alpha"});
    c.pca_alpha = doc.get_double("preprocess", "alpha", c.pca_alpha);

    reject_unknown(doc, "train",
                   {"epochs", "batch_size", "learning_rate", "seed", "patience"});
    c.train.epochs = static_cast<int>(doc.get_int("train", "epochs", c.train.epochs));
    c.train.batch_size = read_count(doc, "train", "batch_size", c.train.batch_size);
    c.train.learning_rate =
        doc.get_double("train", "learning_rate", c.train.learning_rate);
    c.train.seed = static_cast<std::uint64_t>(
        doc.get_int("train", "seed", static_cast<std::int64_t>(c.train.seed)));
    c.train.patience =
        static_cast<int>(doc.get_int("train", "patience", c.train.patience));

    reject_unknown(doc, "qsm", {"layers", "reuploads", "entangler", "head"});
    c.qsm_layers = read_count(doc, "qsm", "layers", c.qsm_layers);
    c.qsm_reuploads = read_count(doc, "qsm", "reuploads", c.qsm_reuploads);
    try {
        c.qsm_entangler = parse_entangler(doc.get_string(
            "qsm", "entangler", std::string(to_string(c.qsm_entangler))));
        c.qsm_head = parse_head_kind(
            doc.get_string("qsm", "head", std::string(to_string(c.qsm_head))));
        c.su_head = parse_head_kind(
            doc.get_string("su", "head", std::string(to_string(c.su_head))));
    } catch (const ConfigError &e) {
        throw ConfigError(doc.source() + ": " + e.what());
    }

    reject_unknown(doc, "su", {"reuploads", "blocks", "head"});
    c.su_reuploads = read_count(doc, "su", "reuploads", c.su_reuploads);
    c.su_blocks = read_count(doc, "su", "blocks", c.su_blocks);

    reject_unknown(doc, "boosted",
                   {"budget", "seed", "trees", "depth", "shrinkage", "min_leaf",
                    "subsample", "validation_fraction"});
    c.search.budget = read_count(doc, "boosted", "budget", c.search.budget);
    c.search.seed = static_cast<std::uint64_t>(doc.get_int(
        "boosted", "seed", static_cast<std::int64_t>(c.search.seed)));
    c.search.trees = read_range(doc, "trees", c.search.trees);
    c.search.depth = read_range(doc, "depth", c.search.depth);
    c.search.shrinkage = read_range(doc, "shrinkage", c.search.shrinkage);
    c.search.min_leaf = read_range(doc, "min_leaf", c.search.min_leaf);
    c.search.subsample = read_range(doc, "subsample", c.search.subsample);
    c.validation_fraction = doc.get_double("boosted", "validation_fraction",
                                           c.validation_fraction);

    try {
        c.train.validate();
        c.search.validate();
    } catch (const ConfigError &e) {
        throw ConfigError(doc.source() + ": " + e.what());
    }
    if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) {
        throw ConfigError(doc.where("split", "test_fraction") +
                          ": must lie in (0, 1)");
    }
    if (!(c.validation_fraction > 0.0 && c.validation_fraction < 1.0)) {
        throw ConfigError(doc.where("boosted", "validation_fraction") +
                          ": must lie in (0, 1)");
    }
    if (!(c.pca_alpha > 0.0 && c.pca_alpha <= 1.0)) {
        throw ConfigError(doc.where("preprocess", "alpha") +
                          ": must lie in (0, 1]");
    }
    return c;
}

std::string to_config_text(const ModelConfig &c) {
    std::ostringstream out;
    out << "[split]\n"
        << "test_fraction = " << format_double(c.test_fraction) << "\n"
        << "seed = " << c.split_seed << "\n\n"
        << "[preprocess]\n"
        << "alpha = " << format_double(c.pca_alpha) << "\n\n"
        << "[train]\n"
        << "epochs = " << c.train.epochs << "\n"
        << "batch_size = " << c.train.batch_size << "\n"
        << "learning_rate = " << format_double(c.train.learning_rate) << "\n"
        << "seed = " << c.train.seed << "\n"
        << "patience = " << c.train.patience << "\n\n"
        << "[qsm]\n"
        << "layers = " << c.qsm_layers << "\n"
        << "reuploads = " << c.qsm_reuploads << "\n"
        << "entangler = " << to_string(c.qsm_entangler) << "\n"
        << "head = " << to_string(c.qsm_head) << "\n\n"
        << "[su]\n"
        << "reuploads = " << c.su_reuploads << "\n"
        << "blocks = " << c.su_blocks << "\n"
        << "head = " << to_string(c.su_head) << "\n\n"
        << "[boosted]\n"
        << "budget = " << c.search.budget << "\n"
        << "seed = " << c.search.seed << "\n"
        << "trees = " << range_text(c.search.trees) << "\n"
        << "depth = " << range_text(c.search.depth) << "\n"
        << "shrinkage = " << range_text(c.search.shrinkage) << "\n"
        << "min_leaf = " << range_text(c.search.min_leaf) << "\n"
        << "subsample = " << range_text(c.search.subsample) << "\n"
        << "validation_fraction = " << format_double(c.validation_fraction)
        << "\n";
    return out.str();
}

std::string config_hash(const ModelConfig &config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : to_config_text(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void calibrate_head(HeadSpec &head, const CircuitSpec &circuit,
                    std::span<const double> targets) {
    if (targets.empty()) {
        throw DataError("cannot calibrate a head without targets");
    }
    double m_sum = 0.0;
    const auto &obs = circuit.measurement().observables;
    const std::size_t used = head.kind == HeadKind::Identity ? 1 : obs.size();
    for (std::size_t j = 0; j < used; ++j) {
        m_sum += obs[j].coefficient_bound();
    }
    const auto [lo, hi] = std::minmax_element(targets.begin(), targets.end());
    head.offset = (*hi + *lo) / 2.0;
    head.scale = m_sum > 0.0 ? (*hi - *lo) / (2.0 * m_sum) : 0.0;
}

ModelBundle build_and_train(ModelKind kind, const Dataset &data, Task task,
                            const ModelConfig &config) {
    const auto parts = split(data.size(), config.test_fraction, config.split_seed);
    const Dataset train_set = data.subset(parts.train);
    const Matrix raw = train_set.features();
    const auto y = train_set.target(task);

    ModelBundle bundle;
    bundle.kind = kind;
    bundle.task = task;
    bundle.metadata.seed = config.train.seed;
    bundle.metadata.split_seed = config.split_seed;
    bundle.metadata.test_fraction = config.test_fraction;
    bundle.metadata.num_rows = data.size();
    bundle.metadata.num_train = parts.train.size();
    bundle.metadata.config_hash = config_hash(config);

    if (kind == ModelKind::Boosted) {
        PipelineOptions opts;
        opts.use_pca = false;
        opts.use_angles = false;
        bundle.preprocessing = fit_pipeline(raw, opts, feature_names());
        const Matrix x = transform(bundle.preprocessing, raw);
        auto space = config.search;
        const auto search = random_search(space, x, y, config.validation_fraction);
        bundle.ensemble = fit_boosted(x, y, search.best, space.seed);
        bundle.search_log = search.trials;
        return bundle;
    }

    PipelineOptions opts;
    opts.alpha = config.pca_alpha;
    opts.min_components = 2;
    bundle.preprocessing = fit_pipeline(raw, opts, feature_names());
    const Matrix x = transform(bundle.preprocessing, raw);

    auto circuit = make_circuit(kind, x.cols(), config);
    HeadSpec head;
    head.kind = kind == ModelKind::Qsm ? config.qsm_head : config.su_head;
    head.num_outputs = circuit.num_observables();
    head.validate();
    calibrate_head(head, circuit, y);
    auto params = initial_parameters(circuit, head, config.train.seed);
    HybridModel model{std::move(circuit), head, std::move(params)};
    auto result = train(model, x, y, config.train);
    model.params = std::move(result.params);
    bundle.metadata.loss_history = std::move(result.loss_history);
    bundle.quantum = std::move(model);
    return bundle;
}

DatasetSplit bundle_split(const ModelBundle &bundle, std::size_t n) {
    return split(n, bundle.metadata.test_fraction, bundle.metadata.split_seed);
}

std::vector<double> predict(const ModelBundle &bundle, const Matrix &raw) {
    if (raw.cols() != bundle.preprocessing.input_dimension()) {
        throw ShapeError("bundle expects " +
                         std::to_string(bundle.preprocessing.input_dimension()) +
                         " features, got " + std::to_string(raw.cols()));
    }
    const Matrix x = transform(bundle.preprocessing, raw);
    if (bundle.kind == ModelKind::Boosted) {
        if (!bundle.ensemble) {
            throw IntegrityError("boosted bundle has no ensemble");
        }
        return predict(*bundle.ensemble, x);
    }
    if (!bundle.quantum) {
        throw IntegrityError("quantum bundle has no circuit model");
    }
    return bundle.quantum->predict(x);
}

double predict_one(const ModelBundle &bundle, std::span<const double> raw) {
    Matrix m(1, raw.size());
    std::copy(raw.begin(), raw.end(), m.row(0).begin());
    return predict(bundle, m)[0];
}

std::string bundle_to_json(const ModelBundle &b) {
    json j;
    j["format"] = "hydraq.bundle";
    j["version"] = kBundleVersion;
    j["kind"] = to_string(b.kind);
    j["task"] = to_string(b.task);
    j["preprocessing"] = pipeline_to_json(b.preprocessing);
    if (b.quantum) {
        const auto &q = *b.quantum;
        j["circuit"] = circuit_to_config(q.circuit);
        j["head"] = {{"kind", to_string(q.head.kind)},
                     {"num_outputs", q.head.num_outputs},
                     {"scale", q.head.scale},
                     {"offset", q.head.offset}};
        j["parameters"] = q.params;
    }
    if (b.ensemble) {
        j["ensemble"] = ensemble_to_json(*b.ensemble);
    }
    const auto &m = b.metadata;
    j["metadata"] = {{"seed", m.seed},
                     {"split_seed", m.split_seed},
                     {"test_fraction", m.test_fraction},
                     {"num_rows", m.num_rows},
                     {"num_train", m.num_train},
                     {"config_hash", m.config_hash},
                     {"loss_history", m.loss_history}};
    return j.dump(1) + "\n";
}

ModelBundle bundle_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw IntegrityError(std::string("bundle is not valid JSON: ") + e.what());
    }
    if (read<std::string>(j, "format") != "hydraq.bundle") {
        throw IntegrityError("not a hydraq bundle");
    }
    const int version = read<int>(j, "version");
    if (version != kBundleVersion) {
        throw IntegrityError("unsupported bundle version " +
                             std::to_string(version));
    }
    ModelBundle b;
    try {
        b.kind = parse_model_kind(read<std::string>(j, "kind"));
        b.task = parse_task(read<std::string>(j, "task"));
    } catch (const ConfigError &e) {
        throw IntegrityError(std::string("bundle: ") + e.what());
    }
    b.preprocessing = pipeline_from_json(field(j, "preprocessing"));

    if (b.kind == ModelKind::Boosted) {
        b.ensemble = ensemble_from_json(field(j, "ensemble"));
        if (b.ensemble->num_features != b.preprocessing.output_dimension()) {
            missing("ensemble.num_features");
        }
    } else {
        try {
            auto circuit = circuit_from_config(read<std::string>(j, "circuit"));
            const auto &h = field(j, "head");
            HeadSpec head;
            head.kind = parse_head_kind(read<std::string>(h, "kind"));
            head.num_outputs = read<std::size_t>(h, "num_outputs");
            head.scale = read<double>(h, "scale");
            head.offset = read<double>(h, "offset");
            head.validate();
            auto params = read<std::vector<double>>(j, "parameters");
            if (params.size() != circuit.num_parameters() + head.num_parameters() ||
                head.num_outputs != circuit.num_observables()) {
                missing("parameters");
            }
            b.quantum = HybridModel{std::move(circuit), head, std::move(params)};
        } catch (const ConfigError &e) {
            throw IntegrityError(std::string("bundle: ") + e.what());
        }
    }
    const auto &m = field(j, "metadata");
    b.metadata.seed = read<std::uint64_t>(m, "seed");
    b.metadata.split_seed = read<std::uint64_t>(m, "split_seed");
    b.metadata.test_fraction = read<double>(m, "test_fraction");
    b.metadata.num_rows = read<std::size_t>(m, "num_rows");
    b.metadata.num_train = read<std::size_t>(m, "num_train");
    b.metadata.config_hash = read<std::string>(m, "config_hash");
    b.metadata.loss_history = read<std::vector<double>>(m, "loss_history");
    return b;
}

void save_bundle(const std::string &path, const ModelBundle &bundle) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open " + path + " for writing");
    }
    out << bundle_to_json(bundle);
    if (!out) {
        throw DataError("failed writing " + path);
    }
}

ModelBundle load_bundle(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open bundle " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return bundle_from_json(buf.str());
}

} // namespace hydraq
