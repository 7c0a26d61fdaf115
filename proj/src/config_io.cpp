#include "dynerg/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dynerg {

namespace {

constexpr const char* kConfigSchemaText = R"JSON({
  "$id": "dynerg-config",
  "type": "object",
  "additionalProperties": false,
  "required": ["n_vertices", "motifs", "alpha", "lambda_on", "lambda_off", "horizon", "grid", "replications", "seed"],
  "properties": {
    "n_vertices": {"type": "integer", "minimum": 1},
    "motifs": {
      "type": "array",
      "minItems": 1,
      "items": {
        "anyOf": [
          {"type": "string"},
          {
            "type": "object",
            "additionalProperties": false,
            "required": ["vertices", "edges"],
            "properties": {
              "vertices": {"type": "integer", "minimum": 1},
              "edges": {
                "type": "array",
                "items": {
                  "type": "array",
                  "minItems": 2,
                  "maxItems": 2,
                  "items": {"type": "integer", "minimum": 1}
                }
              }
            }
          }
        ]
      }
    },
    "alpha": {"type": "string"},
    "lambda_on": {"type": "number", "exclusiveMinimum": 0},
    "lambda_off": {"type": "number", "exclusiveMinimum": 0},
    "horizon": {"type": "number", "exclusiveMinimum": 0},
    "grid": {"type": "array", "minItems": 1, "items": {"type": "number", "minimum": 0}},
    "replications": {"type": "integer", "minimum": 1},
    "seed": {"type": "integer", "minimum": 0},
    "recount_every": {"type": "integer", "minimum": 0},
    "threads": {"type": "integer", "minimum": 1},
    "z_threshold": {"type": "number", "exclusiveMinimum": 0}
  }
})JSON";

constexpr const char* kReportSchemaText = R"JSON({
  "$id": "dynerg-report",
  "type": "object",
  "additionalProperties": false,
  "required": ["alpha", "regime", "lambda_on", "lambda_off", "horizon", "grid", "coordinates", "motifs", "pairs", "sigma", "example"],
  "properties": {
    "alpha": {"type": "string"},
    "regime": {"type": "string", "enum": ["constant-one", "power-law"]},
    "lambda_on": {"type": "number"},
    "lambda_off": {"type": "number"},
    "horizon": {"type": "number"},
    "grid": {"type": "array", "items": {"type": "number"}},
    "coordinates": {"type": "array", "items": {"type": "string"}},
    "motifs": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "vertices", "edges", "automorphisms", "f_exponent", "opt_exponent", "normalizer_exponent", "ocs", "kernel"],
        "properties": {
          "name": {"type": "string"},
          "vertices": {"type": "integer"},
          "edges": {"type": "array"},
          "automorphisms": {"type": "integer"},
          "f_exponent": {"type": "string"},
          "opt_exponent": {"type": "string"},
          "normalizer_exponent": {"type": "string"},
          "ocs": {"type": "array"},
          "kernel": {"type": "array"}
        }
      }
    },
    "pairs": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["i", "j", "equioptimal"],
        "properties": {
          "i": {"type": "integer"},
          "j": {"type": "integer"},
          "equioptimal": {"type": "boolean"},
          "ocs": {"type": "array"},
          "pairing_constants": {"type": "array"}
        }
      }
    },
    "sigma": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "example": {
      "anyOf": [
        {"type": "null"},
        {
          "type": "object",
          "required": ["alpha", "f_exponent_wedge", "f_exponent_triangle", "opt_exponent_wedge", "opt_exponent_triangle", "normalizer_exponent_wedge", "normalizer_exponent_triangle", "ocs_wedge", "ocs_triangle", "ocs_pair", "kernel_wedge", "kernel_triangle", "limit_probability", "limit_decay_rate", "correlation_regime"]
        }
      ]
    }
  }
})JSON";

constexpr const char* kSummarySchemaText = R"JSON({
  "$id": "dynerg-summary",
  "type": "object",
  "additionalProperties": false,
  "required": ["n_vertices", "alpha", "regime", "replications", "seed", "grid", "motif_names", "coordinates", "mean", "mean_se", "mean_max_abs_z", "covariance", "covariance_se", "correlation", "skewness", "kurtosis", "reference_exact", "reference_limit", "z_exact", "max_abs_z_exact", "z_limit", "max_abs_z_limit", "z_threshold", "pass", "notes"],
  "properties": {
    "n_vertices": {"type": "integer"},
    "alpha": {"type": "string"},
    "regime": {"type": "string", "enum": ["constant-one", "power-law"]},
    "replications": {"type": "integer"},
    "seed": {"type": "integer"},
    "grid": {"type": "array", "items": {"type": "number"}},
    "motif_names": {"type": "array", "items": {"type": "string"}},
    "coordinates": {"type": "array", "items": {"type": "string"}},
    "mean": {"type": "array", "items": {"type": "number"}},
    "mean_se": {"type": "array", "items": {"type": "number"}},
    "mean_max_abs_z": {"type": "number"},
    "covariance": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "covariance_se": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "correlation": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "skewness": {"type": "array", "items": {"type": "number"}},
    "kurtosis": {"type": "array", "items": {"type": "number"}},
    "reference_exact": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "reference_limit": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "z_exact": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "max_abs_z_exact": {"type": "number"},
    "z_limit": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "max_abs_z_limit": {"type": "number"},
    "z_threshold": {"type": "number"},
    "pass": {"type": "boolean"},
    "notes": {"type": "array", "items": {"type": "string"}}
  }
})JSON";

const Json& parsed_schema(const char* text) {
    static std::map<const char*, Json> cache;
    auto it = cache.find(text);
    if (it == cache.end()) it = cache.emplace(text, Json::parse(text)).first;
    return it->second;
}

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("schema violation at " + path + ": " + what);
}

bool type_matches(const Json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "integer") return doc.is_number_integer();
    if (type == "number") return doc.is_number();
    if (type == "boolean") return doc.is_boolean();
    if (type == "null") return doc.is_null();
    throw std::invalid_argument("unknown schema type: " + type);
}

LabeledGraph normalize_labels(const LabeledGraph& g) {
    const auto& verts = g.vertices();
    auto rank = [&](int label) {
        return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), label) -
                                verts.begin()) +
               1;
    };
    std::vector<int> new_verts(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) new_verts[i] = static_cast<int>(i) + 1;
    std::vector<Edge> new_edges;
    for (const auto& [a, b] : g.edges()) {
        int ra = rank(a), rb = rank(b);
        new_edges.push_back({std::min(ra, rb), std::max(ra, rb)});
    }
    return LabeledGraph(std::move(new_verts), std::move(new_edges));
}

}  // namespace

const Json& config_schema() { return parsed_schema(kConfigSchemaText); }
const Json& report_schema() { return parsed_schema(kReportSchemaText); }
const Json& summary_schema() { return parsed_schema(kSummarySchemaText); }

void validate_schema(const Json& doc, const Json& schema, const std::string& path) {
    if (schema.contains("anyOf")) {
        std::string errors;
        for (const Json& option : schema.at("anyOf")) {
            try {
                validate_schema(doc, option, path);
                return;
            } catch (const std::invalid_argument& e) {
                errors += std::string(errors.empty() ? "" : "; ") + e.what();
            }
        }
        schema_fail(path, "no alternative matched (" + errors + ")");
    }
    if (schema.contains("type") && !type_matches(doc, schema.at("type").get<std::string>()))
        schema_fail(path, "expected type " + schema.at("type").get<std::string>());
    if (schema.contains("enum")) {
        bool found = false;
        for (const Json& allowed : schema.at("enum")) found = found || allowed == doc;
        if (!found) schema_fail(path, "value not in enum");
    }
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const Json& key : schema.at("required"))
                if (!doc.contains(key.get<std::string>()))
                    schema_fail(path, "missing required key " + key.get<std::string>());
        const Json props = schema.value("properties", Json::object());
        if (schema.value("additionalProperties", Json(true)) == Json(false))
            for (const auto& [key, value] : doc.items()) {
                (void)value;
                if (!props.contains(key)) schema_fail(path, "unknown key " + key);
            }
        for (const auto& [key, sub] : props.items())
            if (doc.contains(key)) validate_schema(doc.at(key), sub, path + "." + key);
    }
    if (doc.is_array()) {
        if (schema.contains("minItems") &&
            doc.size() < schema.at("minItems").get<std::size_t>())
            schema_fail(path, "too few items");
        if (schema.contains("maxItems") &&
            doc.size() > schema.at("maxItems").get<std::size_t>())
            schema_fail(path, "too many items");
        if (schema.contains("items"))
            for (std::size_t i = 0; i < doc.size(); ++i)
                validate_schema(doc[i], schema.at("items"),
                                path + "[" + std::to_string(i) + "]");
    }
    if (doc.is_number()) {
        const double x = doc.get<double>();
        if (schema.contains("minimum") && x < schema.at("minimum").get<double>())
            schema_fail(path, "below minimum");
        if (schema.contains("exclusiveMinimum") &&
            x <= schema.at("exclusiveMinimum").get<double>())
            schema_fail(path, "not above exclusive minimum");
    }
}

LabeledGraph motif_from_json(const Json& entry) {
    if (entry.is_string()) return normalize_labels(parse_graph(entry.get<std::string>()));
    const int n = entry.at("vertices").get<int>();
    std::vector<int> verts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) verts[static_cast<std::size_t>(i)] = i + 1;
    std::vector<Edge> edges;
    for (const Json& e : entry.at("edges")) {
        const int a = e.at(0).get<int>();
        const int b = e.at(1).get<int>();
        edges.push_back({std::min(a, b), std::max(a, b)});
    }
    return LabeledGraph(std::move(verts), std::move(edges));
}

Json motif_to_json(const LabeledGraph& motif) {
    const LabeledGraph g = normalize_labels(motif);
    Json edges = Json::array();
    for (const auto& [a, b] : g.edges()) edges.push_back(Json::array({a, b}));
    return Json{{"vertices", g.vertex_count()}, {"edges", std::move(edges)}};
}

std::string motif_display_name(const LabeledGraph& motif) {
    const Pattern p = canonical_form(motif);
    for (const std::string& name : preset_names())
        if (canonical_form(parse_graph(name)) == p) return name;
    return p.to_string();
}

Json pattern_to_json(const Pattern& pattern) {
    Json edges = Json::array();
    for (const auto& [a, b] : pattern.edges) edges.push_back(Json::array({a, b}));
    return Json{{"vertices", pattern.n_vertices}, {"edges", std::move(edges)}};
}

bool RunConfig::operator==(const RunConfig& o) const {
    return sim.n_vertices == o.sim.n_vertices && sim.motifs == o.sim.motifs &&
           sim.grid == o.sim.grid && sim.dynamics.lambda_on == o.sim.dynamics.lambda_on &&
           sim.dynamics.lambda_off_base == o.sim.dynamics.lambda_off_base &&
           sim.dynamics.regime.alpha == o.sim.dynamics.regime.alpha &&
           sim.dynamics.horizon == o.sim.dynamics.horizon &&
           sim.replications == o.sim.replications && sim.seed == o.sim.seed &&
           sim.recount_every == o.sim.recount_every && z_threshold == o.z_threshold &&
           threads == o.threads;
}

RunConfig parse_run_config(const Json& doc) {
    validate_schema(doc, config_schema());
    std::vector<LabeledGraph> motifs;
    for (const Json& entry : doc.at("motifs")) motifs.push_back(motif_from_json(entry));
    const ScalingRegime regime(parse_rational(doc.at("alpha").get<std::string>()));
    EdgeDynamics dynamics(doc.at("lambda_on").get<double>(),
                          doc.at("lambda_off").get<double>(), regime,
                          doc.at("horizon").get<double>());
    RunConfig config{SimConfig{doc.at("n_vertices").get<long>(), std::move(motifs),
                               doc.at("grid").get<std::vector<double>>(),
                               std::move(dynamics), doc.at("replications").get<long>(),
                               doc.at("seed").get<std::uint64_t>(),
                               doc.value("recount_every", 0L)},
                     doc.value("z_threshold", 5.0), doc.value("threads", 1)};
    config.sim.validate();
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("config is not valid JSON (" + path + "): " + e.what());
    }
    return parse_run_config(doc);
}

Json run_config_to_json(const RunConfig& config) {
    Json motifs = Json::array();
    for (const LabeledGraph& m : config.sim.motifs) motifs.push_back(motif_to_json(m));
    return Json{{"n_vertices", config.sim.n_vertices},
                {"motifs", std::move(motifs)},
                {"alpha", to_fraction_string(config.sim.dynamics.regime.alpha)},
                {"lambda_on", config.sim.dynamics.lambda_on},
                {"lambda_off", config.sim.dynamics.lambda_off_base},
                {"horizon", config.sim.dynamics.horizon},
                {"grid", config.sim.grid},
                {"replications", config.sim.replications},
                {"seed", config.sim.seed},
                {"recount_every", config.sim.recount_every},
                {"threads", config.threads},
                {"z_threshold", config.z_threshold}};
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw std::logic_error("double formatting failed");
    return std::string(buf, ptr);
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::string coordinate_label(const std::string& motif_name, double t) {
    return motif_name + "@" + format_double(t);
}

Json kernel_terms_to_json(const std::vector<KernelTerm>& terms) {
    Json out = Json::array();
    for (const KernelTerm& term : terms) {
        out.push_back(Json{{"pattern", pattern_to_json(term.pattern)},
                           {"coefficient_a", to_fraction_string(term.coefficient.a)},
                           {"coefficient_b", term.coefficient.b.str()},
                           {"p_power", term.p_power},
                           {"kappa_power", term.kappa_power}});
    }
    return out;
}

Json patterns_to_json(const std::vector<Pattern>& patterns) {
    Json out = Json::array();
    for (const Pattern& p : patterns) out.push_back(pattern_to_json(p));
    return out;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Json example_report_to_json(const ExampleReport& report) {
    return Json{{"alpha", to_fraction_string(report.alpha)},
                {"f_exponent_wedge", to_fraction_string(report.f_exponent_wedge)},
                {"f_exponent_triangle", to_fraction_string(report.f_exponent_triangle)},
                {"opt_exponent_wedge", to_fraction_string(report.opt_exponent_wedge)},
                {"opt_exponent_triangle", to_fraction_string(report.opt_exponent_triangle)},
                {"normalizer_exponent_wedge",
                 to_fraction_string(report.normalizer_exponent_wedge)},
                {"normalizer_exponent_triangle",
                 to_fraction_string(report.normalizer_exponent_triangle)},
                {"ocs_wedge", patterns_to_json(report.ocs_wedge)},
                {"ocs_triangle", patterns_to_json(report.ocs_triangle)},
                {"ocs_pair", patterns_to_json(report.ocs_pair)},
                {"kernel_wedge", kernel_terms_to_json(report.kernel_wedge)},
                {"kernel_triangle", kernel_terms_to_json(report.kernel_triangle)},
                {"limit_probability", report.limit_probability},
                {"limit_decay_rate", report.limit_decay_rate},
                {"correlation_regime", report.correlation_regime}};
}

Json build_analyze_report(const RunConfig& config) {
    const SimConfig& sim = config.sim;
    const ScalingRegime& regime = sim.dynamics.regime;
    const std::size_t m = sim.motifs.size();
    const std::size_t n_grid = sim.grid.size();

    Json motifs = Json::array();
    for (const LabeledGraph& H : sim.motifs) {
        const auto ocs_set = optimal_common_subgraphs(H, H, regime);
        const std::vector<Pattern> ocs(ocs_set.begin(), ocs_set.end());
        std::vector<KernelTerm> kernel;
        for (const Pattern& g : ocs)
            kernel.push_back(KernelTerm{limit_coefficient(H, g), g,
                                        H.edge_count() - g.n_edges(), g.n_edges()});
        const Json m_json = motif_to_json(H);
        motifs.push_back(
            Json{{"name", motif_display_name(H)},
                 {"vertices", m_json.at("vertices")},
                 {"edges", m_json.at("edges")},
                 {"automorphisms", automorphism_count(H)},
                 {"f_exponent", to_fraction_string(f_exponent(H, regime).value)},
                 {"opt_exponent",
                  to_fraction_string(optimal_exponent(H, H, regime).value)},
                 {"normalizer_exponent",
                  to_fraction_string(normalizer_exponent(H, regime))},
                 {"ocs", patterns_to_json(ocs)},
                 {"kernel", kernel_terms_to_json(kernel)}});
    }

    Json pairs = Json::array();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const bool eq = equioptimal(sim.motifs[i], sim.motifs[j], regime);
            Json entry{{"i", i}, {"j", j}, {"equioptimal", eq}};
            if (eq) {
                const auto ocs_set =
                    optimal_common_subgraphs(sim.motifs[i], sim.motifs[j], regime);
                entry["ocs"] = patterns_to_json({ocs_set.begin(), ocs_set.end()});
                Json constants = Json::array();
                for (const Pattern& g : ocs_set)
                    constants.push_back(
                        Json{{"pattern", pattern_to_json(g)},
                             {"closed_form",
                              to_fraction_string(pairing_constant(
                                  sim.motifs[i], sim.motifs[j], g,
                                  PairingMode::closed_form, &regime))}});
                entry["pairing_constants"] = std::move(constants);
            }
            pairs.push_back(std::move(entry));
        }
    }

    const LimitingCovariance sigma(sim.motifs, regime, sim.dynamics);
    const std::size_t dim = m * n_grid;
    Eigen::MatrixXd sigma_matrix(static_cast<Eigen::Index>(dim),
                                 static_cast<Eigen::Index>(dim));
    std::vector<std::string> coordinates;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t g = 0; g < n_grid; ++g)
            coordinates.push_back(
                coordinate_label(motif_display_name(sim.motifs[i]), sim.grid[g]));
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            sigma_matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                sigma(a / n_grid, b / n_grid, sim.grid[a % n_grid], sim.grid[b % n_grid]);

    Json example = nullptr;
    const Rational& alpha = regime.alpha;
    if (alpha > 0 && alpha < 1)
        example = example_report_to_json(
            example_report(alpha, sim.dynamics.lambda_on, sim.dynamics.lambda_off_base));

    Json report{{"alpha", to_fraction_string(alpha)},
                {"regime", regime.kind()},
                {"lambda_on", sim.dynamics.lambda_on},
                {"lambda_off", sim.dynamics.lambda_off_base},
                {"horizon", sim.dynamics.horizon},
                {"grid", sim.grid},
                {"coordinates", coordinates},
                {"motifs", std::move(motifs)},
                {"pairs", std::move(pairs)},
                {"sigma", matrix_to_json(sigma_matrix)},
                {"example", std::move(example)}};
    validate_schema(report, report_schema());
    return report;
}

SimulationOutputs run_simulation_outputs(const RunConfig& config, int threads) {
    const SimConfig& sim = config.sim;
    const std::size_t m = sim.motifs.size();
    const std::size_t n_grid = sim.grid.size();
    const std::size_t dim = m * n_grid;

    const std::vector<CountSeries> results = run_replications(sim, threads);

    std::vector<std::string> names;
    for (const LabeledGraph& H : sim.motifs) names.push_back(motif_display_name(H));

    // Accumulate in replication order so summaries are thread-count invariant.
    MomentAccumulator acc(dim);
    std::vector<double> flat(dim);
    for (const CountSeries& series : results) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t g = 0; g < n_grid; ++g)
                flat[i * n_grid + g] = series.normalized[i][g];
        acc.accumulate(flat);
    }

    std::ostringstream counts;
    counts << "replication,motif,time,raw,expected,normalized\r\n";
    for (std::size_t r = 0; r < results.size(); ++r) {
        const CountSeries& series = results[r];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t g = 0; g < n_grid; ++g)
                counts << r << ',' << csv_field(names[i]) << ','
                       << format_double(sim.grid[g]) << ',' << series.raw[i][g] << ','
                       << format_double(series.expected[i][g]) << ','
                       << format_double(series.normalized[i][g]) << "\r\n";
    }

    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd ref_exact(d, d), ref_limit(d, d);
    const LimitingCovariance sigma(sim.motifs, sim.dynamics.regime, sim.dynamics);
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < dim; ++b) {
            const std::size_t ia = a / n_grid, ib = b / n_grid;
            const double s = sim.grid[a % n_grid], t = sim.grid[b % n_grid];
            ref_exact(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                normalized_exact_covariance(sim.motifs[ia], sim.motifs[ib],
                                            sim.n_vertices, sim.dynamics, s, t);
            ref_limit(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                sigma(ia, ib, s, t);
        }
    }

    // The covariance z-test needs a real sample; small smoke runs still get
    // moments and references, with the comparison skipped and noted.
    const bool compared = acc.count() >= 100;
    CovarianceComparison cmp_exact, cmp_limit;
    if (compared) {
        cmp_exact = compare_covariance(acc, ref_exact, config.z_threshold);
        cmp_limit = compare_covariance(acc, ref_limit, config.z_threshold);
    } else {
        cmp_exact.notes.push_back("covariance z-test skipped: fewer than 100 replications");
    }

    Eigen::MatrixXd cov(d, d), cov_se(d, d), corr(d, d);
    std::vector<double> mean(dim), mean_se(dim), skew(dim), kurt(dim);
    double mean_max_z = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
        mean[a] = acc.mean(a);
        mean_se[a] = acc.mean_se(a);
        if (mean_se[a] > 0)
            mean_max_z = std::max(mean_max_z, std::abs(mean[a]) / mean_se[a]);
        skew[a] = acc.skewness(a);
        kurt[a] = acc.kurtosis(a);
        for (std::size_t b = 0; b < dim; ++b) {
            cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                acc.covariance(a, b);
            cov_se(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                acc.covariance_se(a, b);
            corr(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                acc.correlation(a, b);
        }
    }

    std::vector<std::string> coordinates;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t g = 0; g < n_grid; ++g)
            coordinates.push_back(coordinate_label(names[i], sim.grid[g]));

    std::vector<std::string> notes = cmp_exact.notes;
    const bool pass = (!compared || cmp_exact.pass) && mean_max_z < config.z_threshold;

    SimulationOutputs out;
    out.pass = pass;
    out.summary =
        Json{{"n_vertices", sim.n_vertices},
             {"alpha", to_fraction_string(sim.dynamics.regime.alpha)},
             {"regime", sim.dynamics.regime.kind()},
             {"replications", sim.replications},
             {"seed", sim.seed},
             {"grid", sim.grid},
             {"motif_names", names},
             {"coordinates", coordinates},
             {"mean", mean},
             {"mean_se", mean_se},
             {"mean_max_abs_z", mean_max_z},
             {"covariance", matrix_to_json(cov)},
             {"covariance_se", matrix_to_json(cov_se)},
             {"correlation", matrix_to_json(corr)},
             {"skewness", skew},
             {"kurtosis", kurt},
             {"reference_exact", matrix_to_json(ref_exact)},
             {"reference_limit", matrix_to_json(ref_limit)},
             {"z_exact", matrix_to_json(cmp_exact.z)},
             {"max_abs_z_exact", cmp_exact.max_abs_z},
             {"z_limit", matrix_to_json(cmp_limit.z)},
             {"max_abs_z_limit", cmp_limit.max_abs_z},
             {"z_threshold", config.z_threshold},
             {"pass", pass},
             {"notes", notes}};
    validate_schema(out.summary, summary_schema());
    out.counts_csv = counts.str();

    std::ostringstream plot;
    plot << "series,motif_a,time_a,motif_b,time_b,value\r\n";
    auto plot_vector = [&](const std::string& series, const std::vector<double>& v) {
        for (std::size_t a = 0; a < dim; ++a)
            plot << csv_field(series) << ',' << csv_field(names[a / n_grid]) << ','
                 << format_double(sim.grid[a % n_grid]) << ",,," << format_double(v[a])
                 << "\r\n";
    };
    auto plot_matrix = [&](const std::string& series, const Eigen::MatrixXd& mat) {
        if (static_cast<std::size_t>(mat.rows()) != dim) return;  // skipped comparison
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b)
                plot << csv_field(series) << ',' << csv_field(names[a / n_grid]) << ','
                     << format_double(sim.grid[a % n_grid]) << ','
                     << csv_field(names[b / n_grid]) << ','
                     << format_double(sim.grid[b % n_grid]) << ','
                     << format_double(mat(static_cast<Eigen::Index>(a),
                                          static_cast<Eigen::Index>(b)))
                     << "\r\n";
    };
    plot_vector("mean", mean);
    plot_vector("mean_se", mean_se);
    plot_vector("skewness", skew);
    plot_vector("kurtosis", kurt);
    plot_matrix("covariance", cov);
    plot_matrix("covariance_se", cov_se);
    plot_matrix("correlation", corr);
    plot_matrix("reference_exact", ref_exact);
    plot_matrix("reference_limit", ref_limit);
    plot_matrix("z_exact", cmp_exact.z);
    plot_matrix("z_limit", cmp_limit.z);
    out.plotdata_csv = plot.str();
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace dynerg
