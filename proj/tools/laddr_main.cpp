// laddr: score how well new samples are supported by a training knowledge
// base, gate model predictions on that score, and tune the decay diameters
// against stakeholder metrics. One binary, subcommands per stage.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "laddr/casestudy.hpp"
#include "laddr/covariance.hpp"
#include "laddr/csv.hpp"
#include "laddr/errors.hpp"
#include "laddr/io_util.hpp"
#include "laddr/knowledge_base.hpp"
#include "laddr/metrics.hpp"
#include "laddr/optimizer.hpp"
#include "laddr/reliability.hpp"
#include "laddr/supervisor.hpp"
#include "laddr/version.hpp"

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON config files: {"flag_name": value} per subcommand section, nested by
// subcommand name. Command-line flags override file values.
// ---------------------------------------------------------------------------
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json root;
        try {
            root = json::parse(input);
        } catch (const json::exception& e) {
            throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        flatten(root, {}, items);
        return items;
    }

  private:
    static void flatten(const json& node, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& out) {
        if (!node.is_object())
            throw CLI::FileError("config sections must be JSON objects");
        for (const auto& [key, value] : node.items()) {
            if (value.is_object()) {
                auto next = parents;
                next.push_back(key);
                flatten(value, next, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& v : value) item.inputs.push_back(scalar(v));
            } else {
                item.inputs.push_back(scalar(value));
            }
            out.push_back(std::move(item));
        }
    }

    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }
};

// ---------------------------------------------------------------------------
// small parsers for flag payloads
// ---------------------------------------------------------------------------
std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    for (const auto& field : laddr::split_fields(text))
        out.push_back(laddr::parse_double(field, flag));
    if (out.empty()) throw laddr::ValidationError(flag + ": empty list");
    return out;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& flag) {
    const auto sep = text.find(':');
    if (sep == std::string::npos)
        throw laddr::ValidationError(flag + ": expected lo:hi, got '" + text + "'");
    return {laddr::parse_double(text.substr(0, sep), flag),
            laddr::parse_double(text.substr(sep + 1), flag)};
}

struct GridFlag {
    std::string feature;
    std::vector<double> candidates;
};

// name=lo:hi:steps or name=v1,v2,... or name=v
GridFlag parse_grid_flag(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw laddr::ValidationError("--grid: expected name=lo:hi:steps, got '" + text + "'");
    GridFlag out;
    out.feature = text.substr(0, eq);
    const std::string payload = text.substr(eq + 1);
    const auto colons = std::count(payload.begin(), payload.end(), ':');
    if (colons == 2) {
        const auto c1 = payload.find(':');
        const auto c2 = payload.find(':', c1 + 1);
        const double lo = laddr::parse_double(payload.substr(0, c1), "--grid");
        const double hi = laddr::parse_double(payload.substr(c1 + 1, c2 - c1 - 1), "--grid");
        const double steps = laddr::parse_double(payload.substr(c2 + 1), "--grid");
        if (steps < 1.0 || steps != std::floor(steps))
            throw laddr::ValidationError("--grid: steps must be a positive integer");
        out.candidates = laddr::DiameterGrid::linspace(lo, hi, static_cast<size_t>(steps));
    } else if (colons == 0) {
        out.candidates = parse_double_list(payload, "--grid");
    } else {
        throw laddr::ValidationError("--grid: expected name=lo:hi:steps or name=v1,v2,...");
    }
    return out;
}

std::pair<std::string, double> parse_assignment(const std::string& text,
                                                const std::string& flag) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw laddr::ValidationError(flag + ": expected name=value, got '" + text + "'");
    return {text.substr(0, eq), laddr::parse_double(text.substr(eq + 1), flag)};
}

std::string format_value(double v, const char* fmt = "%.9g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

// ---------------------------------------------------------------------------
// shared loading helpers
// ---------------------------------------------------------------------------
laddr::DiameterVector resolve_diameters(const std::vector<double>& gamma, size_t dim,
                                        const std::string& flag) {
    if (gamma.size() == dim) return laddr::DiameterVector{gamma};
    if (gamma.size() == 1)
        return laddr::DiameterVector{std::vector<double>(dim, gamma[0])};
    std::ostringstream msg;
    msg << flag << ": got " << gamma.size() << " values for a " << dim << "-feature schema";
    throw laddr::ValidationError(msg.str());
}

// column indices of the knowledge base's input features inside a CSV table
std::vector<size_t> input_columns(const laddr::Table& table, const laddr::Schema& schema) {
    std::vector<size_t> out;
    for (size_t i : schema.input_indices())
        out.push_back(table.column_index(schema.at(i).name));
    return out;
}

std::optional<size_t> truth_column(const laddr::Table& table, const laddr::Schema& schema) {
    for (size_t c = 0; c < table.columns.size(); ++c) {
        if (table.columns[c] == "truth") return c;
        if (schema.target_index() &&
            table.columns[c] == schema.at(*schema.target_index()).name)
            return c;
    }
    return std::nullopt;
}

laddr::PolynomialPredictor fit_reference_predictor(const std::string& train_csv,
                                                   const laddr::Schema& schema,
                                                   unsigned degree) {
    const auto table = laddr::read_csv_file(train_csv);
    if (!schema.target_index())
        throw laddr::ValidationError("--train: the knowledge base has no target feature");
    const auto inputs = input_columns(table, schema);
    const size_t target = table.column_index(schema.at(*schema.target_index()).name);
    std::vector<std::vector<double>> rows;
    rows.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        std::vector<double> r;
        for (size_t c : inputs) r.push_back(row[c]);
        r.push_back(row[target]);
        rows.push_back(std::move(r));
    }
    return laddr::PolynomialPredictor::fit(rows, degree);
}

// ---------------------------------------------------------------------------
// subcommand options
// ---------------------------------------------------------------------------
struct SimulateOpts {
    std::string out_dir;
    uint64_t seed = 2024;
    size_t d1_episodes = 64;
    size_t d2_episodes = 16;
    size_t steps = 200;
    double ramp_duration = 467.81;
    std::string d1_range = "0.516:1.0";
    std::string d2_range = "0.0:0.387";
    double train_fraction = 0.10;
    std::string ramp_range; // optional lo:hi
};

struct KbBuildOpts {
    std::string input_csv;
    std::string out_base;
    std::string inputs;  // comma list; empty = all non-target columns
    std::string target;  // empty = none
    size_t stride = 1;
    std::string source;
    std::string stamp;
};

struct ScoreOpts {
    std::string kb_path;
    std::vector<double> gamma;
    std::vector<double> point;
    double decay_threshold = 0.2;
    bool normalized = false;
    bool as_json = false;
};

struct MapOpts {
    std::string kb_path;
    std::vector<double> gamma;
    std::string axes; // "f1,f2"
    std::vector<std::string> fixed;
    std::string mode = "inputs+target";
    size_t resolution = 201;
    std::string range = "-0.1:1.1";
    double decay_threshold = 0.2;
    std::string out_csv;
    std::string image;
};

struct MetricsOpts {
    std::string counts; // A_o,R_x,A_x,R_o
    double threshold = -1.0;
    double epsilon = -1.0;
    std::string json_path;
};

struct OptimizeOpts {
    std::string kb_path;
    std::string eval_csv;
    std::string objective = "ineptitude";
    std::vector<std::string> grid;
    std::vector<std::string> freeze;
    double decay_threshold = 0.2;
    double accept_threshold = 0.5;
    double epsilon = 0.0;
    std::string mode = "inputs+target";
    std::string prediction_column;
    std::string train_csv;
    unsigned degree = 1;
    std::string out_dir;
    unsigned threads = 0;
};

struct SuperviseOpts {
    std::string kb_path;
    std::string input_csv; // empty = stdin
    std::string output;    // empty = stdout
    std::string summary;   // empty = stderr
    std::vector<double> gamma;
    double decay_threshold = 0.2;
    double accept_threshold = 0.5;
    double epsilon = 0.0;
    std::string mode = "inputs+target";
    std::string prediction_column;
    std::string train_csv;
    unsigned degree = 1;
};

// ---------------------------------------------------------------------------
// subcommand implementations
// ---------------------------------------------------------------------------
int run_simulate(const SimulateOpts& o) {
    laddr::StudyConfig cfg;
    cfg.seed = o.seed;
    cfg.d1_episodes = o.d1_episodes;
    cfg.d2_episodes = o.d2_episodes;
    cfg.steps = o.steps;
    cfg.ramp_duration = o.ramp_duration;
    cfg.d1_end_range = parse_range(o.d1_range, "--d1-range");
    cfg.d2_end_range = parse_range(o.d2_range, "--d2-range");
    cfg.train_fraction = o.train_fraction;
    if (!o.ramp_range.empty()) cfg.ramp_duration_range = parse_range(o.ramp_range, "--ramp-range");

    const auto data = laddr::build_datasets(cfg);

    json resolved = {{"seed", o.seed},
                     {"d1_episodes", o.d1_episodes},
                     {"d2_episodes", o.d2_episodes},
                     {"steps", o.steps},
                     {"ramp_duration", o.ramp_duration},
                     {"d1_range", o.d1_range},
                     {"d2_range", o.d2_range},
                     {"train_fraction", o.train_fraction},
                     {"ramp_range", o.ramp_range}};
    const std::vector<std::string> comments{std::string("laddr ") + laddr::kVersion,
                                            "config: " + resolved.dump()};

    const std::filesystem::path dir(o.out_dir);
    auto write_split = [&](const char* name, const std::vector<laddr::Episode>& split) {
        laddr::atomic_write_file(dir / name, laddr::to_csv(laddr::kStudyColumns,
                                                           data.provenance_rows(split),
                                                           comments));
    };
    write_split("d1_train.csv", data.d1_train);
    write_split("d1_test.csv", data.d1_test);
    write_split("d2_test.csv", data.d2_test);

    json study = {{"tool_version", laddr::kVersion},
                  {"config", resolved},
                  {"schema", json::array({"up_temp", "core_flow", "t_fcl"})},
                  {"splits",
                   {{"d1_train", data.d1_train.size()},
                    {"d1_test", data.d1_test.size()},
                    {"d2_test", data.d2_test.size()}}},
                  {"scale_min", data.scale_min},
                  {"scale_max", data.scale_max}};
    laddr::atomic_write_file(dir / "study.json", study.dump(2) + "\n");
    std::cout << "wrote " << (dir / "d1_train.csv").string() << ", d1_test.csv, d2_test.csv, study.json\n";
    return 0;
}

int run_kb_build(const KbBuildOpts& o) {
    const auto table = laddr::read_csv_file(o.input_csv);

    std::vector<std::string> input_names;
    if (!o.inputs.empty()) {
        for (const auto& name : laddr::split_fields(o.inputs)) input_names.push_back(name);
    } else {
        for (const auto& name : table.columns)
            if (name != o.target) input_names.push_back(name);
    }

    std::vector<laddr::Feature> features;
    std::vector<size_t> columns;
    for (const auto& name : input_names) {
        features.push_back({name, laddr::FeatureRole::Input});
        columns.push_back(table.column_index(name));
    }
    if (!o.target.empty()) {
        features.push_back({o.target, laddr::FeatureRole::Target});
        columns.push_back(table.column_index(o.target));
    }
    laddr::Schema schema(features);

    if (o.stride == 0) throw laddr::ValidationError("--stride: must be >= 1");
    std::vector<std::vector<double>> rows;
    for (size_t r = 0; r < table.rows.size(); r += o.stride) {
        std::vector<double> row;
        for (size_t c : columns) row.push_back(table.rows[r][c]);
        rows.push_back(std::move(row));
    }

    laddr::KbMetadata meta;
    meta.source = o.source.empty() ? o.input_csv : o.source;
    meta.created = o.stamp;
    meta.build_config = json{{"input", o.input_csv},
                             {"inputs", o.inputs},
                             {"target", o.target},
                             {"stride", o.stride}}
                            .dump();
    const auto kb = laddr::KnowledgeBase::from_raw(schema, rows, meta);
    kb.save(o.out_base);
    std::cout << "knowledge base: " << kb.size() << " points, " << kb.dimension()
              << " features -> " << o.out_base << ".kb.json\n";
    return 0;
}

int run_score(const ScoreOpts& o) {
    const auto kb = laddr::KnowledgeBase::load(o.kb_path);
    const auto diameters = resolve_diameters(o.gamma, kb.dimension(), "--gamma");
    const auto cov = laddr::solve_covariance(diameters, o.decay_threshold);
    const laddr::NeighborIndex index = laddr::build_index(kb, cov);

    if (o.point.size() != kb.dimension()) {
        std::ostringstream msg;
        msg << "--point: got " << o.point.size() << " values for a " << kb.dimension()
            << "-feature knowledge base";
        throw laddr::ValidationError(msg.str());
    }
    const laddr::FeatureVector query =
        o.normalized ? laddr::FeatureVector(o.point) : kb.scaler().normalize(o.point);
    const auto score = laddr::reliability(index, query);

    if (o.as_json) {
        json out = {{"reliability", score.value},
                    {"nearest_distance", score.nearest_distance},
                    {"nearest_point", score.nearest_point_id},
                    {"config",
                     {{"kb", o.kb_path},
                      {"gamma", diameters.values},
                      {"decay_threshold", o.decay_threshold},
                      {"normalized", o.normalized}}},
                    {"tool_version", laddr::kVersion}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << format_value(score.value) << "\n";
    }
    return 0;
}

int run_map(const MapOpts& o) {
    const auto kb = laddr::KnowledgeBase::load(o.kb_path);
    laddr::ReliabilityConfig cfg;
    cfg.diameters = resolve_diameters(o.gamma, kb.dimension(), "--gamma");
    cfg.decay_threshold = o.decay_threshold;
    cfg.mode = laddr::evidence_mode_from_string(o.mode);
    laddr::ReliabilityEngine engine(kb, cfg);
    const auto& schema = engine.evidence().schema();

    const auto axis_names = laddr::split_fields(o.axes);
    if (axis_names.size() != 2)
        throw laddr::ValidationError("--axes: expected two comma-separated feature names");
    laddr::MapAxis a1, a2;
    const auto range = parse_range(o.range, "--range");
    for (auto* axis : {&a1, &a2}) {
        axis->lo = range.first;
        axis->hi = range.second;
        axis->resolution = o.resolution;
    }
    auto feature_index = [&](const std::string& name) {
        const auto idx = schema.index_of(name);
        if (!idx)
            throw laddr::ValidationError("--axes: no feature '" + name +
                                         "' in the evidence schema (mode " + o.mode + ")");
        return *idx;
    };
    a1.feature = feature_index(axis_names[0]);
    a2.feature = feature_index(axis_names[1]);

    laddr::FeatureVector fixed(engine.dimension(), 0.5);
    for (const auto& assignment : o.fixed) {
        const auto [name, value] = parse_assignment(assignment, "--fixed");
        fixed[feature_index(name)] = value;
    }

    const auto map = laddr::generate_map(engine, a1, a2, fixed);

    json resolved = {{"kb", o.kb_path},          {"gamma", cfg.diameters.values},
                     {"axes", o.axes},           {"mode", o.mode},
                     {"resolution", o.resolution}, {"range", o.range},
                     {"decay_threshold", o.decay_threshold}};
    const std::vector<std::string> comments{std::string("laddr ") + laddr::kVersion,
                                            "config: " + resolved.dump()};
    laddr::atomic_write_file(o.out_csv, laddr::map_to_csv(map, schema, comments));
    if (!o.image.empty()) laddr::atomic_write_file(o.image, laddr::map_to_ppm(map));
    std::cout << "map: " << map.axis1.resolution << "x" << map.axis2.resolution << " -> "
              << o.out_csv << (o.image.empty() ? "" : (" + " + o.image)) << "\n";
    return 0;
}

int run_metrics(const MetricsOpts& o) {
    const auto values = parse_double_list(o.counts, "--counts");
    if (values.size() != 4)
        throw laddr::ValidationError(
            "--counts: expected 4 values: accepted-correct,rejected-incorrect,"
            "accepted-incorrect,rejected-correct");
    laddr::ConfusionCounts c;
    auto as_count = [](double v, const char* what) {
        if (v < 0.0 || v != std::floor(v))
            throw laddr::ValidationError(std::string("--counts: ") + what +
                                         " must be a non-negative integer");
        return static_cast<uint64_t>(v);
    };
    c.accepted_correct = as_count(values[0], "accepted-correct");
    c.rejected_incorrect = as_count(values[1], "rejected-incorrect");
    c.accepted_incorrect = as_count(values[2], "accepted-incorrect");
    c.rejected_correct = as_count(values[3], "rejected-correct");
    if (c.total() == 0) throw laddr::NumericError("--counts: all four tallies are zero");

    const auto report = laddr::metrics_report(
        c, o.threshold >= 0.0 ? std::optional<double>(o.threshold) : std::nullopt,
        o.epsilon >= 0.0 ? std::optional<double>(o.epsilon) : std::nullopt);

    auto pct = [](const json& v) {
        return v.is_null() ? std::string("undefined")
                           : format_value(v.get<double>() * 100.0, "%.1f") + "%";
    };
    std::cout << "peril " << pct(report["peril"]) << "  degradation "
              << pct(report["degradation"]) << "  ineptitude " << pct(report["ineptitude"])
              << "\n";
    if (!o.json_path.empty()) laddr::atomic_write_file(o.json_path, report.dump(2) + "\n");
    return 0;
}

laddr::EvaluationSet load_eval_set(const laddr::Table& table, const laddr::Schema& schema,
                                   const std::string& prediction_column,
                                   const std::string& train_csv, unsigned degree) {
    const auto inputs = input_columns(table, schema);
    const auto truth = truth_column(table, schema);
    if (!truth)
        throw laddr::ValidationError("evaluation data needs a truth column "
                                     "(the target feature's name or 'truth')");

    std::optional<size_t> pred_col;
    if (!prediction_column.empty()) {
        pred_col = table.column_index(prediction_column);
    } else {
        for (size_t c = 0; c < table.columns.size(); ++c)
            if (table.columns[c] == "prediction") pred_col = c;
    }
    std::optional<laddr::PolynomialPredictor> predictor;
    if (!pred_col) {
        if (train_csv.empty())
            throw laddr::ValidationError(
                "no predictions: add a prediction column (--prediction-column) or fit the "
                "reference predictor with --train");
        predictor = fit_reference_predictor(train_csv, schema, degree);
    }

    laddr::EvaluationSet eval;
    eval.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        laddr::EvaluationSample s;
        for (size_t c : inputs) s.inputs.push_back(row[c]);
        s.truth = row[*truth];
        s.prediction = pred_col ? row[*pred_col] : (*predictor)(s.inputs);
        eval.push_back(std::move(s));
    }
    return eval;
}

int run_optimize(const OptimizeOpts& o) {
    const auto kb = laddr::KnowledgeBase::load(o.kb_path);
    const auto table = laddr::read_csv_file(o.eval_csv);
    const auto eval =
        load_eval_set(table, kb.schema(), o.prediction_column, o.train_csv, o.degree);

    laddr::SearchSpec spec;
    spec.objective = laddr::objective_from_string(o.objective);
    spec.grid.axes.resize(kb.dimension());
    std::vector<bool> covered(kb.dimension(), false);
    auto axis_for = [&](const std::string& name) {
        const auto idx = kb.schema().index_of(name);
        if (!idx) throw laddr::ValidationError("no feature '" + name + "' in the schema");
        if (covered[*idx])
            throw laddr::ValidationError("feature '" + name + "' specified twice");
        covered[*idx] = true;
        return *idx;
    };
    for (const auto& flag : o.grid) {
        const auto parsed = parse_grid_flag(flag);
        spec.grid.axes[axis_for(parsed.feature)] = parsed.candidates;
    }
    for (const auto& flag : o.freeze) {
        const auto [name, value] = parse_assignment(flag, "--freeze");
        spec.grid.axes[axis_for(name)] = {value};
    }
    for (size_t f = 0; f < covered.size(); ++f)
        if (!covered[f])
            throw laddr::ValidationError("feature '" + kb.schema().at(f).name +
                                         "' needs a --grid or --freeze entry");

    laddr::ReliabilityConfig cfg;
    cfg.diameters = spec.grid.candidate(0); // placeholder; replaced per candidate
    cfg.decay_threshold = o.decay_threshold;
    cfg.accept_threshold = o.accept_threshold;
    cfg.mode = laddr::evidence_mode_from_string(o.mode);
    const laddr::AcceptanceCriterion criterion{o.epsilon};
    criterion.validate();

    const auto result = laddr::optimize(kb, spec, eval, cfg, criterion, o.threads);

    json resolved = {{"kb", o.kb_path},
                     {"eval", o.eval_csv},
                     {"objective", o.objective},
                     {"grid", o.grid},
                     {"freeze", o.freeze},
                     {"decay_threshold", o.decay_threshold},
                     {"accept_threshold", o.accept_threshold},
                     {"epsilon", o.epsilon},
                     {"mode", o.mode},
                     {"prediction_column", o.prediction_column},
                     {"train", o.train_csv},
                     {"degree", o.degree}};

    const std::filesystem::path dir(o.out_dir);
    const std::vector<std::string> comments{std::string("laddr ") + laddr::kVersion,
                                            "config: " + resolved.dump()};
    laddr::atomic_write_file(dir / "trace.csv",
                             laddr::trace_to_csv(result.trace, kb.schema().names(), comments));

    json best;
    best["diameters"] = json::object();
    for (size_t f = 0; f < kb.dimension(); ++f)
        best["diameters"][kb.schema().at(f).name] = result.best.diameters.values[f];
    best["counts"] = {{"A_o", result.best.counts.accepted_correct},
                      {"A_x", result.best.counts.accepted_incorrect},
                      {"R_o", result.best.counts.rejected_correct},
                      {"R_x", result.best.counts.rejected_incorrect}};
    auto opt_json = [](const std::optional<double>& v) {
        return v ? json(*v) : json(nullptr);
    };
    best["peril"] = opt_json(result.best.peril);
    best["degradation"] = opt_json(result.best.degradation);
    best["ineptitude"] = opt_json(result.best.ineptitude);
    best["objective"] = o.objective;
    best["candidates"] = result.trace.size();
    best["config"] = resolved;
    best["tool_version"] = laddr::kVersion;
    laddr::atomic_write_file(dir / "best.json", best.dump(2) + "\n");

    std::cout << "optimize: " << result.trace.size() << " candidates, best " << o.objective
              << " = "
              << format_value(result.best.objective_value(spec.objective).value()) << " -> "
              << (dir / "best.json").string() << "\n";
    return 0;
}

int run_supervise(const SuperviseOpts& o) {
    const auto kb = laddr::KnowledgeBase::load(o.kb_path);
    laddr::ReliabilityConfig cfg;
    cfg.diameters = resolve_diameters(o.gamma, kb.dimension(), "--gamma");
    cfg.decay_threshold = o.decay_threshold;
    cfg.accept_threshold = o.accept_threshold;
    cfg.mode = laddr::evidence_mode_from_string(o.mode);
    const laddr::AcceptanceCriterion criterion{o.epsilon};

    std::ifstream file_in;
    std::istream* in = &std::cin;
    std::string source = "<stdin>";
    if (!o.input_csv.empty()) {
        file_in.open(o.input_csv);
        if (!file_in) throw laddr::IoError("cannot open: " + o.input_csv);
        in = &file_in;
        source = o.input_csv;
    }
    laddr::CsvReader reader(*in, source);

    // resolve column layout from the header
    std::vector<size_t> inputs;
    for (size_t i : kb.schema().input_indices()) {
        const auto& name = kb.schema().at(i).name;
        bool found = false;
        for (size_t c = 0; c < reader.header().size(); ++c)
            if (reader.header()[c] == name) {
                inputs.push_back(c);
                found = true;
            }
        if (!found) throw laddr::ValidationError(source + ": missing input column '" + name + "'");
    }
    std::optional<size_t> truth;
    std::optional<size_t> pred_col;
    for (size_t c = 0; c < reader.header().size(); ++c) {
        const auto& name = reader.header()[c];
        if (name == "truth" ||
            (kb.schema().target_index() &&
             name == kb.schema().at(*kb.schema().target_index()).name))
            truth = c;
        if (!o.prediction_column.empty() ? name == o.prediction_column
                                         : name == "prediction")
            pred_col = c;
    }
    if (!o.prediction_column.empty() && !pred_col)
        throw laddr::ValidationError(source + ": missing prediction column '" +
                                     o.prediction_column + "'");

    std::optional<laddr::PolynomialPredictor> fitted;
    if (!pred_col) {
        if (o.train_csv.empty())
            throw laddr::ValidationError(
                "no predictor: add a prediction column (--prediction-column) or fit the "
                "reference predictor with --train");
        fitted = fit_reference_predictor(o.train_csv, kb.schema(), o.degree);
    }

    laddr::StreamSupervisor supervisor(kb, cfg, criterion);
    double column_prediction = 0.0;
    const laddr::PredictorPort port =
        pred_col ? laddr::PredictorPort(
                       [&column_prediction](std::span<const double>) { return column_prediction; })
                 : fitted->port();

    json resolved = {{"kb", o.kb_path},
                     {"input", source},
                     {"gamma", cfg.diameters.values},
                     {"decay_threshold", o.decay_threshold},
                     {"accept_threshold", o.accept_threshold},
                     {"epsilon", o.epsilon},
                     {"mode", o.mode},
                     {"prediction_column", o.prediction_column},
                     {"train", o.train_csv},
                     {"degree", o.degree}};

    std::ostringstream log;
    log << "# laddr " << laddr::kVersion << "\n# config: " << resolved.dump() << "\n";
    log << "id,score,accept,prediction";
    if (truth) log << ",truth,correct";
    log << "\n";

    auto field = [](const std::optional<double>& v) {
        return v ? laddr::format_double(*v) : std::string();
    };
    while (auto row = reader.next()) {
        if (!row->ok()) {
            supervisor.note_malformed(row->number, row->error);
            std::cerr << "warning: row " << row->number << " skipped: " << row->error << "\n";
            continue;
        }
        laddr::FeatureVector sample_inputs;
        for (size_t c : inputs) sample_inputs.push_back(row->values[c]);
        if (pred_col) column_prediction = row->values[*pred_col];
        const std::optional<double> sample_truth =
            truth ? std::optional<double>(row->values[*truth]) : std::nullopt;

        const auto d = supervisor.process(row->number, sample_inputs, sample_truth, port);
        log << d.id << "," << field(d.score) << "," << (d.accept ? 1 : 0) << ","
            << field(d.prediction);
        if (truth) {
            log << "," << field(sample_truth) << ",";
            if (d.correct) log << (*d.correct ? 1 : 0);
        }
        log << "\n";
    }

    if (o.output.empty())
        std::cout << log.str();
    else
        laddr::atomic_write_file(o.output, log.str());

    json summary = laddr::summary_to_json(supervisor.summary(), cfg, criterion);
    summary["config"] = resolved;
    if (o.summary.empty())
        std::cerr << summary.dump(2) << "\n";
    else
        laddr::atomic_write_file(o.summary, summary.dump(2) + "\n");
    return 0;
}

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  2  usage error (unknown flag, missing argument, bad config file)\n"
    "  3  I/O error (missing or unwritable file)\n"
    "  4  validation error (schema mismatch, malformed data, bad parameter)\n"
    "  5  numeric error (undefined metric or objective)\n";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliability scoring, prediction gating, and diameter tuning "
                 "over a training knowledge base"};
    app.set_version_flag("--version", laddr::kVersion);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file (flags override file values)");
    app.footer(kExitCodeHelp);
    app.require_subcommand(1);

    SimulateOpts sim;
    auto* simulate = app.add_subcommand(
        "simulate", "Generate the synthetic loss-of-flow study datasets");
    simulate->add_option("--out", sim.out_dir, "output directory")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed (all randomness flows from it)");
    simulate->add_option("--d1-episodes", sim.d1_episodes, "in-family episode count");
    simulate->add_option("--d2-episodes", sim.d2_episodes, "shifted-family episode count");
    simulate->add_option("--steps", sim.steps, "samples per transient");
    simulate->add_option("--ramp-duration", sim.ramp_duration, "pump ramp duration (s)");
    simulate->add_option("--d1-range", sim.d1_range, "d1 end-fraction range lo:hi");
    simulate->add_option("--d2-range", sim.d2_range, "d2 end-fraction range lo:hi");
    simulate->add_option("--train-fraction", sim.train_fraction,
                         "share of d1 episodes used for training");
    simulate->add_option("--ramp-range", sim.ramp_range,
                         "vary ramp duration per episode over lo:hi");

    KbBuildOpts kbo;
    auto* kb_cmd = app.add_subcommand("kb", "Knowledge-base operations");
    kb_cmd->require_subcommand(1);
    auto* kb_build = kb_cmd->add_subcommand("build", "Build a knowledge base from raw CSV");
    kb_build->add_option("--input", kbo.input_csv, "raw CSV with a header row")->required();
    kb_build->add_option("--out", kbo.out_base, "output base path (writes .kb.json/.kb.csv)")
        ->required();
    kb_build->add_option("--inputs", kbo.inputs,
                         "comma list of input columns (default: all non-target)");
    kb_build->add_option("--target", kbo.target, "target column name");
    kb_build->add_option("--stride", kbo.stride, "keep every k-th row");
    kb_build->add_option("--source", kbo.source, "source label stored in the header");
    kb_build->add_option("--stamp", kbo.stamp, "creation timestamp stored in the header");

    ScoreOpts sco;
    auto* score = app.add_subcommand("score", "Reliability of one query point");
    score->add_option("--kb", sco.kb_path, "knowledge base (.kb.json)")->required();
    score->add_option("--gamma", sco.gamma, "extrapolation diameters (one or per-feature)")
        ->required()
        ->delimiter(',');
    score->add_option("--point", sco.point, "query point, schema order")
        ->required()
        ->delimiter(',');
    score->add_option("--decay-threshold", sco.decay_threshold,
                      "reliability at the extrapolation radius");
    score->add_flag("--normalized", sco.normalized, "point is already normalized");
    score->add_flag("--json", sco.as_json, "emit a JSON report instead of one number");

    MapOpts mpo;
    auto* map = app.add_subcommand("map", "Reliability map over a 2-feature grid");
    map->add_option("--kb", mpo.kb_path, "knowledge base (.kb.json)")->required();
    map->add_option("--gamma", mpo.gamma, "extrapolation diameters")->required()->delimiter(',');
    map->add_option("--axes", mpo.axes, "two feature names, comma separated")->required();
    map->add_option("--fixed", mpo.fixed, "name=value for non-axis features (normalized)")
        ->take_all();
    map->add_option("--mode", mpo.mode, "evidence mode: inputs | inputs+target");
    map->add_option("--resolution", mpo.resolution, "grid nodes per axis");
    map->add_option("--range", mpo.range, "normalized grid range lo:hi");
    map->add_option("--decay-threshold", mpo.decay_threshold, "");
    map->add_option("--out", mpo.out_csv, "output CSV path")->required();
    map->add_option("--image", mpo.image, "optional PPM heatmap path");

    MetricsOpts mto;
    auto* metrics = app.add_subcommand("metrics", "Stakeholder metrics from four tallies");
    metrics
        ->add_option("--counts", mto.counts,
                     "accepted-correct,rejected-incorrect,accepted-incorrect,rejected-correct")
        ->required();
    metrics->add_option("--threshold", mto.threshold, "accept threshold to echo");
    metrics->add_option("--epsilon", mto.epsilon, "correctness band to echo");
    metrics->add_option("--json", mto.json_path, "write the JSON report here");

    OptimizeOpts opo;
    auto* optimize = app.add_subcommand(
        "optimize", "Exhaustive diameter search against a labeled evaluation set");
    optimize->add_option("--kb", opo.kb_path, "knowledge base (.kb.json)")->required();
    optimize->add_option("--eval", opo.eval_csv, "labeled evaluation CSV")->required();
    optimize->add_option("--objective", opo.objective, "peril | degradation | ineptitude");
    optimize
        ->add_option("--grid", opo.grid, "per-feature axis: name=lo:hi:steps or name=v1,v2,...")
        ->take_all();
    optimize->add_option("--freeze", opo.freeze, "pin a feature's diameter: name=value")
        ->take_all();
    optimize->add_option("--decay-threshold", opo.decay_threshold, "");
    optimize->add_option("--threshold", opo.accept_threshold, "accept threshold");
    optimize->add_option("--epsilon", opo.epsilon, "correctness band (raw units)")->required();
    optimize->add_option("--mode", opo.mode, "evidence mode");
    optimize->add_option("--prediction-column", opo.prediction_column,
                         "take predictions from this eval column");
    optimize->add_option("--train", opo.train_csv,
                         "fit the reference predictor on this CSV when no column is given");
    optimize->add_option("--degree", opo.degree, "reference predictor degree (1 or 2)");
    optimize->add_option("--out-dir", opo.out_dir, "writes best.json and trace.csv")->required();
    optimize->add_option("--threads", opo.threads, "worker threads (0 = hardware)");

    SuperviseOpts svo;
    auto* supervise = app.add_subcommand(
        "supervise", "Stream samples through the accept/reject gate");
    supervise->add_option("--kb", svo.kb_path, "knowledge base (.kb.json)")->required();
    supervise->add_option("--input", svo.input_csv, "input CSV (default: stdin)");
    supervise->add_option("--output", svo.output, "decision log CSV (default: stdout)");
    supervise->add_option("--summary", svo.summary, "summary JSON (default: stderr)");
    supervise->add_option("--gamma", svo.gamma, "extrapolation diameters")
        ->required()
        ->delimiter(',');
    supervise->add_option("--decay-threshold", svo.decay_threshold, "");
    supervise->add_option("--threshold", svo.accept_threshold, "accept threshold");
    supervise->add_option("--epsilon", svo.epsilon, "correctness band (raw units)")->required();
    supervise->add_option("--mode", svo.mode, "evidence mode");
    supervise->add_option("--prediction-column", svo.prediction_column,
                          "take predictions from this input column");
    supervise->add_option("--train", svo.train_csv, "fit the reference predictor on this CSV");
    supervise->add_option("--degree", svo.degree, "reference predictor degree");

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return run_simulate(sim);
        if (kb_cmd->parsed() && kb_build->parsed()) return run_kb_build(kbo);
        if (score->parsed()) return run_score(sco);
        if (map->parsed()) return run_map(mpo);
        if (metrics->parsed()) return run_metrics(mto);
        if (optimize->parsed()) return run_optimize(opo);
        if (supervise->parsed()) return run_supervise(svo);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const laddr::Error& e) {
        const char* category = "internal";
        if (dynamic_cast<const laddr::IoError*>(&e)) category = "io";
        if (dynamic_cast<const laddr::ValidationError*>(&e)) category = "validation";
        if (dynamic_cast<const laddr::NumericError*>(&e)) category = "numeric";
        std::cerr << "error: " << category << ": " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
