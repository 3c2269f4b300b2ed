#include "laddr/knowledge_base.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "laddr/csv.hpp"
#include "laddr/errors.hpp"
#include "laddr/io_util.hpp"
#include "laddr/version.hpp"

namespace laddr {

namespace {

constexpr const char* kFormatName = "laddr-kb";
constexpr int kFormatVersion = 1;

std::filesystem::path kb_base_path(std::filesystem::path p) {
    // accept "name", "name.kb.json", or "name.kb"
    if (p.extension() == ".json") p.replace_extension();
    if (p.extension() == ".kb") p.replace_extension();
    return p;
}

} // namespace

KnowledgeBase::KnowledgeBase(Schema schema, MinMaxScaler scaler,
                             std::vector<FeatureVector> points, KbMetadata metadata)
    : schema_(std::move(schema)),
      scaler_(std::move(scaler)),
      points_(std::move(points)),
      metadata_(std::move(metadata)) {
    if (points_.empty()) throw ValidationError("knowledge base: no points");
    if (scaler_.dimension() != schema_.size())
        throw ValidationError("knowledge base: scaler/schema dimension mismatch");
    for (size_t r = 0; r < points_.size(); ++r) {
        require_dimension(points_[r], schema_.size(), "knowledge base point");
        require_finite(points_[r], "knowledge base point");
    }
}

KnowledgeBase KnowledgeBase::from_raw(Schema schema,
                                      const std::vector<std::vector<double>>& raw_rows,
                                      KbMetadata metadata) {
    if (raw_rows.empty()) throw ValidationError("knowledge base build: empty input");
    const size_t dim = schema.size();
    for (size_t r = 0; r < raw_rows.size(); ++r) {
        if (raw_rows[r].size() != dim) {
            std::ostringstream msg;
            msg << "knowledge base build: row " << r << " has " << raw_rows[r].size()
                << " values, schema has " << dim;
            throw ValidationError(msg.str());
        }
        for (size_t c = 0; c < dim; ++c) {
            if (!std::isfinite(raw_rows[r][c])) {
                std::ostringstream msg;
                msg << "knowledge base build: non-finite value at row " << r
                    << ", column '" << schema.at(c).name << "'";
                throw ValidationError(msg.str());
            }
        }
    }
    MinMaxScaler scaler = MinMaxScaler::fit(raw_rows, schema.names());
    std::vector<FeatureVector> points;
    points.reserve(raw_rows.size());
    for (const auto& row : raw_rows) points.push_back(scaler.normalize(row));
    return KnowledgeBase(std::move(schema), std::move(scaler), std::move(points),
                         std::move(metadata));
}

KnowledgeBase KnowledgeBase::from_normalized(Schema schema, MinMaxScaler scaler,
                                             std::vector<FeatureVector> points,
                                             KbMetadata metadata) {
    return KnowledgeBase(std::move(schema), std::move(scaler), std::move(points),
                         std::move(metadata));
}

KnowledgeBase KnowledgeBase::project_inputs() const {
    if (!schema_.target_index()) return *this;
    const auto& idx = schema_.input_indices();
    std::vector<Feature> feats;
    feats.reserve(idx.size());
    for (size_t i : idx) feats.push_back(schema_.at(i));
    std::vector<FeatureVector> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) {
        FeatureVector q;
        q.reserve(idx.size());
        for (size_t i : idx) q.push_back(p[i]);
        pts.push_back(std::move(q));
    }
    return KnowledgeBase(Schema(std::move(feats)), scaler_.subset(idx),
                         std::move(pts), metadata_);
}

void KnowledgeBase::save(const std::filesystem::path& base) const {
    const auto stem = kb_base_path(base);
    auto json_path = stem;
    json_path += ".kb.json";
    auto csv_path = stem;
    csv_path += ".kb.csv";

    nlohmann::json header;
    header["format"] = kFormatName;
    header["format_version"] = kFormatVersion;
    header["tool_version"] = kVersion;
    auto& features = header["schema"]["features"];
    features = nlohmann::json::array();
    for (const auto& f : schema_.features())
        features.push_back({{"name", f.name},
                            {"role", f.role == FeatureRole::Target ? "target" : "input"}});
    header["scaler"]["min"] = scaler_.mins();
    header["scaler"]["max"] = scaler_.maxs();
    header["metadata"]["source"] = metadata_.source;
    header["metadata"]["created"] = metadata_.created;
    header["metadata"]["count"] = points_.size();
    if (!metadata_.build_config.empty()) {
        try {
            header["metadata"]["config"] = nlohmann::json::parse(metadata_.build_config);
        } catch (const nlohmann::json::exception&) {
            header["metadata"]["config"] = metadata_.build_config;
        }
    }
    header["points_file"] = csv_path.filename().string();

    atomic_write_file(json_path, header.dump(2) + "\n");
    atomic_write_file(csv_path, to_csv(schema_.names(), points_));
}

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& json_path) {
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(read_file(json_path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(json_path.string() + ": bad JSON header: " + e.what());
    }
    try {
        if (header.at("format").get<std::string>() != kFormatName)
            throw ValidationError(json_path.string() + ": not a knowledge-base header");
        std::vector<Feature> feats;
        for (const auto& f : header.at("schema").at("features")) {
            Feature feat;
            feat.name = f.at("name").get<std::string>();
            feat.role = f.at("role").get<std::string>() == "target" ? FeatureRole::Target
                                                                    : FeatureRole::Input;
            feats.push_back(std::move(feat));
        }
        Schema schema(std::move(feats));
        MinMaxScaler scaler(header.at("scaler").at("min").get<std::vector<double>>(),
                            header.at("scaler").at("max").get<std::vector<double>>());

        auto csv_path = json_path;
        csv_path.replace_filename(header.at("points_file").get<std::string>());
        Table table = read_csv_file(csv_path.string());
        if (table.columns != schema.names())
            throw ValidationError(csv_path.string() + ": column order differs from schema");

        KbMetadata meta;
        if (header.contains("metadata")) {
            meta.source = header["metadata"].value("source", "");
            meta.created = header["metadata"].value("created", "");
            if (header["metadata"].contains("config"))
                meta.build_config = header["metadata"]["config"].dump();
        }
        std::vector<FeatureVector> pts(table.rows.begin(), table.rows.end());
        return from_normalized(std::move(schema), std::move(scaler), std::move(pts),
                               std::move(meta));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(json_path.string() + ": malformed header: " + e.what());
    }
}

} // namespace laddr
