#include "hlv/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "internal/fnv.hpp"

namespace hlv {

namespace {

using nlohmann::json;

[[noreturn]] void line_error(const std::filesystem::path& path, std::size_t line,
                             const std::string& message) {
    throw ValidationError(path.string() + ":" + std::to_string(line) + ": " + message);
}

json parse_line(const std::filesystem::path& path, std::size_t line, const std::string& text) {
    try {
        json j = json::parse(text);
        if (!j.is_object()) line_error(path, line, "expected a JSON object");
        return j;
    } catch (const json::exception& e) {
        line_error(path, line, std::string("malformed JSON: ") + e.what());
    }
}

std::string get_string(const json& j, const char* field, const std::filesystem::path& path,
                       std::size_t line) {
    if (!j.contains(field) || !j.at(field).is_string()) {
        line_error(path, line, "missing or non-string field \"" + std::string(field) + "\"");
    }
    return j.at(field).get<std::string>();
}

/// Shared walk over an annotation file; `on_instance_text` fires once per
/// new instance with that instance's record object.
template <typename OnText>
AnnotationSet read_annotation_lines(const std::filesystem::path& path, const LabelSpace& space,
                                    OnText&& on_new_instance) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open annotation file '" + path.string() + "'");

    std::vector<AnnotatedInstance> instances;
    std::unordered_map<std::string, std::size_t> instance_index;
    std::unordered_map<std::string, std::unordered_set<std::string>> seen_annotators;

    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        const json j = parse_line(path, line, text);
        std::string id = get_string(j, "instance_id", path, line);

        AnnotationRecord record;
        if (j.contains("annotator_id") && !j.at("annotator_id").is_null()) {
            if (!j.at("annotator_id").is_string()) {
                line_error(path, line, "field \"annotator_id\" must be a string or null");
            }
            record.annotator = j.at("annotator_id").get<std::string>();
        }
        if (!j.contains("labels") || !j.at("labels").is_array()) {
            line_error(path, line, "missing or non-array field \"labels\"");
        }
        for (const auto& name : j.at("labels")) {
            if (!name.is_string()) line_error(path, line, "label names must be strings");
            const auto index = space.index_of(name.get<std::string>());
            if (!index) {
                line_error(path, line, "unknown class '" + name.get<std::string>() + "'");
            }
            record.labels.push_back(*index);
        }
        std::sort(record.labels.begin(), record.labels.end());
        if (std::adjacent_find(record.labels.begin(), record.labels.end()) !=
            record.labels.end()) {
            line_error(path, line, "duplicate label in record");
        }
        if (space.kind() == TaskKind::Multiclass && record.labels.size() != 1) {
            line_error(path, line, "multiclass record must carry exactly 1 label, got " +
                                       std::to_string(record.labels.size()));
        }
        if (record.annotator.has_value()) {
            if (!seen_annotators[id].insert(*record.annotator).second) {
                line_error(path, line, "duplicate annotation by annotator '" +
                                           *record.annotator + "' on instance '" + id + "'");
            }
        }

        auto [it, inserted] = instance_index.emplace(id, instances.size());
        if (inserted) {
            instances.push_back({std::move(id), {}});
            on_new_instance(j, line);
        }
        instances[it->second].records.push_back(std::move(record));
    }
    if (instances.empty()) {
        throw ValidationError("annotation file '" + path.string() + "' has no records");
    }
    return {std::move(instances), space};
}

}  // namespace

LabelSpace read_label_space(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open manifest file '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": malformed JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("task") || !j.contains("classes")) {
        throw ValidationError(path.string() + ": manifest needs \"task\" and \"classes\"");
    }
    const TaskKind kind = task_kind_from_string(j.at("task").get<std::string>());
    if (!j.at("classes").is_array()) {
        throw ValidationError(path.string() + ": \"classes\" must be an array of strings");
    }
    std::vector<std::string> classes;
    for (const auto& name : j.at("classes")) {
        if (!name.is_string()) {
            throw ValidationError(path.string() + ": \"classes\" must be an array of strings");
        }
        classes.push_back(name.get<std::string>());
    }
    return {std::move(classes), kind};
}

AnnotationSet read_annotations(const std::filesystem::path& path, const LabelSpace& space) {
    return read_annotation_lines(path, space, [](const json&, std::size_t) {});
}

TextAnnotations read_annotations_with_text(const std::filesystem::path& path,
                                           const LabelSpace& space,
                                           std::string_view text_field) {
    std::vector<std::string> texts;
    const std::string field(text_field);
    AnnotationSet annotations =
        read_annotation_lines(path, space, [&](const json& j, std::size_t line) {
            if (!j.contains(field) || !j.at(field).is_string()) {
                line_error(path, line,
                           "missing or non-string text field \"" + field + "\"");
            }
            texts.push_back(j.at(field).get<std::string>());
        });
    return {std::move(annotations), std::move(texts)};
}

NamedJudgements read_judgements(const std::filesystem::path& path, const LabelSpace& space) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open judgement file '" + path.string() + "'");

    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    std::unordered_set<std::string> seen;

    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        const json j = parse_line(path, line, text);
        std::string id = get_string(j, "instance_id", path, line);
        if (!seen.insert(id).second) {
            line_error(path, line, "duplicate instance id '" + id + "'");
        }
        if (!j.contains("judgements") || !j.at("judgements").is_object()) {
            line_error(path, line, "missing or non-object field \"judgements\"");
        }
        std::vector<double> row(space.size(), 0.0);
        double sum = 0.0;
        for (const auto& [name, value] : j.at("judgements").items()) {
            const auto index = space.index_of(name);
            if (!index) line_error(path, line, "unknown class '" + name + "'");
            if (!value.is_number()) {
                line_error(path, line, "judgement for class '" + name + "' is not a number");
            }
            row[*index] = value.get<double>();
            if (row[*index] < 0.0 || row[*index] > 1.0) {
                line_error(path, line, "judgement for class '" + name + "' outside [0,1]");
            }
            sum += row[*index];
        }
        if (space.kind() == TaskKind::Multiclass && std::abs(sum - 1.0) > kRowSumTolerance) {
            line_error(path, line,
                       "multiclass judgements sum to " + std::to_string(sum) +
                           ", expected 1");
        }
        ids.push_back(std::move(id));
        rows.push_back(std::move(row));
    }
    if (ids.empty()) {
        throw ValidationError("judgement file '" + path.string() + "' has no rows");
    }
    return {std::move(ids), JudgementMatrix(Matrix::from_rows(rows), space.kind())};
}

NamedFeatures read_features(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open feature file '" + path.string() + "'");

    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    std::unordered_set<std::string> seen;

    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        const json j = parse_line(path, line, text);
        std::string id = get_string(j, "instance_id", path, line);
        if (!seen.insert(id).second) {
            line_error(path, line, "duplicate instance id '" + id + "'");
        }
        if (!j.contains("features") || !j.at("features").is_array()) {
            line_error(path, line, "missing or non-array field \"features\"");
        }
        std::vector<double> row;
        for (const auto& value : j.at("features")) {
            if (!value.is_number()) line_error(path, line, "features must be numbers");
            row.push_back(value.get<double>());
        }
        if (row.empty()) line_error(path, line, "feature row is empty");
        if (!rows.empty() && row.size() != rows.front().size()) {
            line_error(path, line, "feature row has " + std::to_string(row.size()) +
                                       " values, expected " +
                                       std::to_string(rows.front().size()));
        }
        ids.push_back(std::move(id));
        rows.push_back(std::move(row));
    }
    if (ids.empty()) {
        throw ValidationError("feature file '" + path.string() + "' has no rows");
    }
    return {std::move(ids), FeatureSet::from_dense(Matrix::from_rows(rows))};
}

namespace {

std::vector<std::size_t> alignment(std::span<const std::string> ids,
                                   std::span<const std::string> reference_ids) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

    std::vector<std::size_t> order;
    std::vector<std::string> missing;
    std::unordered_set<std::string> used;
    for (const auto& id : reference_ids) {
        auto it = index.find(id);
        if (it == index.end()) {
            missing.push_back(id);
        } else {
            order.push_back(it->second);
            used.insert(id);
        }
    }
    std::vector<std::string> extra;
    for (const auto& id : ids) {
        if (!used.contains(id)) extra.push_back(id);
    }
    if (!missing.empty() || !extra.empty()) {
        auto preview = [](const std::vector<std::string>& v) {
            std::string out;
            for (std::size_t i = 0; i < v.size() && i < 10; ++i) {
                if (i > 0) out += ", ";
                out += v[i];
            }
            if (v.size() > 10) out += ", ... (" + std::to_string(v.size()) + " total)";
            return out;
        };
        std::string message = "instance ids do not align with the reference";
        if (!missing.empty()) message += "; missing: " + preview(missing);
        if (!extra.empty()) message += "; extra: " + preview(extra);
        throw ValidationError(message);
    }
    return order;
}

}  // namespace

JudgementMatrix align_judgements(const NamedJudgements& named,
                                 std::span<const std::string> reference_ids) {
    const auto order = alignment(named.ids, reference_ids);
    Matrix values(order.size(), named.judgements.classes());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto src = named.judgements.values().row(order[i]);
        std::copy(src.begin(), src.end(), values.row(i).begin());
    }
    return {std::move(values), named.judgements.kind()};
}

FeatureSet align_features(const NamedFeatures& named,
                          std::span<const std::string> reference_ids) {
    const auto order = alignment(named.ids, reference_ids);
    std::vector<std::vector<FeatureEntry>> rows;
    rows.reserve(order.size());
    for (std::size_t i : order) {
        const auto row = named.features.row(i);
        rows.emplace_back(row.begin(), row.end());
    }
    return {named.features.dims(), std::move(rows)};
}

void write_judgements(const std::filesystem::path& path, std::span<const std::string> ids,
                      const JudgementMatrix& judgements, const LabelSpace& space) {
    if (ids.size() != judgements.examples() || space.size() != judgements.classes()) {
        throw ValidationError("judgement shape does not match ids or label space");
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    for (std::size_t i = 0; i < ids.size(); ++i) {
        json row;
        row["instance_id"] = ids[i];
        json cells = json::object();
        for (std::size_t k = 0; k < space.size(); ++k) {
            cells[space.name_of(k)] = round_sig9(judgements.values()(i, k));
        }
        row["judgements"] = std::move(cells);
        out << row.dump() << '\n';
    }
    if (!out) throw ValidationError("failed writing judgements to '" + path.string() + "'");
}

std::string format_sig9(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

double round_sig9(double value) { return std::strtod(format_sig9(value).c_str(), nullptr); }

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "' for digesting");
    std::uint64_t hash = detail::fnv1a64("");
    char buffer[1 << 16];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        hash = detail::fnv1a64_append(
            hash, std::string_view(buffer, static_cast<std::size_t>(in.gcount())));
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

}  // namespace hlv
