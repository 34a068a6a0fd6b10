#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hlv/annotations.hpp"
#include "hlv/features.hpp"
#include "hlv/judgement.hpp"
#include "hlv/label_space.hpp"

namespace hlv {

// File formats (all UTF-8):
//   manifest      {"task": "multiclass"|"multilabel", "classes": [names...]}
//   annotations   one record per line:
//                 {"instance_id": s, "annotator_id": s|null, "labels": [names...]}
//   judgements    one row per line:
//                 {"instance_id": s, "judgements": {name: value, ...}}
//   features      one row per line:
//                 {"instance_id": s, "features": [numbers...]}
// Parse errors report the offending line number.

LabelSpace read_label_space(const std::filesystem::path& path);

/// Records grouped by instance_id in first-appearance order. Duplicate
/// (instance_id, annotator_id) pairs and unknown class names are errors.
AnnotationSet read_annotations(const std::filesystem::path& path, const LabelSpace& space);

struct TextAnnotations {
    AnnotationSet annotations;
    std::vector<std::string> texts;  // aligned with annotations.instances()
};

/// Same as read_annotations, additionally pulling a per-instance text from
/// `text_field` of each instance's first record.
TextAnnotations read_annotations_with_text(const std::filesystem::path& path,
                                           const LabelSpace& space,
                                           std::string_view text_field);

struct NamedJudgements {
    std::vector<std::string> ids;
    JudgementMatrix judgements;
};

/// Judgement rows in file order. Classes missing from a row's map default to
/// 0; unknown names and duplicate instance ids are errors.
NamedJudgements read_judgements(const std::filesystem::path& path, const LabelSpace& space);

struct NamedFeatures {
    std::vector<std::string> ids;
    FeatureSet features;
};

NamedFeatures read_features(const std::filesystem::path& path);

/// Reorder named rows to match `reference_ids`. Missing and extra ids are
/// listed in the error.
JudgementMatrix align_judgements(const NamedJudgements& named,
                                 std::span<const std::string> reference_ids);
FeatureSet align_features(const NamedFeatures& named,
                          std::span<const std::string> reference_ids);

/// One judgement row per line, values formatted with 9 significant digits.
void write_judgements(const std::filesystem::path& path, std::span<const std::string> ids,
                      const JudgementMatrix& judgements, const LabelSpace& space);

/// "%.9g" formatting used for every number emitted to CSV/JSON outputs.
std::string format_sig9(double value);

/// Nearest double to the 9-significant-digit decimal rendering of `value`.
double round_sig9(double value);

/// FNV-1a 64-bit digest of a file's bytes, as fixed-width hex.
std::string file_digest(const std::filesystem::path& path);

}  // namespace hlv
