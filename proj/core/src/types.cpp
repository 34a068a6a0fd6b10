#include "hlv/types.hpp"

namespace hlv {

std::string_view to_string(TaskKind kind) {
    return kind == TaskKind::Multiclass ? "multiclass" : "multilabel";
}

TaskKind task_kind_from_string(std::string_view name) {
    if (name == "multiclass") return TaskKind::Multiclass;
    if (name == "multilabel") return TaskKind::Multilabel;
    throw ValidationError("unknown task kind '" + std::string(name) +
                          "' (expected multiclass or multilabel)");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) {
            throw ValidationError("ragged rows: row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " columns, expected " +
                                  std::to_string(m.cols()));
        }
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

}  // namespace hlv
