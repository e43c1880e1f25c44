#pragma once

#include <span>
#include <vector>

namespace gadepth {

// Mann-Whitney AUC with half-credit for ties, computed by rank-sum in
// O(m log m). Throws ValidationError when only one class is present.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

}  // namespace gadepth
