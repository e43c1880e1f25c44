#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gadepth/matrix.hpp"

namespace gadepth {

// Raised for anything a user could have gotten wrong: bad flags, malformed
// input files, violated preconditions. The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable numeric feature matrix with binary labels. Once constructed it is
// never mutated, so concurrent readers need no synchronization.
struct Dataset {
    Matrix features;                          // n x d, all finite
    std::vector<int> labels;                  // n entries, each 0 or 1
    std::vector<std::string> feature_names;   // d unique names
    std::array<std::string, 2> class_names{"0", "1"};  // raw label text per class

    std::size_t n_rows() const { return features.rows; }
    std::size_t n_features() const { return features.cols; }
    std::size_t class_count(int cls) const;
};

// Validates every Dataset invariant; throws ValidationError on the first hit.
Dataset make_dataset(Matrix features, std::vector<int> labels,
                     std::vector<std::string> feature_names,
                     std::array<std::string, 2> class_names = {"0", "1"});

struct Partition {
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    std::vector<std::size_t> validation_idx;
};

struct FoldPlan {
    int k = 0;
    std::vector<std::size_t> indices;  // sorted member indices
    std::vector<int> fold_of;          // fold id per member, aligned with indices

    std::vector<std::size_t> fold_members(int fold) const;
    std::vector<std::size_t> fold_complement(int fold) const;
};

// Loads a delimited text file (',' or '\t') with a header row. label_column
// must name exactly one column whose values form exactly two classes; classes
// map to 0/1 in lexicographic order of their raw text unless positive_label
// pins class 1. Errors carry 1-based data row numbers and column names.
Dataset load_dataset(const std::string& path, const std::string& label_column = "class",
                     char delimiter = ',', const std::string& positive_label = "");

void save_dataset(const Dataset& data, const std::string& path,
                  const std::string& label_column = "class", char delimiter = ',');

// Stratified 60/20/20 split. Remainder rows inside each class go to the
// partitions with the largest fractional targets, ties settled by a seeded
// shuffle. Requires >= 5 members per class.
Partition split_partition(const Dataset& data, std::uint64_t seed);

// Stratified k folds over an arbitrary index set. Per-class counts across
// folds differ by at most one. Requires >= k members of each class.
FoldPlan stratified_kfold(std::vector<std::size_t> indices, const std::vector<int>& labels,
                          int k, std::uint64_t seed);

std::string partition_to_json(const Partition& p);
std::string fold_plan_to_json(const FoldPlan& f);

}  // namespace gadepth
