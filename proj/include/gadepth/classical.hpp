#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gadepth/dataset.hpp"

namespace gadepth {

struct ClassicalConfig {
    std::uint64_t seed = 0;
    double gower_epsilon = 0.15;     // edge threshold for the instance graph
    double pca_variance = 0.95;      // cumulative variance target for t3/t4
    int hinge_epochs = 2000;         // linear classifier budget for l1-l3
    double hinge_lambda = 1e-4;
};

// Every metric is oriented so that larger means more complex; values defined
// on [0,1] stay there, l1/t2/t3 are merely nonnegative.
struct ClassicalReport {
    std::map<std::string, double> values;
    double score = 0.0;  // mean of all values clamped to [0,1]
};

// canonical metric order used in the CSV layout
const std::vector<std::string>& classical_metric_names();

std::map<std::string, double> feature_based_measures(const Dataset& data);
std::map<std::string, double> linearity_measures(const Dataset& data,
                                                 const ClassicalConfig& config = {});
std::map<std::string, double> neighborhood_measures(const Dataset& data,
                                                    const ClassicalConfig& config = {});
std::map<std::string, double> network_measures(const Dataset& data,
                                               const ClassicalConfig& config = {});
std::map<std::string, double> dimensionality_measures(const Dataset& data,
                                                      const ClassicalConfig& config = {});
std::map<std::string, double> class_imbalance_measures(const Dataset& data);

ClassicalReport full_report(const Dataset& data, const ClassicalConfig& config = {});

std::string classical_report_to_json(const ClassicalReport& report);
std::string classical_report_to_csv(const ClassicalReport& report);

// Graph-level routines, exposed so degenerate graphs can be exercised
// directly (the dataset path always prunes inter-class edges first).
struct GraphMeasures {
    double density = 0.0;
    double cls_coef = 0.0;
    double hubs = 0.0;
};
GraphMeasures network_measures_from_adjacency(std::vector<std::vector<std::size_t>> adj);
std::vector<double> hub_scores(const std::vector<std::vector<std::size_t>>& adj);

}  // namespace gadepth
