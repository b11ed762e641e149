#pragma once

#include "greyfc/series.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace greyfc::app {

/// A bundled reference dataset with its conventional fit split.
struct Dataset {
    std::string name;
    std::string description;
    std::vector<std::string> labels;
    std::vector<double> values;
    /// Points used for fitting when the user gives no --train override;
    /// the remainder of the series serves as a holdout for evaluation.
    std::size_t default_train = 0;
};

const std::vector<Dataset>& all_datasets();

/// Lookup by name; throws ConfigError listing the available names.
const Dataset& find_dataset(const std::string& name);

TimeSeries dataset_series(const Dataset& dataset);

} // namespace greyfc::app
