#include "greyfc/app/dataset.hpp"

#include "greyfc/errors.hpp"

namespace greyfc::app {

namespace {

std::vector<Dataset> build_datasets() {
    std::vector<Dataset> datasets;

    Dataset gdp;
    gdp.name = "vietnam-gdp";
    gdp.description = "Vietnam annual GDP 2004-2018, billion USD";
    gdp.labels = {"2004", "2005", "2006", "2007", "2008", "2009", "2010", "2011",
                  "2012", "2013", "2014", "2015", "2016", "2017", "2018"};
    gdp.values = {45.42785,  57.63326,  66.37166,  77.41443,  99.13030,
                  106.01466, 115.93175, 135.53944, 155.82000, 171.22203,
                  186.20465, 193.24111, 205.27617, 223.77987, 245.21369};
    gdp.default_train = 10;
    datasets.push_back(std::move(gdp));

    Dataset covid;
    covid.name = "covid-global";
    covid.description = "Worldwide cumulative COVID-19 confirmed cases, "
                        "2020-01-28 to 2020-02-08";
    covid.labels = {"2020-01-28", "2020-01-29", "2020-01-30", "2020-01-31",
                    "2020-02-01", "2020-02-02", "2020-02-03", "2020-02-04",
                    "2020-02-05", "2020-02-06", "2020-02-07", "2020-02-08"};
    covid.values = {6061.0,  7816.0,  9821.0,  11948.0, 14551.0, 17387.0,
                    20626.0, 24553.0, 28276.0, 31439.0, 34875.0, 37552.0};
    covid.default_train = 12;
    datasets.push_back(std::move(covid));

    return datasets;
}

} // namespace

const std::vector<Dataset>& all_datasets() {
    static const std::vector<Dataset> datasets = build_datasets();
    return datasets;
}

const Dataset& find_dataset(const std::string& name) {
    for (const Dataset& dataset : all_datasets()) {
        if (dataset.name == name) {
            return dataset;
        }
    }
    std::string known;
    for (const Dataset& dataset : all_datasets()) {
        if (!known.empty()) {
            known += ", ";
        }
        known += dataset.name;
    }
    throw ConfigError("unknown dataset \"" + name + "\" (available: " + known + ")");
}

TimeSeries dataset_series(const Dataset& dataset) {
    return TimeSeries(dataset.labels, dataset.values);
}

} // namespace greyfc::app
