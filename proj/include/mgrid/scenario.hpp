#pragma once

#include "mgrid/stochastic.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mgrid {

/// Hour of day of step k is start_hour + k (one-hour steps, wrapping at 24).
struct TimeGrid {
    int K = 24;
    double start_hour = 0.0;

    double hour(int k) const;
};

/// Raised cosine over [window_start_h, window_end_h], peak at the midpoint.
/// Each step is attenuated by a cloud factor min(1, max(0, 1 - cloud_sigma |n|)).
struct SolarModel {
    double peak_kW = 10.0;
    double window_start_h = 5.0;
    double window_end_h = 20.0;
    double cloud_sigma = 0.0;
};

/// AR(1) around the mean, output clipped at 0. The first step is drawn from
/// the stationary distribution.
struct WindModel {
    double mean_kW = 5.0;
    double rho = 0.0;
    double sigma_kW = 0.0;
};

/// base + peak * exp(-(h - peak_hour)^2 / (2 width^2)) + sigma n, clipped at 0.
struct DemandModel {
    double base_kW = 5.0;
    double peak_kW = 0.0;
    double peak_hour = 18.0;
    double width_h = 3.0;
    double sigma_kW = 0.0;
};

using ProfileModel = std::variant<SolarModel, WindModel, DemandModel>;

void validate(const ProfileModel& m);

/// Deterministic per seed. All values are >= 0.
Vector sample_profile(const ProfileModel& m, const TimeGrid& t, std::uint64_t seed);

/// Noise-free curve of a model (the profile at sigma = 0).
Vector base_profile(const ProfileModel& m, const TimeGrid& t);

/// Time-of-use prices per kWh, one value per step.
struct PriceModel {
    std::vector<double> purchase;
    std::vector<double> sell;
};

struct NamedProfile {
    std::string name;
    ProfileModel model;
};

/// Everything random in a scenario: renewable outputs and critical demands are
/// resampled per scenario, controllable-load forecasts are fixed.
struct ScenarioModels {
    TimeGrid time;
    std::vector<NamedProfile> renewables;
    std::vector<NamedProfile> critical_loads;
    std::vector<Vector> controllable_forecasts;
};

enum class PiMode { uniform, random };

PiMode parse_pi_mode(const std::string& s);
std::string to_string(PiMode m);

/// Scenario r, unit j draws from derive_seed(derive_seed(seed, r), j); critical
/// loads continue the unit count after the renewables.
ScenarioSet sample_scenarioset(const ScenarioModels& models, int R, PiMode mode, std::uint64_t seed);

/// Same, with given probabilities (validated, not renormalized).
ScenarioSet sample_scenarioset(const ScenarioModels& models, const std::vector<double>& pi,
                               std::uint64_t seed);

/// One row per (scenario, step): scenario, step, hour, pi, each renewable and
/// critical load by name, then b.
void write_scenarios_csv(std::ostream& os, const ScenarioSet& s, const ScenarioModels& models);

class CsvFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hourly table with an ISO-8601 timestamp column ("2016-01-01T00:00:00Z";
/// a space separator, missing seconds and missing zone are accepted).
struct CsvProfileOptions {
    std::string timestamp_column = "utc_timestamp";
    /// output name -> column name in the file
    std::map<std::string, std::string> columns;
    /// inclusive day window as YYYY-MM-DD; empty means unbounded
    std::string first_day;
    std::string last_day;
};

struct CsvProfiles {
    std::vector<std::string> days;
    /// output name -> one 24-value vector per kept day
    std::map<std::string, std::vector<Vector>> series;
    std::vector<std::string> dropped_days;
};

/// Days with an empty, NaN or missing hour in any mapped column are dropped.
/// Throws CsvFormatError naming the line and column for unparsable cells,
/// non-hourly timestamps and missing columns.
CsvProfiles load_csv_profiles(std::istream& in, const CsvProfileOptions& opts);
CsvProfiles load_csv_profiles(const std::string& path, const CsvProfileOptions& opts);

/// Values of a 24-value day at the grid's hours, interpolated linearly between
/// hourly samples and wrapping at midnight.
Vector resample_day(const Vector& day, const TimeGrid& t);

/// Scenarios from historical days: scenario r takes day index draws from the
/// kept days (uniformly, with replacement) for every renewable column.
/// `renewable_scale` multiplies the column values (e.g. MW of a region to kW
/// of one site). Critical loads are still sampled from `models`.
ScenarioSet historical_scenarioset(const CsvProfiles& profiles,
                                   const std::vector<std::string>& renewable_columns,
                                   double renewable_scale, const ScenarioModels& models, int R,
                                   std::uint64_t seed);

}  // namespace mgrid
