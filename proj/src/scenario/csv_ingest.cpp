#include "mgrid/scenario.hpp"

#include "mgrid/csv.hpp"
#include "mgrid/rng.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include <fmt/core.h>

namespace mgrid {

namespace {

struct Stamp {
    std::string day;
    int hour = 0;
};

bool digits(const std::string& s, std::size_t pos, std::size_t n)
{
    if (pos + n > s.size()) {
        return false;
    }
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    return true;
}

// YYYY-MM-DD[T| ]HH:MM[:SS][Z|+HH:MM]
bool parse_stamp(const std::string& s, Stamp& out, bool& hourly)
{
    if (!digits(s, 0, 4) || s.size() < 16 || s[4] != '-' || !digits(s, 5, 2) || s[7] != '-' ||
        !digits(s, 8, 2) || (s[10] != 'T' && s[10] != ' ') || !digits(s, 11, 2) || s[13] != ':' ||
        !digits(s, 14, 2)) {
        return false;
    }
    std::size_t pos = 16;
    int second = 0;
    if (pos < s.size() && s[pos] == ':') {
        if (!digits(s, pos + 1, 2)) {
            return false;
        }
        second = std::stoi(s.substr(pos + 1, 2));
        pos += 3;
    }
    const std::string zone = s.substr(pos);
    if (!(zone.empty() || zone == "Z" || (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') &&
                                          digits(zone, 1, 2) && zone[3] == ':' && digits(zone, 4, 2)))) {
        return false;
    }
    out.day = s.substr(0, 10);
    out.hour = std::stoi(s.substr(11, 2));
    const int minute = std::stoi(s.substr(14, 2));
    hourly = minute == 0 && second == 0;
    return out.hour < 24 && minute < 60 && second < 60;
}

}  // namespace

CsvProfiles load_csv_profiles(std::istream& in, const CsvProfileOptions& opts)
{
    if (opts.columns.empty()) {
        throw std::invalid_argument("no columns requested");
    }
    csv::Table t;
    try {
        t = csv::read(in);
    } catch (const std::runtime_error& e) {
        throw CsvFormatError(e.what());
    }
    const int ts = t.column(opts.timestamp_column);
    if (ts < 0) {
        throw CsvFormatError(fmt::format("missing timestamp column '{}'", opts.timestamp_column));
    }
    std::vector<std::pair<std::string, int>> cols;
    for (const auto& [name, column] : opts.columns) {
        const int j = t.column(column);
        if (j < 0) {
            throw CsvFormatError(fmt::format("missing column '{}' (for '{}')", column, name));
        }
        cols.emplace_back(name, j);
    }

    // day -> hour -> values (NaN marks a missing cell)
    std::map<std::string, std::map<int, std::vector<double>>> days;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        Stamp st;
        bool hourly = false;
        if (!parse_stamp(row[ts], st, hourly)) {
            throw CsvFormatError(fmt::format("line {}, column '{}': bad timestamp '{}'", t.lines[i],
                                             opts.timestamp_column, row[ts]));
        }
        if (!hourly) {
            throw CsvFormatError(fmt::format("line {}, column '{}': '{}' is not on the hour",
                                             t.lines[i], opts.timestamp_column, row[ts]));
        }
        if ((!opts.first_day.empty() && st.day < opts.first_day) ||
            (!opts.last_day.empty() && st.day > opts.last_day)) {
            continue;
        }
        std::vector<double> v(cols.size(), std::nan(""));
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const std::string& cell = row[cols[c].second];
            if (cell.empty()) {
                continue;
            }
            if (!csv::parse_number(cell, v[c])) {
                throw CsvFormatError(fmt::format("line {}, column '{}': '{}' is not a number",
                                                 t.lines[i], t.header[cols[c].second], cell));
            }
        }
        auto& hours = days[st.day];
        if (!hours.emplace(st.hour, std::move(v)).second) {
            throw CsvFormatError(fmt::format("line {}: duplicate timestamp '{}'", t.lines[i], row[ts]));
        }
    }

    CsvProfiles out;
    for (const auto& [name, j] : cols) {
        (void)j;
        out.series[name];
    }
    for (const auto& [day, hours] : days) {
        bool complete = hours.size() == 24;
        for (const auto& [h, v] : hours) {
            for (double x : v) {
                complete = complete && std::isfinite(x);
            }
        }
        if (!complete) {
            out.dropped_days.push_back(day);
            continue;
        }
        out.days.push_back(day);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            Vector series(24);
            for (const auto& [h, v] : hours) {
                series[h] = v[c];
            }
            out.series[cols[c].first].push_back(std::move(series));
        }
    }
    return out;
}

CsvProfiles load_csv_profiles(const std::string& path, const CsvProfileOptions& opts)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CsvFormatError(fmt::format("cannot open '{}'", path));
    }
    return load_csv_profiles(in, opts);
}

Vector resample_day(const Vector& day, const TimeGrid& t)
{
    if (day.size() != 24) {
        throw std::invalid_argument("a day has 24 hourly values");
    }
    Vector out(t.K);
    for (int k = 0; k < t.K; ++k) {
        const double h = t.hour(k);
        const int lo = static_cast<int>(std::floor(h));
        const double f = h - lo;
        // linear interpolation between hours, wrapping at midnight
        out[k] = (1.0 - f) * day[lo % 24] + f * day[(lo + 1) % 24];
    }
    return out;
}

ScenarioSet historical_scenarioset(const CsvProfiles& profiles,
                                   const std::vector<std::string>& renewable_columns,
                                   double renewable_scale, const ScenarioModels& models, int R,
                                   std::uint64_t seed)
{
    if (R < 1) {
        throw std::invalid_argument("scenario count R must be >= 1");
    }
    if (profiles.days.empty()) {
        throw std::invalid_argument("no complete days to draw scenarios from");
    }
    for (const auto& c : renewable_columns) {
        if (!profiles.series.count(c)) {
            throw std::invalid_argument(fmt::format("no series named '{}'", c));
        }
    }
    ScenarioSet synthetic = sample_scenarioset(models, R, PiMode::uniform, seed);
    Rng rng(derive_seed(seed, 0x68u));
    std::vector<BalanceProfiles> realizations = synthetic.realizations;
    for (int r = 0; r < R; ++r) {
        const auto day = static_cast<std::size_t>(rng.uniform_int(profiles.days.size()));
        auto& ren = realizations[r].renewable_output;
        ren.clear();
        for (const auto& c : renewable_columns) {
            ren.push_back(renewable_scale * resample_day(profiles.series.at(c)[day], models.time));
        }
    }
    return make_scenario_set(synthetic.pi, std::move(realizations), models.time.K);
}

}  // namespace mgrid
