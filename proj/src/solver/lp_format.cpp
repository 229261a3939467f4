#include "mgrid/solver.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace mgrid {

namespace {

std::string column_name(const std::vector<std::string>& names, int j)
{
    if (j < static_cast<int>(names.size()) && !names[j].empty()) {
        std::string s = names[j];
        for (char& ch : s) {
            if (ch == '(' || ch == ')' || ch == ',' || ch == ' ') {
                ch = '_';
            }
        }
        return s;
    }
    return fmt::format("x{}", j);
}

void write_linear(std::ostream& os, const Eigen::Ref<const Vector>& coeffs,
                  const std::vector<std::string>& names)
{
    bool first = true;
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
        const double c = coeffs[j];
        if (c == 0.0) {
            continue;
        }
        if (first) {
            os << fmt::format("{:.17g} {}", c, column_name(names, static_cast<int>(j)));
        } else {
            os << fmt::format(" {} {:.17g} {}", c < 0 ? '-' : '+', std::abs(c),
                              column_name(names, static_cast<int>(j)));
        }
        first = false;
    }
    if (first) {
        os << "0 " << column_name(names, 0);
    }
}

}  // namespace

void write_lp_format(std::ostream& os, const LinearProgram& lp,
                     const std::vector<std::string>& var_names)
{
    lp.validate();
    const int n = lp.num_vars();
    os << "\\ generated by mgrid\n";
    os << "Minimize\n obj: ";
    write_linear(os, lp.cost, var_names);
    os << "\nSubject To\n";
    for (int i = 0; i < lp.num_rows(); ++i) {
        os << fmt::format(" r{}: ", i);
        write_linear(os, lp.rows.row(i).transpose(), var_names);
        os << fmt::format(" <= {:.17g}\n", lp.rhs[i]);
    }
    os << "Bounds\n";
    for (int j = 0; j < n; ++j) {
        const auto name = column_name(var_names, j);
        const double lo = lp.lower[j];
        const double hi = lp.upper[j];
        if (std::isinf(lo) && std::isinf(hi)) {
            os << fmt::format(" {} free\n", name);
        } else if (std::isinf(hi)) {
            os << fmt::format(" {} >= {:.17g}\n", name, lo);
        } else if (std::isinf(lo)) {
            os << fmt::format(" -inf <= {} <= {:.17g}\n", name, hi);
        } else {
            os << fmt::format(" {:.17g} <= {} <= {:.17g}\n", lo, name, hi);
        }
    }
    std::vector<int> binaries;
    std::vector<int> generals;
    for (int j = 0; j < static_cast<int>(lp.integer.size()); ++j) {
        if (!lp.integer[j]) {
            continue;
        }
        if (lp.lower[j] >= 0.0 && lp.upper[j] <= 1.0) {
            binaries.push_back(j);
        } else {
            generals.push_back(j);
        }
    }
    if (!generals.empty()) {
        os << "Generals\n";
        for (int j : generals) {
            os << ' ' << column_name(var_names, j) << '\n';
        }
    }
    if (!binaries.empty()) {
        os << "Binaries\n";
        for (int j : binaries) {
            os << ' ' << column_name(var_names, j) << '\n';
        }
    }
    os << "End\n";
}

}  // namespace mgrid
