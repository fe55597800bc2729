#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "tempoca/error.hpp"

namespace tempoca {

// A multivariate time series: n_rows observations of n_cols named variables.
// Storage is column-major so a single variable's history is contiguous, which
// is what every estimator downstream wants to slice.
class Panel {
public:
    Panel() = default;

    // data is column-major: data[c * n_rows + r] is row r of column c.
    Panel(std::vector<std::string> names, std::vector<double> data, std::size_t n_rows)
        : names_(std::move(names)), data_(std::move(data)), n_rows_(n_rows) {
        if (names_.empty())
            throw Error(ErrorKind::ShapeError, "panel needs at least one column");
        if (data_.size() != names_.size() * n_rows_)
            throw Error(ErrorKind::ShapeError, "panel data size does not match names x rows");
        check_finite();
    }

    std::size_t n_rows() const noexcept { return n_rows_; }
    std::size_t n_cols() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    const double* col(std::size_t c) const { return data_.data() + c * n_rows_; }
    double at(std::size_t r, std::size_t c) const { return data_[c * n_rows_ + r]; }
    double& at(std::size_t r, std::size_t c) { return data_[c * n_rows_ + r]; }

    // Rescales every column to mean 0, sample sd 1. A zero-variance column has
    // no scale to normalize by and would break the distance-based estimators
    // anyway, so it is rejected here.
    void standardize() {
        for (std::size_t c = 0; c < n_cols(); ++c) {
            double* x = data_.data() + c * n_rows_;
            double mean = 0.0;
            for (std::size_t r = 0; r < n_rows_; ++r) mean += x[r];
            mean /= static_cast<double>(n_rows_);
            double ss = 0.0;
            for (std::size_t r = 0; r < n_rows_; ++r) {
                const double d = x[r] - mean;
                ss += d * d;
            }
            if (n_rows_ < 2 || ss == 0.0)
                throw Error(ErrorKind::ConstantSeries,
                            "column '" + names_[c] + "' has zero variance");
            const double sd = std::sqrt(ss / static_cast<double>(n_rows_ - 1));
            for (std::size_t r = 0; r < n_rows_; ++r) x[r] = (x[r] - mean) / sd;
        }
    }

    Panel standardized() const {
        Panel p = *this;
        p.standardize();
        return p;
    }

    // CSV layout: one header row with column names, then one row per time
    // step. Values are written with std::to_chars shortest round-trip form,
    // so write -> read restores every double bit-exactly.
    void write_csv(std::ostream& os) const {
        for (std::size_t c = 0; c < n_cols(); ++c) {
            if (c) os << ',';
            os << names_[c];
        }
        os << '\n';
        char buf[64];
        for (std::size_t r = 0; r < n_rows_; ++r) {
            for (std::size_t c = 0; c < n_cols(); ++c) {
                if (c) os << ',';
                auto res = std::to_chars(buf, buf + sizeof buf, at(r, c));
                os.write(buf, res.ptr - buf);
            }
            os << '\n';
        }
    }

    void save_csv(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
        write_csv(os);
        if (!os) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
    }

    static Panel read_csv(std::istream& is) {
        std::string line;
        if (!std::getline(is, line))
            throw Error(ErrorKind::ParseError, "empty CSV input");
        strip_cr(line);
        std::vector<std::string> names = split(line);
        if (names.empty() || names.front().empty())
            throw Error(ErrorKind::ParseError, "CSV header row is empty");

        std::vector<std::vector<double>> cols(names.size());
        std::size_t lineno = 1;
        while (std::getline(is, line)) {
            ++lineno;
            strip_cr(line);
            if (line.empty()) continue;
            std::vector<std::string> fields = split(line);
            if (fields.size() != names.size())
                throw Error(ErrorKind::ParseError,
                            "line " + std::to_string(lineno) + ": expected " +
                                std::to_string(names.size()) + " fields, got " +
                                std::to_string(fields.size()));
            for (std::size_t c = 0; c < fields.size(); ++c)
                cols[c].push_back(parse_double(fields[c], lineno));
        }
        if (cols[0].empty())
            throw Error(ErrorKind::ParseError, "CSV has a header but no data rows");

        std::vector<double> data;
        data.reserve(names.size() * cols[0].size());
        for (auto& c : cols) data.insert(data.end(), c.begin(), c.end());
        return Panel(std::move(names), std::move(data), cols[0].size());
    }

    static Panel load_csv(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
        return read_csv(is);
    }

private:
    void check_finite() const {
        for (std::size_t c = 0; c < n_cols(); ++c)
            for (std::size_t r = 0; r < n_rows_; ++r)
                if (!std::isfinite(at(r, c)))
                    throw Error(ErrorKind::MissingValue,
                                "non-finite value in column '" + names_[c] + "' row " +
                                    std::to_string(r));
    }

    static void strip_cr(std::string& s) {
        if (!s.empty() && s.back() == '\r') s.pop_back();
    }

    static std::vector<std::string> split(const std::string& line) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (true) {
            std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                out.push_back(line.substr(start));
                break;
            }
            out.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        return out;
    }

    static double parse_double(const std::string& field, std::size_t lineno) {
        double v = 0.0;
        const char* first = field.data();
        const char* last = field.data() + field.size();
        auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last)
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(lineno) + ": '" + field + "' is not a number");
        return v;
    }

    std::vector<std::string> names_;
    std::vector<double> data_; // column-major
    std::size_t n_rows_ = 0;
};

} // namespace tempoca
