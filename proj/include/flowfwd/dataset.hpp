#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flowfwd {

// Labeled curve samples: one row = coefficients x1..xN plus a label (a payoff
// draw or a Monte Carlo price) and, optionally, the label's standard error.
struct Dataset {
    int n_coeffs = 0;
    bool has_stderr = false;
    std::vector<double> coeffs;  // rows x n_coeffs, row-major
    std::vector<double> labels;
    std::vector<double> std_errors;  // empty unless has_stderr

    long long rows() const { return static_cast<long long>(labels.size()); }
    std::span<const double> row(long long i) const {
        return {coeffs.data() + i * n_coeffs, static_cast<std::size_t>(n_coeffs)};
    }
    void validate() const;
};

enum class DatasetFormat { Csv, Binary };

DatasetFormat dataset_format_from_name(std::string_view name);
std::string_view dataset_format_name(DatasetFormat f);

// CSV: header "x1,...,xN,label[,stderr]", 17 significant digits (values
// round-trip bit-exactly). Binary: "FFDS" magic, version, dims, then raw
// little-endian doubles in row order.
void save_dataset(const Dataset& ds, const std::string& path, DatasetFormat format);

// Sniffs the format from the file's first bytes.
Dataset load_dataset(const std::string& path);

}  // namespace flowfwd
