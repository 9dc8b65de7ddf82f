#include "flowfwd/dataset.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flowfwd {

namespace {

constexpr char kMagic[4] = {'F', 'F', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

void write_or_die(std::ofstream& out, const void* p, std::size_t n, const std::string& path) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out) fail(path, "write failed");
}

double parse_field(const std::string& field, const std::string& path, long long line) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
        fail(path, "line " + std::to_string(line) + ": bad number '" + field + "'");
    if (!std::isfinite(v))
        fail(path, "line " + std::to_string(line) + ": non-finite value '" + field + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

Dataset load_csv(std::ifstream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_csv(line);
    Dataset ds;
    std::size_t pos = 0;
    while (pos < header.size() && header[pos] == "x" + std::to_string(pos + 1)) ++pos;
    ds.n_coeffs = static_cast<int>(pos);
    if (ds.n_coeffs == 0 || pos >= header.size() || header[pos] != "label")
        fail(path, "header must read x1,...,xN,label[,stderr]");
    ++pos;
    if (pos < header.size()) {
        if (header[pos] != "stderr" || pos + 1 != header.size())
            fail(path, "header must read x1,...,xN,label[,stderr]");
        ds.has_stderr = true;
    }

    const std::size_t want = header.size();
    long long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != want)
            fail(path, "line " + std::to_string(line_no) + ": expected " + std::to_string(want) +
                           " fields, got " + std::to_string(fields.size()));
        for (int k = 0; k < ds.n_coeffs; ++k)
            ds.coeffs.push_back(parse_field(fields[k], path, line_no));
        ds.labels.push_back(parse_field(fields[ds.n_coeffs], path, line_no));
        if (ds.has_stderr)
            ds.std_errors.push_back(parse_field(fields[ds.n_coeffs + 1], path, line_no));
    }
    return ds;
}

Dataset load_binary(std::ifstream& in, const std::string& path) {
    auto read_or_die = [&](void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (in.gcount() != static_cast<std::streamsize>(n)) fail(path, "truncated file");
    };
    char magic[4];
    read_or_die(magic, 4);
    std::uint32_t version = 0, n_coeffs = 0;
    std::uint8_t has_stderr = 0, pad[3];
    std::uint64_t rows = 0;
    read_or_die(&version, 4);
    if (version != kVersion) fail(path, "unsupported format version " + std::to_string(version));
    read_or_die(&n_coeffs, 4);
    read_or_die(&has_stderr, 1);
    read_or_die(pad, 3);
    read_or_die(&rows, 8);
    if (n_coeffs == 0 || n_coeffs > 1024) fail(path, "implausible coefficient count");

    Dataset ds;
    ds.n_coeffs = static_cast<int>(n_coeffs);
    ds.has_stderr = has_stderr != 0;
    ds.coeffs.resize(rows * n_coeffs);
    ds.labels.resize(rows);
    if (ds.has_stderr) ds.std_errors.resize(rows);
    for (std::uint64_t r = 0; r < rows; ++r) {
        read_or_die(ds.coeffs.data() + r * n_coeffs, 8 * n_coeffs);
        read_or_die(&ds.labels[r], 8);
        if (ds.has_stderr) read_or_die(&ds.std_errors[r], 8);
    }
    return ds;
}

}  // namespace

void Dataset::validate() const {
    if (n_coeffs < 1) throw std::invalid_argument("Dataset: no coefficients");
    if (coeffs.size() != labels.size() * static_cast<std::size_t>(n_coeffs))
        throw std::invalid_argument("Dataset: coefficient/label count mismatch");
    if (has_stderr && std_errors.size() != labels.size())
        throw std::invalid_argument("Dataset: stderr/label count mismatch");
    if (!has_stderr && !std_errors.empty())
        throw std::invalid_argument("Dataset: stderr values present but flag unset");
}

DatasetFormat dataset_format_from_name(std::string_view name) {
    if (name == "csv") return DatasetFormat::Csv;
    if (name == "binary") return DatasetFormat::Binary;
    throw std::invalid_argument("unknown dataset format '" + std::string(name) +
                                "' (want csv or binary)");
}

std::string_view dataset_format_name(DatasetFormat f) {
    return f == DatasetFormat::Csv ? "csv" : "binary";
}

void save_dataset(const Dataset& ds, const std::string& path, DatasetFormat format) {
    ds.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");

    if (format == DatasetFormat::Binary) {
        write_or_die(out, kMagic, 4, path);
        write_or_die(out, &kVersion, 4, path);
        const std::uint32_t n_coeffs = static_cast<std::uint32_t>(ds.n_coeffs);
        write_or_die(out, &n_coeffs, 4, path);
        const std::uint8_t has_stderr = ds.has_stderr ? 1 : 0;
        const std::uint8_t pad[3] = {0, 0, 0};
        write_or_die(out, &has_stderr, 1, path);
        write_or_die(out, pad, 3, path);
        const std::uint64_t rows = static_cast<std::uint64_t>(ds.rows());
        write_or_die(out, &rows, 8, path);
        for (long long r = 0; r < ds.rows(); ++r) {
            write_or_die(out, ds.coeffs.data() + r * ds.n_coeffs, 8ull * ds.n_coeffs, path);
            write_or_die(out, &ds.labels[r], 8, path);
            if (ds.has_stderr) write_or_die(out, &ds.std_errors[r], 8, path);
        }
        return;
    }

    std::string buf;
    for (int k = 1; k <= ds.n_coeffs; ++k) buf += "x" + std::to_string(k) + ",";
    buf += "label";
    if (ds.has_stderr) buf += ",stderr";
    buf += "\n";
    char num[40];
    for (long long r = 0; r < ds.rows(); ++r) {
        for (int k = 0; k < ds.n_coeffs; ++k) {
            std::snprintf(num, sizeof num, "%.17g,", ds.coeffs[r * ds.n_coeffs + k]);
            buf += num;
        }
        std::snprintf(num, sizeof num, "%.17g", ds.labels[r]);
        buf += num;
        if (ds.has_stderr) {
            std::snprintf(num, sizeof num, ",%.17g", ds.std_errors[r]);
            buf += num;
        }
        buf += "\n";
        if (buf.size() > (1u << 20)) {
            write_or_die(out, buf.data(), buf.size(), path);
            buf.clear();
        }
    }
    write_or_die(out, buf.data(), buf.size(), path);
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    in.clear();
    in.seekg(0);
    Dataset ds = std::memcmp(magic, kMagic, 4) == 0 ? load_binary(in, path) : load_csv(in, path);
    ds.validate();
    return ds;
}

}  // namespace flowfwd
