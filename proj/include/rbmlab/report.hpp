#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rbmlab {

using ordered_json = nlohmann::ordered_json;

// Shortest exact decimal for a double; reruns must be byte-identical.
std::string format_double(double v);

std::string sha1_hex(std::string_view bytes);
// Git blob hash: sha1("blob <size>\0" + content).
std::string content_hash(std::string_view content);

ordered_json complex_json(std::complex<double> z);

// Rectangular CSV with a fixed header; all formatting funnels through
// format_double so identical runs emit identical bytes.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);
    std::size_t n_rows() const { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// One verification check. For MC comparisons sigma_distance = |lhs - rhs| /
// combined_se (pass at <= 3); for exact comparisons combined_se = 0 and
// sigma_distance = |lhs - rhs| / tol (pass at <= 1).
struct VerificationRecord {
    std::string check_id;
    ordered_json params;
    std::complex<double> lhs{0.0, 0.0};
    std::complex<double> rhs{0.0, 0.0};
    double combined_se = 0.0;
    double sigma_distance = 0.0;
    bool pass = false;
};

VerificationRecord mc_record(const std::string& check_id, ordered_json params,
                             std::complex<double> lhs, std::complex<double> rhs,
                             double combined_se);
VerificationRecord exact_record(const std::string& check_id, ordered_json params,
                                std::complex<double> lhs, std::complex<double> rhs, double tol);

ordered_json to_json(const VerificationRecord& r);

// Self-test table row (grassmann-selftest).
struct SelfTestRecord {
    std::string identity;
    int n = 0;
    int trials = 0;
    double max_rel_err = 0.0;
    bool pass = false;
};

ordered_json to_json(const SelfTestRecord& r);

// Run manifest: command echo, resolved knobs, and a content hash of the
// inputs (config file bytes when given, canonical parameter echo otherwise).
struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string format;
    std::string out_dir;
    std::string config_path;
    ordered_json config_echo;
    std::string input_hash;
};

ordered_json to_json(const RunManifest& m);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rbmlab
