#include "rbmlab/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace rbmlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ------------------------------------------------------------------
// SHA-1 (FIPS 180-1), enough for content hashing of small inputs

namespace {

std::uint32_t rol(std::uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }

std::array<std::uint32_t, 5> sha1_digest(std::string_view data) {
    std::array<std::uint32_t, 5> h = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                                      0xC3D2E1F0u};
    std::string msg(data);
    std::uint64_t bits = std::uint64_t(msg.size()) * 8;
    msg.push_back(char(0x80));
    while (msg.size() % 64 != 56) msg.push_back(char(0x00));
    for (int i = 7; i >= 0; --i) msg.push_back(char((bits >> (8 * i)) & 0xff));

    for (std::size_t off = 0; off < msg.size(); off += 64) {
        std::uint32_t w[80];
        for (int t = 0; t < 16; ++t)
            w[t] = (std::uint32_t(std::uint8_t(msg[off + 4 * t])) << 24) |
                   (std::uint32_t(std::uint8_t(msg[off + 4 * t + 1])) << 16) |
                   (std::uint32_t(std::uint8_t(msg[off + 4 * t + 2])) << 8) |
                   std::uint32_t(std::uint8_t(msg[off + 4 * t + 3]));
        for (int t = 16; t < 80; ++t)
            w[t] = rol(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);

        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int t = 0; t < 80; ++t) {
            std::uint32_t f, k;
            if (t < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (t < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (t < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            std::uint32_t tmp = rol(a, 5) + f + e + k + w[t];
            e = d;
            d = c;
            c = rol(b, 30);
            b = a;
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }
    return h;
}

}  // namespace

std::string sha1_hex(std::string_view bytes) {
    auto h = sha1_digest(bytes);
    char buf[41];
    std::snprintf(buf, sizeof(buf), "%08x%08x%08x%08x%08x", h[0], h[1], h[2], h[3], h[4]);
    return buf;
}

std::string content_hash(std::string_view content) {
    std::string blob = "blob " + std::to_string(content.size());
    blob.push_back('\0');
    blob.append(content);
    return sha1_hex(blob);
}

ordered_json complex_json(std::complex<double> z) {
    return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

// ------------------------------------------------------------------
// CSV

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size())
        throw std::invalid_argument("CsvTable: row width mismatch");
    rows_.push_back(cells);
}

std::string CsvTable::str() const {
    std::string out;
    auto join = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out.push_back(',');
            out += cells[i];
        }
        out.push_back('\n');
    };
    join(header_);
    for (const auto& r : rows_) join(r);
    return out;
}

// ------------------------------------------------------------------
// records

VerificationRecord mc_record(const std::string& check_id, ordered_json params,
                             std::complex<double> lhs, std::complex<double> rhs,
                             double combined_se) {
    VerificationRecord r;
    r.check_id = check_id;
    r.params = std::move(params);
    r.lhs = lhs;
    r.rhs = rhs;
    r.combined_se = combined_se;
    double err = std::abs(lhs - rhs);
    r.sigma_distance = combined_se > 0 ? err / combined_se
                                       : (err == 0.0 ? 0.0
                                                     : std::numeric_limits<double>::infinity());
    r.pass = r.sigma_distance <= 3.0;
    return r;
}

VerificationRecord exact_record(const std::string& check_id, ordered_json params,
                                std::complex<double> lhs, std::complex<double> rhs, double tol) {
    VerificationRecord r;
    r.check_id = check_id;
    r.params = std::move(params);
    r.lhs = lhs;
    r.rhs = rhs;
    r.combined_se = 0.0;
    r.sigma_distance = std::abs(lhs - rhs) / tol;
    r.pass = r.sigma_distance <= 1.0;
    return r;
}

ordered_json to_json(const VerificationRecord& r) {
    return ordered_json{{"check_id", r.check_id},          {"params", r.params},
                        {"lhs", complex_json(r.lhs)},      {"rhs", complex_json(r.rhs)},
                        {"combined_se", r.combined_se},    {"sigma_distance", r.sigma_distance},
                        {"pass", r.pass}};
}

ordered_json to_json(const SelfTestRecord& r) {
    return ordered_json{{"identity", r.identity},
                        {"n", r.n},
                        {"trials", r.trials},
                        {"max_rel_err", r.max_rel_err},
                        {"pass", r.pass}};
}

ordered_json to_json(const RunManifest& m) {
    return ordered_json{{"command", m.command},     {"seed", m.seed},
                        {"workers", m.workers},     {"format", m.format},
                        {"out_dir", m.out_dir},     {"config_path", m.config_path},
                        {"config_echo", m.config_echo}, {"input_hash", m.input_hash}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rbmlab
