#include "ringlase/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <openssl/evp.h>

#include "ringlase/errors.hpp"

namespace ringlase {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw DomainError("cannot format value");
    return std::string(buf, ptr);
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(tmp.string() + ": cannot write");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error(tmp.string() + ": write failed");
    }
    fs::rename(tmp, target);
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[md[k] >> 4];
        out += hex[md[k] & 0xf];
    }
    return out;
}

std::string Provenance::header() const {
    std::string h = "# ringlase " + version + "\n# config_sha256 " + config_sha256 + "\n";
    h += "# seed " + (seed ? std::to_string(*seed) : std::string("none")) + "\n";
    if (timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        h += std::string("# generated ") + buf + "\n";
    }
    return h;
}

std::string format_matrix(const Provenance& prov, const GridMeta& g, MatrixKind kind,
                          const Eigen::MatrixXcd& values) {
    std::string s = prov.header();
    s += "signal_center_nm,signal_step_pm,signal_points,idler_center_nm,idler_step_pm,idler_points,kind\n";
    s += format_double(g.signal_center_nm) + "," + format_double(g.signal_step_pm) + "," +
         std::to_string(g.signal_points) + "," + format_double(g.idler_center_nm) + "," +
         format_double(g.idler_step_pm) + "," + std::to_string(g.idler_points) + "," +
         (kind == MatrixKind::jsd ? "jsd" : "jsa") + "\n";
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            if (c) s += ',';
            if (kind == MatrixKind::jsd) {
                s += format_double(values(r, c).real());
            } else {
                s += format_double(values(r, c).real()) + "," + format_double(values(r, c).imag());
            }
        }
        s += '\n';
    }
    return s;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("matrix line " + std::to_string(line) + ": bad number \"" + s + "\"");
    return v;
}

}  // namespace

MatrixFile parse_matrix(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(split(line));
    }
    if (rows.size() < 2 || rows[0].size() != 7 || rows[0][0] != "signal_center_nm")
        throw ConfigError("matrix file: missing grid header");
    const auto& m = rows[1];
    if (m.size() != 7) throw ConfigError("matrix file: malformed grid metadata");
    MatrixFile f;
    f.grid = {to_double(m[0], 0), to_double(m[1], 0), static_cast<std::size_t>(to_double(m[2], 0)),
              to_double(m[3], 0), to_double(m[4], 0), static_cast<std::size_t>(to_double(m[5], 0))};
    if (m[6] == "jsd") f.kind = MatrixKind::jsd;
    else if (m[6] == "jsa") f.kind = MatrixKind::jsa;
    else throw ConfigError("matrix file: unknown kind \"" + m[6] + "\"");
    const std::size_t nr = f.grid.signal_points, nc = f.grid.idler_points;
    if (rows.size() - 2 != nr) throw ConfigError("matrix file: expected " + std::to_string(nr) + " rows");
    const std::size_t width = f.kind == MatrixKind::jsd ? nc : 2 * nc;
    f.values.resize(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc));
    for (std::size_t r = 0; r < nr; ++r) {
        const auto& row = rows[r + 2];
        if (row.size() != width)
            throw ConfigError("matrix file: row " + std::to_string(r) + " has " + std::to_string(row.size()) + " columns");
        for (std::size_t c = 0; c < nc; ++c) {
            const auto ri = static_cast<Eigen::Index>(r), ci = static_cast<Eigen::Index>(c);
            if (f.kind == MatrixKind::jsd) f.values(ri, ci) = to_double(row[c], r + 3);
            else f.values(ri, ci) = {to_double(row[2 * c], r + 3), to_double(row[2 * c + 1], r + 3)};
        }
    }
    return f;
}

}  // namespace ringlase
