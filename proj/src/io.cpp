#include <groth/io.hpp>
#include <cctype>
#include <groth/error.hpp>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace groth::io {
namespace {

constexpr char magic[] = "GDM1";

std::uint64_t to_little_endian(std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::uint64_t out = 0;
        for (int b = 0; b < 8; ++b) out |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
        return out;
    }
}

index_t parse_field(const std::string& token, const std::string& key)
{
    const std::string prefix = key + "=";
    if (token.rfind(prefix, 0) != 0) {
        throw invalid_input("GDM1 header: expected '" + prefix + "...', got '" + token + "'");
    }
    try {
        std::size_t used = 0;
        const long long v = std::stoll(token.substr(prefix.size()), &used);
        if (used != token.size() - prefix.size() || v < 1) throw invalid_input("");
        return static_cast<index_t>(v);
    } catch (const std::exception&) {
        throw invalid_input("GDM1 header: bad value in '" + token + "'");
    }
}

double parse_double(const std::string& s)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw invalid_input("cannot parse number '" + s + "'");
    }
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw invalid_input("cannot parse number '" + s + "'");
    return v;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::ifstream open_in(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw invalid_input("cannot open '" + path + "'");
    return is;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw invalid_input("cannot write '" + path + "'");
    return os;
}

} // namespace

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_gdm1(std::ostream& os, const Eigen::MatrixXd& data, index_t r)
{
    if (r < 1 || data.cols() % r != 0) throw dimension_mismatch("columns not a multiple of r");
    os << magic << " n=" << data.rows() << " m=" << data.cols() / r << " r=" << r << '\n';
    const double* p = data.data();
    for (index_t i = 0; i < data.size(); ++i) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(p[i]);
        bits = to_little_endian(bits);
        char bytes[8];
        std::memcpy(bytes, &bits, 8);
        os.write(bytes, 8);
    }
    if (!os) throw invalid_input("write failed");
}

void write_gdm1(const std::string& path, const Eigen::MatrixXd& data, index_t r)
{
    auto os = open_out(path);
    write_gdm1(os, data, r);
}

RawDesign read_gdm1(std::istream& is)
{
    std::string header;
    if (!std::getline(is, header)) throw invalid_input("GDM1: missing header");
    std::istringstream hs(header);
    std::string tag, tn, tm, tr, extra;
    hs >> tag >> tn >> tm >> tr;
    if (tag != magic) throw invalid_input("GDM1: bad magic '" + tag + "'");
    if (hs >> extra) throw invalid_input("GDM1: trailing header field '" + extra + "'");
    const index_t n = parse_field(tn, "n");
    const index_t m = parse_field(tm, "m");
    const index_t r = parse_field(tr, "r");

    RawDesign out{Eigen::MatrixXd(n, m * r), r};
    double* p = out.data.data();
    for (index_t i = 0; i < out.data.size(); ++i) {
        char bytes[8];
        if (!is.read(bytes, 8)) throw invalid_input("GDM1: truncated payload");
        std::uint64_t bits = 0;
        std::memcpy(&bits, bytes, 8);
        p[i] = std::bit_cast<double>(to_little_endian(bits));
    }
    if (is.peek() != std::char_traits<char>::eof()) throw invalid_input("GDM1: trailing bytes");
    return out;
}

RawDesign read_csv_matrix(std::istream& is, const Dims& dims)
{
    const index_t cols = dims.m * dims.r;
    RawDesign out{Eigen::MatrixXd(dims.n, cols), dims.r};
    std::string line;
    index_t row = 0;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (row >= dims.n) throw dimension_mismatch("CSV has more than n rows");
        std::istringstream ls(line);
        std::string cell;
        index_t c = 0;
        while (std::getline(ls, cell, ',')) {
            if (c >= cols) throw dimension_mismatch("CSV row " + std::to_string(row + 1) + " too long");
            out.data(row, c++) = parse_double(trim(cell));
        }
        if (c != cols) throw dimension_mismatch("CSV row " + std::to_string(row + 1) + " too short");
        ++row;
    }
    if (row != dims.n) throw dimension_mismatch("CSV has fewer than n rows");
    return out;
}

void write_csv_matrix(std::ostream& os, const Eigen::MatrixXd& data)
{
    for (index_t i = 0; i < data.rows(); ++i) {
        for (index_t j = 0; j < data.cols(); ++j) {
            if (j) os << ',';
            os << format_double(data(i, j));
        }
        os << '\n';
    }
}

RawDesign read_design(const std::string& path, const std::optional<Dims>& dims)
{
    auto is = open_in(path);
    char head[4] = {};
    is.read(head, 4);
    const bool is_gdm1 = is.gcount() == 4 && std::memcmp(head, magic, 4) == 0;
    is.clear();
    is.seekg(0);
    if (is_gdm1) {
        auto raw = read_gdm1(is);
        if (dims && (dims->n != raw.data.rows() || dims->r != raw.r ||
                     dims->m * dims->r != raw.data.cols())) {
            throw dimension_mismatch("GDM1 header disagrees with the given dimensions");
        }
        return raw;
    }
    if (!dims) throw invalid_input("'" + path + "' is not GDM1; CSV input needs n, m, r");
    return read_csv_matrix(is, *dims);
}

Eigen::VectorXd read_vector(std::istream& is)
{
    std::vector<double> vals;
    std::string line;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        vals.push_back(parse_double(line));
    }
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<index_t>(vals.size()));
}

Eigen::VectorXd read_vector(const std::string& path)
{
    auto is = open_in(path);
    return read_vector(is);
}

void write_vector(std::ostream& os, const Eigen::VectorXd& v)
{
    for (index_t i = 0; i < v.size(); ++i) os << format_double(v[i]) << '\n';
}

void write_vector(const std::string& path, const Eigen::VectorXd& v)
{
    auto os = open_out(path);
    write_vector(os, v);
}

} // namespace groth::io
