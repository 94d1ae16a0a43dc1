#pragma once
#include <iosfwd>
#include <optional>
#include <string>
#include <groth/grouped_linalg.hpp>

namespace groth::io {

struct Dims
{
    index_t n;
    index_t m;
    index_t r;
};

/// A matrix read from disk together with its group size. Not yet validated.
struct RawDesign
{
    Eigen::MatrixXd data;
    index_t r;
};

/// GDM1: header line "GDM1 n=<n> m=<m> r=<r>\n" followed by n*r*m
/// little-endian float64 values in column-major order.
void write_gdm1(std::ostream& os, const Eigen::MatrixXd& data, index_t r);
void write_gdm1(const std::string& path, const Eigen::MatrixXd& data, index_t r);
RawDesign read_gdm1(std::istream& is);

/// Plain CSV, n rows of r*m comma-separated values.
RawDesign read_csv_matrix(std::istream& is, const Dims& dims);
void write_csv_matrix(std::ostream& os, const Eigen::MatrixXd& data);

/// Reads a GDM1 file, or a CSV file when dims are supplied and the file does
/// not start with the GDM1 magic.
RawDesign read_design(const std::string& path, const std::optional<Dims>& dims);

/// One float per line; blank lines and lines starting with '#' are skipped.
Eigen::VectorXd read_vector(std::istream& is);
Eigen::VectorXd read_vector(const std::string& path);
void write_vector(std::ostream& os, const Eigen::VectorXd& v);
void write_vector(const std::string& path, const Eigen::VectorXd& v);

/// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double x);

} // namespace groth::io
