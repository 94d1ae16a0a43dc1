#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <groth/error.hpp>
#include <groth/io.hpp>

#include "oracles.hpp"

using namespace groth;

namespace {

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("groth_io_" + name);
}

} // namespace

TEST(Gdm1, RoundTripIsBitExact)
{
    const Eigen::MatrixXd a = oracle::random_orthonormal_groups(7, 3, 2, 5);
    std::stringstream ss;
    io::write_gdm1(ss, a, 2);
    EXPECT_EQ(ss.str().rfind("GDM1 n=7 m=3 r=2\n", 0), 0u);
    const io::RawDesign back = io::read_gdm1(ss);
    EXPECT_EQ(back.r, 2);
    ASSERT_EQ(back.data.rows(), 7);
    ASSERT_EQ(back.data.cols(), 6);
    EXPECT_TRUE((back.data.array() == a.array()).all());
}

TEST(Gdm1, PayloadIsLittleEndianColumnMajor)
{
    Eigen::MatrixXd a(2, 1);
    a << 1.0, -2.0;
    std::stringstream ss;
    io::write_gdm1(ss, a, 1);
    const std::string s = ss.str();
    const std::string header = "GDM1 n=2 m=1 r=1\n";
    ASSERT_EQ(s.size(), header.size() + 16);
    // 1.0 = 0x3FF0000000000000, little-endian
    EXPECT_EQ(static_cast<unsigned char>(s[header.size() + 7]), 0x3F);
    EXPECT_EQ(static_cast<unsigned char>(s[header.size() + 6]), 0xF0);
    EXPECT_EQ(static_cast<unsigned char>(s[header.size() + 15]), 0xC0);
}

TEST(Gdm1, RejectsMalformedInput)
{
    {
        std::stringstream ss("GDM2 n=1 m=1 r=1\n");
        EXPECT_THROW(io::read_gdm1(ss), invalid_input);
    }
    {
        std::stringstream ss("GDM1 n=1 m=1 r=1\nabc");
        EXPECT_THROW(io::read_gdm1(ss), invalid_input);
    }
    {
        std::stringstream ss;
        io::write_gdm1(ss, Eigen::MatrixXd::Identity(2, 2), 1);
        ss << 'x';
        EXPECT_THROW(io::read_gdm1(ss), invalid_input);
    }
    {
        std::stringstream ss("GDM1 n=0 m=1 r=1\n");
        EXPECT_THROW(io::read_gdm1(ss), invalid_input);
    }
}

TEST(CsvMatrix, ReadsWithDims)
{
    std::stringstream ss("1,0\n0,1\n0,0\n");
    const io::RawDesign d = io::read_csv_matrix(ss, {3, 2, 1});
    EXPECT_EQ(d.data.rows(), 3);
    EXPECT_EQ(d.data(1, 1), 1.0);
    std::stringstream bad("1,0,0\n0,1\n0,0\n");
    EXPECT_THROW(io::read_csv_matrix(bad, {3, 2, 1}), dimension_mismatch);
    std::stringstream short_rows("1,0\n0,1\n");
    EXPECT_THROW(io::read_csv_matrix(short_rows, {3, 2, 1}), dimension_mismatch);
}

TEST(CsvMatrix, WriteReadRoundTrip)
{
    const Eigen::MatrixXd a = oracle::random_orthonormal_groups(5, 2, 2, 8);
    std::stringstream ss;
    io::write_csv_matrix(ss, a);
    const io::RawDesign back = io::read_csv_matrix(ss, {5, 2, 2});
    EXPECT_TRUE((back.data.array() == a.array()).all());
}

TEST(ReadDesign, DetectsFormat)
{
    const Eigen::MatrixXd a = oracle::disjoint_groups(4, 2, 2);
    const auto bin = temp_path("design.gdm");
    const auto csv = temp_path("design.csv");
    io::write_gdm1(bin.string(), a, 2);
    {
        std::ofstream out(csv);
        io::write_csv_matrix(out, a);
    }
    EXPECT_TRUE((io::read_design(bin.string(), std::nullopt).data.array() == a.array()).all());
    EXPECT_THROW(io::read_design(csv.string(), std::nullopt), invalid_input);
    EXPECT_EQ(io::read_design(csv.string(), io::Dims{4, 2, 2}).r, 2);
    EXPECT_THROW(io::read_design(bin.string(), io::Dims{4, 1, 4}), dimension_mismatch);
    std::filesystem::remove(bin);
    std::filesystem::remove(csv);
}

TEST(Vector, RoundTripAndComments)
{
    Eigen::VectorXd v(3);
    v << 0.1, -1e-300, 12345.678901234567;
    std::stringstream ss;
    io::write_vector(ss, v);
    EXPECT_TRUE((io::read_vector(ss).array() == v.array()).all());

    std::stringstream with_comments("# header\n1.5\n\n  2\n# tail\n");
    const Eigen::VectorXd w = io::read_vector(with_comments);
    ASSERT_EQ(w.size(), 2);
    EXPECT_EQ(w[1], 2.0);

    std::stringstream bad("1.0\nfoo\n");
    EXPECT_THROW(io::read_vector(bad), invalid_input);
}

TEST(FormatDouble, SeventeenSignificantDigits)
{
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(io::format_double(1.0), "1");
    EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
}
