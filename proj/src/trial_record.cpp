#include <groth/trial_record.hpp>
#include <groth/error.hpp>
#include <groth/io.hpp>

#include <istream>
#include <ostream>
#include <sstream>

namespace groth {
namespace {

constexpr const char* columns[] = {
    "kind", "experiment", "grid_index", "n", "m", "r", "k", "dynamic_range", "trial_id", "seed",
    "mu", "nu", "fdp", "ndp", "L", "inclusion", "sufficient", "method", "input_hash", "wall_time",
};
constexpr std::size_t column_count = std::size(columns);

std::string opt(const std::optional<double>& v)
{
    return v ? io::format_double(*v) : std::string();
}

std::string hex64(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::optional<double> parse_opt(const std::string& s)
{
    if (s.empty()) return std::nullopt;
    return std::stod(s);
}

} // namespace

std::string trial_csv_header()
{
    std::string out;
    for (std::size_t c = 0; c < column_count; ++c) {
        if (c) out += ',';
        out += columns[c];
    }
    return out;
}

std::string trial_csv_row(const TrialRecord& rec)
{
    std::ostringstream os;
    os << rec.kind << ',' << rec.experiment << ',' << rec.grid_index << ',' << rec.n << ','
       << rec.m << ',' << rec.r << ',' << rec.k << ',' << io::format_double(rec.dynamic_range)
       << ',' << rec.trial_id << ',' << rec.seed << ',' << opt(rec.mu) << ',' << opt(rec.nu)
       << ',' << opt(rec.fdp) << ',' << opt(rec.ndp) << ','
       << (rec.L ? std::to_string(*rec.L) : std::string()) << ',' << opt(rec.inclusion) << ','
       << opt(rec.sufficient) << ',' << rec.method << ',' << hex64(rec.input_hash) << ','
       << io::format_double(rec.wall_time);
    return os.str();
}

void write_trial_csv(std::ostream& os, const std::vector<TrialRecord>& rows,
                     const std::string& timestamp_comment)
{
    os << "# " << trial_record_schema << '\n';
    if (!timestamp_comment.empty()) os << "# generated " << timestamp_comment << '\n';
    os << trial_csv_header() << '\n';
    for (const auto& row : rows) os << trial_csv_row(row) << '\n';
}

std::vector<TrialRecord> read_trial_csv(std::istream& is)
{
    std::vector<TrialRecord> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != trial_csv_header()) throw invalid_input("unexpected trial CSV header");
            header_seen = true;
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != column_count) throw invalid_input("trial CSV row has wrong arity");
        TrialRecord rec;
        rec.kind = cells[0];
        rec.experiment = cells[1];
        rec.grid_index = std::stol(cells[2]);
        rec.n = std::stol(cells[3]);
        rec.m = std::stol(cells[4]);
        rec.r = std::stol(cells[5]);
        rec.k = std::stol(cells[6]);
        rec.dynamic_range = std::stod(cells[7]);
        rec.trial_id = std::stoull(cells[8]);
        rec.seed = std::stoull(cells[9]);
        rec.mu = parse_opt(cells[10]);
        rec.nu = parse_opt(cells[11]);
        rec.fdp = parse_opt(cells[12]);
        rec.ndp = parse_opt(cells[13]);
        if (!cells[14].empty()) rec.L = std::stol(cells[14]);
        rec.inclusion = parse_opt(cells[15]);
        rec.sufficient = parse_opt(cells[16]);
        rec.method = cells[17];
        rec.input_hash = std::stoull(cells[18], nullptr, 16);
        rec.wall_time = std::stod(cells[19]);
        rows.push_back(std::move(rec));
    }
    if (!header_seen) throw invalid_input("trial CSV has no header");
    return rows;
}

} // namespace groth
