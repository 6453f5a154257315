#include "hopsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hopsim {

std::string format_sci(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows)
{
    std::ofstream out(path, std::ios::binary); // '\n' line endings everywhere
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0)
                out << ',';
            out << format_sci(row[i]);
        }
        out << '\n';
    }
}

std::string file_checksum(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read '" + path.string() + "'");
    std::uint64_t hash = 14695981039346656037ull; // FNV-1a offset basis
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 1099511628211ull;
        }
        if (!in)
            break;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace hopsim
