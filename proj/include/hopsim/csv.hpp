#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hopsim {

// Fixed-precision scientific formatting (17 significant digits) so that
// emitted tables are bit-stable across runs.
std::string format_sci(double v);

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

// FNV-1a 64-bit digest of a file's bytes, hex encoded.
std::string file_checksum(const std::filesystem::path& path);

} // namespace hopsim
