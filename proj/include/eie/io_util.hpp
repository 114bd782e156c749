#pragma once

#include <string>

namespace eie {

// Writes to "<path>.tmp" and renames on success, so failed runs never leave
// partial output files behind.
void write_file_atomic(const std::string& path, const std::string& bytes);

std::string read_file_bytes(const std::string& path);

} // namespace eie
