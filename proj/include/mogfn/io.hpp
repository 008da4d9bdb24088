#pragma once

#include <cstdint>
#include <string>

namespace mogfn::io {

// Writes via a temp file in the same directory followed by a rename, so a
// crashed run never leaves a half-written artifact behind.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

// Hex SHA-1 of git's blob encoding ("blob <len>\0" + content), so hashes can
// be cross-checked with `git hash-object`.
std::string git_blob_sha1(const std::string& content);

// Plain SHA-1 of the bytes, hex encoded.
std::string sha1_hex(const std::string& bytes);

std::string format_double(double v);  // shortest round-trip-safe decimal

}  // namespace mogfn::io
