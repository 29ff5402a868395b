#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

namespace lf {

// Binary values are serialized little-endian, byte by byte, so checkpoint
// files are identical across hosts.

void write_u8(std::ostream& os, std::uint8_t v);
void write_u16(std::ostream& os, std::uint16_t v);
void write_u32(std::ostream& os, std::uint32_t v);
void write_u64(std::ostream& os, std::uint64_t v);
void write_f64(std::ostream& os, double v);
void write_bytes(std::ostream& os, const std::string& s);  // u32 length + bytes

std::uint8_t read_u8(std::istream& is);
std::uint16_t read_u16(std::istream& is);
std::uint32_t read_u32(std::istream& is);
std::uint64_t read_u64(std::istream& is);
double read_f64(std::istream& is);
std::string read_bytes(std::istream& is);

/// Checks a fixed magic string; throws DataError naming `what` on mismatch.
void expect_magic(std::istream& is, const std::string& magic, const std::string& what);

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::string& path);  // throws DataError if unreadable

std::string read_text_file(const std::string& path);  // throws DataError
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lf
