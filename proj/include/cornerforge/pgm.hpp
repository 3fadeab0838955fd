#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cornerforge/error.hpp"
#include "cornerforge/image.hpp"

namespace cornerforge {

/// Why a PGM byte stream was rejected.
enum class PgmErrorKind {
  ascii_variant,     // "P2": plain-text PGM is not accepted
  bad_magic,         // anything other than P5/P2
  malformed_header,  // missing or non-numeric width/height/maxval
  maxval_too_large,  // 16-bit rasters
  truncated,         // fewer payload bytes than width*height
};

class PgmError : public DataError {
 public:
  PgmError(PgmErrorKind kind, const std::string& message)
      : DataError("PGM: " + message), kind_(kind) {}
  PgmErrorKind kind() const noexcept { return kind_; }

 private:
  PgmErrorKind kind_;
};

/// Parse a binary (P5) PGM. Header comments are skipped. Pixel values are
/// taken verbatim from the payload, whatever the declared maxval.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

/// Encode with the canonical header "P5\n<w> <h>\n255\n".
std::vector<std::uint8_t> save_pgm(const GrayImage& img);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const std::filesystem::path& path, const GrayImage& img);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace cornerforge
