#include "cornerforge/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>

namespace cornerforge {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = static_cast<char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_number(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      throw PgmError(PgmErrorKind::malformed_header, std::string("expected ") + what);
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max())
        throw PgmError(PgmErrorKind::malformed_header, std::string(what) + " out of range");
      ++pos_;
    }
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  std::size_t size() const { return bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P')
    throw PgmError(PgmErrorKind::bad_magic, "missing P5 magic");
  if (bytes[1] == '2')
    throw PgmError(PgmErrorKind::ascii_variant, "ASCII PGM (P2) is not supported");
  if (bytes[1] != '5') throw PgmError(PgmErrorKind::bad_magic, "missing P5 magic");

  HeaderReader reader(bytes);
  reader.advance(2);
  const long width = reader.read_number("width");
  const long height = reader.read_number("height");
  const long maxval = reader.read_number("maxval");
  if (width < 1 || height < 1)
    throw PgmError(PgmErrorKind::malformed_header, "image dimensions must be positive");
  if (maxval < 1) throw PgmError(PgmErrorKind::malformed_header, "maxval must be positive");
  if (maxval > 255)
    throw PgmError(PgmErrorKind::maxval_too_large, "maxval " + std::to_string(maxval) +
                                                       " exceeds 255");
  // Exactly one whitespace byte separates the header from the raster.
  if (reader.pos() >= reader.size() || !std::isspace(bytes[reader.pos()]))
    throw PgmError(PgmErrorKind::truncated, "no raster after header");
  reader.advance(1);

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (reader.size() - reader.pos() < count)
    throw PgmError(PgmErrorKind::truncated, "expected " + std::to_string(count) +
                                                " raster bytes, found " +
                                                std::to_string(reader.size() - reader.pos()));
  std::vector<std::uint8_t> data(bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos()),
                                 bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos() + count));
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
  return load_pgm(read_file_bytes(path));
}

void write_pgm_file(const std::filesystem::path& path, const GrayImage& img) {
  write_file_bytes(path, save_pgm(img));
}

}  // namespace cornerforge
