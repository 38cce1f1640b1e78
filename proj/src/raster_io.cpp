#include "carto/raster_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace carto {
namespace {

struct Header {
  char kind = 0;  // '5' or '6'
  int width = 0;
  int height = 0;
  double resolution = 1.0;
};

[[noreturn]] void format_error(const std::filesystem::path& path, const std::string& why) {
  throw Error(ErrorCode::FormatError, path.string() + ": " + why);
}

// Reads one header token, collecting "# resolution" comments on the way.
std::string next_token(std::istream& in, Header& header, const std::filesystem::path& path) {
  std::string token;
  while (true) {
    const int c = in.get();
    if (c == EOF) format_error(path, "truncated header");
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      std::istringstream cs(comment);
      std::string key;
      double value = 0.0;
      if (cs >> key >> value && key == "resolution" && value > 0.0) header.resolution = value;
      if (!token.empty()) return token;
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
}

int parse_positive(const std::string& token, const std::filesystem::path& path) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    format_error(path, "bad header field '" + token + "'");
  }
  if (used != token.size() || value <= 0) format_error(path, "bad header field '" + token + "'");
  return value;
}

std::vector<std::uint8_t> read_netpbm(const std::filesystem::path& path, Header& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) format_error(path, "bad magic bytes");
  header.kind = magic[1];
  header.width = parse_positive(next_token(in, header, path), path);
  header.height = parse_positive(next_token(in, header, path), path);
  const int maxval = parse_positive(next_token(in, header, path), path);
  if (maxval != 255) format_error(path, "unsupported depth (maxval " + std::to_string(maxval) + ")");
  // next_token consumed exactly one whitespace byte after maxval.
  const std::size_t samples = static_cast<std::size_t>(header.width) * static_cast<std::size_t>(header.height) *
                              (header.kind == '6' ? 3u : 1u);
  std::vector<std::uint8_t> payload(samples);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(samples));
  if (static_cast<std::size_t>(in.gcount()) != samples) format_error(path, "truncated payload");
  return payload;
}

void write_netpbm(const std::filesystem::path& path, char kind, int width, int height, double resolution,
                  const std::vector<std::uint8_t>& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  std::ostringstream res;
  res.precision(17);
  res << resolution;
  out << 'P' << kind << "\n# resolution " << res.str() << "\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

std::uint8_t to_byte(float v, const std::filesystem::path& path) {
  if (!(v >= 0.0f && v <= 255.0f) || std::floor(v) != v) {
    format_error(path, "value " + std::to_string(v) + " is not 8-bit data");
  }
  return static_cast<std::uint8_t>(v);
}

}  // namespace

Raster read_raster(const std::filesystem::path& path) {
  Header header;
  auto payload = read_netpbm(path, header);
  if (header.kind == '5') {
    ScalarImage img(header.width, header.height, header.resolution);
    for (std::size_t i = 0; i < payload.size(); ++i) img.pixels()[i] = payload[i];
    return img;
  }
  std::array<ScalarImage, 3> ch;
  for (auto& c : ch) c = ScalarImage(header.width, header.height, header.resolution);
  for (std::size_t i = 0; i < payload.size() / 3; ++i) {
    for (std::size_t k = 0; k < 3; ++k) ch[k].pixels()[i] = payload[3 * i + k];
  }
  return MultiSpectralImage(std::move(ch[0]), std::move(ch[1]), std::move(ch[2]));
}

ScalarImage read_gray(const std::filesystem::path& path) {
  auto raster = read_raster(path);
  if (auto* img = std::get_if<ScalarImage>(&raster)) return std::move(*img);
  format_error(path, "expected a P5 grayscale raster");
}

MultiSpectralImage read_multispectral(const std::filesystem::path& path) {
  auto raster = read_raster(path);
  if (auto* img = std::get_if<MultiSpectralImage>(&raster)) return std::move(*img);
  format_error(path, "expected a P6 multispectral raster");
}

void write_raster(const ScalarImage& img, const std::filesystem::path& path) {
  std::vector<std::uint8_t> payload(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) payload[i] = to_byte(img.pixels()[i], path);
  write_netpbm(path, '5', img.width(), img.height(), img.resolution(), payload);
}

void write_raster(const MultiSpectralImage& img, const std::filesystem::path& path) {
  const std::size_t n = static_cast<std::size_t>(img.width()) * static_cast<std::size_t>(img.height());
  std::vector<std::uint8_t> payload(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) payload[3 * i + static_cast<std::size_t>(k)] = to_byte(img.channel(k).pixels()[i], path);
  }
  write_netpbm(path, '6', img.width(), img.height(), img.resolution(), payload);
}

BinaryMask read_mask(const std::filesystem::path& path) {
  ScalarImage img = read_gray(path);
  BinaryMask mask(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) mask.bits()[i] = img.pixels()[i] != 0.0f ? 1 : 0;
  return mask;
}

void write_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> payload(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) payload[i] = mask.bits()[i] ? 255 : 0;
  write_netpbm(path, '5', mask.width(), mask.height(), 1.0, payload);
}

void write_normalized(const ScalarImage& img, const std::filesystem::path& path) {
  const auto [lo, hi] = min_max(img);
  const double span = hi > lo ? static_cast<double>(hi) - lo : 1.0;
  std::vector<std::uint8_t> payload(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    payload[i] = static_cast<std::uint8_t>(std::lround(255.0 * (img.pixels()[i] - lo) / span));
  }
  write_netpbm(path, '5', img.width(), img.height(), img.resolution(), payload);
}

}  // namespace carto
