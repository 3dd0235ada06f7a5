#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "holo/errors.hpp"
#include "holo/grid.hpp"

namespace holo {

// Binary PGM ("P5"). 16-bit samples are big-endian per the format; values are
// mapped linearly from [lo, hi].
inline void write_pgm(const std::filesystem::path& path, const Grid<double>& image, double lo,
                      double hi, int bit_depth = 16) {
  if (bit_depth != 8 && bit_depth != 16) throw ConfigError("pgm: bit depth must be 8 or 16");
  if (!(hi > lo)) throw ConfigError("pgm: empty value range");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("pgm: cannot open for writing: " + path.string());
  const int maxval = bit_depth == 16 ? 65535 : 255;
  out << "P5\n" << image.width() << " " << image.height() << "\n" << maxval << "\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(image.width()) * (bit_depth / 8));
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      double t = (image(y, x) - lo) / (hi - lo);
      t = std::clamp(t, 0.0, 1.0);
      const unsigned v = unsigned(std::lround(t * maxval));
      if (bit_depth == 16) {
        row[2 * x] = static_cast<unsigned char>(v >> 8);
        row[2 * x + 1] = static_cast<unsigned char>(v & 0xff);
      } else {
        row[x] = static_cast<unsigned char>(v);
      }
    }
    out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size()));
  }
  if (!out) throw ConfigError("pgm: write failed: " + path.string());
}

// Reads P5 into [0, 1].
inline Grid<double> read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("pgm: cannot open: " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P5") throw ConfigError("pgm: not a binary graymap: " + path.string());
  auto next_token = [&]() -> long {
    // skip whitespace and '#' comment lines
    while (true) {
      int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    long v = -1;
    in >> v;
    return v;
  };
  const long width = next_token();
  const long height = next_token();
  const long maxval = next_token();
  if (width < 1 || height < 1 || (maxval != 255 && maxval != 65535))
    throw ConfigError("pgm: unsupported header in " + path.string());
  in.get();  // single whitespace after maxval
  Grid<double> image(int(height), int(width));
  const int bytes = maxval == 65535 ? 2 : 1;
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * bytes);
  for (long y = 0; y < height; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size()));
    if (!in) throw ConfigError("pgm: truncated data in " + path.string());
    for (long x = 0; x < width; ++x) {
      unsigned v = bytes == 2 ? (unsigned(row[2 * x]) << 8) | row[2 * x + 1] : row[x];
      image(int(y), int(x)) = double(v) / double(maxval);
    }
  }
  return image;
}

// Lossless float sidecar: 16-byte header ("HOLOF64\0", u32 height, u32 width,
// both little-endian), then height*width little-endian float64, row-major.
inline void write_f64(const std::filesystem::path& path, const Grid<double>& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("f64: cannot open for writing: " + path.string());
  char header[16] = {'H', 'O', 'L', 'O', 'F', '6', '4', '\0'};
  const std::uint32_t h = std::uint32_t(image.height());
  const std::uint32_t w = std::uint32_t(image.width());
  for (int i = 0; i < 4; ++i) {
    header[8 + i] = char((h >> (8 * i)) & 0xff);
    header[12 + i] = char((w >> (8 * i)) & 0xff);
  }
  out.write(header, sizeof header);
  static_assert(sizeof(double) == 8);
  out.write(reinterpret_cast<const char*>(image.data()),
            std::streamsize(image.size() * sizeof(double)));
  if (!out) throw ConfigError("f64: write failed: " + path.string());
}

inline Grid<double> read_f64(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("f64: cannot open: " + path.string());
  char header[16];
  in.read(header, sizeof header);
  if (!in || std::memcmp(header, "HOLOF64\0", 8) != 0)
    throw ConfigError("f64: bad magic in " + path.string());
  std::uint32_t h = 0, w = 0;
  for (int i = 3; i >= 0; --i) {
    h = (h << 8) | std::uint8_t(header[8 + i]);
    w = (w << 8) | std::uint8_t(header[12 + i]);
  }
  if (h < 1 || w < 1 || h > (1u << 20) || w > (1u << 20))
    throw ConfigError("f64: implausible shape in " + path.string());
  Grid<double> image(int(h), int(w));
  in.read(reinterpret_cast<char*>(image.data()), std::streamsize(image.size() * sizeof(double)));
  if (!in) throw ConfigError("f64: truncated data in " + path.string());
  return image;
}

inline void write_csv(const std::filesystem::path& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("csv: cannot open for writing: " + path.string());
  out << header << "\n";
  out.precision(17);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  }
}

}  // namespace holo
