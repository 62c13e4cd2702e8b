#include "spivc/pnm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace spivc {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw std::runtime_error(path + ": " + why);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

// Next whitespace-separated token, skipping '#' comments to end of line.
std::string next_token(std::istream& in, const std::string& path) {
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  if (ch == EOF) fail(path, "unexpected end of file in header");
  std::string tok;
  while (ch != EOF && !std::isspace(ch) && ch != '#') {
    tok.push_back(char(ch));
    ch = in.get();
  }
  if (ch == '#') in.unget();
  return tok;
}

int next_int(std::istream& in, const std::string& path) {
  std::string tok = next_token(in, path);
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(path, "malformed integer '" + tok + "' in header");
  }
}

}  // namespace

BitMatrix read_pbm(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string magic = next_token(in, path);
  if (magic != "P1" && magic != "P4") fail(path, "not a PBM file");
  int w = next_int(in, path);
  int h = next_int(in, path);
  check_dims(w, h);

  BitMatrix m(w, h);
  if (magic == "P1") {
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        std::string tok = next_token(in, path);
        if (tok != "0" && tok != "1") fail(path, "P1 sample is not 0 or 1");
        m.at(r, c) = std::uint8_t(tok == "1" ? 0 : 1);  // PBM 1 = black
      }
  } else {
    // next_int consumed the single whitespace after the height, so the
    // stream already sits on the first data byte.
    int row_bytes = (w + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int r = 0; r < h; ++r) {
      if (!in.read(row.data(), row_bytes)) fail(path, "truncated P4 data");
      for (int c = 0; c < w; ++c) {
        int bit = (std::uint8_t(row[c / 8]) >> (7 - c % 8)) & 1;
        m.at(r, c) = std::uint8_t(1 - bit);
      }
    }
  }
  return m;
}

void write_pbm(const BitMatrix& m, const std::string& path, bool binary) {
  check_bits(m);
  std::ofstream out = open_out(path);
  if (binary) {
    out << "P4\n" << m.width << " " << m.height << "\n";
    int row_bytes = (m.width + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int r = 0; r < m.height; ++r) {
      std::fill(row.begin(), row.end(), 0);
      for (int c = 0; c < m.width; ++c)
        if (!m.at(r, c)) row[c / 8] |= char(0x80 >> (c % 8));
      out.write(row.data(), row_bytes);
    }
  } else {
    out << "P1\n" << m.width << " " << m.height << "\n";
    for (int r = 0; r < m.height; ++r) {
      for (int c = 0; c < m.width; ++c) {
        if (c) out << ' ';
        out << (m.at(r, c) ? '0' : '1');
      }
      out << '\n';
    }
  }
  if (!out) fail(path, "write failed");
}

Image read_pgm(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string magic = next_token(in, path);
  if (magic != "P2" && magic != "P5") fail(path, "not a PGM file");
  int w = next_int(in, path);
  int h = next_int(in, path);
  int maxval = next_int(in, path);
  check_dims(w, h);
  if (maxval <= 0 || maxval > 65535) fail(path, "bad maxval");

  Image img(w, h);
  if (magic == "P2") {
    for (double& v : img.pixels) {
      int s = next_int(in, path);
      if (s < 0 || s > maxval) fail(path, "P2 sample out of range");
      v = double(s) / maxval;
    }
  } else {
    int bytes = maxval > 255 ? 2 : 1;
    std::vector<char> buf(std::size_t(w) * h * bytes);
    if (!in.read(buf.data(), std::streamsize(buf.size())))
      fail(path, "truncated P5 data");
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      int s = bytes == 1 ? std::uint8_t(buf[i])
                         : (std::uint8_t(buf[2 * i]) << 8) |
                               std::uint8_t(buf[2 * i + 1]);
      if (s > maxval) fail(path, "P5 sample out of range");
      img.pixels[i] = double(s) / maxval;
    }
  }
  return img;
}

void write_pgm(const Image& img, const std::string& path, bool binary) {
  check_finite(img);
  auto [lo_it, hi_it] = std::minmax_element(img.pixels.begin(), img.pixels.end());
  double lo = *lo_it, hi = *hi_it;
  // [lo, hi] maps linearly onto 0..255; a constant image becomes mid-gray.
  auto quantize = [&](double v) -> int {
    if (hi <= lo) return 128;
    return int(std::lround((v - lo) / (hi - lo) * 255.0));
  };

  std::ofstream out = open_out(path);
  if (binary) {
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<char> buf;
    buf.reserve(img.pixels.size());
    for (double v : img.pixels) buf.push_back(char(quantize(v)));
    out.write(buf.data(), std::streamsize(buf.size()));
  } else {
    out << "P2\n" << img.width << " " << img.height << "\n255\n";
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c) {
        if (c) out << ' ';
        out << quantize(img.at(r, c));
      }
      out << '\n';
    }
  }
  if (!out) fail(path, "write failed");
}

Image read_image_json(const std::string& path) {
  std::ifstream in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(path, std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("width") || !j.contains("height") || !j.contains("values"))
    fail(path, "image JSON needs width, height, values");
  Image img;
  img.width = j.at("width").get<int>();
  img.height = j.at("height").get<int>();
  check_dims(img.width, img.height);
  img.pixels = j.at("values").get<std::vector<double>>();
  if (img.pixels.size() != std::size_t(img.width) * img.height)
    fail(path, "image JSON values length does not match dimensions");
  check_finite(img, path);
  return img;
}

void write_image_json(const Image& img, const std::string& path) {
  check_finite(img);
  nlohmann::json j;
  j["width"] = img.width;
  j["height"] = img.height;
  j["values"] = img.pixels;
  std::ofstream out = open_out(path);
  out << j.dump() << '\n';
  if (!out) fail(path, "write failed");
}

Image read_image_any(const std::string& path) {
  auto ends_with = [&](const std::string& suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".pbm")) return to_image(read_pbm(path));
  if (ends_with(".pgm")) return read_pgm(path);
  if (ends_with(".json")) return read_image_json(path);
  fail(path, "unsupported image extension (want .pbm, .pgm, or .json)");
}

}  // namespace spivc
