#include "mogfn/io.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mogfn::io {

namespace fs = std::filesystem;

void atomic_write_text(const std::string& path, const std::string& content) {
  fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("atomic_write_text: cannot open " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw std::runtime_error("atomic_write_text: write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_text_file: cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

// Compact SHA-1, FIPS 180-1. Inputs here are small artifact files.
struct Sha1 {
  std::array<std::uint32_t, 5> h{0x67452301u, 0xEFCDAB89u, 0x98BADCFEu,
                                 0x10325476u, 0xC3D2E1F0u};
  std::array<std::uint8_t, 64> block{};
  std::uint64_t total_bytes = 0;
  std::size_t block_fill = 0;

  static std::uint32_t rotl(std::uint32_t x, int n) {
    return (x << n) | (x >> (32 - n));
  }

  void process_block(const std::uint8_t* p) {
    std::array<std::uint32_t, 80> w;
    for (int i = 0; i < 16; ++i) {
      w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
             (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
    }
    for (int i = 16; i < 80; ++i) {
      w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
    }
    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int i = 0; i < 80; ++i) {
      std::uint32_t f, k;
      if (i < 20) {
        f = (b & c) | (~b & d);
        k = 0x5A827999u;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      std::uint32_t tmp = rotl(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rotl(b, 30);
      b = a;
      a = tmp;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
  }

  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    total_bytes += len;
    while (len > 0) {
      std::size_t take = std::min(len, block.size() - block_fill);
      std::memcpy(block.data() + block_fill, p, take);
      block_fill += take;
      p += take;
      len -= take;
      if (block_fill == block.size()) {
        process_block(block.data());
        block_fill = 0;
      }
    }
  }

  std::string finish() {
    std::uint64_t bits = total_bytes * 8;
    std::uint8_t pad = 0x80;
    update(&pad, 1);
    std::uint8_t zero = 0;
    while (block_fill != 56) {
      update(&zero, 1);
    }
    std::uint8_t len_be[8];
    for (int i = 0; i < 8; ++i) {
      len_be[i] = std::uint8_t(bits >> (8 * (7 - i)));
    }
    update(len_be, 8);
    char out[41];
    for (int i = 0; i < 5; ++i) {
      std::snprintf(out + 8 * i, 9, "%08x", h[i]);
    }
    return std::string(out, 40);
  }
};

}  // namespace

std::string sha1_hex(const std::string& bytes) {
  Sha1 s;
  s.update(bytes.data(), bytes.size());
  return s.finish();
}

std::string git_blob_sha1(const std::string& content) {
  Sha1 s;
  char header[64];
  int n = std::snprintf(header, sizeof(header), "blob %zu", content.size());
  s.update(header, static_cast<std::size_t>(n) + 1);  // include the NUL
  s.update(content.data(), content.size());
  return s.finish();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace mogfn::io
