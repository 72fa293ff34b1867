#include "rampart/pcap.hpp"

#include <cstring>
#include <fstream>

#include "rampart/error.hpp"

namespace rampart {

namespace {

constexpr uint32_t kMagicUs = 0xa1b2c3d4;
constexpr uint32_t kMagicUsSwapped = 0xd4c3b2a1;

uint32_t bswap32(uint32_t v) {
  return ((v & 0xFF) << 24) | ((v & 0xFF00) << 8) | ((v >> 8) & 0xFF00) | (v >> 24);
}

uint16_t bswap16(uint16_t v) { return static_cast<uint16_t>((v << 8) | (v >> 8)); }

void put_u32le(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u16le(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

CaptureFile read_pcap(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  const std::string what = "pcap '" + path.string() + "'";
  if (buf.size() < 24) throw ParseError(what + ": file shorter than global header", 0);

  auto rd_u32 = [&](size_t off) {
    uint32_t v;
    std::memcpy(&v, buf.data() + off, 4);
    return v;
  };
  auto rd_u16 = [&](size_t off) {
    uint16_t v;
    std::memcpy(&v, buf.data() + off, 2);
    return v;
  };

  const uint32_t magic = rd_u32(0);
  bool swap;
  if (magic == kMagicUs) {
    swap = false;
  } else if (magic == kMagicUsSwapped) {
    swap = true;
  } else {
    throw ParseError(what + ": bad magic", 0);
  }
  auto u32 = [&](size_t off) { return swap ? bswap32(rd_u32(off)) : rd_u32(off); };
  auto u16 = [&](size_t off) { return swap ? bswap16(rd_u16(off)) : rd_u16(off); };
  (void)u16;

  CaptureFile cap;
  cap.link_type = u32(20);

  size_t off = 24;
  while (off < buf.size()) {
    if (off + 16 > buf.size()) {
      throw ParseError(what + ": truncated record header", off);
    }
    const uint32_t ts_sec = u32(off);
    const uint32_t ts_usec = u32(off + 4);
    const uint32_t incl_len = u32(off + 8);
    off += 16;
    if (incl_len > 0x40000) {
      throw ParseError(what + ": implausible record length " + std::to_string(incl_len),
                       off - 8);
    }
    if (off + incl_len > buf.size()) {
      throw ParseError(what + ": truncated record body", off);
    }
    RawFrame frame;
    frame.ts_us = static_cast<uint64_t>(ts_sec) * 1000000ULL + ts_usec;
    frame.bytes.assign(buf.begin() + static_cast<long>(off),
                       buf.begin() + static_cast<long>(off + incl_len));
    cap.frames.push_back(std::move(frame));
    off += incl_len;
  }
  return cap;
}

void write_pcap(const std::filesystem::path& path, const CaptureFile& capture) {
  std::string out;
  put_u32le(out, kMagicUs);
  put_u16le(out, 2);   // version major
  put_u16le(out, 4);   // version minor
  put_u32le(out, 0);   // thiszone
  put_u32le(out, 0);   // sigfigs
  put_u32le(out, 65535);
  put_u32le(out, capture.link_type);
  for (const RawFrame& frame : capture.frames) {
    put_u32le(out, static_cast<uint32_t>(frame.ts_us / 1000000ULL));
    put_u32le(out, static_cast<uint32_t>(frame.ts_us % 1000000ULL));
    put_u32le(out, static_cast<uint32_t>(frame.bytes.size()));
    put_u32le(out, static_cast<uint32_t>(frame.bytes.size()));
    out.append(reinterpret_cast<const char*>(frame.bytes.data()), frame.bytes.size());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace rampart
