#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace rampart {

// One captured link-layer frame. Timestamps are integer microseconds; all
// trace generation and rewriting happens in this domain so that ordering is
// exact and seed-reproducible.
struct RawFrame {
  uint64_t ts_us = 0;
  std::vector<uint8_t> bytes;
};

struct CaptureFile {
  uint32_t link_type = 1;  // LINKTYPE_ETHERNET
  std::vector<RawFrame> frames;
};

// Classic pcap container (24-byte global header, 16-byte record headers,
// microsecond timestamps). The reader accepts both byte orders; the writer
// emits little-endian. pcapng is out of scope.
CaptureFile read_pcap(const std::filesystem::path& path);
void write_pcap(const std::filesystem::path& path, const CaptureFile& capture);

}  // namespace rampart
