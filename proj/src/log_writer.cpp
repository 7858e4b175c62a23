#include "ltesense/log_writer.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "ltesense/errors.hpp"
#include "ltesense/log_parser.hpp"

namespace ltesense {
namespace {

std::string f6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void validate_for_write(const CsiCapture& capture) {
  for (std::size_t i = 0; i < capture.blocks.size(); ++i) {
    const CsiBlock& b = capture.blocks[i];
    const std::string where = "block " + std::to_string(i) + ": ";
    if (b.cell.nof_prb <= 0) throw ValidationError(where + "nof_prb must be positive");
    if (b.cell.useful_re <= 0) throw ValidationError(where + "useful_re must be positive");
    if (b.cell.symbol_sz < b.cell.useful_re)
      throw ValidationError(where + "symbol_sz smaller than useful_re");
    if (b.port_data.empty()) throw ValidationError(where + "no (port,rx) entries");
    for (const auto& [key, data] : b.port_data) {
      if (data.ofdm_block_indices.size() != data.csi.rows)
        throw ValidationError(where + "index/row mismatch");
      if (data.csi.rows == 0) throw ValidationError(where + "empty (port,rx) entry");
    }
  }
  validate_capture(capture);
}

}  // namespace

void write_capture(const CsiCapture& capture, std::ostream& out) {
  validate_for_write(capture);
  for (const CsiBlock& b : capture.blocks) {
    out << "[ESTIMATION]\n";
    out << "Timestamp: " << b.timestamp_us << "\n";
    out << "SNR: " << f6(b.snr_db) << "\n";
    out << "RSRP: " << f6(b.rsrp_db) << "\n";
    out << "Cell Parameters: center_freq_Hz=" << f6(b.cell.center_freq_hz)
        << ", nof_prb=" << b.cell.nof_prb
        << ", cp=" << (b.cell.cp == CyclicPrefix::normal ? "normal" : "extended")
        << ", symbol_sz=" << b.cell.symbol_sz << ", useful_re=" << b.cell.useful_re
        << ", offset=" << b.cell.offset << ", ofdm_symbols=" << b.cell.ofdm_symbols << "\n";
    for (const std::string& extra : b.extra_header_lines) out << extra << "\n";
    out << "subcarrier_stride: " << b.subcarrier_stride << ", block_stride: " << b.block_stride
        << "\n";

    std::set<int> ports;
    for (const auto& [key, data] : b.port_data) ports.insert(key.port);
    for (int port : ports) {
      out << "[PORT " << port << "]\n";
      for (const auto& [key, data] : b.port_data) {
        if (key.port != port) continue;
        out << "[RX ANTENNA " << key.rx << "]\n";
        for (std::size_t r = 0; r < data.csi.rows; ++r) {
          out << "OFDM_Block " << data.ofdm_block_indices[r] << ": ";
          for (std::size_t c = 0; c < data.csi.cols; ++c) {
            if (c) out << ", ";
            const Complex& z = data.csi(r, c);
            out << "(" << f6(z.real()) << "," << f6(z.imag()) << ")";
          }
          out << "\n";
        }
      }
    }
    out << "[END ESTIMATION]\n";
  }
}

std::string format_capture(const CsiCapture& capture) {
  std::ostringstream os;
  write_capture(capture, os);
  return os.str();
}

}  // namespace ltesense
