#include "ltesense/log_parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ltesense {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

struct Cursor {
  int record = -1;
  int line = 0;
};

[[noreturn]] void fail(const Cursor& at, const std::string& msg) {
  throw ParseError(msg, at.record, at.line);
}

double parse_double(const std::string& text, const Cursor& at, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) fail(at, what + ": empty numeric field");
  const char* begin = t.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') fail(at, what + ": not a number: '" + t + "'");
  if (!std::isfinite(v)) fail(at, what + ": non-finite value '" + t + "'");
  return v;
}

std::int64_t parse_int64(const std::string& text, const Cursor& at, const std::string& what) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) fail(at, what + ": not an integer: '" + t + "'");
  return v;
}

int parse_int(const std::string& text, const Cursor& at, const std::string& what) {
  std::int64_t v = parse_int64(text, at, what);
  if (v < INT32_MIN || v > INT32_MAX) fail(at, what + ": out of range: '" + trim(text) + "'");
  return static_cast<int>(v);
}

/// "key=value, key=value, ..." into pairs; tolerant of spaces per the
/// line-oriented grammar.
std::vector<std::pair<std::string, std::string>> split_kv_list(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      out.emplace_back(item, "");
    } else {
      out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
  }
  return out;
}

/// One "OFDM_Block i: (re,im), (re,im), ..." payload after the colon.
std::vector<Complex> parse_pair_list(const std::string& text, const Cursor& at) {
  std::vector<Complex> out;
  const char* p = text.c_str();
  const char* end = p + text.size();
  auto skip_ws = [&] {
    while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
  };
  skip_ws();
  while (p < end) {
    if (*p != '(') fail(at, std::string("malformed complex pair near '") + p + "'");
    ++p;
    char* num_end = nullptr;
    double re = std::strtod(p, &num_end);
    if (num_end == p) fail(at, "malformed complex pair: missing real part");
    p = num_end;
    skip_ws();
    if (p >= end || *p != ',') fail(at, "malformed complex pair: expected ','");
    ++p;
    double im = std::strtod(p, &num_end);
    if (num_end == p) fail(at, "malformed complex pair: missing imaginary part");
    p = num_end;
    skip_ws();
    if (p >= end || *p != ')') fail(at, "malformed complex pair: expected ')'");
    ++p;
    if (!std::isfinite(re) || !std::isfinite(im)) fail(at, "non-finite complex component");
    out.emplace_back(re, im);
    skip_ws();
    if (p < end && *p == ',') {
      ++p;
      skip_ws();
    }
  }
  if (out.empty()) fail(at, "OFDM_Block line carries no samples");
  return out;
}

void apply_cell_params(CellParameters& cell, const std::string& text, const Cursor& at,
                       int& seen_mask) {
  for (const auto& [key, value] : split_kv_list(text)) {
    if (key == "center_freq_Hz") {
      cell.center_freq_hz = parse_double(value, at, "center_freq_Hz");
      seen_mask |= 1;
    } else if (key == "nof_prb") {
      cell.nof_prb = parse_int(value, at, "nof_prb");
      seen_mask |= 2;
    } else if (key == "cp") {
      if (value == "normal")
        cell.cp = CyclicPrefix::normal;
      else if (value == "extended")
        cell.cp = CyclicPrefix::extended;
      else
        fail(at, "cp: expected 'normal' or 'extended', got '" + value + "'");
      seen_mask |= 4;
    } else if (key == "symbol_sz") {
      cell.symbol_sz = parse_int(value, at, "symbol_sz");
      seen_mask |= 8;
    } else if (key == "useful_re") {
      cell.useful_re = parse_int(value, at, "useful_re");
      seen_mask |= 16;
    } else if (key == "offset") {
      cell.offset = parse_int(value, at, "offset");
      seen_mask |= 32;
    } else if (key == "ofdm_symbols") {
      cell.ofdm_symbols = parse_int(value, at, "ofdm_symbols");
      seen_mask |= 64;
    } else {
      fail(at, "unknown cell parameter '" + key + "'");
    }
  }
}

void validate_block(const CsiBlock& block, const Cursor& at) {
  if (block.cell.nof_prb <= 0) fail(at, "nof_prb must be positive");
  if (block.cell.useful_re <= 0) fail(at, "useful_re must be positive");
  if (block.cell.symbol_sz < block.cell.useful_re) fail(at, "symbol_sz smaller than useful_re");
  if (block.port_data.empty()) fail(at, "record has no (port, rx antenna) data");

  std::size_t cols = 0;
  bool first = true;
  for (const auto& [key, data] : block.port_data) {
    const std::string where =
        "(port " + std::to_string(key.port) + ", rx " + std::to_string(key.rx) + ")";
    if (data.ofdm_block_indices.empty()) fail(at, where + " has no OFDM blocks");
    if (data.ofdm_block_indices.size() != data.csi.rows) fail(at, where + " index/row mismatch");
    if (first) {
      cols = data.csi.cols;
      first = false;
    } else if (data.csi.cols != cols) {
      fail(at, where + ": inconsistent subcarrier count within record (" +
                   std::to_string(data.csi.cols) + " vs " + std::to_string(cols) + ")");
    }
    int prev = -1;
    for (int idx : data.ofdm_block_indices) {
      if (idx < 0 || idx >= block.cell.ofdm_symbols)
        fail(at, where + ": OFDM block index " + std::to_string(idx) + " outside [0, " +
                     std::to_string(block.cell.ofdm_symbols) + ")");
      if (idx <= prev) fail(at, where + ": OFDM block indices not strictly increasing");
      if (prev >= 0 && block.block_stride > 0 && (idx - prev) % block.block_stride != 0)
        fail(at, where + ": OFDM block spacing inconsistent with block_stride");
      prev = idx;
    }
  }
}

}  // namespace

CsiCapture parse_capture(std::istream& in) {
  CsiCapture capture;
  Cursor at;

  enum class State { outside, header, port };
  State state = State::outside;

  CsiBlock block;
  int header_seen = 0;  // bit 0 ts, 1 snr, 2 rsrp, 3 cell complete, 4 sc_stride, 5 blk_stride
  int cell_mask = 0;
  std::string pending_cell;  // accumulating a wrapped Cell Parameters value
  int cur_port = -1;  // -1 = outside any section
  int cur_rx = -1;

  auto finish_cell_if_pending = [&] {
    if (pending_cell.empty()) return;
    apply_cell_params(block.cell, pending_cell, at, cell_mask);
    if (cell_mask != 127) fail(at, "Cell Parameters line is missing required keys");
    header_seen |= 8;
    pending_cell.clear();
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++at.line;
    const std::string line = trim(raw);

    // A wrapped "Cell Parameters" value continues while it ends with ','.
    if (!pending_cell.empty()) {
      pending_cell += " " + line;
      if (trim(pending_cell).back() != ',') finish_cell_if_pending();
      continue;
    }

    if (line.empty()) {
      if (state != State::outside) fail(at, "blank line inside record");
      continue;
    }

    switch (state) {
      case State::outside: {
        if (line == "[ESTIMATION]") {
          ++at.record;
          block = CsiBlock{};
          header_seen = 0;
          cell_mask = 0;
          cur_port = -1;
          cur_rx = -1;
          state = State::header;
        } else {
          fail(at, "expected [ESTIMATION], got '" + line + "'");
        }
        break;
      }
      case State::header: {
        if (starts_with(line, "[PORT")) {
          if ((header_seen & 0b111111) != 0b111111)
            fail(at, "record header incomplete before first [PORT] section");
          state = State::port;
          // fall through to the port handler below by reprocessing
        } else if (line == "[END ESTIMATION]") {
          fail(at, "record ended before any [PORT] section");
        } else {
          // Header lines are "key: value" with whitespace tolerated around
          // the colon; unknown keys are preserved verbatim.
          const std::size_t colon = line.find(':');
          const std::string key = colon == std::string::npos ? "" : trim(line.substr(0, colon));
          const std::string value = colon == std::string::npos ? "" : trim(line.substr(colon + 1));
          if (key == "Timestamp") {
            block.timestamp_us = parse_int64(value, at, "Timestamp");
            header_seen |= 1;
          } else if (key == "SNR") {
            block.snr_db = parse_double(value, at, "SNR");
            header_seen |= 2;
          } else if (key == "RSRP") {
            block.rsrp_db = parse_double(value, at, "RSRP");
            header_seen |= 4;
          } else if (key == "Cell Parameters") {
            pending_cell = value;
            if (pending_cell.empty()) fail(at, "empty Cell Parameters line");
            if (pending_cell.back() != ',') finish_cell_if_pending();
          } else if (key == "subcarrier_stride" || key == "block_stride") {
            // Both strides canonically share one line; tolerate split lines.
            std::stringstream ss(line);
            std::string item;
            while (std::getline(ss, item, ',')) {
              item = trim(item);
              const std::size_t c = item.find(':');
              if (c == std::string::npos) fail(at, "malformed stride line");
              const std::string k = trim(item.substr(0, c));
              const std::string v = trim(item.substr(c + 1));
              if (k == "subcarrier_stride") {
                block.subcarrier_stride = parse_int(v, at, "subcarrier_stride");
                if (block.subcarrier_stride <= 0) fail(at, "subcarrier_stride must be positive");
                header_seen |= 16;
              } else if (k == "block_stride") {
                block.block_stride = parse_int(v, at, "block_stride");
                if (block.block_stride <= 0) fail(at, "block_stride must be positive");
                header_seen |= 32;
              } else {
                fail(at, "unknown stride key '" + k + "'");
              }
            }
          } else {
            block.extra_header_lines.push_back(line);
          }
          break;
        }
        [[fallthrough]];
      }
      case State::port: {
        if (starts_with(line, "[PORT")) {
          std::string inner = trim(line.substr(5));
          if (inner.empty() || inner.back() != ']') fail(at, "malformed [PORT] line");
          cur_port = parse_int(inner.substr(0, inner.size() - 1), at, "port index");
          cur_rx = -1;
        } else if (starts_with(line, "[RX ANTENNA")) {
          if (cur_port < 0) fail(at, "[RX ANTENNA] outside of a [PORT] section");
          std::string inner = trim(line.substr(11));
          if (inner.empty() || inner.back() != ']') fail(at, "malformed [RX ANTENNA] line");
          cur_rx = parse_int(inner.substr(0, inner.size() - 1), at, "rx antenna index");
          PortRxKey key{cur_port, cur_rx};
          if (block.port_data.count(key))
            fail(at, "duplicate (port " + std::to_string(key.port) + ", rx " +
                         std::to_string(key.rx) + ") section");
          block.port_data[key] = PortRxData{};
        } else if (starts_with(line, "OFDM_Block")) {
          if (cur_port < 0 || cur_rx < 0) fail(at, "OFDM_Block outside of an [RX ANTENNA] section");
          std::size_t colon = line.find(':');
          if (colon == std::string::npos) fail(at, "malformed OFDM_Block line: missing ':'");
          int idx = parse_int(line.substr(10, colon - 10), at, "OFDM block index");
          std::vector<Complex> samples = parse_pair_list(line.substr(colon + 1), at);

          PortRxData& dst = block.port_data[PortRxKey{cur_port, cur_rx}];
          if (dst.csi.rows > 0 && samples.size() != dst.csi.cols)
            fail(at, "inconsistent subcarrier count within block: " +
                         std::to_string(samples.size()) + " vs " + std::to_string(dst.csi.cols));
          dst.ofdm_block_indices.push_back(idx);
          if (dst.csi.rows == 0) dst.csi.cols = samples.size();
          dst.csi.rows += 1;
          dst.csi.data.insert(dst.csi.data.end(), samples.begin(), samples.end());
        } else if (line == "[END ESTIMATION]") {
          validate_block(block, at);
          capture.blocks.push_back(std::move(block));
          state = State::outside;
        } else {
          fail(at, "unexpected line inside record: '" + line + "'");
        }
        break;
      }
    }
  }

  if (!pending_cell.empty()) fail(at, "unterminated Cell Parameters value");
  if (state != State::outside) fail(at, "missing [END ESTIMATION]");

  try {
    validate_capture(capture);
  } catch (const ValidationError& e) {
    fail(at, e.what());
  }
  return capture;
}

CsiCapture parse_capture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProcessingError("cannot open log file: " + path);
  return parse_capture(in);
}

void validate_capture(const CsiCapture& capture) {
  if (capture.blocks.empty()) return;
  const CsiBlock& first = capture.blocks.front();
  std::int64_t prev_ts = first.timestamp_us;
  for (std::size_t i = 0; i < capture.blocks.size(); ++i) {
    const CsiBlock& b = capture.blocks[i];
    if (b.timestamp_us < prev_ts)
      throw ValidationError("block " + std::to_string(i) + ": timestamps decrease");
    prev_ts = b.timestamp_us;
    if (b.port_data.size() != first.port_data.size())
      throw ValidationError("block " + std::to_string(i) + ": (port,rx) key set differs");
    auto it_a = b.port_data.begin();
    auto it_f = first.port_data.begin();
    for (; it_a != b.port_data.end(); ++it_a, ++it_f) {
      if (it_a->first != it_f->first)
        throw ValidationError("block " + std::to_string(i) + ": (port,rx) key set differs");
      if (it_a->second.csi.cols != it_f->second.csi.cols)
        throw ValidationError("block " + std::to_string(i) + ": subcarrier count differs");
    }
  }
}

}  // namespace ltesense
