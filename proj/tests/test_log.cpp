#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ltesense/log_parser.hpp"
#include "ltesense/log_writer.hpp"
#include "ltesense/series.hpp"
#include "test_helpers.hpp"

using namespace ltesense;

TEST_CASE("sample log parses to the exact header values and samples") {
  std::ifstream in(testing::fixture_path("estimation_sample.log"));
  REQUIRE(in.good());
  const CsiCapture capture = parse_capture(in);

  REQUIRE(capture.blocks.size() == 1);
  const CsiBlock& b = capture.blocks.front();
  CHECK(b.timestamp_us == 1743022991574101);
  CHECK(b.snr_db == doctest::Approx(3.235169).epsilon(1e-12));
  CHECK(b.rsrp_db == doctest::Approx(56.205956).epsilon(1e-12));
  CHECK(b.cell.center_freq_hz == doctest::Approx(21302999040.0));
  CHECK(b.cell.nof_prb == 100);
  CHECK(b.cell.cp == CyclicPrefix::normal);
  CHECK(b.cell.symbol_sz == 1536);
  CHECK(b.cell.useful_re == 1200);
  CHECK(b.cell.offset == 0);
  CHECK(b.cell.ofdm_symbols == 14);
  CHECK(b.subcarrier_stride == 1);
  CHECK(b.block_stride == 2);

  REQUIRE(b.port_data.size() == 4);
  const PortRxData& p0r0 = b.port_data.at(PortRxKey{0, 0});
  CHECK(p0r0.ofdm_block_indices == std::vector<int>{0, 2});
  CHECK(p0r0.csi(0, 0) == Complex{-12.185438, 0.139236});
  CHECK(p0r0.csi(0, 1) == Complex{-12.498656, -1.154930});
}

TEST_CASE("empty input yields an empty capture") {
  std::istringstream in("");
  CHECK(parse_capture(in).blocks.empty());
}

TEST_CASE("formatter emits the canonical single-sample line") {
  CsiCapture capture;
  CsiBlock block;
  block.timestamp_us = 1;
  block.cell.nof_prb = 100;
  block.cell.symbol_sz = 1536;
  block.cell.useful_re = 1200;
  block.cell.ofdm_symbols = 14;
  PortRxData data;
  data.ofdm_block_indices = {0};
  data.csi = CMatrix(1, 1);
  data.csi(0, 0) = Complex{1.0, 0.0};
  block.port_data[PortRxKey{0, 0}] = data;
  capture.blocks.push_back(block);

  const std::string text = format_capture(capture);
  CHECK(text.find("OFDM_Block 0: (1.000000,0.000000)") != std::string::npos);
}

TEST_CASE("sample log round-trips through format_capture byte-identically") {
  std::ifstream in(testing::fixture_path("estimation_sample.log"));
  const CsiCapture capture = parse_capture(in);
  const std::string text = format_capture(capture);
  std::istringstream again(text);
  const CsiCapture reparsed = parse_capture(again);
  CHECK(capture == reparsed);
  CHECK(format_capture(reparsed) == text);
}

TEST_CASE("random captures round-trip (property)") {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 200; ++i) {
    const CsiCapture capture = testing::random_capture(rng);
    std::istringstream in(format_capture(capture));
    CHECK(parse_capture(in) == capture);
  }
}

TEST_CASE("unknown header lines are preserved through a round-trip") {
  const char* text =
      "[ESTIMATION]\n"
      "Timestamp: 5\n"
      "SNR: 1.000000\n"
      "RSRP: 2.000000\n"
      "CQI: 12\n"
      "Cell Parameters: center_freq_Hz=2100000000.000000, nof_prb=50, cp=normal, "
      "symbol_sz=1024, useful_re=600, offset=0, ofdm_symbols=14\n"
      "subcarrier_stride: 1, block_stride: 1\n"
      "[PORT 0]\n"
      "[RX ANTENNA 0]\n"
      "OFDM_Block 0: (1.000000,2.000000)\n"
      "[END ESTIMATION]\n";
  std::istringstream in(text);
  const CsiCapture capture = parse_capture(in);
  REQUIRE(capture.blocks.size() == 1);
  CHECK(capture.blocks[0].extra_header_lines == std::vector<std::string>{"CQI: 12"});
  std::istringstream again(format_capture(capture));
  CHECK(parse_capture(again) == capture);
}

TEST_CASE("whitespace around colons and commas is tolerated") {
  const char* text =
      "[ESTIMATION]\n"
      "Timestamp :  5\n"
      "SNR:1.500000\n"
      "RSRP : 2.000000\n"
      "Cell Parameters:  center_freq_Hz = 2100000000.000000 ,nof_prb= 50, cp=normal , "
      "symbol_sz=1024, useful_re=600, offset=0, ofdm_symbols=14\n"
      "subcarrier_stride : 1 , block_stride : 2\n"
      "[PORT 0]\n"
      "[RX ANTENNA 0]\n"
      "OFDM_Block 0:  ( 1.000000 , 2.000000 ) ,(3.000000,4.000000)\n"
      "[END ESTIMATION]\n";
  std::istringstream in(text);
  const CsiCapture capture = parse_capture(in);
  REQUIRE(capture.blocks.size() == 1);
  const CsiBlock& b = capture.blocks[0];
  CHECK(b.timestamp_us == 5);
  CHECK(b.snr_db == doctest::Approx(1.5));
  CHECK(b.cell.nof_prb == 50);
  CHECK(b.block_stride == 2);
  CHECK(b.port_data.at(PortRxKey{0, 0}).csi(0, 1) == Complex{3.0, 4.0});
}

TEST_CASE("parser reports positioned errors") {
  SUBCASE("missing end of record") {
    std::istringstream in(
        "[ESTIMATION]\n"
        "Timestamp: 5\n");
    CHECK_THROWS_WITH_AS(parse_capture(in), doctest::Contains("[END ESTIMATION]"), ParseError);
  }
  SUBCASE("malformed complex pair carries the line number") {
    std::istringstream in(
        "[ESTIMATION]\n"
        "Timestamp: 5\n"
        "SNR: 1.0\n"
        "RSRP: 2.0\n"
        "Cell Parameters: center_freq_Hz=1.0, nof_prb=1, cp=normal, symbol_sz=10, "
        "useful_re=5, offset=0, ofdm_symbols=14\n"
        "subcarrier_stride: 1, block_stride: 1\n"
        "[PORT 0]\n"
        "[RX ANTENNA 0]\n"
        "OFDM_Block 0: (1.0,oops)\n"
        "[END ESTIMATION]\n");
    try {
      parse_capture(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number() == 9);
      CHECK(e.record_index() == 0);
    }
  }
  SUBCASE("inconsistent subcarrier counts within a block") {
    std::istringstream in(
        "[ESTIMATION]\n"
        "Timestamp: 5\n"
        "SNR: 1.0\n"
        "RSRP: 2.0\n"
        "Cell Parameters: center_freq_Hz=1.0, nof_prb=1, cp=normal, symbol_sz=10, "
        "useful_re=5, offset=0, ofdm_symbols=14\n"
        "subcarrier_stride: 1, block_stride: 1\n"
        "[PORT 0]\n"
        "[RX ANTENNA 0]\n"
        "OFDM_Block 0: (1.0,2.0), (3.0,4.0)\n"
        "OFDM_Block 1: (1.0,2.0)\n"
        "[END ESTIMATION]\n");
    CHECK_THROWS_WITH_AS(parse_capture(in), doctest::Contains("inconsistent subcarrier"),
                         ParseError);
  }
  SUBCASE("non-numeric header value") {
    std::istringstream in(
        "[ESTIMATION]\n"
        "Timestamp: soon\n");
    CHECK_THROWS_AS(parse_capture(in), ParseError);
  }
  SUBCASE("junk outside records") {
    std::istringstream in("hello\n");
    CHECK_THROWS_AS(parse_capture(in), ParseError);
  }
  SUBCASE("block index spacing inconsistent with block_stride") {
    std::istringstream in(
        "[ESTIMATION]\n"
        "Timestamp: 5\n"
        "SNR: 1.0\n"
        "RSRP: 2.0\n"
        "Cell Parameters: center_freq_Hz=1.0, nof_prb=1, cp=normal, symbol_sz=10, "
        "useful_re=5, offset=0, ofdm_symbols=14\n"
        "subcarrier_stride: 1, block_stride: 2\n"
        "[PORT 0]\n"
        "[RX ANTENNA 0]\n"
        "OFDM_Block 0: (1.0,2.0)\n"
        "OFDM_Block 3: (1.0,2.0)\n"
        "[END ESTIMATION]\n");
    CHECK_THROWS_WITH_AS(parse_capture(in), doctest::Contains("block_stride"), ParseError);
  }
}

TEST_CASE("capture_to_series rejects a non-monotonic time axis") {
  CsiCapture capture;
  for (int b = 0; b < 2; ++b) {
    CsiBlock block;
    block.timestamp_us = 1000000;  // identical timestamps collapse the axis
    block.cell.center_freq_hz = 2.1e9;
    block.cell.nof_prb = 100;
    block.cell.symbol_sz = 1536;
    block.cell.useful_re = 1200;
    block.cell.ofdm_symbols = 14;
    PortRxData data;
    data.csi = CMatrix(1, 1);
    data.ofdm_block_indices = {0};
    data.csi(0, 0) = Complex{1.0, 0.0};
    block.port_data[PortRxKey{0, 0}] = data;
    capture.blocks.push_back(block);
  }
  CHECK_THROWS_WITH_AS(capture_to_series(capture, 0, 0), doctest::Contains("non-monotonic"),
                       ProcessingError);
}

TEST_CASE("capture_to_series shapes and time arithmetic") {
  CsiCapture capture;
  for (int b = 0; b < 2; ++b) {
    CsiBlock block;
    block.timestamp_us = 1000000 + b * 1000;  // 1 ms apart
    block.cell.center_freq_hz = 2.1e9;
    block.cell.nof_prb = 100;
    block.cell.symbol_sz = 1536;
    block.cell.useful_re = 1200;
    block.cell.ofdm_symbols = 14;
    block.block_stride = 2;
    PortRxData data;
    data.csi = CMatrix(2, 3);
    data.ofdm_block_indices = {0, 2};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 3; ++c) data.csi(r, c) = Complex{double(b), double(r * 3 + c)};
    block.port_data[PortRxKey{0, 0}] = data;
    capture.blocks.push_back(block);
  }

  const RxSeries series = capture_to_series(capture, 0, 0);
  REQUIRE(series.values.rows == 4);
  REQUIRE(series.values.cols == 3);
  CHECK(series.times[0] == 0.0);
  CHECK(series.times[1] == doctest::Approx(2.0 / 14000.0));
  // second block starts 1 ms after the first
  CHECK(series.times[2] == doctest::Approx(1e-3));
  CHECK(series.times[3] == doctest::Approx(1e-3 + 2.0 / 14000.0));
  // frequency axis is centered on the logged center frequency
  CHECK(series.freqs[1] == doctest::Approx(2.1e9));
  CHECK(series.freqs[2] - series.freqs[1] == doctest::Approx(15000.0));

  CHECK_THROWS_AS(capture_to_series(capture, 3, 3), ProcessingError);
}

TEST_CASE("export_series_csv emits plain fixed-notation rows") {
  RxSeries series;
  series.times = {0.0};
  series.freqs = {2.1e9};
  series.values = CMatrix(1, 1);
  series.values(0, 0) = Complex{2.0, -3.0};
  std::ostringstream out;
  export_series_csv(series, out);
  CHECK(out.str() == "t_s,f_hz,re,im\n0,2100000000,2,-3\n");

  RxSeries empty;
  std::ostringstream out2;
  export_series_csv(empty, out2);
  CHECK(out2.str() == "t_s,f_hz,re,im\n");

  // N x K series emits exactly N*K data rows
  RxSeries grid;
  grid.times = {0.0, 0.5, 1.0};
  grid.freqs = {1e9, 1e9 + 15e3};
  grid.values = CMatrix(3, 2);
  std::ostringstream out3;
  export_series_csv(grid, out3);
  std::size_t rows = 0;
  for (char ch : out3.str())
    if (ch == '\n') ++rows;
  CHECK(rows == 1 + 3 * 2);
}

TEST_CASE("series sample count matches the capture (property)") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50; ++i) {
    const CsiCapture capture = testing::random_capture(rng);
    std::size_t expected = 0;
    for (const CsiBlock& b : capture.blocks)
      expected += b.port_data.at(PortRxKey{0, 0}).csi.rows * b.port_data.at(PortRxKey{0, 0}).csi.cols;
    const RxSeries series = capture_to_series(capture, 0, 0);
    CHECK(series.values.rows * series.values.cols == expected);
    for (std::size_t t = 1; t < series.times.size(); ++t)
      CHECK(series.times[t] > series.times[t - 1]);
  }
}
