#include "anm/error.hpp"
#include "anm/stimulus_lab.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace anm;

namespace {

std::vector<double> burst(double start, int n = 25) {
  std::vector<double> t(n);
  std::iota(t.begin(), t.end(), start);
  return t;
}

std::vector<double> bursts(std::initializer_list<double> starts) {
  std::vector<double> t;
  for (double s : starts)
    for (int k = 0; k < 25; ++k) t.push_back(s + k);
  return t;
}

}  // namespace

TEST_CASE("encoding a single character") {
  const auto a = encode_text("A");
  CHECK(a.duration() == 50.0);
  REQUIRE(a.trains.size() == 8);
  for (int c = 0; c < 8; ++c) {
    CAPTURE(c);
    CHECK(a.trains[c].duration == 50.0);
    if (c == 0 || c == 6) {
      CHECK(a.trains[c].times == burst(0));
    } else {
      CHECK(a.trains[c].empty());
    }
  }
  const auto space = encode_text(" ");
  for (int c = 0; c < 8; ++c) CHECK(space.trains[c].size() == (c == 5 ? 25u : 0u));
}

TEST_CASE("windows are laid out one per pattern") {
  const auto s = encode_patterns(std::vector<std::uint8_t>{0x01, 0xFF, 0x01});
  CHECK(s.duration() == 150.0);
  CHECK(s.trains[0].times == bursts({0, 50, 100}));
  for (int c = 1; c < 8; ++c) CHECK(s.trains[c].times == burst(50));
  CHECK(s.alphabet.at(0x01) == std::vector<std::size_t>{0, 2});
  CHECK(s.alphabet.at(0xFF) == std::vector<std::size_t>{1});
}

TEST_CASE("msb-first order mirrors the channels") {
  EncodingParams p;
  p.bit_order = BitOrder::msb_first;
  const auto s = encode_patterns(std::vector<std::uint8_t>{0x01}, p);
  CHECK(s.trains[7].size() == 25);
  CHECK(s.trains[0].empty());
}

TEST_CASE("every active channel carries burst_ms * rate spikes") {
  EncodingParams p;
  p.spike_rate = 2;
  p.burst_ms = 10;
  const auto s = encode_patterns(std::vector<std::uint8_t>{0x03}, p);
  CHECK(s.trains[0].size() == 20);
  CHECK(s.trains[0].times[1] == 0.5);
}

TEST_CASE("encoding errors") {
  CHECK_THROWS_AS(encode_patterns(std::vector<std::uint8_t>{1, 0, 2}), ValidationError);
  CHECK_THROWS_WITH_AS(encode_text("ab\xC3\xA9z"), doctest::Contains("position 2"), ValidationError);
  CHECK_THROWS_AS(encode_text(std::string("a\0b", 3)), ValidationError);
  EncodingParams p;
  p.burst_ms = 60;
  CHECK_THROWS_AS(encode_text("A", p), ValidationError);
  p = {};
  p.spike_rate = 0;
  CHECK_THROWS_AS(encode_text("A", p), ValidationError);
  p = {};
  p.burst_ms = 2.5;
  CHECK_THROWS_AS(encode_text("A", p), ValidationError);
}

TEST_CASE("encoding round trip") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::uint8_t> bytes(1 + rng.below(300));
    for (auto& b : bytes) b = static_cast<std::uint8_t>(1 + rng.below(255));
    for (auto order : {BitOrder::lsb_first, BitOrder::msb_first}) {
      EncodingParams p;
      p.bit_order = order;
      const auto s = encode_patterns(bytes, p);
      CHECK(s.duration() == static_cast<double>(bytes.size()) * 50.0);
      CHECK(decode_patterns(s.trains, p) == bytes);
    }
  }
  const auto text = oracle::read_text(oracle::fixture("english_sample.txt"));
  const auto s = encode_text(text);
  CHECK(decode_patterns(s.trains, s.params) == std::vector<std::uint8_t>(text.begin(), text.end()));
}

TEST_CASE("ideal responses") {
  const auto s = encode_text("ABAAB.");
  const auto ideals = ideal_responses(s);
  CHECK(ideals.size() == s.alphabet.size());
  CHECK(ideals.at('B').times == bursts({50, 200}));
  CHECK(ideals.at('B').duration == 300.0);
  CHECK(ideals.at('.').times == burst(250));

  const auto one = encode_text("QQQ");
  CHECK(ideal_responses(one).at('Q') == one.trains[0]);

  // distinct occurrence sets give distinct trains
  const auto text = encode_text(oracle::read_text(oracle::fixture("english_sample.txt")));
  const auto all = ideal_responses(text);
  for (auto i = all.begin(); i != all.end(); ++i)
    for (auto j = std::next(i); j != all.end(); ++j) CHECK(i->second != j->second);
}

TEST_CASE("separability") {
  const auto one = separability(encode_text("AAAA"));
  CHECK(one.matrix.n == 1);
  CHECK(one.matrix(0, 0) == 0.0);
  CHECK(one.over_threshold == std::vector<int>{0});

  // two patterns in disjoint windows: the single off-diagonal value is the
  // metric on the constructed trains
  const auto s = encode_text("AB");
  const auto sep = separability(s);
  REQUIRE(sep.matrix.n == 2);
  const SpikeTrain a{100, burst(0)}, b{100, burst(50)};
  const double h = oracle::grid_step(a, b, kDefaultSampleDt);
  CHECK(sep.matrix(0, 1) == doctest::Approx(oracle::dense_distance(a, b, h)).epsilon(1e-9));
  CHECK(std::abs(sep.matrix(0, 1) - oracle::dense_distance(a, b, h / 10)) < 1e-3);
  CHECK(sep.matrix.labels == std::vector<std::string>{"A", "B"});
  const int expected = sep.matrix(0, 1) >= 0.5 ? 1 : 0;
  CHECK(sep.over_threshold == std::vector<int>{expected, expected});

  const auto low = separability(s, 0.0);
  CHECK(low.over_threshold == std::vector<int>{1, 1});
}

TEST_CASE("pattern labels") {
  CHECK(pattern_label(' ') == "SPACE");
  CHECK(pattern_label(',') == "COMMA");
  CHECK(pattern_label('.') == "STOP");
  CHECK(pattern_label('-') == "DASH");
  CHECK(pattern_label('"') == "QUOTE");
  CHECK(pattern_label('Q') == "Q");
  CHECK(pattern_label(0x07) == "0x07");
  CHECK(pattern_label(0xE9) == "0xE9");
}

TEST_CASE("correlation classes") {
  CHECK(classify_correlation(0.0) == Correlation::none);
  CHECK(classify_correlation(0.01) == Correlation::weak);
  CHECK(classify_correlation(0.99) == Correlation::weak);
  CHECK(classify_correlation(1.0) == Correlation::strong);
  CHECK(classify_correlation(1.2) == Correlation::strong);
}

TEST_CASE("correlation report") {
  const auto s = encode_text("A-B-C-D-E");
  SpikeTrain silent{s.duration(), {}};
  for (const auto& row : correlation_report(silent, s)) CHECK(row.correlation == Correlation::none);

  SpikeTrain every{s.duration(), {}};
  for (std::size_t j = 0; j < s.patterns.size(); ++j) every.times.push_back(50.0 * j + 30);
  for (const auto& row : correlation_report(every, s)) {
    CHECK(row.mean_spikes == 1.0);
    CHECK(row.correlation == Correlation::strong);
  }

  // dash windows 1, 3, 5, 7 with 1, 1, 2, 1 spikes -> 1.25
  SpikeTrain dash{s.duration(), {60, 160, 260, 270, 360}};
  for (const auto& row : correlation_report(dash, s)) {
    if (row.pattern == '-') {
      CHECK(row.instances == 4);
      CHECK(row.mean_spikes == 1.25);
      CHECK(row.correlation == Correlation::strong);
    } else {
      CHECK(row.correlation == Correlation::none);
    }
  }

  const auto ideal = ideal_responses(s).at('-');
  for (const auto& row : correlation_report(ideal, s))
    if (row.pattern == '-') CHECK(row.mean_spikes == 25.0);

  CHECK_THROWS_AS(correlation_report(SpikeTrain{10, {}}, s), ValidationError);
}

TEST_CASE("motif makeup") {
  Genome g;
  g.motifs = {MotifId::FBE, MotifId::RCI, MotifId::FBE};
  g.output_taps = {1};
  const auto one = motif_makeup(std::vector<Genome>{g}, MakeupGrouping::overall);
  REQUIRE(one.size() == 1);
  CHECK(one[0].generation == -1);
  CHECK(one[0].motif_instances == 3);
  CHECK(one[0].percent.at(MotifId::FBE) == doctest::Approx(66.667).epsilon(1e-4));
  CHECK(one[0].percent.at(MotifId::RCI) == doctest::Approx(33.333).epsilon(1e-4));

  Genome h;
  h.motifs = {MotifId::CPG};
  h.output_taps = {0};
  h.lineage.generation = 4;
  const auto homogeneous = motif_makeup(std::vector<Genome>{h, h, h}, MakeupGrouping::overall);
  CHECK(homogeneous[0].percent.size() == 1);
  CHECK(homogeneous[0].percent.at(MotifId::CPG) == 100.0);

  const auto split = motif_makeup(std::vector<Genome>{g, h, g}, MakeupGrouping::by_generation);
  REQUIRE(split.size() == 2);
  CHECK(split[0].generation == 0);
  CHECK(split[0].motif_instances == 6);
  CHECK(split[1].generation == 4);
  CHECK(split[1].percent.at(MotifId::CPG) == 100.0);
  for (const auto& group : split) {
    double total = 0;
    for (const auto& [id, pct] : group.percent) total += pct;
    CHECK(total == doctest::Approx(100.0));
  }

  CHECK_THROWS_AS(motif_makeup(std::vector<Genome>{}, MakeupGrouping::overall), ValidationError);
}
