#pragma once

// Timing of setup / keygen / signcrypt / designcrypt against AND policies
// over n attributes. Samples are thread CPU time in milliseconds. One
// warm-up sweep is discarded; each timed round then sweeps every attribute
// count once.
//
// CSV: operation,profile,attribute_count,trials,mean_ms,min_ms,max_ms,median_ms

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "signcast/crypto/group.hpp"

namespace signcast::harness {

// kSetup times Setup followed by KeyGen over the n attributes, as a fresh
// deployment provisions its first device; Setup alone does not depend on n.
enum class BenchOp { kSetup, kKeygen, kSigncrypt, kDesigncrypt };

std::string_view ToString(BenchOp op);
BenchOp ParseBenchOp(std::string_view text);  // throws ConfigError
const std::vector<BenchOp>& AllBenchOps();

struct BenchResult {
  BenchOp op = BenchOp::kSetup;
  crypto::CurveProfile profile = crypto::CurveProfile::kSymmetric512;
  std::size_t attribute_count = 0;
  std::size_t trials = 0;
  double mean_ms = 0;
  double min_ms = 0;
  double max_ms = 0;
  double median_ms = 0;
};

struct BenchConfig {
  std::vector<crypto::CurveProfile> profiles{crypto::CurveProfile::kSymmetric512, crypto::CurveProfile::kAsymmetric159};
  std::vector<BenchOp> ops = AllBenchOps();
  std::size_t min_attributes = 2;
  std::size_t max_attributes = 19;
  std::size_t trials = 5;  // at least 5
  // When positive, raises the trial count of each (profile, op) series so its
  // timed rounds take about this long, estimated from the warm-up sweep.
  double min_series_seconds = 0;
  std::size_t max_trials = 1000;
  std::uint64_t seed = 1;
  std::size_t message_bytes = 1024;
};

// Rows ordered by profile, op, attribute count. Throws ConfigError for
// trials < 5 or an empty / inverted range.
std::vector<BenchResult> RunBench(const BenchConfig& config);

void WriteBenchCsv(std::ostream& out, const std::vector<BenchResult>& rows);
std::vector<BenchResult> ReadBenchCsv(std::istream& in);

// Number of i with median[i+1] < median[i] among rows of (op, profile),
// taken in attribute order.
std::size_t CountInversions(const std::vector<BenchResult>& rows, BenchOp op, crypto::CurveProfile profile);

}  // namespace signcast::harness
