#include "signcast/harness/bench.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "signcast/absc/scheme.hpp"
#include "signcast/errors.hpp"

namespace signcast::harness {

std::string_view ToString(BenchOp op) {
  switch (op) {
    case BenchOp::kSetup: return "setup";
    case BenchOp::kKeygen: return "keygen";
    case BenchOp::kSigncrypt: return "signcrypt";
    case BenchOp::kDesigncrypt: return "designcrypt";
  }
  return "?";
}

BenchOp ParseBenchOp(std::string_view text) {
  for (const auto op : AllBenchOps()) {
    if (ToString(op) == text) return op;
  }
  throw ConfigError("unknown bench operation: " + std::string(text));
}

const std::vector<BenchOp>& AllBenchOps() {
  static const std::vector<BenchOp> ops{BenchOp::kSetup, BenchOp::kKeygen, BenchOp::kSigncrypt,
                                        BenchOp::kDesigncrypt};
  return ops;
}

namespace {

double ThreadCpuMs() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) / 1e6;
}

template <typename F>
double TimeMs(F&& f) {
  const double start = ThreadCpuMs();
  f();
  return ThreadCpuMs() - start;
}

BenchResult Summarize(BenchOp op, crypto::CurveProfile profile, std::size_t n, std::vector<double> samples) {
  BenchResult r;
  r.op = op;
  r.profile = profile;
  r.attribute_count = n;
  r.trials = samples.size();
  r.mean_ms = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  std::sort(samples.begin(), samples.end());
  r.min_ms = samples.front();
  r.max_ms = samples.back();
  const std::size_t mid = samples.size() / 2;
  r.median_ms = samples.size() % 2 ? samples[mid] : (samples[mid - 1] + samples[mid]) / 2;
  return r;
}

std::vector<std::string> AttributeNames(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("attr" + std::to_string(i));
  return names;
}

policy::AccessTree AndPolicy(const std::vector<std::string>& names) {
  std::vector<policy::AccessTree> leaves;
  for (const auto& a : names) leaves.push_back(policy::AccessTree::Leaf(a));
  return policy::AccessTree::And(std::move(leaves));
}

}  // namespace

std::vector<BenchResult> RunBench(const BenchConfig& config) {
  if (config.trials < 5) throw ConfigError("bench needs at least 5 trials");
  if (config.min_attributes < 1 || config.min_attributes > config.max_attributes) {
    throw ConfigError("bench attribute range is empty");
  }
  std::vector<BenchResult> rows;
  SeededRng root(config.seed);
  for (const auto profile : config.profiles) {
    SeededRng rng = root.Derive(ToString(profile));
    const auto [pk, mk] = absc::Setup(profile, rng);
    Bytes msg(config.message_bytes);
    rng.Fill(msg);
    for (const auto op : config.ops) {
      struct Point {
        policy::AttributeSet attrs;
        policy::AccessTree tree;
        absc::IssuedKeys keys;
        absc::SigncryptOutput out;
        std::vector<double> samples;
      };
      std::vector<Point> points;
      for (std::size_t n = config.min_attributes; n <= config.max_attributes; ++n) {
        const auto names = AttributeNames(n);
        auto attrs = policy::MakeAttributeSet(names);
        auto tree = AndPolicy(names);
        auto keys = absc::KeyGen(pk, mk, attrs, rng);
        auto out = absc::Signcrypt(pk, keys.sign, msg, tree, rng);
        points.push_back({std::move(attrs), std::move(tree), std::move(keys), std::move(out), {}});
      }
      auto run = [&](const Point& p) {
        switch (op) {
          case BenchOp::kSetup: {
            const auto fresh = absc::Setup(profile, rng);
            (void)absc::KeyGen(fresh.first, fresh.second, p.attrs, rng);
            break;
          }
          case BenchOp::kKeygen:
            (void)absc::KeyGen(pk, mk, p.attrs, rng);
            break;
          case BenchOp::kSigncrypt:
            (void)absc::Signcrypt(pk, p.keys.sign, msg, p.tree, rng);
            break;
          case BenchOp::kDesigncrypt:
            if (!absc::Designcrypt(pk, p.out.st, p.out.ct, *p.keys.sk, p.keys.ver)) {
              throw Error("bench designcrypt failed");
            }
            break;
        }
      };
      double sweep_ms = 0;
      for (const auto& p : points) sweep_ms += TimeMs([&] { run(p); });  // warm-up
      std::size_t trials = config.trials;
      if (config.min_series_seconds > 0 && sweep_ms > 0) {
        const auto wanted = static_cast<std::size_t>(std::ceil(config.min_series_seconds * 1e3 / sweep_ms));
        trials = std::clamp(wanted, config.trials, std::max(config.trials, config.max_trials));
      }
      // Each round sweeps every attribute count in a fresh random order, so
      // slow phases of the host spread over all points instead of shifting
      // a few neighbours.
      std::vector<std::size_t> order(points.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.Uniform(i)]);
        for (std::size_t i : order) points[i].samples.push_back(TimeMs([&] { run(points[i]); }));
      }
      for (std::size_t i = 0; i < points.size(); ++i) {
        rows.push_back(Summarize(op, profile, config.min_attributes + i, std::move(points[i].samples)));
      }
    }
  }
  return rows;
}

void WriteBenchCsv(std::ostream& out, const std::vector<BenchResult>& rows) {
  out << "operation,profile,attribute_count,trials,mean_ms,min_ms,max_ms,median_ms\n";
  out.setf(std::ios::fixed);
  out.precision(4);
  for (const auto& r : rows) {
    out << ToString(r.op) << ',' << crypto::ToString(r.profile) << ',' << r.attribute_count << ',' << r.trials << ','
        << r.mean_ms << ',' << r.min_ms << ',' << r.max_ms << ',' << r.median_ms << '\n';
  }
}

std::vector<BenchResult> ReadBenchCsv(std::istream& in) {
  std::vector<BenchResult> rows;
  std::string line;
  if (!std::getline(in, line) || line.rfind("operation,profile,attribute_count", 0) != 0) {
    throw DecodeError("bench CSV header missing");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) throw DecodeError("bench CSV row has " + std::to_string(cells.size()) + " cells");
    try {
      BenchResult r;
      r.op = ParseBenchOp(cells[0]);
      r.profile = crypto::ParseCurveProfile(cells[1]);
      r.attribute_count = std::stoul(cells[2]);
      r.trials = std::stoul(cells[3]);
      r.mean_ms = std::stod(cells[4]);
      r.min_ms = std::stod(cells[5]);
      r.max_ms = std::stod(cells[6]);
      r.median_ms = std::stod(cells[7]);
      rows.push_back(r);
    } catch (const std::logic_error& e) {
      throw DecodeError(std::string("bench CSV: ") + e.what());
    } catch (const ConfigError& e) {
      throw DecodeError(std::string("bench CSV: ") + e.what());
    }
  }
  return rows;
}

std::size_t CountInversions(const std::vector<BenchResult>& rows, BenchOp op, crypto::CurveProfile profile) {
  std::map<std::size_t, double> medians;
  for (const auto& r : rows) {
    if (r.op == op && r.profile == profile) medians[r.attribute_count] = r.median_ms;
  }
  std::size_t inversions = 0;
  for (auto it = medians.begin(); it != medians.end() && std::next(it) != medians.end(); ++it) {
    if (std::next(it)->second < it->second) ++inversions;
  }
  return inversions;
}

}  // namespace signcast::harness
