#include "d2match/estimate.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include <json.hpp>

#include "d2match/errors.hpp"
#include "d2match/io_json.hpp"
#include "d2match/oracle.hpp"
#include "d2match/random.hpp"

namespace d2match {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

double run_trial(AlgorithmId algorithm, const Instance& inst, RandomStream& stream,
                 double opt) {
  switch (algorithm) {
    case AlgorithmId::kHalfHalf:
      return static_cast<double>(half_half(inst, stream).size) / opt;
    case AlgorithmId::kGreedy:
      return static_cast<double>(greedy(inst, stream).size) / opt;
    case AlgorithmId::kWaterLevel:
      return to_double(water_level(inst).total_value()) / opt;
  }
  throw Error("unknown algorithm id");
}

}  // namespace

DistributionSpec parse_distribution_spec(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed distribution spec: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j.contains("instance"))
    throw ParseError("distribution spec needs \"kind\" and \"instance\"");

  DistributionSpec spec;
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "fixed") {
    spec.kind = DistributionSpec::Kind::kFixed;
  } else if (kind == "permuted") {
    spec.kind = DistributionSpec::Kind::kPermuted;
  } else {
    throw ParseError("distribution kind must be \"fixed\" or \"permuted\"");
  }
  if (j["instance"].is_string()) {
    spec.instance = parse_instance(read_file(j["instance"].get<std::string>()));
  } else {
    spec.instance = parse_instance(j["instance"].dump());
  }
  return spec;
}

RatioEstimate estimate_ratio(AlgorithmId algorithm, const DistributionSpec& spec,
                             std::uint64_t trials, std::uint64_t seed, int threads) {
  if (trials < 100) throw Error("ratio estimation needs at least 100 trials");
  const std::int64_t opt_int = max_matching(spec.instance).size;
  if (opt_int == 0) throw Error("instance has OPT = 0; competitive ratio is undefined");
  const double opt = static_cast<double>(opt_int);
  // OPT is invariant under offline permutation, so one oracle call covers
  // every permuted trial.

  const RandomSource source(seed);
  const bool permute = spec.kind == DistributionSpec::Kind::kPermuted;
  std::vector<double> ratios(trials);

  auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t t = lo; t < hi; ++t) {
      RandomStream stream = source.stream(t);
      if (permute) {
        const Instance permuted = apply_permutation(
            spec.instance, OfflinePermutation::random(spec.instance.offline_count(), stream));
        ratios[t] = run_trial(algorithm, permuted, stream, opt);
      } else {
        ratios[t] = run_trial(algorithm, spec.instance, stream, opt);
      }
    }
  };

  if (threads <= 1) {
    run_range(0, trials);
  } else {
    const std::uint64_t chunk = (trials + static_cast<std::uint64_t>(threads) - 1) /
                                static_cast<std::uint64_t>(threads);
    std::vector<std::thread> workers;
    for (int w = 0; w < threads; ++w) {
      const std::uint64_t lo = chunk * static_cast<std::uint64_t>(w);
      const std::uint64_t hi = std::min(trials, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back(run_range, lo, hi);
    }
    for (std::thread& w : workers) w.join();
  }

  // Sequential reduction in trial order keeps the result bitwise independent
  // of the thread count.
  double sum = 0.0;
  for (double r : ratios) sum += r;
  const double mean = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (double r : ratios) ss += (r - mean) * (r - mean);
  const double sample_var = trials > 1 ? ss / static_cast<double>(trials - 1) : 0.0;

  RatioEstimate est;
  est.mean = mean;
  est.half_width = kZ99 * std::sqrt(sample_var / static_cast<double>(trials));
  est.trials = trials;
  est.seed = seed;
  return est;
}

}  // namespace d2match
