#include "softprove/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>

namespace softprove {

namespace {

constexpr std::size_t kDim = 32;
constexpr std::size_t kClusterSize = 4;
constexpr double kNoise = 0.8;
constexpr int kChainLength = 4;
constexpr int kGoals = 6;

class Builder {
 public:
  Builder(std::size_t rule_count, std::uint64_t seed) : limit_(rule_count), rng_(seed) {
    out_.store = EmbeddingStore(kDim);
  }

  SyntheticKb build() {
    const std::size_t clusters = std::max<std::size_t>(8, limit_ / 8);
    for (std::size_t c = 0; c < clusters; ++c) add_cluster();

    // Goal 0 has a complete chain; the others dead-end one step before a fact.
    for (int g = 0; g < kGoals; ++g) {
      std::string goal = fresh_predicate();
      std::string left = chain(g == 0);
      std::string right = chain(g == 0);
      add({goal, {var("X"), var("Y")}}, {{left, {var("X")}}, {right, {var("Y")}}}, 1.0);
      out_.kb.add_goal(make_goal(Atom{goal, {cst("action"), cst("patient")}}));
    }
    // Weakly matching alternatives for chain predicates that never complete.
    for (const auto& p : chain_predicates_) {
      add({similar_to(p), {var("X")}}, {{random_predicate(), {var("X")}}}, 0.6);
    }
    std::uniform_real_distribution<double> score(0.5, 1.0);
    std::bernoulli_distribution is_fact(0.2);
    while (out_.kb.size() < limit_) {
      if (is_fact(rng_)) {
        add({random_predicate(), {cst(coin() ? "action" : "patient")}}, {}, 1.0);
      } else {
        add({random_predicate(), {var("X")}}, {{random_predicate(), {var("X")}}}, round3(score(rng_)));
      }
    }
    return std::move(out_);
  }

 private:
  static Term var(const char* n) { return Term::variable(n); }
  static Term cst(const char* n) { return Term::constant(n); }
  static double round3(double x) { return std::round(x * 1000.0) / 1000.0; }
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

  void add(Atom head, std::vector<Atom> body, double score) {
    if (out_.kb.size() >= limit_) return;
    Rule r{std::move(head), std::move(body), score, "b" + std::to_string(out_.kb.size() + 1), RuleOrigin::principle()};
    out_.kb.add(std::move(r));
  }

  std::string word() {
    std::uniform_int_distribution<int> letter(0, 25);
    for (;;) {
      std::string w;
      for (int i = 0; i < 7; ++i) w += static_cast<char>('a' + letter(rng_));
      if (used_.insert(w).second) return w;
    }
  }

  void add_cluster() {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> centroid(kDim);
    for (auto& x : centroid) x = gauss(rng_) / std::sqrt(static_cast<double>(kDim));
    std::vector<std::string> members;
    for (std::size_t m = 0; m < kClusterSize; ++m) {
      std::vector<float> v(kDim);
      for (std::size_t k = 0; k < kDim; ++k)
        v[k] = static_cast<float>(centroid[k] + kNoise * gauss(rng_) / std::sqrt(static_cast<double>(kDim)));
      std::string w = word();
      out_.store.add(w, v);
      cluster_of_[w] = clusters_.size();
      members.push_back(std::move(w));
    }
    clusters_.push_back(std::move(members));
  }

  // Each fresh predicate claims a whole cluster so its neighbours stay free
  // for the alternatives.
  std::string fresh_predicate() {
    const std::size_t c = next_cluster_++ % clusters_.size();
    return clusters_[c][0];
  }

  std::string similar_to(const std::string& p) {
    const auto& members = clusters_[cluster_of_.at(p)];
    return members[1 + std::uniform_int_distribution<std::size_t>(0, members.size() - 2)(rng_)];
  }

  std::string random_predicate() {
    const auto& members = clusters_[std::uniform_int_distribution<std::size_t>(0, clusters_.size() - 1)(rng_)];
    return members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng_)];
  }

  // p1(X) :- p2(X), ..., p_{n-1}(X) :- p_n(X), then p_n(const) when complete.
  std::string chain(bool complete) {
    std::vector<std::string> preds;
    for (int i = 0; i < kChainLength; ++i) preds.push_back(fresh_predicate());
    for (int i = 0; i + 1 < kChainLength; ++i) {
      add({preds[i], {var("X")}}, {{preds[i + 1], {var("X")}}}, 1.0);
      chain_predicates_.push_back(preds[i]);
    }
    if (complete) {
      add({preds.back(), {cst("action")}}, {}, 1.0);
      add({preds.back(), {cst("patient")}}, {}, 1.0);
    }
    return preds.front();
  }

  std::size_t limit_;
  std::mt19937_64 rng_;
  SyntheticKb out_;
  std::set<std::string> used_;
  std::vector<std::vector<std::string>> clusters_;
  std::map<std::string, std::size_t> cluster_of_;
  std::size_t next_cluster_ = 0;
  std::vector<std::string> chain_predicates_;
};

}  // namespace

SyntheticKb make_synthetic_kb(std::size_t rule_count, std::uint64_t seed) {
  return Builder(rule_count, seed).build();
}

BenchReport run_bench(std::size_t rule_count, std::uint64_t seed, const SolverConfig& config,
                      int runs) {
  SyntheticKb synth = make_synthetic_kb(rule_count, seed);
  BenchReport report;
  report.rule_count = synth.kb.size();
  for (int i = 0; i < std::max(1, runs); ++i) {
    const auto start = std::chrono::steady_clock::now();
    auto best = prove_all_goals(synth.kb, synth.kb.goals(), synth.store, config);
    const auto stop = std::chrono::steady_clock::now();
    report.proved = best.has_value();
    report.seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::vector<double> sorted = report.seconds;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  report.median_seconds = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  return report;
}

}  // namespace softprove
