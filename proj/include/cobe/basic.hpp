#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cobe/core.hpp"

namespace cobe {

/// max(1, ceil(log2(c_max L))).
int basic_k_max(double c_max, double length);

/// alpha_i = 2^{k-i-1} for i > k, alpha_k the remainder. Index 0 is i = k.
std::vector<double> cobe_alpha(int k, int k_max);

/// alpha_i = min{(sqrt(beta1 L)/beta2 + 2^k) / 2^i, 1/(2(k_max - k))} for i > k.
std::vector<double> gcobe_alpha(int k, int k_max, double length, double beta1, double beta2);

/// Nonincreasing, positive, summing to 1 within 1e-12.
void check_alpha(std::span<const double> alpha);

/// theta_i for sub-learner i with weight alpha_i.
double basic_theta(CorruptionType ctype, double alpha_i, int i, double c_max, double length, double horizon,
                   double delta);

/// Whether the misspecification test fires for some pair i < j. Index 0 is
/// i = k. `bound` is R(N, theta) for each sub-learner.
bool basic_check_fires(std::span<const double> reward, std::span<const double> bound,
                       std::span<const double> alpha, std::span<const double> theta, double t, double horizon,
                       double delta);

struct BasicOptions {
  /// Use the gap-dependent branch of a gap-form profile inside the check.
  bool use_known_gap = false;
  std::optional<double> gap;
};

using AlphaRule = std::function<std::vector<double>(int k, int k_max)>;

/// One run of the balancing-and-check procedure over sub-learners k..k_max
/// for at most L rounds. When k > k_max only ALG_{k_max} runs.
class Basic {
 public:
  Basic(const BaseFactory& factory, int k, long long length, double c_max, const AlphaRule& rule,
        BasicOptions options = {});

  /// Samples i_t, then lets ALG_{i_t} choose.
  Policy select(const Context& ctx, Rng& rng);
  /// Updates ALG_{i_t} and the counters. Returns false when the check fires.
  bool update(const Feedback& fb);

  bool finished() const { return t_ >= length_; }
  long long t() const { return t_; }
  long long length() const { return length_; }
  int k() const { return k_; }
  int first() const { return first_; }
  int k_max() const { return k_max_; }
  int choice() const { return first_ + static_cast<int>(current_); }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<long long>& pulls() const { return pulls_; }
  const std::vector<double>& rewards() const { return rewards_; }
  double total_reward() const { return total_reward_; }
  Learner& sub_learner(int offset) { return *learners_.at(offset); }

  /// The policy ALG_{first} played most often (lowest policy on ties); if it
  /// never played, the most played policy of the whole run.
  std::optional<Policy> most_played() const;

 private:
  RegretProfile check_profile_;
  BasicOptions options_;
  double horizon_;
  double delta_;
  long long length_;
  int k_;
  int k_max_;
  int first_;
  std::vector<double> alpha_;
  std::vector<double> theta_;
  std::vector<std::unique_ptr<Learner>> learners_;
  std::vector<long long> pulls_;
  std::vector<double> rewards_;
  std::map<Policy, long long> first_counts_;
  std::map<Policy, long long> all_counts_;
  double total_reward_ = 0.0;
  long long t_ = 0;
  std::size_t current_ = 0;
  bool pending_ = false;
};

struct MetaEvent {
  long long t = 0;
  std::string kind;
  double value = 0.0;
};

}  // namespace cobe
