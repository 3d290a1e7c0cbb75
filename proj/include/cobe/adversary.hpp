#pragma once

// Corruption plans. An adversary sees the public history (contexts, chosen
// policies, realised rewards) up to the previous round and nothing else.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cobe/core.hpp"
#include "cobe/tabular_mdp.hpp"

namespace cobe {

struct PublicRound {
  Context context;
  Policy policy;
  double reward = 0.0;
};

using PublicHistory = std::vector<PublicRound>;

/// Replaces the uncorrupted means of the round's actions by corrupted ones in [0, 1].
class BanditAdversary {
 public:
  virtual ~BanditAdversary() = default;
  virtual std::vector<double> corrupt(int t, const PublicHistory& history, std::span<const double> clean) = 0;
};

/// Replaces (p, sigma) for one episode.
class MdpAdversary {
 public:
  virtual ~MdpAdversary() = default;
  virtual Kernel corrupt(int t, const PublicHistory& history, const TabularMdp& m) = 0;
};

/// Front-loaded spending: each round asks for the fraction of a full
/// corruption of size `full` it can still afford. The last affordable round is
/// a partial one, so the total spent equals the budget when T is long enough.
class Budget {
 public:
  explicit Budget(double total) : remaining_(total) {}
  double fraction(double full);
  double remaining() const { return remaining_; }

 private:
  double remaining_;
};

class NoBanditCorruption final : public BanditAdversary {
 public:
  std::vector<double> corrupt(int, const PublicHistory&, std::span<const double> clean) override {
    return {clean.begin(), clean.end()};
  }
};

class NoMdpCorruption final : public MdpAdversary {
 public:
  Kernel corrupt(int, const PublicHistory&, const TabularMdp& m) override { return m.kernel; }
};

/// Swaps the means of the best action and a decoy (default: the worst action)
/// until the budget runs out, so the ranking is reversed while it lasts.
class FlipAdversary final : public BanditAdversary {
 public:
  FlipAdversary(double budget, int decoy = -1) : budget_(budget), decoy_(decoy) {}
  std::vector<double> corrupt(int t, const PublicHistory& history, std::span<const double> clean) override;

 private:
  Budget budget_;
  int decoy_;
};

/// Raises the target action's mean to 1.
class BoostAdversary final : public BanditAdversary {
 public:
  BoostAdversary(double budget, int target) : budget_(budget), target_(target) {}
  std::vector<double> corrupt(int t, const PublicHistory& history, std::span<const double> clean) override;

 private:
  Budget budget_;
  int target_;
};

/// Mirrors every mean, mu -> 1 - mu. On the two-action lower-bound sets this is
/// exactly the reflected parameter w' of the non-robust least-squares example.
class MirrorAdversary final : public BanditAdversary {
 public:
  explicit MirrorAdversary(double budget) : budget_(budget) {}
  std::vector<double> corrupt(int t, const PublicHistory& history, std::span<const double> clean) override;

 private:
  Budget budget_;
};

/// Swaps (p, sigma) between two actions at every state.
class TransitionSwapAdversary final : public MdpAdversary {
 public:
  TransitionSwapAdversary(double budget, int a0 = 0, int a1 = 1) : budget_(budget), a0_(a0), a1_(a1) {}
  Kernel corrupt(int t, const PublicHistory& history, const TabularMdp& m) override;

 private:
  Budget budget_;
  int a0_;
  int a1_;
};

std::unique_ptr<BanditAdversary> make_bandit_adversary(const std::string& name, double budget, int target);
std::unique_ptr<MdpAdversary> make_mdp_adversary(const std::string& name, double budget);

}  // namespace cobe
