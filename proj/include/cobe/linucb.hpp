#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cobe/core.hpp"
#include "cobe/linalg.hpp"

namespace cobe {

/// Feature layout for the optimistic least-squares learner. With S == 0 the
/// learner is a contextual bandit reading features from the round's action
/// set; otherwise it is LSVI over an S x A x H episodic problem with features
/// phi (row s * A + a).
struct LinUcbSpec {
  int d = 1;
  int H = 1;
  int S = 0;
  int A = 0;
  Mat phi;

  bool episodic() const { return S > 0; }
};

/// zeta0 sqrt(d ln(dT/delta)) for H = 1, zeta0 d sqrt(ln(dHT/delta)) otherwise.
double linucb_zeta(const LinUcbSpec& spec, double horizon, double delta, double zeta0);

struct LsviPlan {
  std::vector<Vec> w;      // per layer h = 0..H-1
  std::vector<double> q;   // q[(h * S + s) * A + a], clipped to [0, 1]
  double width = 0.0;      // 4 zeta + theta sqrt(d / (H t))
};

class RobustLinUcb final : public Learner {
 public:
  RobustLinUcb(LinUcbSpec spec, double horizon, double delta, double theta, double zeta0, RegretProfile profile);

  Policy select(const Context& ctx, Rng& rng) override;
  void update(const Feedback& fb) override;
  RegretProfile profile() const override { return profile_; }

  /// Exploration width for the next round.
  double width() const;
  /// Optimistic indices min{w^T a + width ||a||_{Lambda^-1}, 1} (bandit mode).
  std::vector<double> indices(std::span<const Vec> actions) const;
  Vec ridge_estimate() const;
  LsviPlan backward_pass() const;
  const Mat& gram() const { return lambda_; }

 private:
  LinUcbSpec spec_;
  double horizon_;
  double delta_;
  double theta_;
  double zeta_;
  RegretProfile profile_;
  long long episodes_ = 0;
  Mat lambda_;
  Vec target_;                   // bandit mode: sum a r
  std::vector<double> n_;        // episodic mode: visits per (s, a)
  std::vector<double> reward_;   // reward sum per (s, a)
  std::vector<double> n_next_;   // visits per (s, a, s')
};

RegretProfile linucb_profile(const LinUcbSpec& spec, double horizon, double delta, double kappa, double zeta0);

class LinUcbFactory final : public BaseFactory {
 public:
  LinUcbFactory(LinUcbSpec spec, double horizon, double delta, double kappa, double zeta0);
  std::unique_ptr<Learner> make(double theta) const override;
  RegretProfile profile() const override { return profile_; }
  double horizon() const override { return horizon_; }
  double delta() const override { return delta_; }
  std::shared_ptr<const BaseFactory> excluding(const Policy& pihat) const override;

 private:
  LinUcbSpec spec_;
  double horizon_;
  double delta_;
  double zeta0_;
  RegretProfile profile_;
};

}  // namespace cobe
