#pragma once

// Leave-one-policy-out construction. The derived MDP M' starts in a fresh
// state s0 whose actions pick one of H*S copies of M; copy (h, s) forbids
// pihat's action at layer h in state s. Copies are indexed by (h, s) rather
// than by s alone because policies are layer dependent. Every policy of M'
// acts like some policy of M other than pihat, and vice versa.

#include <memory>

#include "cobe/core.hpp"
#include "cobe/tabular_mdp.hpp"
#include "cobe/two_model_select.hpp"

namespace cobe {

struct LeaveOneOut {
  TabularMdp mdp;   // M'
  Policy pihat;
  int S = 0;        // states of M
  int A = 0;        // actions of M
  int H = 0;        // horizon of M
  int copies = 0;   // H * S
  int start_state = 0;  // s1 of M

  int copy_state(int copy, int s) const { return 1 + copy * S + s; }
  /// Kernel of M' built from a kernel of M (used for corrupted kernels too).
  Kernel lift(const Kernel& k) const;
  /// The M policy that an M' policy plays.
  Policy to_original(const Policy& prime) const;
  /// An M' policy playing `pi`; pi must differ from pihat.
  Policy to_prime(const Policy& pi) const;
};

LeaveOneOut leave_one_out(const TabularMdp& m, const Policy& pihat);

/// B over the policies other than pihat: COBE on the base factory with pihat
/// excluded. Its profile is the base profile, gap-free. Every selected policy
/// is checked to differ from pihat.
std::unique_ptr<Learner> make_excluding_learner(const std::shared_ptr<const BaseFactory>& base,
                                                const Policy& pihat, double c_max);

LearnerMaker excluding_learner_maker(std::shared_ptr<const BaseFactory> base, Policy pihat, double c_max);

}  // namespace cobe
