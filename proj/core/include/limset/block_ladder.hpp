#ifndef LIMSET_BLOCK_LADDER_HPP
#define LIMSET_BLOCK_LADDER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "limset/log_domain.hpp"

namespace limset {

// Block coordinate inside the ladder. j == 0 names the anchor m_{k,l};
// j in [1, k^3] names the j-th ramp step of the transition that starts on
// the plateau (k, l), i.e. index position n_{k,l} + j. The last ramp step
// lands exactly on the next anchor.
struct BlockPos {
  int k = 1;
  int l = 0;
  long long j = 0;
};

// Doubly-exponential index ladder: anchors sit at m_{k,l} = 3^(2^(e(k,l)))
// with integer exponents e(k,l) = k^3 + l*k (exact mode) or a compressed
// variant of them (scaled mode). The level sequence d_n is 0 before the
// first anchor, constant log(m_{k,l}) on each plateau, and climbs
// geometrically over k^3 ramp steps between plateaus. All positions and
// magnitudes are handled in exponent space: a position enters only through
// ln(n), a level only through ln(d_n).
class BlockLadder {
 public:
  struct Anchor {
    int k;
    int l;          // 0..k within block k; the seam to block k+1 is (k+1, 0)
    long long e;    // anchor exponent: m = 3^(2^e)
  };

  // Exact ladder up to block k_max (>= 0; k_max == 0 gives the empty ladder
  // with d == 0 everywhere). Exponents must stay below 1024 so that levels
  // fit in doubles; otherwise a capability_error names the first block out
  // of range.
  static BlockLadder exact(int k_max);

  // Scaled ladder: exponents e(k,l)/kappa rounded up, then bumped upward
  // where the compression collides so the sequence stays strictly
  // increasing. Block geometry (k^3 ramp steps, plateau spans) is kept.
  static BlockLadder scaled(int k_max, double kappa);

  int k_max() const { return k_max_; }
  const std::vector<Anchor>& anchors() const { return anchors_; }

  // ln(m) = 2^e * ln 3 for the anchor at flat index a (inf if out of double range).
  double ln_anchor_value(std::size_t a) const;

  // ln of the ladder position n for a block coordinate.
  double ln_position(const BlockPos& pos) const;

  // Level d_n:
  //   ln_level_at_index: exact integer position (full plateau+ramp logic).
  //   ln_level_at_ln_pos: position given as ln(n); ramp windows narrower
  //     than double resolution collapse onto their plateaus.
  //   ln_level_at(BlockPos): exact via exponent arithmetic at any scale.
  // All return ln(d_n), -inf when d_n == 0.
  double ln_level_at_index(long long n) const;
  double ln_level_at_ln_pos(double ln_n) const;
  double ln_level_at(const BlockPos& pos) const;

  // H(t) = d_{floor(ln t)}, argument as ln t; returns ln H.
  double ln_H(double ln_t) const;

  // Jump mass q_n = (d_n - d_{n-1}) e^{-2n} / 2 at a block coordinate, or at
  // a plain integer position (zero off the jump set).
  LogReal q_at(const BlockPos& pos) const;
  LogReal q_at_index(long long n) const;

  // Jump positions whose mass is nonzero in double precision, ascending.
  // These all sit at small n (the e^{-2n} factor kills everything else), so
  // they are exact integers.
  struct Jump {
    long long n;
    int segment;     // 1-based window index l: exp(m_{k,l-1}) < |Z| <= exp(m_{k,l})
    double ln_q;
    double ln_value; // ln |Z| = n
  };
  const std::vector<Jump>& jumps() const { return jumps_; }

  // Window index for a position: smallest l with n <= m_{k,l} within its
  // block; used to attach ladder mass to star segments.
  int segment_of_index(long long n) const;

  // Total mass sum q_n: exact enumeration below n_enum plus a closed-form
  // tail bound for sum_{n > n_enum} log(n+1) e^{-2n} / 2.
  struct MassBound {
    double enumerated;
    double tail_bound;
    double total;
    bool below_half;
  };
  MassBound q_mass_bound(long long n_enum = 4096) const;

  // Structural identity report: seam exponents, ramp landings, plateau
  // ordering, per-step ramp ratios, and the d_n <= log(n+1) envelope at
  // sampled points. Every line carries pass/fail plus detail.
  struct IdentityCheck {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<IdentityCheck> verify_identities() const;

 private:
  BlockLadder() = default;
  void build(int k_max, const std::vector<long long>& exps);
  void collect_jumps();

  // flat anchor index for (k, l); anchors_ ordered lexicographically,
  // ending with the closing anchor (k_max+1, 0).
  std::size_t flat_index(int k, int l) const;

  int k_max_ = 0;
  bool scaled_ = false;
  std::vector<Anchor> anchors_;
  std::vector<Jump> jumps_;
};

}  // namespace limset

#endif
