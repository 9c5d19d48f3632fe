#include "limset/block_ladder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "limset/errors.hpp"

namespace limset {

namespace {

const double kLn3 = std::log(3.0);
const double kLnLn3 = std::log(std::log(3.0));
const double kNegInf = -std::numeric_limits<double>::infinity();

// Positions no jump can survive past: ln q <= ln ln(n+1) - 2n - ln 2 drops
// below the subnormal floor (~ -744.4) well before here.
constexpr long long kJumpHorizon = 400;
constexpr double kMinLnQ = -745.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// 3^(2^e) as an exact 64-bit integer (3^32 < 2^53), or -1 past that.
long long exact_anchor(long long e) {
  if (e < 0 || e > 5) return -1;
  long long m = 3;
  for (long long i = 0; i < e; ++i) m *= m;
  return m;
}

double ln_of_exponent(long long e) {
  // ln 3^(2^e) = 2^e ln 3; e <= 1023 keeps this finite.
  return std::ldexp(kLn3, static_cast<int>(e));
}

// ln(1 - 2^(-y)) for y > 0, stable for both tiny and large y.
double ln_one_minus_pow2_neg(double y) {
  const double t = y * M_LN2;
  return t > M_LN2 ? std::log1p(-std::exp(-t)) : std::log(-std::expm1(-t));
}

}  // namespace

BlockLadder BlockLadder::exact(int k_max) {
  if (k_max < 0) throw parameter_error("block ladder: k_max must be >= 0");
  std::vector<long long> exps;
  for (int k = 1; k <= k_max; ++k)
    for (int l = 0; l <= k; ++l)
      exps.push_back(static_cast<long long>(k) * k * k +
                     static_cast<long long>(l) * k);
  if (k_max >= 1) {
    const long long close = static_cast<long long>(k_max + 1) * (k_max + 1) *
                            (k_max + 1);
    exps.push_back(close);
  }
  BlockLadder ladder;
  ladder.build(k_max, exps);
  return ladder;
}

BlockLadder BlockLadder::scaled(int k_max, double kappa) {
  if (k_max < 0) throw parameter_error("block ladder: k_max must be >= 0");
  if (!(kappa >= 1.0))
    throw parameter_error("block ladder: scale kappa must be >= 1");
  std::vector<long long> exps;
  long long prev = 0;
  auto push_scaled = [&](long long e) {
    long long compressed = static_cast<long long>(
        std::ceil(static_cast<double>(e) / kappa));
    // Compression can collide neighbouring exponents; bump upward so the
    // sequence stays strictly increasing (block geometry is preserved).
    compressed = std::max(compressed, prev + 1);
    prev = compressed;
    exps.push_back(compressed);
  };
  for (int k = 1; k <= k_max; ++k)
    for (int l = 0; l <= k; ++l)
      push_scaled(static_cast<long long>(k) * k * k +
                  static_cast<long long>(l) * k);
  if (k_max >= 1)
    push_scaled(static_cast<long long>(k_max + 1) * (k_max + 1) * (k_max + 1));
  BlockLadder ladder;
  ladder.scaled_ = true;
  ladder.build(k_max, exps);
  return ladder;
}

void BlockLadder::build(int k_max, const std::vector<long long>& exps) {
  k_max_ = k_max;
  anchors_.clear();
  jumps_.clear();
  std::size_t idx = 0;
  for (int k = 1; k <= k_max; ++k)
    for (int l = 0; l <= k; ++l) anchors_.push_back({k, l, exps[idx++]});
  if (k_max >= 1) anchors_.push_back({k_max + 1, 0, exps[idx++]});

  long long prev = 0;
  for (const Anchor& a : anchors_) {
    if (a.e < 1 || a.e <= prev) {
      std::ostringstream os;
      os << "block ladder: exponents must be strictly increasing and >= 1; "
         << "violated at block (k=" << a.k << ", l=" << a.l << ")";
      throw parameter_error(os.str());
    }
    if (a.e > 1023) {
      std::ostringstream os;
      os << "block ladder: level 2^" << a.e
         << "*log3 overflows double precision at block (k=" << a.k
         << ", l=" << a.l << "); largest representable exponent is 1023";
      throw capability_error(os.str());
    }
    prev = a.e;
  }

  // Plateaus must be nonempty: the ramp start m_{k,l+1} - k^3 may not fall
  // below the plateau's own anchor. Only small neighbouring anchors can be
  // close enough for this to bind (exponent growth at least squares m).
  for (std::size_t a = 0; a + 1 < anchors_.size(); ++a) {
    const long long k = anchors_[a].k;
    const long long steps = k * k * k;
    const long long m_here = exact_anchor(anchors_[a].e);
    const long long m_next = exact_anchor(anchors_[a + 1].e);
    if (m_next > 0 && m_here > 0 && m_next - steps < m_here) {
      std::ostringstream os;
      os << "block ladder: empty plateau before block (k=" << anchors_[a + 1].k
         << ", l=" << anchors_[a + 1].l << "): ramp start " << (m_next - steps)
         << " precedes anchor " << m_here;
      throw parameter_error(os.str());
    }
  }
  collect_jumps();
}

std::size_t BlockLadder::flat_index(int k, int l) const {
  if (k == k_max_ + 1 && l == 0 && k_max_ >= 1) return anchors_.size() - 1;
  if (k < 1 || k > k_max_ || l < 0 || l > k)
    throw parameter_error("block ladder: anchor (k,l) out of range");
  const std::size_t before =
      static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(k + 2) / 2;
  return before + static_cast<std::size_t>(l);
}

double BlockLadder::ln_anchor_value(std::size_t a) const {
  if (a >= anchors_.size())
    throw parameter_error("block ladder: anchor index out of range");
  return ln_of_exponent(anchors_[a].e);
}

double BlockLadder::ln_position(const BlockPos& pos) const {
  const std::size_t a = flat_index(pos.k, pos.l);
  const long long steps =
      static_cast<long long>(pos.k) * pos.k * pos.k;
  if (pos.j < 0 || pos.j > steps)
    throw parameter_error("block ladder: ramp step j out of range");
  if (pos.j == 0) return ln_of_exponent(anchors_[a].e);
  if (a + 1 >= anchors_.size())
    throw parameter_error("block ladder: no transition leaves the final anchor");
  const long long m_next = exact_anchor(anchors_[a + 1].e);
  if (m_next > 0)
    return std::log(static_cast<double>(m_next - steps + pos.j));
  const double ln_m = ln_of_exponent(anchors_[a + 1].e);
  const double rel = static_cast<double>(pos.j - steps) * std::exp(-ln_m);
  return ln_m + std::log1p(rel);
}

double BlockLadder::ln_level_at(const BlockPos& pos) const {
  const std::size_t a = flat_index(pos.k, pos.l);
  const long long steps =
      static_cast<long long>(pos.k) * pos.k * pos.k;
  if (pos.j < 0 || pos.j > steps)
    throw parameter_error("block ladder: ramp step j out of range");
  if (pos.j == 0) return static_cast<double>(anchors_[a].e) * M_LN2 + kLnLn3;
  if (a + 1 >= anchors_.size())
    throw parameter_error("block ladder: no transition leaves the final anchor");
  const double gap = static_cast<double>(anchors_[a + 1].e - anchors_[a].e);
  const double x = static_cast<double>(anchors_[a].e) +
                   gap * (static_cast<double>(pos.j) / static_cast<double>(steps));
  return x * M_LN2 + kLnLn3;
}

double BlockLadder::ln_level_at_index(long long n) const {
  if (anchors_.empty() || n < 1) return kNegInf;
  // Find the last anchor at or below n. Anchors past the exact-integer range
  // exceed 2^53 and thus any representable n here.
  std::size_t last = anchors_.size();
  for (std::size_t a = 0; a < anchors_.size(); ++a) {
    const long long m = exact_anchor(anchors_[a].e);
    if (m < 0 || m > n) break;
    last = a;
  }
  if (last == anchors_.size()) return kNegInf;  // below the first anchor
  const Anchor& here = anchors_[last];
  if (last + 1 == anchors_.size())
    return static_cast<double>(here.e) * M_LN2 + kLnLn3;
  const long long m_next = exact_anchor(anchors_[last + 1].e);
  const long long steps =
      static_cast<long long>(here.k) * here.k * here.k;
  if (m_next > 0 && n > m_next - steps) {
    const BlockPos ramp{here.k, here.l, n - (m_next - steps)};
    return ln_level_at(ramp);
  }
  return static_cast<double>(here.e) * M_LN2 + kLnLn3;
}

double BlockLadder::ln_level_at_ln_pos(double ln_n) const {
  if (anchors_.empty() || std::isnan(ln_n)) return kNegInf;
  std::size_t last = anchors_.size();
  for (std::size_t a = 0; a < anchors_.size(); ++a) {
    if (ln_of_exponent(anchors_[a].e) > ln_n) break;
    last = a;
  }
  if (last == anchors_.size()) return kNegInf;
  const Anchor& here = anchors_[last];
  if (last + 1 == anchors_.size())
    return static_cast<double>(here.e) * M_LN2 + kLnLn3;
  const long long steps =
      static_cast<long long>(here.k) * here.k * here.k;
  const double ln_m_next = ln_of_exponent(anchors_[last + 1].e);
  // Ramp window (m_next - steps, m_next): visible only while the relative
  // width steps/m_next survives double rounding; otherwise it collapses
  // onto the plateau and the query reports the plateau level.
  const double rel = static_cast<double>(steps) * std::exp(-ln_m_next);
  const double ln_ramp_start = ln_m_next + std::log1p(-rel);
  if (ln_n > ln_ramp_start) {
    const double n = std::exp(ln_n);
    const double ramp_start = std::exp(ln_ramp_start);
    long long j = std::llround(n - ramp_start);
    j = std::max<long long>(1, std::min(steps, j));
    return ln_level_at({here.k, here.l, j});
  }
  return static_cast<double>(here.e) * M_LN2 + kLnLn3;
}

double BlockLadder::ln_H(double ln_t) const {
  if (std::isnan(ln_t)) throw parameter_error("block ladder: ln t is NaN");
  if (anchors_.empty()) return kNegInf;
  if (std::isinf(ln_t) && ln_t > 0)
    return static_cast<double>(anchors_.back().e) * M_LN2 + kLnLn3;
  const double pos = std::floor(ln_t);
  if (pos < 1.0) return kNegInf;
  if (pos <= 9007199254740992.0)  // 2^53: exact integer positions
    return ln_level_at_index(static_cast<long long>(pos));
  return ln_level_at_ln_pos(std::log(pos));
}

LogReal BlockLadder::q_at(const BlockPos& pos) const {
  std::size_t a = flat_index(pos.k, pos.l);
  BlockPos p = pos;
  if (p.j == 0) {
    if (a == 0) {
      // First anchor: the level jumps from 0, so the full plateau height
      // falls at this single position.
      const long long m = exact_anchor(anchors_[0].e);
      if (m < 0) return LogReal::zero();
      const double ln_delta =
          static_cast<double>(anchors_[0].e) * M_LN2 + kLnLn3;
      const double ln_q =
          ln_delta - 2.0 * static_cast<double>(m) - M_LN2;
      return std::isfinite(ln_q) ? LogReal::from_ln(ln_q)
                                 : LogReal::zero();
    }
    // Any later anchor is the landing of the previous transition.
    const Anchor& dep = anchors_[a - 1];
    p = BlockPos{dep.k, dep.l,
                 static_cast<long long>(dep.k) * dep.k * dep.k};
    a = a - 1;
  }
  const long long steps =
      static_cast<long long>(p.k) * p.k * p.k;
  if (p.j < 1 || p.j > steps)
    throw parameter_error("block ladder: ramp step j out of range");
  if (a + 1 >= anchors_.size())
    throw parameter_error("block ladder: no transition leaves the final anchor");
  const long long m_next = exact_anchor(anchors_[a + 1].e);
  if (m_next < 0) return LogReal::zero();  // e^{-2n} kills astronomical n
  const long long n = m_next - steps + p.j;
  const double gap = static_cast<double>(anchors_[a + 1].e - anchors_[a].e);
  const double x = static_cast<double>(anchors_[a].e) +
                   gap * (static_cast<double>(p.j) / static_cast<double>(steps));
  const double ln_delta = kLnLn3 + x * M_LN2 +
                          ln_one_minus_pow2_neg(gap / static_cast<double>(steps));
  const double ln_q = ln_delta - 2.0 * static_cast<double>(n) - M_LN2;
  return std::isfinite(ln_q) ? LogReal::from_ln(ln_q) : LogReal::zero();
}

LogReal BlockLadder::q_at_index(long long n) const {
  if (anchors_.empty() || n < 1) return LogReal::zero();
  const long long m_first = exact_anchor(anchors_[0].e);
  if (m_first > 0 && n == m_first) return q_at({1, 0, 0});
  for (std::size_t a = 0; a + 1 < anchors_.size(); ++a) {
    const long long m_next = exact_anchor(anchors_[a + 1].e);
    if (m_next < 0) break;
    const long long steps = static_cast<long long>(anchors_[a].k) *
                            anchors_[a].k * anchors_[a].k;
    if (n > m_next - steps && n <= m_next)
      return q_at({anchors_[a].k, anchors_[a].l, n - (m_next - steps)});
  }
  return LogReal::zero();
}

int BlockLadder::segment_of_index(long long n) const {
  if (anchors_.empty()) return 0;
  const long long m_first = exact_anchor(anchors_[0].e);
  if (m_first < 0 || n < m_first) return 0;
  // The very first atom is folded into window 1 so that telescoped window
  // masses reproduce the full H-mass (see the covariance discussion).
  if (n == m_first) return 1;
  std::size_t last = anchors_.size();
  for (std::size_t a = 0; a < anchors_.size(); ++a) {
    const long long m = exact_anchor(anchors_[a].e);
    if (m < 0 || m >= n) break;  // strictly-below search
    last = a;
  }
  if (last == anchors_.size() || last + 1 == anchors_.size()) return 0;
  return anchors_[last].l + 1;
}

void BlockLadder::collect_jumps() {
  jumps_.clear();
  if (anchors_.empty()) return;
  const long long m_first = exact_anchor(anchors_[0].e);
  if (m_first > 0 && m_first <= kJumpHorizon) {
    const LogReal q = q_at({1, 0, 0});
    if (!q.is_zero() && q.ln_mag >= kMinLnQ)
      jumps_.push_back({m_first, 1, q.ln_mag, static_cast<double>(m_first)});
  }
  for (std::size_t a = 0; a + 1 < anchors_.size(); ++a) {
    const long long m_next = exact_anchor(anchors_[a + 1].e);
    if (m_next < 0) break;
    const Anchor& dep = anchors_[a];
    const long long steps =
        static_cast<long long>(dep.k) * dep.k * dep.k;
    const int segment = dep.l + 1;  // seam windows carry index k+1
    bool past_horizon = false;
    for (long long j = 1; j <= steps; ++j) {
      const long long n = m_next - steps + j;
      if (n > kJumpHorizon) {
        past_horizon = true;
        break;
      }
      const LogReal q = q_at({dep.k, dep.l, j});
      if (!q.is_zero() && q.ln_mag >= kMinLnQ)
        jumps_.push_back({n, segment, q.ln_mag, static_cast<double>(n)});
    }
    if (past_horizon) break;
  }
}

BlockLadder::MassBound BlockLadder::q_mass_bound(long long n_enum) const {
  if (anchors_.empty()) return {0.0, 0.0, 0.0, true};
  if (n_enum < 0) n_enum = 0;
  double enumerated = 0.0;
  for (const Jump& jump : jumps_)
    if (jump.n <= n_enum) enumerated += std::exp(jump.ln_q);
  // Tail: every jump obeys d_n - d_{n-1} <= d_n <= log(n+1), so the mass past
  // N is at most sum_{n>N} log(n+1) e^{-2n} / 2. Bounding log(N+2+i) by
  // log(N+2) + i/(N+2) (concavity) and summing the geometric series:
  const double N = static_cast<double>(n_enum);
  const double r = std::exp(-2.0);
  const double tail = 0.5 * std::exp(-2.0 * (N + 1.0)) *
                      (std::log(N + 2.0) / (1.0 - r) +
                       r / ((N + 2.0) * (1.0 - r) * (1.0 - r)));
  const double total = enumerated + tail;
  return {enumerated, tail, total, total < 0.5};
}

std::vector<BlockLadder::IdentityCheck> BlockLadder::verify_identities() const {
  std::vector<IdentityCheck> report;
  if (k_max_ == 0) return report;

  {  // Anchor exponents follow the cubic-plus-linear recipe (exact mode) or
     // at least stay strictly increasing (scaled mode).
    bool pass = true;
    std::ostringstream detail;
    long long prev = 0;
    for (const Anchor& a : anchors_) {
      bool ok = a.e > prev;
      if (!scaled_) {
        const long long want =
            (a.k <= k_max_)
                ? static_cast<long long>(a.k) * a.k * a.k +
                      static_cast<long long>(a.l) * a.k
                : static_cast<long long>(a.k) * a.k * a.k;
        ok = ok && a.e == want;
      }
      if (!ok && pass) {
        pass = false;
        detail << "first failure at (k=" << a.k << ", l=" << a.l
               << "), exponent " << a.e;
      }
      prev = a.e;
    }
    if (pass)
      detail << anchors_.size() << " anchors"
             << (scaled_ ? ", strictly increasing after scaling"
                         : " match k^3 + l*k, closing anchor (k_max+1)^3");
    report.push_back({"anchor-exponents", pass, detail.str()});
  }

  if (!scaled_) {  // Seam alias: the anchor after (k,k) is m_{k+1} = 3^(2^(k+1)^3)
                   // and the seam exponent gap is 2k^2 + 3k + 1.
    bool pass = true;
    std::ostringstream detail;
    for (int k = 1; k <= k_max_ && pass; ++k) {
      const std::size_t seam = flat_index(k, k);
      const long long e_here = anchors_[seam].e;
      const long long e_next = anchors_[seam + 1].e;
      const long long cube =
          static_cast<long long>(k + 1) * (k + 1) * (k + 1);
      const long long gap_want =
          2LL * k * k + 3LL * k + 1;
      if (e_next != cube || e_next - e_here != gap_want) {
        pass = false;
        detail << "seam after block " << k << ": exponent " << e_next
               << ", expected " << cube;
      }
    }
    if (pass) detail << k_max_ << " seams land on (k+1)^3 with gap 2k^2+3k+1";
    report.push_back({"seam-alias", pass, detail.str()});
  }

  {  // Levels at anchors: both evaluation paths must report ln d = ln(log m).
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t a = 0; a < anchors_.size() && pass; ++a) {
      const Anchor& anc = anchors_[a];
      const double want =
          static_cast<double>(anc.e) * M_LN2 + kLnLn3;
      const double via_pos = ln_level_at({anc.k, anc.l, 0});
      const long long m = exact_anchor(anc.e);
      const double via_query =
          (m > 0) ? ln_level_at_index(m)
                  : ln_level_at_ln_pos(ln_of_exponent(anc.e));
      if (std::abs(via_pos - want) > 1e-12 * std::abs(want) ||
          std::abs(via_query - want) > 1e-12 * std::abs(want)) {
        pass = false;
        detail << "anchor (k=" << anc.k << ", l=" << anc.l
               << "): level paths disagree, " << fmt(via_query) << " vs "
               << fmt(want);
      }
    }
    if (pass)
      detail << "d at all " << anchors_.size()
             << " anchors equals log m (both index and log-position paths)";
    report.push_back({"anchor-levels", pass, detail.str()});
  }

  {  // Ramps land exactly on the next anchor at j = k^3, in both level and
     // position.
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t a = 0; a + 1 < anchors_.size() && pass; ++a) {
      const Anchor& dep = anchors_[a];
      const long long steps =
          static_cast<long long>(dep.k) * dep.k * dep.k;
      const BlockPos landing{dep.k, dep.l, steps};
      const double level_land = ln_level_at(landing);
      const double level_next = ln_level_at({anchors_[a + 1].k,
                                             anchors_[a + 1].l, 0});
      const double pos_land = ln_position(landing);
      const double pos_next = ln_of_exponent(anchors_[a + 1].e);
      if (level_land != level_next ||
          std::abs(pos_land - pos_next) > 1e-12 * std::abs(pos_next)) {
        pass = false;
        detail << "transition from (k=" << dep.k << ", l=" << dep.l
               << ") lands at level " << fmt(level_land) << ", expected "
               << fmt(level_next);
      }
    }
    if (pass)
      detail << anchors_.size() - 1 << " transitions land exactly at j = k^3";
    report.push_back({"ramp-landing", pass, detail.str()});
  }

  if (!scaled_) {  // Ramp exponent increments: j/k^2 within a block and
                   // (2k^2+3k+1) j/k^3 across a seam.
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t a = 0; a + 1 < anchors_.size() && pass; ++a) {
      const Anchor& dep = anchors_[a];
      const long long gap = anchors_[a + 1].e - dep.e;
      const long long gap_want = (dep.l < dep.k)
                                     ? dep.k
                                     : 2LL * dep.k * dep.k + 3LL * dep.k + 1;
      if (gap != gap_want) {
        pass = false;
        detail << "transition from (k=" << dep.k << ", l=" << dep.l
               << ") has exponent gap " << gap << ", expected " << gap_want;
      }
    }
    if (pass)
      detail << "per-step exponent increments are 1/k^2 within blocks and "
                "(2k^2+3k+1)/k^3 at seams";
    report.push_back({"ramp-exponents", pass, detail.str()});
  }

  {  // Plateau ordering: anchors strictly increase and every plateau keeps at
     // least its own anchor before the next ramp begins.
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t a = 0; a + 1 < anchors_.size() && pass; ++a) {
      const long long steps = static_cast<long long>(anchors_[a].k) *
                              anchors_[a].k * anchors_[a].k;
      const long long m_here = exact_anchor(anchors_[a].e);
      const long long m_next = exact_anchor(anchors_[a + 1].e);
      if (m_here > 0 && m_next > 0 && m_next - steps < m_here) {
        pass = false;
        detail << "plateau before (k=" << anchors_[a + 1].k
               << ", l=" << anchors_[a + 1].l << ") is empty";
      }
    }
    if (pass) detail << "all plateaus nonempty, anchors strictly increasing";
    report.push_back({"plateau-order", pass, detail.str()});
  }

  {  // Envelope d_n <= log(n+1): dense sweep over small exact positions plus
     // anchor/ramp samples at every scale (equality holds only at anchors).
    bool pass = true;
    std::ostringstream detail;
    for (long long n = 1; n <= 4096 && pass; ++n) {
      const double level = ln_level_at_index(n);
      if (level == kNegInf) continue;
      const double env = std::log(std::log(static_cast<double>(n) + 1.0));
      if (level > env + 1e-12) {
        pass = false;
        detail << "d_" << n << " exceeds log(n+1)";
      }
    }
    for (std::size_t a = 0; a + 1 < anchors_.size() && pass; ++a) {
      const Anchor& dep = anchors_[a];
      const long long steps =
          static_cast<long long>(dep.k) * dep.k * dep.k;
      const long long samples[] = {1, steps / 2 > 0 ? steps / 2 : 1, steps};
      for (long long j : samples) {
        const BlockPos pos{dep.k, dep.l, j};
        const double level = ln_level_at(pos);
        // position n has ln n = ln_position; envelope in the same log scale:
        const double env = std::log(ln_position(pos)) + 1e-12;
        if (level > env + 1e-12) {
          pass = false;
          detail << "ramp sample (k=" << dep.k << ", l=" << dep.l
                 << ", j=" << j << ") breaks the log(n+1) envelope";
          break;
        }
      }
    }
    if (pass) detail << "d_n <= log(n+1) at all sampled points";
    report.push_back({"envelope", pass, detail.str()});
  }

  {  // Total jump mass stays below 1/2 (sub-probability requirement).
    const MassBound mass = q_mass_bound(4096);
    std::ostringstream detail;
    detail << "enumerated " << fmt(mass.enumerated) << " + tail bound "
           << fmt(mass.tail_bound) << " = " << fmt(mass.total) << " < 0.5";
    report.push_back({"jump-mass", mass.below_half, detail.str()});
  }

  return report;
}

}  // namespace limset
