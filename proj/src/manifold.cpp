#include "manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "rootfind.hpp"
#include "util.hpp"

namespace spduff {

const char* chart_name(ChartId id) {
  switch (id) {
    case ChartId::K1: return "K1";
    case ChartId::K2: return "K2";
    case ChartId::K3: return "K3";
    case ChartId::Full: return "full";
  }
  return "full";
}

int chart_branch(ChartId id) {
  switch (id) {
    case ChartId::K1: return 1;
    case ChartId::K2: return 2;
    case ChartId::K3: return 3;
    case ChartId::Full: return 1;
  }
  return 1;
}

namespace {

constexpr int kScanN = 4096;

// Width of the initial scan window for roots of f(y) - m(t). Cauchy bound on
// the polynomial part when it has degree >= 1, widened by the trig amplitudes
// and the forcing values at the interval ends.
double base_range(const OscillatorProblem& p) {
  double mbound = std::max(std::abs(p.m.eval(p.t_begin)), std::abs(p.m.eval(p.t_end)));
  double trig_amp = 0;
  for (const TrigTerm& tt : p.f.trig()) trig_amp += std::abs(tt.amplitude);
  const auto& c = p.f.poly();
  int d = static_cast<int>(c.size()) - 1;
  while (d > 0 && c[d] == 0.0) --d;
  if (d >= 1) {
    double num = mbound + trig_amp;
    for (int k = 0; k < d; ++k) num = std::max(num, std::abs(c[k]) + mbound + trig_amp);
    return 1.0 + num / std::abs(c[d]);
  }
  return 16.0 + trig_amp + mbound;
}

double m_scale(const OscillatorProblem& p, double t) { return std::max(1.0, std::abs(p.m.eval(t))); }

}  // namespace

std::pair<double, double> state_hull(const OscillatorProblem& p) {
  const double R = base_range(p);
  double lo = 0, hi = 0;
  bool any = false;
  for (double t : {p.t_begin, p.t_end}) {
    auto g = [&](double y) { return p.f.eval(y) - p.m.eval(t); };
    ScanResult res = scan_roots(g, -R, R, kScanN, 1e-5 * m_scale(p, t),
                                [&](double y) { return p.f.eval(y, 1); });
    for (double r : res.roots) {
      if (!any) {
        lo = hi = r;
        any = true;
      } else {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
  }
  if (!any) return {-R, R};
  double center = 0.5 * (lo + hi);
  double half = std::max(0.75 * (hi - lo), 1.0);  // 50% extension; at least unit half-width
  return {center - half, center + half};
}

BranchRoots branch_roots(const OscillatorProblem& p, double t) {
  if (t < p.t_begin - 1e-12 || t > p.t_end + 1e-12)
    throw error(errc::invalid_argument, "t outside the problem interval");
  auto [ylo, yhi] = state_hull(p);
  auto g = [&](double y) { return p.f.eval(y) - p.m.eval(t); };
  auto dg = [&](double y) { return p.f.eval(y, 1); };
  ScanResult res = scan_roots(g, ylo, yhi, kScanN, 1e-5 * m_scale(p, t), dg);
  BranchRoots out{std::move(res.roots), std::move(res.tangents)};
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

CriticalManifold find_folds(const OscillatorProblem& p) {
  if (!validate(p, 64).passed)
    throw error(errc::invalid_argument, "problem failed validation; fix it before the fold search");
  auto [ylo, yhi] = state_hull(p);
  auto fp = [&](double y) { return p.f.eval(y, 1); };
  auto fpp = [&](double y) { return p.f.eval(y, 2); };

  double fp_scale = 1.0;
  for (int i = 0; i <= 64; ++i)
    fp_scale = std::max(fp_scale, std::abs(fp(ylo + (yhi - ylo) * i / 64.0)));

  auto t_candidates = [&](double value) {
    auto h = [&](double t) { return p.m.eval(t) - value; };
    return scan_roots(h, p.t_begin, p.t_end, 1024, 0.0, [&](double t) { return p.m.eval(t, 1); })
        .roots;
  };

  // Degenerate critical points: zeros of f'' where f' also vanishes.
  ScanResult infl = scan_roots(fpp, ylo, yhi, kScanN, 0.0);
  for (double y : infl.roots) {
    if (std::abs(fp(y)) <= 1e-9 * fp_scale && !t_candidates(p.f.eval(y)).empty()) {
      std::ostringstream os;
      os << "degenerate critical point (phi'' = 0) at y = " << y;
      throw error(errc::assumption_a1_violated, os.str());
    }
  }

  ScanResult crit = scan_roots(fp, ylo, yhi, kScanN, 0.0, fpp);
  std::vector<Fold> folds;
  for (double yc : crit.roots) {
    const std::vector<double> ts = t_candidates(p.f.eval(yc));
    if (ts.empty()) continue;  // fold outside the data window: no fold in range
    if (ts.size() > 1)
      throw error(errc::assumption_a1_violated,
                  "a critical point maps to several times; S is not a graph t = phi(y)");
    const double tc = ts[0];
    const double mp = p.m.eval(tc, 1);
    if (std::abs(mp) <= 1e-12 * m_scale(p, tc))
      throw error(errc::assumption_a1_violated, "m'(t) vanishes at a fold time");
    const double phi_dd = p.f.eval(yc, 2) / mp;
    if (std::abs(phi_dd) <= kFoldNondegeneracyTol)
      throw error(errc::assumption_a1_violated, "degenerate fold (|phi''| below tolerance)");
    folds.push_back({yc, tc, phi_dd, phi_dd > 0});
  }

  if (folds.size() != 2) {
    std::ostringstream os;
    if (folds.empty())
      os << "no folds in range";
    else
      os << "found " << folds.size() << " folds in range, (A1) requires exactly 2";
    throw error(errc::assumption_a1_violated, os.str());
  }
  if (folds[0].is_minimum == folds[1].is_minimum)
    throw error(errc::assumption_a1_violated, "need one minimum and one maximum fold");
  const Fold& fmin = folds[0].is_minimum ? folds[0] : folds[1];
  const Fold& fmax = folds[0].is_minimum ? folds[1] : folds[0];
  if (!(fmin.y < fmax.y))
    throw error(errc::assumption_a1_violated, "y_min < y_max fails (mirrored S-shape)");
  if (!(fmin.t < fmax.t))
    throw error(errc::assumption_a1_violated, "fold times out of order for the assumed S-shape");

  CriticalManifold mani;
  mani.s_shaped = true;
  mani.fold_min = fmin;
  mani.fold_max = fmax;
  mani.t_min = fmin.t;
  mani.t_max = fmax.t;
  mani.y_lo = ylo;
  mani.y_hi = yhi;
  return mani;
}

CriticalManifold build_manifold(const OscillatorProblem& p) {
  try {
    return find_folds(p);
  } catch (const error& e) {
    if (e.code() != errc::assumption_a1_violated) throw;
    // Monotone fallback: a single branch when every time slice has one root.
    for (int i = 0; i <= 64; ++i) {
      const double t = p.t_begin + (p.t_end - p.t_begin) * i / 64.0;
      BranchRoots br = branch_roots(p, t);
      if (br.roots.size() != 1 || !br.tangents.empty()) throw;
    }
    auto [ylo, yhi] = state_hull(p);
    CriticalManifold mani;
    mani.s_shaped = false;
    mani.y_lo = ylo;
    mani.y_hi = yhi;
    return mani;
  }
}

bool branch_domain_contains(const CriticalManifold& mani, const OscillatorProblem& p, int branch,
                            double t) {
  const double tol = 1e-12 * (p.t_end - p.t_begin);
  if (!mani.s_shaped) return branch == 1 && t >= p.t_begin - tol && t <= p.t_end + tol;
  double lo = 0, hi = 0;
  switch (branch) {
    case 1: lo = p.t_begin; hi = mani.t_max; break;
    case 2: lo = mani.t_min; hi = mani.t_max; break;
    case 3: lo = mani.t_min; hi = p.t_end; break;
    default: return false;
  }
  return t >= lo - tol && t <= hi + tol;
}

BranchPoint branch(const CriticalManifold& mani, const OscillatorProblem& p, int branch_i,
                   double t) {
  if (!branch_domain_contains(mani, p, branch_i, t)) {
    std::ostringstream os;
    os << "t = " << t << " outside the domain of u" << branch_i;
    throw error(errc::branch_domain, os.str());
  }
  double lo, hi;
  if (!mani.s_shaped) {
    lo = mani.y_lo;
    hi = mani.y_hi;
  } else {
    switch (branch_i) {
      case 1: lo = mani.fold_max.y; hi = mani.y_hi; break;
      case 2: lo = mani.fold_min.y; hi = mani.fold_max.y; break;
      default: lo = mani.y_lo; hi = mani.fold_min.y; break;
    }
  }
  const double mt = p.m.eval(t);
  const double scale = std::max(1.0, std::abs(mt));
  auto g = [&](double y) { return p.f.eval(y) - mt; };
  auto dg = [&](double y) { return p.f.eval(y, 1); };
  double u;
  const double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) {
    u = lo;
  } else if (ghi == 0.0) {
    u = hi;
  } else if (glo * ghi < 0.0) {
    u = solve_bracketed(g, lo, hi, dg);
  } else {
    // Fold times put the root at a range endpoint up to rounding.
    u = std::abs(glo) < std::abs(ghi) ? lo : hi;
    if (std::abs(g(u)) > 1e-9 * scale)
      throw error(errc::internal, "branch root not bracketed in its y-range");
  }
  if (std::abs(g(u)) > 1e-12 * scale) {
    // Newton rescue for endpoint roots.
    for (int it = 0; it < 8 && std::abs(g(u)) > 1e-13 * scale; ++it) {
      const double d = dg(u);
      if (d == 0.0) break;
      u -= g(u) / d;
    }
    if (std::abs(g(u)) > 1e-12 * scale)
      throw error(errc::internal, "branch root residual above tolerance");
  }
  BranchPoint out;
  out.u = u;
  const double fpu = p.f.eval(u, 1);
  if (std::abs(fpu) >= 1e-6) out.du = p.m.eval(t, 1) / fpu;
  return out;
}

ValidationReport check_A1_A3(const OscillatorProblem& p, const CriticalManifold& mani, int grid_n,
                             unsigned long long seed) {
  if (!mani.s_shaped)
    throw error(errc::invalid_argument, "check_A1_A3 needs an S-shaped manifold (folds found)");
  if (grid_n < 8) throw error(errc::invalid_argument, "grid_n too small");
  ValidationReport rep;
  SplitMix64 rng(seed);

  // (A2): f' vanishes only at the two folds. Sample y on the part of the hull
  // that lies over the data window, excluding one grid cell around each fold.
  const double width = mani.y_hi - mani.y_lo;
  const double excl = width / grid_n;
  double m_lo = p.m.eval(p.t_begin), m_hi = m_lo;
  for (int i = 0; i <= 256; ++i) {
    const double mv = p.m.eval(p.t_begin + (p.t_end - p.t_begin) * i / 256.0);
    m_lo = std::min(m_lo, mv);
    m_hi = std::max(m_hi, mv);
  }
  for (int i = 0; i <= grid_n; ++i) {
    double y = mani.y_lo + width * i / grid_n;
    if (i > 0 && i < grid_n) y += rng.uniform(-0.3, 0.3) * width / grid_n;
    if (std::abs(y - mani.fold_min.y) < excl || std::abs(y - mani.fold_max.y) < excl) continue;
    const double fy = p.f.eval(y);
    if (fy < m_lo - 1e-9 || fy > m_hi + 1e-9) continue;  // not on S over the data window
    if (p.f.eval(y, 1) == 0.0)
      rep.add("A2", y, "phi'(y) = 0 away from the folds");
  }

  // (A3): sign of f' along each branch, fold-time neighbourhoods excluded.
  struct BranchCheck {
    int index;
    double lo, hi;
    bool want_negative;
  };
  const BranchCheck checks[] = {{1, p.t_begin, mani.t_max, false},
                                {2, mani.t_min, mani.t_max, true},
                                {3, mani.t_min, p.t_end, false}};
  for (const BranchCheck& bc : checks) {
    const double len = bc.hi - bc.lo;
    if (len <= 0) continue;
    const double tmarg = len / grid_n;
    for (int i = 0; i <= grid_n; ++i) {
      double t = bc.lo + len * i / grid_n;
      if (i > 0 && i < grid_n) t += rng.uniform(-0.3, 0.3) * len / grid_n;
      if (std::abs(t - mani.t_min) < tmarg || std::abs(t - mani.t_max) < tmarg) continue;
      const double u = branch(mani, p, bc.index, t).u;
      const double fpu = p.f.eval(u, 1);
      const bool ok = bc.want_negative ? fpu < 0 : fpu > 0;
      if (!ok) {
        std::ostringstream os;
        os << "df/dy(u" << bc.index << "(t)) = " << fpu << ", wrong sign for "
           << (bc.want_negative ? "S_m" : "S_a/S_b");
        rep.add("A3", t, os.str());
      }
    }
  }
  return rep;
}

ChartPartition build_charts(const CriticalManifold& mani, const OscillatorProblem& p,
                            double margin_fraction) {
  if (!(margin_fraction > 0.0 && margin_fraction < 0.25))
    throw error(errc::invalid_argument, "margin_fraction must lie in (0, 0.25)");
  ChartPartition part;
  part.margin = margin_fraction * (p.t_end - p.t_begin);
  if (!mani.s_shaped) {
    part.charts.push_back({ChartId::Full, p.t_begin, p.t_end});
    return part;
  }
  const double m = part.margin;
  part.charts.push_back({ChartId::K1, p.t_begin, mani.t_min - m});
  part.charts.push_back({ChartId::K2, mani.t_min + m, mani.t_max - m});
  part.charts.push_back({ChartId::K3, mani.t_max + m, p.t_end});
  for (const auto& c : part.charts) {
    if (!(c.lo < c.hi)) {
      std::ostringstream os;
      os << "chart " << chart_name(c.id) << " is empty at margin " << m;
      throw error(errc::chart_margin_too_large, os.str());
    }
  }
  return part;
}

}  // namespace spduff
