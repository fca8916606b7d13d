// End-to-end acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "opkernel/besov.hpp"
#include "opkernel/dyadic.hpp"
#include "opkernel/multiplier.hpp"
#include "opkernel/random.hpp"
#include "opkernel/schur.hpp"
#include "opkernel/symbol.hpp"
#include "opkernel/torus.hpp"

using namespace opkernel;

namespace {

constexpr Real kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const Real secs = std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s (%s; %.2fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, Real a, Real b = 0.0, Real c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Real seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<Real>(std::chrono::steady_clock::now() - t).count();
}

Real rel_diff(const CMatrix& a, const CMatrix& b) {
  const Real scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

// Kernel population shared by the Schur criteria.
struct Population {
  std::vector<OperatorKernel> kernels;
};

Population make_population(int count, std::uint64_t seed) {
  Population pop;
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<int> points(1, 16), dims(1, 4), kind(0, 2);
  const auto space = [&](int k, int d) {
    return k == 0 ? NormedSpace::euclidean(d) : k == 1 ? NormedSpace::ell1(d) : NormedSpace::ellinf(d);
  };
  for (int i = 0; i < count; ++i) {
    const int ns = points(rng), nt = points(rng), dx = dims(rng), dy = dims(rng);
    const NormedSpace x = space(kind(rng), dx), y = space(kind(rng), dy);
    pop.kernels.push_back(random_gaussian_kernel(ns, nt, x, y, rng));
  }
  return pop;
}

// q values strictly inside [1, theta').
std::vector<Real> q_grid(Real theta) {
  if (theta == 1.0) return {1.0, 2.0, kInf};
  const Real tc = exponent::conjugate(theta);
  return {1.0, 0.5 * (1.0 + tc), 1.0 + 0.9 * (tc - 1.0)};
}

// Riemann-sum inverse transform, point by point.
Samples direct_inverse(const TorusGrid& g, const Samples& f) {
  Samples out = Samples::Zero(f.rows(), g.size());
  for (Eigen::Index m = 0; m < g.size(); ++m)
    for (Eigen::Index j = 0; j < g.size(); ++j)
      out.col(m) += f.col(j) * std::polar(1.0, g.frequency(j).dot(g.point(m)));
  return out * (std::pow(2.0 * kPi, -0.5 * g.dims()) * g.frequency_cell_volume());
}

Eigen::Index difference_index(const TorusGrid& g, Eigen::Index t, Eigen::Index s) {
  const RVector d = g.point(t) - g.point(s);
  std::array<Eigen::Index, TorusGrid::kMaxDims> idx{};
  for (int a = 0; a < g.dims(); ++a) {
    Real v = d(a);
    while (v < -0.5 * g.period() - 1e-9) v += g.period();
    while (v >= 0.5 * g.period() - 1e-9) v -= g.period();
    idx[a] = std::lround((v + 0.5 * g.period()) / g.spacing());
  }
  return g.flat_index(idx);
}

// sum_s h^n k(x_t - x_s) f(x_s) with k given as (rows*cols) x points.
Samples dense_convolution(const TorusGrid& g, const CMatrix& k, Eigen::Index rows, const Samples& f) {
  const Eigen::Index cols = f.rows();
  Samples out = Samples::Zero(rows, g.size());
  for (Eigen::Index t = 0; t < g.size(); ++t)
    for (Eigen::Index s = 0; s < g.size(); ++s) {
      const Eigen::Map<const CMatrix> kt(k.col(difference_index(g, t, s)).data(), rows, cols);
      out.col(t) += g.cell_volume() * (kt * f.col(s));
    }
  return out;
}

Real ref_b(Real s) {
  const auto rho = [](Real x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  return rho(s - 0.5) * rho(2.0 - s);
}

Real ref_psi(Real s) {
  Real den = 0.0;
  for (int j = -40; j <= 40; ++j) den += ref_b(std::ldexp(s, -j));
  return den == 0.0 ? 0.0 : ref_b(s) / den;
}

Real ref_phi(int k, Real r, int k_max) {
  if (k == 0) {
    Real tail = 0.0;
    for (int j = 1; j <= 60; ++j) tail += ref_psi(std::ldexp(r, -j));
    return 1.0 - tail;
  }
  if (k < k_max) return ref_psi(std::ldexp(r, -k));
  Real tail = 0.0;
  for (int j = k_max; j <= k_max + 60; ++j) tail += ref_psi(std::ldexp(r, -j));
  return tail;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const Population pop = make_population(200, 20240601);

  criterion(1, "young equality case on Z4", [] {
    const auto t0 = std::chrono::steady_clock::now();
    CVector g(4);
    g << 1.0, 1.0, 0.0, 0.0;
    const OperatorKernel k = OperatorKernel::circulant(g);
    const SchurReport r = verify_schur_bound(k, 2.0, 1.0, SearchBudget{}, 1);
    // exhaustive extreme points: ||K||_{1->2} = max over deltas of ||g(. - s)||_2
    Real oracle = 0.0;
    for (int s = 0; s < 4; ++s) {
      Real col = 0.0;
      for (int t = 0; t < 4; ++t) col += std::norm(g((t - s + 4) % 4));
      oracle = std::max(oracle, std::sqrt(col));
    }
    const Real secs = seconds_since(t0);
    const bool ok = std::abs(r.bound - std::sqrt(2.0)) <= 1e-9 && std::abs(r.lower.value - std::sqrt(2.0)) <= 1e-9 &&
                    std::abs(oracle - std::sqrt(2.0)) <= 1e-15 && std::abs(r.ratio - 1.0) <= 1e-9 && secs < 1.0;
    return Outcome{ok, fmt("bound %.15g, lower %.15g, ratio %.15g", r.bound, r.lower.value, r.ratio)};
  });

  int theta1_violations = 0;
  criterion(2, "Schur bound property suite", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const SearchBudget budget{4, 40, 8, 1e-12};
    int runs = 0, violations = 0;
    Real worst = 0.0;
    for (std::size_t i = 0; i < pop.kernels.size(); ++i)
      for (Real theta : {1.0, 1.5, 2.0, 3.0})
        for (Real q : q_grid(theta)) {
          const SchurReport r = verify_schur_bound(pop.kernels[i], theta, q, budget, 1000 + i, 1e-9);
          ++runs;
          worst = std::max(worst, r.ratio);
          if (r.ratio > 1.0 + 1e-9) {
            ++violations;
            if (theta == 1.0) ++theta1_violations;
          }
        }
    const Real secs = seconds_since(t0);
    return Outcome{violations == 0 && secs < 30.0,
                   fmt("%g runs, %g violations, max ratio %.6f", runs, violations, worst)};
  });

  criterion(3, "endpoint theorems (q = 1 and q = theta', p = inf)", [&] {
    const SearchBudget budget{4, 40, 8, 1e-12};
    int violations = 0;
    Real worst = 0.0;
    for (std::size_t i = 0; i < pop.kernels.size(); ++i)
      for (Real theta : {1.0, 1.5, 2.0, 3.0}) {
        const OperatorKernel& k = pop.kernels[i];
        const SchurConstants c = schur_constants(k, theta, budget, 2000 + i);
        // q = 1: ||K||_{1 -> theta} <= C1
        const Real low1 = exact_norm_q1(k, theta, budget, 3000 + i).value;
        const Real r1 = slack_ratio(low1, c.c1.upper);
        // q = theta', p = inf: ||K||_{theta' -> inf} <= tau C2
        const Real low2 = norm_lower_bound(k, exponent::conjugate(theta), kInf, budget, 4000 + i).value;
        const Real r2 = slack_ratio(low2, c.tau * c.c2.upper);
        worst = std::max({worst, r1, r2});
        violations += (r1 > 1.0 + 1e-9) + (r2 > 1.0 + 1e-9);
      }
    return Outcome{violations == 0, fmt("%g violations, max ratio %.6f", violations, worst)};
  });

  criterion(4, "theta = 1 reduction", [&] {
    const SearchBudget budget{2, 10, 4, 1e-12};
    Real worst = 0.0;
    for (std::size_t i = 0; i < pop.kernels.size(); ++i) {
      const SchurConstants c = schur_constants(pop.kernels[i], 1.0, budget, 5000 + i);
      for (Real q : {1.0, 1.5, 2.0, 4.0, kInf}) {
        const ExponentTriple e = make_exponents(q, 1.0);
        if (e.p != q) return Outcome{false, "p differs from q at theta = 1"};
        const Real ip = exponent::reciprocal(q);
        const Real classical = std::pow(c.c1.upper, ip) * std::pow(c.tau * c.c2.upper, 1.0 - ip);
        const Real b = theorem27_bound(c, e);
        worst = std::max(worst, std::abs(b - classical) / std::max(classical, 1e-300));
      }
    }
    return Outcome{worst <= 1e-12 && theta1_violations == 0,
                   fmt("max relative gap %.3g, theta = 1 sub-grid violations %g", worst, theta1_violations)};
  });

  criterion(5, "SVD cross-check at q = p = 2", [] {
    Rng rng = make_rng(77);
    std::uniform_int_distribution<int> points(1, 12), dims(1, 4);
    const SearchBudget budget{20, 2000, 200, 1e-15};
    Real worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const int dx = dims(rng), dy = dims(rng);
      const OperatorKernel k = random_gaussian_kernel(points(rng), points(rng), NormedSpace::euclidean(dx),
                                                      NormedSpace::euclidean(dy), rng);
      CMatrix m(k.codomain_space().size() * dy, k.domain_space().size() * dx);
      for (Eigen::Index t = 0; t < k.codomain_space().size(); ++t)
        for (Eigen::Index s = 0; s < k.domain_space().size(); ++s)
          m.block(t * dy, s * dx, dy, dx) =
              std::sqrt(k.codomain_space().weight(t) * k.domain_space().weight(s)) * k.entry(t, s);
      const Real sigma = Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
      const Real lower = norm_lower_bound(k, 2.0, 2.0, budget, 600 + i).value;
      worst = std::max(worst, std::abs(lower - sigma) / sigma);
    }
    return Outcome{worst <= 1e-8, fmt("max relative gap %.3g over 50 kernels", worst)};
  });

  criterion(6, "spectral correctness", [] {
    Rng rng = make_rng(66);
    Real round = 0.0, parseval = 0.0, conv = 0.0, conv_form = 0.0;
    for (auto [n, N] : {std::pair{1, 8}, {1, 32}, {2, 8}, {2, 16}, {2, 32}}) {
      const TorusGrid g(n, N, 2.9);
      const Samples f = complex_gaussian(rng, 2, g.size());
      const Samples ff = dft_forward(g, f);
      round = std::max(round, rel_diff(dft_inverse(g, ff), f));
      const Real nf = std::sqrt((f.colwise().squaredNorm().array() * g.cell_volume()).sum());
      const Real nff = std::sqrt((ff.colwise().squaredNorm().array() * g.frequency_cell_volume()).sum());
      parseval = std::max(parseval, std::abs(nff / nf - 1.0));
      if (g.size() > 256) continue;  // dense oracles are quadratic
      const CMatrix kdata = complex_gaussian(rng, 4, g.size());
      conv = std::max(conv, rel_diff(convolve(MatrixField(g, 2, 2, kdata), f), dense_convolution(g, kdata, 2, f)));
      // T_m f against the kernel (2 pi)^(-n/2) F^{-1} m, computed by direct sums
      const CMatrix mdata = complex_gaussian(rng, 6, g.size());
      const CMatrix kernel = direct_inverse(g, mdata) * std::pow(2.0 * kPi, -0.5 * n);
      conv_form = std::max(conv_form, rel_diff(apply_multiplier(MatrixField(g, 3, 2, mdata), f), dense_convolution(g, kernel, 3, f)));
    }
    const bool ok = round <= 1e-12 && parseval <= 1e-12 && conv <= 1e-10 && conv_form <= 1e-10;
    return Outcome{ok, fmt("round trip %.2g, Parseval %.2g, convolution %.2g", round, parseval, conv) +
                           fmt(", multiplier %.2g", conv_form)};
  });

  criterion(7, "partition of unity", [] {
    Real worst = 0.0;
    int outside = 0;
    for (int n : {1, 2})
      for (int N : {16, 32, 64, 128}) {
        const TorusGrid g(n, N);
        const DyadicPartition p = build_partition(g);
        const RVector r = g.frequency_norms();
        for (Eigen::Index j = 0; j < g.size(); ++j) {
          Real sum = 0.0;
          for (int k = 0; k <= p.k_max(); ++k) {
            sum += p.phi(k)(j);
            const Real lo = k == 0 ? 0.0 : std::ldexp(1.0, k - 1);
            const Real hi = k == 0 ? 2.0 : k == p.k_max() ? kInf : std::ldexp(1.0, k + 1);
            if (p.phi(k)(j) != 0.0 && (r(j) < lo || r(j) > hi)) ++outside;
          }
          worst = std::max(worst, std::abs(sum - 1.0));
        }
      }
    return Outcome{worst <= 1e-12 && outside == 0, fmt("max deviation %.3g, support breaches %g", worst, outside)};
  });

  criterion(8, "Besov norm properties", [] {
    Rng rng = make_rng(88);
    const TorusGrid g(1, 32);
    const DyadicPartition p = build_partition(g);
    const NormedSpace x = NormedSpace::euclidean(2);
    bool mono = true;
    Real homog = 0.0, chi_gap = 0.0, const_gap = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const Samples f = complex_gaussian(rng, 2, g.size());
      const Real lambda = 0.1 + 3.0 * trial;
      for (Real s : {-0.5, 0.0, 1.0})
        for (Real q : {1.0, 2.0}) {
          Real previous = kInf;
          for (Real r : {2.0, 3.0, 8.0, kInf}) {
            const Real v = besov_norm(f, x, BesovParams::checked(s, q, r), p);
            mono = mono && v <= previous * (1.0 + 1e-14);
            previous = v;
            const Real w = besov_norm(Samples(lambda * f), x, BesovParams::checked(s, q, r), p);
            homog = std::max(homog, std::abs(w - lambda * v) / (lambda * v));
          }
        }
    }
    CVector c(2);
    c << 3.0, Complex(0.0, 4.0);
    for (Real q : {1.0, 2.0})
      for (Real r : {2.0, kInf})
        for (Real s : {-1.0, 0.0, 0.5}) {
          // constants live in block 0 only
          const Real v0 = besov_norm(Samples(c.replicate(1, g.size())), x, BesovParams::checked(s, q, r), p);
          const Real e0 = 5.0 * std::pow(g.period(), 1.0 / q);
          const_gap = std::max(const_gap, std::abs(v0 - e0) / e0);
          // a character at xi = 3 meets blocks 1 and 2
          const Real xi = 3.0;
          Samples chi(2, g.size());
          for (Eigen::Index j = 0; j < g.size(); ++j) chi.col(j) = c * std::polar(1.0, xi * g.point(j)(0));
          const Real a1 = std::pow(2.0, s) * ref_phi(1, xi, p.k_max());
          const Real a2 = std::pow(2.0, 2.0 * s) * ref_phi(2, xi, p.k_max());
          const Real lr = std::isinf(r) ? std::max(a1, a2) : std::pow(std::pow(a1, r) + std::pow(a2, r), 1.0 / r);
          const Real e1 = lr * 5.0 * std::pow(g.period(), 1.0 / q);
          chi_gap = std::max(chi_gap, std::abs(besov_norm(chi, x, BesovParams::checked(s, q, r), p) - e1) / e1);
        }
    const bool ok = mono && homog <= 1e-12 && chi_gap <= 1e-10 && const_gap <= 1e-10;
    return Outcome{ok, std::string(mono ? "monotone" : "NOT monotone") +
                           fmt(", homogeneity %.2g, character %.2g, constant %.2g", homog, chi_gap, const_gap)};
  });

  criterion(9, "Mikhlin pipeline for (1 + t^2)^(-1/2)", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const NormedSpace e1 = NormedSpace::euclidean(1);
    const Symbol m = symbols::scalar_decay(1);
    const MultiplierReport rc = remark38c_check(m, TorusGrid(1, 64), 2.0, 1.0, e1, e1);
    std::vector<Real> ratios;
    for (int N : {32, 64, 128})
      ratios.push_back(verify_fm_besov(m, TorusGrid(1, N), 2.0, 1.0, 2.0, 0.0, kInf, e1, e1,
                                       SearchBudget{10, 50, 200, 1e-15}, 4)
                           .ratio);
    const Real lo = *std::min_element(ratios.begin(), ratios.end());
    const Real hi = *std::max_element(ratios.begin(), ratios.end());
    const bool finite = std::isfinite(lo) && std::isfinite(hi) && lo > 0.0;
    const bool ok = rc.admissible && finite && hi / lo - 1.0 < 0.1 && seconds_since(t0) < 30.0;
    return Outcome{ok, std::string(rc.admissible ? "admissible" : "NOT admissible") +
                           fmt(", ratios %.4f / %.4f / %.4f", ratios[0], ratios[1], ratios[2])};
  });

  criterion(10, "band-limited ratio stability", [] {
    std::string detail;
    bool ok = true;
    for (auto [u, theta] : {std::pair{2.0, 2.0}, {2.0, 1.0}, {1.0, 1.0}}) {
      const Corollary32Report r = check_corollary32(u, theta, TorusGrid(1, 32), 100, 7);
      const Real change = std::abs(r.max_ratio_doubled / r.max_ratio - 1.0);
      ok = ok && r.finite && change < 0.1;
      detail += fmt("(%g, %g): %.3g ", u, theta, change);
    }
    return Outcome{ok, "relative change " + detail};
  });

  criterion(11, "determinism of run on the reference config", [] {
    const std::string base = std::string(OPKERNEL_BINARY_DIR) + "/acceptance_run";
    const std::string cmd = std::string(OPKERNEL_CLI) + " run " + OPKERNEL_REFERENCE_CONFIG + " --parallel 3 --out ";
    const int a = std::system((cmd + base + "1.jsonl").c_str());
    const int b = std::system((cmd + base + "2.jsonl").c_str());
    const std::string x = slurp(base + "1.jsonl"), y = slurp(base + "2.jsonl");
    const bool ok = a == 0 && b == 0 && !x.empty() && x == y;
    return Outcome{ok, fmt("exit codes %g/%g, %g bytes", a, b, static_cast<Real>(x.size())) +
                           (x == y ? ", identical" : ", DIFFERENT")};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
