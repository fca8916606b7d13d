#include "opkernel/besov.hpp"

#include <algorithm>
#include <cmath>

#include "opkernel/dyadic.hpp"

namespace opkernel {

BesovParams BesovParams::checked(Real s, Real q, Real r) {
  exponent::require_valid(q, "besov main index q");
  exponent::require_valid(r, "besov fine index r");
  if (!std::isfinite(s)) throw Error("besov smoothness must be finite");
  if (q > r) throw Error("besov indices must satisfy q <= r");
  return {s, q, r};
}

DyadicPartition::DyadicPartition(TorusGrid grid, int k_max, std::vector<RVector> phi)
    : grid_(grid), k_max_(k_max), phi_(std::move(phi)) {
  if (static_cast<int>(phi_.size()) != k_max_ + 1) throw Error("partition block count mismatch");
}

Real DyadicPartition::max_deviation() const {
  RVector total = RVector::Zero(grid_.size());
  for (const RVector& p : phi_) total += p;
  return (total.array() - 1.0).abs().maxCoeff();
}

DyadicPartition build_partition(const TorusGrid& grid) {
  if (grid.nyquist() < 2.0) throw Error("grid too coarse: Nyquist frequency below 2");
  const RVector r = grid.frequency_norms();
  const int k_max = std::max(1, static_cast<int>(std::ceil(std::log2(r.maxCoeff()) - 1e-12)));
  std::vector<RVector> phi(k_max + 1, RVector(grid.size()));
  for (int k = 0; k <= k_max; ++k)
    for (Eigen::Index j = 0; j < grid.size(); ++j) phi[k](j) = dyadic::phi(k, r(j), k_max);
  return {grid, k_max, std::move(phi)};
}

std::vector<Samples> littlewood_paley_blocks(const DyadicPartition& partition, const Samples& f) {
  const TorusGrid& grid = partition.grid();
  const Samples ff = dft_forward(grid, f);
  std::vector<Samples> out;
  out.reserve(partition.blocks());
  for (int k = 0; k < partition.blocks(); ++k)
    out.push_back(dft_inverse(grid, ff * partition.phi(k).asDiagonal()));
  return out;
}

Real combine_blocks(const RVector& block_norms, Real s, Real r) {
  RVector weighted(block_norms.size());
  for (Eigen::Index k = 0; k < block_norms.size(); ++k)
    weighted(k) = std::pow(2.0, static_cast<Real>(k) * s) * block_norms(k);
  if (exponent::is_inf(r)) return weighted.maxCoeff();
  return lp_norm(RVector::Ones(weighted.size()), NormedSpace::euclidean(1),
                 weighted.cast<Complex>().transpose(), r);
}

namespace {

Real scalar_lp(const RVector& weights, const RVector& values, Real p) {
  return lp_norm(weights, NormedSpace::euclidean(1), values.cast<Complex>().transpose(), p);
}

}  // namespace

namespace detail {

Real besov_norm_unchecked(const Samples& f, const NormedSpace& target, const BesovParams& params,
                          const DyadicPartition& partition) {
  if (f.rows() != target.dim()) throw Error("function and target dimensions differ");
  const RVector w = partition.grid().measure().weights();
  const std::vector<Samples> blocks = littlewood_paley_blocks(partition, f);
  RVector norms(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) norms(k) = lp_norm(w, target, blocks[k], params.q);
  return combine_blocks(norms, params.s, params.r);
}

Real besov_norm_unchecked(const MatrixField& m, const NormedSpace& source,
                          const NormedSpace& target, const BesovParams& params,
                          const DyadicPartition& partition) {
  if (!(m.grid() == partition.grid())) throw Error("field and partition grids differ");
  if (m.rows() != target.dim() || m.cols() != source.dim())
    throw Error("field shape does not match the spaces");
  const RVector w = partition.grid().measure().weights();
  const std::vector<Samples> blocks = littlewood_paley_blocks(partition, m.data());
  RVector norms(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const MatrixField block(m.grid(), m.rows(), m.cols(), blocks[k]);
    norms(k) = scalar_lp(w, block.operator_norms(source, target), params.q);
  }
  return combine_blocks(norms, params.s, params.r);
}

}  // namespace detail

Real besov_norm(const Samples& f, const NormedSpace& target, const BesovParams& params,
                const DyadicPartition& partition) {
  const BesovParams p = BesovParams::checked(params.s, params.q, params.r);
  return detail::besov_norm_unchecked(f, target, p, partition);
}

Real besov_norm(const MatrixField& m, const NormedSpace& source, const NormedSpace& target,
                const BesovParams& params, const DyadicPartition& partition) {
  const BesovParams p = BesovParams::checked(params.s, params.q, params.r);
  return detail::besov_norm_unchecked(m, source, target, p, partition);
}

std::vector<Real> dyadic_dilations(int j) {
  std::vector<Real> out;
  for (int i = -j; i <= j; ++i) out.push_back(std::ldexp(1.0, i));
  return out;
}

Real mu_smoothness(int dims, Real u, Real p, Real q) {
  return dims * (exponent::reciprocal(u) + exponent::reciprocal(p) - exponent::reciprocal(q));
}

namespace {

void require_fm_exponents(Real u, Real p, Real q) {
  if (!(u >= 1.0 && u <= 2.0)) throw Error("Fourier type u must lie in [1, 2]");
  exponent::require_valid(p, "p");
  exponent::require_valid(q, "q");
  const Real gap = exponent::reciprocal(q) - exponent::reciprocal(p);
  if (gap < -1e-12 || gap > exponent::reciprocal(u) + 1e-12)
    throw Error("outside admissible region: need 0 <= 1/q - 1/p <= 1/u");
}

}  // namespace

namespace {

Real sampled_lu(const Symbol& m, const TorusGrid& box, Real a, Real u, const NormedSpace& source,
                const NormedSpace& target) {
  const Symbol ma = m.dilated(a);
  const MatrixField field =
      MatrixField::sample(box, m.rows(), m.cols(), [&](const RVector& t) { return ma(t); }, false);
  return scalar_lp(box.measure().weights(), field.operator_norms(source, target), u);
}

}  // namespace

bool dilation_resolved(const Symbol& m, const TorusGrid& grid, Real a, Real u,
                       const NormedSpace& source, const NormedSpace& target, Real tolerance) {
  const TorusGrid ft = frequency_torus(grid);
  const Eigen::Index n = ft.points_per_axis();
  const Real base = sampled_lu(m, ft, a, u, source, target);
  const Real fine = sampled_lu(m, TorusGrid(ft.dims(), 2 * n, ft.period()), a, u, source, target);
  const Real wide = sampled_lu(m, TorusGrid(ft.dims(), 2 * n, 2.0 * ft.period()), a, u, source, target);
  const auto close = [&](Real x) {
    const Real scale = std::max(base, x);
    return scale == 0.0 || std::abs(x - base) <= tolerance * scale;
  };
  return base > 0.0 && close(fine) && close(wide);
}

Real mu_estimate(const Symbol& m, const TorusGrid& grid, Real u, Real p, Real q,
                 const NormedSpace& source, const NormedSpace& target,
                 const std::vector<Real>& dilations) {
  require_fm_exponents(u, p, q);
  if (dilations.empty()) throw Error("empty dilation grid");
  const TorusGrid ft = frequency_torus(grid);
  const DyadicPartition partition = build_partition(ft);
  const BesovParams params{mu_smoothness(grid.dims(), u, p, q), u, 1.0};
  Real best = kInf;
  for (Real a : dilations) {
    if (a != 1.0 && !dilation_resolved(m, grid, a, u, source, target)) continue;
    const Symbol ma = m.dilated(a);
    // symbol values are functions on the frequency torus, sampled at its points
    const MatrixField field = MatrixField::sample(ft, m.rows(), m.cols(),
                                                  [&](const RVector& t) { return ma(t); }, false);
    best = std::min(best, detail::besov_norm_unchecked(field, source, target, params, partition));
  }
  if (!std::isfinite(best)) throw Error("no resolved dilation in the dilation grid");
  return best;
}

Real fourier_type_constant(const NormedSpace& space, Real u, const TorusGrid& grid, int samples,
                           std::uint64_t seed) {
  if (!(u >= 1.0 && u <= 2.0)) throw Error("Fourier type u must lie in [1, 2]");
  if (samples < 1) throw Error("need at least one sample");
  const Real up = exponent::conjugate(u);
  const RVector wx = grid.measure().weights();
  const RVector wf = grid.frequency_measure().weights();
  Real best = 0.0;
  for (int i = 0; i < samples; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    Samples f;
    switch (i % 3) {
      case 0:  // fully random
        f = complex_gaussian(rng, space.dim(), grid.size());
        break;
      case 1:  // scalar profile times a fixed direction
        f = random_unit_vector(space, rng) * complex_gaussian(rng, 1, grid.size());
        break;
      default: {  // a point mass
        f = Samples::Zero(space.dim(), grid.size());
        std::uniform_int_distribution<Eigen::Index> pick(0, grid.size() - 1);
        f.col(pick(rng)) = random_unit_vector(space, rng);
      }
    }
    const Real nf = lp_norm(wx, space, f, u);
    if (nf == 0.0) continue;
    best = std::max(best, lp_norm(wf, space, dft_forward(grid, f), up) / nf);
  }
  return best;
}

namespace {

void require_corollary32(Real u, Real theta) {
  if (!(u >= 1.0 && u <= 2.0)) throw Error("Fourier type u must lie in [1, 2]");
  exponent::require_valid(theta, "theta");
  if (theta > exponent::conjugate(u)) throw Error("outside admissible region: need 1 <= theta <= u'");
}

Real corollary32_smoothness(int dims, Real u, Real theta) {
  return dims * (exponent::reciprocal(theta) - exponent::reciprocal(exponent::conjugate(u)));
}

std::optional<Real> ratio_with(const Samples& g, Real theta, const TorusGrid& grid,
                               const NormedSpace& space, const BesovParams& params,
                               const DyadicPartition& partition) {
  const Real ng = detail::besov_norm_unchecked(g, space, params, partition);
  if (ng == 0.0) return std::nullopt;
  return lp_norm(grid.measure().weights(), space, dft_inverse(grid, g), theta) / ng;
}

}  // namespace

std::optional<Real> corollary32_ratio(const Samples& g, Real u, Real theta, const TorusGrid& grid,
                                      const NormedSpace& space) {
  require_corollary32(u, theta);
  const TorusGrid ft = frequency_torus(grid);
  return ratio_with(g, theta, grid, space, {corollary32_smoothness(grid.dims(), u, theta), u, 1.0},
                    build_partition(ft));
}

Corollary32Report check_corollary32(Real u, Real theta, const TorusGrid& grid, int samples,
                                    std::uint64_t seed, const NormedSpace& space) {
  require_corollary32(u, theta);
  if (samples < 1) throw Error("need at least one sample");

  Corollary32Report rep;
  rep.u = u;
  rep.theta = theta;
  rep.smoothness = corollary32_smoothness(grid.dims(), u, theta);
  const TorusGrid ft = frequency_torus(grid);
  const DyadicPartition partition = build_partition(ft);
  const BesovParams params{rep.smoothness, u, 1.0};

  Real sum = 0.0;
  for (int i = 0; i < 2 * samples; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    // g band-limited on the frequency side: one random dyadic block of a
    // random spectrum
    std::uniform_int_distribution<int> pick(0, partition.k_max());
    const int k = pick(rng);
    const Samples spectrum = complex_gaussian(rng, space.dim(), ft.size()) * partition.phi(k).asDiagonal();
    const auto ratio = ratio_with(dft_inverse(ft, spectrum), theta, grid, space, params, partition);
    if (!ratio) {
      ++rep.skipped;
      continue;
    }
    rep.ratios.push_back(*ratio);
    sum += *ratio;
    if (i < samples) rep.max_ratio = std::max(rep.max_ratio, *ratio);
    rep.max_ratio_doubled = std::max(rep.max_ratio_doubled, *ratio);
  }
  if (!rep.ratios.empty()) rep.mean_ratio = sum / static_cast<Real>(rep.ratios.size());
  rep.finite = std::isfinite(rep.max_ratio_doubled);
  rep.stable = rep.finite && rep.max_ratio > 0.0 &&
               std::abs(rep.max_ratio_doubled / rep.max_ratio - 1.0) < 0.1;
  return rep;
}

}  // namespace opkernel
