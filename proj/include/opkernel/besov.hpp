#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "opkernel/symbol.hpp"
#include "opkernel/torus.hpp"

namespace opkernel {

/// Smoothness s, main index q, fine index r.
struct BesovParams {
  Real s = 0.0;
  Real q = 2.0;
  Real r = 2.0;

  /// Requires 1 <= q <= r <= inf.
  static BesovParams checked(Real s, Real q, Real r);
};

/// The blocks phi_0 .. phi_kmax sampled on the frequencies of a grid.
class DyadicPartition {
 public:
  DyadicPartition(TorusGrid grid, int k_max, std::vector<RVector> phi);

  const TorusGrid& grid() const { return grid_; }
  int k_max() const { return k_max_; }
  int blocks() const { return k_max_ + 1; }
  const RVector& phi(int k) const { return phi_.at(k); }

  /// max over frequencies of |sum_k phi_k - 1|.
  Real max_deviation() const;

 private:
  TorusGrid grid_;
  int k_max_;
  std::vector<RVector> phi_;
};

/// k_max = max(1, ceil(log2 max|xi|)); blocks below k_max are psi(2^-k |xi|)
/// and the top block absorbs the tail. Throws Error("grid too coarse") when
/// the Nyquist frequency is below 2.
DyadicPartition build_partition(const TorusGrid& grid);

/// F^{-1}[phi_k F f] for every k.
std::vector<Samples> littlewood_paley_blocks(const DyadicPartition& partition, const Samples& f);

/// Combines per-block L_q norms: ||(2^{ks} n_k)||_{l_r}.
Real combine_blocks(const RVector& block_norms, Real s, Real r);

/// ||f||_{B^s_{q,r}} for f : grid -> X. Rejects params outside q <= r.
Real besov_norm(const Samples& f, const NormedSpace& target, const BesovParams& params,
                const DyadicPartition& partition);

/// Operator-valued version: entries are blocked individually and the blocks
/// are measured by their pointwise operator norm X -> Y.
Real besov_norm(const MatrixField& m, const NormedSpace& source, const NormedSpace& target,
                const BesovParams& params, const DyadicPartition& partition);

namespace detail {
// Same formulas without the q <= r restriction.
Real besov_norm_unchecked(const Samples& f, const NormedSpace& target, const BesovParams& params,
                          const DyadicPartition& partition);
Real besov_norm_unchecked(const MatrixField& m, const NormedSpace& source,
                          const NormedSpace& target, const BesovParams& params,
                          const DyadicPartition& partition);
}  // namespace detail

/// {2^-j, ..., 2^j}.
std::vector<Real> dyadic_dilations(int j = 4);

/// Smoothness n (1/u + 1/p - 1/q) used by M_u.
Real mu_smoothness(int dims, Real u, Real p, Real q);

/// Whether m(a.) is represented by its samples on frequency_torus(grid):
/// the L_u norm of the pointwise operator norms changes by at most `tolerance`
/// (relative) when the spacing is halved and when the box is doubled.
bool dilation_resolved(const Symbol& m, const TorusGrid& grid, Real a, Real u,
                       const NormedSpace& source, const NormedSpace& target,
                       Real tolerance = 0.05);

/// min over the dilations of ||m(a.)||_{B^{n(1/u + 1/p - 1/q)}_{u,1}}, with
/// m(a.) sampled on frequency_torus(grid). a = 1 is the native sampling and
/// always counts; other dilations count only when dilation_resolved. The
/// result is an upper bound on the infimum over the listed dilations.
/// Throws when no listed dilation is usable.
Real mu_estimate(const Symbol& m, const TorusGrid& grid, Real u, Real p, Real q,
                 const NormedSpace& source, const NormedSpace& target,
                 const std::vector<Real>& dilations = dyadic_dilations());

/// max over random f of ||F f||_{L_u'} / ||f||_{L_u}: a lower estimate of
/// the Fourier-type constant of `space` on the grid.
Real fourier_type_constant(const NormedSpace& space, Real u, const TorusGrid& grid, int samples,
                           std::uint64_t seed);

struct Corollary32Report {
  Real u = 2.0;
  Real theta = 2.0;
  Real smoothness = 0.0;
  std::vector<Real> ratios;  ///< all 2 * samples ratios, in draw order
  Real max_ratio = 0.0;      ///< over the first `samples` draws
  Real max_ratio_doubled = 0.0;
  Real mean_ratio = 0.0;
  int skipped = 0;
  bool finite = false;
  bool stable = false;  ///< doubling the sample count moves the max by < 10%
};

/// ||F^{-1} g||_{L_theta(grid)} / ||g||_{B^{n(1/theta - 1/u')}_{u,1}} for g
/// sampled on the frequencies of `grid`; nullopt when g has zero norm.
std::optional<Real> corollary32_ratio(const Samples& g, Real u, Real theta, const TorusGrid& grid,
                                      const NormedSpace& space);

/// Ratios ||F^{-1} g||_{L_theta} / ||g||_{B^{n(1/theta - 1/u')}_{u,1}} for
/// random band-limited g on the frequency side. Requires 1 <= theta <= u'.
Corollary32Report check_corollary32(Real u, Real theta, const TorusGrid& grid, int samples,
                                    std::uint64_t seed,
                                    const NormedSpace& space = NormedSpace::euclidean(1));

}  // namespace opkernel
