#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opkernel/besov.hpp"
#include "opkernel/norm_estimate.hpp"
#include "opkernel/symbol.hpp"

namespace opkernel {

struct MultiplierReport {
  std::string condition;
  Real constant_a = 0.0;
  int derivative_order = 1;
  bool admissible = false;
  Real empirical_fm_ratio = 0.0;
  /// Largest weighted derivative norm per order |alpha| = 0..l.
  std::vector<Real> order_constants;
  /// lemma36: A on I_0 followed by A_k on I_1 for k = 1, 2, ...
  std::vector<Real> growth;
  /// Grid points skipped because a finite-difference stencil left the box.
  Eigen::Index skipped_points = 0;
};

/// l = ceil(n (1/u + 1/p - 1/q)) + 1.
int mikhlin_order(int dims, Real u, Real p, Real q);
/// Smallest integer l > n (1/u + 1/p - 1/q).
int lemma36_order(int dims, Real u, Real p, Real q);

/// A = max over |alpha| <= l and grid frequencies t of
/// (1 + |t|)^|alpha| ||D^alpha m(t)||_{B(X,Y)}.
MultiplierReport mikhlin_check(const Symbol& m, const TorusGrid& grid, Real u, Real p, Real q,
                               const NormedSpace& source, const NormedSpace& target);

/// A = max of ||D^alpha m||_{L_theta(I_0)} and ||D^alpha m_k||_{L_theta(I_1)}
/// with m_k = m(2^{k-1} .), I_0 = {|t| <= 2}, I_1 = {1 <= |t| <= 4}, k up to
/// the grid's dyadic range. L_theta norms use the midpoint rule on cells of
/// width (frequency spacing) / refinement; points mapped outside the
/// frequency box are dropped.
MultiplierReport lemma36_check(const Symbol& m, const TorusGrid& grid, Real u, Real p, Real q,
                               Real theta, const NormedSpace& source, const NormedSpace& target,
                               int refinement = 8);

/// Hilbert-space case n = 1, 1/q - 1/p = 1/2: A_1 = sup ||m||, A_2 =
/// sup (1 + |t|) ||m'||, reported as order_constants.
MultiplierReport remark38c_check(const Symbol& m, const TorusGrid& grid, Real p, Real q,
                                 const NormedSpace& source, const NormedSpace& target);

struct FmReport {
  Real lower = 0.0;  ///< certified: ratio attained by `witness`
  Samples witness;
  Real theory = 0.0;  ///< M_u(m) estimate, or A for the Besov version
  Real ratio = 0.0;   ///< lower / theory, 0 for 0/0
  std::vector<Real> block_constants;  ///< Besov version: M_u(phi_k m) per k
};

/// ||T_m||_{L_q -> L_p} lower bound over M_u(m).
FmReport verify_fm_lq_lp(const Symbol& m, const TorusGrid& grid, Real u, Real q, Real p,
                         const NormedSpace& source, const NormedSpace& target,
                         const SearchBudget& budget, std::uint64_t seed);

/// ||T_m f||_{B^s_{p,r}} / ||f||_{B^s_{q,r}}, 0 for f with zero norm.
Real besov_gain(const MultiplierOperator& op, const Samples& f, Real s, Real q, Real p, Real r,
                const DyadicPartition& partition);

/// ||T_m||_{B^s_{q,r} -> B^s_{p,r}} lower bound over A = max_k M_u(phi_k m).
/// Candidates: point masses, dyadic blocks of random vectors, random
/// band-limited functions and characters at dyadic frequencies.
FmReport verify_fm_besov(const Symbol& m, const TorusGrid& grid, Real u, Real q, Real p, Real s,
                         Real r, const NormedSpace& source, const NormedSpace& target,
                         const SearchBudget& budget, std::uint64_t seed);

}  // namespace opkernel
