#include <doctest.h>

#include <cmath>

#include "opkernel/schur.hpp"

using namespace opkernel;

namespace {

CVector z4_taps() {
  CVector g(4);
  g << 1.0, 1.0, 0.0, 0.0;
  return g;
}

// Dense L2 -> L2 matrix of a kernel, assembled entry by entry.
CMatrix dense_l2_matrix(const OperatorKernel& k) {
  const Eigen::Index dy = k.target().dim(), dx = k.source().dim();
  const Eigen::Index nt = k.codomain_space().size(), ns = k.domain_space().size();
  CMatrix m(nt * dy, ns * dx);
  for (Eigen::Index t = 0; t < nt; ++t)
    for (Eigen::Index s = 0; s < ns; ++s)
      for (Eigen::Index i = 0; i < dy; ++i)
        for (Eigen::Index j = 0; j < dx; ++j)
          m(t * dy + i, s * dx + j) = std::sqrt(k.codomain_space().weight(t)) *
                                      k.entry(t, s)(i, j) *
                                      std::sqrt(k.domain_space().weight(s));
  return m;
}

OperatorKernel scalar_times_identity(const Eigen::MatrixXd& a, const RVector& ws,
                                     const RVector& wt, Eigen::Index d) {
  return OperatorKernel::from_function(
      DiscreteMeasureSpace(ws), DiscreteMeasureSpace(wt), NormedSpace::euclidean(d),
      NormedSpace::euclidean(d),
      [&](Eigen::Index t, Eigen::Index s) { return CMatrix(a(t, s) * CMatrix::Identity(d, d)); });
}

const SearchBudget kBudget{20, 50, 200, 1e-15};

}  // namespace

TEST_CASE("apply_operator examples") {
  const OperatorKernel zero = OperatorKernel::zero(
      DiscreteMeasureSpace::counting(3), DiscreteMeasureSpace::counting(2),
      NormedSpace::euclidean(2), NormedSpace::ell1(1));
  Rng rng = make_rng(1);
  const BochnerFunction f(zero.domain(), complex_gaussian(rng, 2, 3));
  CHECK(apply_operator(zero, f).values().cwiseAbs().maxCoeff() == 0.0);

  const OperatorKernel conv = OperatorKernel::circulant(z4_taps());
  Samples delta = Samples::Zero(1, 4);
  delta(0, 0) = 1.0;
  const BochnerFunction kf = apply_operator(conv, BochnerFunction(conv.domain(), delta));
  CHECK(kf.values().row(0).transpose() == z4_taps());

  Eigen::MatrixXd a(3, 2);
  a << 1.0, 2.0, -0.5, 0.25, 3.0, 0.0;
  RVector ws(2), wt(3);
  ws << 0.5, 1.5;
  wt << 1.0, 2.0, 0.3;
  const OperatorKernel diag = scalar_times_identity(a, ws, wt, 2);
  Samples e1 = Samples::Zero(2, 2);
  e1.row(0).setOnes();
  const Samples out = apply_operator(diag, BochnerFunction(diag.domain(), e1)).values();
  for (Eigen::Index t = 0; t < 3; ++t) {
    CHECK(std::abs(out(0, t) - (ws(0) * a(t, 0) + ws(1) * a(t, 1))) < 1e-14);
    CHECK(out(1, t) == 0.0);
  }

  const BochnerFunction wrong(BochnerSpace{DiscreteMeasureSpace::counting(5), NormedSpace::euclidean(1)},
                              Samples::Zero(1, 5));
  CHECK_THROWS_AS(apply_operator(conv, wrong), Error);
}

TEST_CASE("adjoint_kernel") {
  const OperatorKernel conv = OperatorKernel::circulant(z4_taps());
  CVector sym(4);
  sym << 2.0, 1.0, 0.0, 1.0;
  const OperatorKernel herm = OperatorKernel::circulant(sym);
  CHECK(adjoint_kernel(herm).blocks() == herm.blocks());

  CMatrix nil(2, 2);
  nil << 0, 1, 0, 0;
  const auto sp = DiscreteMeasureSpace::counting(3);
  const OperatorKernel nk = OperatorKernel::from_function(
      sp, sp, NormedSpace::euclidean(2), NormedSpace::euclidean(2),
      [&](Eigen::Index, Eigen::Index) { return nil; });
  const OperatorKernel nka = adjoint_kernel(nk);
  for (Eigen::Index t = 0; t < 3; ++t)
    for (Eigen::Index s = 0; s < 3; ++s) CHECK(nka.entry(s, t) == nil.transpose());

  Rng rng = make_rng(2);
  const OperatorKernel k = random_gaussian_kernel(5, 4, NormedSpace::weighted(1.5, RVector::Constant(3, 2.0)),
                                                  NormedSpace::ellinf(2), rng);
  const OperatorKernel kaa = adjoint_kernel(adjoint_kernel(k));
  CHECK(kaa.blocks() == k.blocks());
  CHECK(kaa.source() == k.source());
  CHECK(kaa.target() == k.target());

  const OperatorKernel ka = adjoint_kernel(k);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index t = i % 4, s = i % 5;
    const CVector x = complex_gaussian(rng, 3, 1);
    const CVector y = complex_gaussian(rng, 2, 1);
    const Complex lhs = CVector(ka.entry(s, t) * y).dot(x);
    const Complex rhs = y.dot(CVector(k.entry(t, s) * x));
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
  }
  // operator-level adjoint identity under the weighted pairings
  const Samples f = complex_gaussian(rng, 3, 5);
  const Samples h = complex_gaussian(rng, 2, 4);
  const Complex lhs = pairing(k.codomain_space().weights(), h, k.apply(f));
  const Complex rhs = pairing(k.domain_space().weights(), k.apply_adjoint(h), f);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
}

TEST_CASE("schur constants on the Z4 convolution") {
  const OperatorKernel conv = OperatorKernel::circulant(z4_taps());
  const ConstantEstimate c1 = schur_c1(conv, 2.0, kBudget, 1);
  const ConstantEstimate c2 = schur_c2(conv, 2.0, kBudget, 1);
  CHECK(c1.exact);
  CHECK(c2.exact);
  CHECK(c1.lower == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(c1.upper == c1.lower);
  CHECK(c2.lower == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const OperatorKernel zero = OperatorKernel::zero(
      DiscreteMeasureSpace::counting(3), DiscreteMeasureSpace::counting(3),
      NormedSpace::euclidean(2), NormedSpace::euclidean(2));
  const ConstantEstimate z1 = schur_c1(zero, 1.5, kBudget, 1);
  const ConstantEstimate z2 = schur_c2(zero, 1.5, kBudget, 1);
  CHECK(z1.lower == 0.0);
  CHECK(z1.upper == 0.0);
  CHECK(z2.lower == 0.0);
  CHECK(z2.upper == 0.0);
}

TEST_CASE("C1 of a scalar-times-identity kernel reduces to scalar column norms") {
  Rng rng = make_rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(5, 4);
    const RVector ws = RVector::Random(4).cwiseAbs().array() + 0.2;
    const RVector wt = RVector::Random(5).cwiseAbs().array() + 0.2;
    const OperatorKernel k = scalar_times_identity(a, ws, wt, 2);
    for (Real theta : {1.0, 1.5, 2.0, 3.0}) {
      Real oracle = 0.0;
      for (Eigen::Index s = 0; s < 4; ++s) {
        Real acc = 0.0;
        for (Eigen::Index t = 0; t < 5; ++t) acc += wt(t) * std::pow(std::abs(a(t, s)), theta);
        oracle = std::max(oracle, std::pow(acc, 1.0 / theta));
      }
      const ConstantEstimate c1 = schur_c1(k, theta, kBudget, 9);
      CHECK(c1.lower == doctest::Approx(oracle).epsilon(1e-9));
      CHECK(c1.upper == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("C2 of a hermitian kernel equals its C1") {
  Rng rng = make_rng(6);
  const auto sp = DiscreteMeasureSpace::counting(6);
  const CMatrix raw = complex_gaussian(rng, 12, 12);
  const CMatrix herm = raw + raw.adjoint();
  const OperatorKernel k(sp, sp, NormedSpace::euclidean(2), NormedSpace::euclidean(2), herm);
  for (Real theta : {1.0, 2.0, 3.0}) {
    const ConstantEstimate c1 = schur_c1(k, theta, kBudget, 3);
    const ConstantEstimate c2 = schur_c2(k, theta, kBudget, 3);
    CHECK(c2.lower == doctest::Approx(c1.lower).epsilon(1e-9));
    CHECK(c2.upper == doctest::Approx(c1.upper).epsilon(1e-12));
  }
}

TEST_CASE("lower constant estimates never exceed upper ones") {
  Rng rng = make_rng(8);
  const std::vector<NormedSpace> kinds{NormedSpace::euclidean(3), NormedSpace::ell1(3),
                                       NormedSpace::ellinf(3)};
  for (const auto& x : kinds)
    for (const auto& y : kinds) {
      const OperatorKernel k = random_gaussian_kernel(4, 5, x, y, rng);
      for (Real theta : {1.0, 2.0}) {
        const SchurConstants c = schur_constants(k, theta, kBudget, 5);
        CHECK(c.c1.lower <= c.c1.upper * (1.0 + 1e-12));
        CHECK(c.c2.lower <= c.c2.upper * (1.0 + 1e-12));
      }
    }
}

TEST_CASE("theorem27_bound") {
  const Real r2 = std::sqrt(2.0);
  CHECK(theorem27_bound(r2, r2, 1.0, make_exponents(1.0, 2.0)) == doctest::Approx(r2).epsilon(1e-15));
  const ExponentTriple e = make_exponents(3.0, 1.0);
  CHECK(theorem27_bound(2.0, 5.0, 1.0, e) ==
        doctest::Approx(std::pow(2.0, 1.0 / 3.0) * std::pow(5.0, 2.0 / 3.0)).epsilon(1e-14));
  for (Real theta : {1.0, 1.5, 2.0, 4.0})
    for (Real q : {1.0, 1.1, 1.3}) {
      if (theta > 1.0 && q >= exponent::conjugate(theta)) continue;
      CHECK(theorem27_bound(0.7, 0.7, 1.0, make_exponents(q, theta)) ==
            doctest::Approx(0.7).epsilon(1e-14));
    }
  // theta / p = 1 at q = 1 and tau scales the C2 factor only
  CHECK(theorem27_bound(3.0, 9.0, 2.0, make_exponents(1.0, 2.0)) == doctest::Approx(3.0));
  CHECK(theorem27_bound(3.0, 9.0, 2.0, make_exponents(kInf, 1.0)) == doctest::Approx(18.0));
}

TEST_CASE("norm_lower_bound examples") {
  const OperatorKernel zero = OperatorKernel::zero(
      DiscreteMeasureSpace::counting(3), DiscreteMeasureSpace::counting(2),
      NormedSpace::euclidean(2), NormedSpace::euclidean(2));
  for (auto [q, p] : {std::pair{1.0, 2.0}, {2.0, 2.0}, {1.5, kInf}})
    CHECK(norm_lower_bound(zero, q, p, kBudget, 1).value == 0.0);

  // exhaustive extreme-point oracle for q = 1
  const CVector g = z4_taps();
  Real oracle = 0.0;
  for (int s = 0; s < 4; ++s) {
    Real acc = 0.0;
    for (int t = 0; t < 4; ++t) acc += std::norm(g(((t - s) % 4 + 4) % 4));
    oracle = std::max(oracle, std::sqrt(acc));
  }
  const OperatorKernel conv = OperatorKernel::circulant(g);
  const NormEstimate est = norm_lower_bound(conv, 1.0, 2.0, kBudget, 1);
  CHECK(est.value == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(std::abs(est.value - std::sqrt(2.0)) < 1e-9);
  CHECK(est.exact);
}

TEST_CASE("L2 -> L2 estimate matches the dense SVD") {
  Rng rng = make_rng(10);
  const SearchBudget deep{20, 2000, 200, 1e-15};
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = 1 + trial % 3;
    const OperatorKernel k = random_gaussian_kernel(3 + trial % 5, 2 + trial % 6,
                                                    NormedSpace::euclidean(d),
                                                    NormedSpace::euclidean(d), rng);
    Eigen::JacobiSVD<CMatrix> svd(dense_l2_matrix(k));
    const Real sigma = svd.singularValues()(0);
    const NormEstimate est = norm_lower_bound(k, 2.0, 2.0, deep, 17);
    CHECK(est.value == doctest::Approx(sigma).epsilon(1e-8));
    CHECK(est.value <= sigma * (1.0 + 1e-12));
  }
}

TEST_CASE("estimates are certified and monotone in the budget") {
  Rng rng = make_rng(12);
  const OperatorKernel k = random_gaussian_kernel(6, 5, NormedSpace::ell1(2), NormedSpace::euclidean(3), rng);
  Real previous = 0.0;
  for (int restarts : {1, 2, 5, 10}) {
    const NormEstimate e = norm_lower_bound(k, 1.5, 3.0, {restarts, 30, 50, 0.0}, 4);
    CHECK(e.value >= previous);
    previous = e.value;
    // the witness reproduces the value
    const Real ratio = lp_norm(k.codomain_space().weights(), k.target(), k.apply(e.witness), 3.0) /
                       lp_norm(k.domain_space().weights(), k.source(), e.witness, 1.5);
    CHECK(ratio == doctest::Approx(e.value).epsilon(1e-12));
  }
  previous = 0.0;
  for (int iterations : {1, 3, 10, 40}) {
    const NormEstimate e = norm_lower_bound(k, 1.5, 3.0, {4, iterations, 50, 0.0}, 4);
    CHECK(e.value >= previous);
    previous = e.value;
  }
}

TEST_CASE("adjoint duality of estimated norms on euclidean spaces") {
  Rng rng = make_rng(14);
  const SearchBudget deep{40, 500, 200, 1e-15};
  for (int trial = 0; trial < 6; ++trial) {
    const OperatorKernel k = random_gaussian_kernel(4, 3, NormedSpace::euclidean(2),
                                                    NormedSpace::euclidean(2), rng);
    for (auto [q, p] : {std::pair{1.0, 2.0}, {1.5, 3.0}, {2.0, 2.0}, {1.25, kInf}, {1.0, kInf}}) {
      const Real direct = norm_lower_bound(k, q, p, deep, 3).value;
      const Real dual = norm_lower_bound(adjoint_kernel(k), exponent::conjugate(p),
                                         exponent::conjugate(q), deep, 3).value;
      CHECK(direct == doctest::Approx(dual).epsilon(1e-6));
    }
  }
}

TEST_CASE("exact_norm_q1") {
  const OperatorKernel conv = OperatorKernel::circulant(z4_taps());
  CHECK(exact_norm_q1(conv, 2.0, kBudget, 1).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  CVector delta = CVector::Zero(5);
  delta(0) = 1.0;
  const OperatorKernel id = OperatorKernel::circulant(delta);
  for (Real p : {1.0, 1.5, 2.0, 7.0, kInf}) CHECK(exact_norm_q1(id, p, kBudget, 1).value == doctest::Approx(1.0));

  CHECK(exact_norm_q1(OperatorKernel::circulant(CVector::Zero(3)), 2.0, kBudget, 1).value == 0.0);
}

TEST_CASE("verify_schur_bound examples") {
  const SchurReport z4 = verify_schur_bound(OperatorKernel::circulant(z4_taps()), 2.0, 1.0, kBudget, 1);
  CHECK(z4.exponents.p == doctest::Approx(2.0));
  CHECK(z4.bound == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(z4.ratio - 1.0) < 1e-9);
  CHECK_FALSE(z4.violation);
  CHECK(z4.certified);

  const SchurReport zero = verify_schur_bound(OperatorKernel::circulant(CVector::Zero(4)), 2.0, 1.0, kBudget, 1);
  CHECK(zero.ratio == 0.0);
  CHECK_FALSE(zero.violation);

  Rng rng = make_rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const OperatorKernel k = random_gaussian_kernel(6, 6, NormedSpace::euclidean(1),
                                                    NormedSpace::euclidean(1), rng);
    for (Real q : {1.0, 1.5, 2.0, 4.0}) {
      const SchurReport r = verify_schur_bound(k, 1.0, q, kBudget, 2);
      CHECK(r.ratio <= 1.0 + 1e-9);
      CHECK(r.bound == doctest::Approx(std::pow(r.constants.c1.upper, 1.0 / q) *
                                       std::pow(r.constants.c2.upper, 1.0 - 1.0 / q)));
    }
  }

  CHECK_THROWS_AS(verify_schur_bound(OperatorKernel::circulant(z4_taps()), 2.0, 2.0, kBudget, 1), Error);
}

TEST_CASE("scalar Young equality on circulant kernels at q = 1") {
  Rng rng = make_rng(16);
  for (int trial = 0; trial < 8; ++trial) {
    const CVector g = complex_gaussian(rng, 3 + trial, 1);
    for (Real theta : {1.0, 1.5, 2.0, 3.0}) {
      const SchurReport r = verify_schur_bound(OperatorKernel::circulant(g), theta, 1.0, kBudget, 3);
      CHECK(std::abs(r.ratio - 1.0) < 1e-9);
    }
  }
}
