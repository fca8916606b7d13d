#pragma once

#include <memory>

#include "opkernel/types.hpp"

namespace opkernel {

/// Finite point set with strictly positive weights. Copies share the
/// underlying weight vector; instances are immutable.
class DiscreteMeasureSpace {
 public:
  explicit DiscreteMeasureSpace(RVector weights);

  static DiscreteMeasureSpace counting(Eigen::Index n);
  static DiscreteMeasureSpace uniform(Eigen::Index n, Real weight);

  Eigen::Index size() const { return weights_->size(); }
  const RVector& weights() const { return *weights_; }
  Real weight(Eigen::Index i) const { return (*weights_)(i); }
  Real total_mass() const { return weights_->sum(); }

  bool operator==(const DiscreteMeasureSpace& other) const;

 private:
  std::shared_ptr<const RVector> weights_;
};

}  // namespace opkernel
