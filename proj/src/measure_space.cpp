#include "opkernel/measure_space.hpp"

#include <cmath>

namespace opkernel {

DiscreteMeasureSpace::DiscreteMeasureSpace(RVector weights) {
  if (weights.size() < 1) throw Error("measure space needs at least one point");
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    if (!(weights(i) > 0.0) || !std::isfinite(weights(i)))
      throw Error("measure weights must be finite and strictly positive");
  weights_ = std::make_shared<const RVector>(std::move(weights));
}

DiscreteMeasureSpace DiscreteMeasureSpace::counting(Eigen::Index n) {
  return DiscreteMeasureSpace(RVector::Ones(n));
}

DiscreteMeasureSpace DiscreteMeasureSpace::uniform(Eigen::Index n, Real weight) {
  return DiscreteMeasureSpace(RVector::Constant(n, weight));
}

bool DiscreteMeasureSpace::operator==(const DiscreteMeasureSpace& other) const {
  return weights_ == other.weights_ || *weights_ == *other.weights_;
}

}  // namespace opkernel
