#include "junctionlab/phase.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace junctionlab {

namespace {
constexpr int kGridBits = 44;
constexpr std::int64_t kGridSize = std::int64_t{1} << kGridBits;
}  // namespace

double normalize_phase(double phi) {
  if (!std::isfinite(phi)) throw std::invalid_argument("phase must be finite");
  double turns = phi / kTwoPi;
  turns -= std::floor(turns);
  auto idx = static_cast<std::int64_t>(std::llround(std::ldexp(turns, kGridBits)));
  idx %= kGridSize;
  if (idx < 0) idx += kGridSize;
  return std::ldexp(static_cast<double>(idx), -kGridBits) * kTwoPi;
}

}  // namespace junctionlab
