#include "repnet/sampling.hpp"

#include <stdexcept>

namespace repnet {

Tensor2 sample_width(const SampleDomain& d, std::size_t count, std::size_t width,
                     std::mt19937_64& rng) {
  if (d.low >= d.high) throw std::invalid_argument("sample: low must be < high");
  if (count < 1) throw std::invalid_argument("sample: count must be positive");
  Tensor2 x(count, width);
  std::uniform_real_distribution<double> dist(d.low, d.high);
  for (double& v : x.data) v = dist(rng);
  return x;
}

Tensor2 sample(const SampleDomain& d, std::size_t count, std::mt19937_64& rng) {
  return sample_width(d, count, d.blocks * d.block_dim, rng);
}

}  // namespace repnet
