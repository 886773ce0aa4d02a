#pragma once

#include <random>

#include "repnet/tensor.hpp"

namespace repnet {

// Uniform sampling box for relation inputs. Width is blocks*block_dim under
// concat semantics; tensor-semantics relations pass their width explicitly.
struct SampleDomain {
  double low = -1.0;
  double high = 1.0;
  std::size_t blocks = 1;
  std::size_t block_dim = 1;
};

Tensor2 sample(const SampleDomain& d, std::size_t count, std::mt19937_64& rng);
Tensor2 sample_width(const SampleDomain& d, std::size_t count, std::size_t width,
                     std::mt19937_64& rng);

}  // namespace repnet
