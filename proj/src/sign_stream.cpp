#include "herding/sign_stream.hpp"

namespace herding {

std::vector<Sign> signs_from_seed(SignSource source, std::size_t n) {
  std::vector<Sign> out(n);
  fill_signs(source, out);
  return out;
}

void fill_signs(SignSource source, std::vector<Sign>& out) {
  const std::uint64_t key = stream_key(source);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = sign_from_key(key, k);
}

std::vector<Sign> signs_from_index(std::uint64_t index, std::size_t n) {
  std::vector<Sign> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = ((index >> (n - 1 - k)) & 1U) != 0 ? Sign{1} : Sign{-1};
  }
  return out;
}

}  // namespace herding
