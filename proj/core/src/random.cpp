#include "textclass/random.hpp"

namespace textclass {

std::uint64_t derive_seed(std::uint64_t base, const std::string& stream_name) {
  // FNV-1a over the stream name folded into the base seed, finished with
  // a splitmix64 round.
  std::uint64_t h = 1469598103934665603ull ^ base;
  for (const unsigned char c : stream_name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h += 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

}  // namespace textclass
