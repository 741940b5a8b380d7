#pragma once

#include <array>
#include <cstdint>

namespace edclust {

// Philox4x32-10 counter-based generator.  Each (seed, stream) pair yields an
// independent sequence; draws depend only on (seed, stream, position), so
// replicate r of a simulation can use stream offsets without coordination
// between threads.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on the open interval (0,1): (k + 0.5) * 2^-53 with k from the
  // top 53 bits, so log() and Box-Muller never see an endpoint.
  double next_double();

  double next_normal();      // standard normal, Box-Muller
  double next_student_t2();  // Student's t with 2 degrees of freedom

  // One keyed block: counter -> four 32-bit words after 10 rounds.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;  // empty
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace edclust
