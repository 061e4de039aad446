#ifndef JTM_RANDOM_HPP
#define JTM_RANDOM_HPP

#include <array>
#include <cstdint>

namespace jtm {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Stateless: the output depends only on the counter
/// and the key.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter block(Counter counter, Key key);
};

/// A reproducible random stream identified by (seed, stream id).
///
/// The stream id occupies the upper half of the Philox counter and the draw
/// index the lower half, so stream k always produces the same sequence no
/// matter which worker or in which order it is consumed.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_closed();
  double exponential(double rate);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int position_ = 4;
};

}  // namespace jtm

#endif  // JTM_RANDOM_HPP
