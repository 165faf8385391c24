#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace otaclass {

// Philox4x32-10 counter-based block generator (Salmon et al., Random123).
// Stateless: output depends only on (counter, key), which is what makes
// Monte Carlo streams reproducible under any work scheduling.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

// SplitMix64 finalizer, used to derive independent context seeds
// (training set, test set, channel trials) from one user seed.
std::uint64_t splitmix64(std::uint64_t x);

// One logical random stream addressed by a 64-bit key plus a 96-bit stream id.
// Counter layout: word0 = running block index, words 1..3 = (lo, mid, hi) id.
// Distinct ids never share Philox counters, so streams are independent by
// construction and can be handed to concurrent workers without coordination.
//
// Conventions used across the simulator:
//   hi  = sample / frame / lattice index
//   mid = trial index
//   lo  = purpose (node index for phases, or one of the reserved ids below)
class RandomStream {
public:
    static constexpr std::uint32_t kPurposeNoise = 0xFFFFFFFFu;
    static constexpr std::uint32_t kPurposeState = 0xFFFFFFFEu;

    RandomStream(std::uint64_t key, std::uint32_t id_hi, std::uint32_t id_mid,
                 std::uint32_t id_lo) noexcept;

    explicit RandomStream(std::uint64_t key) noexcept : RandomStream(key, 0, 0, 0) {}

    // Uniform on [0, 1) with 53 significant bits.
    double uniform();

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; draws come in pairs, the spare is cached.
    double normal();

    // Proper complex Gaussian with total variance `var` (var/2 per component).
    std::complex<double> complex_normal(double var);

    // Phase uniform on [0, 2*pi).
    double phase();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    double buf_[2];
    int buf_pos_;
    double spare_normal_;
    bool have_spare_;
};

} // namespace otaclass
